//! Exact simulation of the restricted gate set on sparse amplitude maps.
//!
//! Permutation gates relabel basis indices; only `H` changes the number of
//! stored terms. A pose superposition over `B` branches of a `C`-cell ligand
//! therefore never holds more than `B * C` terms, regardless of qubit count.

mod dense;

pub use dense::{dense_check, DENSE_MAX_QUBITS};

use std::collections::HashMap;
use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt::Write as _;

use num_complex::Complex64;

use crate::circuit::{Circuit, Gate};
use crate::error::{parse_err, Error, Result};
use crate::grid::{strip_comment, MAX_QUBITS};

/// Amplitudes with smaller magnitude are dropped.
pub const PRUNE_THRESHOLD: f64 = 1e-14;
/// Allowed drift of the squared norm from 1.
pub const NORM_TOLERANCE: f64 = 1e-12;

/// State vector stored as a map from basis index to amplitude.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseState {
    num_qubits: usize,
    terms: HashMap<u64, Complex64>,
}

fn check_width(num_qubits: usize) -> Result<()> {
    if num_qubits > MAX_QUBITS {
        Err(Error::TooManyQubits {
            requested: num_qubits,
            limit: MAX_QUBITS,
        })
    } else {
        Ok(())
    }
}

fn check_index(num_qubits: usize, index: u64) -> Result<()> {
    if index >> num_qubits != 0 {
        Err(Error::InvalidInput(format!(
            "basis index {index} needs more than {num_qubits} qubits"
        )))
    } else {
        Ok(())
    }
}

impl SparseState {
    /// The computational basis state `|index>`.
    pub fn basis(num_qubits: usize, index: u64) -> Result<Self> {
        check_width(num_qubits)?;
        check_index(num_qubits, index)?;
        Ok(SparseState {
            num_qubits,
            terms: HashMap::from([(index, Complex64::new(1.0, 0.0))]),
        })
    }

    /// Builds a state from `(index, amplitude)` pairs. Repeated indices are
    /// summed; the result must be normalized within [`NORM_TOLERANCE`].
    pub fn from_amplitudes<I>(num_qubits: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (u64, Complex64)>,
    {
        check_width(num_qubits)?;
        let mut map: HashMap<u64, Complex64> = HashMap::new();
        for (index, amp) in terms {
            check_index(num_qubits, index)?;
            if !(amp.re.is_finite() && amp.im.is_finite()) {
                return Err(Error::InvalidInput(format!(
                    "amplitude of |{index}> is not finite"
                )));
            }
            *map.entry(index).or_default() += amp;
        }
        let state = Self::from_map_pruned(num_qubits, map);
        let n = state.norm_sqr();
        if (n - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::NotNormalized(n));
        }
        Ok(state)
    }

    pub(crate) fn from_map_pruned(num_qubits: usize, mut terms: HashMap<u64, Complex64>) -> Self {
        terms.retain(|_, a| a.norm() >= PRUNE_THRESHOLD);
        SparseState { num_qubits, terms }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    /// Number of stored (nonzero) amplitudes.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn amplitude(&self, index: u64) -> Complex64 {
        self.terms.get(&index).copied().unwrap_or_default()
    }

    /// Terms in unspecified order.
    pub fn terms(&self) -> impl Iterator<Item = (u64, Complex64)> + '_ {
        self.terms.iter().map(|(&i, &a)| (i, a))
    }

    /// Terms in ascending basis-index order.
    pub fn sorted_terms(&self) -> Vec<(u64, Complex64)> {
        let mut t: Vec<_> = self.terms().collect();
        t.sort_unstable_by_key(|&(i, _)| i);
        t
    }

    pub fn norm_sqr(&self) -> f64 {
        self.terms.values().map(|a| a.norm_sqr()).sum()
    }

    /// Largest per-amplitude difference over the union of supports.
    pub fn max_abs_diff(&self, other: &SparseState) -> f64 {
        let mut d: f64 = 0.0;
        for (i, a) in self.terms() {
            d = d.max((a - other.amplitude(i)).norm());
        }
        for (i, a) in other.terms() {
            if !self.terms.contains_key(&i) {
                d = d.max(a.norm());
            }
        }
        d
    }

    pub fn apply_gate(&self, gate: &Gate) -> Result<SparseState> {
        let mut next = self.clone();
        next.apply_in_place(gate)?;
        Ok(next)
    }

    pub fn apply_in_place(&mut self, gate: &Gate) -> Result<()> {
        gate.validate(self.num_qubits)?;
        match *gate {
            Gate::H(q) => self.hadamard(q),
            _ => {
                let kernel = Kernel::new(gate);
                if kernel.is_noop_on(&self.terms) {
                    return Ok(());
                }
                self.terms = self
                    .terms
                    .drain()
                    .map(|(i, a)| (kernel.apply(i), a))
                    .collect();
            }
        }
        Ok(())
    }

    fn hadamard(&mut self, q: usize) {
        let bit = 1u64 << q;
        let s = FRAC_1_SQRT_2;
        let mut next: HashMap<u64, Complex64> = HashMap::with_capacity(self.terms.len() * 2);
        for (&i, &a) in &self.terms {
            let a = a * s;
            *next.entry(i & !bit).or_default() += a;
            *next.entry(i | bit).or_default() += if i & bit == 0 { a } else { -a };
        }
        next.retain(|_, a| a.norm() >= PRUNE_THRESHOLD);
        self.terms = next;
    }

    /// State dump: `state <n>` header, then `<index> <re> <im>` per term in
    /// ascending index order with 17 significant digits.
    pub fn to_text(&self) -> String {
        let mut out = format!("state {}\n", self.num_qubits);
        for (i, a) in self.sorted_terms() {
            // `+ 0.0` folds negative zero
            let _ = writeln!(out, "{i} {:.16e} {:.16e}", a.re + 0.0, a.im + 0.0);
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut num_qubits = None;
        let mut terms = Vec::new();
        for (n, raw) in text.lines().enumerate() {
            let line = n + 1;
            let f: Vec<&str> = strip_comment(raw).split_whitespace().collect();
            if f.is_empty() {
                continue;
            }
            match num_qubits {
                None => {
                    if f.len() != 2 || f[0] != "state" {
                        return Err(parse_err(line, "expected `state <num_qubits>` header"));
                    }
                    num_qubits = Some(
                        f[1].parse::<usize>()
                            .map_err(|_| parse_err(line, format!("bad qubit count `{}`", f[1])))?,
                    );
                }
                Some(_) => {
                    if f.len() != 3 {
                        return Err(parse_err(line, "expected `<index> <re> <im>`"));
                    }
                    let index = f[0]
                        .parse::<u64>()
                        .map_err(|_| parse_err(line, format!("bad basis index `{}`", f[0])))?;
                    let re = f[1]
                        .parse::<f64>()
                        .map_err(|_| parse_err(line, format!("bad real part `{}`", f[1])))?;
                    let im = f[2]
                        .parse::<f64>()
                        .map_err(|_| parse_err(line, format!("bad imaginary part `{}`", f[2])))?;
                    terms.push((index, Complex64::new(re, im)));
                }
            }
        }
        let num_qubits = num_qubits.ok_or_else(|| parse_err(0, "missing `state` header"))?;
        Self::from_amplitudes(num_qubits, terms)
    }
}

/// Mask form of a permutation gate: when every bit of `controls` is set,
/// either flip `flip` or exchange bits `a` and `b`.
struct Kernel {
    controls: u64,
    op: KernelOp,
}

enum KernelOp {
    Flip(u64),
    Exchange(u64, u64),
}

impl Kernel {
    fn new(gate: &Gate) -> Self {
        let controls = gate.controls().iter().fold(0u64, |m, &c| m | 1 << c);
        let op = match *gate {
            Gate::X(t) | Gate::Cx { target: t, .. } | Gate::Mcx { target: t, .. } => {
                KernelOp::Flip(1 << t)
            }
            Gate::Swap(a, b) | Gate::Cswap { a, b, .. } => KernelOp::Exchange(1 << a, 1 << b),
            Gate::H(_) => unreachable!("hadamard has no permutation kernel"),
        };
        Kernel { controls, op }
    }

    #[inline]
    fn apply(&self, i: u64) -> u64 {
        if i & self.controls != self.controls {
            return i;
        }
        match self.op {
            KernelOp::Flip(t) => i ^ t,
            KernelOp::Exchange(a, b) => {
                if (i & a == 0) != (i & b == 0) {
                    i ^ (a | b)
                } else {
                    i
                }
            }
        }
    }

    /// Cheap early exit for gates whose controls are never all set.
    fn is_noop_on(&self, terms: &HashMap<u64, Complex64>) -> bool {
        self.controls != 0 && terms.keys().all(|&i| i & self.controls != self.controls)
    }
}

/// Applies the circuit left to right to a copy of `initial`.
pub fn run(circuit: &Circuit, initial: &SparseState) -> Result<SparseState> {
    if circuit.num_qubits() != initial.num_qubits() {
        return Err(Error::InvalidInput(format!(
            "circuit has {} qubits, state has {}",
            circuit.num_qubits(),
            initial.num_qubits()
        )));
    }
    let mut state = initial.clone();
    for g in circuit.gates() {
        state.apply_in_place(g)?;
    }
    Ok(state)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn x_flips_bit() {
        let s = SparseState::basis(1, 0).unwrap().apply_gate(&Gate::X(0)).unwrap();
        assert_eq!(s.sorted_terms(), vec![(1, c(1.0))]);
    }

    #[test]
    fn hadamard_column() {
        let s = SparseState::basis(1, 0).unwrap().apply_gate(&Gate::H(0)).unwrap();
        let t = s.sorted_terms();
        assert_eq!(t.len(), 2);
        assert!((t[0].1 - c(FRAC_1_SQRT_2)).norm() < 1e-15);
        assert!((t[1].1 - c(FRAC_1_SQRT_2)).norm() < 1e-15);
        let minus = SparseState::basis(1, 1).unwrap().apply_gate(&Gate::H(0)).unwrap();
        assert!((minus.amplitude(1) + c(FRAC_1_SQRT_2)).norm() < 1e-15);
    }

    #[test]
    fn interference_prunes_terms() {
        let s = SparseState::basis(2, 0).unwrap();
        let s = s.apply_gate(&Gate::H(1)).unwrap().apply_gate(&Gate::H(1)).unwrap();
        assert_eq!(s.len(), 1);
        assert!((s.amplitude(0) - c(1.0)).norm() < 1e-15);
    }

    #[test]
    fn gate_validation_propagates() {
        let s = SparseState::basis(2, 0).unwrap();
        assert!(matches!(s.apply_gate(&Gate::X(2)), Err(Error::QubitOutOfRange { .. })));
        let mismatched = Circuit::new(3);
        assert!(run(&mismatched, &s).is_err());
    }

    #[test]
    fn construction_checks() {
        assert!(SparseState::basis(49, 0).is_err());
        assert!(SparseState::basis(2, 4).is_err());
        assert!(matches!(
            SparseState::from_amplitudes(2, [(0, c(0.5))]),
            Err(Error::NotNormalized(_))
        ));
        let s = SparseState::from_amplitudes(2, [(0, c(0.6)), (3, c(0.8)), (1, c(1e-16))]).unwrap();
        assert_eq!(s.len(), 2);
    }

    #[test]
    fn empty_circuit_is_identity() {
        let s = SparseState::from_amplitudes(3, [(1, c(0.6)), (6, Complex64::new(0.0, 0.8))]).unwrap();
        assert_eq!(run(&Circuit::new(3), &s).unwrap(), s);
    }

    #[test]
    fn dump_round_trip_is_exact() {
        let s = SparseState::from_amplitudes(
            4,
            [(9, c(FRAC_1_SQRT_2)), (2, Complex64::new(0.0, -FRAC_1_SQRT_2))],
        )
        .unwrap();
        let text = s.to_text();
        assert!(text.starts_with("state 4\n2 0.0000000000000000e0 -7.0710678118654757e-1\n"));
        let back = SparseState::parse(&text).unwrap();
        assert_eq!(back, s);
        assert!(SparseState::parse("2 1 0\n").is_err());
        assert!(SparseState::parse("state 1\n0 1\n").is_err());
    }

    fn arb_state(n: usize) -> impl Strategy<Value = SparseState> {
        prop::collection::btree_map(0..(1u64 << n), (-1.0f64..1.0, -1.0f64..1.0), 1..8).prop_filter_map(
            "nonzero",
            move |m| {
                let norm: f64 = m.values().map(|(r, i)| r * r + i * i).sum::<f64>().sqrt();
                if norm < 1e-3 {
                    return None;
                }
                let terms = m.into_iter().map(|(k, (r, i))| (k, Complex64::new(r, i) / norm));
                SparseState::from_amplitudes(n, terms).ok()
            },
        )
    }

    proptest! {
        #[test]
        fn hadamard_is_involution(s in arb_state(3), q in 0usize..3) {
            let back = s.apply_gate(&Gate::H(q)).unwrap().apply_gate(&Gate::H(q)).unwrap();
            prop_assert!(back.max_abs_diff(&s) < 1e-12);
        }

        #[test]
        fn gates_preserve_norm(s in arb_state(4), q in 0usize..4, r in 0usize..4) {
            let gates = [Gate::H(q), Gate::X(q), Gate::swap(None, q, r)];
            for g in gates.iter().filter(|g| g.validate(4).is_ok()) {
                let out = s.apply_gate(g).unwrap();
                prop_assert!((out.norm_sqr() - 1.0).abs() < NORM_TOLERANCE);
            }
        }

        #[test]
        fn permutations_keep_amplitude_multiset(s in arb_state(4), c in 0usize..4, t in 0usize..4) {
            prop_assume!(c != t);
            let out = s.apply_gate(&Gate::Cx { control: c, target: t }).unwrap();
            let mut a: Vec<u64> = s.terms().map(|(_, a)| a.norm().to_bits()).collect();
            let mut b: Vec<u64> = out.terms().map(|(_, a)| a.norm().to_bits()).collect();
            a.sort_unstable();
            b.sort_unstable();
            prop_assert_eq!(a, b);
        }
    }
}
