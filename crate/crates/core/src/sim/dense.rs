use std::collections::HashMap;

use num_complex::Complex64;

use super::SparseState;
use crate::circuit::{Circuit, Gate};
use crate::error::{Error, Result};

/// Widest system [`dense_check`] will allocate a full state vector for.
pub const DENSE_MAX_QUBITS: usize = 20;

/// Re-simulates `circuit` on a full `2^n` state vector, independently of the
/// sparse path, and returns the result in sparse form for comparison.
pub fn dense_check(circuit: &Circuit, initial: &SparseState) -> Result<SparseState> {
    let n = circuit.num_qubits();
    if n > DENSE_MAX_QUBITS {
        return Err(Error::TooManyQubits {
            requested: n,
            limit: DENSE_MAX_QUBITS,
        });
    }
    if initial.num_qubits() != n {
        return Err(Error::InvalidInput(format!(
            "circuit has {n} qubits, state has {}",
            initial.num_qubits()
        )));
    }
    let mut psi = vec![Complex64::default(); 1 << n];
    for (i, a) in initial.terms() {
        psi[i as usize] = a;
    }
    for gate in circuit.gates() {
        gate.validate(n)?;
        apply(&mut psi, gate);
    }
    let terms: HashMap<u64, Complex64> = psi
        .into_iter()
        .enumerate()
        .map(|(i, a)| (i as u64, a))
        .collect();
    Ok(SparseState::from_map_pruned(n, terms))
}

fn controls_set(i: usize, controls: &[usize]) -> bool {
    controls.iter().all(|&c| i >> c & 1 == 1)
}

fn apply(psi: &mut [Complex64], gate: &Gate) {
    let dim = psi.len();
    match gate {
        Gate::H(q) => {
            let h = 1usize << q;
            let s = std::f64::consts::FRAC_1_SQRT_2;
            for i in (0..dim).filter(|i| i & h == 0) {
                let (a, b) = (psi[i], psi[i | h]);
                psi[i] = (a + b) * s;
                psi[i | h] = (a - b) * s;
            }
        }
        Gate::X(_) | Gate::Cx { .. } | Gate::Mcx { .. } => {
            let t = 1usize << gate.targets()[0];
            for i in (0..dim).filter(|i| i & t == 0) {
                if controls_set(i, gate.controls()) {
                    psi.swap(i, i | t);
                }
            }
        }
        Gate::Swap(a, b) | Gate::Cswap { a, b, .. } => {
            let (a, b) = (1usize << a, 1usize << b);
            // visit each exchanged pair once, from its |..1_a..0_b..> member
            for i in (0..dim).filter(|i| i & a != 0 && i & b == 0) {
                if controls_set(i, gate.controls()) {
                    psi.swap(i, i ^ a ^ b);
                }
            }
        }
    }
}
