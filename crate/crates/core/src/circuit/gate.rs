use std::collections::HashSet;
use std::fmt::{self, Write as _};

use crate::error::{parse_err, Error, Result};
use crate::grid::strip_comment;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GateKind {
    H,
    X,
    Cx,
    Mcx,
    Swap,
    Cswap,
}

impl GateKind {
    pub const ALL: [GateKind; 6] = [
        GateKind::H,
        GateKind::X,
        GateKind::Cx,
        GateKind::Mcx,
        GateKind::Swap,
        GateKind::Cswap,
    ];

    pub fn mnemonic(self) -> &'static str {
        match self {
            GateKind::H => "h",
            GateKind::X => "x",
            GateKind::Cx => "cx",
            GateKind::Mcx => "mcx",
            GateKind::Swap => "swap",
            GateKind::Cswap => "cswap",
        }
    }

    /// X, CX and MCX: the carry-cascade gates.
    pub fn is_x_family(self) -> bool {
        matches!(self, GateKind::X | GateKind::Cx | GateKind::Mcx)
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.mnemonic())
    }
}

/// A gate from the fixed set. Everything except `H` permutes computational
/// basis states.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Gate {
    H(usize),
    X(usize),
    Cx { control: usize, target: usize },
    /// At least two controls.
    Mcx { controls: Vec<usize>, target: usize },
    Swap(usize, usize),
    Cswap { control: usize, a: usize, b: usize },
}

impl Gate {
    /// X controlled on every qubit in `controls`, using the narrowest kind.
    pub fn controlled_x(controls: Vec<usize>, target: usize) -> Gate {
        match controls.len() {
            0 => Gate::X(target),
            1 => Gate::Cx {
                control: controls[0],
                target,
            },
            _ => Gate::Mcx { controls, target },
        }
    }

    /// Swap, controlled when `control` is given.
    pub fn swap(control: Option<usize>, a: usize, b: usize) -> Gate {
        match control {
            Some(control) => Gate::Cswap { control, a, b },
            None => Gate::Swap(a, b),
        }
    }

    pub fn kind(&self) -> GateKind {
        match self {
            Gate::H(_) => GateKind::H,
            Gate::X(_) => GateKind::X,
            Gate::Cx { .. } => GateKind::Cx,
            Gate::Mcx { .. } => GateKind::Mcx,
            Gate::Swap(..) => GateKind::Swap,
            Gate::Cswap { .. } => GateKind::Cswap,
        }
    }

    pub fn controls(&self) -> &[usize] {
        match self {
            Gate::H(_) | Gate::X(_) | Gate::Swap(..) => &[],
            Gate::Cx { control, .. } | Gate::Cswap { control, .. } => std::slice::from_ref(control),
            Gate::Mcx { controls, .. } => controls,
        }
    }

    pub fn targets(&self) -> Vec<usize> {
        match *self {
            Gate::H(t) | Gate::X(t) => vec![t],
            Gate::Cx { target, .. } | Gate::Mcx { target, .. } => vec![target],
            Gate::Swap(a, b) | Gate::Cswap { a, b, .. } => vec![a, b],
        }
    }

    /// All qubits touched, controls first.
    pub fn qubits(&self) -> Vec<usize> {
        let mut q = self.controls().to_vec();
        q.extend(self.targets());
        q
    }

    pub fn is_permutation(&self) -> bool {
        !matches!(self, Gate::H(_))
    }

    /// Checks index range, control arity and that no qubit appears twice.
    pub fn validate(&self, num_qubits: usize) -> Result<()> {
        if let Gate::Mcx { controls, .. } = self {
            if controls.len() < 2 {
                return Err(Error::InvalidGate(format!(
                    "mcx needs at least two controls, got {}",
                    controls.len()
                )));
            }
        }
        let qubits = self.qubits();
        let mut seen = HashSet::with_capacity(qubits.len());
        for &q in &qubits {
            if q >= num_qubits {
                return Err(Error::QubitOutOfRange {
                    qubit: q,
                    num_qubits,
                });
            }
            if !seen.insert(q) {
                return Err(Error::InvalidGate(format!("qubit {q} repeated in `{self}`")));
            }
        }
        Ok(())
    }

    /// Image of a basis index under a permutation gate; `None` for `H`.
    pub fn permute(&self, index: u64) -> Option<u64> {
        let bit = |q: usize| index >> q & 1 == 1;
        let out = match self {
            Gate::H(_) => return None,
            Gate::X(t) => index ^ 1 << t,
            Gate::Cx { control, target } => {
                if bit(*control) {
                    index ^ 1 << target
                } else {
                    index
                }
            }
            Gate::Mcx { controls, target } => {
                if controls.iter().all(|&c| bit(c)) {
                    index ^ 1 << target
                } else {
                    index
                }
            }
            Gate::Swap(a, b) => swap_bits(index, *a, *b),
            Gate::Cswap { control, a, b } => {
                if bit(*control) {
                    swap_bits(index, *a, *b)
                } else {
                    index
                }
            }
        };
        Some(out)
    }
}

fn swap_bits(index: u64, a: usize, b: usize) -> u64 {
    if (index >> a ^ index >> b) & 1 == 1 {
        index ^ (1 << a | 1 << b)
    } else {
        index
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.kind().mnemonic())?;
        for q in self.qubits() {
            write!(f, " {q}")?;
        }
        Ok(())
    }
}

/// Ordered gate list on a fixed number of qubits.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Circuit {
    num_qubits: usize,
    gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(num_qubits: usize) -> Self {
        Circuit {
            num_qubits,
            gates: Vec::new(),
        }
    }

    pub fn from_gates(num_qubits: usize, gates: impl IntoIterator<Item = Gate>) -> Result<Self> {
        let mut c = Circuit::new(num_qubits);
        c.extend(gates)?;
        Ok(c)
    }

    pub fn push(&mut self, gate: Gate) -> Result<()> {
        gate.validate(self.num_qubits)?;
        self.gates.push(gate);
        Ok(())
    }

    pub fn extend(&mut self, gates: impl IntoIterator<Item = Gate>) -> Result<()> {
        gates.into_iter().try_for_each(|g| self.push(g))
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    /// Serializes to the line-based circuit format (`qubits <n>` header, one
    /// lowercase gate per line).
    pub fn to_text(&self) -> String {
        let mut out = format!("qubits {}\n", self.num_qubits);
        for g in &self.gates {
            let _ = writeln!(out, "{g}");
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut circuit: Option<Circuit> = None;
        for (n, raw) in text.lines().enumerate() {
            let line = n + 1;
            let fields: Vec<&str> = strip_comment(raw).split_whitespace().collect();
            let Some((&head, args)) = fields.split_first() else {
                continue;
            };
            let Some(c) = circuit.as_mut() else {
                if head != "qubits" || args.len() != 1 {
                    return Err(parse_err(line, "expected `qubits <n>` header"));
                }
                let n = args[0]
                    .parse::<usize>()
                    .map_err(|_| parse_err(line, format!("bad qubit count `{}`", args[0])))?;
                circuit = Some(Circuit::new(n));
                continue;
            };
            let idx: Vec<usize> = args
                .iter()
                .map(|s| {
                    s.parse::<usize>()
                        .map_err(|_| parse_err(line, format!("bad qubit index `{s}`")))
                })
                .collect::<Result<_>>()?;
            let arity = |n: usize| {
                if idx.len() == n {
                    Ok(())
                } else {
                    Err(parse_err(line, format!("`{head}` takes {n} qubits")))
                }
            };
            let gate = match head {
                "h" => arity(1).map(|_| Gate::H(idx[0]))?,
                "x" => arity(1).map(|_| Gate::X(idx[0]))?,
                "cx" => arity(2).map(|_| Gate::Cx {
                    control: idx[0],
                    target: idx[1],
                })?,
                "mcx" => {
                    if idx.len() < 3 {
                        return Err(parse_err(line, "`mcx` takes at least two controls and a target"));
                    }
                    let (target, controls) = idx.split_last().unwrap();
                    Gate::Mcx {
                        controls: controls.to_vec(),
                        target: *target,
                    }
                }
                "swap" => arity(2).map(|_| Gate::Swap(idx[0], idx[1]))?,
                "cswap" => arity(3).map(|_| Gate::Cswap {
                    control: idx[0],
                    a: idx[1],
                    b: idx[2],
                })?,
                other => return Err(parse_err(line, format!("unknown gate `{other}`"))),
            };
            c.push(gate).map_err(|e| parse_err(line, e.to_string()))?;
        }
        circuit.ok_or_else(|| parse_err(0, "missing `qubits` header"))
    }

    /// OpenQASM 2.0 rendering. Two-control MCX becomes `ccx`; wider MCX has no
    /// qelib1 counterpart and is written as an undeclared `mcx` statement
    /// behind a comment, so such programs only run on backends that define it.
    pub fn to_qasm(&self) -> String {
        let mut out = String::from("OPENQASM 2.0;\ninclude \"qelib1.inc\";\n");
        let widest_mcx = self
            .gates
            .iter()
            .filter_map(|g| match g {
                Gate::Mcx { controls, .. } => Some(controls.len()),
                _ => None,
            })
            .max()
            .filter(|&k| k > 2);
        if let Some(k) = widest_mcx {
            out.push_str("// mcx: multi-controlled X (controls..., target); not part of qelib1\n");
            let _ = writeln!(out, "// widest mcx has {k} controls");
        }
        let _ = writeln!(out, "qreg q[{}];", self.num_qubits);
        for g in &self.gates {
            let name = match g.kind() {
                GateKind::Mcx if g.controls().len() == 2 => "ccx",
                k => k.mnemonic(),
            };
            let args: Vec<String> = g.qubits().iter().map(|q| format!("q[{q}]")).collect();
            let _ = writeln!(out, "{name} {};", args.join(","));
        }
        out
    }
}
