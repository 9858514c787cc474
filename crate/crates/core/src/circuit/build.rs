use std::collections::{BTreeMap, HashSet};
use std::fmt;

use super::{Circuit, Gate, GateKind};
use crate::error::{Error, Result};
use crate::grid::{Axis, RegisterLayout, StageOptions, SwapPair};

/// Gates adding `2^p` (mod `2^width`) to a little-endian register when every
/// qubit in `extra_controls` is 1.
///
/// Carry cascade: for `k` from the top bit down to `p`, flip `pos[k]` when
/// `pos[p..k]` are all 1. Emits exactly `width - p` gates.
pub fn build_increment(pos: &[usize], p: usize, extra_controls: &[usize]) -> Result<Vec<Gate>> {
    if p >= pos.len() {
        return Err(Error::IncrementOutOfRange {
            p,
            width: pos.len(),
        });
    }
    let gates = (p..pos.len())
        .rev()
        .map(|k| {
            let controls = pos[p..k].iter().chain(extra_controls).copied().collect();
            Gate::controlled_x(controls, pos[k])
        })
        .collect();
    Ok(gates)
}

/// Hadamards on the axis' translation register, then one controlled
/// `U(2^q)` per translation qubit `q`. Empty when the register is empty.
pub fn build_translation_stage(layout: &RegisterLayout, axis: Axis) -> Result<Vec<Gate>> {
    let t = layout.translation(axis);
    let pos = layout.position(axis);
    let mut gates: Vec<Gate> = t.iter().map(|&q| Gate::H(q)).collect();
    for (q, &ctrl) in t.iter().enumerate() {
        gates.extend(build_increment(pos, q, &[ctrl])?);
    }
    Ok(gates)
}

/// Qubit-wise exchange of two equally wide registers; CSWAPs when a control
/// is given.
pub fn build_coord_swap(reg_a: &[usize], reg_b: &[usize], control: Option<usize>) -> Result<Vec<Gate>> {
    if reg_a.len() != reg_b.len() {
        return Err(Error::WidthMismatch(reg_a.len(), reg_b.len()));
    }
    Ok(reg_a
        .iter()
        .zip(reg_b)
        .map(|(&a, &b)| Gate::swap(control, a, b))
        .collect())
}

/// Counterclockwise 90° rotation about `axis` (viewed from the positive
/// axis): swap the in-plane registers `(a, b)`, then complement `a`, giving
/// `(a, b) -> (L-1-b, a)`.
pub fn build_rotation(layout: &RegisterLayout, axis: Axis, control: Option<usize>) -> Result<Vec<Gate>> {
    let (a, b) = axis.rotation_plane();
    let reg_a = layout.position(a);
    let mut gates = build_coord_swap(reg_a, layout.position(b), control)?;
    gates.extend(reg_a.iter().map(|&q| match control {
        Some(c) => Gate::Cx { control: c, target: q },
        None => Gate::X(q),
    }));
    Ok(gates)
}

fn required(q: Option<usize>, what: impl fmt::Display) -> Result<usize> {
    q.ok_or_else(|| Error::InvalidLayout(format!("layout has no control qubit for {what}")))
}

/// The unified pose circuit. Fixed stage order: controlled swaps (x,y),
/// (y,z), (z,x); controlled rotations about z, y, x; translations along z, y,
/// x. Each stage is preceded by Hadamards on its not-yet-initialized
/// control qubits.
pub fn build_unified(layout: &RegisterLayout, options: &StageOptions) -> Result<Circuit> {
    for axis in Axis::ALL {
        let want = options.t_bits[axis.index()] as usize;
        if layout.translation(axis).len() != want {
            return Err(Error::InvalidLayout(format!(
                "{axis} translation register has {} qubits, options ask for {want}",
                layout.translation(axis).len()
            )));
        }
    }
    let mut circuit = Circuit::new(layout.total_qubits());
    let mut initialized = HashSet::new();

    let mut swaps = Vec::new();
    for pair in SwapPair::ALL.into_iter().filter(|p| options.swaps[p.index()]) {
        let c = required(layout.swap_control(pair), format_args!("swap {pair}"))?;
        let (a, b) = pair.axes();
        swaps.push((c, build_coord_swap(layout.position(a), layout.position(b), Some(c))?));
    }
    for &(c, _) in &swaps {
        if initialized.insert(c) {
            circuit.push(Gate::H(c))?;
        }
    }
    for (_, gates) in swaps {
        circuit.extend(gates)?;
    }

    let mut rots = Vec::new();
    for axis in Axis::ALL.into_iter().filter(|a| options.rots[a.index()]) {
        let c = required(layout.rotation_control(axis), format_args!("rotation about {axis}"))?;
        rots.push((c, build_rotation(layout, axis, Some(c))?));
    }
    for &(c, _) in &rots {
        if initialized.insert(c) {
            circuit.push(Gate::H(c))?;
        }
    }
    for (_, gates) in rots {
        circuit.extend(gates)?;
    }

    for axis in Axis::ALL {
        circuit.extend(build_translation_stage(layout, axis)?)?;
    }
    Ok(circuit)
}

/// Gate tallies for a circuit.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ResourceCounts {
    pub qubits: usize,
    pub total_gates: usize,
    pub by_kind: BTreeMap<GateKind, usize>,
    pub max_mcx_controls: usize,
}

impl ResourceCounts {
    pub fn count(&self, kind: GateKind) -> usize {
        self.by_kind.get(&kind).copied().unwrap_or(0)
    }
}

impl fmt::Display for ResourceCounts {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "qubits {}", self.qubits)?;
        writeln!(f, "gates {}", self.total_gates)?;
        for kind in GateKind::ALL {
            writeln!(f, "{} {}", kind.mnemonic(), self.count(kind))?;
        }
        writeln!(f, "max_mcx_controls {}", self.max_mcx_controls)
    }
}

pub fn resource_counts(circuit: &Circuit) -> ResourceCounts {
    let mut counts = ResourceCounts {
        qubits: circuit.num_qubits(),
        total_gates: circuit.len(),
        ..Default::default()
    };
    for g in circuit.gates() {
        *counts.by_kind.entry(g.kind()).or_default() += 1;
        if g.kind() == GateKind::Mcx {
            counts.max_mcx_controls = counts.max_mcx_controls.max(g.controls().len());
        }
    }
    counts
}
