use std::collections::BTreeMap;

use super::{Cell, ControlSetting, OccupancyGrid, RegisterLayout};
use crate::error::{Error, Result};
use crate::sim::SparseState;

/// Amplitudes below this magnitude are treated as zero when decoding.
pub const DECODE_ZERO: f64 = 1e-12;
/// Largest allowed spread of per-branch norms.
pub const BRANCH_NORM_TOLERANCE: f64 = 1e-9;

/// Real-amplitude encoding: each occupied cell becomes a basis state with
/// amplitude `w / ||w||`, all ancillas zero.
pub fn encode_state(grid: &OccupancyGrid, layout: &RegisterLayout) -> Result<SparseState> {
    if !grid.spec().same_lattice(layout.spec()) {
        return Err(Error::InvalidLayout(format!(
            "layout is for a {}x{}x{} lattice, grid is {}x{}x{}",
            layout.spec().bits_z,
            layout.spec().bits_y,
            layout.spec().bits_x,
            grid.spec().bits_z,
            grid.spec().bits_y,
            grid.spec().bits_x,
        )));
    }
    if grid.is_empty() {
        return Err(Error::EmptyGrid);
    }
    let norm = grid.l2_norm();
    let terms = grid
        .cells()
        .map(|(c, w)| (layout.cell_index(c), (w / norm).into()));
    SparseState::from_amplitudes(layout.total_qubits(), terms)
}

/// One ancilla pattern of a decoded state.
#[derive(Debug, Clone)]
pub(crate) struct Branch {
    pub setting: ControlSetting,
    pub grid: OccupancyGrid,
    /// Probability mass carried by the branch before rescaling.
    pub mass: f64,
}

/// Groups nonzero terms by ancilla pattern and rescales each group so its
/// largest absolute weight equals `max_abs_weight`. No uniformity checks.
pub(crate) fn decode_branches(
    state: &SparseState,
    layout: &RegisterLayout,
    max_abs_weight: f64,
) -> Result<Vec<Branch>> {
    if state.num_qubits() != layout.total_qubits() {
        return Err(Error::InvalidLayout(format!(
            "state has {} qubits, layout has {}",
            state.num_qubits(),
            layout.total_qubits()
        )));
    }
    if !(max_abs_weight.is_finite() && max_abs_weight > 0.0) {
        return Err(Error::InvalidInput(format!(
            "target weight scale must be positive, got {max_abs_weight}"
        )));
    }
    let pos_mask = layout.position_mask();
    let assigned = layout.assigned_mask();
    let mut groups: BTreeMap<u64, Vec<(Cell, f64)>> = BTreeMap::new();
    for (index, amp) in state.sorted_terms() {
        if amp.norm() < DECODE_ZERO {
            continue;
        }
        if index & !assigned != 0 {
            return Err(Error::Structural(format!(
                "basis state {index} sets qubits outside the layout"
            )));
        }
        if amp.im.abs() > DECODE_ZERO {
            return Err(Error::Structural(format!(
                "basis state {index} has a complex amplitude {amp}"
            )));
        }
        groups
            .entry(index & !pos_mask)
            .or_default()
            .push((layout.cell_of(index), amp.re));
    }
    if groups.is_empty() {
        return Err(Error::Structural("state has no nonzero amplitude".into()));
    }
    groups
        .into_iter()
        .map(|(pattern, cells)| {
            let mass = cells.iter().map(|(_, a)| a * a).sum();
            let peak = cells.iter().fold(0.0f64, |m, (_, a)| m.max(a.abs()));
            let scale = max_abs_weight / peak;
            let grid = OccupancyGrid::from_cells(
                *layout.spec(),
                cells.into_iter().map(|(c, a)| (c, a * scale)),
            )?;
            Ok(Branch {
                setting: layout.control_setting_of(pattern),
                grid,
                mass,
            })
        })
        .collect()
}

/// Splits a pose superposition into one grid per ancilla pattern.
///
/// Each branch's conditional amplitudes are rescaled so its largest absolute
/// weight equals `max_abs_weight` (normally the source grid's). Branches must
/// carry equal norm and equal cell counts, and every set bit must belong to a
/// register in `layout`; anything else is a structural error.
pub fn decode_state(
    state: &SparseState,
    layout: &RegisterLayout,
    max_abs_weight: f64,
) -> Result<BTreeMap<ControlSetting, OccupancyGrid>> {
    let branches = decode_branches(state, layout, max_abs_weight)?;
    let (lo, hi) = branches.iter().fold((f64::INFINITY, 0.0f64), |(lo, hi), b| {
        let n = b.mass.sqrt();
        (lo.min(n), hi.max(n))
    });
    if hi - lo > BRANCH_NORM_TOLERANCE {
        return Err(Error::Structural(format!(
            "branch norms range over [{lo:e}, {hi:e}]; superposition is not uniform"
        )));
    }
    let cell_count = branches[0].grid.len();
    let mut poses = BTreeMap::new();
    for b in branches {
        if b.grid.len() != cell_count {
            return Err(Error::Structural(format!(
                "branch {} holds {} cells, expected {cell_count}",
                b.setting,
                b.grid.len()
            )));
        }
        poses.insert(b.setting, b.grid);
    }
    Ok(poses)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{build_translation_stage, Circuit, Gate};
    use crate::grid::{Axis, GridSpec, StageOptions};
    use crate::sim::run;
    use num_complex::Complex64;
    use proptest::prelude::*;

    fn layout(bits: u32, opts: &StageOptions) -> RegisterLayout {
        RegisterLayout::new(GridSpec::cubic(bits).unwrap(), opts).unwrap()
    }

    #[test]
    fn single_cell_encodes_to_basis_state() {
        let l = layout(2, &StageOptions::default());
        let g = OccupancyGrid::from_cells(*l.spec(), [(Cell::new(0, 0, 0), 1.0)]).unwrap();
        let s = encode_state(&g, &l).unwrap();
        assert_eq!(s.sorted_terms(), vec![(0, Complex64::new(1.0, 0.0))]);
    }

    #[test]
    fn equal_weights_share_amplitude() {
        let l = layout(2, &StageOptions::default());
        let g = OccupancyGrid::from_cells(
            *l.spec(),
            [(Cell::new(0, 0, 1), 1.0), (Cell::new(3, 0, 0), 1.0)],
        )
        .unwrap();
        let s = encode_state(&g, &l).unwrap();
        for (_, a) in s.terms() {
            assert!((a.re - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
        }
    }

    #[test]
    fn signed_weights_normalize() {
        // ||(1, 2, -2, 4)|| = 5
        let l = layout(2, &StageOptions::default());
        let cells = [
            (Cell::new(0, 0, 0), 1.0),
            (Cell::new(0, 0, 1), 2.0),
            (Cell::new(0, 1, 0), -2.0),
            (Cell::new(1, 0, 0), 4.0),
        ];
        let g = OccupancyGrid::from_cells(*l.spec(), cells).unwrap();
        let s = encode_state(&g, &l).unwrap();
        let expect = [0.2, 0.4, -0.4, 0.8];
        for ((c, _), want) in cells.iter().zip(expect) {
            assert!((s.amplitude(l.cell_index(*c)).re - want).abs() < 1e-15);
        }
        let sum: f64 = expect.iter().map(|a| a * a).sum();
        assert!((sum - 1.0).abs() < 1e-15);
        assert!((s.norm_sqr() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn encode_errors() {
        let l = layout(2, &StageOptions::default());
        let empty = OccupancyGrid::new(*l.spec());
        assert_eq!(encode_state(&empty, &l), Err(Error::EmptyGrid));
        let other = OccupancyGrid::from_cells(GridSpec::cubic(1).unwrap(), [(Cell::new(0, 0, 0), 1.0)]).unwrap();
        assert!(encode_state(&other, &l).is_err());
    }

    #[test]
    fn identity_decode() {
        let l = layout(2, &StageOptions::translations(1, 1, 1));
        let g = OccupancyGrid::from_cells(
            *l.spec(),
            [(Cell::new(1, 2, 3), -3.0), (Cell::new(0, 0, 0), 1.5)],
        )
        .unwrap();
        let poses = decode_state(&encode_state(&g, &l).unwrap(), &l, g.max_abs_weight()).unwrap();
        assert_eq!(poses.len(), 1);
        let (k, v) = poses.iter().next().unwrap();
        assert_eq!(*k, ControlSetting::default());
        assert!(v.max_deviation(&g) < 1e-12);
    }

    #[test]
    fn one_bit_translation_decodes_two_poses() {
        let opts = StageOptions::translations(0, 0, 1);
        let l = layout(2, &opts);
        let g = OccupancyGrid::from_cells(*l.spec(), [(Cell::new(1, 1, 1), 1.0)]).unwrap();
        let c = Circuit::from_gates(l.total_qubits(), build_translation_stage(&l, Axis::X).unwrap()).unwrap();
        let s = run(&c, &encode_state(&g, &l).unwrap()).unwrap();
        let poses = decode_state(&s, &l, 1.0).unwrap();
        let got: Vec<(u64, Cell)> = poses
            .iter()
            .map(|(k, v)| (k.dx, v.cells().next().unwrap().0))
            .collect();
        assert_eq!(got, vec![(0, Cell::new(1, 1, 1)), (1, Cell::new(1, 1, 2))]);
    }

    #[test]
    fn non_uniform_superposition_is_structural() {
        let l = layout(1, &StageOptions::translations(1, 0, 0));
        let s = SparseState::from_amplitudes(
            4,
            [(0, Complex64::new(0.6, 0.0)), (8, Complex64::new(0.8, 0.0))],
        )
        .unwrap();
        assert!(matches!(decode_state(&s, &l, 1.0), Err(Error::Structural(_))));
    }

    #[test]
    fn stray_and_complex_amplitudes_are_structural() {
        let l = layout(1, &StageOptions::default());
        let mut c = Circuit::new(4);
        c.push(Gate::X(3)).unwrap();
        let wide = RegisterLayout::from_parts(
            *l.spec(),
            [vec![0], vec![1], vec![2]],
            Default::default(),
            [None; 3],
            [None; 3],
            4,
        )
        .unwrap();
        let s = run(&c, &SparseState::basis(4, 0).unwrap()).unwrap();
        assert!(matches!(decode_state(&s, &wide, 1.0), Err(Error::Structural(_))));
        let phase = SparseState::from_amplitudes(3, [(0, Complex64::new(0.0, 1.0))]).unwrap();
        assert!(matches!(decode_state(&phase, &l, 1.0), Err(Error::Structural(_))));
    }

    fn arb_grid() -> impl Strategy<Value = OccupancyGrid> {
        (1u32..=3, 1u32..=3, 1u32..=3).prop_flat_map(|(bz, by, bx)| {
            let spec = GridSpec::new(bz, by, bx, 1.0).unwrap();
            let cell = (0..1u32 << bz, 0..1u32 << by, 0..1u32 << bx);
            let weight = prop_oneof![-4.0f64..-0.1, 0.1f64..4.0];
            prop::collection::btree_map(cell, weight, 1..=32).prop_map(move |m| {
                OccupancyGrid::from_cells(spec, m.into_iter().map(|((z, y, x), w)| (Cell::new(z, y, x), w)))
                    .unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn encode_decode_round_trip(g in arb_grid()) {
            let l = RegisterLayout::new(*g.spec(), &StageOptions::default()).unwrap();
            let s = encode_state(&g, &l).unwrap();
            prop_assert!((s.norm_sqr() - 1.0).abs() < 1e-12);
            let poses = decode_state(&s, &l, g.max_abs_weight()).unwrap();
            prop_assert_eq!(poses.len(), 1);
            let back = &poses[&ControlSetting::default()];
            prop_assert_eq!(back.len(), g.len());
            prop_assert!(back.max_deviation(&g) < 1e-12);
        }
    }
}
