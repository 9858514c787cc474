//! Fixtures shared by the benchmarks.

use qposes_core::{Cell, GridSpec, OccupancyGrid, RegisterLayout, StageOptions};

/// Asymmetric L-shaped ligand of `cells` cells on a cubic lattice.
pub fn l_ligand(bits: u32, cells: u32) -> OccupancyGrid {
    let spec = GridSpec::cubic(bits).expect("valid lattice");
    let side = 1u32 << bits;
    let coords = (0..cells).map(|i| {
        let x = i % side;
        let y = (i / side) % side;
        (Cell::new(0, y, x), 1.0 + f64::from(i) * 0.25)
    });
    OccupancyGrid::from_cells(spec, coords).expect("cells fit the lattice")
}

/// Every stage enabled with `m` translation qubits per axis.
pub fn full_options(m: u32) -> StageOptions {
    StageOptions::translations(m, m, m).all_swaps().all_rotations()
}

pub fn layout_for(grid: &OccupancyGrid, options: &StageOptions) -> RegisterLayout {
    RegisterLayout::new(*grid.spec(), options).expect("layout fits")
}
