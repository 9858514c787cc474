//! Atom lists to occupancy grids.

use crate::error::{parse_err, Error, Result};
use crate::grid::{strip_comment, Axis, Cell, GridSpec, OccupancyGrid};

#[derive(Debug, Clone, PartialEq)]
pub struct AtomRecord {
    pub element: String,
    /// Cartesian `(x, y, z)`.
    pub position: [f64; 3],
    /// Partial charge or unit occupancy.
    pub weight: f64,
}

impl AtomRecord {
    pub fn new(element: impl Into<String>, position: [f64; 3], weight: f64) -> Self {
        AtomRecord {
            element: element.into(),
            position,
            weight,
        }
    }
}

/// Parses `element x y z [weight]` lines (weight defaults to 1.0).
pub fn parse_atoms(text: &str) -> Result<Vec<AtomRecord>> {
    let mut atoms = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = n + 1;
        let f: Vec<&str> = strip_comment(raw).split_whitespace().collect();
        if f.is_empty() {
            continue;
        }
        if !(4..=5).contains(&f.len()) {
            return Err(parse_err(line, "expected `element x y z [weight]`"));
        }
        let num = |s: &str| -> Result<f64> {
            let v: f64 = s
                .parse()
                .map_err(|_| parse_err(line, format!("bad number `{s}`")))?;
            if v.is_finite() {
                Ok(v)
            } else {
                Err(parse_err(line, format!("non-finite value `{s}`")))
            }
        };
        let weight = f.get(4).map_or(Ok(1.0), |s| num(s))?;
        atoms.push(AtomRecord::new(
            f[0],
            [num(f[1])?, num(f[2])?, num(f[3])?],
            weight,
        ));
    }
    Ok(atoms)
}

/// Deposits each atom's weight into its nearest cell.
///
/// Atoms are first shifted so their bounding-box minimum lands on the
/// center of cell 0, i.e. `origin + cell_length / 2` on every axis. Cell
/// centers sit at `origin + (i + 1/2) * cell_length`; a point equidistant
/// from two centers goes to the lower index. Weights in one cell add up.
pub fn rasterize(atoms: &[AtomRecord], spec: &GridSpec) -> Result<OccupancyGrid> {
    spec.validate()?;
    let mut grid = OccupancyGrid::new(*spec);
    if atoms.is_empty() {
        return Ok(grid);
    }
    let mut min = [f64::INFINITY; 3];
    for (i, atom) in atoms.iter().enumerate() {
        if atom.position.iter().any(|c| !c.is_finite()) || !atom.weight.is_finite() {
            return Err(Error::InvalidInput(format!(
                "atom {i} ({}) has non-finite data",
                atom.element
            )));
        }
        for (m, &c) in min.iter_mut().zip(&atom.position) {
            *m = m.min(c);
        }
    }
    // Cartesian order (x, y, z) against lattice axes
    let cart = [Axis::X, Axis::Y, Axis::Z];
    for (i, atom) in atoms.iter().enumerate() {
        let mut cell = Cell::new(0, 0, 0);
        let mut raw = [0i64; 3];
        let mut inside = true;
        for (k, &axis) in cart.iter().enumerate() {
            // offset in cells from the center of cell 0
            let f = (atom.position[k] - min[k]) / spec.cell_length;
            let idx = (f - 0.5).ceil() as i64;
            raw[k] = idx;
            if idx < 0 || idx as u64 >= spec.side(axis) {
                inside = false;
            } else {
                cell.set(axis, idx as u32);
            }
        }
        if !inside {
            return Err(Error::AtomOutsideGrid {
                index: i,
                element: atom.element.clone(),
                cell: [raw[2], raw[1], raw[0]],
            });
        }
        grid.accumulate(cell, atom.weight)?;
    }
    Ok(grid)
}
