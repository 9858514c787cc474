//! Discretized ligand lattices, their qubit register layouts, and the
//! amplitude encoding that moves grids in and out of simulator states.
//!
//! Coordinates are always ordered `(z, y, x)`; each coordinate is stored in a
//! position register of `bits_*` qubits, least-significant qubit first.

mod codec;
mod layout;

pub(crate) use codec::decode_branches;
pub use codec::{decode_state, encode_state, BRANCH_NORM_TOLERANCE, DECODE_ZERO};
pub use layout::{Axis, ControlSetting, RegisterLayout, StageOptions, SwapPair, MAX_QUBITS};

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::error::{parse_err, Error, Result};

/// Largest register width accepted for a single lattice axis.
pub const MAX_AXIS_BITS: u32 = 16;

/// Lattice dimensions and placement.
///
/// Side lengths are `2^bits_z`, `2^bits_y`, `2^bits_x`. `cell_length` and
/// `origin` are only consulted by rasterization; `origin` is Cartesian
/// `(x, y, z)` like atom positions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub bits_z: u32,
    pub bits_y: u32,
    pub bits_x: u32,
    pub cell_length: f64,
    pub origin: [f64; 3],
}

impl GridSpec {
    pub fn new(bits_z: u32, bits_y: u32, bits_x: u32, cell_length: f64) -> Result<Self> {
        let spec = GridSpec {
            bits_z,
            bits_y,
            bits_x,
            cell_length,
            origin: [0.0; 3],
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Cubic lattice with `bits` qubits per axis and unit cells.
    pub fn cubic(bits: u32) -> Result<Self> {
        Self::new(bits, bits, bits, 1.0)
    }

    pub fn with_origin(mut self, origin: [f64; 3]) -> Self {
        self.origin = origin;
        self
    }

    pub fn validate(&self) -> Result<()> {
        for axis in Axis::ALL {
            if self.bits(axis) > MAX_AXIS_BITS {
                return Err(Error::InvalidSpec(format!(
                    "{axis} register width {} exceeds {MAX_AXIS_BITS}",
                    self.bits(axis)
                )));
            }
        }
        if !(self.cell_length.is_finite() && self.cell_length > 0.0) {
            return Err(Error::InvalidSpec(format!(
                "cell length must be positive, got {}",
                self.cell_length
            )));
        }
        if self.origin.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidSpec("origin must be finite".into()));
        }
        Ok(())
    }

    pub fn bits(&self, axis: Axis) -> u32 {
        match axis {
            Axis::Z => self.bits_z,
            Axis::Y => self.bits_y,
            Axis::X => self.bits_x,
        }
    }

    pub fn side(&self, axis: Axis) -> u64 {
        1u64 << self.bits(axis)
    }

    /// Number of qubits needed by the three position registers.
    pub fn position_qubits(&self) -> usize {
        (self.bits_z + self.bits_y + self.bits_x) as usize
    }

    /// Same lattice dimensions, ignoring placement.
    pub fn same_lattice(&self, other: &GridSpec) -> bool {
        self.bits_z == other.bits_z && self.bits_y == other.bits_y && self.bits_x == other.bits_x
    }

    pub fn contains(&self, cell: Cell) -> bool {
        Axis::ALL
            .iter()
            .all(|&a| u64::from(cell.get(a)) < self.side(a))
    }
}

/// Lattice coordinate; ordering is lexicographic in `(z, y, x)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cell {
    pub z: u32,
    pub y: u32,
    pub x: u32,
}

impl Cell {
    pub const fn new(z: u32, y: u32, x: u32) -> Self {
        Cell { z, y, x }
    }

    pub fn get(&self, axis: Axis) -> u32 {
        match axis {
            Axis::Z => self.z,
            Axis::Y => self.y,
            Axis::X => self.x,
        }
    }

    pub fn set(&mut self, axis: Axis, value: u32) {
        match axis {
            Axis::Z => self.z = value,
            Axis::Y => self.y = value,
            Axis::X => self.x = value,
        }
    }
}

/// Weighted voxel map of a ligand. Weights are signed (occupancy or charge);
/// exact zeros are not stored.
#[derive(Debug, Clone, PartialEq)]
pub struct OccupancyGrid {
    spec: GridSpec,
    cells: BTreeMap<Cell, f64>,
}

impl OccupancyGrid {
    pub fn new(spec: GridSpec) -> Self {
        OccupancyGrid {
            spec,
            cells: BTreeMap::new(),
        }
    }

    /// Builds a grid from `(cell, weight)` pairs, rejecting duplicates and
    /// out-of-range coordinates.
    pub fn from_cells<I>(spec: GridSpec, cells: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Cell, f64)>,
    {
        let mut grid = OccupancyGrid::new(spec);
        for (cell, weight) in cells {
            grid.insert(cell, weight)?;
        }
        Ok(grid)
    }

    pub fn insert(&mut self, cell: Cell, weight: f64) -> Result<()> {
        self.check_range(cell)?;
        if !weight.is_finite() {
            return Err(Error::InvalidInput(format!(
                "weight of cell {cell:?} is not finite"
            )));
        }
        if self.cells.contains_key(&cell) {
            return Err(Error::DuplicateCell {
                z: cell.z,
                y: cell.y,
                x: cell.x,
            });
        }
        if weight != 0.0 {
            self.cells.insert(cell, weight);
        }
        Ok(())
    }

    /// Adds `weight` to a cell, creating it if needed.
    pub fn accumulate(&mut self, cell: Cell, weight: f64) -> Result<()> {
        self.check_range(cell)?;
        let slot = self.cells.entry(cell).or_insert(0.0);
        *slot += weight;
        if *slot == 0.0 {
            self.cells.remove(&cell);
        }
        Ok(())
    }

    fn check_range(&self, cell: Cell) -> Result<()> {
        if self.spec.contains(cell) {
            Ok(())
        } else {
            Err(Error::CellOutOfRange {
                z: cell.z,
                y: cell.y,
                x: cell.x,
                side_z: self.spec.side(Axis::Z),
                side_y: self.spec.side(Axis::Y),
                side_x: self.spec.side(Axis::X),
            })
        }
    }

    pub fn spec(&self) -> &GridSpec {
        &self.spec
    }

    pub fn weight(&self, cell: Cell) -> f64 {
        self.cells.get(&cell).copied().unwrap_or(0.0)
    }

    pub fn cells(&self) -> impl ExactSizeIterator<Item = (Cell, f64)> + '_ {
        self.cells.iter().map(|(&c, &w)| (c, w))
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn max_abs_weight(&self) -> f64 {
        self.cells.values().fold(0.0, |m, w| m.max(w.abs()))
    }

    pub fn l2_norm(&self) -> f64 {
        self.cells.values().map(|w| w * w).sum::<f64>().sqrt()
    }

    /// Weights sorted ascending; two grids related by a coordinate
    /// permutation have equal multisets.
    pub fn sorted_weights(&self) -> Vec<f64> {
        let mut w: Vec<f64> = self.cells.values().copied().collect();
        w.sort_by(f64::total_cmp);
        w
    }

    /// Largest absolute weight difference over the union of occupied cells.
    pub fn max_deviation(&self, other: &OccupancyGrid) -> f64 {
        let mut dev: f64 = 0.0;
        for (c, w) in self.cells() {
            dev = dev.max((w - other.weight(c)).abs());
        }
        for (c, w) in other.cells() {
            if !self.cells.contains_key(&c) {
                dev = dev.max(w.abs());
            }
        }
        dev
    }

    /// Exact identity key (cells and weight bit patterns) for deduplication.
    pub(crate) fn fingerprint(&self) -> Vec<(Cell, u64)> {
        self.cells.iter().map(|(&c, w)| (c, w.to_bits())).collect()
    }

    /// Applies a coordinate map to every cell, keeping weights.
    pub(crate) fn map_cells(&self, spec: GridSpec, mut f: impl FnMut(Cell) -> Cell) -> Self {
        let cells = self.cells.iter().map(|(&c, &w)| (f(c), w)).collect();
        OccupancyGrid { spec, cells }
    }

    /// Writes only the `<z> <y> <x> <weight>` lines.
    pub fn write_cells(&self, out: &mut String) {
        for (c, w) in self.cells() {
            let _ = writeln!(out, "{} {} {} {}", c.z, c.y, c.x, w);
        }
    }

    /// Serializes to the line-based grid file format.
    pub fn to_text(&self) -> String {
        let mut out = header_line(&self.spec);
        out.push('\n');
        self.write_cells(&mut out);
        out
    }

    /// Parses the grid file format: a `grid <bz> <by> <bx> <cell_length>`
    /// header followed by `<z> <y> <x> <weight>` lines; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self> {
        let mut grid: Option<OccupancyGrid> = None;
        for (n, raw) in text.lines().enumerate() {
            let line_no = n + 1;
            let fields: Vec<&str> = strip_comment(raw).split_whitespace().collect();
            if fields.is_empty() {
                continue;
            }
            match grid.as_mut() {
                None => grid = Some(OccupancyGrid::new(parse_header(&fields, line_no)?)),
                Some(g) => {
                    let (cell, weight) = parse_cell_line(&fields, line_no)?;
                    g.insert(cell, weight).map_err(|e| parse_err(line_no, e.to_string()))?;
                }
            }
        }
        grid.ok_or_else(|| parse_err(0, "missing `grid` header"))
    }
}

pub(crate) fn header_line(spec: &GridSpec) -> String {
    format!(
        "grid {} {} {} {}",
        spec.bits_z, spec.bits_y, spec.bits_x, spec.cell_length
    )
}

pub(crate) fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    }
}

pub(crate) fn parse_header(fields: &[&str], line: usize) -> Result<GridSpec> {
    if fields.len() != 5 || fields[0] != "grid" {
        return Err(parse_err(
            line,
            "expected `grid <bits_z> <bits_y> <bits_x> <cell_length>`",
        ));
    }
    let bits = |s: &str| {
        s.parse::<u32>()
            .map_err(|_| parse_err(line, format!("bad register width `{s}`")))
    };
    let cell_length: f64 = fields[4]
        .parse()
        .map_err(|_| parse_err(line, format!("bad cell length `{}`", fields[4])))?;
    GridSpec::new(bits(fields[1])?, bits(fields[2])?, bits(fields[3])?, cell_length)
        .map_err(|e| parse_err(line, e.to_string()))
}

pub(crate) fn parse_cell_line(fields: &[&str], line: usize) -> Result<(Cell, f64)> {
    if fields.len() != 4 {
        return Err(parse_err(line, "expected `<z> <y> <x> <weight>`"));
    }
    let coord = |s: &str| {
        s.parse::<u32>()
            .map_err(|_| parse_err(line, format!("bad coordinate `{s}`")))
    };
    let weight: f64 = fields[3]
        .parse()
        .map_err(|_| parse_err(line, format!("bad weight `{}`", fields[3])))?;
    Ok((
        Cell::new(coord(fields[0])?, coord(fields[1])?, coord(fields[2])?),
        weight,
    ))
}
