//! Classical enumeration of transformed ligand grids.
//!
//! Everything here works on cell coordinates directly and never touches
//! qubit layouts or gates, so it can serve as ground truth for the circuits.

use std::collections::{BTreeMap, HashSet};
use std::fmt::Write as _;

use num_bigint::BigUint;
use rayon::prelude::*;

use crate::error::{parse_err, Error, Result};
use crate::grid::{
    header_line, parse_cell_line, parse_header, strip_comment, Axis, Cell, ControlSetting,
    GridSpec, OccupancyGrid, StageOptions, SwapPair,
};

/// Cyclic shift by `(dz, dy, dx)` cells, wrapping at the lattice edge.
pub fn translate_grid(grid: &OccupancyGrid, dz: u64, dy: u64, dx: u64) -> OccupancyGrid {
    let spec = *grid.spec();
    let shift = |v: u32, d: u64, axis: Axis| ((u64::from(v) + d % spec.side(axis)) % spec.side(axis)) as u32;
    grid.map_cells(spec, |c| Cell {
        z: shift(c.z, dz, Axis::Z),
        y: shift(c.y, dy, Axis::Y),
        x: shift(c.x, dx, Axis::X),
    })
}

fn require_equal(spec: &GridSpec, a: Axis, b: Axis) -> Result<()> {
    let (wa, wb) = (spec.bits(a), spec.bits(b));
    if wa != wb {
        return Err(Error::WidthMismatch(wa as usize, wb as usize));
    }
    Ok(())
}

/// Exchanges the two coordinates of `pair` (reflection across the diagonal).
pub fn swap_axes(grid: &OccupancyGrid, pair: SwapPair) -> Result<OccupancyGrid> {
    let (a, b) = pair.axes();
    require_equal(grid.spec(), a, b)?;
    Ok(grid.map_cells(*grid.spec(), |c| {
        let mut out = c;
        out.set(a, c.get(b));
        out.set(b, c.get(a));
        out
    }))
}

/// Counterclockwise quarter turn about `axis`: in-plane `(a, b)` maps to
/// `(L-1-b, a)`, with planes z:(x,y), y:(z,x), x:(y,z).
pub fn rotate90(grid: &OccupancyGrid, axis: Axis) -> Result<OccupancyGrid> {
    let (a, b) = axis.rotation_plane();
    require_equal(grid.spec(), a, b)?;
    let last = (grid.spec().side(a) - 1) as u32;
    Ok(grid.map_cells(*grid.spec(), |c| {
        let mut out = c;
        out.set(a, last - c.get(b));
        out.set(b, c.get(a));
        out
    }))
}

/// Applies one control setting in the fixed order: swaps (x,y), (y,z),
/// (z,x); rotations about z, y, x; translation.
pub fn apply_setting(grid: &OccupancyGrid, setting: &ControlSetting) -> Result<OccupancyGrid> {
    let mut g = grid.clone();
    for pair in SwapPair::ALL {
        if setting.swaps[pair.index()] {
            g = swap_axes(&g, pair)?;
        }
    }
    for axis in Axis::ALL {
        if setting.rots[axis.index()] {
            g = rotate90(&g, axis)?;
        }
    }
    Ok(translate_grid(&g, setting.dz, setting.dy, setting.dx))
}

#[derive(Clone, Copy)]
enum Slot {
    Swap(usize),
    Rot(usize),
    /// swap index, rotation axis index
    Both(usize, usize),
}

/// Every control setting reachable under `options`, in ascending order.
pub fn control_settings(options: &StageOptions) -> Vec<ControlSetting> {
    let mut slots = Vec::new();
    for pair in SwapPair::ALL.into_iter().filter(|p| options.swaps[p.index()]) {
        slots.push(if options.is_shared(pair) {
            Slot::Both(pair.index(), pair.partner_axis().index())
        } else {
            Slot::Swap(pair.index())
        });
    }
    for axis in Axis::ALL.into_iter().filter(|a| options.rots[a.index()]) {
        if !options.is_shared(SwapPair::normal_to(axis)) {
            slots.push(Slot::Rot(axis.index()));
        }
    }
    let [mz, my, mx] = options.t_bits.map(|m| 1u64 << m);
    let mut out = Vec::with_capacity(((mz * my * mx) as usize) << slots.len());
    for flags in 0u32..1 << slots.len() {
        let mut base = ControlSetting::default();
        for (k, slot) in slots.iter().enumerate() {
            let on = flags >> k & 1 == 1;
            match *slot {
                Slot::Swap(i) => base.swaps[i] = on,
                Slot::Rot(i) => base.rots[i] = on,
                Slot::Both(i, j) => {
                    base.swaps[i] = on;
                    base.rots[j] = on;
                }
            }
        }
        for dz in 0..mz {
            for dy in 0..my {
                for dx in 0..mx {
                    out.push(ControlSetting { dz, dy, dx, ..base });
                }
            }
        }
    }
    out.sort_unstable();
    out
}

/// Ground-truth pose ensemble: one transformed grid per control setting.
#[derive(Debug, Clone, PartialEq)]
pub struct PoseSet {
    source: GridSpec,
    poses: BTreeMap<ControlSetting, OccupancyGrid>,
}

impl PoseSet {
    pub fn new(source: GridSpec, poses: BTreeMap<ControlSetting, OccupancyGrid>) -> Self {
        PoseSet { source, poses }
    }

    pub fn source(&self) -> &GridSpec {
        &self.source
    }

    /// Number of control settings (raw branch count).
    pub fn len(&self) -> usize {
        self.poses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.poses.is_empty()
    }

    pub fn get(&self, setting: &ControlSetting) -> Option<&OccupancyGrid> {
        self.poses.get(setting)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&ControlSetting, &OccupancyGrid)> {
        self.poses.iter()
    }

    pub fn poses(&self) -> &BTreeMap<ControlSetting, OccupancyGrid> {
        &self.poses
    }

    pub fn poses_mut(&mut self) -> &mut BTreeMap<ControlSetting, OccupancyGrid> {
        &mut self.poses
    }

    /// Number of distinct grids; settings that land on the same placement
    /// (e.g. different swap sequences giving one axis permutation) collapse.
    pub fn distinct_count(&self) -> usize {
        self.poses
            .values()
            .map(OccupancyGrid::fingerprint)
            .collect::<HashSet<_>>()
            .len()
    }

    /// Dump format: the source `grid` header, a summary comment, then per
    /// setting a `pose dz=.. dy=.. dx=.. s=bbb r=bbb` line followed by cell
    /// lines.
    pub fn to_text(&self) -> String {
        let mut out = header_line(&self.source);
        let _ = writeln!(
            out,
            "\n# settings={} distinct={}",
            self.len(),
            self.distinct_count()
        );
        for (setting, grid) in &self.poses {
            let _ = writeln!(out, "pose {setting}");
            grid.write_cells(&mut out);
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut source: Option<GridSpec> = None;
        let mut poses = BTreeMap::new();
        let mut current: Option<(ControlSetting, OccupancyGrid)> = None;
        for (n, raw) in text.lines().enumerate() {
            let line = n + 1;
            let f: Vec<&str> = strip_comment(raw).split_whitespace().collect();
            if f.is_empty() {
                continue;
            }
            let Some(spec) = source else {
                source = Some(parse_header(&f, line)?);
                continue;
            };
            if f[0] == "pose" {
                if let Some((k, g)) = current.take() {
                    poses.insert(k, g);
                }
                let setting = parse_pose_header(&f[1..], line)?;
                if poses.contains_key(&setting) {
                    return Err(parse_err(line, format!("duplicate pose {setting}")));
                }
                current = Some((setting, OccupancyGrid::new(spec)));
            } else {
                let Some((_, g)) = current.as_mut() else {
                    return Err(parse_err(line, "cell line before the first `pose` header"));
                };
                let (cell, w) = parse_cell_line(&f, line)?;
                g.insert(cell, w).map_err(|e| parse_err(line, e.to_string()))?;
            }
        }
        if let Some((k, g)) = current {
            poses.insert(k, g);
        }
        let source = source.ok_or_else(|| parse_err(0, "missing `grid` header"))?;
        Ok(PoseSet { source, poses })
    }
}

fn parse_pose_header(fields: &[&str], line: usize) -> Result<ControlSetting> {
    let bad = || parse_err(line, "expected `pose dz=<n> dy=<n> dx=<n> s=<bbb> r=<bbb>`");
    if fields.len() != 5 {
        return Err(bad());
    }
    let value = |k: usize, key: &str| -> Result<&str> {
        fields[k].strip_prefix(key).and_then(|v| v.strip_prefix('=')).ok_or_else(bad)
    };
    let num = |k: usize, key: &str| -> Result<u64> { value(k, key)?.parse().map_err(|_| bad()) };
    let flags = |k: usize, key: &str| -> Result<[bool; 3]> {
        let v = value(k, key)?.as_bytes();
        if v.len() != 3 || v.iter().any(|b| !matches!(b, b'0' | b'1')) {
            return Err(bad());
        }
        Ok([v[0] == b'1', v[1] == b'1', v[2] == b'1'])
    };
    Ok(ControlSetting {
        dz: num(0, "dz")?,
        dy: num(1, "dy")?,
        dx: num(2, "dx")?,
        swaps: flags(3, "s")?,
        rots: flags(4, "r")?,
    })
}

/// Transforms `grid` under every control setting of `options`.
pub fn enumerate_poses(grid: &OccupancyGrid, options: &StageOptions) -> Result<PoseSet> {
    let spec = *grid.spec();
    for axis in Axis::ALL {
        let m = options.t_bits[axis.index()];
        if m > spec.bits(axis) {
            return Err(Error::InvalidInput(format!(
                "{m} translation qubits exceed the {}-bit {axis} axis",
                spec.bits(axis)
            )));
        }
    }
    for pair in SwapPair::ALL.into_iter().filter(|p| options.swaps[p.index()]) {
        let (a, b) = pair.axes();
        require_equal(&spec, a, b)?;
    }
    for axis in Axis::ALL.into_iter().filter(|a| options.rots[a.index()]) {
        let (a, b) = axis.rotation_plane();
        require_equal(&spec, a, b)?;
    }
    let poses = control_settings(options)
        .into_par_iter()
        .map(|s| apply_setting(grid, &s).map(|g| (s, g)))
        .collect::<Result<Vec<_>>>()?;
    Ok(PoseSet {
        source: spec,
        poses: poses.into_iter().collect(),
    })
}

/// Exact product of per-degree-of-freedom value counts.
pub fn count_configurations(resolutions: &[u64]) -> Result<BigUint> {
    if let Some(i) = resolutions.iter().position(|&r| r == 0) {
        return Err(Error::InvalidInput(format!(
            "degree of freedom {i} has zero values"
        )));
    }
    Ok(resolutions.iter().map(|&r| BigUint::from(r)).product())
}

/// Branch count of the unified circuit: `2^(ancilla qubits)`.
pub fn ancilla_configurations(options: &StageOptions) -> BigUint {
    BigUint::from(1u8) << options.ancilla_qubits()
}
