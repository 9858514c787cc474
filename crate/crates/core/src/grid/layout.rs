use std::collections::HashSet;
use std::fmt;

use super::GridSpec;
use crate::error::{Error, Result};

/// Widest system a layout may describe; basis indices are `u64` and the
/// simulator caps them at 48 bits.
pub const MAX_QUBITS: usize = 48;

/// Spatial axis. Per-axis arrays in this crate are indexed `[z, y, x]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Axis {
    Z,
    Y,
    X,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::Z, Axis::Y, Axis::X];

    pub fn index(self) -> usize {
        self as usize
    }

    /// In-plane axes `(a, b)` of a 90° rotation about `self`; the rotation
    /// maps `(a, b) -> (L-1-b, a)`.
    pub fn rotation_plane(self) -> (Axis, Axis) {
        match self {
            Axis::Z => (Axis::X, Axis::Y),
            Axis::Y => (Axis::Z, Axis::X),
            Axis::X => (Axis::Y, Axis::Z),
        }
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Axis::Z => "z",
            Axis::Y => "y",
            Axis::X => "x",
        })
    }
}

/// Coordinate pair exchanged by a swap stage. Per-pair arrays are indexed
/// `[(x,y), (y,z), (z,x)]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SwapPair {
    XY,
    YZ,
    ZX,
}

impl SwapPair {
    pub const ALL: [SwapPair; 3] = [SwapPair::XY, SwapPair::YZ, SwapPair::ZX];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn axes(self) -> (Axis, Axis) {
        match self {
            SwapPair::XY => (Axis::X, Axis::Y),
            SwapPair::YZ => (Axis::Y, Axis::Z),
            SwapPair::ZX => (Axis::Z, Axis::X),
        }
    }

    /// Axis normal to the swap plane. Its rotation control also drives this
    /// swap when controls are shared.
    pub fn partner_axis(self) -> Axis {
        match self {
            SwapPair::XY => Axis::Z,
            SwapPair::YZ => Axis::X,
            SwapPair::ZX => Axis::Y,
        }
    }

    /// The swap whose plane is normal to `axis`.
    pub fn normal_to(axis: Axis) -> SwapPair {
        match axis {
            Axis::Z => SwapPair::XY,
            Axis::Y => SwapPair::ZX,
            Axis::X => SwapPair::YZ,
        }
    }
}

impl fmt::Display for SwapPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (a, b) = self.axes();
        write!(f, "({a},{b})")
    }
}

/// Which stages of the unified circuit are enabled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct StageOptions {
    /// Translation register widths `[mz, my, mx]`.
    pub t_bits: [u32; 3],
    /// Enabled coordinate swaps, indexed by [`SwapPair`].
    pub swaps: [bool; 3],
    /// Enabled 90° rotations, indexed by [`Axis`].
    pub rots: [bool; 3],
    /// Drive each swap and the rotation about its plane normal from one
    /// qubit when both are enabled.
    pub shared_controls: bool,
}

impl StageOptions {
    pub fn translations(mz: u32, my: u32, mx: u32) -> Self {
        StageOptions {
            t_bits: [mz, my, mx],
            ..Default::default()
        }
    }

    pub fn all_swaps(mut self) -> Self {
        self.swaps = [true; 3];
        self
    }

    pub fn all_rotations(mut self) -> Self {
        self.rots = [true; 3];
        self
    }

    pub fn shared(mut self) -> Self {
        self.shared_controls = true;
        self
    }

    /// True when `pair` and the rotation about its normal use one control.
    pub fn is_shared(&self, pair: SwapPair) -> bool {
        self.shared_controls && self.swaps[pair.index()] && self.rots[pair.partner_axis().index()]
    }

    /// Number of symmetry control qubits (swap and rotation).
    pub fn symmetry_qubits(&self) -> usize {
        let enabled = self.swaps.iter().chain(&self.rots).filter(|&&b| b).count();
        enabled - SwapPair::ALL.into_iter().filter(|&p| self.is_shared(p)).count()
    }

    /// Total Hadamard-initialized ancillas; the branch count is `2^this`.
    pub fn ancilla_qubits(&self) -> usize {
        self.t_bits.iter().map(|&m| m as usize).sum::<usize>() + self.symmetry_qubits()
    }
}

/// Assignment of qubit indices to position, translation and control
/// registers. Registers are least-significant qubit first.
#[derive(Debug, Clone, PartialEq)]
pub struct RegisterLayout {
    spec: GridSpec,
    pos: [Vec<usize>; 3],
    trans: [Vec<usize>; 3],
    swap_controls: [Option<usize>; 3],
    rot_controls: [Option<usize>; 3],
    total_qubits: usize,
}

impl RegisterLayout {
    /// Standard packing: from the least significant qubit upward
    /// `z, y, x` position registers, then `t_z, t_y, t_x`, then the enabled
    /// swap controls in pair order, then the remaining rotation controls in
    /// axis order.
    pub fn new(spec: GridSpec, options: &StageOptions) -> Result<Self> {
        spec.validate()?;
        let mut next = 0usize;
        let mut take = |n: usize| -> Vec<usize> {
            let r: Vec<usize> = (next..next + n).collect();
            next += n;
            r
        };
        let pos = Axis::ALL.map(|a| take(spec.bits(a) as usize));
        let trans = [0, 1, 2].map(|i| take(options.t_bits[i] as usize));
        let mut swap_controls = [None; 3];
        for (i, slot) in swap_controls.iter_mut().enumerate() {
            if options.swaps[i] {
                *slot = Some(take(1)[0]);
            }
        }
        let mut rot_controls = [None; 3];
        for (i, slot) in rot_controls.iter_mut().enumerate() {
            if options.rots[i] {
                let pair = SwapPair::normal_to(Axis::ALL[i]);
                *slot = if options.is_shared(pair) {
                    swap_controls[pair.index()]
                } else {
                    Some(take(1)[0])
                };
            }
        }
        Self::from_parts(spec, pos, trans, swap_controls, rot_controls, next)
    }

    /// Position registers in standard packing on a wider system whose other
    /// qubits carry no meaning for decoding (they are expected to stay 0).
    pub fn padded(spec: GridSpec, total_qubits: usize) -> Result<Self> {
        let base = Self::new(spec, &StageOptions::default())?;
        Self::from_parts(spec, base.pos, base.trans, [None; 3], [None; 3], total_qubits)
    }

    /// Custom placement. Validates widths and index uniqueness; a swap and
    /// a rotation control may share a qubit only with the swap in the plane
    /// normal to its axis.
    pub fn from_parts(
        spec: GridSpec,
        pos: [Vec<usize>; 3],
        trans: [Vec<usize>; 3],
        swap_controls: [Option<usize>; 3],
        rot_controls: [Option<usize>; 3],
        total_qubits: usize,
    ) -> Result<Self> {
        spec.validate()?;
        if total_qubits > MAX_QUBITS {
            return Err(Error::TooManyQubits {
                requested: total_qubits,
                limit: MAX_QUBITS,
            });
        }
        for axis in Axis::ALL {
            let i = axis.index();
            if pos[i].len() != spec.bits(axis) as usize {
                return Err(Error::InvalidLayout(format!(
                    "{axis} position register has {} qubits, grid needs {}",
                    pos[i].len(),
                    spec.bits(axis)
                )));
            }
            if trans[i].len() > pos[i].len() {
                return Err(Error::InvalidLayout(format!(
                    "{axis} translation register ({} qubits) is wider than its position register ({})",
                    trans[i].len(),
                    pos[i].len()
                )));
            }
        }
        let mut seen = HashSet::new();
        let mut claim = |q: usize| -> Result<()> {
            if q >= total_qubits {
                return Err(Error::QubitOutOfRange {
                    qubit: q,
                    num_qubits: total_qubits,
                });
            }
            if !seen.insert(q) {
                return Err(Error::InvalidLayout(format!("qubit {q} assigned twice")));
            }
            Ok(())
        };
        for &q in pos.iter().chain(trans.iter()).flatten() {
            claim(q)?;
        }
        for q in swap_controls.iter().flatten() {
            claim(*q)?;
        }
        for axis in Axis::ALL {
            if let Some(q) = rot_controls[axis.index()] {
                if swap_controls[SwapPair::normal_to(axis).index()] != Some(q) {
                    claim(q)?;
                }
            }
        }
        Ok(RegisterLayout {
            spec,
            pos,
            trans,
            swap_controls,
            rot_controls,
            total_qubits,
        })
    }

    pub fn spec(&self) -> &GridSpec {
        &self.spec
    }

    pub fn total_qubits(&self) -> usize {
        self.total_qubits
    }

    pub fn position(&self, axis: Axis) -> &[usize] {
        &self.pos[axis.index()]
    }

    pub fn translation(&self, axis: Axis) -> &[usize] {
        &self.trans[axis.index()]
    }

    pub fn swap_control(&self, pair: SwapPair) -> Option<usize> {
        self.swap_controls[pair.index()]
    }

    pub fn rotation_control(&self, axis: Axis) -> Option<usize> {
        self.rot_controls[axis.index()]
    }

    /// Bit mask of all position-register qubits.
    pub fn position_mask(&self) -> u64 {
        self.pos.iter().flatten().fold(0, |m, &q| m | (1 << q))
    }

    /// Bit mask of every qubit the layout assigns.
    pub fn assigned_mask(&self) -> u64 {
        let controls = self
            .swap_controls
            .iter()
            .chain(self.rot_controls.iter())
            .flatten();
        self.trans
            .iter()
            .flatten()
            .chain(controls)
            .fold(self.position_mask(), |m, &q| m | (1 << q))
    }

    /// Basis index of a cell with all ancillas zero.
    pub fn cell_index(&self, cell: super::Cell) -> u64 {
        Axis::ALL.iter().fold(0, |acc, &a| {
            acc | scatter(u64::from(cell.get(a)), self.position(a))
        })
    }

    /// Cell encoded in the position registers of a basis index.
    pub fn cell_of(&self, index: u64) -> super::Cell {
        let mut cell = super::Cell::new(0, 0, 0);
        for a in Axis::ALL {
            cell.set(a, gather(index, self.position(a)) as u32);
        }
        cell
    }

    /// Control setting encoded in the ancilla registers of a basis index.
    pub fn control_setting_of(&self, index: u64) -> ControlSetting {
        let bit = |q: Option<usize>| q.is_some_and(|q| index >> q & 1 == 1);
        ControlSetting {
            dz: gather(index, self.translation(Axis::Z)),
            dy: gather(index, self.translation(Axis::Y)),
            dx: gather(index, self.translation(Axis::X)),
            swaps: self.swap_controls.map(bit),
            rots: self.rot_controls.map(bit),
        }
    }
}

/// Reads a little-endian register value out of a basis index.
pub(crate) fn gather(index: u64, reg: &[usize]) -> u64 {
    reg.iter()
        .enumerate()
        .fold(0, |v, (k, &q)| v | ((index >> q) & 1) << k)
}

/// Places a little-endian register value into basis-index bit positions.
pub(crate) fn scatter(value: u64, reg: &[usize]) -> u64 {
    reg.iter()
        .enumerate()
        .fold(0, |v, (k, &q)| v | ((value >> k) & 1) << q)
}

/// One branch of the pose superposition: translation distances and the
/// swap/rotation flags that were applied.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct ControlSetting {
    pub dz: u64,
    pub dy: u64,
    pub dx: u64,
    /// Indexed by [`SwapPair`].
    pub swaps: [bool; 3],
    /// Indexed by [`Axis`].
    pub rots: [bool; 3],
}

impl ControlSetting {
    pub fn distance(&self, axis: Axis) -> u64 {
        match axis {
            Axis::Z => self.dz,
            Axis::Y => self.dy,
            Axis::X => self.dx,
        }
    }
}

fn flag_bits(flags: [bool; 3]) -> String {
    flags.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

impl fmt::Display for ControlSetting {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "dz={} dy={} dx={} s={} r={}",
            self.dz,
            self.dy,
            self.dx,
            flag_bits(self.swaps),
            flag_bits(self.rots)
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Cell;

    #[test]
    fn standard_layout_packs_registers_in_order() {
        let spec = GridSpec::new(2, 3, 1, 1.0).unwrap();
        let opts = StageOptions {
            t_bits: [1, 2, 0],
            swaps: [false, true, false],
            rots: [true, false, true],
            shared_controls: false,
        };
        let l = RegisterLayout::new(spec, &opts).unwrap();
        assert_eq!(l.position(Axis::Z), &[0, 1]);
        assert_eq!(l.position(Axis::Y), &[2, 3, 4]);
        assert_eq!(l.position(Axis::X), &[5]);
        assert_eq!(l.translation(Axis::Z), &[6]);
        assert_eq!(l.translation(Axis::Y), &[7, 8]);
        assert!(l.translation(Axis::X).is_empty());
        assert_eq!(l.swap_control(SwapPair::YZ), Some(9));
        assert_eq!(l.rotation_control(Axis::Z), Some(10));
        assert_eq!(l.rotation_control(Axis::X), Some(11));
        assert_eq!(l.total_qubits(), 12);
        assert_eq!(opts.ancilla_qubits(), 6);
    }

    #[test]
    fn shared_mode_reuses_swap_qubit() {
        let spec = GridSpec::cubic(1).unwrap();
        let opts = StageOptions::default().all_swaps().all_rotations().shared();
        let l = RegisterLayout::new(spec, &opts).unwrap();
        assert_eq!(l.total_qubits(), 6);
        for p in SwapPair::ALL {
            assert_eq!(l.swap_control(p), l.rotation_control(p.partner_axis()));
            assert_eq!(SwapPair::normal_to(p.partner_axis()), p);
        }
        // qubit 4 drives the (y,z) swap and the x rotation
        let s = l.control_setting_of(1 << 4);
        assert_eq!(s.swaps, [false, true, false]);
        assert_eq!(s.rots, [false, false, true]);

        let mut partial = StageOptions::default().shared();
        partial.swaps[SwapPair::XY.index()] = true;
        partial.rots[Axis::X.index()] = true;
        assert_eq!(partial.symmetry_qubits(), 2);
        partial.swaps = [false, true, false];
        assert_eq!(partial.symmetry_qubits(), 1);
        let l = RegisterLayout::new(spec, &partial).unwrap();
        assert_eq!(l.rotation_control(Axis::X), l.swap_control(SwapPair::YZ));
    }

    #[test]
    fn layout_rejects_wide_translation_and_collisions() {
        let spec = GridSpec::cubic(1).unwrap();
        assert!(RegisterLayout::new(spec, &StageOptions::translations(2, 0, 0)).is_err());
        let dup = RegisterLayout::from_parts(
            spec,
            [vec![0], vec![1], vec![1]],
            Default::default(),
            [None; 3],
            [None; 3],
            3,
        );
        assert!(matches!(dup, Err(Error::InvalidLayout(_))));
        let oob = RegisterLayout::from_parts(
            spec,
            [vec![0], vec![1], vec![5]],
            Default::default(),
            [None; 3],
            [None; 3],
            3,
        );
        assert!(matches!(oob, Err(Error::QubitOutOfRange { .. })));
        let wide = GridSpec::cubic(16).unwrap();
        assert!(matches!(
            RegisterLayout::new(wide, &StageOptions::translations(1, 0, 0)),
            Err(Error::TooManyQubits { .. })
        ));
    }

    #[test]
    fn cell_index_round_trips() {
        let spec = GridSpec::new(2, 3, 2, 1.0).unwrap();
        let l = RegisterLayout::new(spec, &StageOptions::translations(1, 1, 1)).unwrap();
        let c = Cell::new(2, 5, 1);
        let idx = l.cell_index(c);
        assert_eq!(idx, 2 | 5 << 2 | 1 << 5);
        // t_z, t_y, t_x sit on qubits 7, 8, 9
        assert_eq!(l.cell_of(idx | 1 << 9), c);
        assert_eq!(l.control_setting_of(idx | 1 << 9).dx, 1);
        assert_eq!(l.control_setting_of(idx | 1 << 8).dy, 1);
    }

    #[test]
    fn setting_display() {
        let s = ControlSetting {
            dz: 3,
            dy: 0,
            dx: 1,
            swaps: [true, false, true],
            rots: [false, false, true],
        };
        assert_eq!(s.to_string(), "dz=3 dy=0 dx=1 s=101 r=001");
    }
}
