//! Quantum circuits that place a grid-encoded ligand in every translated,
//! axis-swapped and quarter-turned pose at once, plus the exact simulator
//! and classical enumerator used to check them against each other.
//!
//! The pipeline: an [`OccupancyGrid`] is encoded into a [`SparseState`] over
//! position registers ([`encode_state`]); [`build_unified`] emits Hadamards
//! on ancilla registers followed by controlled swaps, rotations and
//! increments; [`run`] simulates the circuit; [`decode_state`] splits the
//! result into one grid per [`ControlSetting`]. [`enumerate_poses`] computes
//! the same ensemble classically and [`verify`] compares the two.

pub mod circuit;
pub mod error;
pub mod grid;
pub mod oracle;
pub mod raster;
pub mod sim;
pub mod verify;

pub use circuit::{
    build_coord_swap, build_increment, build_rotation, build_translation_stage, build_unified,
    resource_counts, Circuit, Gate, GateKind, ResourceCounts,
};
pub use error::{Error, Result};
pub use grid::{
    decode_state, encode_state, Axis, Cell, ControlSetting, GridSpec, OccupancyGrid,
    RegisterLayout, StageOptions, SwapPair,
};
pub use oracle::{
    ancilla_configurations, count_configurations, enumerate_poses, rotate90, swap_axes,
    translate_grid, PoseSet,
};
pub use raster::{parse_atoms, rasterize, AtomRecord};
pub use sim::{dense_check, run, SparseState};
pub use verify::{verify, verify_against, VerificationReport};
