//! Gate-level circuits for controlled translations, coordinate swaps and
//! discrete rotations of grid-encoded ligands.

mod build;
mod gate;

pub use build::{
    build_coord_swap, build_increment, build_rotation, build_translation_stage, build_unified,
    resource_counts, ResourceCounts,
};
pub use gate::{Circuit, Gate, GateKind};
