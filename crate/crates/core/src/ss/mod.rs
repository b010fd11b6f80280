//! Spectral-sequence pages, collapse certificates and extension assembly.

mod abutment;
mod page;
mod scan;

pub use abutment::{assemble_abutment, Abutment, AbutmentDegree, ExtensionPolicy, ExtensionRule, Layer, Override, Step};
pub use page::{BigradedPage, Differential, ModuleStructure};
pub use scan::{
    degree_collision_check, exclusion_scan, lattice_contains, parity_exclusions, protect_unit_column, support_lattice,
    CollapseCertificate,
    CollisionReport, Exclusion, ExclusionReason, UnitColumnConstraint,
};

#[derive(Debug, thiserror::Error)]
pub enum SsError {
    #[error("cells of unknown value inside the scanned window: {0:?}")]
    UnknownCellsInWindow(Vec<(usize, i64)>),
    #[error("collapse has not been certified")]
    CollapseNotCertified,
}
