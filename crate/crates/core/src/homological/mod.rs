//! Chain complexes, bar constructions, resolutions and Tor.

mod augmented;
mod bar;
mod bockstein;
mod complex;
mod cycles;
mod periodic;
mod shukla;
mod tor;

pub use augmented::{AugModule, AugmentedAlgebra, Combination, FamilyTag, Ground, PointAlgebra};
pub use bar::{shuffles, BarComplex, BarTuple, Chain};
pub use complex::{
    homology, scalar_matrix, validate_resolution, AugmentedComplex, BigradedGroups, ExactnessFailure, FGChainComplex,
    ResolutionCertificate,
};
pub use bockstein::{bockstein_tower, exponents_from_differentials, random_small_complex, BocksteinCell, BocksteinTower};
pub use cycles::{induced_map_surjective, verify_cycle, ClassCoordinate, CycleVerdict};
pub use periodic::{ll_hochschild_complex, periodic_resolution, PeriodicResolution, PeriodicTag};
pub use shukla::ShuklaComplex;
pub use tor::{greenlees_tor, iterated_tor, tor, E2Term, TorAlgebra, TorClass, TorMethod};

use crate::exact::ExactError;
use crate::graded::GradedError;

#[derive(Debug, thiserror::Error)]
pub enum HomologicalError {
    #[error("differential at ({s}, {t}) has shape {found:?}, expected {expected:?}")]
    Shape { s: usize, t: i64, expected: (usize, usize), found: (usize, usize) },
    #[error("d∘d is nonzero at ({s}, {t})")]
    NotAComplex { s: usize, t: i64 },
    #[error("chain at ({s}, {t}) has {found} coordinates, expected {expected}")]
    WrongDegree { s: usize, t: i64, expected: usize, found: usize },
    #[error("tuple does not lie in the truncated complex")]
    NotInComplex,
    #[error("cutoff {requested} exceeds the input's {available}")]
    CutoffExceedsInput { requested: i64, available: i64 },
    #[error("algebra is not augmented: {0}")]
    NonAugmented(String),
    #[error("ground ring must be concentrated in even degrees")]
    GroundNotEven,
    #[error("periodic resolution tag does not match the algebra's family")]
    FamilyMismatch,
    #[error("the prime must be odd")]
    EvenPrime,
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("resolution is not exact: {0}")]
    InvalidResolution(String),
    #[error("coefficients must be a prime field")]
    FieldRequired,
    #[error("chain is not a cycle")]
    NotACycle,
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error(transparent)]
    Graded(#[from] GradedError),
}
