//! Graded-commutative rings: presentations, degreewise realization, and
//! degreewise-free algebras with explicit bases.

mod based;
mod families;
mod presentation;
mod realize;

use thiserror::Error;

pub use based::{basis_labels, binomial, multiply_elements, BasedAlgebra, DividedPowerFamily, FreeRealization, TensorProduct};
pub use families::{
    exterior_over_quotient, quotient_by_ideal, standard_family, thh2_zp_answer, thh_zp_additive, DegreewiseModule, Family,
    FamilyParams, FAMILY_NAMES,
};
pub use presentation::{poly, Generator, GradedRingPresentation, Monomial, Polynomial, Term};
pub use realize::{realize, DegreeData, DegreewiseRealization, GradedElement};

use crate::exact::ExactError;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GradedError {
    #[error("relation is not homogeneous: {0}")]
    InhomogeneousRelation(String),
    #[error("generator {0} has degree {1}; degrees must be positive")]
    NonPositiveGeneratorDegree(String, i64),
    #[error("duplicate generator {0}")]
    DuplicateGenerator(String),
    #[error("unknown generator {0}")]
    UnknownGenerator(String),
    #[error("degree {degree} exceeds the realized range (max {max})")]
    DegreeOverflow { degree: i64, max: i64 },
    #[error("elements of degrees {0} and {1} cannot be combined")]
    DegreeMismatch(i64, i64),
    #[error("negative cutoff {0}")]
    NegativeCutoff(i64),
    #[error("unknown family {0}")]
    UnknownFamily(String),
    #[error("missing parameter {0}")]
    MissingParameter(String),
    #[error("the realization is not degreewise free")]
    NotDegreewiseFree,
    #[error("a prime-field base is required")]
    FieldRequired,
    #[error("factors have different base rings")]
    BaseMismatch,
    #[error("empty tensor product")]
    EmptyTensor,
    #[error("the zero element has no degree")]
    ZeroElement,
    #[error("cannot parse presentation: {0}")]
    Parse(String),
    #[error(transparent)]
    Exact(#[from] ExactError),
}
