//! Exact computational engine for graded homological algebra.

pub mod exact;
pub mod graded;
pub mod homological;
pub mod repro;
pub mod ss;
