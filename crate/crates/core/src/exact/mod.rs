//! Exact arithmetic: coefficient rings, integer matrices, Smith normal
//! form, finitely generated abelian groups, and `F_p` elimination.

mod coeff;
pub mod fp;
mod group;
mod matrix;
pub(crate) mod serde_int;
mod snf;
mod sparse;

use num_traits::{One, Zero};
use thiserror::Error;

pub use coeff::{is_prime, p_adic_digits, p_adic_valuation, CoefficientRing};
pub use group::{ext_z, tor_z, FGAbelianGroup};
pub use matrix::IntegerMatrix;
pub use snf::{dense_invariant_factors, smith_normal_form, sparse_invariant_factors, SmithForm};
pub use sparse::{SparseEntry, SparseMatrix};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExactError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("dimension mismatch: expected {expected:?}, found {found:?}")]
    DimensionMismatch { expected: (usize, usize), found: (usize, usize) },
    #[error("matrix is {0}x{1}, not square")]
    NotSquare(usize, usize),
    #[error("composite of consecutive differentials is nonzero")]
    CompositionNotZero,
    #[error("cannot parse group {0:?}")]
    GroupParse(String),
}

/// The cokernel of `m`, viewed as a map `Z^cols -> Z^rows`.
pub fn cokernel(m: &IntegerMatrix) -> FGAbelianGroup {
    let factors = dense_invariant_factors(m);
    FGAbelianGroup::new(m.rows() - factors.len(), factors)
}

/// `ker(d_out) / im(d_in)` where `d_in: C_{n+1} -> C_n` and
/// `d_out: C_n -> C_{n-1}`.
pub fn homology_at(d_in: &IntegerMatrix, d_out: &IntegerMatrix) -> Result<FGAbelianGroup, ExactError> {
    if d_in.rows() != d_out.cols() {
        return Err(ExactError::DimensionMismatch {
            expected: (d_out.cols(), d_in.cols()),
            found: (d_in.rows(), d_in.cols()),
        });
    }
    if !d_out.mul(d_in)?.is_zero() {
        return Err(ExactError::CompositionNotZero);
    }
    let out_rank = dense_invariant_factors(d_out).len();
    let in_factors = dense_invariant_factors(d_in);
    Ok(homology_from_factors(d_in.rows(), out_rank, &in_factors))
}

/// Sparse variant of [`homology_at`].
pub fn homology_at_sparse(d_in: &SparseMatrix, d_out: &SparseMatrix) -> Result<FGAbelianGroup, ExactError> {
    if d_in.rows() != d_out.cols() {
        return Err(ExactError::DimensionMismatch {
            expected: (d_out.cols(), d_in.cols()),
            found: (d_in.rows(), d_in.cols()),
        });
    }
    if !d_out.mul(d_in)?.is_zero() {
        return Err(ExactError::CompositionNotZero);
    }
    let out_rank = sparse_invariant_factors(d_out).len();
    let in_factors = sparse_invariant_factors(d_in);
    Ok(homology_from_factors(d_in.rows(), out_rank, &in_factors))
}

fn homology_from_factors(dim: usize, out_rank: usize, in_factors: &[num_bigint::BigInt]) -> FGAbelianGroup {
    let torsion: Vec<_> = in_factors.iter().filter(|d| !d.is_one() && !d.is_zero()).cloned().collect();
    FGAbelianGroup::new(dim - out_rank - in_factors.len(), torsion)
}

/// `dim_{F_p}` of the homology of `C ⊗ F_p` at the middle term.
pub fn homology_dim_mod_p(d_in: &SparseMatrix, d_out: &SparseMatrix, p: u64) -> usize {
    let r_in = fp::rank_mod_p(&d_in.entries_mod(p), p);
    let r_out = fp::rank_mod_p(&d_out.entries_mod(p), p);
    d_in.rows() - r_in - r_out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[Vec<i64>]) -> IntegerMatrix {
        IntegerMatrix::from_rows(rows).unwrap()
    }

    #[test]
    fn cokernels() {
        assert_eq!(cokernel(&m(&[vec![5]])), FGAbelianGroup::cyclic(5));
        assert_eq!(cokernel(&m(&[vec![0]])), FGAbelianGroup::free(1));
        assert_eq!(cokernel(&m(&[vec![2, 0], vec![0, 0]])).to_string(), "Z ⊕ Z/2");
        assert_eq!(cokernel(&IntegerMatrix::zeros(3, 0)), FGAbelianGroup::free(3));
    }

    #[test]
    fn homology_examples() {
        let z = IntegerMatrix::zeros(0, 1);
        assert_eq!(homology_at(&m(&[vec![6]]), &z).unwrap(), FGAbelianGroup::cyclic(6));
        assert_eq!(homology_at(&IntegerMatrix::zeros(1, 0), &z).unwrap(), FGAbelianGroup::free(1));
        assert_eq!(homology_at(&m(&[vec![1]]), &z).unwrap(), FGAbelianGroup::zero());
        assert_eq!(homology_at(&m(&[vec![1]]), &m(&[vec![1]])), Err(ExactError::CompositionNotZero));
        let sparse = homology_at_sparse(&SparseMatrix::from_dense(&m(&[vec![6]])), &SparseMatrix::zeros(0, 1));
        assert_eq!(sparse.unwrap(), FGAbelianGroup::cyclic(6));
    }
}
