use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::{ExactError, IntegerMatrix};

/// Column-major sparse integer matrix. Differentials of large complexes are
/// stored this way; each column lists `(row, value)` pairs with no zeros.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SparseMatrix {
    rows: usize,
    cols: usize,
    columns: Vec<Vec<SparseEntry>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SparseEntry(pub usize, #[serde(with = "crate::exact::serde_int")] pub BigInt);

impl SparseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        SparseMatrix { rows, cols, columns: vec![Vec::new(); cols] }
    }

    /// Builds a matrix from columns of `(row, value)` pairs; repeated rows are
    /// summed and zeros dropped.
    pub fn from_columns(rows: usize, columns: Vec<Vec<(usize, BigInt)>>) -> Self {
        let cols = columns.len();
        let columns = columns
            .into_iter()
            .map(|mut col| {
                col.sort_by_key(|(r, _)| *r);
                let mut merged: Vec<SparseEntry> = Vec::with_capacity(col.len());
                for (r, v) in col {
                    assert!(r < rows, "row index {r} out of range {rows}");
                    match merged.last_mut() {
                        Some(last) if last.0 == r => last.1 += v,
                        _ => merged.push(SparseEntry(r, v)),
                    }
                }
                merged.retain(|e| !e.1.is_zero());
                merged
            })
            .collect();
        SparseMatrix { rows, cols, columns }
    }

    pub fn from_dense(m: &IntegerMatrix) -> Self {
        let columns = (0..m.cols())
            .map(|j| {
                (0..m.rows())
                    .filter(|&i| !m[(i, j)].is_zero())
                    .map(|i| (i, m[(i, j)].clone()))
                    .collect()
            })
            .collect();
        Self::from_columns(m.rows(), columns)
    }

    pub fn to_dense(&self) -> IntegerMatrix {
        let mut m = IntegerMatrix::zeros(self.rows, self.cols);
        for (j, col) in self.columns.iter().enumerate() {
            for SparseEntry(i, v) in col {
                m[(*i, j)] = v.clone();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(Vec::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(Vec::is_empty)
    }

    pub(crate) fn columns(&self) -> Vec<Vec<(usize, BigInt)>> {
        self.columns
            .iter()
            .map(|c| c.iter().map(|SparseEntry(i, v)| (*i, v.clone())).collect())
            .collect()
    }

    pub fn column(&self, j: usize) -> impl Iterator<Item = (usize, &BigInt)> {
        self.columns[j].iter().map(|SparseEntry(i, v)| (*i, v))
    }

    /// Matrix-vector product on a dense vector.
    pub fn apply(&self, v: &[BigInt]) -> Result<Vec<BigInt>, ExactError> {
        if v.len() != self.cols {
            return Err(ExactError::DimensionMismatch { expected: (self.cols, 1), found: (v.len(), 1) });
        }
        let mut out = vec![BigInt::zero(); self.rows];
        for (j, x) in v.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for SparseEntry(i, a) in &self.columns[j] {
                out[*i] += a * x;
            }
        }
        Ok(out)
    }

    /// `self * other`.
    pub fn mul(&self, other: &SparseMatrix) -> Result<SparseMatrix, ExactError> {
        if self.cols != other.rows {
            return Err(ExactError::DimensionMismatch {
                expected: (self.cols, other.cols),
                found: (other.rows, other.cols),
            });
        }
        let columns = other
            .columns
            .iter()
            .map(|col| {
                let mut acc: Vec<(usize, BigInt)> = Vec::new();
                for SparseEntry(k, b) in col {
                    for SparseEntry(i, a) in &self.columns[*k] {
                        acc.push((*i, a * b));
                    }
                }
                acc
            })
            .collect();
        Ok(SparseMatrix::from_columns(self.rows, columns))
    }

    /// Reduces every entry modulo `p` into `[0, p)`, dropping zeros.
    pub fn entries_mod(&self, p: u64) -> Vec<Vec<(usize, u64)>> {
        let modulus = BigInt::from(p);
        self.columns
            .iter()
            .map(|c| {
                c.iter()
                    .filter_map(|SparseEntry(i, v)| {
                        let r = ((v % &modulus) + &modulus) % &modulus;
                        let r: u64 = r.try_into().expect("residue fits in u64");
                        (r != 0).then_some((*i, r))
                    })
                    .collect()
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dense_round_trip_and_product() {
        let a = IntegerMatrix::from_rows(&[vec![1, 0, 2], vec![0, 3, 0]]).unwrap();
        let b = IntegerMatrix::from_rows(&[vec![1, 1], vec![0, 2], vec![4, 0]]).unwrap();
        let sa = SparseMatrix::from_dense(&a);
        let sb = SparseMatrix::from_dense(&b);
        assert_eq!(sa.to_dense(), a);
        assert_eq!(sa.mul(&sb).unwrap().to_dense(), a.mul(&b).unwrap());
        assert_eq!(sa.nnz(), 3);
    }

    #[test]
    fn duplicate_entries_merge() {
        let m = SparseMatrix::from_columns(2, vec![vec![(0, BigInt::from(2)), (0, BigInt::from(-2)), (1, BigInt::from(5))]]);
        assert_eq!(m.nnz(), 1);
        assert_eq!(m.entries_mod(3), vec![vec![(1, 2)]]);
    }
}
