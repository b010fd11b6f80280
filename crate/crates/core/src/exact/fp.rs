//! Sparse linear algebra over a prime field `F_p`.
//!
//! Vectors are sorted `(index, value)` lists with values in `[1, p)`.
//! Reduction follows the column algorithm: the pivot of a vector is its
//! largest index, and vectors are reduced until their pivot is new.

use std::collections::HashMap;

pub type FpVec = Vec<(usize, u64)>;

pub fn inv_mod(a: u64, p: u64) -> u64 {
    assert!(a % p != 0, "zero has no inverse mod {p}");
    let (mut t, mut new_t) = (0i128, 1i128);
    let (mut r, mut new_r) = (p as i128, (a % p) as i128);
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    (t.rem_euclid(p as i128)) as u64
}

/// `a + c * b` over `F_p`.
pub fn axpy(a: &FpVec, c: u64, b: &FpVec, p: u64) -> FpVec {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let take_a = j >= b.len() || (i < a.len() && a[i].0 < b[j].0);
        let take_b = i >= a.len() || (j < b.len() && b[j].0 < a[i].0);
        if take_a {
            out.push(a[i]);
            i += 1;
        } else if take_b {
            let v = ((c as u128 * b[j].1 as u128) % p as u128) as u64;
            if v != 0 {
                out.push((b[j].0, v));
            }
            j += 1;
        } else {
            let v = ((a[i].1 as u128 + c as u128 * b[j].1 as u128) % p as u128) as u64;
            if v != 0 {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

pub fn scale(a: &FpVec, c: u64, p: u64) -> FpVec {
    a.iter()
        .filter_map(|&(i, v)| {
            let w = ((v as u128 * c as u128) % p as u128) as u64;
            (w != 0).then_some((i, w))
        })
        .collect()
}

pub fn from_dense(v: &[u64], p: u64) -> FpVec {
    v.iter().enumerate().filter_map(|(i, &x)| (x % p != 0).then_some((i, x % p))).collect()
}

pub fn to_dense(v: &FpVec, len: usize) -> Vec<u64> {
    let mut out = vec![0; len];
    for &(i, x) in v {
        out[i] = x;
    }
    out
}

/// Rank of a matrix given by sparse columns.
pub fn rank_mod_p(columns: &[FpVec], p: u64) -> usize {
    let mut table: HashMap<usize, FpVec> = HashMap::new();
    for col in columns {
        let mut c = col.clone();
        while let Some(&(pivot, val)) = c.last() {
            match table.get(&pivot) {
                Some(basis) => c = axpy(&c, p - val, basis, p),
                None => {
                    let normalized = scale(&c, inv_mod(val, p), p);
                    table.insert(pivot, normalized);
                    break;
                }
            }
        }
    }
    table.len()
}

/// A basis of the kernel of the matrix with the given sparse columns, as
/// sparse vectors in the source coordinates.
pub fn kernel_basis_mod_p(columns: &[FpVec], p: u64) -> Vec<FpVec> {
    let mut table: HashMap<usize, (FpVec, FpVec)> = HashMap::new();
    let mut kernel = Vec::new();
    for (j, col) in columns.iter().enumerate() {
        let mut c = col.clone();
        let mut combo: FpVec = vec![(j, 1)];
        loop {
            match c.last() {
                None => {
                    kernel.push(combo);
                    break;
                }
                Some(&(pivot, val)) => match table.get(&pivot) {
                    Some((basis, basis_combo)) => {
                        c = axpy(&c, p - val, basis, p);
                        combo = axpy(&combo, p - val, basis_combo, p);
                    }
                    None => {
                        let inv = inv_mod(val, p);
                        table.insert(pivot, (scale(&c, inv, p), scale(&combo, inv, p)));
                        break;
                    }
                },
            }
        }
    }
    kernel
}

/// An echelonized span of labelled vectors. Inserting reports whether a
/// vector was independent; `express` writes a vector in the span as a
/// combination of the labelled inputs.
#[derive(Clone, Debug)]
pub struct FpSpan {
    p: u64,
    table: HashMap<usize, (FpVec, FpVec)>,
}

impl FpSpan {
    pub fn new(p: u64) -> Self {
        FpSpan { p, table: HashMap::new() }
    }

    pub fn dim(&self) -> usize {
        self.table.len()
    }

    /// Inserts `v` with an optional label. Unlabelled vectors only enlarge
    /// the span; their contribution is dropped from combinations.
    pub fn insert(&mut self, v: &FpVec, label: Option<usize>) -> bool {
        let p = self.p;
        let mut c = v.clone();
        let mut combo: FpVec = label.map(|l| vec![(l, 1)]).unwrap_or_default();
        while let Some(&(pivot, val)) = c.last() {
            match self.table.get(&pivot) {
                Some((basis, basis_combo)) => {
                    c = axpy(&c, p - val, basis, p);
                    combo = axpy(&combo, p - val, basis_combo, p);
                }
                None => {
                    let inv = inv_mod(val, p);
                    self.table.insert(pivot, (scale(&c, inv, p), scale(&combo, inv, p)));
                    return true;
                }
            }
        }
        false
    }

    /// Returns the label combination of `v` if it lies in the span.
    pub fn express(&self, v: &FpVec) -> Option<FpVec> {
        let p = self.p;
        let mut c = v.clone();
        let mut combo: FpVec = Vec::new();
        while let Some(&(pivot, val)) = c.last() {
            let (basis, basis_combo) = self.table.get(&pivot)?;
            c = axpy(&c, p - val, basis, p);
            combo = axpy(&combo, val, basis_combo, p);
        }
        Some(combo)
    }

    pub fn contains(&self, v: &FpVec) -> bool {
        self.express(v).is_some()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverses() {
        for p in [2u64, 3, 5, 7, 101] {
            for a in 1..p {
                assert_eq!(a * inv_mod(a, p) % p, 1);
            }
        }
    }

    #[test]
    fn rank_and_kernel() {
        // columns (1,1,0), (0,1,1), (1,0,1) over F_2 have rank 2, kernel spanned by (1,1,1)
        let cols = vec![vec![(0, 1), (1, 1)], vec![(1, 1), (2, 1)], vec![(0, 1), (2, 1)]];
        assert_eq!(rank_mod_p(&cols, 2), 2);
        assert_eq!(rank_mod_p(&cols, 3), 3);
        let k = kernel_basis_mod_p(&cols, 2);
        assert_eq!(k, vec![vec![(0, 1), (1, 1), (2, 1)]]);
    }

    #[test]
    fn span_expresses_labelled_combinations() {
        let p = 5;
        let mut span = FpSpan::new(p);
        assert!(span.insert(&vec![(0, 1), (1, 2)], Some(0)));
        assert!(span.insert(&vec![(1, 1)], None));
        assert!(!span.insert(&vec![(0, 2), (1, 4)], Some(1)));
        let combo = span.express(&vec![(0, 3), (1, 1)]).unwrap();
        assert_eq!(combo, vec![(0, 3)]);
        assert!(span.express(&vec![(2, 1)]).is_none());
    }
}
