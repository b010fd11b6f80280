use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::collections::{BTreeMap, HashMap, HashSet};

use super::{IntegerMatrix, SparseMatrix};

/// Result of a Smith normal form computation: `u * m * v == d`, with `d`
/// diagonal, nonnegative, and `d[i] | d[i+1]`. `u_inv` and `v_inv` are the
/// inverses of the unimodular transforms.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub d: IntegerMatrix,
    pub u: IntegerMatrix,
    pub v: IntegerMatrix,
    pub u_inv: IntegerMatrix,
    pub v_inv: IntegerMatrix,
}

impl SmithForm {
    /// The nonzero diagonal entries, in order.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        (0..self.d.rows().min(self.d.cols()))
            .map(|i| self.d[(i, i)].clone())
            .take_while(|x| !x.is_zero())
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.invariant_factors().len()
    }
}

struct Transforms {
    u: IntegerMatrix,
    u_inv: IntegerMatrix,
    v: IntegerMatrix,
    v_inv: IntegerMatrix,
}

impl Transforms {
    fn row_add(&mut self, target: usize, source: usize, c: &BigInt) {
        self.u.add_row_multiple(target, source, c);
        self.u_inv.add_col_multiple(source, target, &-c);
    }
    fn row_swap(&mut self, i: usize, j: usize) {
        self.u.swap_rows(i, j);
        self.u_inv.swap_cols(i, j);
    }
    fn row_negate(&mut self, i: usize) {
        self.u.negate_row(i);
        self.u_inv.negate_col(i);
    }
    fn col_add(&mut self, target: usize, source: usize, c: &BigInt) {
        self.v.add_col_multiple(target, source, c);
        self.v_inv.add_row_multiple(source, target, &-c);
    }
    fn col_swap(&mut self, i: usize, j: usize) {
        self.v.swap_cols(i, j);
        self.v_inv.swap_rows(i, j);
    }
}

/// Smith normal form with full unimodular transforms.
pub fn smith_normal_form(m: &IntegerMatrix) -> SmithForm {
    let rows = m.rows();
    let cols = m.cols();
    let mut a = m.clone();
    let mut tr = Transforms {
        u: IntegerMatrix::identity(rows),
        u_inv: IntegerMatrix::identity(rows),
        v: IntegerMatrix::identity(cols),
        v_inv: IntegerMatrix::identity(cols),
    };
    diagonalize(&mut a, Some(&mut tr));
    SmithForm { d: a, u: tr.u, v: tr.v, u_inv: tr.u_inv, v_inv: tr.v_inv }
}

/// Invariant factors only (no transforms), for dense input.
pub fn dense_invariant_factors(m: &IntegerMatrix) -> Vec<BigInt> {
    let mut a = m.clone();
    diagonalize(&mut a, None);
    (0..a.rows().min(a.cols()))
        .map(|i| a[(i, i)].clone())
        .take_while(|x| !x.is_zero())
        .collect()
}

fn find_min_pivot(a: &IntegerMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    let mut best_val: Option<BigInt> = None;
    for i in t..a.rows() {
        for j in t..a.cols() {
            let v = &a[(i, j)];
            if v.is_zero() {
                continue;
            }
            let av = v.abs();
            if best_val.as_ref().is_none_or(|b| &av < b) {
                let done = av.is_one();
                best = Some((i, j));
                best_val = Some(av);
                if done {
                    return best;
                }
            }
        }
    }
    best
}

fn diagonalize(a: &mut IntegerMatrix, mut tr: Option<&mut Transforms>) {
    let rows = a.rows();
    let cols = a.cols();
    let n = rows.min(cols);
    let mut t = 0;
    while t < n {
        let Some((pi, pj)) = find_min_pivot(a, t) else { break };
        a.swap_rows(t, pi);
        a.swap_cols(t, pj);
        if let Some(tr) = tr.as_deref_mut() {
            tr.row_swap(t, pi);
            tr.col_swap(t, pj);
        }
        loop {
            let mut dirty = false;
            for i in t + 1..rows {
                if a[(i, t)].is_zero() {
                    continue;
                }
                let q = a[(i, t)].div_floor(&a[(t, t)]);
                let neg = -q;
                a.add_row_multiple(i, t, &neg);
                if let Some(tr) = tr.as_deref_mut() {
                    tr.row_add(i, t, &neg);
                }
                if !a[(i, t)].is_zero() {
                    dirty = true;
                }
            }
            for j in t + 1..cols {
                if a[(t, j)].is_zero() {
                    continue;
                }
                let q = a[(t, j)].div_floor(&a[(t, t)]);
                let neg = -q;
                a.add_col_multiple(j, t, &neg);
                if let Some(tr) = tr.as_deref_mut() {
                    tr.col_add(j, t, &neg);
                }
                if !a[(t, j)].is_zero() {
                    dirty = true;
                }
            }
            if dirty {
                // a smaller remainder appeared in row t or column t; move it to the pivot
                let mut best = (t, t);
                let mut best_val = a[(t, t)].abs();
                for i in t + 1..rows {
                    let v = a[(i, t)].abs();
                    if !v.is_zero() && v < best_val {
                        best = (i, t);
                        best_val = v;
                    }
                }
                for j in t + 1..cols {
                    let v = a[(t, j)].abs();
                    if !v.is_zero() && v < best_val {
                        best = (t, j);
                        best_val = v;
                    }
                }
                if best.0 != t {
                    a.swap_rows(t, best.0);
                    if let Some(tr) = tr.as_deref_mut() {
                        tr.row_swap(t, best.0);
                    }
                }
                if best.1 != t {
                    a.swap_cols(t, best.1);
                    if let Some(tr) = tr.as_deref_mut() {
                        tr.col_swap(t, best.1);
                    }
                }
                continue;
            }
            // row and column t are clear; enforce divisibility of the remaining block
            let pivot = a[(t, t)].clone();
            let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !a[(i, j)].is_multiple_of(&pivot)));
            match bad {
                Some(i) => {
                    let one = BigInt::one();
                    a.add_row_multiple(t, i, &one);
                    if let Some(tr) = tr.as_deref_mut() {
                        tr.row_add(t, i, &one);
                    }
                }
                None => break,
            }
        }
        if a[(t, t)].is_negative() {
            a.negate_row(t);
            if let Some(tr) = tr.as_deref_mut() {
                tr.row_negate(t);
            }
        }
        t += 1;
    }
}

/// Invariant factors of a sparse integer matrix.
///
/// Unit pivots are eliminated first on the sparse representation; whatever
/// remains is finished densely. Exact throughout.
pub fn sparse_invariant_factors(m: &SparseMatrix) -> Vec<BigInt> {
    let mut rows: Vec<BTreeMap<usize, BigInt>> = vec![BTreeMap::new(); m.rows()];
    for (j, col) in m.columns().iter().enumerate() {
        for (i, v) in col {
            if !v.is_zero() {
                rows[*i].insert(j, v.clone());
            }
        }
    }
    let mut col_index: HashMap<usize, HashSet<usize>> = HashMap::new();
    for (i, r) in rows.iter().enumerate() {
        for &j in r.keys() {
            col_index.entry(j).or_default().insert(i);
        }
    }
    let mut alive: Vec<bool> = rows.iter().map(|r| !r.is_empty()).collect();
    let mut unit_count = 0usize;

    loop {
        // pick a unit entry, preferring short rows and short columns
        let mut best: Option<(usize, usize, usize)> = None;
        for (i, r) in rows.iter().enumerate() {
            if !alive[i] {
                continue;
            }
            for (&j, v) in r {
                if v.abs().is_one() {
                    let cost = (r.len() - 1) * (col_index.get(&j).map_or(1, HashSet::len) - 1);
                    if best.is_none_or(|(_, _, c)| cost < c) {
                        best = Some((i, j, cost));
                        if cost == 0 {
                            break;
                        }
                    }
                }
            }
            if best.is_some_and(|(_, _, c)| c == 0) {
                break;
            }
        }
        let Some((pi, pj, _)) = best else { break };
        let pivot_row = std::mem::take(&mut rows[pi]);
        alive[pi] = false;
        for &j in pivot_row.keys() {
            if let Some(set) = col_index.get_mut(&j) {
                set.remove(&pi);
            }
        }
        let pivot_val = pivot_row[&pj].clone();
        let others: Vec<usize> = col_index.get(&pj).map(|s| s.iter().copied().collect()).unwrap_or_default();
        for i in others {
            let factor = &rows[i][&pj] * &pivot_val; // pivot is +-1, so this is entry / pivot
            for (&j, v) in &pivot_row {
                let delta = &factor * v;
                let entry = rows[i].entry(j).or_insert_with(BigInt::zero);
                *entry -= delta;
                if entry.is_zero() {
                    rows[i].remove(&j);
                    if let Some(set) = col_index.get_mut(&j) {
                        set.remove(&i);
                    }
                } else {
                    col_index.entry(j).or_default().insert(i);
                }
            }
            if rows[i].is_empty() {
                alive[i] = false;
            }
        }
        col_index.remove(&pj);
        unit_count += 1;
    }

    // dense finish on the remaining block
    let rest_rows: Vec<usize> = (0..rows.len()).filter(|&i| alive[i] && !rows[i].is_empty()).collect();
    let mut rest_cols: Vec<usize> = rest_rows.iter().flat_map(|&i| rows[i].keys().copied()).collect();
    rest_cols.sort_unstable();
    rest_cols.dedup();
    let col_pos: HashMap<usize, usize> = rest_cols.iter().enumerate().map(|(k, &j)| (j, k)).collect();
    let mut dense = IntegerMatrix::zeros(rest_rows.len(), rest_cols.len());
    for (r, &i) in rest_rows.iter().enumerate() {
        for (j, v) in &rows[i] {
            dense[(r, col_pos[j])] = v.clone();
        }
    }
    let mut factors = vec![BigInt::one(); unit_count];
    factors.extend(dense_invariant_factors(&dense));
    factors.sort();
    factors
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn zero_one_by_one() {
        let m = IntegerMatrix::from_rows(&[vec![0]]).unwrap();
        let s = smith_normal_form(&m);
        assert_eq!(s.d, m);
        assert_eq!(s.u, IntegerMatrix::identity(1));
        assert_eq!(s.v, IntegerMatrix::identity(1));
    }

    #[test]
    fn two_by_two_example() {
        // d1 = gcd of entries = 2, d1 * d2 = |det| = |8 - 24| = 16 / ... computed below
        let m = IntegerMatrix::from_rows(&[vec![2, 4], vec![6, 8]]).unwrap();
        let det = m.determinant().unwrap().abs();
        assert_eq!(det, int(8));
        let s = smith_normal_form(&m);
        assert_eq!(s.invariant_factors(), vec![int(2), int(4)]);
        assert_eq!(s.u.mul(&m).unwrap().mul(&s.v).unwrap(), s.d);
    }

    #[test]
    fn identity_is_fixed() {
        let m = IntegerMatrix::identity(3);
        let s = smith_normal_form(&m);
        assert_eq!(s.d, m);
    }

    #[test]
    fn empty_matrix() {
        let m = IntegerMatrix::zeros(0, 3);
        let s = smith_normal_form(&m);
        assert!(s.d.is_empty());
        assert_eq!(s.v, IntegerMatrix::identity(3));
        assert_eq!(s.u, IntegerMatrix::identity(0));
    }

    #[test]
    fn transforms_are_inverse_pairs() {
        let m = IntegerMatrix::from_rows(&[vec![4, 6, 2], vec![8, -2, 10], vec![0, 12, 6]]).unwrap();
        let s = smith_normal_form(&m);
        assert_eq!(s.u.mul(&s.u_inv).unwrap(), IntegerMatrix::identity(3));
        assert_eq!(s.v.mul(&s.v_inv).unwrap(), IntegerMatrix::identity(3));
        assert_eq!(s.u.mul(&m).unwrap().mul(&s.v).unwrap(), s.d);
    }

    #[test]
    fn sparse_agrees_with_dense() {
        let m = IntegerMatrix::from_rows(&[
            vec![1, 0, 3, 0],
            vec![2, 4, 0, 0],
            vec![0, 6, 9, 12],
            vec![0, 0, 0, 0],
        ])
        .unwrap();
        let sparse = SparseMatrix::from_dense(&m);
        assert_eq!(sparse_invariant_factors(&sparse), dense_invariant_factors(&m));
    }
}
