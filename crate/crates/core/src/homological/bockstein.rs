use num_bigint::BigInt;
use num_traits::Zero;
use rand::Rng;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

use super::complex::FGChainComplex;
use super::HomologicalError;
use crate::exact::{sparse_invariant_factors, CoefficientRing, IntegerMatrix, SparseMatrix};

/// Bockstein data at one bidegree of a complex of free abelian groups.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BocksteinCell {
    pub rank: usize,
    /// `(a, multiplicity)`: summands `Z/p^a` of integral homology, i.e.
    /// classes detected by a nontrivial `β_a`.
    pub exponents: Vec<(u32, usize)>,
    /// `dim_{F_p} H(C ⊗ F_p)`, computed directly.
    pub mod_p_dimension: usize,
    /// `rank H_n + t_p(H_n) + t_p(H_{n-1})`.
    pub predicted_mod_p_dimension: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BocksteinTower {
    pub p: u64,
    #[serde(with = "cell_list")]
    pub cells: BTreeMap<(usize, i64), BocksteinCell>,
}

impl BocksteinTower {
    /// The mod-p accounting identity at every reported bidegree.
    pub fn accounting_holds(&self) -> bool {
        self.cells.values().all(|c| c.mod_p_dimension == c.predicted_mod_p_dimension)
    }

    /// Dimensions of the Bockstein spectral sequence page `E^r`
    /// (`E^1 = H(C ⊗ F_p)`, `E^∞` = rank).
    pub fn page_dimension(&self, s: usize, t: i64, r: u32) -> usize {
        let count = |s: usize| {
            self.cells.get(&(s, t)).map_or(0, |c| c.exponents.iter().filter(|(a, _)| *a >= r).map(|(_, m)| m).sum())
        };
        let rank = self.cells.get(&(s, t)).map_or(0, |c| c.rank);
        rank + count(s) + if s > 0 { count(s - 1) } else { 0 }
    }
}

mod cell_list {
    use super::BocksteinCell;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};
    use std::collections::BTreeMap;

    #[derive(Serialize, Deserialize)]
    struct Entry {
        s: usize,
        t: i64,
        #[serde(flatten)]
        cell: BocksteinCell,
    }

    pub fn serialize<S: Serializer>(cells: &BTreeMap<(usize, i64), BocksteinCell>, ser: S) -> Result<S::Ok, S::Error> {
        let v: Vec<Entry> = cells.iter().map(|(&(s, t), c)| Entry { s, t, cell: c.clone() }).collect();
        v.serialize(ser)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<BTreeMap<(usize, i64), BocksteinCell>, D::Error> {
        Ok(Vec::<Entry>::deserialize(de)?.into_iter().map(|e| ((e.s, e.t), e.cell)).collect())
    }
}

/// Torsion exponents of the integral homology of `C` together with a
/// direct mod-p homology computation. Cells where everything vanishes are
/// omitted.
pub fn bockstein_tower(c: &FGChainComplex, p: u64) -> Result<BocksteinTower, HomologicalError> {
    if c.base() != CoefficientRing::Integers {
        return Err(HomologicalError::Unsupported("Bockstein towers need a complex over Z".into()));
    }
    CoefficientRing::prime_field(p)?;
    let top = c.reported_top();
    let mut cells = BTreeMap::new();
    let Some(top) = top else {
        return Ok(BocksteinTower { p, cells });
    };
    for t in 0..=c.max_t() {
        let groups: Vec<_> = (0..=top).map(|s| c.homology_at(s, t)).collect();
        for s in 0..=top {
            let h = &groups[s];
            let mut exps: BTreeMap<u32, usize> = BTreeMap::new();
            for a in h.p_exponents(p) {
                *exps.entry(a).or_default() += 1;
            }
            let below = if s > 0 { groups[s - 1].p_torsion_count(p) } else { 0 };
            let cell = BocksteinCell {
                rank: h.free_rank(),
                exponents: exps.into_iter().collect(),
                mod_p_dimension: c.homology_dim_mod_p(s, t, p),
                predicted_mod_p_dimension: h.free_rank() + h.p_torsion_count(p) + below,
            };
            if cell.rank > 0 || !cell.exponents.is_empty() || cell.mod_p_dimension > 0 || cell.predicted_mod_p_dimension > 0 {
                cells.insert((s, t), cell);
            }
        }
    }
    Ok(BocksteinTower { p, cells })
}

/// The same exponents read off the invariant factors of the differentials
/// alone: `Z/p^a` summands of `H_{s-1}` are the invariant factors of `d_s`
/// with p-adic valuation `a`.
pub fn exponents_from_differentials(c: &FGChainComplex, p: u64, s: usize, t: i64) -> Vec<(u32, usize)> {
    let mut exps: BTreeMap<u32, usize> = BTreeMap::new();
    for f in sparse_invariant_factors(&c.differential(s + 1, t)) {
        let a = valuation(&f, p);
        if a > 0 {
            *exps.entry(a).or_default() += 1;
        }
    }
    exps.into_iter().collect()
}

fn valuation(x: &BigInt, p: u64) -> u32 {
    let p = BigInt::from(p);
    let mut x = x.clone();
    let mut a = 0;
    while !x.is_zero() && (&x % &p).is_zero() {
        x /= &p;
        a += 1;
    }
    a
}

/// A random complex `Z^{r_2} -> Z^{r_1} -> Z^{r_0}` (internal degree 0)
/// built from elementary pieces `Z -p^a-> Z` and free summands, then
/// conjugated by random unimodular changes of basis.
pub fn random_small_complex<R: Rng>(rng: &mut R, p: u64) -> FGChainComplex {
    let length = 3usize;
    let mut dims = vec![0usize; length + 1];
    // pieces: (top degree s, multiplier) with d: C_s -> C_{s-1}
    let mut pieces: Vec<(usize, i64)> = Vec::new();
    let mut frees: Vec<usize> = Vec::new();
    for _ in 0..rng.gen_range(1..6) {
        let s = rng.gen_range(1..=length);
        let a = rng.gen_range(0..4u32);
        let unit = [1i64, 2, 3, 5, 7].into_iter().filter(|u| (*u as u64) % p != 0).nth(rng.gen_range(0..3)).unwrap_or(1);
        pieces.push((s, (p as i64).pow(a) * unit));
    }
    for _ in 0..rng.gen_range(0..3) {
        frees.push(rng.gen_range(0..=length));
    }
    let mut diag: Vec<Vec<(usize, usize, i64)>> = vec![Vec::new(); length + 1];
    for &(s, m) in &pieces {
        let (j, i) = (dims[s], dims[s - 1]);
        dims[s] += 1;
        dims[s - 1] += 1;
        diag[s].push((i, j, m));
    }
    for &s in &frees {
        dims[s] += 1;
    }
    let changes: Vec<(IntegerMatrix, IntegerMatrix)> = dims.iter().map(|&n| random_unimodular(rng, n)).collect();
    let diffs: Vec<IntegerMatrix> = (0..=length)
        .map(|s| {
            if s == 0 {
                return IntegerMatrix::zeros(0, dims[0]);
            }
            let mut d = IntegerMatrix::zeros(dims[s - 1], dims[s]);
            for &(i, j, m) in &diag[s] {
                d[(i, j)] = BigInt::from(m);
            }
            changes[s - 1].0.mul(&d).unwrap().mul(&changes[s].1).unwrap()
        })
        .collect();
    FGChainComplex::new(CoefficientRing::Integers, length, 0, |s, _| dims[s], |s, _| SparseMatrix::from_dense(&diffs[s]))
        .expect("conjugated complexes satisfy d∘d = 0")
        .bounded()
}

/// A random unimodular matrix and its inverse.
fn random_unimodular<R: Rng>(rng: &mut R, n: usize) -> (IntegerMatrix, IntegerMatrix) {
    let mut g = IntegerMatrix::identity(n);
    let mut g_inv = IntegerMatrix::identity(n);
    if n < 2 {
        return (g, g_inv);
    }
    for _ in 0..(2 * n) {
        let i = rng.gen_range(0..n);
        let j = (i + rng.gen_range(1..n)) % n;
        let c = BigInt::from(rng.gen_range(-2i64..=2));
        // row_i += c row_j on g; column_j -= c column_i on g_inv
        for k in 0..n {
            let x = &g[(j, k)] * &c;
            g[(i, k)] += x;
            let y = &g_inv[(k, i)] * &c;
            g_inv[(k, j)] -= y;
        }
    }
    (g, g_inv)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn multiplication_by_p_squared() {
        let c = FGChainComplex::new(
            CoefficientRing::Integers,
            1,
            0,
            |_, _| 1,
            |_, _| SparseMatrix::from_columns(1, vec![vec![(0, BigInt::from(9))]]),
        )
        .unwrap()
        .bounded();
        let tower = bockstein_tower(&c, 3).unwrap();
        assert_eq!(tower.cells[&(0, 0)].exponents, vec![(2, 1)]);
        assert!(tower.accounting_holds());
        assert_eq!(tower.page_dimension(0, 0, 2), 1);
        assert_eq!(tower.page_dimension(0, 0, 3), 0);
    }

    #[test]
    fn zero_complex_is_empty() {
        let c = FGChainComplex::new(CoefficientRing::Integers, 2, 3, |_, _| 0, |_, _| SparseMatrix::zeros(0, 0)).unwrap();
        assert!(bockstein_tower(&c, 2).unwrap().cells.is_empty());
    }

    #[test]
    fn random_complexes_balance() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for p in [2u64, 3, 5] {
            for _ in 0..10 {
                let c = random_small_complex(&mut rng, p);
                let tower = bockstein_tower(&c, p).unwrap();
                assert!(tower.accounting_holds());
                for s in 0..c.max_s() {
                    let from_h = tower.cells.get(&(s, 0)).map(|c| c.exponents.clone()).unwrap_or_default();
                    assert_eq!(from_h, exponents_from_differentials(&c, p, s, 0));
                }
            }
        }
    }
}
