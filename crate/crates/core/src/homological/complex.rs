use num_bigint::BigInt;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

use super::HomologicalError;
use crate::exact::{fp, homology_at_sparse, CoefficientRing, FGAbelianGroup, SparseMatrix};

/// A complex of finitely generated free modules, graded by homological
/// degree `s` in `0..=max_s` and internal degree `t` in `0..=max_t`.
/// `d_s: C_{s,t} -> C_{s-1,t}` preserves the internal degree.
///
/// Over `Z_(p)` the matrices are integral and homology is localized at the
/// end. Over `F_p` entries are read mod p.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FGChainComplex {
    base: CoefficientRing,
    max_s: usize,
    max_t: i64,
    /// `dims[s][t]`.
    dims: Vec<Vec<usize>>,
    /// `diffs[s][t]`: `d_s` at internal degree `t`; `diffs[0]` maps to zero.
    diffs: Vec<Vec<SparseMatrix>>,
    /// Whether `C_{max_s + 1} = 0`, so the top degree is reported too.
    bounded: bool,
}

impl FGChainComplex {
    /// Builds a complex from dimensions and differentials, checking shapes
    /// and `d ∘ d = 0`.
    pub fn new(
        base: CoefficientRing,
        max_s: usize,
        max_t: i64,
        dim: impl Fn(usize, i64) -> usize + Sync,
        diff: impl Fn(usize, i64) -> SparseMatrix + Sync,
    ) -> Result<Self, HomologicalError> {
        base.validate()?;
        let dims: Vec<Vec<usize>> = (0..=max_s).map(|s| (0..=max_t).map(|t| dim(s, t)).collect()).collect();
        let diffs: Vec<Vec<SparseMatrix>> = (0..=max_s)
            .into_par_iter()
            .map(|s| {
                (0..=max_t)
                    .map(|t| if s == 0 { SparseMatrix::zeros(0, dims[0][t as usize]) } else { diff(s, t) })
                    .collect()
            })
            .collect();
        let c = FGChainComplex { base, max_s, max_t, dims, diffs, bounded: false };
        c.check()?;
        Ok(c)
    }

    /// Marks the complex as having nothing above `max_s`.
    pub fn bounded(mut self) -> Self {
        self.bounded = true;
        self
    }

    fn check(&self) -> Result<(), HomologicalError> {
        for s in 1..=self.max_s {
            for t in 0..=self.max_t {
                let d = &self.diffs[s][t as usize];
                let expected = (self.dims[s - 1][t as usize], self.dims[s][t as usize]);
                if (d.rows(), d.cols()) != expected {
                    return Err(HomologicalError::Shape { s, t, expected, found: (d.rows(), d.cols()) });
                }
            }
        }
        let bad = (2..=self.max_s).into_par_iter().find_map_any(|s| {
            (0..=self.max_t).find_map(|t| {
                let prod = self.diffs[s - 1][t as usize].mul(&self.diffs[s][t as usize]).ok()?;
                let nonzero = match self.base.field_characteristic() {
                    Some(p) => prod.entries_mod(p).iter().any(|c| !c.is_empty()),
                    None => !prod.is_zero(),
                };
                nonzero.then_some((s, t))
            })
        });
        match bad {
            Some((s, t)) => Err(HomologicalError::NotAComplex { s, t }),
            None => Ok(()),
        }
    }

    pub fn base(&self) -> CoefficientRing {
        self.base
    }

    pub fn max_s(&self) -> usize {
        self.max_s
    }

    pub fn max_t(&self) -> i64 {
        self.max_t
    }

    pub fn is_bounded(&self) -> bool {
        self.bounded
    }

    pub fn dim(&self, s: usize, t: i64) -> usize {
        if s > self.max_s || t < 0 || t > self.max_t {
            0
        } else {
            self.dims[s][t as usize]
        }
    }

    /// `d_s` at internal degree `t`; beyond the stored range this is the
    /// zero map.
    pub fn differential(&self, s: usize, t: i64) -> SparseMatrix {
        if s == 0 || t < 0 || t > self.max_t || s > self.max_s {
            SparseMatrix::zeros(self.dim(s.saturating_sub(1), t), self.dim(s, t))
        } else {
            self.diffs[s][t as usize].clone()
        }
    }

    /// The top homological degree whose homology is reported.
    pub fn reported_top(&self) -> Option<usize> {
        if self.bounded {
            Some(self.max_s)
        } else {
            self.max_s.checked_sub(1)
        }
    }

    /// Homology at a single bidegree over the complex's base.
    pub fn homology_at(&self, s: usize, t: i64) -> FGAbelianGroup {
        let d_out = self.differential(s, t);
        let d_in = self.differential(s + 1, t);
        match self.base {
            CoefficientRing::PrimeField(p) => {
                let r_in = fp::rank_mod_p(&d_in.entries_mod(p), p);
                let r_out = fp::rank_mod_p(&d_out.entries_mod(p), p);
                FGAbelianGroup::elementary(p, self.dim(s, t) - r_in - r_out)
            }
            CoefficientRing::Integers => homology_at_sparse(&d_in, &d_out).expect("checked complex"),
            CoefficientRing::IntegersLocalizedAt(p) => {
                homology_at_sparse(&d_in, &d_out).expect("checked complex").localize_at_p(p)
            }
        }
    }

    /// `dim_{F_p} H(C ⊗ F_p)` at a bidegree.
    pub fn homology_dim_mod_p(&self, s: usize, t: i64, p: u64) -> usize {
        let r_in = fp::rank_mod_p(&self.differential(s + 1, t).entries_mod(p), p);
        let r_out = fp::rank_mod_p(&self.differential(s, t).entries_mod(p), p);
        self.dim(s, t) - r_in - r_out
    }

    /// Applies `d_s` to a chain at `(s, t)`.
    pub fn apply(&self, s: usize, t: i64, v: &[BigInt]) -> Result<Vec<BigInt>, HomologicalError> {
        if v.len() != self.dim(s, t) {
            return Err(HomologicalError::WrongDegree { s, t, expected: self.dim(s, t), found: v.len() });
        }
        Ok(self.differential(s, t).apply(v)?)
    }

    /// The same complex with entries reduced mod p.
    pub fn reduce_mod_p(&self, p: u64) -> Result<FGChainComplex, HomologicalError> {
        let field = CoefficientRing::prime_field(p)?;
        let mut c = self.clone();
        c.base = field;
        for row in c.diffs.iter_mut() {
            for d in row.iter_mut() {
                let cols = d
                    .entries_mod(p)
                    .into_iter()
                    .map(|col| col.into_iter().map(|(i, x)| (i, BigInt::from(x))).collect())
                    .collect();
                *d = SparseMatrix::from_columns(d.rows(), cols);
            }
        }
        Ok(c)
    }
}

/// Groups indexed by `(s, t)` inside a window; cells not stored are zero.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BigradedGroups {
    pub max_s: usize,
    pub max_t: i64,
    /// `F_p` when the groups are vector spaces.
    pub field: Option<u64>,
    #[serde(with = "cells_serde")]
    pub cells: BTreeMap<(usize, i64), FGAbelianGroup>,
}

impl BigradedGroups {
    pub fn new(max_s: usize, max_t: i64, field: Option<u64>) -> Self {
        BigradedGroups { max_s, max_t, field, cells: BTreeMap::new() }
    }

    pub fn insert(&mut self, s: usize, t: i64, g: FGAbelianGroup) {
        if g.is_zero() {
            self.cells.remove(&(s, t));
        } else {
            self.cells.insert((s, t), g);
        }
    }

    pub fn get(&self, s: usize, t: i64) -> FGAbelianGroup {
        self.cells.get(&(s, t)).cloned().unwrap_or_default()
    }

    pub fn in_window(&self, s: usize, t: i64) -> bool {
        s <= self.max_s && (0..=self.max_t).contains(&t)
    }

    /// Nonzero cells of total degree `n = s + t`, by increasing `s`.
    pub fn total_degree_cells(&self, n: i64) -> Vec<(usize, i64, FGAbelianGroup)> {
        self.cells
            .iter()
            .filter(|((s, t), _)| *s as i64 + t == n)
            .map(|((s, t), g)| (*s, *t, g.clone()))
            .collect()
    }

    /// Total-degree dimensions for field coefficients.
    pub fn total_dimensions(&self, max_total: i64) -> Vec<usize> {
        let mut out = vec![0; (max_total.max(-1) + 1) as usize];
        for ((s, t), g) in &self.cells {
            let n = *s as i64 + t;
            if n <= max_total {
                out[n as usize] += g.num_generators();
            }
        }
        out
    }

    /// Whether every total degree `≤ n` is fully inside the window.
    pub fn complete_through_total(&self, n: i64) -> bool {
        n <= self.max_t && (n < 0 || n as usize <= self.max_s)
    }

    pub fn restrict(&self, max_s: usize, max_t: i64) -> BigradedGroups {
        let mut out = BigradedGroups::new(max_s.min(self.max_s), max_t.min(self.max_t), self.field);
        for (&(s, t), g) in &self.cells {
            if s <= out.max_s && t <= out.max_t {
                out.cells.insert((s, t), g.clone());
            }
        }
        out
    }

    pub fn localize_at_p(&self, p: u64) -> BigradedGroups {
        let mut out = BigradedGroups::new(self.max_s, self.max_t, self.field);
        for (&(s, t), g) in &self.cells {
            out.insert(s, t, g.localize_at_p(p));
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("groups serialize")
    }
}

mod cells_serde {
    use super::*;
    use serde::{Deserializer, Serializer};

    #[derive(Serialize, Deserialize)]
    struct Cell {
        s: usize,
        t: i64,
        group: String,
    }

    pub fn serialize<S: Serializer>(cells: &BTreeMap<(usize, i64), FGAbelianGroup>, ser: S) -> Result<S::Ok, S::Error> {
        let list: Vec<Cell> = cells.iter().map(|(&(s, t), g)| Cell { s, t, group: g.to_string() }).collect();
        list.serialize(ser)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<BTreeMap<(usize, i64), FGAbelianGroup>, D::Error> {
        let list: Vec<Cell> = Vec::deserialize(de)?;
        list.into_iter()
            .map(|c| c.group.parse().map(|g| ((c.s, c.t), g)).map_err(serde::de::Error::custom))
            .collect()
    }
}

/// Homology in every reported bidegree.
pub fn homology(c: &FGChainComplex) -> BigradedGroups {
    let field = c.base().field_characteristic();
    let top = match c.reported_top() {
        Some(top) => top,
        None => return BigradedGroups::new(0, c.max_t(), field),
    };
    let cells: Vec<((usize, i64), FGAbelianGroup)> = (0..=top)
        .flat_map(|s| (0..=c.max_t()).map(move |t| (s, t)))
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|(s, t)| ((s, t), c.homology_at(s, t)))
        .collect();
    let mut out = BigradedGroups::new(top, c.max_t(), field);
    for ((s, t), g) in cells {
        out.insert(s, t, g);
    }
    out
}

/// A complex `P_* -> M` together with its augmentation, for exactness
/// certification.
#[derive(Clone, Debug)]
pub struct AugmentedComplex {
    pub complex: FGChainComplex,
    /// `dim M_t`.
    pub module_dims: Vec<usize>,
    /// `P_{0,t} -> M_t`.
    pub augmentation: Vec<SparseMatrix>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ExactnessFailure {
    /// The augmentation is not surjective in this internal degree.
    Augmentation { t: i64, cokernel: String },
    /// Homology of the augmented complex at `P_s`.
    Degree { s: usize, t: i64, homology: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResolutionCertificate {
    pub max_s: usize,
    pub max_t: i64,
    pub exact: bool,
    pub failure: Option<ExactnessFailure>,
}

/// Checks exactness of `P_{S} -> ... -> P_0 -> M -> 0` at `M` and at
/// `P_0, ..., P_{S-1}` in internal degrees up to `T`, by exact rank and
/// torsion counting; a bounded complex is checked at `P_S` as well.
/// Failures are reported, not raised.
pub fn validate_resolution(r: &AugmentedComplex, max_s: usize, max_t: i64) -> ResolutionCertificate {
    let c = &r.complex;
    let max_s = max_s.min(c.max_s());
    let max_t = max_t.min(c.max_t());
    let local = |g: FGAbelianGroup| match c.base() {
        CoefficientRing::IntegersLocalizedAt(p) => g.localize_at_p(p),
        _ => g,
    };
    for t in 0..=max_t {
        let eps = &r.augmentation[t as usize];
        let module_dim = r.module_dims[t as usize];
        // cokernel of the augmentation and homology at P_s
        let coker = match c.base() {
            CoefficientRing::PrimeField(p) => {
                FGAbelianGroup::elementary(p, module_dim - fp::rank_mod_p(&eps.entries_mod(p), p))
            }
            _ => local(homology_at_sparse(eps, &SparseMatrix::zeros(0, module_dim)).expect("shapes")),
        };
        if !coker.is_zero() {
            return ResolutionCertificate {
                max_s,
                max_t,
                exact: false,
                failure: Some(ExactnessFailure::Augmentation { t, cokernel: coker.to_string() }),
            };
        }
        let upper = if c.is_bounded() && max_s == c.max_s() { max_s + 1 } else { max_s };
        for s in 0..upper {
            let d_out = if s == 0 { eps.clone() } else { c.differential(s, t) };
            let d_in = c.differential(s + 1, t);
            let h = match c.base() {
                CoefficientRing::PrimeField(p) => {
                    let r_in = fp::rank_mod_p(&d_in.entries_mod(p), p);
                    let r_out = fp::rank_mod_p(&d_out.entries_mod(p), p);
                    FGAbelianGroup::elementary(p, c.dim(s, t) - r_in - r_out)
                }
                _ => local(homology_at_sparse(&d_in, &d_out).expect("checked complex")),
            };
            if !h.is_zero() {
                return ResolutionCertificate {
                    max_s,
                    max_t,
                    exact: false,
                    failure: Some(ExactnessFailure::Degree { s, t, homology: h.to_string() }),
                };
            }
        }
    }
    ResolutionCertificate { max_s, max_t, exact: true, failure: None }
}

/// A `1 x 1` integer matrix, for quick complexes.
pub fn scalar_matrix(c: i64) -> SparseMatrix {
    SparseMatrix::from_columns(1, vec![vec![(0, BigInt::from(c))]])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_term(c: i64) -> FGChainComplex {
        FGChainComplex::new(
            CoefficientRing::Integers,
            1,
            0,
            |_, _| 1,
            |_, _| scalar_matrix(c),
        )
        .unwrap()
        .bounded()
    }

    #[test]
    fn multiplication_by_p() {
        let h = homology(&two_term(5));
        assert_eq!(h.get(0, 0), FGAbelianGroup::cyclic(5));
        assert_eq!(h.get(1, 0), FGAbelianGroup::zero());
        let z = homology(&two_term(0));
        assert_eq!(z.get(1, 0), FGAbelianGroup::free(1));
    }

    #[test]
    fn rejects_non_complexes() {
        let r = FGChainComplex::new(CoefficientRing::Integers, 2, 0, |_, _| 1, |_, _| scalar_matrix(1));
        assert!(matches!(r, Err(HomologicalError::NotAComplex { s: 2, t: 0 })));
    }

    #[test]
    fn resolution_failure_location() {
        // P_0 = P_1 = Z with zero differential, augmented by the identity
        let c = FGChainComplex::new(CoefficientRing::Integers, 1, 0, |_, _| 1, |_, _| scalar_matrix(0)).unwrap().bounded();
        let aug = AugmentedComplex { complex: c, module_dims: vec![1], augmentation: vec![scalar_matrix(1)] };
        let cert = validate_resolution(&aug, 1, 0);
        assert!(!cert.exact);
        assert!(matches!(cert.failure, Some(ExactnessFailure::Degree { s: 1, t: 0, .. })));
    }

    #[test]
    fn json_cells() {
        let mut g = BigradedGroups::new(2, 4, None);
        g.insert(1, 2, "Z ⊕ Z/2".parse().unwrap());
        let back: BigradedGroups = serde_json::from_str(&g.to_json()).unwrap();
        assert_eq!(back, g);
    }
}
