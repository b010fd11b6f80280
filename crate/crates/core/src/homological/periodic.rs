use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::sync::Arc;

use super::augmented::{AugModule, AugmentedAlgebra, Combination, FamilyTag};
use super::complex::{AugmentedComplex, FGChainComplex};
use super::HomologicalError;
use crate::exact::{CoefficientRing, SparseMatrix};
use crate::graded::GradedElement;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PeriodicTag {
    PeriodicExterior,
    PeriodicQuadratic,
    PeriodicTruncated,
}

/// A two-periodic free resolution `... -> Σ^{σ_2} A -> Σ^{σ_1} A -> A -> k`
/// whose maps are multiplication by fixed elements of `A`.
#[derive(Clone, Debug)]
pub struct PeriodicResolution {
    pub tag: PeriodicTag,
    algebra: Arc<AugmentedAlgebra>,
    /// `shifts[s] = σ_s`.
    pub shifts: Vec<i64>,
    /// `maps[s]` for `s >= 1`: `d_s` is left multiplication by this element.
    maps: Vec<Combination>,
    max_s: usize,
}

pub fn periodic_resolution(
    tag: PeriodicTag,
    algebra: Arc<AugmentedAlgebra>,
    max_s: usize,
) -> Result<PeriodicResolution, HomologicalError> {
    let ground = algebra.ground().clone();
    let one = ground.one();
    let (odd_map, even_map, odd_shift, even_shift): (Combination, Combination, i64, i64) = match (tag, algebra.family()) {
        (PeriodicTag::PeriodicExterior, Some(FamilyTag::Exterior)) => {
            let e = vec![(1, one.clone())];
            (e.clone(), e, algebra.degree(1), algebra.degree(1))
        }
        (PeriodicTag::PeriodicQuadratic, Some(FamilyTag::Quadratic)) => {
            // ũ - u and ũ + u = (ũ - u) + 2u, where ε(ũ) = u
            let minus = vec![(1, one.clone())];
            let u = quadratic_u(&algebra)?;
            let plus = vec![(0, ground.scale(&BigInt::from(2), &u)), (1, one.clone())];
            (minus, plus, algebra.degree(1), algebra.degree(1))
        }
        (PeriodicTag::PeriodicTruncated, Some(FamilyTag::Truncated { height })) => {
            if *height < 2 {
                return Err(HomologicalError::FamilyMismatch);
            }
            let h = *height as usize;
            let top = h - 1;
            (vec![(1, one.clone())], vec![(top, one.clone())], algebra.degree(1), algebra.degree(top))
        }
        _ => return Err(HomologicalError::FamilyMismatch),
    };
    let mut shifts = vec![0i64];
    let mut maps = vec![Vec::new()];
    for s in 1..=max_s {
        let (m, shift) = if s % 2 == 1 { (odd_map.clone(), odd_shift) } else { (even_map.clone(), even_shift) };
        shifts.push(shifts[s - 1] + shift);
        maps.push(m);
    }
    Ok(PeriodicResolution { tag, algebra, shifts, maps, max_s })
}

/// Recovers `u` from the relation `(ũ - u)^2 = -2u (ũ - u)`.
fn quadratic_u(a: &AugmentedAlgebra) -> Result<GradedElement, HomologicalError> {
    let ground = a.ground();
    let sq = a.basis_product(1, 1);
    let coeff = sq.iter().find(|(l, _)| *l == 1).map(|(_, c)| c.clone()).unwrap_or_else(|| ground.zero(a.degree(1)));
    // coeff = -2u; over a ring where 2 may not be invertible, halve exactly
    let coords: Option<Vec<BigInt>> = coeff
        .coords
        .iter()
        .map(|c| {
            let neg = -c;
            (neg.clone() % 2 == BigInt::zero()).then(|| neg / 2)
        })
        .collect();
    coords.map(|c| GradedElement::new(coeff.degree, c)).ok_or(HomologicalError::FamilyMismatch)
}

impl PeriodicResolution {
    pub fn map(&self, s: usize) -> &Combination {
        &self.maps[s]
    }

    pub fn max_s(&self) -> usize {
        self.max_s
    }

    /// The resolution itself, realized over the base ring, with its
    /// augmentation to the ground ring.
    pub fn resolution_complex(&self, max_t: i64) -> Result<AugmentedComplex, HomologicalError> {
        let regular = AugModule::regular(&self.algebra);
        let complex = self.tensored_complex(&regular, max_t)?;
        let ground = self.algebra.ground();
        let module_dims: Vec<usize> = (0..=max_t).map(|t| ground.dim(t)).collect();
        let basis0 = module_basis(&regular, ground, 0, max_t);
        let augmentation = (0..=max_t)
            .map(|t| {
                let cols = basis0[t as usize]
                    .iter()
                    .map(|&(b, g)| if b == 0 { vec![(g, BigInt::from(1))] } else { vec![] })
                    .collect();
                SparseMatrix::from_columns(module_dims[t as usize], cols)
            })
            .collect();
        Ok(AugmentedComplex { complex, module_dims, augmentation })
    }

    /// `P ⊗_A N`: the complex `Σ^{σ_s} N` with `d_s` the action of the
    /// `s`-th map on `N`.
    pub fn tensored_complex(&self, n: &AugModule, max_t: i64) -> Result<FGChainComplex, HomologicalError> {
        let ground = self.algebra.ground();
        let bases: Vec<Vec<Vec<(usize, usize)>>> = self
            .shifts
            .iter()
            .map(|&sigma| {
                let mut per_t = module_basis(n, ground, sigma, max_t);
                per_t.truncate(max_t as usize + 1);
                per_t
            })
            .collect();
        let index: Vec<Vec<HashMap<(usize, usize), usize>>> = bases
            .iter()
            .map(|per_t| per_t.iter().map(|b| b.iter().enumerate().map(|(i, x)| (*x, i)).collect()).collect())
            .collect();
        let mut action_cache: Vec<HashMap<usize, Combination>> = vec![HashMap::new(); self.max_s + 1];
        for s in 1..=self.max_s {
            for b in 0..n.rank() {
                action_cache[s].insert(b, n.act_by(ground, &self.maps[s], b)?);
            }
        }
        let dims = |s: usize, t: i64| bases[s][t as usize].len();
        let diff = |s: usize, t: i64| -> SparseMatrix {
            let rows = bases[s - 1][t as usize].len();
            let sigma = self.shifts[s];
            let columns = bases[s][t as usize]
                .iter()
                .map(|&(b, g)| {
                    let gdeg = t - sigma - n.degree(b);
                    let basis_el = GradedElement::basis(gdeg, ground.dim(gdeg), g);
                    let mut col = Vec::new();
                    for (l, c) in &action_cache[s][&b] {
                        let prod = ground.mul(c, &basis_el).expect("within ground cutoff");
                        for (g2, x) in prod.coords.iter().enumerate() {
                            if !x.is_zero() {
                                col.push((index[s - 1][t as usize][&(*l, g2)], x.clone()));
                            }
                        }
                    }
                    col
                })
                .collect();
            SparseMatrix::from_columns(rows, columns)
        };
        FGChainComplex::new(ground.base(), self.max_s, max_t, dims, diff)
    }
}

impl PeriodicResolution {
    /// Multiplication by a ground element on `P_s ⊗_A N`, as a map from
    /// internal degree `t` to `t + |element|`.
    pub fn ground_action(&self, n: &AugModule, element: &GradedElement, s: usize, t: i64, max_t: i64) -> SparseMatrix {
        let ground = self.algebra.ground();
        let sigma = self.shifts[s];
        let t2 = t + element.degree;
        let src = module_basis(n, ground, sigma, max_t.max(t2));
        let dst = &src[t2 as usize];
        let index: HashMap<(usize, usize), usize> = dst.iter().enumerate().map(|(i, x)| (*x, i)).collect();
        let cols = src[t as usize]
            .iter()
            .map(|&(b, g)| {
                let gdeg = t - sigma - n.degree(b);
                let prod = ground.mul(element, &GradedElement::basis(gdeg, ground.dim(gdeg), g)).expect("within ground cutoff");
                prod.coords
                    .iter()
                    .enumerate()
                    .filter(|(_, x)| !x.is_zero())
                    .map(|(g2, x)| (index[&(b, g2)], x.clone()))
                    .collect()
            })
            .collect();
        SparseMatrix::from_columns(dst.len(), cols)
    }
}

/// Integral basis of `Σ^σ N` per internal degree: `(module basis, ground basis)`.
fn module_basis(
    n: &AugModule,
    ground: &super::augmented::Ground,
    sigma: i64,
    max_t: i64,
) -> Vec<Vec<(usize, usize)>> {
    (0..=max_t)
        .map(|t| {
            let mut basis = Vec::new();
            for b in 0..n.rank() {
                let gdeg = t - sigma - n.degree(b);
                for g in 0..ground.dim(gdeg) {
                    basis.push((b, g));
                }
            }
            basis
        })
        .collect()
}

/// The complex `... -> Σ^{2p} Z[u] -0-> Σ^{2p-2} Z[u] -Δ-> Σ^2 Z[u] -0-> Z[u]`
/// with `Δ = (p-1) u^{p-2}`, over `Z_(p)`, up to internal degree `T`.
/// Shifts are `σ_{2m} = m(2p-2)` and `σ_{2m+1} = m(2p-2) + 2`.
pub fn ll_hochschild_complex(p: u64, max_s: usize, max_t: i64) -> Result<FGChainComplex, HomologicalError> {
    if p == 2 {
        return Err(HomologicalError::EvenPrime);
    }
    let base = CoefficientRing::localized_at(p)?;
    let pi = p as i64;
    let shift = |s: usize| -> i64 {
        let m = (s / 2) as i64;
        m * (2 * pi - 2) + if s % 2 == 1 { 2 } else { 0 }
    };
    // basis of Σ^σ Z[u] in degree t: u^j with σ + 2j = t
    let dim = |s: usize, t: i64| usize::from(t >= shift(s) && (t - shift(s)) % 2 == 0);
    let diff = |s: usize, t: i64| -> SparseMatrix {
        let (rows, cols) = (dim(s - 1, t), dim(s, t));
        if s % 2 == 1 || rows == 0 || cols == 0 {
            return SparseMatrix::zeros(rows, cols);
        }
        SparseMatrix::from_columns(rows, vec![vec![(0, BigInt::from(pi - 1))]])
    };
    FGChainComplex::new(base, max_s, max_t, dim, diff)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::FGAbelianGroup;
    use crate::graded::{realize, FreeRealization, GradedRingPresentation};
    use crate::homological::augmented::Ground;
    use crate::homological::complex::{homology, validate_resolution};
    use crate::homological::induced_map_surjective;

    fn ku_ground(max: i64) -> Ground {
        let p = GradedRingPresentation::new(CoefficientRing::Integers, &[("u", 2)], vec![]);
        Ground(Arc::new(FreeRealization::new(realize(&p, max).unwrap()).unwrap()))
    }

    #[test]
    fn quadratic_tensored_down() {
        let k = ku_ground(30);
        let u = GradedElement::new(2, vec![BigInt::from(1)]);
        let a = Arc::new(AugmentedAlgebra::quadratic(k, u, 30).unwrap());
        let r = periodic_resolution(PeriodicTag::PeriodicQuadratic, a.clone(), 6).unwrap();
        assert!(validate_resolution(&r.resolution_complex(30).unwrap(), 6, 30).exact);
        let h = homology(&r.tensored_complex(&AugModule::ground(), 30).unwrap());
        assert_eq!(h.get(0, 4), FGAbelianGroup::free(1));
        assert_eq!(h.get(1, 2), FGAbelianGroup::free(1));
        assert_eq!(h.get(1, 4), FGAbelianGroup::cyclic(2));
        assert_eq!(h.get(2, 6), FGAbelianGroup::zero());
        assert!(periodic_resolution(PeriodicTag::PeriodicExterior, a, 6).is_err());
    }

    #[test]
    fn u_acts_onto_the_odd_columns() {
        let k = ku_ground(20);
        let u = GradedElement::new(2, vec![BigInt::from(1)]);
        let a = Arc::new(AugmentedAlgebra::quadratic(k, u.clone(), 20).unwrap());
        let r = periodic_resolution(PeriodicTag::PeriodicQuadratic, a, 5).unwrap();
        let g = AugModule::ground();
        let c = r.tensored_complex(&g, 20).unwrap();
        for (s, t) in [(1, 2), (1, 4), (3, 6), (0, 0)] {
            let f = r.ground_action(&g, &u, s, t, 20);
            assert!(induced_map_surjective(&c, s, t, t + 2, &f).unwrap(), "({s}, {t})");
        }
        // 2u kills H_{1,2} = Z, so multiplication by 2u is not onto H_{1,4}
        let two_u = GradedElement::new(2, vec![BigInt::from(2)]);
        let f = r.ground_action(&g, &two_u, 1, 2, 20);
        assert!(!induced_map_surjective(&c, 1, 2, 4, &f).unwrap());
    }

    #[test]
    fn hochschild_complex_homology() {
        let c = ll_hochschild_complex(3, 6, 30).unwrap();
        let h = homology(&c);
        assert_eq!(h.get(0, 8), FGAbelianGroup::free(1));
        assert_eq!(h.get(1, 2), FGAbelianGroup::free(1));
        assert_eq!(h.get(1, 4), FGAbelianGroup::zero());
        assert!((0..=30).all(|t| h.get(2, t).is_zero()));
        assert!(ll_hochschild_complex(2, 4, 10).is_err());
    }
}
