use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::sync::Arc;

use super::augmented::{AugModule, AugmentedAlgebra};
use super::bar::{BarComplex, Chain};
use super::complex::{homology, validate_resolution, BigradedGroups};
use super::periodic::{periodic_resolution, PeriodicTag};
use super::HomologicalError;
use crate::exact::fp::{self, FpSpan, FpVec};
use crate::exact::{CoefficientRing, FGAbelianGroup};
use crate::graded::{BasedAlgebra, GradedError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TorMethod {
    Bar,
    Resolution(PeriodicTag),
}

/// `Tor^A_{s,t}(M, N)` for `s ≤ S`, `t ≤ T`.
///
/// With a periodic resolution, `N` must be the ground ring; the resolution
/// is certified exact before it is used.
pub fn tor(
    algebra: Arc<AugmentedAlgebra>,
    m: &AugModule,
    n: &AugModule,
    max_s: usize,
    max_t: i64,
    method: TorMethod,
) -> Result<BigradedGroups, HomologicalError> {
    match method {
        TorMethod::Bar => {
            let bar = BarComplex::new(algebra, m.clone(), n.clone(), max_s + 1, max_t)?;
            Ok(homology(bar.complex()))
        }
        TorMethod::Resolution(tag) => {
            let other = if n.is_trivial() && n.rank() == 1 && n.degree(0) == 0 {
                m
            } else if m.is_trivial() && m.rank() == 1 && m.degree(0) == 0 {
                n
            } else {
                return Err(HomologicalError::Unsupported("periodic resolutions resolve the ground ring".into()));
            };
            let res = periodic_resolution(tag, algebra, max_s + 1)?;
            let cert = validate_resolution(&res.resolution_complex(max_t)?, max_s + 1, max_t);
            if !cert.exact {
                return Err(HomologicalError::InvalidResolution(format!("{:?}", cert.failure)));
            }
            Ok(homology(&res.tensored_complex(other, max_t)?))
        }
    }
}

/// The `E^2` term `Tor^{A_*}(M, k_*)` of the spectral sequence attached to
/// a relative cofiber sequence; differentials `d^r` have bidegree
/// `(-r, r-1)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct E2Term {
    pub groups: BigradedGroups,
    /// `d^r: E^r_{s,t} -> E^r_{s-r, t+r-1}`.
    pub differential: (i64, i64),
}

pub fn greenlees_tor(
    a_star: Arc<AugmentedAlgebra>,
    m: &AugModule,
    max_s: usize,
    max_t: i64,
    method: TorMethod,
) -> Result<E2Term, HomologicalError> {
    let groups = tor(a_star, m, &AugModule::ground(), max_s, max_t, method)?;
    Ok(E2Term { groups, differential: (-1, 0) })
}

/// One class of an iterated Tor algebra: its bidegree and cycle
/// representative in the bar complex of the previous stage.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TorClass {
    pub s: usize,
    pub t: i64,
    pub label: String,
}

/// `Tor^A(F_p, F_p)` as an algebra graded by total degree, with products
/// computed by shuffling cycle representatives.
#[derive(Clone, Debug)]
pub struct TorAlgebra {
    p: u64,
    max_degree: i64,
    pub groups: BigradedGroups,
    /// Per total degree, the classes in basis order.
    classes: Vec<Vec<TorClass>>,
    products: HashMap<(i64, usize, i64, usize), Vec<u64>>,
}

impl TorAlgebra {
    /// Computes `Tor^A(F_p, F_p)` through total degree `max_degree`, using
    /// bar degrees up to `max_s`. If `max_s` is too small to reach every
    /// class of total degree `≤ max_degree`, the cutoff shrinks to the
    /// largest complete total degree.
    pub fn compute(alg: &dyn BasedAlgebra, max_s: usize, max_degree: i64) -> Result<Self, HomologicalError> {
        let p = alg.base().field_characteristic().ok_or(HomologicalError::FieldRequired)?;
        let min_deg = (1..=max_degree.min(alg.max_degree())).find(|&d| alg.dim(d) > 0);
        let max_degree = match min_deg {
            Some(m) => max_degree.min((max_s as i64 + 1) * (m + 1) - 1),
            None => max_degree,
        };
        let needed_s = match min_deg {
            Some(m) => (max_degree / (m + 1)) as usize,
            None => 0,
        };
        let algebra = Arc::new(AugmentedAlgebra::from_based(alg, max_degree)?);
        let bar = BarComplex::new(algebra, AugModule::ground(), AugModule::ground(), needed_s + 1, max_degree)?;
        let complex = bar.complex();
        let mut groups = BigradedGroups::new(needed_s, max_degree, Some(p));
        let mut spans: HashMap<(usize, i64), FpSpan> = HashMap::new();
        let mut reps: HashMap<(usize, i64), Vec<FpVec>> = HashMap::new();
        for s in 0..=needed_s {
            for t in 0..=(max_degree - s as i64) {
                if complex.dim(s, t) == 0 {
                    continue;
                }
                let d_out = complex.differential(s, t).entries_mod(p);
                let d_in = complex.differential(s + 1, t).entries_mod(p);
                let mut span = FpSpan::new(p);
                for col in &d_in {
                    span.insert(col, None);
                }
                let mut cell_reps = Vec::new();
                for z in fp::kernel_basis_mod_p(&d_out, p) {
                    if span.insert(&z, Some(cell_reps.len())) {
                        cell_reps.push(z);
                    }
                }
                if !cell_reps.is_empty() {
                    groups.insert(s, t, FGAbelianGroup::elementary(p, cell_reps.len()));
                }
                spans.insert((s, t), span);
                reps.insert((s, t), cell_reps);
            }
        }
        let mut classes: Vec<Vec<TorClass>> = vec![Vec::new(); max_degree as usize + 1];
        let mut cell_position: Vec<Vec<usize>> = vec![Vec::new(); max_degree as usize + 1];
        let mut class_index: HashMap<(usize, i64, usize), usize> = HashMap::new();
        let mut keys: Vec<&(usize, i64)> = reps.keys().collect();
        keys.sort();
        for &(s, t) in keys {
            let total = s as i64 + t;
            for (i, z) in reps[&(s, t)].iter().enumerate() {
                class_index.insert((s, t, i), classes[total as usize].len());
                let lead = z.last().map(|(k, _)| bar.tuple_label(s, bar.cell_basis(s, t)[*k].0)).unwrap_or_default();
                classes[total as usize].push(TorClass { s, t, label: lead });
                cell_position[total as usize].push(i);
            }
        }
        let to_chain = |s: usize, t: i64, v: &FpVec| Chain {
            s,
            t,
            coords: fp::to_dense(v, complex.dim(s, t)).into_iter().map(BigInt::from).collect(),
        };
        let mut products = HashMap::new();
        for d1 in 0..=max_degree {
            for (i, c1) in classes[d1 as usize].iter().enumerate() {
                for d2 in 0..=(max_degree - d1) {
                    for (j, c2) in classes[d2 as usize].iter().enumerate() {
                        let a = to_chain(c1.s, c1.t, &reps[&(c1.s, c1.t)][cell_position[d1 as usize][i]]);
                        let b = to_chain(c2.s, c2.t, &reps[&(c2.s, c2.t)][cell_position[d2 as usize][j]]);
                        let prod = bar.shuffle_product(&a, &b)?;
                        let v: Vec<u64> = prod.coords.iter().map(|c| c.mod_floor(&BigInt::from(p)).to_u64().unwrap()).collect();
                        let v = fp::from_dense(&v, p);
                        let (s, t) = (prod.s, prod.t);
                        let mut out = vec![0u64; classes[(d1 + d2) as usize].len()];
                        if !v.is_empty() {
                            let span = spans.get(&(s, t)).ok_or(HomologicalError::NotACycle)?;
                            let combo = span.express(&v).ok_or(HomologicalError::NotACycle)?;
                            for (label, c) in combo {
                                out[class_index[&(s, t, label)]] = c;
                            }
                        }
                        products.insert((d1, i, d2, j), out);
                    }
                }
            }
        }
        Ok(TorAlgebra { p, max_degree, groups, classes, products })
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn classes(&self, degree: i64) -> &[TorClass] {
        if (0..=self.max_degree).contains(&degree) {
            &self.classes[degree as usize]
        } else {
            &[]
        }
    }

    /// Dimensions by total degree.
    pub fn total_dimensions(&self) -> Vec<usize> {
        self.classes.iter().map(Vec::len).collect()
    }

    fn product_vec(&self, d1: i64, i: usize, d2: i64, j: usize) -> Option<&Vec<u64>> {
        self.products.get(&(d1, i, d2, j))
    }

    /// Graded commutativity `xy = (-1)^{|x||y|} yx` on all basis pairs.
    pub fn is_graded_commutative(&self) -> bool {
        self.products.iter().all(|(&(d1, i, d2, j), v)| {
            let w = &self.products[&(d2, j, d1, i)];
            let sign = if (d1 * d2) % 2 != 0 { self.p - 1 } else { 1 };
            v.iter().zip(w).all(|(a, b)| *a == (b * sign) % self.p)
        })
    }

    /// The class of total degree 0 is a two-sided unit.
    pub fn is_unital(&self) -> bool {
        if self.classes[0].len() != 1 {
            return false;
        }
        (0..=self.max_degree).all(|d| {
            (0..self.classes[d as usize].len()).all(|i| {
                let mut e = vec![0u64; self.classes[d as usize].len()];
                e[i] = 1;
                self.product_vec(0, 0, d, i) == Some(&e) && self.product_vec(d, i, 0, 0) == Some(&e)
            })
        })
    }

    /// Associativity on every basis triple within the cutoff.
    pub fn is_associative(&self) -> bool {
        let p = self.p;
        let mul_vec = |d1: i64, v: &[u64], d2: i64, j: usize| -> Vec<u64> {
            let mut out = vec![0u64; self.classes[(d1 + d2) as usize].len()];
            for (i, c) in v.iter().enumerate().filter(|(_, c)| **c != 0) {
                for (k, x) in self.products[&(d1, i, d2, j)].iter().enumerate() {
                    out[k] = (out[k] + c * x) % p;
                }
            }
            out
        };
        let vec_mul = |d1: i64, i: usize, d2: i64, v: &[u64]| -> Vec<u64> {
            let mut out = vec![0u64; self.classes[(d1 + d2) as usize].len()];
            for (j, c) in v.iter().enumerate().filter(|(_, c)| **c != 0) {
                for (k, x) in self.products[&(d1, i, d2, j)].iter().enumerate() {
                    out[k] = (out[k] + c * x) % p;
                }
            }
            out
        };
        for d1 in 1..=self.max_degree {
            for d2 in 1..=(self.max_degree - d1) {
                for d3 in 1..=(self.max_degree - d1 - d2) {
                    for i in 0..self.classes[d1 as usize].len() {
                        for j in 0..self.classes[d2 as usize].len() {
                            for k in 0..self.classes[d3 as usize].len() {
                                let left = mul_vec(d1 + d2, &self.products[&(d1, i, d2, j)], d3, k);
                                let right = vec_mul(d1, i, d2 + d3, &self.products[&(d2, j, d3, k)]);
                                if left != right {
                                    return false;
                                }
                            }
                        }
                    }
                }
            }
        }
        true
    }
}

impl BasedAlgebra for TorAlgebra {
    fn base(&self) -> CoefficientRing {
        CoefficientRing::PrimeField(self.p)
    }

    fn max_degree(&self) -> i64 {
        self.max_degree
    }

    fn dim(&self, degree: i64) -> usize {
        self.classes(degree).len()
    }

    fn basis_label(&self, degree: i64, index: usize) -> String {
        let c = &self.classes[degree as usize][index];
        format!("{}@({},{})", c.label, c.s, c.t)
    }

    fn product(&self, d1: i64, i: usize, d2: i64, j: usize) -> Result<Vec<BigInt>, GradedError> {
        self.product_vec(d1, i, d2, j)
            .map(|v| v.iter().map(|&x| BigInt::from(x)).collect())
            .ok_or(GradedError::DegreeOverflow { degree: d1 + d2, max: self.max_degree })
    }
}

/// `A_1 = Tor^{A_0}(F_p, F_p)`, `A_2 = Tor^{A_1}(F_p, F_p)`, ... for `n`
/// stages, each an algebra graded by total degree.
pub fn iterated_tor(a0: Arc<dyn BasedAlgebra>, n: usize, max_s: usize, max_t: i64) -> Result<Vec<TorAlgebra>, HomologicalError> {
    if !a0.base().is_field() {
        return Err(HomologicalError::FieldRequired);
    }
    let mut out: Vec<TorAlgebra> = Vec::with_capacity(n);
    for _ in 0..n {
        let next = match out.last() {
            None => TorAlgebra::compute(a0.as_ref(), max_s, max_t)?,
            Some(prev) => TorAlgebra::compute(prev, max_s, prev.max_degree)?,
        };
        out.push(next);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graded::{poly, realize, DividedPowerFamily, FreeRealization, GradedRingPresentation};
    use num_traits::Zero;

    fn exterior(p: u64, degree: i64, max: i64) -> Arc<dyn BasedAlgebra> {
        let pres = GradedRingPresentation::new(
            CoefficientRing::prime_field(p).unwrap(),
            &[("e", degree)],
            vec![poly(&[(1, &[("e", 2)])])],
        );
        Arc::new(FreeRealization::new(realize(&pres, max).unwrap()).unwrap())
    }

    #[test]
    fn tor_of_exterior_is_divided_power() {
        for p in [2u64, 3] {
            let a1 = TorAlgebra::compute(exterior(p, 3, 24).as_ref(), 24, 24).unwrap();
            let gamma = DividedPowerFamily::new(CoefficientRing::prime_field(p).unwrap(), "y", 4, false, 24).unwrap();
            for d in 0..=24 {
                assert_eq!(a1.dim(d), gamma.dim(d), "p={p} degree {d}");
                for d2 in 0..=(24 - d) {
                    if a1.dim(d) == 1 && a1.dim(d2) == 1 {
                        // γ_i γ_j = binom(i+j, i) γ_{i+j} up to the choice of generators
                        let ours = a1.product(d, 0, d2, 0).unwrap()[0].clone();
                        let theirs = gamma.product(d, 0, d2, 0).unwrap()[0].clone();
                        assert_eq!(ours.is_zero(), theirs.is_zero(), "p={p} {d}*{d2}");
                    }
                }
            }
            assert!(a1.is_graded_commutative() && a1.is_unital() && a1.is_associative());
        }
    }

    #[test]
    fn methods_agree_on_truncated() {
        let k = super::super::augmented::Ground::point(CoefficientRing::Integers);
        let a = Arc::new(AugmentedAlgebra::truncated(k, 2, 4, 24).unwrap());
        let g = AugModule::ground();
        let bar = tor(a.clone(), &g, &g, 6, 24, TorMethod::Bar).unwrap();
        let res = tor(a, &g, &g, 6, 24, TorMethod::Resolution(PeriodicTag::PeriodicTruncated)).unwrap();
        assert_eq!(bar, res);
    }
}
