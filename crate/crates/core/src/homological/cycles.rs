use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::complex::FGChainComplex;
use super::HomologicalError;
use crate::exact::fp::{self, FpSpan};
use crate::exact::{dense_invariant_factors, smith_normal_form, CoefficientRing, FGAbelianGroup, IntegerMatrix, SparseMatrix};

/// One coordinate of a homology class: the order of the cyclic summand
/// (zero for a free summand) and the class's coordinate in it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassCoordinate {
    #[serde(with = "crate::exact::serde_int")]
    pub order: BigInt,
    #[serde(with = "crate::exact::serde_int")]
    pub coordinate: BigInt,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycleVerdict {
    pub is_cycle: bool,
    pub is_boundary: bool,
    /// The homology group at the chain's bidegree.
    pub group: FGAbelianGroup,
    /// Coordinates of the class in the cyclic decomposition of `group`.
    pub class: Vec<ClassCoordinate>,
    /// Whether the group is cyclic and generated by the class.
    pub generates: bool,
}

/// Tests whether a chain is a cycle or a boundary and locates its class in
/// homology.
pub fn verify_cycle(c: &FGChainComplex, s: usize, t: i64, element: &[BigInt]) -> Result<CycleVerdict, HomologicalError> {
    let n = c.dim(s, t);
    if element.len() != n {
        return Err(HomologicalError::WrongDegree { s, t, expected: n, found: element.len() });
    }
    let group = c.homology_at(s, t);
    let image = c.apply(s, t, element)?;
    match c.base() {
        CoefficientRing::PrimeField(p) => {
            let pb = BigInt::from(p);
            let is_cycle = image.iter().all(|x| x.mod_floor(&pb).is_zero());
            let mut verdict = CycleVerdict { is_cycle, is_boundary: false, group: group.clone(), class: vec![], generates: false };
            if !is_cycle {
                return Ok(verdict);
            }
            let mut span = FpSpan::new(p);
            for col in c.differential(s + 1, t).entries_mod(p) {
                span.insert(&col, None);
            }
            let mut k = 0;
            for z in fp::kernel_basis_mod_p(&c.differential(s, t).entries_mod(p), p) {
                if span.insert(&z, Some(k)) {
                    k += 1;
                }
            }
            let v: Vec<u64> = element.iter().map(|x| x.mod_floor(&pb).try_into().unwrap()).collect();
            let combo = span.express(&fp::from_dense(&v, p)).expect("cycles lie in the span");
            let dense = fp::to_dense(&combo, k);
            verdict.is_boundary = combo.is_empty();
            verdict.class = dense.iter().map(|&x| ClassCoordinate { order: pb.clone(), coordinate: BigInt::from(x) }).collect();
            verdict.generates = k == 1 && dense[0] != 0;
            Ok(verdict)
        }
        base => {
            let is_cycle = image.iter().all(Zero::is_zero);
            let mut verdict = CycleVerdict { is_cycle, is_boundary: false, group: group.clone(), class: vec![], generates: false };
            if !is_cycle {
                return Ok(verdict);
            }
            let d_out = c.differential(s, t).to_dense();
            let d_in = c.differential(s + 1, t).to_dense();
            let snf = smith_normal_form(&d_out);
            let r = snf.rank();
            let w = snf.v_inv.apply(element)?;
            let tail: Vec<BigInt> = w[r..].to_vec();
            let m = snf.v_inv.mul(&d_in)?.row_block(r, n);
            let snf2 = smith_normal_form(&m);
            let coords = snf2.u.apply(&tail)?;
            let mut class = Vec::new();
            for (i, mut x) in coords.into_iter().enumerate() {
                let mut order = if i < m.rows().min(m.cols()) { snf2.d[(i, i)].clone() } else { BigInt::zero() };
                if let CoefficientRing::IntegersLocalizedAt(p) = base {
                    let pb = BigInt::from(p);
                    if !order.is_zero() {
                        let mut q = BigInt::one();
                        while (&order % &pb).is_zero() {
                            order /= &pb;
                            q *= &pb;
                        }
                        order = q;
                    }
                }
                if order.is_one() {
                    continue;
                }
                if !order.is_zero() {
                    x = x.mod_floor(&order);
                }
                class.push(ClassCoordinate { order, coordinate: x });
            }
            verdict.is_boundary = class.iter().all(|c| c.coordinate.is_zero());
            verdict.generates = class.len() == 1 && {
                let c0 = &class[0];
                if c0.order.is_zero() {
                    match base {
                        CoefficientRing::IntegersLocalizedAt(p) => !(&c0.coordinate % BigInt::from(p)).is_zero(),
                        _ => c0.coordinate.abs().is_one(),
                    }
                } else {
                    c0.coordinate.gcd(&c0.order).is_one()
                }
            };
            Ok(verdict)
        }
    }
}

/// Whether the chain map `f: C_{s,t} -> C_{s,t2}` induces a surjection
/// `H_{s,t} -> H_{s,t2}` (after localization for `Z_(p)` complexes).
pub fn induced_map_surjective(c: &FGChainComplex, s: usize, t: i64, t2: i64, f: &SparseMatrix) -> Result<bool, HomologicalError> {
    let n2 = c.dim(s, t2);
    if f.rows() != n2 || f.cols() != c.dim(s, t) {
        return Err(HomologicalError::Shape { s, t, expected: (n2, c.dim(s, t)), found: (f.rows(), f.cols()) });
    }
    let kernel_basis = |t: i64| -> Vec<Vec<BigInt>> {
        let snf = smith_normal_form(&c.differential(s, t).to_dense());
        (snf.rank()..c.dim(s, t)).map(|j| snf.v.column(j)).collect()
    };
    if let CoefficientRing::PrimeField(p) = c.base() {
        let mut span = FpSpan::new(p);
        for col in c.differential(s + 1, t2).entries_mod(p) {
            span.insert(&col, None);
        }
        for z in fp::kernel_basis_mod_p(&c.differential(s, t).entries_mod(p), p) {
            let v: Vec<BigInt> = fp::to_dense(&z, c.dim(s, t)).into_iter().map(BigInt::from).collect();
            let w: Vec<u64> = f.apply(&v)?.iter().map(|x| x.mod_floor(&BigInt::from(p)).try_into().unwrap()).collect();
            span.insert(&fp::from_dense(&w, p), None);
        }
        let z2 = fp::kernel_basis_mod_p(&c.differential(s, t2).entries_mod(p), p).len();
        return Ok(span.dim() == z2);
    }
    let snf2 = smith_normal_form(&c.differential(s, t2).to_dense());
    let r = snf2.rank();
    let k = n2 - r;
    let mut cols: Vec<Vec<BigInt>> = Vec::new();
    for z in kernel_basis(t) {
        cols.push(snf2.v_inv.apply(&f.apply(&z)?)?[r..].to_vec());
    }
    let d_in = c.differential(s + 1, t2).to_dense();
    for j in 0..d_in.cols() {
        cols.push(snf2.v_inv.apply(&d_in.column(j))?[r..].to_vec());
    }
    let m = IntegerMatrix::from_fn(k, cols.len(), |i, j| cols[j][i].clone());
    let factors = dense_invariant_factors(&m);
    if factors.len() < k {
        return Ok(false);
    }
    Ok(match c.base() {
        CoefficientRing::IntegersLocalizedAt(p) => factors.iter().all(|d| !(d % BigInt::from(p)).is_zero()),
        _ => factors.iter().all(One::is_one),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_term(p: i64) -> FGChainComplex {
        FGChainComplex::new(
            CoefficientRing::Integers,
            1,
            0,
            |_, _| 1,
            |_, _| SparseMatrix::from_columns(1, vec![vec![(0, BigInt::from(p))]]),
        )
        .unwrap()
        .bounded()
    }

    #[test]
    fn generator_of_cokernel() {
        let c = two_term(5);
        let v = verify_cycle(&c, 0, 0, &[BigInt::from(2)]).unwrap();
        assert!(v.is_cycle && !v.is_boundary && v.generates);
        let v = verify_cycle(&c, 0, 0, &[BigInt::from(10)]).unwrap();
        assert!(v.is_cycle && v.is_boundary && !v.generates);
        let v = verify_cycle(&c, 1, 0, &[BigInt::from(1)]).unwrap();
        assert!(!v.is_cycle);
    }

    #[test]
    fn zero_element_is_a_boundary() {
        let c = two_term(3);
        let v = verify_cycle(&c, 0, 0, &[BigInt::zero()]).unwrap();
        assert!(v.is_cycle && v.is_boundary);
        assert!(matches!(verify_cycle(&c, 0, 0, &[]), Err(HomologicalError::WrongDegree { .. })));
    }

    #[test]
    fn mod_p_classes() {
        let c = two_term(3).reduce_mod_p(3).unwrap();
        let v = verify_cycle(&c, 1, 0, &[BigInt::from(1)]).unwrap();
        assert!(v.is_cycle && v.generates);
    }
}
