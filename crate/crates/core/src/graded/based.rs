use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use super::realize::{DegreewiseRealization, GradedElement};
use super::GradedError;
use crate::exact::{p_adic_digits, CoefficientRing};

/// A graded algebra that is degreewise free over its base with a chosen
/// homogeneous basis. For a prime-field base, coordinates are taken mod p.
/// Degree 0 is spanned by the unit, basis index 0.
pub trait BasedAlgebra: Send + Sync + fmt::Debug {
    fn base(&self) -> CoefficientRing;
    fn max_degree(&self) -> i64;
    fn dim(&self, degree: i64) -> usize;
    fn basis_label(&self, degree: i64, index: usize) -> String;
    /// Coordinates of `b_{d1,i} * b_{d2,j}` in degree `d1 + d2`.
    fn product(&self, d1: i64, i: usize, d2: i64, j: usize) -> Result<Vec<BigInt>, GradedError>;

    fn modulus(&self) -> Option<BigInt> {
        self.base().field_characteristic().map(BigInt::from)
    }
}

/// Multiplies two homogeneous elements given in basis coordinates.
pub fn multiply_elements(
    alg: &dyn BasedAlgebra,
    a: &GradedElement,
    b: &GradedElement,
) -> Result<GradedElement, GradedError> {
    let d = a.degree + b.degree;
    if d > alg.max_degree() {
        return Err(GradedError::DegreeOverflow { degree: d, max: alg.max_degree() });
    }
    let mut out = vec![BigInt::zero(); alg.dim(d)];
    for (i, x) in a.coords.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
        for (j, y) in b.coords.iter().enumerate().filter(|(_, y)| !y.is_zero()) {
            let prod = alg.product(a.degree, i, b.degree, j)?;
            let c = x * y;
            for (o, z) in out.iter_mut().zip(prod) {
                *o += &c * z;
            }
        }
    }
    if let Some(m) = alg.modulus() {
        for o in &mut out {
            *o = o.mod_floor(&m);
        }
    }
    Ok(GradedElement::new(d, out))
}

/// Every basis element as a vector of labels, degree by degree.
pub fn basis_labels(alg: &dyn BasedAlgebra) -> Vec<(i64, Vec<String>)> {
    (0..=alg.max_degree())
        .map(|d| (d, (0..alg.dim(d)).map(|i| alg.basis_label(d, i)).collect()))
        .collect()
}

/// A realization whose groups are free (or whose base is a field), with
/// the normal-form generators as basis.
#[derive(Debug, Clone)]
pub struct FreeRealization {
    inner: DegreewiseRealization,
}

impl FreeRealization {
    pub fn new(r: DegreewiseRealization) -> Result<Self, GradedError> {
        if !r.is_degreewise_free() {
            return Err(GradedError::NotDegreewiseFree);
        }
        let one = r.one();
        if r.degree(0).map(|d| d.num_generators()) != Some(1) || !one.coords[0].is_one() {
            return Err(GradedError::NotDegreewiseFree);
        }
        Ok(FreeRealization { inner: r })
    }

    pub fn realization(&self) -> &DegreewiseRealization {
        &self.inner
    }
}

impl BasedAlgebra for FreeRealization {
    fn base(&self) -> CoefficientRing {
        self.inner.base()
    }

    fn max_degree(&self) -> i64 {
        self.inner.max_degree()
    }

    fn dim(&self, degree: i64) -> usize {
        self.inner.degree(degree).map_or(0, |d| d.num_generators())
    }

    fn basis_label(&self, degree: i64, index: usize) -> String {
        let e = GradedElement::basis(degree, self.dim(degree), index);
        self.inner.format_element(&e).unwrap_or_default()
    }

    fn product(&self, d1: i64, i: usize, d2: i64, j: usize) -> Result<Vec<BigInt>, GradedError> {
        let a = self.inner.generator_element(d1, i)?;
        let b = self.inner.generator_element(d2, j)?;
        Ok(self.inner.multiply(&a, &b)?.coords)
    }
}

/// The divided power algebra `Γ(y)` on one even generator: basis `γ_i(y)`
/// in degree `i |y|`, with `γ_i γ_j = binom(i+j, i) γ_{i+j}`. In truncated
/// mode (prime-field base only) the basis is instead the monomials
/// `∏ γ_{p^k}^{t_k}` with digits `t_k < p`, which multiply without carries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DividedPowerFamily {
    pub base: CoefficientRing,
    pub generator_name: String,
    pub generator_degree: i64,
    pub truncated: bool,
    pub max_degree: i64,
}

impl DividedPowerFamily {
    pub fn new(
        base: CoefficientRing,
        generator_name: &str,
        generator_degree: i64,
        truncated: bool,
        max_degree: i64,
    ) -> Result<Self, GradedError> {
        base.validate()?;
        if generator_degree <= 0 || generator_degree % 2 != 0 {
            return Err(GradedError::NonPositiveGeneratorDegree(generator_name.to_string(), generator_degree));
        }
        if truncated && !base.is_field() {
            return Err(GradedError::FieldRequired);
        }
        Ok(DividedPowerFamily { base, generator_name: generator_name.to_string(), generator_degree, truncated, max_degree })
    }

    fn index(&self, degree: i64) -> Option<u64> {
        (degree >= 0 && degree % self.generator_degree == 0).then(|| (degree / self.generator_degree) as u64)
    }
}

pub fn binomial(n: u64, k: u64) -> BigInt {
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

impl BasedAlgebra for DividedPowerFamily {
    fn base(&self) -> CoefficientRing {
        self.base
    }

    fn max_degree(&self) -> i64 {
        self.max_degree
    }

    fn dim(&self, degree: i64) -> usize {
        usize::from(degree <= self.max_degree && self.index(degree).is_some())
    }

    fn basis_label(&self, degree: i64, _index: usize) -> String {
        let i = self.index(degree).unwrap_or(0);
        let y = &self.generator_name;
        if i == 0 {
            return "1".into();
        }
        if self.truncated {
            let p = self.base.field_characteristic().unwrap();
            let parts: Vec<String> = p_adic_digits(i, p)
                .iter()
                .enumerate()
                .filter(|(_, t)| **t > 0)
                .map(|(k, t)| {
                    let g = format!("γ_{}({y})", p.pow(k as u32));
                    if *t == 1 {
                        g
                    } else {
                        format!("{g}^{t}")
                    }
                })
                .collect();
            parts.join(" ")
        } else {
            format!("γ_{i}({y})")
        }
    }

    fn product(&self, d1: i64, _i: usize, d2: i64, _j: usize) -> Result<Vec<BigInt>, GradedError> {
        let d = d1 + d2;
        if d > self.max_degree {
            return Err(GradedError::DegreeOverflow { degree: d, max: self.max_degree });
        }
        let (a, b) = match (self.index(d1), self.index(d2)) {
            (Some(a), Some(b)) => (a, b),
            _ => return Err(GradedError::DegreeMismatch(d1, d2)),
        };
        let c = if self.truncated {
            let p = self.base.field_characteristic().unwrap();
            let (da, db) = (p_adic_digits(a, p), p_adic_digits(b, p));
            let carry = (0..da.len().max(db.len()))
                .any(|k| da.get(k).copied().unwrap_or(0) + db.get(k).copied().unwrap_or(0) >= p);
            BigInt::from(u8::from(!carry))
        } else {
            binomial(a + b, a)
        };
        let c = match self.modulus() {
            Some(m) => c.mod_floor(&m),
            None => c,
        };
        Ok(vec![c])
    }
}

/// The graded tensor product `A ⊗ B` with `(a ⊗ b)(a' ⊗ b') =
/// (-1)^{|b||a'|} aa' ⊗ bb'`.
#[derive(Clone, Debug)]
pub struct TensorProduct {
    left: Arc<dyn BasedAlgebra>,
    right: Arc<dyn BasedAlgebra>,
    max_degree: i64,
    /// Per degree: the basis pairs `(d1, i, d2, j)`.
    bases: Vec<Vec<(i64, usize, i64, usize)>>,
    index: HashMap<(i64, usize, i64, usize), usize>,
}

impl TensorProduct {
    pub fn new(left: Arc<dyn BasedAlgebra>, right: Arc<dyn BasedAlgebra>) -> Result<Self, GradedError> {
        if left.base() != right.base() {
            return Err(GradedError::BaseMismatch);
        }
        let max_degree = left.max_degree().min(right.max_degree());
        let mut bases = Vec::new();
        let mut index = HashMap::new();
        for d in 0..=max_degree {
            let mut basis = Vec::new();
            for d1 in 0..=d {
                for i in 0..left.dim(d1) {
                    for j in 0..right.dim(d - d1) {
                        index.insert((d1, i, d - d1, j), basis.len());
                        basis.push((d1, i, d - d1, j));
                    }
                }
            }
            bases.push(basis);
        }
        Ok(TensorProduct { left, right, max_degree, bases, index })
    }

    /// Tensor product of several factors, left to right.
    pub fn of(factors: Vec<Arc<dyn BasedAlgebra>>) -> Result<Arc<dyn BasedAlgebra>, GradedError> {
        let mut it = factors.into_iter();
        let mut acc = it.next().ok_or(GradedError::EmptyTensor)?;
        for f in it {
            acc = Arc::new(TensorProduct::new(acc, f)?);
        }
        Ok(acc)
    }
}

impl BasedAlgebra for TensorProduct {
    fn base(&self) -> CoefficientRing {
        self.left.base()
    }

    fn max_degree(&self) -> i64 {
        self.max_degree
    }

    fn dim(&self, degree: i64) -> usize {
        if (0..=self.max_degree).contains(&degree) {
            self.bases[degree as usize].len()
        } else {
            0
        }
    }

    fn basis_label(&self, degree: i64, index: usize) -> String {
        let (d1, i, d2, j) = self.bases[degree as usize][index];
        let (l, r) = (self.left.basis_label(d1, i), self.right.basis_label(d2, j));
        match (l.as_str(), r.as_str()) {
            ("1", _) => r,
            (_, "1") => l,
            _ => format!("{l} {r}"),
        }
    }

    fn product(&self, d1: i64, i: usize, d2: i64, j: usize) -> Result<Vec<BigInt>, GradedError> {
        let d = d1 + d2;
        if d > self.max_degree {
            return Err(GradedError::DegreeOverflow { degree: d, max: self.max_degree });
        }
        let (a1, ai, b1, bi) = self.bases[d1 as usize][i];
        let (a2, aj, b2, bj) = self.bases[d2 as usize][j];
        let left = self.left.product(a1, ai, a2, aj)?;
        let right = self.right.product(b1, bi, b2, bj)?;
        let sign = if (b1 * a2) % 2 != 0 { -BigInt::one() } else { BigInt::one() };
        let mut out = vec![BigInt::zero(); self.dim(d)];
        for (x, cl) in left.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            for (y, cr) in right.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
                let k = self.index[&(a1 + a2, x, b1 + b2, y)];
                out[k] += &sign * cl * cr;
            }
        }
        if let Some(m) = self.modulus() {
            for o in &mut out {
                *o = o.mod_floor(&m);
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn divided_power_products() {
        let g = DividedPowerFamily::new(CoefficientRing::Integers, "y", 2, false, 20).unwrap();
        assert_eq!(g.product(2, 0, 4, 0).unwrap(), vec![BigInt::from(3)]);
        assert_eq!(g.product(0, 0, 6, 0).unwrap(), vec![BigInt::one()]);
        let f3 = CoefficientRing::prime_field(3).unwrap();
        let t = DividedPowerFamily::new(f3, "y", 2, true, 40).unwrap();
        // y_1 * y_2 carries in base 3 only when digits overflow
        assert_eq!(t.product(2, 0, 2, 0).unwrap(), vec![BigInt::one()]);
        assert_eq!(t.product(4, 0, 2, 0).unwrap(), vec![BigInt::zero()]);
        assert_eq!(t.product(6, 0, 2, 0).unwrap(), vec![BigInt::one()]);
        assert_eq!(t.basis_label(10, 0), "γ_1(y)^2 γ_3(y)");
        assert!(DividedPowerFamily::new(CoefficientRing::Integers, "y", 2, true, 4).is_err());
    }

    #[test]
    fn tensor_signs() {
        use crate::graded::presentation::{poly, GradedRingPresentation};
        use crate::graded::realize::realize;
        let ext = |name: &str, d: i64| -> Arc<dyn BasedAlgebra> {
            let p = GradedRingPresentation::new(CoefficientRing::Integers, &[(name, d)], vec![poly(&[(1, &[(name, 2)])])]);
            Arc::new(FreeRealization::new(realize(&p, 10).unwrap()).unwrap())
        };
        let t = TensorProduct::new(ext("a", 1), ext("b", 3)).unwrap();
        assert_eq!(t.dim(4), 1);
        // (1 ⊗ b)(a ⊗ 1) = - a ⊗ b
        let ab = t.product(3, 0, 1, 0).unwrap();
        let ba = t.product(1, 0, 3, 0).unwrap();
        assert_eq!(ab[0], -ba[0].clone());
    }
}
