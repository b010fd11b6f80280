use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;

use super::presentation::{koszul_sign, monomials_of_degree, GradedRingPresentation, Monomial, ResolvedRelation};
use super::GradedError;
use crate::exact::{p_adic_valuation, smith_normal_form, CoefficientRing, FGAbelianGroup, IntegerMatrix};

/// A homogeneous element, given by its coordinates in the normal-form
/// generators of its degree.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GradedElement {
    pub degree: i64,
    #[serde(with = "crate::exact::serde_int::vec")]
    pub coords: Vec<BigInt>,
}

impl GradedElement {
    pub fn new(degree: i64, coords: Vec<BigInt>) -> Self {
        GradedElement { degree, coords }
    }

    pub fn zero(degree: i64, len: usize) -> Self {
        GradedElement { degree, coords: vec![BigInt::zero(); len] }
    }

    pub fn basis(degree: i64, len: usize, index: usize) -> Self {
        let mut e = Self::zero(degree, len);
        e.coords[index] = BigInt::one();
        e
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }
}

/// The data of one degree: monomial basis, relation lattice quotient, and
/// the maps between monomial coordinates and group coordinates.
#[derive(Clone, Debug)]
pub struct DegreeData {
    pub monomials: Vec<Monomial>,
    /// The quotient over the integers (before any localization).
    pub group: FGAbelianGroup,
    /// Order of each group generator; zero for free generators.
    orders: Vec<BigInt>,
    /// Rows of the projection: `coords[g] = proj[g] · monomial_vector`.
    proj: Vec<Vec<BigInt>>,
    /// Monomial vector representing each group generator.
    lift: Vec<Vec<BigInt>>,
    index: HashMap<Monomial, usize>,
}

impl DegreeData {
    pub fn num_generators(&self) -> usize {
        self.orders.len()
    }

    pub fn orders(&self) -> &[BigInt] {
        &self.orders
    }
}

/// A presentation realized degree by degree up to `max_degree`.
#[derive(Clone, Debug)]
pub struct DegreewiseRealization {
    presentation: GradedRingPresentation,
    odd: Vec<bool>,
    max_degree: i64,
    degrees: Vec<DegreeData>,
}

pub fn realize(p: &GradedRingPresentation, max_degree: i64) -> Result<DegreewiseRealization, GradedError> {
    DegreewiseRealization::new(p, max_degree)
}

impl DegreewiseRealization {
    pub fn new(p: &GradedRingPresentation, max_degree: i64) -> Result<Self, GradedError> {
        p.validate()?;
        if max_degree < 0 {
            return Err(GradedError::NegativeCutoff(max_degree));
        }
        let mut relations = p.resolved_relations()?;
        let odd: Vec<bool> = p.generators.iter().map(|g| g.degree % 2 != 0).collect();
        // graded commutativity forces 2 x^2 = 0 for odd x
        for (i, g) in p.generators.iter().enumerate() {
            if odd[i] {
                let mut m = vec![0; p.generators.len()];
                m[i] = 2;
                relations.push(ResolvedRelation { degree: 2 * g.degree, terms: vec![(BigInt::from(2), m)] });
            }
        }
        let degrees: Vec<i64> = p.generators.iter().map(|g| g.degree).collect();
        let field = p.base.field_characteristic();
        let degrees = (0..=max_degree)
            .into_par_iter()
            .map(|d| realize_degree(&degrees, &odd, &relations, field, d))
            .collect();
        Ok(DegreewiseRealization { presentation: p.clone(), odd, max_degree, degrees })
    }

    pub fn presentation(&self) -> &GradedRingPresentation {
        &self.presentation
    }

    pub fn base(&self) -> CoefficientRing {
        self.presentation.base
    }

    pub fn max_degree(&self) -> i64 {
        self.max_degree
    }

    pub fn degree(&self, d: i64) -> Option<&DegreeData> {
        (0..=self.max_degree).contains(&d).then(|| &self.degrees[d as usize])
    }

    fn data(&self, d: i64) -> Result<&DegreeData, GradedError> {
        self.degree(d).ok_or(GradedError::DegreeOverflow { degree: d, max: self.max_degree })
    }

    /// The group in degree `d` over the presentation's base ring.
    pub fn group(&self, d: i64) -> FGAbelianGroup {
        match self.degree(d) {
            None => FGAbelianGroup::zero(),
            Some(data) => match self.presentation.base.localization_prime() {
                Some(p) => data.group.localize_at_p(p),
                None => data.group.clone(),
            },
        }
    }

    /// `F_p`-dimension of the degree-`d` part for a prime-field base.
    pub fn dimension(&self, d: i64) -> usize {
        self.group(d).num_generators()
    }

    pub fn one(&self) -> GradedElement {
        self.project(0, &[BigInt::one()]).expect("degree 0 exists")
    }

    /// The image of the monomial with the given exponents.
    pub fn monomial(&self, exponents: &[(&str, u32)]) -> Result<GradedElement, GradedError> {
        let mut m = vec![0u32; self.presentation.generators.len()];
        for (name, e) in exponents {
            let i = self
                .presentation
                .generator_index(name)
                .ok_or_else(|| GradedError::UnknownGenerator(name.to_string()))?;
            m[i] += e;
        }
        let d = self.presentation.monomial_degree(&m);
        let data = self.data(d)?;
        let mut v = vec![BigInt::zero(); data.monomials.len()];
        v[data.index[&m]] = BigInt::one();
        self.project(d, &v)
    }

    pub fn generator_element(&self, d: i64, g: usize) -> Result<GradedElement, GradedError> {
        let data = self.data(d)?;
        Ok(GradedElement::basis(d, data.num_generators(), g))
    }

    /// Normal-form coordinates of a vector in monomial coordinates.
    pub fn project(&self, d: i64, v: &[BigInt]) -> Result<GradedElement, GradedError> {
        let data = self.data(d)?;
        let coords = data
            .proj
            .iter()
            .zip(&data.orders)
            .map(|(row, order)| {
                let c: BigInt = row.iter().zip(v).map(|(a, b)| a * b).sum();
                reduce(c, order)
            })
            .collect();
        Ok(GradedElement::new(d, coords))
    }

    /// A monomial-coordinate representative.
    pub fn lift(&self, a: &GradedElement) -> Result<Vec<BigInt>, GradedError> {
        let data = self.data(a.degree)?;
        let mut v = vec![BigInt::zero(); data.monomials.len()];
        for (c, l) in a.coords.iter().zip(&data.lift) {
            if !c.is_zero() {
                for (x, y) in v.iter_mut().zip(l) {
                    *x += c * y;
                }
            }
        }
        Ok(v)
    }

    pub fn add(&self, a: &GradedElement, b: &GradedElement) -> Result<GradedElement, GradedError> {
        if a.degree != b.degree {
            return Err(GradedError::DegreeMismatch(a.degree, b.degree));
        }
        let data = self.data(a.degree)?;
        let coords = a.coords.iter().zip(&b.coords).zip(&data.orders).map(|((x, y), o)| reduce(x + y, o)).collect();
        Ok(GradedElement::new(a.degree, coords))
    }

    pub fn scale(&self, c: &BigInt, a: &GradedElement) -> Result<GradedElement, GradedError> {
        let data = self.data(a.degree)?;
        let coords = a.coords.iter().zip(&data.orders).map(|(x, o)| reduce(c * x, o)).collect();
        Ok(GradedElement::new(a.degree, coords))
    }

    pub fn multiply(&self, a: &GradedElement, b: &GradedElement) -> Result<GradedElement, GradedError> {
        let d = a.degree + b.degree;
        let target = self.data(d)?;
        let (da, db) = (self.data(a.degree)?, self.data(b.degree)?);
        let (va, vb) = (self.lift(a)?, self.lift(b)?);
        let mut out = vec![BigInt::zero(); target.monomials.len()];
        for (i, ca) in va.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            for (j, cb) in vb.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
                let (ma, mb) = (&da.monomials[i], &db.monomials[j]);
                let m: Monomial = ma.iter().zip(mb).map(|(x, y)| x + y).collect();
                let term = ca * cb;
                let k = target.index[&m];
                if koszul_sign(ma, mb, &self.odd) {
                    out[k] -= term;
                } else {
                    out[k] += term;
                }
            }
        }
        self.project(d, &out)
    }

    pub fn power(&self, a: &GradedElement, n: u32) -> Result<GradedElement, GradedError> {
        let mut acc = self.one();
        for _ in 0..n {
            acc = self.multiply(&acc, a)?;
        }
        Ok(acc)
    }

    /// The order of an element (`None` if it has infinite order), computed
    /// after localization when the base is `Z_(p)`.
    pub fn element_order(&self, a: &GradedElement) -> Result<Option<BigInt>, GradedError> {
        let data = self.data(a.degree)?;
        let local = self.presentation.base.localization_prime();
        let mut order = BigInt::one();
        for (c, o) in a.coords.iter().zip(&data.orders) {
            if c.is_zero() {
                continue;
            }
            if o.is_zero() {
                return Ok(None);
            }
            let mut k = o / c.gcd(o);
            if let Some(p) = local {
                k = p_part(&k, p);
            }
            order = order.lcm(&k);
        }
        Ok(Some(order))
    }

    pub fn is_zero(&self, a: &GradedElement) -> Result<bool, GradedError> {
        Ok(self.element_order(a)? == Some(BigInt::one()))
    }

    /// Whether `a` generates its degree, assuming that group is cyclic
    /// after localization. Returns `None` when the group is not cyclic.
    pub fn generates_cyclic(&self, a: &GradedElement) -> Result<Option<bool>, GradedError> {
        let group = self.group(a.degree);
        if group.num_generators() > 1 {
            return Ok(None);
        }
        if group.is_zero() {
            return Ok(Some(true));
        }
        if group.free_rank() == 1 {
            // infinite cyclic: the coordinate must be a unit
            let data = self.data(a.degree)?;
            let free_index = data.orders.iter().position(Zero::is_zero).unwrap();
            let c = &a.coords[free_index];
            let unit = match self.presentation.base.localization_prime() {
                Some(p) => !c.is_zero() && p_adic_valuation_big(c, p) == 0,
                None => c.abs().is_one(),
            };
            return Ok(Some(unit));
        }
        Ok(Some(self.element_order(a)?.as_ref() == group.order().as_ref()))
    }

    /// Whether every group below the cutoff is free over the base (or the
    /// base is a field); such realizations carry a based-algebra structure.
    pub fn is_degreewise_free(&self) -> bool {
        if self.presentation.base.is_field() {
            return true;
        }
        (0..=self.max_degree).all(|d| self.group(d).is_free() && self.degrees[d as usize].group.is_free())
    }

    pub fn monomial_name(&self, m: &[u32]) -> String {
        let parts: Vec<String> = m
            .iter()
            .zip(&self.presentation.generators)
            .filter(|(e, _)| **e > 0)
            .map(|(e, g)| if *e == 1 { g.name.clone() } else { format!("{}^{}", g.name, e) })
            .collect();
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join(" ")
        }
    }

    /// Prints an element via a monomial representative.
    pub fn format_element(&self, a: &GradedElement) -> Result<String, GradedError> {
        let data = self.data(a.degree)?;
        let v = self.lift(a)?;
        let terms: Vec<String> = v
            .iter()
            .zip(&data.monomials)
            .filter(|(c, _)| !c.is_zero())
            .map(|(c, m)| {
                let name = self.monomial_name(m);
                if c.is_one() {
                    name
                } else {
                    format!("{c}*{name}")
                }
            })
            .collect();
        Ok(if terms.is_empty() { "0".to_string() } else { terms.join(" + ") })
    }
}

fn reduce(c: BigInt, order: &BigInt) -> BigInt {
    if order.is_zero() {
        c
    } else {
        c.mod_floor(order)
    }
}

fn p_part(n: &BigInt, p: u64) -> BigInt {
    let p = BigInt::from(p);
    let mut out = BigInt::one();
    let mut rest = n.clone();
    while !rest.is_zero() && rest.is_multiple_of(&p) {
        rest /= &p;
        out *= &p;
    }
    out
}

fn p_adic_valuation_big(n: &BigInt, p: u64) -> u32 {
    match u64::try_from(n.abs()) {
        Ok(small) => p_adic_valuation(small, p),
        Err(_) => {
            let pb = BigInt::from(p);
            let mut rest = n.abs();
            let mut v = 0;
            while rest.is_multiple_of(&pb) {
                rest /= &pb;
                v += 1;
            }
            v
        }
    }
}

fn realize_degree(
    degrees: &[i64],
    odd: &[bool],
    relations: &[ResolvedRelation],
    field: Option<u64>,
    d: i64,
) -> DegreeData {
    let monomials = monomials_of_degree(degrees, d);
    let index: HashMap<Monomial, usize> = monomials.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect();
    let n = monomials.len();
    let mut columns: Vec<Vec<BigInt>> = Vec::new();
    for rel in relations.iter().filter(|r| r.degree <= d) {
        for m in monomials_of_degree(degrees, d - rel.degree) {
            let mut col = vec![BigInt::zero(); n];
            for (c, t) in &rel.terms {
                let prod: Monomial = m.iter().zip(t).map(|(a, b)| a + b).collect();
                let k = index[&prod];
                if koszul_sign(&m, t, odd) {
                    col[k] -= c;
                } else {
                    col[k] += c;
                }
            }
            if col.iter().any(|x| !x.is_zero()) {
                columns.push(col);
            }
        }
    }
    if let Some(p) = field {
        for k in 0..n {
            let mut col = vec![BigInt::zero(); n];
            col[k] = BigInt::from(p);
            columns.push(col);
        }
    }
    let rel = IntegerMatrix::from_fn(n, columns.len(), |i, j| columns[j][i].clone());
    let snf = smith_normal_form(&rel);
    let factors = snf.invariant_factors();
    let mut orders = Vec::new();
    let mut proj = Vec::new();
    let mut lift = Vec::new();
    for i in 0..n {
        let order = factors.get(i).cloned().unwrap_or_else(BigInt::zero);
        if order.is_one() {
            continue;
        }
        orders.push(order);
        proj.push(snf.u.row(i).to_vec());
        lift.push(snf.u_inv.column(i));
    }
    // torsion generators first, free ones last, matching FGAbelianGroup order
    let group = FGAbelianGroup::new(0, orders.iter().cloned());
    DegreeData { monomials, group, orders, proj, lift, index }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graded::presentation::poly;

    fn fp_trunc(p: u64, height: u32) -> GradedRingPresentation {
        GradedRingPresentation::new(
            CoefficientRing::prime_field(p).unwrap(),
            &[("u", 2)],
            vec![poly(&[(1, &[("u", height)])])],
        )
    }

    #[test]
    fn truncated_polynomial_dimensions() {
        let r = realize(&fp_trunc(3, 2), 10).unwrap();
        let dims: Vec<usize> = (0..=10).map(|d| r.dimension(d)).collect();
        assert_eq!(dims, vec![1, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0]);
    }

    #[test]
    fn exterior_on_even_class() {
        let r = realize(&fp_trunc(2, 2), 6).unwrap();
        assert_eq!((0..=6).map(|d| r.dimension(d)).collect::<Vec<_>>(), vec![1, 0, 1, 0, 0, 0, 0]);
    }

    #[test]
    fn odd_generators_anticommute() {
        let p = GradedRingPresentation::new(CoefficientRing::Integers, &[("a", 1), ("b", 3)], vec![]);
        let r = realize(&p, 8).unwrap();
        let a = r.monomial(&[("a", 1)]).unwrap();
        let b = r.monomial(&[("b", 1)]).unwrap();
        let ab = r.multiply(&a, &b).unwrap();
        let ba = r.multiply(&b, &a).unwrap();
        assert_eq!(r.add(&ab, &ba).unwrap(), GradedElement::zero(4, ab.coords.len()));
        assert_eq!(r.group(2), FGAbelianGroup::cyclic(2));
        assert!(!r.is_zero(&r.multiply(&a, &a).unwrap()).unwrap());
    }

    #[test]
    fn cutoff_errors() {
        let r = realize(&fp_trunc(3, 2), 4).unwrap();
        let u = r.monomial(&[("u", 1)]).unwrap();
        let u2 = r.multiply(&u, &u).unwrap();
        assert!(r.is_zero(&u2).unwrap());
        assert!(matches!(r.multiply(&u2, &u2), Err(GradedError::DegreeOverflow { .. })));
        let u3 = r.monomial(&[("u", 3)]);
        assert!(matches!(u3, Err(GradedError::DegreeOverflow { .. })));
    }
}
