use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use super::HomologicalError;
use crate::exact::CoefficientRing;
use crate::graded::{multiply_elements, BasedAlgebra, GradedElement, GradedError};

/// The base ring concentrated in degree 0, as a based algebra.
#[derive(Clone, Debug)]
pub struct PointAlgebra {
    base: CoefficientRing,
}

impl PointAlgebra {
    pub fn new(base: CoefficientRing) -> Self {
        PointAlgebra { base }
    }
}

impl BasedAlgebra for PointAlgebra {
    fn base(&self) -> CoefficientRing {
        self.base
    }

    fn max_degree(&self) -> i64 {
        i64::MAX / 4
    }

    fn dim(&self, degree: i64) -> usize {
        usize::from(degree == 0)
    }

    fn basis_label(&self, _degree: i64, _index: usize) -> String {
        "1".into()
    }

    fn product(&self, d1: i64, _i: usize, d2: i64, _j: usize) -> Result<Vec<BigInt>, GradedError> {
        if d1 != 0 || d2 != 0 {
            return Err(GradedError::DegreeMismatch(d1, d2));
        }
        Ok(vec![BigInt::one()])
    }
}

/// Arithmetic in the ground ring `k`.
#[derive(Clone)]
pub struct Ground(pub Arc<dyn BasedAlgebra>);

impl fmt::Debug for Ground {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ground({:?})", self.0.base())
    }
}

impl Ground {
    pub fn point(base: CoefficientRing) -> Self {
        Ground(Arc::new(PointAlgebra::new(base)))
    }

    pub fn base(&self) -> CoefficientRing {
        self.0.base()
    }

    pub fn dim(&self, d: i64) -> usize {
        if d < 0 || d > self.0.max_degree() {
            0
        } else {
            self.0.dim(d)
        }
    }

    pub fn scalar(&self, c: i64) -> GradedElement {
        self.normalize(GradedElement::new(0, vec![BigInt::from(c)]))
    }

    pub fn one(&self) -> GradedElement {
        self.scalar(1)
    }

    pub fn zero(&self, d: i64) -> GradedElement {
        GradedElement::zero(d, self.dim(d))
    }

    pub fn normalize(&self, mut a: GradedElement) -> GradedElement {
        if let Some(m) = self.0.modulus() {
            for c in &mut a.coords {
                *c = c.mod_floor(&m);
            }
        }
        a
    }

    pub fn add(&self, a: &GradedElement, b: &GradedElement) -> GradedElement {
        debug_assert_eq!(a.degree, b.degree);
        let coords = a.coords.iter().zip(&b.coords).map(|(x, y)| x + y).collect();
        self.normalize(GradedElement::new(a.degree, coords))
    }

    pub fn scale(&self, c: &BigInt, a: &GradedElement) -> GradedElement {
        self.normalize(GradedElement::new(a.degree, a.coords.iter().map(|x| c * x).collect()))
    }

    pub fn mul(&self, a: &GradedElement, b: &GradedElement) -> Result<GradedElement, GradedError> {
        multiply_elements(self.0.as_ref(), a, b)
    }

    pub fn is_zero(&self, a: &GradedElement) -> bool {
        self.normalize(a.clone()).is_zero()
    }

    pub fn is_even(&self, max_degree: i64) -> bool {
        (0..=max_degree.min(self.0.max_degree())).filter(|d| d % 2 != 0).all(|d| self.0.dim(d) == 0)
    }
}

/// A linear combination of basis elements with ground-ring coefficients.
pub type Combination = Vec<(usize, GradedElement)>;

/// Which periodic resolution an algebra admits.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum FamilyTag {
    /// `k{1, e}` with `e^2 = 0`.
    Exterior,
    /// `k[ũ]/(ũ^2 - u^2)` augmented by `ũ ↦ u`.
    Quadratic,
    /// `k[u]/u^height`.
    Truncated { height: u32 },
}

/// An augmented algebra `A` over an even ground ring `k`, free over `k` on
/// a finite homogeneous basis `e_0 = 1, e_1, ..., e_m` adapted to the
/// augmentation: `e_1, ..., e_m` span the augmentation ideal.
#[derive(Clone, Debug)]
pub struct AugmentedAlgebra {
    ground: Ground,
    degrees: Vec<i64>,
    labels: Vec<String>,
    /// `e_i e_j` for `i, j >= 1`, in terms of `e_1, ..., e_m`.
    products: HashMap<(usize, usize), Combination>,
    family: Option<FamilyTag>,
    /// Highest degree in which the basis is complete.
    max_degree: i64,
}

impl AugmentedAlgebra {
    /// Builds an algebra from structure constants in an arbitrary basis
    /// with `e_0 = 1`; the augmentation is given by `ε(e_i)`, and the
    /// basis is replaced by `e_i - ε(e_i)` internally.
    pub fn from_structure(
        ground: Ground,
        degrees: Vec<i64>,
        labels: Vec<String>,
        product: impl Fn(usize, usize) -> Combination,
        augmentation: Vec<GradedElement>,
        max_degree: i64,
    ) -> Result<Self, HomologicalError> {
        if degrees.first() != Some(&0) || degrees.len() != labels.len() || augmentation.len() != degrees.len() {
            return Err(HomologicalError::NonAugmented("basis must start with the unit".into()));
        }
        if degrees[1..].iter().any(|&d| d <= 0) {
            return Err(HomologicalError::NonAugmented("augmentation ideal must be in positive degrees".into()));
        }
        if !ground.is_even(max_degree) || ground.dim(0) != 1 {
            return Err(HomologicalError::GroundNotEven);
        }
        let m = degrees.len();
        let mut products = HashMap::new();
        for i in 1..m {
            for j in 1..m {
                let d = degrees[i] + degrees[j];
                if d > max_degree {
                    continue;
                }
                let (ai, aj) = (&augmentation[i], &augmentation[j]);
                let raw = product(i, j);
                let mut unit_coeff = ground.mul(ai, aj)?;
                unit_coeff = ground.scale(&-BigInt::one(), &unit_coeff);
                let mut coeffs: HashMap<usize, GradedElement> = HashMap::new();
                let push = |l: usize, c: GradedElement, coeffs: &mut HashMap<usize, GradedElement>| {
                    let entry = coeffs.entry(l).or_insert_with(|| ground.zero(c.degree));
                    *entry = ground.add(entry, &c);
                };
                for (l, c) in raw {
                    if l == 0 {
                        unit_coeff = ground.add(&unit_coeff, &c);
                    } else {
                        unit_coeff = ground.add(&unit_coeff, &ground.mul(&c, &augmentation[l])?);
                        push(l, c, &mut coeffs);
                    }
                }
                if !ground.is_zero(&unit_coeff) {
                    return Err(HomologicalError::NonAugmented(format!(
                        "augmentation is not multiplicative on {} * {}",
                        labels[i], labels[j]
                    )));
                }
                if !ground.is_zero(aj) {
                    push(i, ground.scale(&-BigInt::one(), aj), &mut coeffs);
                }
                if !ground.is_zero(ai) {
                    push(j, ground.scale(&-BigInt::one(), ai), &mut coeffs);
                }
                let mut comb: Combination = coeffs.into_iter().filter(|(_, c)| !ground.is_zero(c)).collect();
                comb.sort_by_key(|(l, _)| *l);
                products.insert((i, j), comb);
            }
        }
        Ok(AugmentedAlgebra { ground, degrees, labels, products, family: None, max_degree })
    }

    /// All basis elements of a based algebra up to `max_degree`, over the
    /// point ground ring; the augmentation kills positive degrees.
    pub fn from_based(alg: &dyn BasedAlgebra, max_degree: i64) -> Result<Self, HomologicalError> {
        if alg.dim(0) != 1 {
            return Err(HomologicalError::NonAugmented("degree 0 must be the base ring".into()));
        }
        let ground = Ground::point(alg.base());
        let max_degree = max_degree.min(alg.max_degree());
        let mut degrees = vec![0];
        let mut labels = vec!["1".to_string()];
        let mut index = HashMap::new();
        for d in 1..=max_degree {
            for i in 0..alg.dim(d) {
                index.insert((d, i), degrees.len());
                degrees.push(d);
                labels.push(alg.basis_label(d, i));
            }
        }
        let local: Vec<(i64, usize)> = {
            let mut v = vec![(0, 0)];
            for d in 1..=max_degree {
                for i in 0..alg.dim(d) {
                    v.push((d, i));
                }
            }
            v
        };
        let augmentation = degrees.iter().map(|&d| if d == 0 { ground.one() } else { ground.zero(d) }).collect();
        let g = ground.clone();
        let product = |i: usize, j: usize| -> Combination {
            let (di, ii) = local[i];
            let (dj, jj) = local[j];
            let prod = alg.product(di, ii, dj, jj).unwrap_or_default();
            prod.into_iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(k, c)| (index[&(di + dj, k)], g.normalize(GradedElement::new(0, vec![c]))))
                .collect()
        };
        AugmentedAlgebra::from_structure(ground.clone(), degrees, labels, product, augmentation, max_degree)
    }

    /// `Λ_k(e)` with `|e| = degree` and `e^2 = 0`.
    pub fn exterior(ground: Ground, degree: i64, label: &str, max_degree: i64) -> Result<Self, HomologicalError> {
        let aug = vec![ground.one(), ground.zero(degree)];
        let mut a = AugmentedAlgebra::from_structure(
            ground,
            vec![0, degree],
            vec!["1".into(), label.into()],
            |_, _| vec![],
            aug,
            max_degree,
        )?;
        a.family = Some(FamilyTag::Exterior);
        Ok(a)
    }

    /// `k[ũ]/(ũ^2 - u^2)` for an even element `u` of the ground ring,
    /// augmented by `ũ ↦ u`. The augmentation ideal is spanned by `ũ - u`.
    pub fn quadratic(ground: Ground, u: GradedElement, max_degree: i64) -> Result<Self, HomologicalError> {
        let u2 = ground.mul(&u, &u)?;
        let aug = vec![ground.one(), u.clone()];
        let mut a = AugmentedAlgebra::from_structure(
            ground,
            vec![0, u.degree],
            vec!["1".into(), "ũ-u".into()],
            move |_, _| vec![(0, u2.clone())],
            aug,
            max_degree,
        )?;
        a.family = Some(FamilyTag::Quadratic);
        Ok(a)
    }

    /// `k[u]/u^height` with `|u| = degree`.
    pub fn truncated(ground: Ground, degree: i64, height: u32, max_degree: i64) -> Result<Self, HomologicalError> {
        if height < 2 {
            return Err(HomologicalError::NonAugmented("truncation height must be at least 2".into()));
        }
        let n = height as usize;
        let degrees: Vec<i64> = (0..n).map(|i| i as i64 * degree).collect();
        let labels = (0..n)
            .map(|i| match i {
                0 => "1".to_string(),
                1 => "u".to_string(),
                _ => format!("u^{i}"),
            })
            .collect();
        let aug = degrees.iter().map(|&d| if d == 0 { ground.one() } else { ground.zero(d) }).collect();
        let one = ground.one();
        let mut a = AugmentedAlgebra::from_structure(
            ground,
            degrees,
            labels,
            move |i, j| if i + j < n { vec![(i + j, one.clone())] } else { vec![] },
            aug,
            max_degree,
        )?;
        a.family = Some(FamilyTag::Truncated { height });
        Ok(a)
    }

    pub fn ground(&self) -> &Ground {
        &self.ground
    }

    pub fn family(&self) -> Option<&FamilyTag> {
        self.family.as_ref()
    }

    pub fn max_degree(&self) -> i64 {
        self.max_degree
    }

    pub fn rank(&self) -> usize {
        self.degrees.len()
    }

    pub fn degree(&self, i: usize) -> i64 {
        self.degrees[i]
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    /// `e_i e_j` in the adapted basis, including the unit.
    pub fn basis_product(&self, i: usize, j: usize) -> Combination {
        match (i, j) {
            (0, _) => vec![(j, self.ground.one())],
            (_, 0) => vec![(i, self.ground.one())],
            _ => self.products.get(&(i, j)).cloned().unwrap_or_default(),
        }
    }

    /// `a * e_j` for a combination `a`.
    pub fn multiply_basis(&self, a: &Combination, j: usize) -> Result<Combination, HomologicalError> {
        let mut acc: HashMap<usize, GradedElement> = HashMap::new();
        for (i, c) in a {
            for (l, c2) in self.basis_product(*i, j) {
                let term = self.ground.mul(c, &c2)?;
                let entry = acc.entry(l).or_insert_with(|| self.ground.zero(term.degree));
                *entry = self.ground.add(entry, &term);
            }
        }
        let mut out: Combination = acc.into_iter().filter(|(_, c)| !self.ground.is_zero(c)).collect();
        out.sort_by_key(|(l, _)| *l);
        Ok(out)
    }

    /// The image of a combination under the augmentation.
    pub fn augment(&self, a: &Combination) -> Option<GradedElement> {
        a.iter().find(|(i, _)| *i == 0).map(|(_, c)| c.clone())
    }
}

/// A left `A`-module that is free over the ground ring on a homogeneous
/// basis, with the action of the augmentation ideal recorded explicitly.
#[derive(Clone, Debug)]
pub struct AugModule {
    degrees: Vec<i64>,
    labels: Vec<String>,
    /// `e_i · n_b` for `i >= 1`.
    action: HashMap<(usize, usize), Combination>,
    /// Whether this is the algebra acting on itself.
    regular: bool,
}

impl AugModule {
    /// A module on which the augmentation ideal acts by zero.
    pub fn trivial(degrees: Vec<i64>, labels: Vec<String>) -> Self {
        AugModule { degrees, labels, action: HashMap::new(), regular: false }
    }

    /// The ground ring itself, via the augmentation.
    pub fn ground() -> Self {
        Self::trivial(vec![0], vec!["1".into()])
    }

    /// The algebra acting on itself by left multiplication.
    pub fn regular(a: &AugmentedAlgebra) -> Self {
        let mut action = HashMap::new();
        for i in 1..a.rank() {
            for b in 0..a.rank() {
                let p = a.basis_product(i, b);
                if !p.is_empty() {
                    action.insert((i, b), p);
                }
            }
        }
        AugModule { degrees: a.degrees.clone(), labels: a.labels.clone(), action, regular: true }
    }

    pub fn rank(&self) -> usize {
        self.degrees.len()
    }

    pub fn degree(&self, b: usize) -> i64 {
        self.degrees[b]
    }

    pub fn label(&self, b: usize) -> &str {
        &self.labels[b]
    }

    pub fn is_regular(&self) -> bool {
        self.regular
    }

    pub fn is_trivial(&self) -> bool {
        self.action.is_empty() && !self.regular
    }

    /// `e_i · n_b` (for `i >= 1`).
    pub fn act(&self, i: usize, b: usize) -> Combination {
        self.action.get(&(i, b)).cloned().unwrap_or_default()
    }

    /// `a · n_b` for a combination `a` of algebra basis elements.
    pub fn act_by(&self, ground: &Ground, a: &Combination, b: usize) -> Result<Combination, HomologicalError> {
        let mut acc: HashMap<usize, GradedElement> = HashMap::new();
        for (i, c) in a {
            let terms = if *i == 0 { vec![(b, ground.one())] } else { self.act(*i, b) };
            for (l, c2) in terms {
                let term = ground.mul(c, &c2)?;
                let entry = acc.entry(l).or_insert_with(|| ground.zero(term.degree));
                *entry = ground.add(entry, &term);
            }
        }
        let mut out: Combination = acc.into_iter().filter(|(_, c)| !ground.is_zero(c)).collect();
        out.sort_by_key(|(l, _)| *l);
        Ok(out)
    }

    /// `F_p[μ]`-style trivial module: basis in the given degree steps up
    /// to a cutoff.
    pub fn polynomial_trivial(name: &str, degree: i64, max_degree: i64) -> Self {
        let n = (max_degree / degree).max(0) as usize + 1;
        AugModule::trivial(
            (0..n).map(|j| j as i64 * degree).collect(),
            (0..n)
                .map(|j| match j {
                    0 => "1".to_string(),
                    1 => name.to_string(),
                    _ => format!("{name}^{j}"),
                })
                .collect(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graded::{poly, realize, FreeRealization, GradedRingPresentation};

    fn ku() -> Ground {
        let p = GradedRingPresentation::new(CoefficientRing::Integers, &[("u", 2)], vec![]);
        Ground(Arc::new(FreeRealization::new(realize(&p, 40).unwrap()).unwrap()))
    }

    #[test]
    fn quadratic_normalization() {
        let k = ku();
        let u = GradedElement::new(2, vec![BigInt::one()]);
        let a = AugmentedAlgebra::quadratic(k.clone(), u, 40).unwrap();
        // (ũ - u)^2 = -2u (ũ - u)
        let p = a.basis_product(1, 1);
        assert_eq!(p.len(), 1);
        assert_eq!(p[0].0, 1);
        assert_eq!(p[0].1, GradedElement::new(2, vec![BigInt::from(-2)]));
    }

    #[test]
    fn non_multiplicative_augmentation_is_rejected() {
        let k = ku();
        let u = GradedElement::new(2, vec![BigInt::one()]);
        // ũ^2 = 0 but ε(ũ) = u would force u^2 = 0
        let r = AugmentedAlgebra::from_structure(
            k.clone(),
            vec![0, 2],
            vec!["1".into(), "v".into()],
            |_, _| vec![],
            vec![k.one(), u],
            20,
        );
        assert!(matches!(r, Err(HomologicalError::NonAugmented(_))));
    }

    #[test]
    fn from_based_truncated() {
        let p = GradedRingPresentation::new(
            CoefficientRing::prime_field(5).unwrap(),
            &[("u", 2)],
            vec![poly(&[(1, &[("u", 4)])])],
        );
        let r = FreeRealization::new(realize(&p, 20).unwrap()).unwrap();
        let a = AugmentedAlgebra::from_based(&r, 20).unwrap();
        assert_eq!(a.rank(), 4);
        assert_eq!(a.basis_product(1, 2).len(), 1);
        assert!(a.basis_product(2, 2).is_empty());
    }
}
