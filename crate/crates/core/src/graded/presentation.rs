use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;

use super::GradedError;
use crate::exact::CoefficientRing;

/// Exponent vector indexed by generator position.
pub type Monomial = Vec<u32>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Generator {
    pub name: String,
    pub degree: i64,
}

/// One term `coefficient * gen_1^e_1 * ... * gen_k^e_k`, serialized as
/// `[coefficient, [[gen, exp], ...]]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Term(#[serde(with = "crate::exact::serde_int")] pub BigInt, pub Vec<(String, u32)>);

/// A homogeneous polynomial written with generator names.
pub type Polynomial = Vec<Term>;

/// Builds a polynomial from `(coefficient, [(generator, exponent)])` pairs.
pub fn poly(terms: &[(i64, &[(&str, u32)])]) -> Polynomial {
    terms
        .iter()
        .map(|(c, m)| Term(BigInt::from(*c), m.iter().map(|(g, e)| (g.to_string(), *e)).collect()))
        .collect()
}

/// A graded-commutative ring given by generators of positive degree and
/// homogeneous relations over a coefficient ring. Products follow the
/// Koszul sign rule; odd squares are only forced to be 2-torsion.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradedRingPresentation {
    pub base: CoefficientRing,
    pub generators: Vec<Generator>,
    #[serde(default)]
    pub relations: Vec<Polynomial>,
}

/// A relation resolved to exponent vectors.
#[derive(Clone, Debug)]
pub(crate) struct ResolvedRelation {
    pub degree: i64,
    pub terms: Vec<(BigInt, Monomial)>,
}

impl GradedRingPresentation {
    pub fn new(base: CoefficientRing, generators: &[(&str, i64)], relations: Vec<Polynomial>) -> Self {
        GradedRingPresentation {
            base,
            generators: generators.iter().map(|(n, d)| Generator { name: n.to_string(), degree: *d }).collect(),
            relations,
        }
    }

    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g.name == name)
    }

    pub fn monomial_degree(&self, m: &[u32]) -> i64 {
        m.iter().zip(&self.generators).map(|(&e, g)| e as i64 * g.degree).sum()
    }

    /// Converts a named polynomial to exponent vectors, merging like terms.
    pub(crate) fn resolve(&self, p: &Polynomial) -> Result<Vec<(BigInt, Monomial)>, GradedError> {
        let mut merged: HashMap<Monomial, BigInt> = HashMap::new();
        let mut order = Vec::new();
        for Term(c, factors) in p {
            let mut m = vec![0u32; self.generators.len()];
            for (name, e) in factors {
                let i = self.generator_index(name).ok_or_else(|| GradedError::UnknownGenerator(name.clone()))?;
                m[i] += e;
            }
            if !merged.contains_key(&m) {
                order.push(m.clone());
            }
            *merged.entry(m).or_insert_with(BigInt::zero) += c;
        }
        Ok(order
            .into_iter()
            .filter_map(|m| {
                let c = merged.remove(&m).unwrap();
                (!c.is_zero()).then_some((c, m))
            })
            .collect())
    }

    /// Degree of a homogeneous polynomial; `None` for the zero polynomial.
    pub fn polynomial_degree(&self, p: &Polynomial) -> Result<Option<i64>, GradedError> {
        let terms = self.resolve(p)?;
        let mut degree = None;
        for (_, m) in &terms {
            let d = self.monomial_degree(m);
            match degree {
                None => degree = Some(d),
                Some(e) if e != d => return Err(GradedError::InhomogeneousRelation(format!("{p:?}"))),
                _ => {}
            }
        }
        Ok(degree)
    }

    pub fn validate(&self) -> Result<(), GradedError> {
        self.base.validate()?;
        for (i, g) in self.generators.iter().enumerate() {
            if g.degree <= 0 {
                return Err(GradedError::NonPositiveGeneratorDegree(g.name.clone(), g.degree));
            }
            if self.generators[..i].iter().any(|h| h.name == g.name) {
                return Err(GradedError::DuplicateGenerator(g.name.clone()));
            }
        }
        for r in &self.relations {
            self.polynomial_degree(r)?;
        }
        Ok(())
    }

    pub(crate) fn resolved_relations(&self) -> Result<Vec<ResolvedRelation>, GradedError> {
        let mut out = Vec::new();
        for r in &self.relations {
            let terms = self.resolve(r)?;
            if let Some(degree) = self.polynomial_degree(r)? {
                out.push(ResolvedRelation { degree, terms });
            }
        }
        Ok(out)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("presentation serializes")
    }

    pub fn from_json(s: &str) -> Result<Self, GradedError> {
        let p: GradedRingPresentation = serde_json::from_str(s).map_err(|e| GradedError::Parse(e.to_string()))?;
        p.validate()?;
        Ok(p)
    }
}

/// Sign of `x^a * x^b = ± x^(a+b)` under the Koszul rule.
pub(crate) fn koszul_sign(a: &[u32], b: &[u32], odd: &[bool]) -> bool {
    // true means negative
    let mut parity = 0u64;
    let mut odd_in_a_after = 0u64;
    for j in (0..a.len()).rev() {
        if odd[j] {
            parity += b[j] as u64 * odd_in_a_after;
            odd_in_a_after += a[j] as u64;
        }
    }
    parity % 2 == 1
}

/// All exponent vectors of the given degree.
pub(crate) fn monomials_of_degree(degrees: &[i64], d: i64) -> Vec<Monomial> {
    fn go(degrees: &[i64], i: usize, rest: i64, cur: &mut Monomial, out: &mut Vec<Monomial>) {
        if i == degrees.len() {
            if rest == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let mut e = 0;
        while e as i64 * degrees[i] <= rest {
            cur[i] = e;
            go(degrees, i + 1, rest - e as i64 * degrees[i], cur, out);
            e += 1;
        }
        cur[i] = 0;
    }
    let mut out = Vec::new();
    if d >= 0 {
        go(degrees, 0, d, &mut vec![0; degrees.len()], &mut out);
    }
    out.sort_by(|a, b| b.cmp(a));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_roundtrip() {
        let p = GradedRingPresentation::new(
            CoefficientRing::Integers,
            &[("eta", 1), ("y", 4), ("w", 8)],
            vec![poly(&[(2, &[("eta", 1)])]), poly(&[(1, &[("y", 2)]), (-4, &[("w", 1)])])],
        );
        let q = GradedRingPresentation::from_json(&p.to_json()).unwrap();
        assert_eq!(p, q);
        let text = r#"{"base":{"ring":"Integers"},"generators":[{"name":"u","degree":2}],"relations":[[[1,[["u",3]]]]]}"#;
        let r = GradedRingPresentation::from_json(text).unwrap();
        assert_eq!(r.polynomial_degree(&r.relations[0]).unwrap(), Some(6));
    }

    #[test]
    fn validation() {
        let bad = GradedRingPresentation::new(CoefficientRing::Integers, &[("a", 0)], vec![]);
        assert!(matches!(bad.validate(), Err(GradedError::NonPositiveGeneratorDegree(..))));
        let inhom = GradedRingPresentation::new(
            CoefficientRing::Integers,
            &[("a", 2), ("b", 4)],
            vec![poly(&[(1, &[("a", 1)]), (1, &[("b", 1)])])],
        );
        assert!(matches!(inhom.validate(), Err(GradedError::InhomogeneousRelation(_))));
    }

    #[test]
    fn signs_and_enumeration() {
        // x (odd) * y (odd) vs y * x
        let odd = [true, true];
        assert!(!koszul_sign(&[1, 0], &[0, 1], &odd));
        assert!(koszul_sign(&[0, 1], &[1, 0], &odd));
        assert_eq!(monomials_of_degree(&[2, 3], 6), vec![vec![3, 0], vec![0, 2]]);
        assert_eq!(monomials_of_degree(&[2], 5), Vec::<Monomial>::new());
    }
}
