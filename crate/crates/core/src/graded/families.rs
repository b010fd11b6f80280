use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

use super::based::DividedPowerFamily;
use super::presentation::{poly, GradedRingPresentation, Polynomial, Term};
use super::GradedError;
use crate::exact::{p_adic_valuation, CoefficientRing, FGAbelianGroup};

/// A graded module given directly by its groups, degree by degree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreewiseModule {
    pub groups: BTreeMap<i64, FGAbelianGroup>,
}

impl DegreewiseModule {
    pub fn group(&self, d: i64) -> FGAbelianGroup {
        self.groups.get(&d).cloned().unwrap_or_default()
    }
}

/// The result of [`standard_family`].
#[derive(Clone, Debug)]
pub enum Family {
    Presentation(GradedRingPresentation),
    DividedPower(DividedPowerFamily),
    Module(DegreewiseModule),
}

impl Family {
    pub fn presentation(self) -> Result<GradedRingPresentation, GradedError> {
        match self {
            Family::Presentation(p) => Ok(p),
            _ => Err(GradedError::UnknownFamily("not a presentation".into())),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyParams {
    #[serde(default)]
    pub prime: Option<u64>,
    /// Cutoff for families with infinitely many generators or basis elements.
    #[serde(default)]
    pub max_degree: Option<i64>,
    /// Underlying family for `exterior_over_quotient`.
    #[serde(default)]
    pub base_family: Option<String>,
    /// Generator of the underlying family to quotient by.
    #[serde(default)]
    pub element: Option<String>,
    /// Use `Z_(p)` instead of `F_p` where both make sense.
    #[serde(default)]
    pub integral: bool,
    /// Generator degree for `divided_power`.
    #[serde(default)]
    pub degree: Option<i64>,
}

impl FamilyParams {
    pub fn prime(p: u64) -> Self {
        FamilyParams { prime: Some(p), ..Default::default() }
    }

    fn require_prime(&self, family: &str) -> Result<u64, GradedError> {
        let p = self.prime.ok_or_else(|| GradedError::MissingParameter(format!("{family}: prime")))?;
        CoefficientRing::prime_field(p)?;
        Ok(p)
    }

    fn local_or_integral(&self) -> Result<CoefficientRing, GradedError> {
        Ok(match self.prime {
            Some(p) => CoefficientRing::localized_at(p)?,
            None => CoefficientRing::Integers,
        })
    }
}

pub const FAMILY_NAMES: &[&str] = &[
    "ko",
    "ku",
    "ell",
    "ku_smash_ko_ku",
    "thh2_zp_answer",
    "exterior_over_quotient",
    "truncated",
    "thh_zp_additive",
    "tmf13_homotopy",
    "divided_power",
];

/// Named rings and modules used throughout the reproductions.
pub fn standard_family(name: &str, params: &FamilyParams) -> Result<Family, GradedError> {
    let z = CoefficientRing::Integers;
    let p = match name {
        "ko" => GradedRingPresentation::new(
            z,
            &[("eta", 1), ("y", 4), ("w", 8)],
            vec![
                poly(&[(2, &[("eta", 1)])]),
                poly(&[(1, &[("eta", 1), ("y", 1)])]),
                poly(&[(1, &[("eta", 3)])]),
                poly(&[(1, &[("y", 2)]), (-4, &[("w", 1)])]),
            ],
        ),
        "ku" => GradedRingPresentation::new(params.local_or_integral()?, &[("u", 2)], vec![]),
        "ell" => {
            let p = params.require_prime(name)?;
            GradedRingPresentation::new(CoefficientRing::localized_at(p)?, &[("v1", 2 * p as i64 - 2)], vec![])
        }
        "ku_smash_ko_ku" => GradedRingPresentation::new(
            params.local_or_integral()?,
            &[("u", 2), ("ut", 2)],
            vec![poly(&[(1, &[("ut", 2)]), (-1, &[("u", 2)])])],
        ),
        "thh2_zp_answer" => {
            let p = params.require_prime(name)?;
            let max = params.max_degree.ok_or_else(|| GradedError::MissingParameter("thh2_zp_answer: max_degree".into()))?;
            thh2_zp_answer(p, max)?
        }
        "exterior_over_quotient" => {
            let base_name = params
                .base_family
                .clone()
                .ok_or_else(|| GradedError::MissingParameter("exterior_over_quotient: base_family".into()))?;
            let element = params
                .element
                .clone()
                .ok_or_else(|| GradedError::MissingParameter("exterior_over_quotient: element".into()))?;
            let base = standard_family(&base_name, params)?.presentation()?;
            exterior_over_quotient(&base, &poly(&[(1, &[(element.as_str(), 1)])]), "ex")?
        }
        "truncated" => {
            let p = params.require_prime(name)?;
            let base = if params.integral { CoefficientRing::localized_at(p)? } else { CoefficientRing::prime_field(p)? };
            GradedRingPresentation::new(base, &[("u", 2)], vec![poly(&[(1, &[("u", p as u32 - 1)])])])
        }
        "tmf13_homotopy" => GradedRingPresentation::new(CoefficientRing::localized_at(2)?, &[("a1", 2), ("a3", 6)], vec![]),
        "thh_zp_additive" => {
            let p = params.require_prime(name)?;
            let max = params.max_degree.ok_or_else(|| GradedError::MissingParameter("thh_zp_additive: max_degree".into()))?;
            return Ok(Family::Module(thh_zp_additive(p, max)));
        }
        "divided_power" => {
            let base = match (params.prime, params.integral) {
                (Some(p), false) => CoefficientRing::prime_field(p)?,
                (Some(p), true) => CoefficientRing::localized_at(p)?,
                (None, _) => CoefficientRing::Integers,
            };
            let degree = params.degree.unwrap_or(2);
            let max = params.max_degree.ok_or_else(|| GradedError::MissingParameter("divided_power: max_degree".into()))?;
            return Ok(Family::DividedPower(DividedPowerFamily::new(base, "y", degree, false, max)?));
        }
        other => return Err(GradedError::UnknownFamily(other.to_string())),
    };
    Ok(Family::Presentation(p))
}

/// `Z_(p)[x_1, x_2, ...]/(p^n x_n, x_n^p - p x_{n+1})` with `|x_n| = 2p^n`,
/// keeping only generators of degree at most `max_degree`.
pub fn thh2_zp_answer(p: u64, max_degree: i64) -> Result<GradedRingPresentation, GradedError> {
    let base = CoefficientRing::localized_at(p)?;
    let mut gens = Vec::new();
    let mut n = 1u32;
    while 2 * (p as i64).pow(n) <= max_degree.max(0) {
        gens.push((format!("x{n}"), 2 * (p as i64).pow(n)));
        n += 1;
    }
    let mut relations = Vec::new();
    for (k, (name, _)) in gens.iter().enumerate() {
        let n = k as u32 + 1;
        relations.push(vec![Term(BigInt::from(p).pow(n), vec![(name.clone(), 1)])]);
        if let Some((next, _)) = gens.get(k + 1) {
            relations.push(vec![
                Term(BigInt::from(1), vec![(name.clone(), p as u32)]),
                Term(-BigInt::from(p), vec![(next.clone(), 1)]),
            ]);
        }
    }
    let gen_refs: Vec<(&str, i64)> = gens.iter().map(|(n, d)| (n.as_str(), *d)).collect();
    Ok(GradedRingPresentation::new(base, &gen_refs, relations))
}

/// `Λ_{R/x}(εx)`: the quotient `R/x` with an exterior generator of degree
/// `|x| + 1` adjoined.
pub fn exterior_over_quotient(
    r: &GradedRingPresentation,
    x: &Polynomial,
    name: &str,
) -> Result<GradedRingPresentation, GradedError> {
    let degree = r.polynomial_degree(x)?.ok_or(GradedError::ZeroElement)?;
    let mut q = quotient_by_ideal(r, std::slice::from_ref(x))?;
    q.generators.push(super::presentation::Generator { name: name.to_string(), degree: degree + 1 });
    q.relations.push(poly(&[(1, &[(name, 2)])]));
    Ok(q)
}

/// Appends homogeneous elements to the relations.
pub fn quotient_by_ideal(r: &GradedRingPresentation, elements: &[Polynomial]) -> Result<GradedRingPresentation, GradedError> {
    let mut q = r.clone();
    for e in elements {
        r.polynomial_degree(e)?;
        q.relations.push(e.clone());
    }
    Ok(q)
}

/// `Z_(p)` in degree 0 and `Z_(p)/i` in degree `2i - 1`.
pub fn thh_zp_additive(p: u64, max_degree: i64) -> DegreewiseModule {
    let mut groups = BTreeMap::new();
    groups.insert(0, FGAbelianGroup::free(1));
    let mut i = 1i64;
    while 2 * i - 1 <= max_degree {
        let v = p_adic_valuation(i as u64, p);
        let g = FGAbelianGroup::cyclic(BigInt::from(p).pow(v));
        if !g.is_zero() {
            groups.insert(2 * i - 1, g);
        }
        i += 1;
    }
    DegreewiseModule { groups }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graded::realize::realize;

    #[test]
    fn ko_low_degrees() {
        let ko = standard_family("ko", &FamilyParams::default()).unwrap().presentation().unwrap();
        let r = realize(&ko, 16).unwrap();
        let expected = ["Z", "Z/2", "Z/2", "0", "Z", "0", "0", "0", "Z", "Z/2", "Z/2", "0", "Z", "0", "0", "0", "Z"];
        for (d, e) in expected.iter().enumerate() {
            assert_eq!(r.group(d as i64).to_string(), *e, "degree {d}");
        }
        // y^2 = 4w
        let y2 = r.monomial(&[("y", 2)]).unwrap();
        let w = r.monomial(&[("w", 1)]).unwrap();
        assert_eq!(y2, r.scale(&BigInt::from(4), &w).unwrap());
    }

    #[test]
    fn additive_thh_of_zp() {
        let m = thh_zp_additive(3, 20);
        assert_eq!(m.group(5), FGAbelianGroup::cyclic(3));
        assert_eq!(m.group(17), FGAbelianGroup::cyclic(9));
        assert_eq!(m.group(3), FGAbelianGroup::zero());
        assert_eq!(m.group(0), FGAbelianGroup::free(1));
    }

    #[test]
    fn quotients() {
        let p = 5;
        let ku = standard_family("ku", &FamilyParams::prime(p)).unwrap().presentation().unwrap();
        let q = quotient_by_ideal(&ku, &[poly(&[(1, &[("u", p as u32 - 2)])])]).unwrap();
        let r = realize(&q, 12).unwrap();
        for d in 0..=12 {
            let expected = if d % 2 == 0 && d <= 2 * (p as i64 - 3) { FGAbelianGroup::free(1) } else { FGAbelianGroup::zero() };
            assert_eq!(r.group(d), expected);
        }
        let tmf = standard_family("tmf13_homotopy", &FamilyParams::default()).unwrap().presentation().unwrap();
        let r = realize(&quotient_by_ideal(&tmf, &[poly(&[(1, &[("a3", 1)])])]).unwrap(), 12).unwrap();
        assert!((0..=12).all(|d| r.group(d) == if d % 2 == 0 { FGAbelianGroup::free(1) } else { FGAbelianGroup::zero() }));
        assert!(standard_family("nosuch", &FamilyParams::default()).is_err());
    }
}
