use std::sync::Arc;

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::common::*;
use super::golden;
use super::{describe_presentation, tor_factors, ClosedFormPattern, Factor, Report, Result, ScenarioParams, TensorPattern};
use crate::exact::{smith_normal_form, CoefficientRing, FGAbelianGroup, IntegerMatrix};
use crate::graded::{
    multiply_elements, poly, quotient_by_ideal, realize, BasedAlgebra, DegreewiseRealization, FreeRealization, GradedElement,
    GradedRingPresentation, Polynomial, Term,
};
use crate::homological::{homology, iterated_tor, verify_cycle, AugModule, AugmentedAlgebra, Ground, PeriodicTag, ShuklaComplex};
use crate::ss::ExtensionPolicy;

fn element(r: &DegreewiseRealization, f: &Polynomial, degree: i64) -> Result<GradedElement> {
    let mut acc = GradedElement::zero(degree, r.degree(degree).map_or(0, |d| d.num_generators()));
    for Term(c, exps) in f {
        let e: Vec<(&str, u32)> = exps.iter().map(|(n, k)| (n.as_str(), *k)).collect();
        acc = r.add(&acc, &r.scale(c, &r.monomial(&e)?)?)?;
    }
    Ok(acc)
}

/// Whether multiplication by `f` is injective on `r` in every degree
/// through `max - |f|`. A constant acts injectively iff there is no
/// torsion of the corresponding order.
fn acts_injectively(r: &DegreewiseRealization, f: &Polynomial, max: i64) -> Result<bool> {
    let deg = r.presentation().polynomial_degree(f)?.unwrap_or(0);
    if deg == 0 {
        let c: BigInt = f.iter().filter(|t| t.1.iter().all(|(_, k)| *k == 0)).map(|t| t.0.clone()).sum();
        return Ok((0..=max).all(|d| r.group(d).torsion().iter().all(|o| num_integer::Integer::gcd(o, &c) == BigInt::from(1))));
    }
    if !r.is_degreewise_free() {
        return Ok(false);
    }
    let x = element(r, f, deg)?;
    for d in 0..=max - deg {
        let (n, m) = (r.dimension(d), r.dimension(d + deg));
        if n == 0 {
            continue;
        }
        let cols: Vec<Vec<BigInt>> = (0..n).map(|g| Ok(r.multiply(&x, &r.generator_element(d, g)?)?.coords)).collect::<Result<_>>()?;
        let matrix = IntegerMatrix::from_fn(m, n, |i, j| cols[j][i].clone());
        if smith_normal_form(&matrix).rank() < n {
            return Ok(false);
        }
    }
    Ok(true)
}

struct Quotient {
    name: String,
    ring: GradedRingPresentation,
    x: Polynomial,
}

fn named_quotients(p: u64) -> Vec<Quotient> {
    let z2 = CoefficientRing::IntegersLocalizedAt(2);
    let zp = CoefficientRing::IntegersLocalizedAt(p);
    vec![
        Quotient {
            name: "tmf1(3)_(2)/a3".into(),
            ring: GradedRingPresentation::new(z2, &[("a1", 2), ("a3", 6)], vec![]),
            x: poly(&[(1, &[("a3", 1)])]),
        },
        Quotient {
            name: "ku/u".into(),
            ring: GradedRingPresentation::new(CoefficientRing::Integers, &[("u", 2)], vec![]),
            x: poly(&[(1, &[("u", 1)])]),
        },
        Quotient {
            name: format!("ℓ/v1 at p = {p}"),
            ring: GradedRingPresentation::new(zp, &[("v1", 2 * p as i64 - 2)], vec![]),
            x: poly(&[(1, &[("v1", 1)])]),
        },
    ]
}

/// Exponent vectors of total degree `d` in generators of the given degrees.
fn monomials(degrees: &[i64], d: i64) -> Vec<Vec<u32>> {
    match degrees.split_first() {
        None => {
            if d == 0 {
                vec![vec![]]
            } else {
                vec![]
            }
        }
        Some((&first, rest)) => {
            let mut out = Vec::new();
            let mut k = 0;
            while k as i64 * first <= d {
                for mut m in monomials(rest, d - k as i64 * first) {
                    m.insert(0, k);
                    out.push(m);
                }
                k += 1;
            }
            out
        }
    }
}

/// A generator plus a random combination of same-degree monomials in the
/// other generators, over a polynomial ring on 1 to 3 even generators.
fn random_quotient(rng: &mut ChaCha8Rng, p: u64, k: usize) -> Quotient {
    let base = if rng.gen_bool(0.5) { CoefficientRing::Integers } else { CoefficientRing::IntegersLocalizedAt(p) };
    let n = rng.gen_range(1..=3);
    let names: Vec<String> = (1..=n).map(|i| format!("g{i}")).collect();
    let degrees: Vec<i64> = (0..n).map(|_| 2 * rng.gen_range(1..=4)).collect();
    let gens: Vec<(&str, i64)> = names.iter().map(String::as_str).zip(degrees.iter().copied()).collect();
    let lead = rng.gen_range(0..n);
    let others: Vec<usize> = (0..n).filter(|&i| i != lead).collect();
    let other_degrees: Vec<i64> = others.iter().map(|&i| degrees[i]).collect();
    let mut x = vec![Term(BigInt::from(1), vec![(names[lead].clone(), 1)])];
    for m in monomials(&other_degrees, degrees[lead]) {
        let c: i64 = rng.gen_range(-3..=3);
        if c != 0 {
            let exps = others.iter().zip(&m).filter(|(_, e)| **e > 0).map(|(&i, &e)| (names[i].clone(), e)).collect();
            x.push(Term(BigInt::from(c), exps));
        }
    }
    let ring = GradedRingPresentation::new(base, &gens, vec![]);
    let shown = describe_presentation(&quotient_by_ideal(&ring, std::slice::from_ref(&x)).expect("x is homogeneous"));
    let degrees: Vec<String> = gens.iter().map(|(n, d)| format!("|{n}| = {d}")).collect();
    Quotient { name: format!("random {k}: {shown}, {}", degrees.join(", ")), ring, x }
}

pub fn regular_quotient_general(params: &ScenarioParams, report: &mut Report) -> Result<()> {
    let p = prime(params);
    let t = max_degree(params);
    let count = params.instances.unwrap_or(20);
    let seed = params.seed.unwrap_or(0);
    report.pipeline = vec![
        "check that x is regular: multiplication by x is injective".into(),
        "E² = Tor over Λ_(R/x)(εx) of R/x, |εx| = |x| + 1".into(),
        "exclusion scan, abutment assembly, comparison with Γ_(R/x)(ρ⁰εx)".into(),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut instances = named_quotients(p);
    instances.extend((1..=count).map(|k| random_quotient(&mut rng, p, k)));
    report.notes.push(format!("{} named and {count} random instances, seed {seed}", instances.len() - count));
    let mut regular_fails = Vec::new();
    let mut parity_fails = Vec::new();
    for q in &instances {
        let ring = q.ring.base;
        let d = q.ring.polynomial_degree(&q.x)?.unwrap_or(0);
        let r = realize(&q.ring, t + 2)?;
        if !acts_injectively(&r, &q.x, t + 2)? {
            regular_fails.push(q.name.clone());
            continue;
        }
        let quotient = quotient_by_ideal(&q.ring, std::slice::from_ref(&q.x))?;
        let ground = Ground(Arc::new(FreeRealization::new(realize(&quotient, t + 2)?)?));
        let c = d + 1;
        let s = homological_cutoff(params, c, report);
        let alg = AugmentedAlgebra::exterior(ground, c, "εx", t + 1)?;
        let groups = tor_groups(params, &alg, &AugModule::ground(), s, t + 1, PeriodicTag::PeriodicExterior, report)?;
        let run = spectral_run(&groups, c, false, &ExtensionPolicy::standard(), |_| {})?;
        run.record(&q.name, ring, t, report);
        if !run.parity_certifies() {
            parity_fails.push(q.name.clone());
        }
        let pattern = ClosedFormPattern::Tensor(TensorPattern {
            coefficients: ring,
            base: Some(quotient),
            factors: vec![Factor::divided_power("ρ⁰εx", d + 2)],
        });
        compare(report, &q.name, ring, &run.groups(t), &pattern, t, None)?;
    }
    report.notes.dedup();
    report.check(
        "x is regular",
        regular_fails.is_empty(),
        if regular_fails.is_empty() { format!("{} instances", instances.len()) } else { format!("not injective: {regular_fails:?}") },
    );
    report.check(
        "parity certificate",
        parity_fails.is_empty(),
        if parity_fails.is_empty() { "every d^r leaves the support lattice in every instance".to_string() } else { format!("fails for {parity_fails:?}") },
    );
    Ok(())
}

struct Sequence {
    name: String,
    ring: GradedRingPresentation,
    /// `x` followed by the rest of the regular sequence.
    elements: Vec<Polynomial>,
    prime: u64,
}

fn sequences(p: u64) -> Vec<Sequence> {
    let fp = CoefficientRing::PrimeField(p);
    let zp = CoefficientRing::IntegersLocalizedAt(p);
    let z2 = CoefficientRing::IntegersLocalizedAt(2);
    let gen = |n: &str| poly(&[(1, &[(n, 1)])]);
    let constant = |c: u64| poly(&[(c as i64, &[])]);
    vec![
        Sequence { name: format!("F_{p}[u] → F_{p}"), ring: GradedRingPresentation::new(fp, &[("u", 2)], vec![]), elements: vec![gen("u")], prime: p },
        Sequence {
            name: format!("ku_({p}) → F_{p} by (u, {p})"),
            ring: GradedRingPresentation::new(zp, &[("u", 2)], vec![]),
            elements: vec![gen("u"), constant(p)],
            prime: p,
        },
        Sequence {
            name: format!("ℓ → F_{p} by (v1, {p})"),
            ring: GradedRingPresentation::new(zp, &[("v1", 2 * p as i64 - 2)], vec![]),
            elements: vec![gen("v1"), constant(p)],
            prime: p,
        },
        Sequence {
            name: "tmf1(3)_(2) → F_2 by (a3, a1, 2)".into(),
            ring: GradedRingPresentation::new(z2, &[("a1", 2), ("a3", 6)], vec![]),
            elements: vec![gen("a3"), gen("a1"), constant(2)],
            prime: 2,
        },
        Sequence {
            name: format!("Z_({p})[a, b] → F_{p} by (b, a, {p})"),
            ring: GradedRingPresentation::new(zp, &[("a", 2), ("b", 4)], vec![]),
            elements: vec![gen("b"), gen("a"), constant(p)],
            prime: p,
        },
    ]
}

pub fn rmodx_to_field(params: &ScenarioParams, report: &mut Report) -> Result<()> {
    let p = prime(params);
    let t = max_degree(params);
    report.pipeline = vec![
        "check the regular sequence step by step and that it ends at F_p".into(),
        "E² = Tor over Λ_(F_p)(εx) of F_p, exclusion scan, abutment".into(),
        "iterated Tor over F_p against the Künneth closed form".into(),
    ];
    let mut failures = Vec::new();
    for seq in sequences(p) {
        let q = seq.prime;
        let field = CoefficientRing::PrimeField(q);
        let mut current = seq.ring.clone();
        let mut regular = true;
        for e in &seq.elements {
            let r = realize(&current, t)?;
            if !acts_injectively(&r, e, t)? {
                regular = false;
            }
            current = quotient_by_ideal(&current, std::slice::from_ref(e))?;
        }
        let end = realize(&current, t)?;
        let is_field = end.group(0) == FGAbelianGroup::cyclic(q) && (1..=t).all(|d| end.group(d).is_zero());
        if !regular || !is_field {
            failures.push(format!("{} ({})", seq.name, if regular { "does not end at a field" } else { "not regular" }));
            continue;
        }
        let d = seq.ring.polynomial_degree(&seq.elements[0])?.unwrap_or(0);
        let c = d + 1;
        let s = homological_cutoff(params, c, report);
        let alg = AugmentedAlgebra::exterior(Ground::point(field), c, "εx", t + 1)?;
        let groups = tor_groups(params, &alg, &AugModule::ground(), s, t + 1, PeriodicTag::PeriodicExterior, report)?;
        let run = spectral_run(&groups, c, false, &ExtensionPolicy::standard(), |_| {})?;
        run.record(&seq.name, field, t, report);
        let gamma = vec![Factor::divided_power("ρ⁰εx", d + 2)];
        let pattern = ClosedFormPattern::Tensor(TensorPattern::new(field, gamma.clone()));
        compare(report, &seq.name, field, &run.groups(t), &pattern, t, None)?;

        let a0 = field_algebra(&GradedRingPresentation::new(field, &[("e", c)], vec![poly(&[(1, &[("e", 2)])])]), t)?;
        let stages = iterated_tor(a0, 2, t as usize, t)?;
        dims_table(report, &format!("{}, iterate 2", seq.name), q, &stages[1].total_dimensions(), tor_factors(&gamma, q, t), t)?;
    }
    report.notes.dedup();
    report.check(
        "regular sequences ending at a field",
        failures.is_empty(),
        if failures.is_empty() { "every sequence is regular and the last quotient is F_p".to_string() } else { failures.join("; ") },
    );
    Ok(())
}

/// Powers of the single class in `degree`: nonzero below `p`, zero at `p`.
fn truncation_height_is_p(alg: &dyn BasedAlgebra, degree: i64, p: u64) -> Option<bool> {
    if alg.dim(degree) != 1 {
        return Some(false);
    }
    let y = GradedElement::basis(degree, 1, 0);
    let mut power = y.clone();
    for k in 2..=p {
        if k as i64 * degree > alg.max_degree() {
            return None;
        }
        power = multiply_elements(alg, &power, &y).ok()?;
        let zero = power.is_zero();
        if zero != (k == p) {
            return Some(false);
        }
    }
    Some(true)
}

pub fn higher_thh_iterate(params: &ScenarioParams, report: &mut Report) -> Result<()> {
    let p = prime(params);
    let t = max_degree(params);
    report.pipeline = vec![
        format!("A_0 = Λ_(F_{p})(ε), |ε| = 3, through degree {t}"),
        "A_(n+1) = Tor over A_n of F_p by the bar construction, n = 0, 1, 2".into(),
        "stage 1 against Γ(4), later stages against the closed form and stored golden files".into(),
    ];
    let stages = iterated_tor(golden::iterate_start(p, t)?, 3, t as usize, t)?;
    for (n, stage) in stages.iter().enumerate() {
        dims_table(report, &format!("iterate {}", n + 1), p, &stage.total_dimensions(), golden::iterate_factors(p, n + 1, t), t)?;
        report.check(
            &format!("iterate {} is a graded-commutative unital associative algebra", n + 1),
            stage.is_graded_commutative() && stage.is_unital() && stage.is_associative(),
            format!("commutative {}, unital {}, associative {}", stage.is_graded_commutative(), stage.is_unital(), stage.is_associative()),
        );
    }
    match truncation_height_is_p(&stages[0], 4, p) {
        Some(ok) => report.check("iterate 1 has divided powers on its degree-4 class", ok, format!("y^k ≠ 0 for k < {p}, y^{p} = 0")),
        None => report.notes.push(format!("cutoff {t} is below 4·{p}; the divided power check is skipped")),
    }
    match golden::stored(p) {
        Some(rows) => {
            let n2 = stages[1].total_dimensions();
            let n3 = stages[2].total_dimensions();
            let bad: Vec<i64> = rows
                .iter()
                .filter(|r| r.degree <= t)
                .filter(|r| n2.get(r.degree as usize) != Some(&r.n2) || n3.get(r.degree as usize) != Some(&r.n3))
                .map(|r| r.degree)
                .collect();
            let through = rows.iter().map(|r| r.degree).max().unwrap_or(0).min(t);
            report.check(
                &format!("golden file {}/iterate_p{p}.csv", golden::FORMAT_VERSION),
                bad.is_empty(),
                if bad.is_empty() { format!("iterates 2 and 3 agree through degree {through}") } else { format!("differs in degrees {bad:?}") },
            );
        }
        None => report.notes.push(format!("no golden file for p = {p}; only the closed form is compared")),
    }
    Ok(())
}

pub fn shukla(params: &ScenarioParams, report: &mut Report) -> Result<()> {
    let p = prime(params);
    let t = max_degree(params);
    report.pipeline = vec![
        format!("Shukla complex of Z/{p} over Z through degree {}", t + 1),
        "homology by Smith normal form, explicit cycles checked at the chain level".into(),
    ];
    let sh = ShuklaComplex::new(p, t as usize + 1)?;
    let groups = homology(sh.complex());
    let computed: Vec<Option<FGAbelianGroup>> = (0..=t).map(|n| Some(groups.get(n as usize, 0))).collect();
    let base = GradedRingPresentation::new(CoefficientRing::Integers, &[], vec![poly(&[(p as i64, &[])])]);
    let pattern = ClosedFormPattern::Tensor(TensorPattern {
        coefficients: CoefficientRing::Integers,
        base: Some(base),
        factors: vec![Factor::divided_power("ρ⁰εp", 2)],
    });
    compare(report, "SH", CoefficientRing::Integers, &computed, &pattern, t, None)?;
    let mut bad = Vec::new();
    for m in 1..=(t / 2) as usize {
        let v = verify_cycle(sh.complex(), 2 * m, 0, &sh.cycle(m)?)?;
        if !(v.is_cycle && !v.is_boundary && v.generates && v.group == FGAbelianGroup::cyclic(p)) {
            bad.push(2 * m);
        }
    }
    report.check(
        "Σ(-1)^i τ^i ⊗ 1 ⊗ τ^(m-i) generates SH_2m",
        bad.is_empty(),
        if bad.is_empty() { format!("2m ≤ {t}") } else { format!("fails in degrees {bad:?}") },
    );
    Ok(())
}
