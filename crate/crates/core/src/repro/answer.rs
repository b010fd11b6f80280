use num_bigint::BigInt;

use super::common::*;
use super::{ClosedFormPattern, Factor, Report, Result, ScenarioParams};
use crate::exact::{p_adic_digits, p_adic_valuation, CoefficientRing};
use crate::graded::{realize, thh2_zp_answer};

/// `a_t = v_p(t) + 1`.
fn a(t: u64, p: u64) -> u32 {
    p_adic_valuation(t, p) + 1
}

pub fn thh2_zp_consistency(params: &ScenarioParams, report: &mut Report) -> Result<()> {
    let p = prime(params);
    let t = max_degree(params);
    let ring = CoefficientRing::IntegersLocalizedAt(p);
    let step = 2 * p as i64;
    report.pipeline = vec![
        format!("realize Z_({p})[x_n]/(p^n x_n, x_n^{p} - p x_(n+1)), |x_n| = 2·{p}^n, through degree {t}"),
        "compare orders, generators and the relations among the x_n".into(),
        "reduce mod p by the universal coefficient sequence".into(),
    ];
    let pres = thh2_zp_answer(p, t)?;
    let r = realize(&pres, t)?;
    let groups: Vec<_> = (0..=t).map(|d| Some(r.group(d))).collect();
    compare(report, "presented ring", ring, &groups, &ClosedFormPattern::AnswerRing { prime: p }, t, None)?;

    // ỹ_t = ∏ x_{i+1}^{t_i} for t = Σ t_i p^i generates degree 2pt
    let mut failures = Vec::new();
    let mut checked = 0;
    for k in 1..=(t / step) as u64 {
        let digits = p_adic_digits(k, p);
        let names: Vec<String> = (0..digits.len()).map(|i| format!("x{}", i + 1)).collect();
        let exps: Vec<(&str, u32)> = names.iter().zip(&digits).map(|(n, &e)| (n.as_str(), e as u32)).collect();
        let y = r.monomial(&exps)?;
        checked += 1;
        if r.generates_cyclic(&y)? != Some(true) {
            failures.push(2 * p as i64 * k as i64);
        }
    }
    report.check(
        "ỹ_t generates degree 2pt",
        failures.is_empty(),
        if failures.is_empty() { format!("{checked} degrees") } else { format!("fails in degrees {failures:?}") },
    );

    // x_v^p = p^(a_(p^v) - a_(p^(v-1))) x_(v+1)
    let mut failures = Vec::new();
    let mut v = 1u32;
    while 2 * (p as i64).pow(v + 1) <= t {
        let lhs = r.power(&r.monomial(&[(&format!("x{v}"), 1)])?, p as u32)?;
        let e = a(p.pow(v), p) - a(p.pow(v - 1), p);
        let rhs = r.scale(&BigInt::from(p).pow(e), &r.monomial(&[(&format!("x{}", v + 1), 1)])?)?;
        let diff = r.add(&lhs, &r.scale(&BigInt::from(-1), &rhs)?)?;
        if !r.is_zero(&diff)? {
            failures.push(v);
        }
        v += 1;
    }
    report.check(
        "x_v^p = p^(a_(p^v) - a_(p^(v-1))) x_(v+1)",
        failures.is_empty(),
        if failures.is_empty() { format!("v = 1..{}", v - 1) } else { format!("fails for v in {failures:?}") },
    );

    // multiplication by p on degree 2pt has kernel and cokernel of order p
    let mut failures = Vec::new();
    for k in 1..=(t / step) as u64 {
        let g = r.group(step * k as i64);
        let a_t = a(k, p);
        let ok = g.num_generators() == 1 && g.order() == Some(BigInt::from(p).pow(a_t));
        if !ok {
            failures.push(step * k as i64);
        }
    }
    report.check(
        "p: A_2pt -> A_2pt has kernel and cokernel of order p",
        failures.is_empty(),
        if failures.is_empty() { "every positive degree is cyclic of order p^(a_t)".to_string() } else { format!("fails in {failures:?}") },
    );

    let dims: Vec<usize> = (0..=t)
        .map(|d| {
            let below = if d > 0 { r.group(d - 1).p_torsion_count(p) } else { 0 };
            r.group(d).mod_p_dimension(p) + below
        })
        .collect();
    dims_table(report, "mod p reduction", p, &dims, vec![Factor::divided_power("y", step), Factor::exterior("z", step + 1)], t)?;
    Ok(())
}
