use std::sync::Arc;

use super::common::*;
use super::{ClosedFormPattern, Factor, Method, Progression, Report, Result, ScenarioParams, SquareZeroPattern, TensorPattern};
use crate::exact::CoefficientRing;
use crate::graded::{poly, realize, FreeRealization, GradedElement, GradedRingPresentation};
use crate::homological::{
    homology, ll_hochschild_complex, tor, AugModule, AugmentedAlgebra, BigradedGroups, Ground, PeriodicTag, TorMethod,
};
use crate::ss::{assemble_abutment, ExtensionPolicy};

/// `Tor` over `Z_(p)[u][ũ]/(ũ^{p-1} - u^{p-1})` by the bar complex, with
/// `ũ ↦ u`.
fn ll_bar(p: u64, max_s: usize, max_t: i64) -> Result<BigradedGroups> {
    let base = CoefficientRing::IntegersLocalizedAt(p);
    let r = realize(&GradedRingPresentation::new(base, &[("u", 2)], vec![]), max_t + 2 * p as i64)?;
    let powers: Vec<GradedElement> = (0..p as u32).map(|k| r.monomial(&[("u", k)])).collect::<std::result::Result<_, _>>()?;
    let ground = Ground(Arc::new(FreeRealization::new(r)?));
    let h = p as usize - 1;
    let degrees = (0..h).map(|i| 2 * i as i64).collect();
    let labels = (0..h)
        .map(|i| match i {
            0 => "1".to_string(),
            1 => "ũ".to_string(),
            _ => format!("ũ^{i}"),
        })
        .collect();
    let one = powers[0].clone();
    let top = powers[h].clone();
    let product = move |i: usize, j: usize| {
        if i + j < h {
            vec![(i + j, one.clone())]
        } else {
            vec![(i + j - h, top.clone())]
        }
    };
    let aug = powers[..h].to_vec();
    let a = AugmentedAlgebra::from_structure(ground, degrees, labels, product, aug, max_t)?;
    Ok(tor(Arc::new(a), &AugModule::ground(), &AugModule::ground(), max_s, max_t, TorMethod::Bar)?)
}

pub fn thh_ku_over_l(params: &ScenarioParams, report: &mut Report) -> Result<()> {
    let p = odd_prime(params)?;
    let t = max_degree(params);
    let s = homological_cutoff(params, 2, report);
    let ring = CoefficientRing::IntegersLocalizedAt(p);
    report.pipeline = vec![
        format!("E² = Tor over ku_*[ũ]/(ũ^{} - u^{}) of ku_*, s ≤ {s}, t ≤ {}", p - 1, p - 1, t + 1),
        "exclusion scan with the unit column protected".into(),
        "degree collision check and abutment assembly".into(),
    ];
    let groups = match params.method {
        Method::Bar => ll_bar(p, s, t + 1)?,
        _ => homology(&ll_hochschild_complex(p, s + 1, t + 1)?),
    };
    if params.method == Method::Both {
        let (ws, wt) = oracle_window(s, t);
        report.oracle = Some(oracle(&groups.restrict(ws, wt), &ll_bar(p, ws, wt)?, ws, wt));
    }
    let sigma = |m: i64| m * (2 * p as i64 - 2) + 2;
    let run = spectral_run(&groups, 2, true, &ExtensionPolicy::standard(), |page| {
        let mut m = 0;
        while 2 * m + 1 <= page.max_s as i64 {
            page.label(&format!("y_{m}"), 2 * m as usize + 1, sigma(m));
            m += 1;
        }
    })?;
    run.record("E²", ring, t, report);

    let multi: Vec<i64> = run.collisions.multi_contributor_degrees().into_iter().filter(|n| *n <= t).collect();
    report.check(
        "single contributor per total degree",
        multi.is_empty(),
        if multi.is_empty() { format!("every total degree ≤ {t} has at most one nonzero E∞ cell") } else { format!("several contributors in {multi:?}") },
    );
    let y0 = run.page.get(1, 2).unwrap_or_default();
    report.check("y_0 in degree 3", y0 == crate::exact::FGAbelianGroup::free(1), format!("E∞_{{1,2}} = {}", super::render_group(&y0, ring)));

    let base = GradedRingPresentation::new(ring, &[("u", 2)], vec![]);
    let mut module = base.clone();
    module.relations.push(poly(&[(1, &[("u", p as u32 - 2)])]));
    let pattern = ClosedFormPattern::SquareZero(SquareZeroPattern {
        base,
        module,
        generators: Progression { start: 3, step: 2 * p as i64 },
    });
    let m = compare(report, "THH", ring, &run.groups(t), &pattern, t, Some(&run.page))?;
    if let Some(sq) = &m.square_zero {
        report.check(
            "products of the y_i vanish",
            sq.holds,
            format!("{} filtration pairs, {} obstructions", sq.pairs_checked, sq.obstructions.len()),
        );
    }
    report.notes.push("column 0 is ku_* because ku_(p) splits off as a retract; no differential may enter or leave it".into());
    Ok(())
}

pub fn ku_over_l_coefficients(params: &ScenarioParams, field: bool, report: &mut Report) -> Result<()> {
    let p = odd_prime(params)?;
    let t = max_degree(params);
    let s = homological_cutoff(params, 2, report);
    let ring = localized_or_field(p, field);
    report.pipeline = vec![
        format!("E² = Tor over {ring}[u]/u^{} of {ring}, s ≤ {s}, t ≤ {}", p - 1, t + 1),
        "exclusion scan, abutment assembly".into(),
    ];
    let alg = AugmentedAlgebra::truncated(Ground::point(ring), 2, p as u32 - 1, t + 1)?;
    let groups = tor_groups(params, &alg, &AugModule::ground(), s, t + 1, PeriodicTag::PeriodicTruncated, report)?;
    let run = spectral_run(&groups, 2, false, &ExtensionPolicy::standard(), |_| {})?;
    run.record("E²", ring, t, report);
    // for p > 3 some d^r stay inside the support lattice; sparseness still
    // rules them out because their targets vanish
    report.check(
        "collapse certificate",
        run.certificate.collapses(),
        if run.parity_certifies() {
            "every d^r leaves the support lattice of the page"
        } else {
            "parity alone leaves some d^r open; each one has a zero target"
        },
    );
    let pattern = ClosedFormPattern::Tensor(TensorPattern::new(
        ring,
        vec![Factor::exterior("εu", 3), Factor::divided_power("φ⁰u", 2 * p as i64)],
    ));
    compare(report, "THH", ring, &run.groups(t), &pattern, t, None)?;
    Ok(())
}

pub fn ku_mod_p_v1(params: &ScenarioParams, report: &mut Report) -> Result<()> {
    let p = odd_prime(params)?;
    let t = max_degree(params);
    let s = homological_cutoff(params, 2, report);
    let ring = CoefficientRing::PrimeField(p);
    let mu = 2 * p as i64;
    report.pipeline = vec![
        format!("E² = Tor over F_{p}[u]/u^{} of F_{p}[μ], |μ| = {mu}, s ≤ {s}, t ≤ {}", p - 1, t + 1),
        "exclusion scan, abutment assembly".into(),
    ];
    let alg = AugmentedAlgebra::truncated(Ground::point(ring), 2, p as u32 - 1, t + 1)?;
    let module = AugModule::polynomial_trivial("μ", mu, t + 1);
    let groups = tor_groups(params, &alg, &module, s, t + 1, PeriodicTag::PeriodicTruncated, report)?;
    let policy = ExtensionPolicy::standard();
    let mut run = spectral_run(&groups, 2, false, &policy, |_| {})?;
    if run.certificate.collapses() {
        run.record("E²", ring, t, report);
    } else {
        // d^r is μ-linear and E² is free over F_p[μ] on the μ-free page, so
        // a certificate for that page covers the whole page.
        let free_groups = AugModule::ground();
        let free = tor_groups(params, &alg, &free_groups, s, t + 1, PeriodicTag::PeriodicTruncated, report)?;
        let free_run = spectral_run(&free, 2, false, &policy, |_| {})?;
        report.notes.push(format!(
            "the scan of the full page leaves {} candidate differentials between μ-multiples; the μ-free page is certified instead",
            run.certificate.unresolved.len()
        ));
        if free_run.certificate.collapses() {
            run.abutment = Some(assemble_abutment(&run.page, &free_run.certificate, &policy)?);
        }
        run.certificate = free_run.certificate;
        run.record("μ-free E²", ring, t, report);
    }
    let pattern = ClosedFormPattern::Tensor(TensorPattern::new(
        ring,
        vec![Factor::polynomial("μ", mu), Factor::exterior("εu", 3), Factor::divided_power("φ⁰u", mu)],
    ));
    compare(report, "THH", ring, &run.groups(t), &pattern, t, None)?;
    report.notes.push(format!(
        "F_{p}[μ] acts trivially, so E² is F_{p}[μ] ⊗ Tor(F_{p}, F_{p}) and the coefficient-free page governs the differentials"
    ));
    Ok(())
}
