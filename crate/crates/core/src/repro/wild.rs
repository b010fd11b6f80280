use std::collections::BTreeSet;
use std::sync::Arc;

use super::common::*;
use super::{render_group, tor_factors, ClosedFormPattern, Factor, Method, Progression, Report, Result, ScenarioParams, SquareZeroPattern, TensorPattern};
use crate::exact::{CoefficientRing, FGAbelianGroup, SparseMatrix};
use crate::graded::{poly, realize, FreeRealization, GradedRingPresentation};
use crate::homological::{
    homology, induced_map_surjective, iterated_tor, periodic_resolution, validate_resolution, AugModule, AugmentedAlgebra,
    BarComplex, FGChainComplex, Ground, HomologicalError, PeriodicTag,
};
use crate::ss::{ExtensionPolicy, ExtensionRule, ModuleStructure};

pub fn thh_ku_over_ko(params: &ScenarioParams, report: &mut Report) -> Result<()> {
    fixed_prime(params, 2)?;
    let t = max_degree(params);
    let s = homological_cutoff(params, 2, report);
    let ring = CoefficientRing::Integers;
    report.pipeline = vec![
        format!("E² = Tor over ku_*[ũ]/(ũ² - u²) of ku_*, ũ ↦ u, s ≤ {s}, t ≤ {}", t + 1),
        "multiplication by u on E², from the chain level".into(),
        "exclusion scan with the unit column protected".into(),
        "abutment assembly with split_if_free_top and propagation along u".into(),
    ];
    let base = GradedRingPresentation::new(ring, &[("u", 2)], vec![]);
    let r = realize(&base, t + 4)?;
    let u = r.monomial(&[("u", 1)])?;
    let ground = Ground(Arc::new(FreeRealization::new(r)?));
    let alg = Arc::new(AugmentedAlgebra::quadratic(ground, u.clone(), t + 1)?);
    let k = AugModule::ground();

    // the complex whose homology is E², and multiplication by u on it
    let bar_complex = |max_s: usize, max_t: i64| BarComplex::new(alg.clone(), k.clone(), k.clone(), max_s + 1, max_t);
    let (complex, action): (FGChainComplex, Box<dyn Fn(usize, i64) -> Result<SparseMatrix>>) = match params.method {
        Method::Bar => {
            let bar = bar_complex(s, t + 1)?;
            let c = bar.complex().clone();
            let u = u.clone();
            (c, Box::new(move |s, t| Ok(bar.ground_action(&u, s, t)?)))
        }
        _ => {
            let res = periodic_resolution(PeriodicTag::PeriodicQuadratic, alg.clone(), s + 1)?;
            let cert = validate_resolution(&res.resolution_complex(t + 1)?, s + 1, t + 1);
            if !cert.exact {
                return Err(HomologicalError::InvalidResolution(format!("{:?}", cert.failure)).into());
            }
            let c = res.tensored_complex(&k, t + 1)?;
            let (u, k) = (u.clone(), k.clone());
            (c, Box::new(move |s, t| Ok(res.ground_action(&k, &u, s, t, t + 2))))
        }
    };
    let groups = homology(&complex);
    if params.method == Method::Both {
        let (ws, wt) = oracle_window(s, t);
        let bar = homology(bar_complex(ws, wt)?.complex());
        report.oracle = Some(oracle(&groups.restrict(ws, wt), &bar, ws, wt));
    }

    let mut surjective = BTreeSet::new();
    for (&(cs, ct), _) in groups.cells.iter().filter(|(_, g)| !g.is_zero()) {
        if ct + 2 <= t + 1 && induced_map_surjective(&complex, cs, ct, ct + 2, &action(cs, ct)?)? {
            surjective.insert((cs, ct));
        }
    }
    let mut policy = ExtensionPolicy::standard();
    policy.rules.push(ExtensionRule::ModulePropagation);
    let run = spectral_run(&groups, 2, true, &policy, |page| {
        page.module = Some(ModuleStructure { element: "u".into(), degree: 2, surjective });
        let mut j = 0;
        while 2 * j + 1 <= page.max_s {
            page.label(&format!("y_{j}"), 2 * j + 1, 2 * (2 * j as i64 + 1));
            j += 1;
        }
    })?;
    run.record("E²", ring, t, report);

    for (degree, expected) in [(9, FGAbelianGroup::new(1, [2])), (15, FGAbelianGroup::new(1, [2, 2]))] {
        if degree > t {
            continue;
        }
        let got = run.abutment.as_ref().and_then(|a| a.group(degree).cloned());
        let shown = got.as_ref().map_or("undetermined".to_string(), |g| render_group(g, ring));
        report.check(
            &format!("total degree {degree}"),
            got.as_ref() == Some(&expected),
            format!("{shown}, expected {}", render_group(&expected, ring)),
        );
    }

    let mut module = base.clone();
    module.relations.push(poly(&[(2, &[("u", 1)])]));
    let pattern = ClosedFormPattern::SquareZero(SquareZeroPattern { base, module, generators: Progression { start: 3, step: 6 } });
    let m = compare(report, "THH", ring, &run.groups(t), &pattern, t, Some(&run.page))?;
    if let Some(sq) = &m.square_zero {
        report.check(
            "products of the y_j vanish",
            sq.holds,
            format!("{} filtration pairs, {} obstructions", sq.pairs_checked, sq.obstructions.len()),
        );
    }
    report.notes.push("input: π_*(ku ∧_ko ku) = ku_*[ũ]/(ũ² - u²), taken as given".into());
    report.notes.push("column 0 is ku_*, which splits off; no differential may enter or leave it".into());
    Ok(())
}

pub fn ku_over_ko_coefficients(params: &ScenarioParams, report: &mut Report) -> Result<()> {
    fixed_prime(params, 2)?;
    let t = max_degree(params);
    let s = homological_cutoff(params, 2, report);
    report.pipeline = vec![
        format!("E² = Tor over k[x_2]/x_2² of k for k = F_2 and Z_(2), s ≤ {s}, t ≤ {}", t + 1),
        "exclusion scan with the parity certificate, abutment assembly".into(),
        "iterated Tor over F_2 by the bar construction".into(),
    ];
    let factors = vec![Factor::exterior("εx_2", 3), Factor::divided_power("φ⁰x_2", 6)];
    for (name, ring) in [("HF_2 coefficients", CoefficientRing::PrimeField(2)), ("HZ_(2) coefficients", CoefficientRing::IntegersLocalizedAt(2))] {
        let alg = AugmentedAlgebra::truncated(Ground::point(ring), 2, 2, t + 1)?;
        let groups = tor_groups(params, &alg, &AugModule::ground(), s, t + 1, PeriodicTag::PeriodicTruncated, report)?;
        let run = spectral_run(&groups, 2, false, &ExtensionPolicy::standard(), |_| {})?;
        run.record(name, ring, t, report);
        report.check(&format!("parity certificate ({name})"), run.parity_certifies(), "every d^r leaves the support lattice of the page");
        let pattern = ClosedFormPattern::Tensor(TensorPattern::new(ring, factors.clone()));
        compare(report, name, ring, &run.groups(t), &pattern, t, None)?;
    }

    let a0 = field_algebra(
        &GradedRingPresentation::new(CoefficientRing::PrimeField(2), &[("x", 2)], vec![poly(&[(1, &[("x", 2)])])]),
        t,
    )?;
    let stages = iterated_tor(a0, 2, t as usize, t)?;
    let stage1 = tor_factors(&[Factor::truncated("x", 2, 2)], 2, t);
    dims_table(report, "iterate 1 over F_2", 2, &stages[0].total_dimensions(), stage1.clone(), t)?;
    dims_table(report, "iterate 2 over F_2", 2, &stages[1].total_dimensions(), tor_factors(&stage1, 2, t), t)?;
    Ok(())
}
