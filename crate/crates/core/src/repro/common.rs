use std::sync::Arc;

use super::report::{extension_notes, OracleSection};
use super::{match_pattern, Method, ClosedFormPattern, Factor, MatchReport, TensorPattern, ReproError, Report, Result, ScenarioParams, Table};
use super::DEFAULT_HOMOLOGICAL_DEGREE;
use crate::exact::{CoefficientRing, FGAbelianGroup};
use crate::graded::{realize, BasedAlgebra, FreeRealization, GradedRingPresentation};
use crate::homological::{tor, AugModule, AugmentedAlgebra, BigradedGroups, PeriodicTag, TorMethod};
use crate::ss::{
    assemble_abutment, degree_collision_check, exclusion_scan, parity_exclusions, protect_unit_column, Abutment, BigradedPage,
    CollapseCertificate, CollisionReport, ExtensionPolicy,
};

pub fn prime(params: &ScenarioParams) -> u64 {
    params.prime.expect("defaults fill the prime")
}

pub fn odd_prime(params: &ScenarioParams) -> Result<u64> {
    let p = prime(params);
    if p == 2 {
        return Err(ReproError::InvalidParameter("this scenario needs an odd prime".into()));
    }
    Ok(p)
}

pub fn fixed_prime(params: &ScenarioParams, p: u64) -> Result<u64> {
    match params.prime {
        Some(q) if q != p => Err(ReproError::InvalidParameter(format!("this scenario is stated at p = {p}"))),
        _ => Ok(p),
    }
}

pub fn max_degree(params: &ScenarioParams) -> i64 {
    params.max_degree.expect("defaults fill the cutoff")
}

/// The homological cutoff. Left unset, it is raised from the default until
/// a page with connectivity `c` is complete through total degree `T + 1`.
pub fn homological_cutoff(params: &ScenarioParams, connectivity: i64, report: &mut Report) -> usize {
    let t = max_degree(params);
    if let Some(s) = params.homological_degree {
        return s;
    }
    let needed = ((t + 2 + connectivity) / (connectivity + 1) - 1).max(0) as usize;
    if needed > DEFAULT_HOMOLOGICAL_DEGREE {
        report.notes.push(format!(
            "homological cutoff raised from {DEFAULT_HOMOLOGICAL_DEGREE} to {needed} so that the page is complete through total degree {}",
            t + 1
        ));
        needed
    } else {
        DEFAULT_HOMOLOGICAL_DEGREE
    }
}

pub struct SpectralRun {
    pub page: BigradedPage,
    pub certificate: CollapseCertificate,
    pub collisions: CollisionReport,
    pub abutment: Option<Abutment>,
}

/// Page, exclusion scan, collision report and (if the scan certifies
/// collapse) the assembled abutment.
pub fn spectral_run(
    groups: &BigradedGroups,
    connectivity: i64,
    protect_unit: bool,
    policy: &ExtensionPolicy,
    configure: impl FnOnce(&mut BigradedPage),
) -> Result<SpectralRun> {
    let mut page = BigradedPage::from_groups(groups, connectivity);
    configure(&mut page);
    let protection = protect_unit.then(|| protect_unit_column(&page));
    let certificate = exclusion_scan(&page, protection.as_ref())?;
    let collisions = degree_collision_check(&page);
    let abutment = if certificate.collapses() { Some(assemble_abutment(&page, &certificate, policy)?) } else { None };
    Ok(SpectralRun { page, certificate, collisions, abutment })
}

impl SpectralRun {
    /// Abutment groups in degrees `0..=max`; `None` where undetermined.
    pub fn groups(&self, max: i64) -> Vec<Option<FGAbelianGroup>> {
        (0..=max).map(|n| self.abutment.as_ref().and_then(|a| a.group(n).cloned())).collect()
    }

    /// Whether parity alone rules out every `d^r` on the page.
    pub fn parity_certifies(&self) -> bool {
        parity_exclusions(&self.page).iter().all(|(_, excluded)| *excluded)
    }

    /// Records the certificate and extension justifications, and flags
    /// degrees through `max` that could not be assembled.
    pub fn record(&self, name: &str, ring: CoefficientRing, max: i64, report: &mut Report) {
        report.certificate(name, &self.certificate);
        if self.page.complete_total <= max {
            report.unresolved.push(format!(
                "{name}: page complete only through total degree {}, below {}",
                self.page.complete_total,
                max + 1
            ));
        }
        if let Some(a) = &self.abutment {
            report.extensions.extend(extension_notes(a, ring).into_iter().filter(|e| e.degree <= max));
            for n in a.unresolved().into_iter().filter(|n| *n <= max) {
                report.unresolved.push(format!("{name}: extension in degree {n} not determined by the policy"));
            }
        }
    }
}

/// Compares computed groups against a pattern and adds the table.
pub fn compare(
    report: &mut Report,
    name: &str,
    ring: CoefficientRing,
    computed: &[Option<FGAbelianGroup>],
    pattern: &ClosedFormPattern,
    max: i64,
    filtration: Option<&BigradedPage>,
) -> Result<MatchReport> {
    let m = match_pattern(computed, pattern, max, filtration)?;
    report.tables.push(Table::from_match(name, ring, &pattern.describe(), &m));
    Ok(m)
}

/// Cellwise equality of two Tor computations on a window.
pub fn oracle(a: &BigradedGroups, b: &BigradedGroups, max_s: usize, max_t: i64) -> OracleSection {
    let mut mismatches = Vec::new();
    let mut cells = 0;
    for s in 0..=max_s {
        for t in 0..=max_t {
            cells += 1;
            let (x, y) = (a.get(s, t), b.get(s, t));
            if x != y {
                mismatches.push(format!("({s}, {t}): resolution {x}, bar {y}"));
            }
        }
    }
    OracleSection { max_s, max_t, cells_compared: cells, equal: mismatches.is_empty(), mismatches }
}

/// The window used for bar-complex cross-checks.
pub fn oracle_window(s: usize, t: i64) -> (usize, i64) {
    (s.min(10), t.min(30))
}

pub fn localized_or_field(p: u64, field: bool) -> CoefficientRing {
    if field {
        CoefficientRing::PrimeField(p)
    } else {
        CoefficientRing::IntegersLocalizedAt(p)
    }
}

/// A presented ring over a field as a based algebra.
pub fn field_algebra(presentation: &GradedRingPresentation, max: i64) -> Result<Arc<dyn BasedAlgebra>> {
    Ok(Arc::new(FreeRealization::new(realize(presentation, max)?)?))
}

/// Compares degreewise `F_p`-dimensions with a tensor product of factors.
pub fn dims_table(report: &mut Report, name: &str, p: u64, dims: &[usize], factors: Vec<Factor>, max: i64) -> Result<MatchReport> {
    let reached = (dims.len() as i64 - 1).min(max);
    if reached < max {
        report.unresolved.push(format!("{name}: complete only through degree {reached}"));
    }
    let ring = CoefficientRing::PrimeField(p);
    let computed: Vec<Option<FGAbelianGroup>> = dims.iter().map(|&d| Some(FGAbelianGroup::elementary(p, d))).collect();
    let pattern = ClosedFormPattern::Tensor(TensorPattern::new(ring, factors));
    compare(report, name, ring, &computed, &pattern, reached, None)
}

/// `Tor^A(M, k)` by the requested method; with `Both`, a bar-complex
/// comparison on a window is added to the report.
pub fn tor_groups(
    params: &ScenarioParams,
    algebra: &AugmentedAlgebra,
    module: &AugModule,
    max_s: usize,
    max_t: i64,
    tag: PeriodicTag,
    report: &mut Report,
) -> Result<BigradedGroups> {
    let a = Arc::new(algebra.clone());
    let k = AugModule::ground();
    let method = if params.method == Method::Bar { TorMethod::Bar } else { TorMethod::Resolution(tag) };
    let groups = tor(a.clone(), module, &k, max_s, max_t, method)?;
    if params.method == Method::Both {
        let (ws, wt) = oracle_window(max_s, max_t);
        let bar = tor(a, module, &k, ws, wt, TorMethod::Bar)?;
        merge_oracle(report, oracle(&groups.restrict(ws, wt), &bar, ws, wt));
    }
    Ok(groups)
}

/// Adds a comparison to the report's oracle section; scenarios with several
/// instances accumulate one section.
pub fn merge_oracle(report: &mut Report, o: OracleSection) {
    report.oracle = Some(match report.oracle.take() {
        None => o,
        Some(mut acc) => {
            acc.max_s = acc.max_s.max(o.max_s);
            acc.max_t = acc.max_t.max(o.max_t);
            acc.cells_compared += o.cells_compared;
            acc.equal &= o.equal;
            acc.mismatches.extend(o.mismatches);
            acc
        }
    });
}
