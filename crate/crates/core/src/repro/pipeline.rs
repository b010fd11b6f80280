//! Ad-hoc computations: a Tor spectral sequence page for one augmented
//! algebra from the periodic families, described in JSON.

use serde::{Deserialize, Serialize};
use std::sync::Arc;
use std::time::Instant;

use super::common::{compare, merge_oracle, oracle, oracle_window, spectral_run};
use super::{describe_presentation, render_group, ClosedFormPattern, Method, ReproError, Report, Result, Row, ScenarioParams, Table, Verdict};
use crate::exact::CoefficientRing;
use crate::graded::{realize, FreeRealization, GradedElement, GradedRingPresentation, Polynomial, Term};
use crate::homological::{tor, AugModule, AugmentedAlgebra, Ground, PeriodicTag, TorMethod};
use crate::ss::{ExtensionPolicy, ExtensionRule};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum AlgebraSpec {
    /// `Λ(e)` over the ground ring.
    Exterior { degree: i64 },
    /// `k[u]/u^height`.
    Truncated { degree: i64, height: u32 },
    /// `k[ũ]/(ũ² - u²)` with `ũ ↦ u` for an element `u` of the ground ring.
    Quadratic { element: Polynomial },
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ModuleSpec {
    #[default]
    Ground,
    /// A polynomial module `k[μ]` with trivial action.
    Polynomial { name: String, degree: i64 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PipelineSpec {
    #[serde(default)]
    pub name: Option<String>,
    /// Used when `ground` is absent: the ground ring is this ring in degree 0.
    #[serde(default)]
    pub coefficients: Option<CoefficientRing>,
    /// An even, degreewise free ground ring.
    #[serde(default)]
    pub ground: Option<GradedRingPresentation>,
    pub algebra: AlgebraSpec,
    #[serde(default)]
    pub module: ModuleSpec,
    pub max_degree: i64,
    #[serde(default)]
    pub homological_degree: Option<usize>,
    #[serde(default)]
    pub method: Method,
    #[serde(default)]
    pub protect_unit_column: bool,
    #[serde(default)]
    pub expected: Option<ClosedFormPattern>,
}

impl PipelineSpec {
    pub fn from_json(text: &str) -> std::result::Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }
}

fn element(r: &crate::graded::DegreewiseRealization, f: &Polynomial) -> Result<GradedElement> {
    let degree = r.presentation().polynomial_degree(f)?.ok_or_else(|| ReproError::InvalidParameter("the quadratic element is zero".into()))?;
    let mut acc = GradedElement::zero(degree, r.degree(degree).map_or(0, |d| d.num_generators()));
    for Term(c, exps) in f {
        let e: Vec<(&str, u32)> = exps.iter().map(|(n, k)| (n.as_str(), *k)).collect();
        acc = r.add(&acc, &r.scale(c, &r.monomial(&e)?)?)?;
    }
    Ok(acc)
}

/// Computes `E²`, scans it and assembles the abutment. Rows pass when
/// they match `expected`, or, without one, when the group is determined.
pub fn run_pipeline(spec: &PipelineSpec) -> Result<Report> {
    let start = Instant::now();
    let t = spec.max_degree;
    if t <= 0 {
        return Err(ReproError::InvalidParameter("max_degree must be positive".into()));
    }
    if spec.homological_degree == Some(0) {
        return Err(ReproError::InvalidParameter("homological_degree must be positive".into()));
    }
    let (ring, ground, realization) = match (&spec.ground, spec.coefficients) {
        (Some(g), _) => {
            let r = realize(g, t + 4)?;
            let ground = Ground(Arc::new(FreeRealization::new(r.clone())?));
            (g.base, ground, Some(r))
        }
        (None, Some(c)) => {
            c.validate()?;
            (c, Ground::point(c), None)
        }
        (None, None) => return Err(ReproError::InvalidParameter("give coefficients or a ground ring".into())),
    };
    let (alg, tag, connectivity) = match &spec.algebra {
        AlgebraSpec::Exterior { degree } => {
            (AugmentedAlgebra::exterior(ground, *degree, "e", t + 1)?, PeriodicTag::PeriodicExterior, *degree)
        }
        AlgebraSpec::Truncated { degree, height } => {
            (AugmentedAlgebra::truncated(ground, *degree, *height, t + 1)?, PeriodicTag::PeriodicTruncated, *degree)
        }
        AlgebraSpec::Quadratic { element: f } => {
            let r = realization.as_ref().ok_or_else(|| ReproError::InvalidParameter("a quadratic algebra needs a ground ring".into()))?;
            let u = element(r, f)?;
            let d = u.degree;
            (AugmentedAlgebra::quadratic(ground, u, t + 1)?, PeriodicTag::PeriodicQuadratic, d)
        }
    };
    let module = match &spec.module {
        ModuleSpec::Ground => AugModule::ground(),
        ModuleSpec::Polynomial { name, degree } => {
            if *degree <= 0 {
                return Err(ReproError::InvalidParameter("module generator degree must be positive".into()));
            }
            AugModule::polynomial_trivial(name, *degree, t + 1)
        }
    };
    let params = ScenarioParams {
        prime: ring.localization_prime().or(ring.field_characteristic()),
        max_degree: Some(t),
        homological_degree: spec.homological_degree,
        method: spec.method,
        ..Default::default()
    };
    let name = spec.name.clone().unwrap_or_else(|| "compute".into());
    let mut report = Report::new(&name, "ad-hoc pipeline", params.clone());
    let s = super::common::homological_cutoff(&params, connectivity, &mut report);
    let ground_desc = spec.ground.as_ref().map_or(ring.to_string(), describe_presentation);
    report.pipeline = vec![
        format!("E² = Tor over {:?} on {ground_desc}, s ≤ {s}, t ≤ {}", spec.algebra, t + 1),
        "exclusion scan, abutment assembly".into(),
    ];

    let a = Arc::new(alg);
    let k = AugModule::ground();
    let method = if spec.method == Method::Bar { TorMethod::Bar } else { TorMethod::Resolution(tag) };
    let groups = tor(a.clone(), &module, &k, s, t + 1, method)?;
    if spec.method == Method::Both {
        let (ws, wt) = oracle_window(s, t);
        let bar = tor(a, &module, &k, ws, wt, TorMethod::Bar)?;
        merge_oracle(&mut report, oracle(&groups.restrict(ws, wt), &bar, ws, wt));
    }
    let mut policy = ExtensionPolicy::standard();
    policy.rules.push(ExtensionRule::ModulePropagation);
    let run = spectral_run(&groups, connectivity, spec.protect_unit_column, &policy, |_| {})?;
    run.record("E²", ring, t, &mut report);
    let computed = run.groups(t);
    match &spec.expected {
        Some(pattern) => {
            compare(&mut report, "abutment", ring, &computed, pattern, t, Some(&run.page))?;
        }
        None => {
            let rows = computed
                .iter()
                .enumerate()
                .map(|(d, g)| Row {
                    degree: d as i64,
                    computed: g.as_ref().map_or("?".into(), |g| render_group(g, ring)),
                    expected: "-".into(),
                    verdict: Verdict::from_bool(g.is_some()),
                })
                .collect();
            report.tables.push(Table { name: "abutment".into(), coefficients: ring.to_string(), pattern: "-".into(), rows });
        }
    }
    report.finalize();
    report.elapsed = start.elapsed();
    Ok(report)
}
