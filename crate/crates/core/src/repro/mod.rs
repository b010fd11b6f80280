//! Named end-to-end reproductions with closed-form comparisons and
//! machine-readable reports.

mod answer;
mod common;
pub mod golden;
mod pattern;
mod pipeline;
mod quotients;
mod report;
mod tame;
mod wild;

use serde::{Deserialize, Serialize};
use std::time::Instant;

pub use pattern::{
    describe_presentation, match_pattern, render_group, square_zero_by_filtration, tor_factors, ClosedFormPattern, Factor, MatchReport, MatchRow,
    Progression, SquareZeroCheck, SquareZeroPattern, TensorPattern,
};
pub use pipeline::{run_pipeline, AlgebraSpec, ModuleSpec, PipelineSpec};
pub use report::{CertificateSummary, Check, ExtensionNote, OracleSection, Report, Row, Table, Verdict};

use crate::exact::ExactError;
use crate::graded::GradedError;
use crate::homological::HomologicalError;
use crate::ss::SsError;

/// Which Tor computation drives a scenario. `Both` runs the resolution
/// pipeline and adds a bar-complex comparison.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Bar,
    #[default]
    Resolution,
    Both,
}

impl std::str::FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "bar" => Ok(Method::Bar),
            "resolution" => Ok(Method::Resolution),
            "both" => Ok(Method::Both),
            other => Err(format!("unknown method {other:?} (expected bar, resolution or both)")),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioParams {
    #[serde(default)]
    pub prime: Option<u64>,
    /// Total-degree cutoff `T`.
    #[serde(default)]
    pub max_degree: Option<i64>,
    /// Homological cutoff `S`; raised automatically when left unset.
    #[serde(default)]
    pub homological_degree: Option<usize>,
    #[serde(default)]
    pub method: Method,
    /// Seed for scenarios with random instances.
    #[serde(default)]
    pub seed: Option<u64>,
    /// Number of random instances.
    #[serde(default)]
    pub instances: Option<usize>,
}

#[derive(Debug, thiserror::Error)]
pub enum ReproError {
    #[error("unknown scenario {0:?}")]
    ScenarioUnknown(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error(transparent)]
    Homological(#[from] HomologicalError),
    #[error(transparent)]
    Graded(#[from] GradedError),
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error(transparent)]
    Ss(#[from] SsError),
}

pub type Result<T> = std::result::Result<T, ReproError>;

#[derive(Clone, Copy, Debug)]
pub struct ScenarioInfo {
    pub name: &'static str,
    pub citation: &'static str,
    pub default_prime: Option<u64>,
    pub default_max_degree: i64,
}

pub const DEFAULT_HOMOLOGICAL_DEGREE: usize = 12;

pub const SCENARIOS: &[ScenarioInfo] = &[
    ScenarioInfo {
        name: "thh2-zp-consistency",
        citation: "Second-order THH of Z_(p): the presented ring Z_(p)[x_n]/(p^n x_n, x_n^p - p x_(n+1)) against the torsion orders p^(v(t)+1), the a_t function, the Bockstein sequence and the mod p answer Γ(y) ⊗ Λ(z)",
        default_prime: Some(3),
        default_max_degree: 150,
    },
    ScenarioInfo {
        name: "thh-ku-over-l",
        citation: "THH of ku_(p) relative to the Adams summand: ku_* ⋉ (ku_*/u^(p-2))⟨y_i⟩ with |y_i| = 2pi+3",
        default_prime: Some(3),
        default_max_degree: 60,
    },
    ScenarioInfo {
        name: "thh-ku-over-l-coeff-z",
        citation: "THH of ku_(p) relative to ℓ with HZ_(p) coefficients: Λ(εu) ⊗ Γ(φ⁰u), |εu| = 3, |φ⁰u| = 2p",
        default_prime: Some(3),
        default_max_degree: 60,
    },
    ScenarioInfo {
        name: "thh-ku-over-l-coeff-fp",
        citation: "THH of ku_(p) relative to ℓ with HF_p coefficients: Λ(εu) ⊗ Γ(φ⁰u), |εu| = 3, |φ⁰u| = 2p",
        default_prime: Some(3),
        default_max_degree: 60,
    },
    ScenarioInfo {
        name: "thh-ku-over-ko",
        citation: "THH of ku relative to ko: ku_* ⋉ (ku_*/2u)⟨y_j⟩ with |y_j| = 3(2j+1)",
        default_prime: Some(2),
        default_max_degree: 31,
    },
    ScenarioInfo {
        name: "thh-ku-over-ko-coeffs",
        citation: "THH of ku relative to ko with HF_2 and HZ_(2) coefficients: Λ(εx_2) ⊗ Γ(φ⁰x_2), and its iterate over F_2",
        default_prime: Some(2),
        default_max_degree: 31,
    },
    ScenarioInfo {
        name: "ku-mod-p-v1",
        citation: "THH of ku_(p) ∧_ℓ HF_p with HF_p coefficients: F_p[μ] ⊗ Λ(εu) ⊗ Γ(φ⁰u)",
        default_prime: Some(3),
        default_max_degree: 40,
    },
    ScenarioInfo {
        name: "regular-quotient-general",
        citation: "THH^R(R/x) for a regular x of positive even degree: Γ_(R_*/x)(ρ⁰εx) with |ρ⁰εx| = |x|+2, no extensions",
        default_prime: Some(3),
        default_max_degree: 30,
    },
    ScenarioInfo {
        name: "rmodx-to-field",
        citation: "THH^R(R/x; Hk) for a regular sequence (x, y_1, ..., y_n) ending at a field: Γ_k(ρ⁰εx), and its iterates over F_p",
        default_prime: Some(3),
        default_max_degree: 30,
    },
    ScenarioInfo {
        name: "higher-thh-iterate",
        citation: "Higher THH with F_p coefficients as iterated Tor, starting from Λ(ε) with |ε| = 3",
        default_prime: Some(2),
        default_max_degree: 24,
    },
    ScenarioInfo {
        name: "shukla",
        citation: "Shukla homology of Z/p over Z: Σ(-1)^i τ^(⊗i) ⊗ 1 ⊗ τ^(⊗(m-i)) generates SH_2m = Z/p, and SH_* = Γ_(Z/p)(ρ⁰εp)",
        default_prime: Some(3),
        default_max_degree: 10,
    },
];

pub fn scenario_info(name: &str) -> Option<&'static ScenarioInfo> {
    SCENARIOS.iter().find(|s| s.name == name)
}

/// Runs a named scenario. The report's parameters are the effective ones,
/// with defaults filled in.
pub fn run_scenario(name: &str, params: &ScenarioParams) -> Result<Report> {
    let info = scenario_info(name).ok_or_else(|| ReproError::ScenarioUnknown(name.to_string()))?;
    let mut effective = params.clone();
    if effective.prime.is_none() {
        effective.prime = info.default_prime;
    }
    if effective.max_degree.is_none() {
        effective.max_degree = Some(info.default_max_degree);
    }
    if effective.max_degree.is_some_and(|t| t <= 0) {
        return Err(ReproError::InvalidParameter("max_degree must be positive".into()));
    }
    if effective.homological_degree == Some(0) {
        return Err(ReproError::InvalidParameter("homological_degree must be positive".into()));
    }
    if let Some(p) = effective.prime {
        crate::exact::CoefficientRing::prime_field(p).map_err(|_| ReproError::InvalidParameter(format!("{p} is not prime")))?;
    }
    let start = Instant::now();
    let mut report = Report::new(info.name, info.citation, effective.clone());
    match info.name {
        "thh2-zp-consistency" => answer::thh2_zp_consistency(&effective, &mut report)?,
        "thh-ku-over-l" => tame::thh_ku_over_l(&effective, &mut report)?,
        "thh-ku-over-l-coeff-z" => tame::ku_over_l_coefficients(&effective, false, &mut report)?,
        "thh-ku-over-l-coeff-fp" => tame::ku_over_l_coefficients(&effective, true, &mut report)?,
        "ku-mod-p-v1" => tame::ku_mod_p_v1(&effective, &mut report)?,
        "thh-ku-over-ko" => wild::thh_ku_over_ko(&effective, &mut report)?,
        "thh-ku-over-ko-coeffs" => wild::ku_over_ko_coefficients(&effective, &mut report)?,
        "regular-quotient-general" => quotients::regular_quotient_general(&effective, &mut report)?,
        "rmodx-to-field" => quotients::rmodx_to_field(&effective, &mut report)?,
        "higher-thh-iterate" => quotients::higher_thh_iterate(&effective, &mut report)?,
        "shukla" => quotients::shukla(&effective, &mut report)?,
        _ => unreachable!("registry and dispatch agree"),
    }
    report.finalize();
    report.elapsed = start.elapsed();
    Ok(report)
}
