use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::time::Duration;

use super::pattern::{render_group, MatchReport};
use super::ScenarioParams;
use crate::exact::CoefficientRing;
use crate::ss::{Abutment, CollapseCertificate};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Verdict {
    Pass,
    Fail,
}

impl Verdict {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Row {
    pub degree: i64,
    pub computed: String,
    pub expected: String,
    pub verdict: Verdict,
}

/// Degreewise comparison of one computed object with its closed form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Table {
    pub name: String,
    pub coefficients: String,
    pub pattern: String,
    pub rows: Vec<Row>,
}

impl Table {
    pub fn from_match(name: &str, ring: CoefficientRing, pattern: &str, m: &MatchReport) -> Self {
        let rows = m
            .rows
            .iter()
            .map(|r| Row {
                degree: r.degree,
                computed: r.computed.as_ref().map_or("?".into(), |g| render_group(g, ring)),
                expected: render_group(&r.expected, ring),
                verdict: Verdict::from_bool(r.matches),
            })
            .collect();
        Table { name: name.into(), coefficients: ring.to_string(), pattern: pattern.into(), rows }
    }

    pub fn passes(&self) -> bool {
        self.rows.iter().all(|r| r.verdict == Verdict::Pass)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateSummary {
    pub name: String,
    pub through: i64,
    pub collapses: bool,
    pub exclusions: BTreeMap<String, usize>,
    pub unresolved: Vec<String>,
    pub contradictions: Vec<String>,
}

impl CertificateSummary {
    pub fn new(name: &str, c: &CollapseCertificate) -> Self {
        let fmt = |d: &crate::ss::Differential| format!("d^{} {:?} -> {:?}", d.r, d.source, d.target);
        CertificateSummary {
            name: name.into(),
            through: c.through,
            collapses: c.collapses(),
            exclusions: c.reason_counts().into_iter().map(|(r, n)| (r.to_string(), n)).collect(),
            unresolved: c.unresolved.iter().map(fmt).collect(),
            contradictions: c.contradictions.iter().chain(&c.forced).map(fmt).collect(),
        }
    }
}

/// How the group in one total degree was assembled from its layers.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtensionNote {
    pub degree: i64,
    pub layers: Vec<String>,
    pub group: String,
    pub rules: Vec<String>,
}

pub fn extension_notes(a: &Abutment, ring: CoefficientRing) -> Vec<ExtensionNote> {
    a.degrees
        .values()
        .filter(|d| d.layers.len() > 1)
        .map(|d| ExtensionNote {
            degree: d.degree,
            layers: d.layers.iter().map(|l| format!("E∞_{{{},{}}} = {}", l.s, l.t, render_group(&l.group, ring))).collect(),
            group: d.group.as_ref().map_or("?".into(), |g| render_group(g, ring)),
            rules: d.steps.iter().map(|s| format!("{} (filtration {}): {}", s.rule, s.filtration, s.note)).collect(),
        })
        .collect()
}

/// Agreement of the two Tor methods on a window.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleSection {
    pub max_s: usize,
    pub max_t: i64,
    pub cells_compared: usize,
    pub equal: bool,
    pub mismatches: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub scenario: String,
    pub citation: String,
    pub parameters: ScenarioParams,
    pub pipeline: Vec<String>,
    pub tables: Vec<Table>,
    pub checks: Vec<Check>,
    pub certificates: Vec<CertificateSummary>,
    pub extensions: Vec<ExtensionNote>,
    pub oracle: Option<OracleSection>,
    pub notes: Vec<String>,
    pub unresolved: Vec<String>,
    pub verdict: Verdict,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl Report {
    pub fn new(scenario: &str, citation: &str, parameters: ScenarioParams) -> Self {
        Report {
            scenario: scenario.into(),
            citation: citation.into(),
            parameters,
            pipeline: Vec::new(),
            tables: Vec::new(),
            checks: Vec::new(),
            certificates: Vec::new(),
            extensions: Vec::new(),
            oracle: None,
            notes: Vec::new(),
            unresolved: Vec::new(),
            verdict: Verdict::Fail,
            elapsed: Duration::ZERO,
        }
    }

    pub fn check(&mut self, name: &str, passed: bool, detail: impl Into<String>) {
        self.checks.push(Check { name: name.into(), passed, detail: detail.into() });
    }

    pub fn certificate(&mut self, name: &str, c: &CollapseCertificate) {
        let summary = CertificateSummary::new(name, c);
        for u in &summary.unresolved {
            self.unresolved.push(format!("{name}: {u}"));
        }
        for u in &summary.contradictions {
            self.unresolved.push(format!("{name}: nonzero {u}"));
        }
        self.certificates.push(summary);
    }

    /// Sets the verdict: PASS iff every row matches, every check passes,
    /// the oracle agrees, and nothing is unresolved.
    pub fn finalize(&mut self) {
        let ok = self.tables.iter().all(Table::passes)
            && self.checks.iter().all(|c| c.passed)
            && self.oracle.as_ref().is_none_or(|o| o.equal)
            && self.unresolved.is_empty();
        self.verdict = Verdict::from_bool(ok);
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    pub fn table(&self, name: &str) -> Option<&Table> {
        self.tables.iter().find(|t| t.name == name)
    }

    /// The computed entry of the first table in a degree.
    pub fn computed(&self, degree: i64) -> Option<&str> {
        self.tables.first()?.rows.iter().find(|r| r.degree == degree).map(|r| r.computed.as_str())
    }

    fn canonical_json(&self) -> String {
        serde_json::to_string(self).expect("reports serialize")
    }

    /// SHA-256 of the canonical JSON, which leaves out timing.
    pub fn stable_hash(&self) -> String {
        hex::encode(Sha256::digest(self.canonical_json().as_bytes()))
    }

    pub fn to_json(&self) -> String {
        let mut v = serde_json::to_value(self).expect("reports serialize");
        v.as_object_mut().expect("object").insert("hash".into(), self.stable_hash().into());
        let mut s = serde_json::to_string_pretty(&v).expect("values serialize");
        s.push('\n');
        s
    }

    /// `degree,computed,expected,verdict`; with several tables the degree
    /// column is prefixed by the table name.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("degree,computed,expected,verdict\n");
        let prefix = self.tables.len() > 1;
        for t in &self.tables {
            for r in &t.rows {
                let degree = if prefix { format!("{}:{}", t.name, r.degree) } else { r.degree.to_string() };
                let _ = writeln!(out, "{},{},{},{}", csv_field(&degree), csv_field(&r.computed), csv_field(&r.expected), r.verdict);
            }
        }
        out
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "scenario: {}", self.scenario);
        let _ = writeln!(out, "result:   {}", self.citation);
        for step in &self.pipeline {
            let _ = writeln!(out, "  - {step}");
        }
        for t in &self.tables {
            let _ = writeln!(out, "\n[{}] over {}: {}", t.name, t.coefficients, t.pattern);
            let w1 = t.rows.iter().map(|r| r.computed.chars().count()).max().unwrap_or(0).max(8);
            let w2 = t.rows.iter().map(|r| r.expected.chars().count()).max().unwrap_or(0).max(8);
            let _ = writeln!(out, "{:>6}  {:<w1$}  {:<w2$}  verdict", "degree", "computed", "expected");
            for r in &t.rows {
                let _ = writeln!(out, "{:>6}  {}  {}  {}", r.degree, pad(&r.computed, w1), pad(&r.expected, w2), r.verdict);
            }
        }
        if !self.certificates.is_empty() {
            let _ = writeln!(out, "\ncollapse certificates:");
            for c in &self.certificates {
                let reasons: Vec<String> = c.exclusions.iter().map(|(r, n)| format!("{r}: {n}")).collect();
                let _ = writeln!(
                    out,
                    "  {} through total degree {}: {} ({})",
                    c.name,
                    c.through,
                    if c.collapses { "collapses" } else { "NOT certified" },
                    reasons.join(", ")
                );
            }
        }
        if !self.extensions.is_empty() {
            let _ = writeln!(out, "\nextensions:");
            for e in &self.extensions {
                let _ = writeln!(out, "  degree {}: {} from {}", e.degree, e.group, e.layers.join(", "));
                for r in &e.rules {
                    let _ = writeln!(out, "    {r}");
                }
            }
        }
        if let Some(o) = &self.oracle {
            let _ = writeln!(
                out,
                "\noracle (bar = resolution, s ≤ {}, t ≤ {}): {} cells, {}",
                o.max_s,
                o.max_t,
                o.cells_compared,
                if o.equal { "equal" } else { "DIFFERENT" }
            );
            for m in &o.mismatches {
                let _ = writeln!(out, "  {m}");
            }
        }
        if !self.checks.is_empty() {
            let _ = writeln!(out, "\nchecks:");
            for c in &self.checks {
                let _ = writeln!(out, "  [{}] {}: {}", if c.passed { "ok" } else { "FAILED" }, c.name, c.detail);
            }
        }
        for n in &self.notes {
            let _ = writeln!(out, "note: {n}");
        }
        for u in &self.unresolved {
            let _ = writeln!(out, "unresolved: {u}");
        }
        let _ = writeln!(out, "\nverdict: {}  ({:.2} s)", self.verdict, self.elapsed.as_secs_f64());
        out
    }
}

fn pad(s: &str, w: usize) -> String {
    let n = s.chars().count();
    format!("{s}{}", " ".repeat(w.saturating_sub(n)))
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}
