//! One PASS/FAIL line per acceptance criterion, with timings. Budgets are
//! for optimized builds and are reported, not enforced, since the default
//! test profile is unoptimized. The summary lines bypass the test
//! harness's output capture so they show up in a plain `cargo test`.

use std::io::Write;
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thh_core::homological::{bockstein_tower, exponents_from_differentials, random_small_complex};
use thh_core::repro::{run_scenario, Method, Report, ScenarioParams};

struct Outcome {
    failures: Vec<String>,
}

impl Outcome {
    fn new() -> Self {
        Outcome { failures: Vec::new() }
    }

    fn require(&mut self, ok: bool, what: impl Into<String>) {
        if !ok {
            self.failures.push(what.into());
        }
    }

    fn scenario(&mut self, name: &str, params: ScenarioParams) -> Option<Report> {
        match run_scenario(name, &params) {
            Ok(r) => {
                if !r.passed() {
                    println!("{}", r.to_text());
                }
                self.require(r.passed(), format!("{name} {:?} did not pass", params.prime));
                Some(r)
            }
            Err(e) => {
                self.failures.push(format!("{name}: {e}"));
                None
            }
        }
    }
}

fn params(p: u64, t: i64) -> ScenarioParams {
    ScenarioParams { prime: Some(p), max_degree: Some(t), ..Default::default() }
}

fn check_passed(r: &Report, name: &str) -> bool {
    r.checks.iter().any(|c| c.name.contains(name) && c.passed)
}

fn say(line: String) {
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "{line}");
    let _ = out.flush();
}

fn criterion(n: usize, title: &str, budget: Duration, body: impl FnOnce(&mut Outcome)) -> bool {
    let start = Instant::now();
    let mut o = Outcome::new();
    body(&mut o);
    let elapsed = start.elapsed();
    let ok = o.failures.is_empty();
    say(format!(
        "criterion {n:>2} {}  {title}  ({:.2} s, budget {} s)",
        if ok { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64(),
        budget.as_secs()
    ));
    for f in &o.failures {
        say(format!("    {f}"));
    }
    ok
}

#[test]
fn acceptance() {
    let s = Duration::from_secs;
    let results = [
        criterion(1, "THH of ku_(p) relative to ℓ, p = 3, 5, T = 60", s(60), |o| {
            for p in [3, 5] {
                if let Some(r) = o.scenario("thh-ku-over-l", params(p, 60)) {
                    o.require(r.certificates.iter().all(|c| c.collapses), "no collapse certificate");
                    o.require(check_passed(&r, "single contributor"), "single contributor check missing");
                }
            }
        }),
        criterion(2, "Tor over Z_(p)[u]/u^(p-1) and F_p[u]/u^(p-1), p = 3, 5, T = 60", s(60), |o| {
            for p in [3, 5] {
                o.scenario("thh-ku-over-l-coeff-z", params(p, 60));
                o.scenario("thh-ku-over-l-coeff-fp", params(p, 60));
            }
        }),
        criterion(3, "THH of ku relative to ko, T = 31", s(60), |o| {
            if let Some(r) = o.scenario("thh-ku-over-ko", params(2, 31)) {
                let row = |d: usize| r.tables[0].rows.get(d).map(|row| row.computed.clone()).unwrap_or_default();
                o.require(row(9) == "Z ⊕ Z/2", format!("degree 9 is {}", row(9)));
                o.require(row(15) == "Z ⊕ (Z/2)^2", format!("degree 15 is {}", row(15)));
                o.require(r.extensions.iter().all(|e| !e.rules.is_empty()), "an extension without a rule");
                o.require(r.unresolved.is_empty(), "unresolved items");
            }
        }),
        criterion(4, "ku/ko coefficients (p = 2) and ku_(p) ∧_ℓ HF_p (p = 3, 5), T = 40", s(30), |o| {
            o.scenario("thh-ku-over-ko-coeffs", params(2, 40));
            for p in [3, 5] {
                o.scenario("ku-mod-p-v1", params(p, 40));
            }
        }),
        criterion(5, "second-order THH of Z_(p), p = 3, 5, T = 150", s(30), |o| {
            for p in [3, 5] {
                o.scenario("thh2-zp-consistency", params(p, 150));
            }
        }),
        criterion(6, "regular quotients, 20 random instances plus named ones, T = 30", s(120), |o| {
            let p = ScenarioParams { max_degree: Some(30), instances: Some(20), ..Default::default() };
            if let Some(r) = o.scenario("regular-quotient-general", p) {
                for name in ["tmf1(3)_(2)/a3", "ku/u"] {
                    o.require(r.table(name).is_some(), format!("{name} missing"));
                }
                let random = r.tables.iter().filter(|t| t.name.starts_with("random")).count();
                o.require(random == 20, format!("{random} random instances"));
                o.require(check_passed(&r, "parity certificate"), "parity certificate");
            }
        }),
        criterion(7, "bar = resolution for the three periodic families, s ≤ 10, t ≤ 30", s(120), |o| {
            for (name, p) in [("thh-ku-over-l-coeff-z", 3), ("thh-ku-over-ko", 2), ("regular-quotient-general", 2)] {
                let params = ScenarioParams { method: Method::Both, instances: Some(3), ..params(p, 30) };
                if let Some(r) = o.scenario(name, params) {
                    match &r.oracle {
                        Some(or) => {
                            o.require(or.equal, format!("{name}: {:?}", or.mismatches));
                            o.require(or.max_s >= 10 && or.max_t >= 30, format!("{name}: window {} × {}", or.max_s, or.max_t));
                        }
                        None => o.require(false, format!("{name}: no oracle section")),
                    }
                }
            }
        }),
        criterion(8, "Shukla cycles generate SH_2m = Z/p, m ≤ 5, p = 2, 3, 5", s(10), |o| {
            for p in [2, 3, 5] {
                o.scenario("shukla", params(p, 10));
            }
        }),
        criterion(9, "iterated Tor from Λ(ε), golden tables through degree 24", s(180), |o| {
            for p in [2, 3] {
                if let Some(r) = o.scenario("higher-thh-iterate", params(p, 24)) {
                    o.require(r.tables.len() >= 3, "fewer than three stages");
                    for name in ["commutative", "associative", "unital", "golden"] {
                        o.require(check_passed(&r, name), format!("p = {p}: {name} check"));
                    }
                }
            }
        }),
        criterion(10, "Bockstein accounting on 50 random complexes, two ways", s(30), |o| {
            let mut rng = ChaCha8Rng::seed_from_u64(2024);
            for k in 0..50 {
                let p = [2u64, 3, 5][k % 3];
                let c = random_small_complex(&mut rng, p);
                let tower = bockstein_tower(&c, p).unwrap();
                o.require(tower.accounting_holds(), format!("complex {k}: accounting"));
                for s in 0..c.max_s() {
                    let direct = tower.cells.get(&(s, 0)).map(|c| c.exponents.clone()).unwrap_or_default();
                    o.require(direct == exponents_from_differentials(&c, p, s, 0), format!("complex {k}, s = {s}: exponents"));
                }
            }
        }),
    ];
    let passed = results.iter().filter(|&&r| r).count();
    say(format!("{passed}/{} criteria pass", results.len()));
    assert_eq!(passed, results.len());
}
