use thh_core::repro::{run_scenario, Method, ScenarioParams, SCENARIOS};

fn run(name: &str, params: ScenarioParams) -> thh_core::repro::Report {
    let report = run_scenario(name, &params).unwrap();
    println!("{}", report.to_text());
    report
}

#[test]
fn every_scenario_passes_with_defaults() {
    for s in SCENARIOS {
        let r = run(s.name, ScenarioParams::default());
        assert!(r.passed(), "{} failed", s.name);
    }
}

#[test]
fn dbg_one() {
    if let Ok(name) = std::env::var("THH_SCENARIO") {
        run(&name, ScenarioParams { method: Method::Resolution, ..Default::default() });
    }
}
