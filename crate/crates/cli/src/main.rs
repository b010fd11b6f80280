use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;
use thh_core::repro::{run_pipeline, run_scenario, scenario_info, Method, PipelineSpec, Report, ScenarioParams, SCENARIOS};

#[derive(Parser, Debug)]
#[command(name = "thh", version, about = "Reproduce relative THH computations as exact Tor spectral sequences")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run a named scenario and compare it with its closed form.
    Run {
        /// Scenario name; may instead come from the config file.
        scenario: Option<String>,
        #[command(flatten)]
        opts: RunOpts,
    },
    /// List the scenarios with the results they reproduce.
    List,
    /// Run an ad-hoc pipeline described in a JSON file.
    Compute {
        pipeline: PathBuf,
        #[command(flatten)]
        output: OutputOpts,
    },
}

#[derive(Args, Debug, Default)]
struct RunOpts {
    #[arg(long)]
    prime: Option<u64>,
    /// Total-degree cutoff T.
    #[arg(long)]
    max_degree: Option<i64>,
    /// Homological cutoff S (raised automatically when unset).
    #[arg(long)]
    homological_degree: Option<usize>,
    #[arg(long, value_enum)]
    method: Option<MethodArg>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    instances: Option<usize>,
    /// JSON run configuration; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    #[command(flatten)]
    output: OutputOpts,
}

#[derive(Args, Debug, Default)]
struct OutputOpts {
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads (default: all cores).
    #[arg(long)]
    jobs: Option<usize>,
    /// Progress on stderr; repeat for more.
    #[arg(short, long, action = clap::ArgAction::Count)]
    verbose: u8,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
enum MethodArg {
    Bar,
    Resolution,
    Both,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Bar => Method::Bar,
            MethodArg::Resolution => Method::Resolution,
            MethodArg::Both => Method::Both,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    #[default]
    Table,
    Csv,
    Json,
}

/// The config file schema; every field is optional.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RunConfig {
    scenario: Option<String>,
    prime: Option<u64>,
    max_degree: Option<i64>,
    homological_degree: Option<usize>,
    method: Option<MethodArg>,
    seed: Option<u64>,
    instances: Option<usize>,
    format: Option<Format>,
    out: Option<PathBuf>,
    verbosity: Option<u8>,
    jobs: Option<usize>,
}

fn load_config(path: &Path) -> anyhow::Result<RunConfig> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let config: RunConfig = serde_json::from_str(&text).map_err(|e| {
        let line = text.lines().nth(e.line().saturating_sub(1)).unwrap_or("");
        anyhow::anyhow!("{}: {e}\n  {}: {line}", path.display(), e.line())
    })?;
    if config.max_degree.is_some_and(|t| t <= 0) {
        bail!("{}: max_degree must be positive", path.display());
    }
    if config.homological_degree == Some(0) {
        bail!("{}: homological_degree must be positive", path.display());
    }
    if let Some(p) = config.prime {
        if !thh_core::exact::is_prime(p) {
            bail!("{}: {p} is not prime", path.display());
        }
    }
    if config.jobs == Some(0) {
        bail!("{}: jobs must be positive", path.display());
    }
    Ok(config)
}

/// Usage and configuration problems exit with 2, failed scenarios with 1.
enum Failure {
    Usage(anyhow::Error),
    Failed,
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Usage(e)
    }
}

fn set_jobs(jobs: Option<usize>) -> anyhow::Result<()> {
    if let Some(n) = jobs {
        if n == 0 {
            bail!("--jobs must be positive");
        }
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().context("configuring the thread pool")?;
    }
    Ok(())
}

fn emit(report: &Report, format: Format, out: Option<&Path>) -> anyhow::Result<()> {
    let text = match format {
        Format::Table => report.to_text(),
        Format::Csv => report.to_csv(),
        Format::Json => report.to_json(),
    };
    match out {
        Some(path) => std::fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(scenario: Option<String>, opts: RunOpts) -> Result<(), Failure> {
    let config = match &opts.config {
        Some(path) => load_config(path)?,
        None => RunConfig::default(),
    };
    let Some(name) = scenario.or(config.scenario) else {
        return Err(anyhow::anyhow!("no scenario given (see `thh list`)").into());
    };
    if scenario_info(&name).is_none() {
        return Err(anyhow::anyhow!("unknown scenario {name:?} (see `thh list`)").into());
    }
    let params = ScenarioParams {
        prime: opts.prime.or(config.prime),
        max_degree: opts.max_degree.or(config.max_degree),
        homological_degree: opts.homological_degree.or(config.homological_degree),
        method: opts.method.or(config.method).map(Method::from).unwrap_or_default(),
        seed: opts.seed.or(config.seed),
        instances: opts.instances.or(config.instances),
    };
    let verbosity = opts.output.verbose.max(config.verbosity.unwrap_or(0));
    set_jobs(opts.output.jobs.or(config.jobs))?;
    if verbosity > 0 {
        eprintln!("running {name} with {}", serde_json::to_string(&params).unwrap_or_default());
    }
    let report = run_scenario(&name, &params).map_err(|e| match e {
        thh_core::repro::ReproError::InvalidParameter(_) | thh_core::repro::ReproError::ScenarioUnknown(_) => {
            Failure::Usage(e.into())
        }
        other => Failure::Usage(anyhow::Error::from(other).context("computation failed")),
    })?;
    if verbosity > 0 {
        eprintln!("{}: {} in {:.2} s", name, report.verdict, report.elapsed.as_secs_f64());
    }
    let format = opts.output.format.or(config.format).unwrap_or_default();
    emit(&report, format, opts.output.out.as_deref().or(config.out.as_deref()))?;
    if report.passed() {
        Ok(())
    } else {
        Err(Failure::Failed)
    }
}

fn compute(pipeline: &Path, output: OutputOpts) -> Result<(), Failure> {
    let text = std::fs::read_to_string(pipeline).with_context(|| format!("reading {}", pipeline.display()))?;
    let spec = PipelineSpec::from_json(&text).map_err(|e| {
        let line = text.lines().nth(e.line().saturating_sub(1)).unwrap_or("");
        anyhow::anyhow!("{}: {e}\n  {}: {line}", pipeline.display(), e.line())
    })?;
    set_jobs(output.jobs)?;
    if output.verbose > 0 {
        eprintln!("computing {}", pipeline.display());
    }
    let report = run_pipeline(&spec).map_err(|e| Failure::Usage(e.into()))?;
    emit(&report, output.format.unwrap_or_default(), output.out.as_deref())?;
    if report.passed() {
        Ok(())
    } else {
        Err(Failure::Failed)
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::List => {
            for s in SCENARIOS {
                println!("{:<26} {}", s.name, s.citation);
            }
            Ok(())
        }
        Command::Run { scenario, opts } => run(scenario, opts),
        Command::Compute { pipeline, output } => compute(&pipeline, output),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Failed) => ExitCode::from(1),
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e:#}");
            eprintln!("usage: thh run <scenario> [--prime P] [--max-degree T] [--homological-degree S] [--method bar|resolution|both] [--format table|csv|json] [--out PATH] [--jobs N] [--config FILE]");
            eprintln!("       thh list");
            eprintln!("       thh compute <pipeline.json> [--format ...] [--out PATH] [--jobs N]");
            ExitCode::from(2)
        }
    }
}
