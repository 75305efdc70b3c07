//! `shrinkset` command-line driver.

mod config;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use shrinkset::io::{svg_document, write_trace_csv, GeometryJson};
use shrinkset::validate::{self, ValidateOptions};
use shrinkset::{compute_cost, default_dt, find_m0, simulate, solve_tilde, EvolutionTrace, RoundedSet};

use config::{geometry_arg, SceneConfig};

#[derive(Parser)]
#[command(name = "shrinkset", version, about = "Optimal shrinking of convex sets under a perimeter budget")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate the optimal strategy and write the area trace as CSV.
    Simulate(Common),
    /// Bisect for the critical budget M0 and write a JSON report.
    Threshold(Common),
    /// Solve the constrained isoperimetric problem for one area.
    OneStep(Common),
    /// Run the invariant and raster agreement suites.
    Validate(ValidateArgs),
}

#[derive(Args, Clone, Default)]
struct Common {
    /// Scene configuration (JSON).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Geometry as inline JSON or a path; overrides the config.
    #[arg(long)]
    geometry: Option<String>,
    #[arg(long = "M")]
    m: Option<f64>,
    #[arg(long)]
    dt: Option<f64>,
    #[arg(long)]
    horizon: Option<f64>,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    a: Option<f64>,
    #[arg(long)]
    c1: Option<f64>,
    #[arg(long)]
    c2: Option<f64>,
    /// Time between SVG snapshots.
    #[arg(long)]
    svg_every: Option<f64>,
    /// Output file; stdout when absent.
    #[arg(short, long)]
    output: Option<PathBuf>,
    #[arg(long)]
    svg: Option<PathBuf>,
    /// Worker threads for internal parallelism.
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Args, Clone, Default)]
struct ValidateArgs {
    #[arg(long)]
    config: Option<PathBuf>,
    /// Comma-separated suites; an empty list runs nothing.
    #[arg(long, value_delimiter = ',')]
    suites: Option<Vec<String>>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    raster_sets: Option<usize>,
    #[arg(long)]
    raster_resolution: Option<f64>,
    #[arg(long)]
    threads: Option<usize>,
    #[arg(long, hide = true, default_value_t = 0.0)]
    perturb: f64,
}

enum Failure {
    Usage(anyhow::Error),
    Numeric(anyhow::Error),
    Validation,
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Numeric(_) => 2,
            Failure::Validation => 3,
        }
    }
}

type Outcome = Result<(), Failure>;

fn usage(e: anyhow::Error) -> Failure {
    Failure::Usage(e)
}

fn numeric(e: impl Into<anyhow::Error>) -> Failure {
    Failure::Numeric(e.into())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let result = match cli.command {
        Command::Simulate(c) => scene(&c).and_then(|s| cmd_simulate(&s, &c)),
        Command::Threshold(c) => scene(&c).and_then(|s| cmd_threshold(&s, &c)),
        Command::OneStep(c) => scene(&c).and_then(|s| cmd_one_step(&s, &c)),
        Command::Validate(v) => cmd_validate(&v),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            match &f {
                Failure::Usage(e) => eprintln!("error: {e:#}"),
                Failure::Numeric(e) => eprintln!("numeric failure: {e:#}"),
                Failure::Validation => eprintln!("validation failed"),
            }
            ExitCode::from(f.code())
        }
    }
}

fn set_threads(n: Option<usize>) -> Outcome {
    if let Some(n) = n {
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().context("configuring threads").map_err(usage)?;
    }
    Ok(())
}

fn scene(c: &Common) -> Result<SceneConfig, Failure> {
    set_threads(c.threads)?;
    let mut s = match &c.config {
        Some(p) => SceneConfig::load(p).map_err(usage)?,
        None => SceneConfig::default(),
    };
    if let Some(g) = &c.geometry {
        s.geometry = Some(geometry_arg(g).map_err(usage)?);
    }
    s.m = c.m.or(s.m);
    s.dt = c.dt.or(s.dt);
    s.horizon = c.horizon.or(s.horizon);
    s.tol = c.tol.or(s.tol);
    s.a = c.a.or(s.a);
    s.c1 = c.c1.or(s.c1);
    s.c2 = c.c2.or(s.c2);
    s.svg_every = c.svg_every.or(s.svg_every);
    s.check().map_err(usage)?;
    Ok(s)
}

fn emit(path: Option<&Path>, body: &[u8]) -> Outcome {
    match path {
        Some(p) => std::fs::write(p, body).with_context(|| format!("writing {}", p.display())).map_err(usage),
        None => std::io::stdout().write_all(body).context("writing stdout").map_err(usage),
    }
}

fn dt_for(s: &SceneConfig, domain: &RoundedSet) -> f64 {
    s.dt.unwrap_or_else(|| default_dt(domain))
}

fn cmd_simulate(s: &SceneConfig, c: &Common) -> Outcome {
    let domain = s.domain().map_err(usage)?;
    let m = SceneConfig::require(s.m, "M").map_err(usage)?;
    let horizon = SceneConfig::require(s.horizon, "horizon").map_err(usage)?;
    let trace = simulate(&domain, m, horizon, dt_for(s, &domain)).map_err(numeric)?;
    let cost = compute_cost(&trace, s.c1.unwrap_or(1.0), s.c2.unwrap_or(0.0), trace.end_time()).map_err(numeric)?;
    let mut csv = Vec::new();
    write_trace_csv(&trace, Some(cost), &mut csv).context("formatting CSV").map_err(usage)?;
    emit(c.output.as_deref().or(s.output.csv.as_deref()), &csv)?;
    if let Some(every) = s.svg_every {
        let path = c.svg.as_deref().or(s.output.svg.as_deref()).context("--svg-every needs an SVG output path").map_err(usage)?;
        let doc = svg_document(&domain, &snapshots(&trace, every).map_err(numeric)?);
        emit(Some(path), doc.as_bytes())?;
    }
    Ok(())
}

fn snapshots(trace: &EvolutionTrace, every: f64) -> shrinkset::Result<Vec<(f64, RoundedSet)>> {
    let end = trace.t_star().unwrap_or(trace.end_time());
    let mut frames = Vec::new();
    let mut k = 0u32;
    loop {
        let t = f64::from(k) * every;
        if t >= end && k > 0 {
            break;
        }
        frames.push((t, trace.set_at(t)?));
        k += 1;
    }
    Ok(frames)
}

fn cmd_threshold(s: &SceneConfig, c: &Common) -> Outcome {
    let domain = s.domain().map_err(usage)?;
    let tol = s.tol.unwrap_or(1e-3);
    let horizon = s.horizon.unwrap_or(50.0);
    let report = find_m0(&domain, tol, horizon, dt_for(s, &domain)).map_err(numeric)?;
    let mut json = serde_json::to_vec_pretty(&report).context("serializing report").map_err(usage)?;
    json.push(b'\n');
    emit(c.output.as_deref().or(s.output.json.as_deref()), &json)
}

#[derive(Serialize)]
struct OneStepReport {
    geometry: GeometryJson,
    regime: String,
    area: f64,
    perimeter: f64,
    /// `null` when the minimizer keeps sharp corners.
    kappa: Option<f64>,
    rho: f64,
}

fn cmd_one_step(s: &SceneConfig, c: &Common) -> Outcome {
    let domain = s.domain().map_err(usage)?;
    let a = SceneConfig::require(s.a, "a").map_err(usage)?;
    let sol = solve_tilde(&domain, a).map_err(numeric)?;
    let report = OneStepReport {
        geometry: GeometryJson::from(&sol.set),
        regime: sol.regime.to_string(),
        area: sol.area,
        perimeter: sol.perimeter,
        kappa: sol.max_curvature.is_finite().then_some(sol.max_curvature),
        rho: sol.rho,
    };
    let mut json = serde_json::to_vec_pretty(&report).context("serializing report").map_err(usage)?;
    json.push(b'\n');
    emit(c.output.as_deref().or(s.output.json.as_deref()), &json)
}

fn cmd_validate(v: &ValidateArgs) -> Outcome {
    set_threads(v.threads)?;
    let file = match &v.config {
        Some(p) => SceneConfig::load(p).map_err(usage)?,
        None => SceneConfig::default(),
    };
    let mut opts = ValidateOptions::default();
    if let Some(s) = v.suites.clone().or(file.suites) {
        opts.suites = s.into_iter().filter(|s| !s.is_empty()).collect();
    }
    opts.seed = v.seed.or(file.seed).unwrap_or(opts.seed);
    opts.raster_sets = v.raster_sets.or(file.raster_sets).unwrap_or(opts.raster_sets);
    opts.raster_resolution = v.raster_resolution.or(file.raster_resolution).unwrap_or(opts.raster_resolution);
    opts.perturb = v.perturb;
    let results = validate::run(&opts);
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "{:<32} {:>6} {:>8} {:>12}", "check", "status", "cases", "worst");
    for r in &results {
        let status = if r.passed { "PASS" } else { "FAIL" };
        let _ = writeln!(out, "{:<32} {:>6} {:>8} {:>12.3e}", r.name, status, r.cases, r.worst);
    }
    let failed = results.iter().filter(|r| !r.passed).count();
    let _ = writeln!(out, "{} checks, {failed} failed", results.len());
    if failed > 0 {
        Err(Failure::Validation)
    } else {
        Ok(())
    }
}
