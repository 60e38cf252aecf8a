//! `mixbvp` command-line front end.
//!
//! Exit status: 0 on success, 2 when the data are incompatible with a
//! resonant mode, 1 for configuration or argument errors.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use mixbvp::config::ProblemConfig;
use mixbvp::defaults;
use mixbvp::denominator::{denominator_report, diophantine_scan, expected_denominator, separation_bound, DiophantineScanConfig};
use mixbvp::example::reproduce_example;
use mixbvp::model::{classify_ratio, validate_problem, Phase, RatioClass};
use mixbvp::report::{self, fmt_float, SolveSummary};
use mixbvp::solver::{build_solution, sample_grid, smoothness_check, verify};
use mixbvp::{Error, ProblemSpec};

#[derive(Debug, Parser)]
#[command(name = "mixbvp", version, about = "Spectral solver for D_x^{2n}u + sgn(y) D_y^{2n}u = 0 on a rectangle")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Solve, verify and write solution.csv, residuals.json, denominator.csv.
    Solve {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Truncation index.
        #[arg(long = "K")]
        truncation: Option<usize>,
        /// Output grid as NXxNY.
        #[arg(long, value_parser = parse_grid)]
        grid: Option<(usize, usize)>,
    },
    /// Classify the side ratio and bound the small denominator.
    Classify {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value_t = defaults::EPSILON)]
        epsilon: f64,
        #[arg(long = "k-max", default_value_t = defaults::K_MAX)]
        k_max: usize,
        /// Denominator phase (0, pi/4, pi/2, 3pi/4); defaults to the schema's.
        #[arg(long, value_parser = parse_phase)]
        phase: Option<Phase>,
        /// Directory for scan.csv (irrational ratios).
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Per-k determinant table for k = 1..k_max.
    Scan {
        #[arg(long)]
        config: PathBuf,
        #[arg(long = "k-max")]
        k_max: usize,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Rerun the fourth-order example on (0, 3) × (−1, 1).
    ReproduceExample {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
        task: u8,
        #[arg(long)]
        out: PathBuf,
    },
}

fn parse_grid(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s
        .split_once(['x', 'X'])
        .ok_or_else(|| format!("grid must look like 101x101 (got {s})"))?;
    let nx = a.trim().parse().map_err(|_| format!("bad grid width {a:?}"))?;
    let ny = b.trim().parse().map_err(|_| format!("bad grid height {b:?}"))?;
    Ok((nx, ny))
}

fn parse_phase(s: &str) -> Result<Phase, String> {
    Phase::parse(s).ok_or_else(|| format!("phase must be one of 0, pi/4, pi/2, 3pi/4 (got {s})"))
}

/// Twelve decimals, trailing zeros dropped.
fn short(x: f64) -> String {
    let s = format!("{x:.12}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" { "0".into() } else { s.into() }
}

enum Failure {
    Unsolvable(String),
    Config(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::NonorthogonalData { .. } => Failure::Unsolvable(e.to_string()),
            other => Failure::Config(other.to_string()),
        }
    }
}

type Outcome = Result<(), Failure>;

fn load(path: &Path) -> Result<ProblemSpec, Failure> {
    let spec = ProblemConfig::load(path)?.to_spec()?;
    for w in validate_problem(&spec).into_result()? {
        eprintln!("warning: {w}");
    }
    Ok(spec)
}

fn write(dir: &Path, name: &str, contents: &str) -> Outcome {
    fs::create_dir_all(dir).map_err(|e| Failure::Config(format!("cannot create {}: {e}", dir.display())))?;
    let path = dir.join(name);
    fs::write(&path, contents).map_err(|e| Failure::Config(format!("cannot write {}: {e}", path.display())))
}

fn run_solve(config: &Path, out: &Path, truncation: Option<usize>, grid: Option<(usize, usize)>) -> Outcome {
    let mut spec = load(config)?;
    if let Some(k) = truncation {
        spec.truncation = k;
    }
    let (nx, ny) = grid.unwrap_or(defaults::GRID);
    let sol = build_solution(&spec)?;
    let residuals = verify(&sol, nx, ny)?;
    let smoothness = smoothness_check(&spec)?;
    let denominators = denominator_report(&spec, spec.truncation)?;
    write(out, "solution.csv", &report::grid_csv(&sample_grid(&sol, nx, ny)))?;
    write(out, "residuals.json", &report::to_json(&SolveSummary::new(&sol, &residuals, Some(&smoothness)))?)?;
    write(out, "denominator.csv", &report::denominator_csv(&denominators))?;
    for w in sol.warnings() {
        eprintln!("warning: {w}");
    }
    println!("solved K = {} modes, resonant modes {:?}", sol.truncation(), sol.resonant());
    println!("boundary_residual_sup = {}", fmt_float(residuals.boundary_residual_sup));
    println!("gluing_residual_sup = {}", fmt_float(residuals.gluing_residual_sup));
    println!("pde_residual_sup = {}", fmt_float(residuals.pde_residual_sup));
    println!("energy_sup = {}", fmt_float(residuals.energy_sup));
    println!("smoothness: {}", smoothness.verdict.label());
    Ok(())
}

fn run_classify(config: &Path, epsilon: f64, k_max: usize, phase: Option<Phase>, out: &Path) -> Outcome {
    let spec = load(config)?;
    let form = match phase {
        Some(p) => mixbvp::DenominatorForm { phase: Some(p) },
        None => expected_denominator(spec.order(), &spec.schema),
    };
    let phase = form
        .phase
        .ok_or_else(|| Failure::Config("denominator form not tabulated for this schema; pass --phase".into()))?;
    let class = classify_ratio(&spec.ratio, phase)?;
    match class {
        RatioClass::AlgebraicIrrational { .. } | RatioClass::FloatUnknown => {
            let scan = diophantine_scan(&spec.ratio, &form, &DiophantineScanConfig { epsilon, k_max })?;
            write(out, "scan.csv", &report::scan_csv(&scan))?;
            println!(
                "{}, N_hat = {}, worst_k = {}",
                class.label(),
                fmt_float(scan.n_hat),
                scan.worst_k
            );
        }
        _ => {
            let bound = separation_bound(&class, &form)?;
            println!("{}, δ = {}", class.label(), short(bound.delta));
            println!("phase = {phase}, witness residue = {}", bound.witness_k2);
            if let Some(w) = bound.warning {
                eprintln!("warning: {w}");
            }
        }
    }
    Ok(())
}

fn run_scan(config: &Path, k_max: usize, out: &Path) -> Outcome {
    let spec = load(config)?;
    let report = denominator_report(&spec, k_max)?;
    write(out, "denominator.csv", &report::denominator_csv(&report))?;
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
    println!("resonant modes: {:?}", report.resonant);
    if let Some(m) = report.m_hat {
        println!("M_hat = {}", fmt_float(m));
    }
    if let Some(d) = report.min_abs_delta4 {
        println!("min |delta4| = {}", fmt_float(d));
    }
    Ok(())
}

fn run_reproduce(task: u8, out: &Path) -> Outcome {
    let r = reproduce_example(task)?;
    write(out, "growth.csv", &report::growth_csv(&r.growth))?;
    write(out, "denominator.csv", &report::denominator_csv(&r.denominators))?;
    println!("task {task}: l = 3, a = 1, order 4");
    for g in &r.growth {
        println!("k = {:>2}  ln max|coef| = {}", g.k, fmt_float(g.log_max_coefficient));
    }
    for c in &r.checks {
        println!("{} {}: {}", if c.pass { "PASS" } else { "FAIL" }, c.name, c.detail);
    }
    println!("verdict: {}", r.verdict);
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let outcome = match &cli.command {
        Command::Solve { config, out, truncation, grid } => run_solve(config, out, *truncation, *grid),
        Command::Classify { config, epsilon, k_max, phase, out } => run_classify(config, *epsilon, *k_max, *phase, out),
        Command::Scan { config, k_max, out } => run_scan(config, *k_max, out),
        Command::ReproduceExample { task, out } => run_reproduce(*task, out),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Unsolvable(msg)) => {
            eprintln!("unsolvable: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Config(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
