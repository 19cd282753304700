use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use annulus::format::{sig9, sig9_opt};
use annulus::mesh_dump::write_mesh;
use annulus::report::{lower_kind_name, sweep_csv, sweep_json};
use annulus::tables::run_tables;
use annulus_core::analysis::{
    analyze_point, fd_derivative, fd_derivative_extrapolated, uniform_grid, InvariantViolation, SweepReport,
};
use annulus_core::fem::{Resolution, DEFAULT_TOL};
use annulus_core::geometry::{generate_mesh, AnnulusSpec, DEFAULT_N_R, DEFAULT_N_THETA};
use annulus_core::special_functions::{eigenvalue_bounds, mu_first, LowerBound};
use annulus_core::{Error, DISC_EIGENVALUE};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

/// First Dirichlet eigenvalue of the unit disc with an off-centre circular hole.
#[derive(Parser)]
#[command(name = "annulus", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args)]
struct Output {
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Write to this file instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct Discretization {
    /// Radial layers of the mesh.
    #[arg(long = "n-r", default_value_t = DEFAULT_N_R)]
    n_r: usize,
    /// Nodes per ring (a multiple of 4).
    #[arg(long = "n-theta", default_value_t = DEFAULT_N_THETA)]
    n_theta: usize,
    /// Relative tolerance of the eigen-iteration.
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,
}

impl Discretization {
    fn resolution(&self) -> Resolution {
        Resolution::new(self.n_r, self.n_theta)
    }
}

#[derive(Subcommand)]
enum Command {
    /// First eigenvalue of the concentric annulus b < |x| < 1.
    Mu {
        /// Inner radius of the concentric annulus
        #[arg(long, allow_hyphen_values = true)]
        b: f64,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[command(flatten)]
        output: Output,
    },
    /// Eigenvalue, shape derivative and bounds at one hole offset.
    Solve {
        /// Hole radius
        #[arg(long, allow_hyphen_values = true)]
        a: f64,
        /// Offset of the hole centre along the x-axis
        #[arg(long, allow_hyphen_values = true)]
        h: f64,
        #[command(flatten)]
        disc: Discretization,
        #[command(flatten)]
        output: Output,
        /// Write the mesh in the plain-text debug format.
        #[arg(long)]
        mesh_dump: Option<PathBuf>,
    },
    /// Eigenvalue and shape derivative on a uniform grid of offsets.
    Sweep {
        /// Hole radius
        #[arg(long, allow_hyphen_values = true)]
        a: f64,
        /// First offset of the grid
        #[arg(long, allow_hyphen_values = true)]
        h_min: f64,
        /// Last offset of the grid
        #[arg(long, allow_hyphen_values = true)]
        h_max: f64,
        /// Number of grid points, endpoints included.
        #[arg(long, default_value_t = 7)]
        steps: usize,
        #[command(flatten)]
        disc: Discretization,
        #[command(flatten)]
        output: Output,
    },
    /// Two-sided bounds from concentric annuli.
    Bounds {
        /// Hole radius
        #[arg(long, allow_hyphen_values = true)]
        a: f64,
        /// Offset of the hole centre along the x-axis
        #[arg(long, allow_hyphen_values = true)]
        h: f64,
        /// Also solve and check that the eigenvalue lies within the bounds.
        #[arg(long)]
        check: bool,
        #[command(flatten)]
        disc: Discretization,
        #[command(flatten)]
        output: Output,
    },
    /// Shape derivative beside a central finite difference in h.
    Derivative {
        /// Hole radius
        #[arg(long, allow_hyphen_values = true)]
        a: f64,
        /// Offset of the hole centre along the x-axis
        #[arg(long, allow_hyphen_values = true)]
        h: f64,
        #[arg(long, default_value_t = 0.01)]
        delta: f64,
        /// Also difference on the refined mesh and extrapolate.
        #[arg(long)]
        extrapolate: bool,
        #[command(flatten)]
        disc: Discretization,
        #[command(flatten)]
        output: Output,
        #[arg(long)]
        mesh_dump: Option<PathBuf>,
    },
    /// Recompute the nine reference configurations beside the reference values.
    Tables {
        #[command(flatten)]
        disc: Discretization,
        #[command(flatten)]
        output: Output,
    },
}

enum Failure {
    Input(String),
    Invariant(String),
    Numerical(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_invalid_input() {
            Failure::Input(e.to_string())
        } else {
            Failure::Numerical(e.to_string())
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Input(format!("cannot write output: {e}"))
    }
}

type CmdResult = Result<(), Failure>;

fn emit(output: &Output, text: &str) -> io::Result<()> {
    match &output.out {
        Some(path) => std::fs::write(path, text),
        None => {
            let mut stdout = io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()
        }
    }
}

fn dump_mesh(path: &Path, a: f64, h: f64, disc: &Discretization) -> CmdResult {
    let mesh = generate_mesh(&AnnulusSpec::new(a, h)?, disc.n_r, disc.n_theta)?;
    write_mesh(&mesh, BufWriter::new(File::create(path)?))?;
    Ok(())
}

fn describe(v: &InvariantViolation) -> String {
    match *v {
        InvariantViolation::NotDecreasing {
            h_prev,
            h,
            lambda_prev,
            lambda,
        } => {
            format!("lambda not decreasing: lambda({h_prev}) = {lambda_prev}, lambda({h}) = {lambda}")
        }
        InvariantViolation::OutsideBounds {
            h,
            lambda,
            lower,
            upper,
        } => {
            format!("lambda({h}) = {lambda} outside ({lower}, {upper})")
        }
        InvariantViolation::BelowDisc { h, lambda } => {
            format!("lambda({h}) = {lambda} not above the disc value {DISC_EIGENVALUE}")
        }
        InvariantViolation::Failed { h } => format!("no result at h = {h}"),
    }
}

fn check_report(report: &SweepReport) -> CmdResult {
    for p in &report.points {
        if let Err(e) = &p.outcome {
            eprintln!("h = {}: {e}", p.h);
        }
    }
    let failed = report.points.iter().find_map(|p| p.outcome.as_ref().err());
    let violations: Vec<String> = report
        .violations()
        .iter()
        .filter(|v| !matches!(v, InvariantViolation::Failed { .. }))
        .map(describe)
        .collect();
    if let Some(e) = failed {
        return Err(e.clone().into());
    }
    if violations.is_empty() {
        Ok(())
    } else {
        Err(Failure::Invariant(violations.join("; ")))
    }
}

fn cmd_mu(b: f64, tol: f64, output: &Output) -> CmdResult {
    let mu = mu_first(b, tol)?;
    let text = match output.format {
        Format::Csv => format!("{}\n", sig9(mu)),
        Format::Json => format!("{}\n", json!({ "b": b, "mu": mu })),
    };
    emit(output, &text)?;
    Ok(())
}

fn cmd_solve(a: f64, h: f64, disc: &Discretization, output: &Output, mesh_dump: Option<&Path>) -> CmdResult {
    AnnulusSpec::new(a, h)?;
    if let Some(path) = mesh_dump {
        dump_mesh(path, a, h, disc)?;
    }
    let p = analyze_point(a, h, disc.resolution(), disc.tol)?;
    let text = match output.format {
        Format::Csv => format!(
            "a,h,lambda,lambda_dot,lower,upper,residual,iterations,rellich_defect\n{},{},{},{},{},{},{},{},{}\n",
            sig9(a),
            sig9(h),
            sig9(p.lambda),
            sig9(p.lambda_dot),
            sig9(p.bounds.lower),
            sig9(p.bounds.upper),
            sig9(p.residual),
            p.iterations,
            sig9(p.rellich_defect)
        ),
        Format::Json => {
            let doc = json!({
                "a": a,
                "h": h,
                "lambda": p.lambda,
                "lambda_dot": p.lambda_dot,
                "lower": p.bounds.lower,
                "upper": p.bounds.upper,
                "lower_kind": lower_kind_name(p.bounds.lower_kind),
                "residual": p.residual,
                "iterations": p.iterations,
                "rellich_defect": p.rellich_defect,
                "flux": { "phi": p.flux.phi, "u_n": p.flux.u_n, "u_n_sq": p.flux.u_n_sq },
            });
            format!("{}\n", serde_json::to_string_pretty(&doc).expect("serializes"))
        }
    };
    emit(output, &text)?;
    let report = SweepReport::from_outcomes(a, vec![(h, Ok(p))]);
    check_report(&report)
}

fn cmd_sweep(
    a: f64,
    h_min: f64,
    h_max: f64,
    steps: usize,
    disc: &Discretization,
    output: &Output,
) -> CmdResult {
    let grid = uniform_grid(h_min, h_max, steps)?;
    let report = annulus::par_sweep(a, &grid, disc.resolution(), disc.tol)?;
    let text = match output.format {
        Format::Csv => sweep_csv(&report),
        Format::Json => sweep_json(&report),
    };
    emit(output, &text)?;
    check_report(&report)
}

fn cmd_bounds(a: f64, h: f64, check: bool, disc: &Discretization, output: &Output) -> CmdResult {
    let bounds = eigenvalue_bounds(a, h, disc.tol)?;
    let lambda = if check {
        Some(analyze_point(a, h, disc.resolution(), disc.tol)?.lambda)
    } else {
        None
    };
    let kind = lower_kind_name(bounds.lower_kind);
    let text = match output.format {
        Format::Csv => format!(
            "a,h,lower,upper,lower_kind,lambda\n{},{},{},{},{kind},{}\n",
            sig9(a),
            sig9(h),
            sig9(bounds.lower),
            sig9(bounds.upper),
            sig9_opt(lambda)
        ),
        Format::Json => format!(
            "{}\n",
            json!({ "a": a, "h": h, "lower": bounds.lower, "upper": bounds.upper, "lower_kind": kind, "lambda": lambda })
        ),
    };
    emit(output, &text)?;
    if let Some(l) = lambda {
        let applies = h > 0.0 && bounds.lower_kind == LowerBound::Annulus;
        if (applies && !bounds.contains(l)) || l <= DISC_EIGENVALUE {
            return Err(Failure::Invariant(format!(
                "lambda = {l} outside ({}, {})",
                bounds.lower, bounds.upper
            )));
        }
    }
    Ok(())
}

fn cmd_derivative(
    a: f64,
    h: f64,
    delta: f64,
    extrapolate: bool,
    disc: &Discretization,
    output: &Output,
    mesh_dump: Option<&Path>,
) -> CmdResult {
    AnnulusSpec::new(a, h)?;
    let res = disc.resolution();
    let (fd, fd_extrapolated) = if extrapolate {
        let e = fd_derivative_extrapolated(a, h, delta, res, disc.tol)?;
        (e.coarse, Some(e.extrapolated))
    } else {
        (fd_derivative(a, h, delta, res, disc.tol)?, None)
    };
    if let Some(path) = mesh_dump {
        dump_mesh(path, a, h, disc)?;
    }
    let p = analyze_point(a, h, res, disc.tol)?;
    let text = match output.format {
        Format::Csv => format!(
            "a,h,delta,lambda,lambda_dot,fd_check,fd_extrapolated\n{},{},{},{},{},{},{}\n",
            sig9(a),
            sig9(h),
            sig9(delta),
            sig9(p.lambda),
            sig9(p.lambda_dot),
            sig9(fd),
            sig9_opt(fd_extrapolated)
        ),
        Format::Json => format!(
            "{}\n",
            json!({
                "a": a, "h": h, "delta": delta, "lambda": p.lambda, "lambda_dot": p.lambda_dot,
                "fd_check": fd, "fd_extrapolated": fd_extrapolated,
            })
        ),
    };
    emit(output, &text)?;
    Ok(())
}

fn cmd_tables(disc: &Discretization, output: &Output) -> CmdResult {
    let report = run_tables(disc.resolution(), disc.tol);
    let text = match output.format {
        Format::Csv => report.to_csv(),
        Format::Json => report.to_json(),
    };
    emit(output, &text)?;
    let s = report.summary();
    let verdict = |ok: bool| if ok { "within" } else { "OUTSIDE" };
    eprintln!("cases failed to compute: {}", s.failed_cases);
    eprintln!(
        "lambda: max deviation {:.3}% ({} 2%)",
        100.0 * s.max_lambda_dev,
        verdict(s.max_lambda_dev < 0.02)
    );
    eprintln!(
        "u_n_sq at 0/90/180 deg: max deviation {:.3}% ({} 15%)",
        100.0 * s.max_flux_dev,
        verdict(s.max_flux_dev < 0.15)
    );
    eprintln!("flux profile: max deviation {:.3}%", 100.0 * s.max_profile_dev);
    eprintln!(
        "u_n_sq increasing on [0, 180] deg: {}",
        if s.all_monotone { "yes" } else { "no" }
    );
    Ok(())
}

fn run(cli: Cli) -> CmdResult {
    match &cli.command {
        Command::Mu { b, tol, output } => cmd_mu(*b, *tol, output),
        Command::Solve {
            a,
            h,
            disc,
            output,
            mesh_dump,
        } => cmd_solve(*a, *h, disc, output, mesh_dump.as_deref()),
        Command::Sweep {
            a,
            h_min,
            h_max,
            steps,
            disc,
            output,
        } => cmd_sweep(*a, *h_min, *h_max, *steps, disc, output),
        Command::Bounds {
            a,
            h,
            check,
            disc,
            output,
        } => cmd_bounds(*a, *h, *check, disc, output),
        Command::Derivative {
            a,
            h,
            delta,
            extrapolate,
            disc,
            output,
            mesh_dump,
        } => cmd_derivative(*a, *h, *delta, *extrapolate, disc, output, mesh_dump.as_deref()),
        Command::Tables { disc, output } => cmd_tables(disc, output),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Invariant(msg)) => {
            eprintln!("invariant violated: {msg}");
            ExitCode::from(3)
        }
        Err(Failure::Numerical(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(4)
        }
    }
}
