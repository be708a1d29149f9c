//! `median-dual`: generate meshes, compute median-dual metrics and verify them.
//!
//! Exit codes: 0 success, 2 input error, 3 verification failure.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use median_dual::dual_algebraic::{directed_area_field, dual_volumes};
use median_dual::generate::{canonical_mesh, kuhn_grid, CANONICAL_MESHES};
use median_dual::io::{to_json_string, write_json, DualFile, MeshFile};
use median_dual::verify::{run_verification, BoundaryCoefficient, VerifyOptions};
use median_dual::{BuildOptions, Triangulation64};

const EXIT_INPUT: u8 = 2;
const EXIT_VERIFY: u8 = 3;

#[derive(Parser)]
#[command(name = "median-dual", version, about = "Median-dual metrics on simplicial meshes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a Kuhn hypercube grid or a named canonical mesh.
    Generate(GenerateArgs),
    /// Check that a mesh file is a valid triangulation.
    Validate { mesh: PathBuf },
    /// Compute dual volumes and directed-hyperarea vectors.
    Dual(DualArgs),
    /// Run the closure, oracle and conservation checks.
    Verify(VerifyArgs),
    /// Print point, cell, edge and facet counts.
    Info(MeshArgs),
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long, required_unless_present = "canonical")]
    dim: Option<usize>,
    #[arg(long, required_unless_present = "canonical")]
    cells_per_axis: Option<usize>,
    /// Perturbation amplitude as a fraction of the local shortest edge.
    #[arg(long, default_value_t = 0.0)]
    perturb: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Named mesh instead of a grid.
    #[arg(long, conflicts_with_all = ["dim", "cells_per_axis"])]
    canonical: Option<String>,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct MeshArgs {
    mesh: PathBuf,
    /// Skip the degeneracy and pseudo-manifold checks.
    #[arg(long)]
    lax: bool,
}

#[derive(Args)]
struct DualArgs {
    #[command(flatten)]
    mesh: MeshArgs,
    #[arg(long)]
    no_boundary_correction: bool,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    mesh: MeshArgs,
    /// Weight of boundary normals in the closure check (default 1/d).
    #[arg(long, conflicts_with = "cell_share_coefficient")]
    boundary_coefficient: Option<f64>,
    /// Use 1/(d+1) (1/5 for pentatopes); closure residuals are reported but
    /// do not fail the run.
    #[arg(long)]
    cell_share_coefficient: bool,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Debug)]
enum Failure {
    Input(String),
    Verification,
}

impl<E: std::error::Error> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Input(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn load(args: &MeshArgs) -> Result<Triangulation64, Failure> {
    let file = MeshFile::read(&args.mesh)?;
    let options = BuildOptions { strict: !args.lax };
    file.to_triangulation(options)
        .map_err(|e| Failure::Input(format!("{}: {e}", args.mesh.display())))
}

fn emit<S: serde::Serialize>(value: &S, output: Option<&Path>) -> Outcome {
    match output {
        Some(path) => write_json(path, value)?,
        None => print!("{}", to_json_string(value)?),
    }
    Ok(())
}

fn generate(args: GenerateArgs) -> Outcome {
    let t: Triangulation64 = match &args.canonical {
        Some(name) => canonical_mesh(name).map_err(|e| {
            Failure::Input(format!("{e} (available: {})", CANONICAL_MESHES.join(", ")))
        })?,
        None => kuhn_grid(
            args.dim.expect("clap enforces --dim"),
            args.cells_per_axis.expect("clap enforces --cells-per-axis"),
            args.perturb,
            args.seed,
        )?,
    };
    emit(&MeshFile::from_triangulation(&t), args.output.as_deref())
}

fn validate(mesh: PathBuf) -> Outcome {
    let t = load(&MeshArgs { mesh, lax: false })?;
    println!(
        "valid: dimension {}, {} points, {} cells",
        t.dim(),
        t.num_points(),
        t.num_cells()
    );
    Ok(())
}

fn dual(args: DualArgs) -> Outcome {
    let t = load(&args.mesh)?;
    let field = directed_area_field(&t, !args.no_boundary_correction)?;
    let file = DualFile::new(&t, &dual_volumes(&t), &field);
    emit(&file, args.output.as_deref())
}

fn verify(args: VerifyArgs) -> Outcome {
    let t = load(&args.mesh)?;
    let coefficient = match (args.cell_share_coefficient, args.boundary_coefficient) {
        (true, _) => BoundaryCoefficient::CellShare,
        (false, Some(c)) => BoundaryCoefficient::Custom(c),
        (false, None) => BoundaryCoefficient::Default,
    };
    let report = run_verification(&t, &VerifyOptions { coefficient })?;
    emit(&report, args.output.as_deref())?;
    for c in &report.checks {
        let status = match (c.asserted, c.passed) {
            (false, _) => "info",
            (true, true) => "ok",
            (true, false) => "FAIL",
        };
        eprintln!("{:<30} {:>12.3e} <= {:<10.3e} {status}", c.name, c.value, c.tolerance);
    }
    if report.passed() {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}

fn info(args: MeshArgs) -> Outcome {
    let t = load(&args)?;
    println!("dimension {}", t.dim());
    println!("points {}", t.num_points());
    println!("cells {}", t.num_cells());
    println!("edges {}", t.edges().len());
    println!("interior_facets {}", t.num_interior_facets());
    println!("boundary_facets {}", t.boundary_facets().len());
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Generate(a) => generate(a),
        Command::Validate { mesh } => validate(mesh),
        Command::Dual(a) => dual(a),
        Command::Verify(a) => verify(a),
        Command::Info(a) => info(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_INPUT)
        }
        Err(Failure::Verification) => {
            eprintln!("verification failed");
            ExitCode::from(EXIT_VERIFY)
        }
    }
}
