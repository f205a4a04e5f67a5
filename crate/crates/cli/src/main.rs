//! Command-line front end for the `steklov` library.
//!
//! Exit codes: 0 success, 2 invalid input, 3 degenerate closure,
//! 4 a verification check failed, 1 anything else.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use steklov::bounds::verify_theorem_with;
use steklov::gadget::gadget_report;
use steklov::graph::{build_gadget_chain, subgraph_problem};
use steklov::io::{
    domain_json, dtn_csv, fmt_real, graph_json, parse_domain, parse_graph, pretty_json,
    records_csv, rows_csv, spectrum_csv,
};
use steklov::lattice::{generate, LatticeDomain, ShapeSpec};
use steklov::polyomino::{fixed_polyominoes, polyomino_counts};
use steklov::spectral::{
    assemble_lattice, assemble_problem, dtn_matrix, steklov_eigenvalues_with, DtNOperator,
    Spectrum, MAX_ZERO_EIGEN_RTOL, ZERO_EIGEN_RTOL,
};
use steklov::sweep::{run_sweep, Instance};
use steklov::Error;

#[derive(Parser, Debug)]
#[command(
    name = "steklov",
    version,
    about = "Steklov spectra of lattice domains and graphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Write a generated domain as JSON.
    Generate {
        #[command(flatten)]
        domain: DomainArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Eigenvalues of the DtN operator (CSV or JSON), optionally the matrix.
    Spectrum {
        #[command(flatten)]
        domain: DomainArgs,
        /// A graph JSON file with an `omega` field.
        #[arg(long, conflicts_with_all = ["shape", "points_file", "gadget_depth"])]
        graph_file: Option<PathBuf>,
        /// Block `K_i` of the gadget chain.
        #[arg(long, conflicts_with_all = ["shape", "points_file"])]
        gadget_depth: Option<usize>,
        /// Also write the DtN matrix as CSV here.
        #[arg(long)]
        dtn_out: Option<PathBuf>,
        #[command(flatten)]
        tol: TolArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Evaluate the full bound chain and write the report.
    Verify {
        #[command(flatten)]
        domain: DomainArgs,
        /// Verify every fixed polyomino of size 1..=K instead of one domain.
        #[arg(long, value_name = "K", conflicts_with_all = ["shape", "points_file"])]
        enumerate_polyominoes: Option<usize>,
        #[command(flatten)]
        tol: TolArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// One summary row per member of a family.
    Sweep {
        /// Family shape; each member is built with radius (or side) R.
        #[arg(long, value_enum)]
        shape: Option<Shape>,
        #[arg(long, default_value_t = 2)]
        n: usize,
        /// Range `A..B` (inclusive) or comma list of R values.
        #[arg(long, value_name = "RANGE")]
        radii: Option<String>,
        /// Gadget blocks to sweep, as a range or list.
        #[arg(long, value_name = "RANGE", conflicts_with_all = ["shape", "radii"])]
        gadget_depths: Option<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        tol: TolArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Report on one gadget block, or write a chain as graph JSON.
    Gadget {
        #[arg(long, value_name = "I")]
        gadget_depth: Option<usize>,
        /// Build the chain with these tree depths and write it as a graph.
        #[arg(long, value_name = "LIST", conflicts_with = "gadget_depth")]
        gadget_depths: Option<String>,
        #[command(flatten)]
        tol: TolArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Count (or list) fixed polyominoes up to size K.
    Enumerate {
        #[arg(long, value_name = "K")]
        enumerate_polyominoes: usize,
        /// List every shape instead of per-size counts.
        #[arg(long)]
        list: bool,
        #[command(flatten)]
        out: OutArgs,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Shape {
    Box,
    Ball,
    Punctured,
    CheckerRing,
    Random,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args, Debug)]
struct DomainArgs {
    #[arg(long, value_enum)]
    shape: Option<Shape>,
    #[arg(long, default_value_t = 2)]
    n: usize,
    /// Box side lengths, comma separated.
    #[arg(long, value_delimiter = ',')]
    dims: Vec<usize>,
    #[arg(long)]
    radius: Option<usize>,
    /// Number of points for `--shape random`.
    #[arg(long)]
    size: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Domain JSON file `{"n": .., "points": [[..], ..]}`.
    #[arg(long, conflicts_with = "shape")]
    points_file: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct TolArgs {
    /// Relative zero-eigenvalue threshold (at most 1e-6).
    #[arg(long, default_value_t = ZERO_EIGEN_RTOL)]
    zero_tol: f64,
}

#[derive(Args, Debug)]
struct OutArgs {
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Output file; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

enum Failure {
    Lib(Error),
    Input(String),
    Verification(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

type CmdResult = Result<(), Failure>;

fn input(msg: impl Into<String>) -> Failure {
    Failure::Input(msg.into())
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::DegenerateClosure { .. } => 3,
        Error::InvalidSpec(_)
        | Error::InvalidDimension(_)
        | Error::Precondition(_)
        | Error::EmptyOmega
        | Error::DimensionMismatch(..)
        | Error::TooLarge(_)
        | Error::Io(_)
        | Error::Json(_) => 2,
        _ => 1,
    }
}

fn emit(out: &OutArgs, text: &str) -> CmdResult {
    match &out.out {
        Some(path) => write_file(path, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn write_file(path: &Path, text: &str) -> CmdResult {
    fs::write(path, text).map_err(|e| input(format!("cannot write {}: {e}", path.display())))
}

fn read_file(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| input(format!("cannot read {}: {e}", path.display())))
}

fn zero_tol(t: &TolArgs) -> Result<f64, Failure> {
    if !(t.zero_tol > 0.0 && t.zero_tol <= MAX_ZERO_EIGEN_RTOL) {
        return Err(input(format!(
            "--zero-tol must lie in (0, {MAX_ZERO_EIGEN_RTOL:e}]"
        )));
    }
    Ok(t.zero_tol)
}

fn shape_spec(
    shape: Shape,
    n: usize,
    r: usize,
    dims: &[usize],
    size: Option<usize>,
    seed: u64,
) -> Result<ShapeSpec, Failure> {
    Ok(match shape {
        Shape::Box if !dims.is_empty() => ShapeSpec::Box {
            dims: dims.to_vec(),
        },
        Shape::Box => ShapeSpec::Box { dims: vec![r; n] },
        Shape::Ball => ShapeSpec::ChebyshevBall { n, radius: r },
        Shape::Punctured => ShapeSpec::PuncturedBox { n, radius: r },
        Shape::CheckerRing => {
            if n != 2 {
                return Err(input("checker-ring is planar; use --n 2"));
            }
            ShapeSpec::CheckerRing { radius: r }
        }
        Shape::Random => ShapeSpec::RandomConnected {
            n,
            size: size.unwrap_or(r),
            seed,
        },
    })
}

fn load_domain(a: &DomainArgs) -> Result<LatticeDomain, Failure> {
    if let Some(path) = &a.points_file {
        return Ok(parse_domain(&read_file(path)?)?);
    }
    let shape = a
        .shape
        .ok_or_else(|| input("give --shape or --points-file"))?;
    let needs_radius = !(shape == Shape::Box && !a.dims.is_empty())
        && !(shape == Shape::Random && a.size.is_some());
    let r = match (a.radius, needs_radius) {
        (Some(r), _) => r,
        (None, false) => 0,
        (None, true) => return Err(input("this shape needs --radius (or --dims / --size)")),
    };
    let spec = shape_spec(shape, a.n, r, &a.dims, a.size, a.seed)?;
    Ok(generate(&spec)?)
}

/// `A..B` (inclusive) or `a,b,c`.
fn parse_range(s: &str) -> Result<Vec<usize>, Failure> {
    let bad = || input(format!("cannot parse range {s:?}"));
    if let Some((a, b)) = s.split_once("..") {
        let b = b.strip_prefix('=').unwrap_or(b);
        let a: usize = a.trim().parse().map_err(|_| bad())?;
        let b: usize = b.trim().parse().map_err(|_| bad())?;
        if a > b {
            return Err(bad());
        }
        return Ok((a..=b).collect());
    }
    s.split(',')
        .map(|t| t.trim().parse().map_err(|_| bad()))
        .collect()
}

fn spectrum_json(op: &DtNOperator, spec: &Spectrum) -> Result<String, Failure> {
    let eig: Vec<serde_json::Value> = spec
        .eigenvalues
        .iter()
        .map(|&l| {
            let v = if spec.is_zero(l) { 0.0 } else { l };
            serde_json::Value::String(fmt_real(v))
        })
        .collect();
    Ok(pretty_json(&json!({
        "boundary": op.boundary_labels,
        "eigenvalues": eig,
        "zero_multiplicity": spec.zero_multiplicity,
        "zero_threshold": spec.zero_threshold,
    }))?)
}

fn cmd_generate(domain: &DomainArgs, out: &OutArgs) -> CmdResult {
    let d = load_domain(domain)?;
    let text = match out.format.unwrap_or(Format::Json) {
        Format::Json => domain_json(&d)? + "\n",
        Format::Csv => {
            let mut text = (1..=d.dim())
                .map(|k| format!("x{k}"))
                .collect::<Vec<_>>()
                .join(",");
            text.push('\n');
            for p in d.points() {
                let row: Vec<String> = p.0.iter().map(|c| c.to_string()).collect();
                text.push_str(&row.join(","));
                text.push('\n');
            }
            text
        }
    };
    emit(out, &text)
}

fn cmd_spectrum(
    domain: &DomainArgs,
    graph_file: Option<&Path>,
    gadget_depth: Option<usize>,
    dtn_out: Option<&Path>,
    tol: &TolArgs,
    out: &OutArgs,
) -> CmdResult {
    let zero = zero_tol(tol)?;
    let form = if let Some(path) = graph_file {
        let (g, omega) = parse_graph(&read_file(path)?)?;
        let omega = omega.ok_or_else(|| input("graph file has no \"omega\" field"))?;
        assemble_problem(&subgraph_problem(&g, &omega)?)?
    } else if let Some(i) = gadget_depth {
        let chain = steklov::graph::gadget_prefix(i)?;
        assemble_problem(&subgraph_problem(&chain.graph, &chain.block_omega(i)?)?)?
    } else {
        assemble_lattice(&load_domain(domain)?)?
    };
    let op = dtn_matrix(&form)?;
    let spec = steklov_eigenvalues_with(&op, zero)?;
    if let Some(path) = dtn_out {
        write_file(path, &dtn_csv(&op)?)?;
    }
    match out.format.unwrap_or(Format::Csv) {
        Format::Csv => emit(out, &spectrum_csv(&spec)),
        Format::Json => emit(out, &spectrum_json(&op, &spec)?),
    }
}

fn cmd_verify(
    domain: &DomainArgs,
    enumerate: Option<usize>,
    tol: &TolArgs,
    out: &OutArgs,
) -> CmdResult {
    let zero = zero_tol(tol)?;
    if let Some(k) = enumerate {
        let instances: Vec<Instance> = fixed_polyominoes(k)?
            .into_iter()
            .enumerate()
            .flat_map(|(s, level)| {
                level
                    .into_iter()
                    .enumerate()
                    .map(move |(j, d)| Instance::Lattice {
                        label: format!("poly{}#{j}", s + 1),
                        spec: ShapeSpec::Explicit {
                            n: 2,
                            points: d.points().iter().map(|p| p.0.clone()).collect(),
                        },
                    })
            })
            .collect();
        let rows = run_sweep(&instances, zero);
        match out.format.unwrap_or(Format::Csv) {
            Format::Csv => emit(out, &rows_csv(&rows)?)?,
            Format::Json => emit(out, &pretty_json(&rows)?)?,
        }
        let failed: Vec<&str> = rows
            .iter()
            .filter(|r| r.verification_failed() || !r.error.is_empty())
            .map(|r| r.label.as_str())
            .collect();
        eprintln!(
            "verified {} polyominoes of size <= {k}, {} failures",
            rows.len(),
            failed.len()
        );
        return if failed.is_empty() {
            Ok(())
        } else {
            Err(Failure::Verification(format!(
                "failed: {}",
                failed.join(", ")
            )))
        };
    }
    let d = load_domain(domain)?;
    let report = verify_theorem_with(&d, zero)?;
    match out.format.unwrap_or(Format::Json) {
        Format::Json => emit(out, &pretty_json(&report)?)?,
        Format::Csv => emit(out, &records_csv(report.all_records())?)?,
    }
    let failures = report.failures();
    if failures.is_empty() {
        Ok(())
    } else {
        let names: Vec<&str> = failures.iter().map(|f| f.name.as_str()).collect();
        Err(Failure::Verification(format!(
            "failed checks: {}",
            names.join(", ")
        )))
    }
}

fn cmd_sweep(
    shape: Option<Shape>,
    n: usize,
    radii: Option<&str>,
    gadget_depths: Option<&str>,
    seed: u64,
    tol: &TolArgs,
    out: &OutArgs,
) -> CmdResult {
    let zero = zero_tol(tol)?;
    let instances: Vec<Instance> = if let Some(g) = gadget_depths {
        parse_range(g)?
            .into_iter()
            .map(|index| Instance::Gadget { index })
            .collect()
    } else {
        let shape = shape.ok_or_else(|| input("give --shape with --radii, or --gadget-depths"))?;
        let rs = parse_range(radii.ok_or_else(|| input("--radii is required for shape sweeps"))?)?;
        rs.into_iter()
            .map(|r| {
                let spec = shape_spec(shape, n, r, &[], None, seed)?;
                Ok(Instance::Lattice {
                    label: format!("{shape:?}-R{r}").to_lowercase(),
                    spec,
                })
            })
            .collect::<Result<_, Failure>>()?
    };
    let rows = run_sweep(&instances, zero);
    match out.format.unwrap_or(Format::Csv) {
        Format::Csv => emit(out, &rows_csv(&rows)?)?,
        Format::Json => emit(out, &pretty_json(&rows)?)?,
    }
    let failed: Vec<&str> = rows
        .iter()
        .filter(|r| r.verification_failed())
        .map(|r| r.label.as_str())
        .collect();
    for r in rows.iter().filter(|r| !r.error.is_empty()) {
        eprintln!("{}: {}", r.label, r.error);
    }
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::Verification(format!(
            "failed rows: {}",
            failed.join(", ")
        )))
    }
}

fn cmd_gadget(
    depth: Option<usize>,
    depths: Option<&str>,
    tol: &TolArgs,
    out: &OutArgs,
) -> CmdResult {
    let zero = zero_tol(tol)?;
    if let Some(list) = depths {
        let chain = build_gadget_chain(&parse_range(list)?)?;
        let mut text = graph_json(&chain.graph, None)?;
        text.push('\n');
        return emit(out, &text);
    }
    let i = depth.ok_or_else(|| input("give --gadget-depth or --gadget-depths"))?;
    let report = gadget_report(i, zero)?;
    match out.format.unwrap_or(Format::Json) {
        Format::Json => emit(out, &pretty_json(&report)?)?,
        Format::Csv => emit(out, &records_csv(&report.records)?)?,
    }
    if report.passed() {
        Ok(())
    } else {
        Err(Failure::Verification(format!(
            "gadget block {i} failed its checks"
        )))
    }
}

fn cmd_enumerate(k: usize, list: bool, out: &OutArgs) -> CmdResult {
    if list {
        let mut text = String::new();
        for level in fixed_polyominoes(k)? {
            for d in level {
                text.push_str(&domain_json(&d)?);
                text.push('\n');
            }
        }
        return emit(out, &text);
    }
    if k > steklov::polyomino::MAX_POLYOMINO_SIZE {
        return Err(Error::TooLarge(format!("polyomino size {k}")).into());
    }
    let counts = polyomino_counts(k);
    let text = match out.format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let mut s = String::from("size,count\n");
            for (i, c) in counts.iter().enumerate() {
                s.push_str(&format!("{},{c}\n", i + 1));
            }
            s
        }
        Format::Json => {
            pretty_json(&json!({ "counts": counts, "total": counts.iter().sum::<usize>() }))?
        }
    };
    emit(out, &text)
}

fn run(cli: Cli) -> CmdResult {
    match &cli.command {
        Command::Generate { domain, out } => cmd_generate(domain, out),
        Command::Spectrum {
            domain,
            graph_file,
            gadget_depth,
            dtn_out,
            tol,
            out,
        } => cmd_spectrum(
            domain,
            graph_file.as_deref(),
            *gadget_depth,
            dtn_out.as_deref(),
            tol,
            out,
        ),
        Command::Verify {
            domain,
            enumerate_polyominoes,
            tol,
            out,
        } => cmd_verify(domain, *enumerate_polyominoes, tol, out),
        Command::Sweep {
            shape,
            n,
            radii,
            gadget_depths,
            seed,
            tol,
            out,
        } => cmd_sweep(
            *shape,
            *n,
            radii.as_deref(),
            gadget_depths.as_deref(),
            *seed,
            tol,
            out,
        ),
        Command::Gadget {
            gadget_depth,
            gadget_depths,
            tol,
            out,
        } => cmd_gadget(*gadget_depth, gadget_depths.as_deref(), tol, out),
        Command::Enumerate {
            enumerate_polyominoes,
            list,
            out,
        } => cmd_enumerate(*enumerate_polyominoes, *list, out),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Verification(msg)) => {
            eprintln!("verification failed: {msg}");
            ExitCode::from(4)
        }
    }
}
