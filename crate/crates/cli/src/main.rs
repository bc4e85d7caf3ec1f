//! Command-line front-end: graph generation and IO, uncertainty curves,
//! block-structure reduction, hypersphere sampling, and SVG plots.
//!
//! Exit codes: 0 success, 2 usage/input error, 3 graph precondition error
//! (disconnected graph, isolated node), 4 convergence error (a partial
//! curve CSV is still written).

mod csv;
mod svg;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use uncurve_core::graph::{
    distance_matrix, gen_complete, gen_cycle, gen_path, gen_random, gen_star, normalized_laplacian,
    CenterNode, Graph,
};
use uncurve_core::reduction::{find_block_structure, pareto_frontier, sample_cloud};
use uncurve_core::uncertainty::sandwich_curve;
use uncurve_core::{io, Error};

#[derive(Parser)]
#[command(
    name = "uncurve",
    version,
    about = "Uncertainty curves for signals on graphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Star,
    Complete,
    Cycle,
    Path,
    Random,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a standard graph and write it as an edge list or JSON
    Gen {
        family: Family,
        /// Node count
        #[arg(long)]
        n: usize,
        /// Edge probability (random family only)
        #[arg(long)]
        p: Option<f64>,
        /// RNG seed (random family only)
        #[arg(long)]
        seed: Option<u64>,
        /// Output file; `.json` selects the JSON format
        #[arg(long)]
        out: PathBuf,
    },
    /// Approximate the uncertainty curve with certified bounds
    Curve {
        graph: PathBuf,
        /// Center node (1-based)
        #[arg(long)]
        uc: usize,
        /// Certified bound-gap tolerance
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        /// Output curve CSV
        #[arg(long)]
        out: PathBuf,
    },
    /// Detect the symmetric block structure and write the partition JSON
    Reduce {
        graph: PathBuf,
        /// Center node (1-based)
        #[arg(long)]
        uc: usize,
        /// Output partition JSON
        #[arg(long)]
        out: PathBuf,
    },
    /// Sample the reduced hypersphere; writes the cloud CSV to OUT and the
    /// Pareto frontier to OUT with a `.frontier` suffix before the extension
    Sample {
        graph: PathBuf,
        /// Center node (1-based)
        #[arg(long)]
        uc: usize,
        /// Angular grid step
        #[arg(long, default_value_t = 0.05)]
        step: f64,
        /// Output cloud CSV
        #[arg(long)]
        out: PathBuf,
    },
    /// Render curve (and optional cloud) CSVs into a static SVG plot
    Plot {
        /// Curve CSV produced by `curve`
        #[arg(long)]
        curve: PathBuf,
        /// Optional cloud or frontier CSV produced by `sample`
        #[arg(long)]
        cloud: Option<PathBuf>,
        /// Output SVG
        #[arg(long)]
        out: PathBuf,
    },
}

const EXIT_USAGE: u8 = 2;
const EXIT_PRECONDITION: u8 = 3;
const EXIT_CONVERGENCE: u8 = 4;

fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::Disconnected { .. } | Error::DegenerateDegree { .. } => EXIT_PRECONDITION,
        Error::Convergence { .. } | Error::SolverFailure { .. } => EXIT_CONVERGENCE,
        _ => EXIT_USAGE,
    }
}

fn fail(code: u8, msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(code)
}

/// Write through a temp file in the same directory, then rename.
fn atomic_write(path: &Path, contents: &str) -> std::io::Result<()> {
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = PathBuf::from(tmp);
    std::fs::write(&tmp, contents)?;
    std::fs::rename(&tmp, path)
}

fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err((code, msg)) => fail(code, msg),
    }
}

fn run(cli: Cli) -> Result<(), (u8, String)> {
    match cli.command {
        Command::Gen {
            family,
            n,
            p,
            seed,
            out,
        } => cmd_gen(family, n, p, seed, &out),
        Command::Curve {
            graph,
            uc,
            tol,
            out,
        } => cmd_curve(&graph, uc, tol, &out),
        Command::Reduce { graph, uc, out } => cmd_reduce(&graph, uc, &out),
        Command::Sample {
            graph,
            uc,
            step,
            out,
        } => cmd_sample(&graph, uc, step, &out),
        Command::Plot { curve, cloud, out } => cmd_plot(&curve, cloud.as_deref(), &out),
    }
}

fn core_err(err: Error) -> (u8, String) {
    (exit_code_for(&err), err.to_string())
}

fn io_err(err: std::io::Error) -> (u8, String) {
    (EXIT_USAGE, err.to_string())
}

fn cmd_gen(
    family: Family,
    n: usize,
    p: Option<f64>,
    seed: Option<u64>,
    out: &Path,
) -> Result<(), (u8, String)> {
    let g = match family {
        Family::Star => gen_star(n),
        Family::Complete => gen_complete(n),
        Family::Cycle => gen_cycle(n),
        Family::Path => gen_path(n),
        Family::Random => {
            let p = p.ok_or((EXIT_USAGE, "random family needs --p".to_string()))?;
            let seed = seed.ok_or((EXIT_USAGE, "random family needs --seed".to_string()))?;
            gen_random(n, p, seed)
        }
    }
    .map_err(core_err)?;
    let text = if out.extension().is_some_and(|e| e == "json") {
        io::to_json(&g)
    } else {
        io::to_edge_list(&g)
    };
    atomic_write(out, &text).map_err(io_err)?;
    println!("N={} edges={} -> {}", g.n(), g.edge_count(), out.display());
    Ok(())
}

fn center(uc: usize, g: &Graph) -> Result<CenterNode, (u8, String)> {
    CenterNode::new(uc, g.n()).map_err(core_err)
}

fn cmd_curve(graph: &Path, uc: usize, tol: f64, out: &Path) -> Result<(), (u8, String)> {
    let g = io::read_graph(graph).map_err(core_err)?;
    let ucn = center(uc, &g)?;
    let p = distance_matrix(&g, ucn).map_err(core_err)?;
    let l = normalized_laplacian(&g).map_err(core_err)?;
    match sandwich_curve(&p, &l, ucn, tol) {
        Ok(curve) => {
            atomic_write(out, &csv::write_curve(&curve)).map_err(io_err)?;
            println!(
                "points={} gap={} -> {}",
                curve.points().len(),
                num(curve.gap()),
                out.display()
            );
            if curve.gap() <= tol {
                Ok(())
            } else {
                Err((
                    EXIT_CONVERGENCE,
                    format!(
                        "certified gap {} exceeds tolerance {}",
                        num(curve.gap()),
                        num(tol)
                    ),
                ))
            }
        }
        Err(Error::Convergence {
            iterations,
            gap,
            partial,
        }) => {
            atomic_write(out, &csv::write_curve(&partial)).map_err(io_err)?;
            println!(
                "points={} gap={} -> {} (partial)",
                partial.points().len(),
                num(gap),
                out.display()
            );
            Err((
                EXIT_CONVERGENCE,
                format!(
                    "refinement cap of {iterations} iterations reached at gap {}",
                    num(gap)
                ),
            ))
        }
        Err(err) => Err(core_err(err)),
    }
}

/// `{x1; x2; x3 ×6}`-style rendering of the reduced form.
fn form_string(sizes: &[usize]) -> String {
    let parts: Vec<String> = sizes
        .iter()
        .enumerate()
        .map(|(i, &k)| {
            if k == 1 {
                format!("x{}", i + 1)
            } else {
                format!("x{} ×{k}", i + 1)
            }
        })
        .collect();
    format!("{{{}}}", parts.join("; "))
}

fn cmd_reduce(graph: &Path, uc: usize, out: &Path) -> Result<(), (u8, String)> {
    let g = io::read_graph(graph).map_err(core_err)?;
    let ucn = center(uc, &g)?;
    let part = find_block_structure(&g, ucn).map_err(core_err)?;
    atomic_write(out, &part.to_json()).map_err(io_err)?;
    println!(
        "M={} form={} -> {}",
        part.reduced_dim(),
        form_string(&part.group_sizes()),
        out.display()
    );
    Ok(())
}

fn frontier_path(out: &Path) -> PathBuf {
    match out.extension() {
        Some(ext) => {
            let mut stem = out.with_extension("").into_os_string();
            stem.push(".frontier.");
            stem.push(ext);
            PathBuf::from(stem)
        }
        None => {
            let mut p = out.as_os_str().to_owned();
            p.push(".frontier");
            PathBuf::from(p)
        }
    }
}

fn cmd_sample(graph: &Path, uc: usize, step: f64, out: &Path) -> Result<(), (u8, String)> {
    let g = io::read_graph(graph).map_err(core_err)?;
    let ucn = center(uc, &g)?;
    let part = find_block_structure(&g, ucn).map_err(core_err)?;
    let cloud = sample_cloud(&g, ucn, &part, step).map_err(core_err)?;
    let front = pareto_frontier(&cloud).map_err(core_err)?;
    atomic_write(out, &csv::write_cloud(&cloud.points)).map_err(io_err)?;
    let fpath = frontier_path(out);
    atomic_write(&fpath, &csv::write_cloud(&front)).map_err(io_err)?;
    println!(
        "M={} cloud={} -> {} frontier={} -> {}",
        part.reduced_dim(),
        cloud.points.len(),
        out.display(),
        front.len(),
        fpath.display()
    );
    Ok(())
}

fn cmd_plot(curve: &Path, cloud: Option<&Path>, out: &Path) -> Result<(), (u8, String)> {
    let text = std::fs::read_to_string(curve).map_err(io_err)?;
    let rows = csv::parse_curve(&text).map_err(|e| (EXIT_USAGE, e))?;
    let curve_pts: Vec<(f64, f64)> = rows.iter().map(|r| (r.s, r.g)).collect();
    let cloud_pts: Vec<(f64, f64)> = match cloud {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(io_err)?;
            csv::parse_cloud(&text).map_err(|e| (EXIT_USAGE, e))?
        }
        None => Vec::new(),
    };
    atomic_write(out, &svg::render(&curve_pts, &cloud_pts)).map_err(io_err)?;
    let max_gap = rows.iter().map(|r| r.lower_gap).fold(0.0f64, f64::max);
    println!(
        "curve points={} (max segment gap={}) cloud points={} -> {}",
        curve_pts.len(),
        num(max_gap),
        cloud_pts.len(),
        out.display()
    );
    Ok(())
}
