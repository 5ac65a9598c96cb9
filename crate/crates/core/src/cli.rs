//! Command-line front end.
//!
//! Exit codes: 0 on success, 1 on domain errors (malformed or ambiguous
//! input, failed checks), 2 on usage errors.

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use crate::boundary::{boundary_cells, BoundaryMode};
use crate::cubes::{enumerate_cubes, induced_complex, CellComplex};
use crate::generate::{self, Family, GenSpec};
use crate::graph::{all_pairs_distances, is_median, Graph};
use crate::matrix::DistanceMatrix;
use crate::reconstruct::{reconstruct_traced, write_trace};
use crate::verify::{audit_reconstruction, isomorphism_extending, PartialMap};

#[derive(Debug, Parser)]
#[command(name = "median-recon", version, about = "Reconstruct median graphs from boundary distances")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print a generated graph as JSON.
    Gen {
        #[arg(long)]
        family: Family,
        #[arg(long, default_value = "")]
        params: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Print the cube complex of a graph as JSON (induced cubes for
    /// non-median graphs).
    Complex {
        #[arg(long)]
        graph: PathBuf,
        /// Basepoint label for the downward-cube enumeration.
        #[arg(long)]
        basepoint: Option<String>,
    },
    /// Print the boundary vertices and their distance matrix as CSV.
    Boundary {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, default_value_t = BoundaryMode::FacetUnique)]
        mode: BoundaryMode,
        /// Also write the CSV to this file.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Rebuild a graph from a boundary distance matrix.
    Reconstruct {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long)]
        basepoint: Option<String>,
        /// Write one JSON object per peeling step to this file.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Audit a reconstruction against an original graph. With `--matrix`,
    /// reconstruct that matrix instead and check it against the original.
    Verify {
        #[arg(long)]
        original: PathBuf,
        #[arg(long, default_value_t = BoundaryMode::FacetUnique)]
        mode: BoundaryMode,
        #[arg(long)]
        matrix: Option<PathBuf>,
        #[arg(long)]
        basepoint: Option<String>,
    },
    /// Generate, extract the boundary, reconstruct and compare.
    Roundtrip {
        #[arg(long)]
        family: Family,
        #[arg(long, default_value = "")]
        params: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = BoundaryMode::FacetUnique)]
        mode: BoundaryMode,
    },
    /// Show that the 3-cube minus a vertex is not boundary rigid.
    #[command(name = "demo-q3minus")]
    DemoQ3Minus {
        #[arg(long, default_value_t = BoundaryMode::FacetUnique)]
        mode: BoundaryMode,
    },
}

/// Parses `argv` (program name first), runs the command and returns the exit
/// code.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                let _ = write!(err, "{}", e.render());
                2
            } else {
                let _ = write!(out, "{}", e.render());
                0
            };
            return code;
        }
    };
    match execute(cli.command, out) {
        Ok(code) => code,
        Err(msg) => {
            let _ = writeln!(err, "error: {msg}");
            1
        }
    }
}

type Outcome = Result<i32, String>;

fn io_err(e: std::io::Error) -> String {
    e.to_string()
}

fn read_graph(path: &Path) -> Result<Graph, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    Graph::from_json(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn read_matrix(path: &Path) -> Result<DistanceMatrix, String> {
    let file = File::open(path).map_err(|e| format!("{}: {e}", path.display()))?;
    DistanceMatrix::read_csv(file).map_err(|e| format!("MalformedMatrix: {}: {e}", path.display()))
}

/// Downward enumeration for median graphs, induced-cube search otherwise.
fn complex_of(g: &Graph, basepoint: usize) -> Result<CellComplex, String> {
    let res = if is_median(g).median {
        enumerate_cubes(g, basepoint)
    } else {
        induced_complex(g)
    };
    res.map_err(|e| e.to_string())
}

fn boundary_matrix(g: &Graph, mode: BoundaryMode) -> Result<DistanceMatrix, String> {
    let cx = complex_of(g, 0)?;
    let vertices = boundary_cells(&cx, mode).vertices;
    Ok(all_pairs_distances(g).restrict(&vertices))
}

fn execute(command: Command, out: &mut dyn Write) -> Outcome {
    match command {
        Command::Gen { family, params, seed } => {
            let g = GenSpec::new(family, params, seed).build().map_err(|e| e.to_string())?;
            writeln!(out, "{}", g.to_json()).map_err(io_err)?;
            Ok(0)
        }
        Command::Complex { graph, basepoint } => {
            let g = read_graph(&graph)?;
            let z = match basepoint {
                None => 0,
                Some(l) => g.id_of(&l).ok_or_else(|| format!("unknown basepoint {l:?}"))?,
            };
            let cx = complex_of(&g, z)?;
            writeln!(out, "{}", cx.to_json(&g)).map_err(io_err)?;
            Ok(0)
        }
        Command::Boundary { graph, mode, csv } => {
            let g = read_graph(&graph)?;
            let d = boundary_matrix(&g, mode)?;
            writeln!(out, "# boundary {mode}: {} vertices", d.len()).map_err(io_err)?;
            d.write_csv(&mut *out).map_err(|e| e.to_string())?;
            if let Some(path) = csv {
                let file = File::create(&path).map_err(|e| format!("{}: {e}", path.display()))?;
                d.write_csv(BufWriter::new(file)).map_err(|e| e.to_string())?;
            }
            Ok(0)
        }
        Command::Reconstruct { matrix, basepoint, trace } => {
            let d = read_matrix(&matrix)?;
            let r = reconstruct_traced(&d, basepoint.as_deref()).map_err(|e| e.to_string())?;
            if let Some(path) = trace {
                let file = File::create(&path).map_err(|e| format!("{}: {e}", path.display()))?;
                write_trace(r.trace(), BufWriter::new(file)).map_err(io_err)?;
            }
            writeln!(out, "{}", r.graph.to_json()).map_err(io_err)?;
            Ok(0)
        }
        Command::Verify {
            original,
            mode,
            matrix,
            basepoint,
        } => {
            let g = read_graph(&original)?;
            match matrix {
                Some(path) => {
                    let d = read_matrix(&path)?;
                    let r = reconstruct_traced(&d, basepoint.as_deref()).map_err(|e| e.to_string())?;
                    compare(out, &r.graph, &g, d.labels(), "input")
                }
                None => {
                    if basepoint.is_some() {
                        return Err("--basepoint requires --matrix".into());
                    }
                    let report = audit_reconstruction(&g, mode).map_err(|e| e.to_string())?;
                    write!(out, "{}", report.render()).map_err(io_err)?;
                    Ok(if report.passed() { 0 } else { 1 })
                }
            }
        }
        Command::Roundtrip {
            family,
            params,
            seed,
            mode,
        } => {
            let g = GenSpec::new(family, params, seed).build().map_err(|e| e.to_string())?;
            let d = boundary_matrix(&g, mode)?;
            let r = reconstruct_traced(&d, None).map_err(|e| e.to_string())?;
            compare(out, &r.graph, &g, d.labels(), "boundary")
        }
        Command::DemoQ3Minus { mode } => demo_q3_minus(out, mode),
    }
}

/// Prints the isomorphism verdict for `recon` against `original` fixing
/// `fixed`; exit code 0 exactly when an isomorphism exists.
fn compare(out: &mut dyn Write, recon: &Graph, original: &Graph, fixed: &[String], what: &str) -> Outcome {
    let found = if recon.n() == original.n() {
        isomorphism_extending(recon, original, &PartialMap::identity(fixed))
            .map_err(|e| e.to_string())?
            .is_some()
    } else {
        false
    };
    if found {
        writeln!(out, "ISOMORPHIC (fixing {} {what} vertices)", fixed.len()).map_err(io_err)?;
        Ok(0)
    } else {
        writeln!(
            out,
            "NOT ISOMORPHIC (no isomorphism fixes the {} {what} vertices; reconstruction has {} vertices, original {})",
            fixed.len(),
            recon.n(),
            original.n()
        )
        .map_err(io_err)?;
        Ok(1)
    }
}

fn demo_q3_minus(out: &mut dyn Write, mode: BoundaryMode) -> Outcome {
    let (gp, gpp, hexagon) = generate::q3_minus();
    let mut lines = Vec::new();
    let mut matrices = Vec::new();
    for (name, g) in [("G'", &gp), ("G''", &gpp)] {
        let edges: Vec<String> = g
            .edges()
            .map(|(u, v)| format!("{}-{}", g.label(u), g.label(v)))
            .collect();
        lines.push(format!("{name}: {}", edges.join(" ")));
        let d = boundary_matrix(g, mode)?;
        lines.push(format!("{name} boundary matrix ({mode}):"));
        lines.push(d.to_csv_string().trim_end().to_owned());
        matrices.push(d);
    }
    for l in &lines {
        writeln!(out, "{l}").map_err(io_err)?;
    }
    let isometric = matrices[0] == matrices[1] && matrices[0].labels() == hexagon.as_slice();
    let identity = PartialMap::identity(&hexagon);
    let extends = isomorphism_extending(&gp, &gpp, &identity)
        .map_err(|e| e.to_string())?
        .is_some();
    let rotation = PartialMap::new(
        (0..6)
            .map(|i| (hexagon[i].clone(), hexagon[(i + 1) % 6].clone()))
            .collect(),
    )
    .map_err(|e| e.to_string())?;
    let rotated = isomorphism_extending(&gp, &gpp, &rotation)
        .map_err(|e| e.to_string())?
        .is_some();
    writeln!(
        out,
        "identity on v1..v6 extends: {}; rotation v1->v2->..->v6->v1 extends: {}",
        yes_no(extends),
        yes_no(rotated)
    )
    .map_err(io_err)?;
    if isometric && !extends {
        writeln!(out, "boundary matrices isometric; no extending isomorphism exists").map_err(io_err)?;
        Ok(0)
    } else {
        writeln!(out, "unexpected: isometric={isometric}, extends={extends}").map_err(io_err)?;
        Ok(1)
    }
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}
