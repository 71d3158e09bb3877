//! Command-line front end.
//!
//! Commands that analyze something print a single-line JSON report on
//! stdout; `gen` and `dot` print plain text. Exit codes are part of the
//! contract so shell pipelines can branch on mathematical outcomes:
//!
//! - 0: success / affirmative verdict
//! - 1: input could not be parsed (or read)
//! - 2: orientation is cyclic
//! - 3: negative verdict (spectrum gap, not chordal)
//! - 4: enumeration cap exceeded
//! - 5: synthesis target infeasible
//! - 64: command-line usage error

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Parser, Subcommand};
use serde::Serialize;

use crate::chordality::{is_chordal, ChordalityVerdict};
use crate::error::Error;
use crate::graph::Graph;
use crate::oracle::{Oracle, SpectrumResult, DEFAULT_EDGE_CAP};
use crate::orientation::{d_max, parse_arc_pairs, Orientation};
use crate::synthesis::{synthesize_with_plan, SynthesisOptions};

const REPORT_VERSION: u32 = 1;

#[derive(Parser)]
#[command(
    name = "orientable",
    version,
    about = "Dependent arcs of acyclic orientations: analysis, spectra, chordality, synthesis"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Count and list the dependent arcs of an acyclic orientation.
    Analyze {
        /// Graph in edge-list format.
        graph: PathBuf,
        /// Orientation in "u > v" arc format.
        orientation: PathBuf,
    },
    /// Enumerate all acyclic orientations and print the exact spectrum.
    /// Exits 0 when fully orientable, 3 when the spectrum has a gap.
    Spectrum {
        graph: PathBuf,
        /// Refuse graphs with more edges than this.
        #[arg(long, default_value_t = DEFAULT_EDGE_CAP)]
        cap: usize,
        /// Worker threads for the enumeration (output is identical).
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Decide chordality; print a perfect elimination ordering or a
    /// chordless-cycle witness.
    Chordal { graph: PathBuf },
    /// Construct an acyclic orientation with exactly the target number
    /// of dependent arcs.
    Synthesize {
        graph: PathBuf,
        #[arg(long)]
        target: usize,
        /// Also write the orientation to this file in arc format.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Include the per-layer construction trace in the report.
        #[arg(long)]
        trace: bool,
        #[arg(long, default_value_t = DEFAULT_EDGE_CAP)]
        cap: usize,
    },
    /// Emit a random chordal graph in edge-list format (deterministic
    /// per seed).
    Gen {
        #[arg(long)]
        n: usize,
        #[arg(long = "max-q", default_value_t = 3)]
        max_q: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Render an acyclic orientation as Graphviz DOT; dependent arcs are
    /// styled distinctly.
    Dot {
        graph: PathBuf,
        orientation: PathBuf,
    },
}

#[derive(Serialize)]
struct InputSummary {
    vertices: usize,
    edges: usize,
    components: usize,
}

impl InputSummary {
    fn of(g: &Graph) -> Self {
        InputSummary {
            vertices: g.vertex_count(),
            edges: g.edge_count(),
            components: g.components().0,
        }
    }
}

#[derive(Serialize)]
struct AnalyzeReport {
    version: u32,
    command: &'static str,
    input: InputSummary,
    d: usize,
    dependent_arcs: Vec<String>,
    topological_order: Vec<usize>,
    d_max: usize,
    status: &'static str,
}

#[derive(Serialize)]
struct CycleReport {
    version: u32,
    command: &'static str,
    input: InputSummary,
    cycle: Vec<usize>,
    status: &'static str,
}

#[derive(Serialize)]
struct SpectrumReport {
    version: u32,
    command: &'static str,
    input: InputSummary,
    spectrum: SpectrumResult,
    status: &'static str,
}

#[derive(Serialize)]
struct ChordalReport {
    version: u32,
    command: &'static str,
    input: InputSummary,
    chordal: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    peo: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness: Option<Vec<usize>>,
    status: &'static str,
}

#[derive(Serialize)]
struct SynthesizeReport {
    version: u32,
    command: &'static str,
    input: InputSummary,
    target: usize,
    arcs: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    trace: Option<Vec<String>>,
    status: &'static str,
}

#[derive(Serialize)]
struct InfeasibleReport {
    version: u32,
    command: &'static str,
    input: InputSummary,
    target: usize,
    d_min: usize,
    d_max: usize,
    status: &'static str,
}

#[derive(Serialize)]
struct NotChordalReport {
    version: u32,
    command: &'static str,
    input: InputSummary,
    target: usize,
    witness: Vec<usize>,
    status: &'static str,
}

/// Parses the process arguments and runs the selected command.
pub fn run_from_env() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let is_usage = err.use_stderr();
            let _ = err.print();
            return if is_usage { 64 } else { 0 };
        }
    };
    run(cli)
}

pub fn run(cli: Cli) -> i32 {
    match cli.command {
        Command::Analyze { graph, orientation } => cmd_analyze(&graph, &orientation),
        Command::Spectrum { graph, cap, jobs } => cmd_spectrum(&graph, cap, jobs),
        Command::Chordal { graph } => cmd_chordal(&graph),
        Command::Synthesize {
            graph,
            target,
            out,
            trace,
            cap,
        } => cmd_synthesize(&graph, target, out.as_deref(), trace, cap),
        Command::Gen { n, max_q, seed } => cmd_gen(n, max_q, seed),
        Command::Dot { graph, orientation } => cmd_dot(&graph, &orientation),
    }
}

fn exit_code(err: &Error) -> i32 {
    match err {
        Error::CyclicOrientation { .. } => 2,
        Error::NotChordal { .. } => 3,
        Error::EnumerationCap { .. } => 4,
        Error::InfeasibleTarget { .. } => 5,
        _ => 1,
    }
}

fn fail(err: &Error) -> i32 {
    eprintln!("error: {err}");
    exit_code(err)
}

fn read_file(path: &Path) -> Result<String, i32> {
    fs::read_to_string(path).map_err(|e| {
        eprintln!("error: cannot read {}: {e}", path.display());
        1
    })
}

fn load_graph(path: &Path) -> Result<(Graph, BTreeMap<usize, usize>), i32> {
    let text = read_file(path)?;
    Graph::parse_edge_list(&text).map_err(|e| fail(&e))
}

/// Arc files use the same vertex ids as the graph file they accompany,
/// so they go through the same normalization map.
fn load_orientation(
    graph: &Arc<Graph>,
    map: &BTreeMap<usize, usize>,
    path: &Path,
) -> Result<Orientation, i32> {
    let text = read_file(path)?;
    let raw = parse_arc_pairs(&text).map_err(|e| fail(&e))?;
    let mut arcs = Vec::with_capacity(raw.len());
    for (tail, head) in raw {
        let (Some(&t), Some(&h)) = (map.get(&tail), map.get(&head)) else {
            return Err(fail(&Error::Parse {
                line: 0,
                msg: format!("arc {tail} > {head} names a vertex not in the graph"),
            }));
        };
        arcs.push((t, h));
    }
    Orientation::from_arcs(Arc::clone(graph), &arcs).map_err(|e| fail(&e))
}

fn print_report<T: Serialize>(report: &T) {
    println!(
        "{}",
        serde_json::to_string(report).expect("reports serialize")
    );
}

fn arc_strings(d: &Orientation) -> Vec<String> {
    d.arcs().map(|(t, h)| format!("{t} > {h}")).collect()
}

fn cmd_analyze(graph_path: &Path, orientation_path: &Path) -> i32 {
    let (graph, map) = match load_graph(graph_path) {
        Ok(v) => v,
        Err(code) => return code,
    };
    let graph = Arc::new(graph);
    let orientation = match load_orientation(&graph, &map, orientation_path) {
        Ok(v) => v,
        Err(code) => return code,
    };
    let input = InputSummary::of(&graph);
    if let Some(cycle) = orientation.find_cycle() {
        print_report(&CycleReport {
            version: REPORT_VERSION,
            command: "analyze",
            input,
            cycle,
            status: "cyclic",
        });
        return 2;
    }
    let report = orientation.dependent_arcs().expect("orientation is acyclic");
    let topological_order = orientation
        .topological_order()
        .expect("orientation is acyclic");
    print_report(&AnalyzeReport {
        version: REPORT_VERSION,
        command: "analyze",
        input,
        d: report.count(),
        dependent_arcs: report
            .arcs()
            .iter()
            .map(|&(t, h)| format!("{t} > {h}"))
            .collect(),
        topological_order,
        d_max: d_max(&graph),
        status: "ok",
    });
    0
}

fn cmd_spectrum(graph_path: &Path, cap: usize, jobs: usize) -> i32 {
    let (graph, _) = match load_graph(graph_path) {
        Ok(v) => v,
        Err(code) => return code,
    };
    let spectrum = match Oracle::with_cap(cap).jobs(jobs).spectrum(&graph) {
        Ok(s) => s,
        Err(e) => return fail(&e),
    };
    let fully = spectrum.fully_orientable;
    print_report(&SpectrumReport {
        version: REPORT_VERSION,
        command: "spectrum",
        input: InputSummary::of(&graph),
        spectrum,
        status: if fully { "fully-orientable" } else { "gap" },
    });
    if fully {
        0
    } else {
        3
    }
}

fn cmd_chordal(graph_path: &Path) -> i32 {
    let (graph, _) = match load_graph(graph_path) {
        Ok(v) => v,
        Err(code) => return code,
    };
    let input = InputSummary::of(&graph);
    match is_chordal(&graph) {
        ChordalityVerdict::Chordal(peo) => {
            print_report(&ChordalReport {
                version: REPORT_VERSION,
                command: "chordal",
                input,
                chordal: true,
                peo: Some(peo.render()),
                witness: None,
                status: "chordal",
            });
            0
        }
        ChordalityVerdict::NotChordal { witness } => {
            print_report(&ChordalReport {
                version: REPORT_VERSION,
                command: "chordal",
                input,
                chordal: false,
                peo: None,
                witness: Some(witness),
                status: "not-chordal",
            });
            3
        }
    }
}

fn cmd_synthesize(
    graph_path: &Path,
    target: usize,
    out: Option<&Path>,
    trace: bool,
    cap: usize,
) -> i32 {
    let (graph, _) = match load_graph(graph_path) {
        Ok(v) => v,
        Err(code) => return code,
    };
    let input = InputSummary::of(&graph);
    let opts = SynthesisOptions {
        edge_cap: cap,
        suffix_dmin: None,
    };
    let (orientation, plan) = match synthesize_with_plan(&graph, target, &opts) {
        Ok(v) => v,
        Err(Error::InfeasibleTarget {
            target,
            d_min,
            d_max,
        }) => {
            print_report(&InfeasibleReport {
                version: REPORT_VERSION,
                command: "synthesize",
                input,
                target,
                d_min,
                d_max,
                status: "infeasible",
            });
            return 5;
        }
        Err(Error::NotChordal { witness }) => {
            print_report(&NotChordalReport {
                version: REPORT_VERSION,
                command: "synthesize",
                input,
                target,
                witness,
                status: "not-chordal",
            });
            return 3;
        }
        Err(e) => return fail(&e),
    };
    if let Some(path) = out {
        if let Err(e) = fs::write(path, orientation.render_arcs()) {
            eprintln!("error: cannot write {}: {e}", path.display());
            return 1;
        }
    }
    print_report(&SynthesizeReport {
        version: REPORT_VERSION,
        command: "synthesize",
        input,
        target,
        arcs: arc_strings(&orientation),
        trace: trace.then(|| plan.render().lines().map(str::to_owned).collect()),
        status: "ok",
    });
    0
}

fn cmd_gen(n: usize, max_q: usize, seed: u64) -> i32 {
    if n == 0 {
        eprintln!("error: need at least one vertex");
        return 64;
    }
    let g = crate::synthesis::random_chordal(n, max_q.max(1), seed);
    print!("{}", g.render_edge_list());
    0
}

fn cmd_dot(graph_path: &Path, orientation_path: &Path) -> i32 {
    let (graph, map) = match load_graph(graph_path) {
        Ok(v) => v,
        Err(code) => return code,
    };
    let graph = Arc::new(graph);
    let orientation = match load_orientation(&graph, &map, orientation_path) {
        Ok(v) => v,
        Err(code) => return code,
    };
    match render_dot(&orientation) {
        Ok(text) => {
            print!("{text}");
            0
        }
        Err(e) => fail(&e),
    }
}

/// DOT document with vertices in id order and arcs in canonical edge
/// order; dependent arcs get a distinguishing style.
pub fn render_dot(orientation: &Orientation) -> crate::error::Result<String> {
    let report = orientation.dependent_arcs()?;
    let mut out = String::from("digraph orientation {\n");
    for v in 0..orientation.graph().vertex_count() {
        out.push_str(&format!("  {v};\n"));
    }
    for (tail, head) in orientation.arcs() {
        if report.contains(tail, head) {
            out.push_str(&format!(
                "  {tail} -> {head} [style=bold, color=red, dependent=true];\n"
            ));
        } else {
            out.push_str(&format!("  {tail} -> {head};\n"));
        }
    }
    out.push_str("}\n");
    Ok(out)
}
