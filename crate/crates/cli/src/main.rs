use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use spectral_forests::cutquery::build_index;
use spectral_forests::forests::{treelike_ordering, TreelikeOrdering};
use spectral_forests::generate::{generate, GraphKind, KindName, Weights};
use spectral_forests::resistance::resistance_table;
use spectral_forests::sampler::{Mode, SamplerConfig, DEFAULT_C};
use spectral_forests::textio::{
    fmt_real, read_edge_list, read_ordering, read_vertex_sets, write_decomposition,
    write_edge_list, write_ordering, write_provenance, write_resistance_table, write_similarity,
};
use spectral_forests::MultiGraph;
use spectral_forests_cli::check::check_report;
use spectral_forests_cli::{run_pipeline, PipelineOptions};

#[derive(Parser)]
#[command(
    name = "sparsify",
    version,
    about = "Spectral sparsification and forest-based cut queries"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a test graph as an edge list.
    Gen {
        #[arg(long)]
        kind: KindName,
        #[arg(long, default_value_t = 0)]
        n: usize,
        /// Edge probability for gnp.
        #[arg(long)]
        p: Option<f64>,
        #[arg(long)]
        rows: Option<usize>,
        #[arg(long)]
        cols: Option<usize>,
        #[arg(long, default_value_t = 1.0)]
        wmin: f64,
        #[arg(long, default_value_t = 1.0)]
        wmax: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Defaults to stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the effective-resistance table of a graph.
    Resistances {
        #[arg(long)]
        input: PathBuf,
    },
    /// Sparsify, certify, decompose and run a query battery.
    Pipeline {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value = "ss")]
        mode: Mode,
        #[arg(long, default_value_t = 0.5)]
        epsilon: f64,
        #[arg(long = "C", default_value_t = DEFAULT_C)]
        c: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Merge parallel copies in the output sparsifier.
        #[arg(long)]
        merge: bool,
        /// Skip sampling and run every stage with H = G.
        #[arg(long)]
        self_check: bool,
        #[arg(long, default_value_t = 100)]
        queries: usize,
        #[arg(long, default_value_t = 2000)]
        density_trials: usize,
        /// Machine-readable report; the summary always goes to stdout.
        #[arg(long)]
        report: Option<PathBuf>,
        /// Directory for the sparsifier, provenance, similarity, ordering and
        /// decomposition files.
        #[arg(long)]
        artifacts: Option<PathBuf>,
    },
    /// Boundary queries on a graph, one output line per vertex set.
    Query {
        #[arg(long)]
        graph: PathBuf,
        /// One whitespace-separated vertex set per line.
        #[arg(long)]
        sets: PathBuf,
        /// Use this ordering instead of computing one.
        #[arg(long)]
        ordering: Option<PathBuf>,
    },
    /// Recompute a report's flags from its raw fields.
    CheckReport { report: PathBuf },
}

fn read_graph(path: &Path) -> Result<MultiGraph> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    read_edge_list(&text).with_context(|| format!("parsing {}", path.display()))
}

fn write_out(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn cmd_gen(
    kind: KindName,
    n: usize,
    p: Option<f64>,
    rows: Option<usize>,
    cols: Option<usize>,
    weights: Weights,
    seed: u64,
) -> Result<MultiGraph> {
    let kind = match kind {
        KindName::Gnp => GraphKind::Gnp {
            p: p.context("gnp needs --p")?,
        },
        KindName::Grid => {
            let cols = cols.context("grid needs --cols")?;
            GraphKind::Grid {
                rows: rows.unwrap_or(cols),
                cols,
            }
        }
        KindName::Complete => GraphKind::Complete,
        KindName::Barbell => GraphKind::Barbell,
        KindName::Tree => GraphKind::Tree,
    };
    Ok(generate(kind, n, weights, seed)?)
}

/// Ordering from a file, rebuilt into the structure the index expects.
fn ordering_from_positions(g: &MultiGraph, position: Vec<usize>) -> Result<TreelikeOrdering> {
    if position.len() != g.vertex_count() {
        bail!(
            "ordering covers {} vertices, graph has {}",
            position.len(),
            g.vertex_count()
        );
    }
    let forward_degree = spectral_forests::forests::forward_degrees(g, &position);
    let mut order = vec![0; position.len()];
    for (v, &p) in position.iter().enumerate() {
        order[p] = v;
    }
    Ok(TreelikeOrdering {
        max_forward_degree: forward_degree.iter().copied().max().unwrap_or(0),
        position,
        order,
        forward_degree,
        ops: 0,
    })
}

fn cmd_query(graph: &Path, sets: &Path, ordering: Option<&Path>) -> Result<()> {
    let g = read_graph(graph)?;
    let ord = match ordering {
        Some(p) => {
            let text = fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
            ordering_from_positions(&g, read_ordering(&text)?)?
        }
        None => treelike_ordering(&g),
    };
    let index = build_index(&g, &ord)?;
    let text = fs::read_to_string(sets).with_context(|| format!("reading {}", sets.display()))?;
    let sets = read_vertex_sets(&text).with_context(|| format!("parsing {}", sets.display()))?;
    let mut scratch = index.scratch();
    let mut out = String::new();
    for (i, s) in sets.iter().enumerate() {
        let start = Instant::now();
        let q = index
            .boundary_instrumented(&mut scratch, s)
            .with_context(|| format!("set {}", i + 1))?;
        let ns = start.elapsed().as_nanos();
        out.push_str(&format!("{} {} {}\n", fmt_real(q.boundary), q.scanned, ns));
    }
    print!("{out}");
    Ok(())
}

fn write_artifacts(
    dir: &Path,
    g: &MultiGraph,
    out: &spectral_forests_cli::PipelineOutput,
    eps: f64,
) -> Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let put = |name: &str, text: String| -> Result<()> {
        let p = dir.join(name);
        fs::write(&p, text).with_context(|| format!("writing {}", p.display()))
    };
    put("resistances.txt", write_resistance_table(&out.table))?;
    put("sparsifier.txt", write_edge_list(out.sparsifier_graph(g)))?;
    if let Some(s) = &out.sparsifier {
        put(
            "provenance.txt",
            write_provenance(&s.config, s.sample_count, &s.draws),
        )?;
    }
    put("similarity.txt", write_similarity(&out.similarity, eps))?;
    put("ordering.txt", write_ordering(&out.ordering.position))?;
    put("forests.txt", write_decomposition(&out.decomposition))?;
    Ok(())
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Gen {
            kind,
            n,
            p,
            rows,
            cols,
            wmin,
            wmax,
            seed,
            out,
        } => {
            let g = cmd_gen(kind, n, p, rows, cols, Weights::uniform(wmin, wmax), seed)?;
            write_out(out.as_deref(), &write_edge_list(&g))?;
        }
        Command::Resistances { input } => {
            let g = read_graph(&input)?;
            print!("{}", write_resistance_table(&resistance_table(&g)?));
        }
        Command::Pipeline {
            input,
            mode,
            epsilon,
            c,
            seed,
            merge,
            self_check,
            queries,
            density_trials,
            report,
            artifacts,
        } => {
            let g = read_graph(&input)?;
            let mut opts =
                PipelineOptions::new(SamplerConfig::new(mode, epsilon, c, seed).merged(merge));
            opts.self_check = self_check;
            opts.queries = queries;
            opts.density_trials = density_trials;
            let out = run_pipeline(&g, &opts)?;
            if let Some(dir) = &artifacts {
                write_artifacts(dir, &g, &out, epsilon)?;
            }
            if let Some(p) = &report {
                fs::write(p, out.report.to_text())
                    .with_context(|| format!("writing {}", p.display()))?;
            }
            print!("{}", out.report.summary());
            return Ok(out.report.all_pass());
        }
        Command::Query {
            graph,
            sets,
            ordering,
        } => cmd_query(&graph, &sets, ordering.as_deref())?,
        Command::CheckReport { report } => {
            let text = fs::read_to_string(&report)
                .with_context(|| format!("reading {}", report.display()))?;
            let verdicts = check_report(&text)?;
            let mut agree = true;
            for v in &verdicts {
                let mark = if v.agrees() { "ok" } else { "MISMATCH" };
                println!(
                    "{:<14} reported {:<4} recomputed {:<4} {mark}",
                    v.name, v.reported, v.recomputed
                );
                agree &= v.agrees();
            }
            return Ok(agree);
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
