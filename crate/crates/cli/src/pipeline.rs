//! End-to-end run: resistances → sample → certify → order → decompose → index
//! → query battery, with every check recorded as a flag.

use std::time::Instant;

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use spectral_forests::cutquery::{build_index, CutIndex};
use spectral_forests::forests::{
    decompose_forests, density_bound_per_vertex, forward_degrees, sparsifier_density_bound,
    treelike_ordering, verify_forest, ForestDecomposition, TreelikeOrdering, ORDERING_ALPHA,
};
use spectral_forests::graph::{exact_boundary, merge_parallel};
use spectral_forests::resistance::{foster_check, resistance_table, ResistanceTable};
use spectral_forests::sampler::{sample_sparsifier, SampledSparsifier, SamplerConfig};
use spectral_forests::spectral::{relative_spectrum, resistance_comparability, SimilarityReport};
use spectral_forests::MultiGraph;

use crate::report::{ExperimentReport, Flag, QueryRow};

#[derive(Debug, thiserror::Error)]
#[error("{stage}: {source}")]
pub struct PipelineError {
    pub stage: &'static str,
    #[source]
    pub source: spectral_forests::Error,
}

fn at<T>(stage: &'static str, r: spectral_forests::Result<T>) -> Result<T, PipelineError> {
    r.map_err(|source| PipelineError { stage, source })
}

#[derive(Debug, Clone)]
pub struct PipelineOptions {
    pub config: SamplerConfig,
    /// Use `H = G` instead of sampling.
    pub self_check: bool,
    pub queries: usize,
    /// Random subsets probed by the density certificate when `n` is too large
    /// for exhaustive enumeration.
    pub density_trials: usize,
}

impl PipelineOptions {
    pub fn new(config: SamplerConfig) -> Self {
        PipelineOptions {
            config,
            self_check: false,
            queries: 100,
            density_trials: 2000,
        }
    }
}

pub struct PipelineOutput {
    pub report: ExperimentReport,
    pub table: ResistanceTable,
    /// `None` in self-check mode.
    pub sparsifier: Option<SampledSparsifier>,
    pub similarity: SimilarityReport,
    pub ordering: TreelikeOrdering,
    pub decomposition: ForestDecomposition,
    pub index: CutIndex,
}

impl PipelineOutput {
    pub fn sparsifier_graph<'a>(&'a self, g: &'a MultiGraph) -> &'a MultiGraph {
        self.sparsifier.as_ref().map_or(g, |s| &s.graph)
    }
}

/// Query sets with sizes cycling through `1..=max(1, n/2)`.
pub fn query_sets(n: usize, count: usize, seed: u64) -> Vec<Vec<usize>> {
    if n == 0 {
        return Vec::new();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    let top = (n / 2).max(1);
    (0..count)
        .map(|i| {
            let k = 1 + i % top;
            sample(&mut rng, n, k).into_vec()
        })
        .collect()
}

pub fn run_pipeline(
    g: &MultiGraph,
    opts: &PipelineOptions,
) -> Result<PipelineOutput, PipelineError> {
    let cfg = opts.config;
    at("config", cfg.validate())?;
    let n = g.vertex_count();
    let eps = cfg.epsilon;

    let table = at("resistances", resistance_table(g))?;
    let foster_sum = foster_check(&table);
    let prob_sum: f64 = table.probability().iter().sum();

    let sparsifier = if opts.self_check {
        None
    } else {
        Some(at("sampling", sample_sparsifier(g, &table, &cfg))?)
    };
    let h = sparsifier.as_ref().map_or(g, |s| &s.graph);

    let similarity = at("certification", relative_spectrum(g, h))?;
    let spectral_pass = similarity.pass(eps);

    let comparability = if spectral_pass {
        Some(at("comparability", resistance_comparability(g, h, eps))?)
    } else {
        None
    };
    let density = match &sparsifier {
        Some(s) if spectral_pass => Some(at(
            "density",
            sparsifier_density_bound(s, g, &table, &similarity, opts.density_trials, cfg.seed),
        )?),
        _ => None,
    };

    let ordering = treelike_ordering(h);
    let ordering_verified = forward_degrees(h, &ordering.position) == ordering.forward_degree
        && ordering.forward_degree.iter().copied().max().unwrap_or(0)
            == ordering.max_forward_degree;
    let decomposition = at("decomposition", decompose_forests(h, &ordering))?;
    let forests_valid = verify_forest(h, &decomposition);
    let forest_bound = sparsifier
        .as_ref()
        .map(|s| 2.0 * density_bound_per_vertex(s, n));

    let index = at("index", build_index(h, &ordering))?;
    let mut scratch = index.scratch();
    let mut queries = Vec::with_capacity(opts.queries);
    for set in query_sets(n, opts.queries, cfg.seed) {
        let start = Instant::now();
        let q = at("query", index.boundary_instrumented(&mut scratch, &set))?;
        let wall_ns = start.elapsed().as_nanos();
        queries.push(QueryRow {
            k: q.k,
            scanned: q.scanned,
            boundary_h: q.boundary,
            exact_h: at("query", exact_boundary(h, &set))?,
            cut_g: at("query", exact_boundary(g, &set))?,
            degree_sum: q.degree_sum,
            wall_ns,
        });
    }

    let mfd = ordering.max_forward_degree;
    let query_exact = queries.iter().all(|r| {
        let scale = r.exact_h.abs().max(r.degree_sum).max(1.0);
        (r.boundary_h - r.exact_h).abs() <= 1e-12 * scale
    });
    let query_work = queries.iter().all(|r| r.scanned <= mfd * r.k);
    let cut_transfer = queries.iter().all(|r| {
        let tol = 1e-8 * (1.0 + r.cut_g);
        r.boundary_h >= r.cut_g / (1.0 + eps) - tol && r.boundary_h <= (1.0 + eps) * r.cut_g + tol
    });
    let conditional = |ok: Option<bool>| ok.map_or(Flag::Skip, Flag::from_bool);

    let flags = vec![
        (
            "foster",
            Flag::from_bool((foster_sum - (n as f64 - 1.0)).abs() <= 1e-8 * n.max(1) as f64),
        ),
        ("prob_sum", Flag::from_bool((prob_sum - 1.0).abs() <= 1e-10)),
        (
            "ordering",
            Flag::from_bool(
                ordering_verified
                    && ordering.ops as f64 <= ORDERING_ALPHA * (n + h.edge_count()) as f64,
            ),
        ),
        (
            "forests",
            Flag::from_bool(forests_valid && decomposition.k <= mfd),
        ),
        (
            "forest_bound",
            conditional(
                forest_bound
                    .filter(|_| spectral_pass)
                    .map(|b| decomposition.k as f64 <= b),
            ),
        ),
        (
            "comparability",
            conditional(comparability.as_ref().map(|c| c.holds)),
        ),
        ("density", conditional(density.as_ref().map(|d| d.holds))),
        ("query_exact", Flag::from_bool(query_exact)),
        ("query_work", Flag::from_bool(query_work)),
        (
            "cut_transfer",
            conditional(spectral_pass.then_some(cut_transfer)),
        ),
    ]
    .into_iter()
    .map(|(k, f)| (k.to_string(), f))
    .collect();

    let report = ExperimentReport {
        n,
        m: g.edge_count(),
        mode: cfg.mode.to_string(),
        epsilon: eps,
        c: cfg.c,
        seed: cfg.seed,
        merge: cfg.merge_output,
        self_check: opts.self_check,
        q: sparsifier.as_ref().map_or(0, |s| s.sample_count),
        q_ideal: if opts.self_check {
            0.0
        } else {
            cfg.ideal_sample_count(n)
        },
        sparsifier_edges: h.edge_count(),
        merged_edges: merge_parallel(h).edge_count(),
        foster_sum,
        prob_sum,
        lambda_min: similarity.lambda_min,
        lambda_max: similarity.lambda_max,
        achieved_epsilon: similarity.achieved_epsilon,
        spectral_pass,
        comparability_min: comparability.as_ref().map(|c| c.min_ratio),
        comparability_max: comparability.as_ref().map(|c| c.max_ratio),
        max_forward_degree: mfd,
        ordering_verified,
        ordering_ops: ordering.ops,
        index_build_ops: index.build_ops,
        forest_count: decomposition.k,
        forests_valid,
        forest_bound,
        density_max_ratio: density.as_ref().map(|d| d.max_ratio),
        density_bound_per_vertex: density.as_ref().map(|d| d.bound_per_vertex),
        density_subsets: density.as_ref().map(|d| d.subsets_checked),
        queries,
        flags,
    };

    Ok(PipelineOutput {
        report,
        table,
        sparsifier,
        similarity,
        ordering,
        decomposition,
        index,
    })
}
