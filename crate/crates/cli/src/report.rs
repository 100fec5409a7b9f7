//! Experiment report: `key value` lines, deterministic given inputs and seed.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};

use spectral_forests::textio::fmt_real;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Flag {
    Pass,
    Fail,
    /// The check depends on a spectral certificate that was not obtained.
    Skip,
}

impl Flag {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Flag::Pass
        } else {
            Flag::Fail
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "pass" => Some(Flag::Pass),
            "fail" => Some(Flag::Fail),
            "skip" => Some(Flag::Skip),
            _ => None,
        }
    }
}

impl fmt::Display for Flag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Flag::Pass => "pass",
            Flag::Fail => "fail",
            Flag::Skip => "skip",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct QueryRow {
    pub k: usize,
    pub scanned: usize,
    pub boundary_h: f64,
    pub exact_h: f64,
    pub cut_g: f64,
    pub degree_sum: f64,
    /// Informational; never written to the machine-readable report.
    pub wall_ns: u128,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentReport {
    pub n: usize,
    pub m: usize,
    pub mode: String,
    pub epsilon: f64,
    pub c: f64,
    pub seed: u64,
    pub merge: bool,
    pub self_check: bool,
    pub q: usize,
    pub q_ideal: f64,
    pub sparsifier_edges: usize,
    /// Distinct vertex pairs in the sparsifier.
    pub merged_edges: usize,
    pub foster_sum: f64,
    pub prob_sum: f64,
    pub lambda_min: f64,
    pub lambda_max: f64,
    pub achieved_epsilon: f64,
    pub spectral_pass: bool,
    pub comparability_min: Option<f64>,
    pub comparability_max: Option<f64>,
    pub max_forward_degree: usize,
    pub ordering_verified: bool,
    pub ordering_ops: usize,
    pub index_build_ops: usize,
    pub forest_count: usize,
    pub forests_valid: bool,
    /// `2 (1+eps) 2C [ln n] / eps^2`; absent in self-check mode.
    pub forest_bound: Option<f64>,
    pub density_max_ratio: Option<f64>,
    pub density_bound_per_vertex: Option<f64>,
    pub density_subsets: Option<usize>,
    pub queries: Vec<QueryRow>,
    /// In a fixed order; see [`crate::check::FLAG_NAMES`].
    pub flags: Vec<(String, Flag)>,
}

fn opt_real(x: Option<f64>) -> String {
    x.map_or_else(|| "none".to_string(), fmt_real)
}

impl ExperimentReport {
    pub fn all_pass(&self) -> bool {
        self.flags.iter().all(|(_, f)| *f != Flag::Fail)
    }

    /// Machine-readable form.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let mut kv = |k: &str, v: String| writeln!(out, "{k} {v}").unwrap();
        kv("n", self.n.to_string());
        kv("m", self.m.to_string());
        kv("mode", self.mode.clone());
        kv("epsilon", fmt_real(self.epsilon));
        kv("C", fmt_real(self.c));
        kv("seed", self.seed.to_string());
        kv("merge", self.merge.to_string());
        kv("self_check", self.self_check.to_string());
        kv("q", self.q.to_string());
        kv("q_ideal", fmt_real(self.q_ideal));
        kv("sparsifier_edges", self.sparsifier_edges.to_string());
        kv("merged_edges", self.merged_edges.to_string());
        kv("foster_sum", fmt_real(self.foster_sum));
        kv("prob_sum", fmt_real(self.prob_sum));
        kv("lambda_min", fmt_real(self.lambda_min));
        kv("lambda_max", fmt_real(self.lambda_max));
        kv("achieved_epsilon", fmt_real(self.achieved_epsilon));
        kv("spectral_pass", self.spectral_pass.to_string());
        kv("comparability_min", opt_real(self.comparability_min));
        kv("comparability_max", opt_real(self.comparability_max));
        kv("max_forward_degree", self.max_forward_degree.to_string());
        kv("ordering_verified", self.ordering_verified.to_string());
        kv("ordering_ops", self.ordering_ops.to_string());
        kv("index_build_ops", self.index_build_ops.to_string());
        kv("forest_count", self.forest_count.to_string());
        kv("forests_valid", self.forests_valid.to_string());
        kv("forest_bound", opt_real(self.forest_bound));
        kv("density_max_ratio", opt_real(self.density_max_ratio));
        kv(
            "density_bound_per_vertex",
            opt_real(self.density_bound_per_vertex),
        );
        kv(
            "density_subsets",
            self.density_subsets
                .map_or_else(|| "none".to_string(), |s| s.to_string()),
        );
        kv("queries", self.queries.len().to_string());
        for (i, r) in self.queries.iter().enumerate() {
            kv(
                &format!("query.{i}"),
                format!(
                    "{} {} {} {} {} {}",
                    r.k,
                    r.scanned,
                    fmt_real(r.boundary_h),
                    fmt_real(r.exact_h),
                    fmt_real(r.cut_g),
                    fmt_real(r.degree_sum)
                ),
            );
        }
        for (name, flag) in &self.flags {
            kv(&format!("flag.{name}"), flag.to_string());
        }
        out
    }

    /// Human-readable summary, including the query timing table.
    pub fn summary(&self) -> String {
        let mut out = String::new();
        let w = &mut out;
        writeln!(w, "graph            n={} m={}", self.n, self.m).unwrap();
        if self.self_check {
            writeln!(w, "sampler          self-check (H = G)").unwrap();
        } else {
            writeln!(
                w,
                "sampler          mode={} eps={} C={} seed={} q={} (ideal {:.2}) merged={}",
                self.mode, self.epsilon, self.c, self.seed, self.q, self.q_ideal, self.merge
            )
            .unwrap();
        }
        writeln!(
            w,
            "sparsifier edges {} ({} distinct pairs)",
            self.sparsifier_edges, self.merged_edges
        )
        .unwrap();
        writeln!(
            w,
            "spectrum         lambda in [{:.6}, {:.6}], achieved eps {:.6}, pass at {}: {}",
            self.lambda_min,
            self.lambda_max,
            self.achieved_epsilon,
            self.epsilon,
            self.spectral_pass
        )
        .unwrap();
        writeln!(
            w,
            "ordering         max forward degree {} ({} ops), index build {} ops",
            self.max_forward_degree, self.ordering_ops, self.index_build_ops
        )
        .unwrap();
        match self.forest_bound {
            Some(b) => writeln!(
                w,
                "forests          k={} (bound {b:.1}), valid={}",
                self.forest_count, self.forests_valid
            ),
            None => writeln!(
                w,
                "forests          k={}, valid={}",
                self.forest_count, self.forests_valid
            ),
        }
        .unwrap();
        if let Some(r) = self.density_max_ratio {
            writeln!(w, "density          worst edges/bound ratio {r:.4}").unwrap();
        }

        let mut by_k: BTreeMap<usize, (usize, usize, u128)> = BTreeMap::new();
        for r in &self.queries {
            let e = by_k.entry(r.k).or_default();
            e.0 += 1;
            e.1 += r.scanned;
            e.2 += r.wall_ns;
        }
        if !by_k.is_empty() {
            writeln!(
                w,
                "\n{:>6} {:>8} {:>14} {:>12}",
                "k", "queries", "mean scanned", "mean ns"
            )
            .unwrap();
            for (k, (count, scanned, ns)) in by_k {
                writeln!(
                    w,
                    "{:>6} {:>8} {:>14.1} {:>12.0}",
                    k,
                    count,
                    scanned as f64 / count as f64,
                    ns as f64 / count as f64
                )
                .unwrap();
            }
        }
        writeln!(w).unwrap();
        for (name, flag) in &self.flags {
            writeln!(w, "flag {name:<14} {flag}").unwrap();
        }
        out
    }
}
