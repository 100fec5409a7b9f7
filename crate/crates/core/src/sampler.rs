//! Effective-resistance edge sampling.
//!
//! Both routines draw `q` edges independently, with replacement, from
//! `p_e = R_e c_e / (n - 1)` and give each drawn copy the conductance
//! `c_e eps^2 / (D p_e)`, where `D = C n ln n` (SS) or `D = C n` (MSS). The
//! sample count is `q = ceil(D / eps^2)`, so `E[L_H] = (q eps^2 / D) L_G`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{laplacian, merge_parallel, Edge, Laplacian, MultiGraph};
use crate::resistance::ResistanceTable;

pub const DEFAULT_C: f64 = 4.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// `C n ln n / eps^2` samples.
    Ss,
    /// `C n / eps^2` samples.
    Mss,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Ss => "ss",
            Mode::Mss => "mss",
        })
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "ss" => Ok(Mode::Ss),
            "mss" => Ok(Mode::Mss),
            other => Err(Error::InvalidConfig(format!("unknown mode {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SamplerConfig {
    pub epsilon: f64,
    /// Oversampling constant, shared by the sample count and the reweighting.
    pub c: f64,
    pub mode: Mode,
    pub seed: u64,
    /// Collapse parallel copies in the output graph.
    pub merge_output: bool,
}

impl SamplerConfig {
    pub fn new(mode: Mode, epsilon: f64, c: f64, seed: u64) -> Self {
        SamplerConfig {
            epsilon,
            c,
            mode,
            seed,
            merge_output: false,
        }
    }

    pub fn merged(mut self, merge: bool) -> Self {
        self.merge_output = merge;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.epsilon > 0.0 && self.epsilon <= 1.0) {
            return Err(Error::InvalidConfig(format!(
                "epsilon must lie in (0, 1], got {}",
                self.epsilon
            )));
        }
        if !(self.c > 0.0 && self.c.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "C must be positive, got {}",
                self.c
            )));
        }
        Ok(())
    }

    /// `C n ln n` or `C n`.
    pub fn denominator(&self, n: usize) -> f64 {
        let n = n as f64;
        match self.mode {
            Mode::Ss => self.c * n * n.ln(),
            Mode::Mss => self.c * n,
        }
    }

    /// Unrounded sample count `D / eps^2`.
    pub fn ideal_sample_count(&self, n: usize) -> f64 {
        self.denominator(n) / (self.epsilon * self.epsilon)
    }

    pub fn sample_count(&self, n: usize) -> usize {
        let x = self.ideal_sample_count(n);
        // an exact integer nudged up by roundoff must not gain a sample
        (x * (1.0 - 1e-12)).ceil().max(0.0) as usize
    }

    /// Conductance assigned to one drawn copy of an edge.
    pub fn copy_conductance(&self, n: usize, conductance: f64, probability: f64) -> f64 {
        conductance * self.epsilon * self.epsilon / (self.denominator(n) * probability)
    }
}

/// One draw: which original edge was picked and the conductance its copy got.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Draw {
    pub edge: usize,
    pub conductance: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SampledSparsifier {
    pub graph: MultiGraph,
    pub sample_count: usize,
    pub draws: Vec<Draw>,
    pub config: SamplerConfig,
}

/// Draws a sparsifier of `g`. Deterministic in `cfg.seed`.
pub fn sample_sparsifier(
    g: &MultiGraph,
    t: &ResistanceTable,
    cfg: &SamplerConfig,
) -> Result<SampledSparsifier> {
    cfg.validate()?;
    t.check_matches(g)?;
    if !g.is_connected() {
        return Err(Error::Disconnected {
            components: crate::graph::connected_components(g).len(),
        });
    }
    let n = g.vertex_count();
    let q = if g.edge_count() == 0 {
        0
    } else {
        cfg.sample_count(n)
    };

    let mut cumulative = Vec::with_capacity(t.len());
    let mut acc = 0.0;
    for p in t.probability() {
        acc += p;
        cumulative.push(acc);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut draws = Vec::with_capacity(q);
    let mut copies = Vec::with_capacity(q);
    for _ in 0..q {
        let u: f64 = rng.random::<f64>() * acc;
        let idx = cumulative
            .partition_point(|&c| c <= u)
            .min(cumulative.len() - 1);
        let e = g.edge(idx);
        let w = cfg.copy_conductance(n, e.conductance, t.probability()[idx]);
        draws.push(Draw {
            edge: idx,
            conductance: w,
        });
        copies.push(Edge::new(e.u, e.v, w));
    }

    let mut graph = MultiGraph::new(n, copies)?;
    if cfg.merge_output {
        graph = merge_parallel(&graph);
    }
    Ok(SampledSparsifier {
        graph,
        sample_count: q,
        draws,
        config: *cfg,
    })
}

/// `q * sum_e p_e w_e L_e`, the exact mean of the sampled Laplacian.
pub fn expected_laplacian(
    g: &MultiGraph,
    t: &ResistanceTable,
    cfg: &SamplerConfig,
) -> Result<Laplacian> {
    cfg.validate()?;
    t.check_matches(g)?;
    let n = g.vertex_count();
    let q = cfg.sample_count(n) as f64;
    let weighted: Vec<Edge> = g
        .edges()
        .iter()
        .zip(t.probability())
        .map(|(e, &p)| Edge::new(e.u, e.v, q * p * cfg.copy_conductance(n, e.conductance, p)))
        .collect();
    Ok(laplacian(&MultiGraph::new(n, weighted)?))
}

/// Draw count per original edge index.
pub fn sampler_histogram(s: &SampledSparsifier) -> BTreeMap<usize, usize> {
    let mut counts = BTreeMap::new();
    for d in &s.draws {
        *counts.entry(d.edge).or_insert(0) += 1;
    }
    counts
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::resistance::resistance_table;

    fn triangle() -> MultiGraph {
        MultiGraph::from_triples(3, &[(0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0)]).unwrap()
    }

    #[test]
    fn mss_triangle_counts_and_weights() {
        let g = triangle();
        let t = resistance_table(&g).unwrap();
        let cfg = SamplerConfig::new(Mode::Mss, 1.0, 2.0, 7);
        let s = sample_sparsifier(&g, &t, &cfg).unwrap();
        assert_eq!(s.sample_count, 6);
        assert_eq!(s.draws.len(), 6);
        assert_eq!(s.graph.edge_count(), 6);
        for d in &s.draws {
            assert!((d.conductance - 0.5).abs() < 1e-12);
        }
    }

    #[test]
    fn ss_triangle_count() {
        let cfg = SamplerConfig::new(Mode::Ss, 0.5, 2.0, 0);
        // 2 * 3 * ln 3 / 0.25 = 26.366...
        assert_eq!(cfg.sample_count(3), 27);
    }

    #[test]
    fn invalid_configs() {
        let g = triangle();
        let t = resistance_table(&g).unwrap();
        for cfg in [
            SamplerConfig::new(Mode::Ss, 0.0, 1.0, 0),
            SamplerConfig::new(Mode::Ss, -1.0, 1.0, 0),
            SamplerConfig::new(Mode::Ss, 1.5, 1.0, 0),
            SamplerConfig::new(Mode::Ss, f64::NAN, 1.0, 0),
            SamplerConfig::new(Mode::Ss, 0.5, 0.0, 0),
            SamplerConfig::new(Mode::Mss, 0.5, f64::NAN, 0),
        ] {
            assert!(matches!(
                sample_sparsifier(&g, &t, &cfg),
                Err(Error::InvalidConfig(_))
            ));
        }
        let other = MultiGraph::from_triples(3, &[(0, 1, 1.0), (1, 2, 1.0)]).unwrap();
        let cfg = SamplerConfig::new(Mode::Ss, 0.5, 1.0, 0);
        assert!(matches!(
            sample_sparsifier(&other, &t, &cfg),
            Err(Error::TableMismatch(_))
        ));
    }

    #[test]
    fn mode_parsing() {
        assert_eq!("SS".parse::<Mode>().unwrap(), Mode::Ss);
        assert_eq!("mss".parse::<Mode>().unwrap(), Mode::Mss);
        assert!("bss".parse::<Mode>().is_err());
        assert_eq!(Mode::Mss.to_string(), "mss");
    }

    #[test]
    fn expected_laplacian_triangle_is_exact() {
        let g = triangle();
        let t = resistance_table(&g).unwrap();
        let cfg = SamplerConfig::new(Mode::Mss, 1.0, 2.0, 0);
        let e = expected_laplacian(&g, &t, &cfg).unwrap();
        let l = laplacian(&g);
        for i in 0..3 {
            for j in 0..3 {
                assert!((e.get(i, j) - l.get(i, j)).abs() <= 1e-9 * l.get(i, j).abs());
            }
        }
    }

    #[test]
    fn expected_laplacian_ceiling_scale() {
        let g = triangle();
        let t = resistance_table(&g).unwrap();
        let cfg = SamplerConfig::new(Mode::Ss, 0.5, 2.0, 0);
        let e = expected_laplacian(&g, &t, &cfg).unwrap();
        let ratio = 27.0 / (2.0 * 3.0 * 3f64.ln() / 0.25);
        let l = laplacian(&g);
        for i in 0..3 {
            for j in 0..3 {
                let want = l.get(i, j) * ratio;
                assert!((e.get(i, j) - want).abs() <= 1e-9 * want.abs());
            }
        }
    }

    #[test]
    fn histogram_counts() {
        let g = triangle();
        let cfg = SamplerConfig::new(Mode::Mss, 1.0, 1.0, 0);
        let empty = SampledSparsifier {
            graph: MultiGraph::empty(3),
            sample_count: 0,
            draws: vec![],
            config: cfg,
        };
        assert!(sampler_histogram(&empty).is_empty());

        let known = SampledSparsifier {
            graph: g,
            sample_count: 4,
            draws: [2, 0, 2, 2]
                .iter()
                .map(|&edge| Draw {
                    edge,
                    conductance: 1.0,
                })
                .collect(),
            config: cfg,
        };
        let h = sampler_histogram(&known);
        assert_eq!(h.get(&0), Some(&1));
        assert_eq!(h.get(&1), None);
        assert_eq!(h.get(&2), Some(&3));
    }

    #[test]
    fn triangle_frequencies_within_binomial_band() {
        let g = triangle();
        let t = resistance_table(&g).unwrap();
        let cfg = SamplerConfig::new(Mode::Mss, 0.05, 10.0, 99);
        let s = sample_sparsifier(&g, &t, &cfg).unwrap();
        let q = s.sample_count as f64;
        let sigma = (q * (1.0 / 3.0) * (2.0 / 3.0)).sqrt();
        let h = sampler_histogram(&s);
        assert_eq!(h.values().sum::<usize>(), s.sample_count);
        for idx in 0..3 {
            let count = *h.get(&idx).unwrap_or(&0) as f64;
            assert!(
                (count - q / 3.0).abs() <= 3.0 * sigma,
                "edge {idx}: {count} of {q}"
            );
        }
    }

    #[test]
    fn merge_output_keeps_laplacian() {
        let g = triangle();
        let t = resistance_table(&g).unwrap();
        let cfg = SamplerConfig::new(Mode::Ss, 0.5, 2.0, 3);
        let raw = sample_sparsifier(&g, &t, &cfg).unwrap();
        let merged = sample_sparsifier(&g, &t, &cfg.merged(true)).unwrap();
        assert_eq!(raw.draws, merged.draws);
        assert!(merged.graph.edge_count() <= 3);
        assert_eq!(laplacian(&raw.graph), laplacian(&merged.graph));
    }
}
