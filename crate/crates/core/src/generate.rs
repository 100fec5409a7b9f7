//! Seeded test-graph generators.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{Edge, MultiGraph};

/// Redraws allowed for `gnp` before giving up on connectivity.
pub const GNP_RETRIES: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GraphKind {
    /// Erdős–Rényi `G(n, p)`, redrawn until connected.
    Gnp {
        p: f64,
    },
    /// `rows x cols` lattice; `n` is ignored.
    Grid {
        rows: usize,
        cols: usize,
    },
    Complete,
    /// Two cliques on `floor(n/2)` and `ceil(n/2)` vertices joined by one edge.
    Barbell,
    /// Uniform random attachment: vertex `i` links to a uniform earlier vertex.
    Tree,
}

impl fmt::Display for GraphKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphKind::Gnp { p } => write!(f, "gnp(p={p})"),
            GraphKind::Grid { rows, cols } => write!(f, "grid({rows}x{cols})"),
            GraphKind::Complete => f.write_str("complete"),
            GraphKind::Barbell => f.write_str("barbell"),
            GraphKind::Tree => f.write_str("tree"),
        }
    }
}

/// Kind name without parameters, as used on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KindName {
    Gnp,
    Grid,
    Complete,
    Barbell,
    Tree,
}

impl FromStr for KindName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "gnp" => KindName::Gnp,
            "grid" => KindName::Grid,
            "complete" => KindName::Complete,
            "barbell" => KindName::Barbell,
            "tree" => KindName::Tree,
            other => return Err(Error::Generation(format!("unknown graph kind {other:?}"))),
        })
    }
}

/// Conductances drawn uniformly from `[lo, hi]`; `lo == hi` gives constant weights.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Weights {
    pub lo: f64,
    pub hi: f64,
}

impl Weights {
    pub const UNIT: Weights = Weights { lo: 1.0, hi: 1.0 };

    pub fn uniform(lo: f64, hi: f64) -> Self {
        Weights { lo, hi }
    }

    fn draw(&self, rng: &mut impl Rng) -> f64 {
        if self.lo == self.hi {
            self.lo
        } else {
            rng.random_range(self.lo..=self.hi)
        }
    }
}

pub fn generate(kind: GraphKind, n: usize, weights: Weights, seed: u64) -> Result<MultiGraph> {
    if !(weights.lo > 0.0 && weights.lo <= weights.hi && weights.hi.is_finite()) {
        return Err(Error::Generation(format!(
            "weight range [{}, {}] must be positive and ordered",
            weights.lo, weights.hi
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (n, pairs) = match kind {
        GraphKind::Gnp { p } => {
            if !(p > 0.0 && p <= 1.0) {
                return Err(Error::Generation(format!("gnp needs p in (0, 1], got {p}")));
            }
            if n == 0 {
                return Err(Error::Generation("n must be at least 1".into()));
            }
            return gnp(n, p, weights, &mut rng);
        }
        GraphKind::Grid { rows, cols } => {
            if rows == 0 || cols == 0 {
                return Err(Error::Generation("grid needs positive dimensions".into()));
            }
            let id = |r: usize, c: usize| r * cols + c;
            let mut pairs = Vec::new();
            for r in 0..rows {
                for c in 0..cols {
                    if c + 1 < cols {
                        pairs.push((id(r, c), id(r, c + 1)));
                    }
                    if r + 1 < rows {
                        pairs.push((id(r, c), id(r + 1, c)));
                    }
                }
            }
            (rows * cols, pairs)
        }
        GraphKind::Complete => (n, clique(0, n)),
        GraphKind::Barbell => {
            let half = n / 2;
            let mut pairs = clique(0, half);
            pairs.extend(clique(half, n));
            if half > 0 && half < n {
                pairs.push((half - 1, half));
            }
            (n, pairs)
        }
        GraphKind::Tree => {
            let pairs = (1..n).map(|i| (rng.random_range(0..i), i)).collect();
            (n, pairs)
        }
    };
    if n == 0 {
        return Err(Error::Generation("n must be at least 1".into()));
    }
    let edges = pairs
        .into_iter()
        .map(|(u, v)| Edge::new(u, v, weights.draw(&mut rng)))
        .collect();
    MultiGraph::new(n, edges)
}

fn clique(lo: usize, hi: usize) -> Vec<(usize, usize)> {
    let mut pairs = Vec::new();
    for i in lo..hi {
        for j in (i + 1)..hi {
            pairs.push((i, j));
        }
    }
    pairs
}

fn gnp(n: usize, p: f64, weights: Weights, rng: &mut ChaCha8Rng) -> Result<MultiGraph> {
    for _ in 0..GNP_RETRIES {
        let mut edges = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                if rng.random::<f64>() < p {
                    edges.push(Edge::new(i, j, weights.draw(rng)));
                }
            }
        }
        let g = MultiGraph::new(n, edges)?;
        if g.is_connected() {
            return Ok(g);
        }
    }
    Err(Error::Generation(format!(
        "no connected G({n}, {p}) after {GNP_RETRIES} draws"
    )))
}
