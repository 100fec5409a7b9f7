#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use spectral_forests::generate::{generate, GraphKind, Weights};
use spectral_forests::graph::{Edge, MultiGraph};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Connected Erdős–Rényi graph with `p = 2 ln n / n` and conductances in [0.1, 10].
pub fn random_connected(n: usize, seed: u64) -> MultiGraph {
    let p = (2.0 * (n as f64).ln() / n as f64).min(1.0);
    generate(GraphKind::Gnp { p }, n, Weights::uniform(0.1, 10.0), seed).unwrap()
}

/// Random multigraph (parallel edges likely) with `m` edges on `n >= 2` vertices.
pub fn random_multigraph(n: usize, m: usize, seed: u64) -> MultiGraph {
    let mut r = rng(seed);
    let edges = (0..m)
        .map(|_| {
            let u = r.random_range(0..n);
            let mut v = r.random_range(0..n - 1);
            if v >= u {
                v += 1;
            }
            Edge::new(u, v, r.random_range(0.1..10.0))
        })
        .collect();
    MultiGraph::new(n, edges).unwrap()
}

/// Effective resistance by grounding `j` and solving the reduced Laplacian
/// system with Gaussian elimination; shares nothing with the eigen route.
pub fn grounded_resistance(g: &MultiGraph, i: usize, j: usize) -> f64 {
    let n = g.vertex_count();
    let idx = |v: usize| if v < j { v } else { v - 1 };
    let k = n - 1;
    let mut a = vec![vec![0.0f64; k + 1]; k];
    for e in g.edges() {
        for (x, y) in [(e.u, e.v), (e.v, e.u)] {
            if x == j {
                continue;
            }
            a[idx(x)][idx(x)] += e.conductance;
            if y != j {
                a[idx(x)][idx(y)] -= e.conductance;
            }
        }
    }
    a[idx(i)][k] = 1.0;
    for col in 0..k {
        let piv = (col..k)
            .max_by(|&p, &q| a[p][col].abs().total_cmp(&a[q][col].abs()))
            .unwrap();
        a.swap(col, piv);
        for row in 0..k {
            if row != col {
                let f = a[row][col] / a[col][col];
                if f != 0.0 {
                    for c in col..=k {
                        a[row][c] -= f * a[col][c];
                    }
                }
            }
        }
    }
    a[idx(i)][k] / a[idx(i)][idx(i)]
}

/// Internal weight of `mask` by edge scan.
pub fn internal_weight(g: &MultiGraph, mask: &[bool]) -> f64 {
    g.edges()
        .iter()
        .filter(|e| mask[e.u] && mask[e.v])
        .map(|e| e.conductance)
        .sum()
}

pub fn subset_of(mask: usize, n: usize) -> Vec<usize> {
    (0..n).filter(|v| mask >> v & 1 == 1).collect()
}

/// Random nonempty subset of `[0, n)` with size uniform in `[1, max_size]`.
pub fn random_subset(r: &mut ChaCha8Rng, n: usize, max_size: usize) -> Vec<usize> {
    use rand::seq::SliceRandom;
    let size = r.random_range(1..=max_size.min(n));
    let mut all: Vec<usize> = (0..n).collect();
    all.shuffle(r);
    all.truncate(size);
    all
}

/// Random vector orthogonal to the all-ones vector.
pub fn random_centered(r: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    let mut x: Vec<f64> = (0..n).map(|_| r.random_range(-1.0..1.0)).collect();
    let mean = x.iter().sum::<f64>() / n as f64;
    for v in &mut x {
        *v -= mean;
    }
    x
}

pub fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1e-300)
}
