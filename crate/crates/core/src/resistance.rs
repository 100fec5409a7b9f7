//! Effective resistances from the Moore–Penrose pseudoinverse of a Laplacian,
//! and the leverage-score sampling distribution built on them.
//!
//! Resistance between `i` and `j` is the voltage drop when one unit of current
//! enters at `i` and leaves at `j`: `chi^T L^+ chi` with `chi = e_i - e_j`.
//! With this convention the leverage scores `R_e c_e` of a connected graph sum
//! to exactly `n - 1`.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::error::{Error, Result};
use crate::graph::{laplacian, membership, Laplacian, MultiGraph, VertexId};

/// Eigenvalues at or below `EIGEN_CUTOFF * lambda_max` are treated as zero.
pub const EIGEN_CUTOFF: f64 = 1e-10;

/// Pseudoinverse of a connected graph's Laplacian together with the
/// eigendecomposition it came from.
#[derive(Debug, Clone)]
pub struct PseudoInverse {
    matrix: DMatrix<f64>,
    cutoff: f64,
    eigenvalues: DVector<f64>,
    eigenvectors: DMatrix<f64>,
}

impl PseudoInverse {
    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// Absolute threshold below which eigenvalues were zeroed.
    pub fn cutoff(&self) -> f64 {
        self.cutoff
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.matrix[(i, j)]
    }

    /// `x^T L^+ x`.
    pub fn quadratic_form(&self, x: &[f64]) -> f64 {
        let v = DVector::from_column_slice(x);
        v.dot(&(&self.matrix * &v))
    }

    /// Orthonormal basis of the range of `L` (columns) and the matching
    /// eigenvalues, in ascending order.
    pub fn range(&self) -> (DMatrix<f64>, Vec<f64>) {
        let keep: Vec<usize> = (0..self.eigenvalues.len())
            .filter(|&k| self.eigenvalues[k] > self.cutoff)
            .collect();
        let mut basis = DMatrix::zeros(self.dim(), keep.len());
        for (col, &k) in keep.iter().enumerate() {
            basis.set_column(col, &self.eigenvectors.column(k));
        }
        let values = keep.iter().map(|&k| self.eigenvalues[k]).collect();
        (basis, values)
    }

    /// `(L^+)^{1/2}`, using square roots of the same nonzero eigenvalues.
    pub fn sqrt(&self) -> DMatrix<f64> {
        let (basis, values) = self.range();
        let scale = DVector::from_iterator(values.len(), values.iter().map(|l| 1.0 / l.sqrt()));
        let scaled = &basis * DMatrix::from_diagonal(&scale);
        scaled * basis.transpose()
    }
}

/// Dense pseudoinverse via symmetric eigendecomposition.
///
/// Rejects Laplacians with more than one (numerically) zero eigenvalue, i.e.
/// disconnected graphs.
pub fn pseudo_inverse(lap: &Laplacian) -> Result<PseudoInverse> {
    let n = lap.dim();
    if n == 0 {
        return Ok(PseudoInverse {
            matrix: DMatrix::zeros(0, 0),
            cutoff: 0.0,
            eigenvalues: DVector::zeros(0),
            eigenvectors: DMatrix::zeros(0, 0),
        });
    }
    let eig = SymmetricEigen::new(lap.matrix().clone());
    // nalgebra leaves eigenvalues unsorted; order them ascending for stable output
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let eigenvalues = DVector::from_iterator(n, order.iter().map(|&k| eig.eigenvalues[k]));
    let mut eigenvectors = DMatrix::zeros(n, n);
    for (col, &k) in order.iter().enumerate() {
        eigenvectors.set_column(col, &eig.eigenvectors.column(k));
    }

    let lambda_max = eigenvalues[n - 1].max(0.0);
    let cutoff = EIGEN_CUTOFF * lambda_max;
    let zero_count = eigenvalues.iter().filter(|&&l| l <= cutoff).count();
    if zero_count > 1 {
        return Err(Error::Disconnected {
            components: zero_count,
        });
    }

    let mut matrix = DMatrix::zeros(n, n);
    for k in 0..n {
        let l = eigenvalues[k];
        if l <= cutoff {
            continue;
        }
        let u = eigenvectors.column(k);
        matrix += (u * u.transpose()) / l;
    }
    // symmetrize away rank-one roundoff
    let matrix = (&matrix + matrix.transpose()) * 0.5;
    Ok(PseudoInverse {
        matrix,
        cutoff,
        eigenvalues,
        eigenvectors,
    })
}

/// Length-`n` vector with `+1` at `i`, `-1` at `j`.
#[derive(Debug, Clone, PartialEq)]
pub struct IndicatorVector(Vec<f64>);

impl IndicatorVector {
    pub fn new(n: usize, i: VertexId, j: VertexId) -> Result<Self> {
        for x in [i, j] {
            if x >= n {
                return Err(Error::VertexOutOfRange { vertex: x, n });
            }
        }
        if i == j {
            return Err(Error::SameEndpoint(i));
        }
        let mut v = vec![0.0; n];
        v[i] = 1.0;
        v[j] = -1.0;
        Ok(IndicatorVector(v))
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }
}

/// `L^+_ii + L^+_jj - 2 L^+_ij`.
pub fn effective_resistance(pinv: &PseudoInverse, i: VertexId, j: VertexId) -> Result<f64> {
    let n = pinv.dim();
    for x in [i, j] {
        if x >= n {
            return Err(Error::VertexOutOfRange { vertex: x, n });
        }
    }
    if i == j {
        return Err(Error::SameEndpoint(i));
    }
    Ok(pinv.get(i, i) + pinv.get(j, j) - 2.0 * pinv.get(i, j))
}

/// Per-edge effective resistance, leverage `R_e c_e` and sampling probability.
#[derive(Debug, Clone, PartialEq)]
pub struct ResistanceTable {
    n: usize,
    resistance: Vec<f64>,
    leverage: Vec<f64>,
    probability: Vec<f64>,
}

impl ResistanceTable {
    /// Table from caller-supplied resistance estimates (one per edge), for
    /// sampling by approximate resistances. Probabilities are normalized by
    /// the total estimated leverage rather than by `n - 1`.
    pub fn from_estimates(g: &MultiGraph, estimates: &[f64]) -> Result<Self> {
        if estimates.len() != g.edge_count() {
            return Err(Error::TableMismatch(format!(
                "{} estimates for {} edges",
                estimates.len(),
                g.edge_count()
            )));
        }
        if let Some(bad) = estimates.iter().find(|r| !(**r > 0.0 && r.is_finite())) {
            return Err(Error::TableMismatch(format!(
                "resistance estimate {bad} is not positive"
            )));
        }
        let leverage: Vec<f64> = g
            .edges()
            .iter()
            .zip(estimates)
            .map(|(e, r)| r * e.conductance)
            .collect();
        let total: f64 = leverage.iter().sum();
        let probability = leverage.iter().map(|l| l / total).collect();
        Ok(ResistanceTable {
            n: g.vertex_count(),
            resistance: estimates.to_vec(),
            leverage,
            probability,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.resistance.len()
    }

    pub fn is_empty(&self) -> bool {
        self.resistance.is_empty()
    }

    pub fn resistance(&self) -> &[f64] {
        &self.resistance
    }

    pub fn leverage(&self) -> &[f64] {
        &self.leverage
    }

    pub fn probability(&self) -> &[f64] {
        &self.probability
    }

    /// Checks that this table was built for a graph shaped like `g`.
    pub fn check_matches(&self, g: &MultiGraph) -> Result<()> {
        if self.n != g.vertex_count() || self.len() != g.edge_count() {
            return Err(Error::TableMismatch(format!(
                "table is for n={} m={}, graph has n={} m={}",
                self.n,
                self.len(),
                g.vertex_count(),
                g.edge_count()
            )));
        }
        Ok(())
    }
}

/// Exact resistance table. Parallel edges get their own entries.
pub fn resistance_table(g: &MultiGraph) -> Result<ResistanceTable> {
    if !g.is_connected() {
        return Err(Error::Disconnected {
            components: crate::graph::connected_components(g).len(),
        });
    }
    let pinv = pseudo_inverse(&laplacian(g))?;
    let n = g.vertex_count();
    let mut resistance = Vec::with_capacity(g.edge_count());
    for e in g.edges() {
        resistance.push(effective_resistance(&pinv, e.u, e.v)?);
    }
    let leverage: Vec<f64> = g
        .edges()
        .iter()
        .zip(&resistance)
        .map(|(e, r)| r * e.conductance)
        .collect();
    let denom = (n - 1) as f64;
    let probability = leverage.iter().map(|l| l / denom).collect();
    Ok(ResistanceTable {
        n,
        resistance,
        leverage,
        probability,
    })
}

/// `sum_e R_e c_e`; equals `n - 1` for a connected graph.
pub fn foster_check(t: &ResistanceTable) -> f64 {
    t.leverage.iter().sum()
}

/// `sum R_e(G) c_e` over edges with both endpoints in `subset`; at most
/// `|subset| - 1`.
pub fn subgraph_leverage_sum(
    g: &MultiGraph,
    t: &ResistanceTable,
    subset: &[VertexId],
) -> Result<f64> {
    t.check_matches(g)?;
    let mask = membership(g.vertex_count(), subset)?;
    Ok(g.edges()
        .iter()
        .zip(t.leverage())
        .filter(|(e, _)| mask[e.u] && mask[e.v])
        .map(|(_, l)| l)
        .sum())
}
