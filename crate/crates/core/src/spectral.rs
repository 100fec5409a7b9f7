//! Certifying spectral similarity of two graphs on the same vertex set.
//!
//! `H` is a `(1+eps)`-approximation of `G` when, for every `x`,
//! `x^T L_G x / (1+eps) <= x^T L_H x <= (1+eps) x^T L_G x`. Equivalently every
//! eigenvalue of `(L_G^+)^{1/2} L_H (L_G^+)^{1/2}` on the range of `L_G` lies in
//! `[1/(1+eps), 1+eps]`.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::error::{Error, Result};
use crate::graph::{laplacian, MultiGraph};
use crate::resistance::{effective_resistance, pseudo_inverse};

/// Relative slack on both sides of the pass test, absorbing eigensolver roundoff.
pub const PASS_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimilarityReport {
    pub lambda_min: f64,
    pub lambda_max: f64,
    /// `max(lambda_max - 1, 1/lambda_min - 1)`; infinite when `H` misses a
    /// direction `G` has.
    pub achieved_epsilon: f64,
}

impl SimilarityReport {
    fn from_extremes(lambda_min: f64, lambda_max: f64) -> Self {
        let low = if lambda_min > 0.0 {
            1.0 / lambda_min - 1.0
        } else {
            f64::INFINITY
        };
        SimilarityReport {
            lambda_min,
            lambda_max,
            achieved_epsilon: (lambda_max - 1.0).max(low),
        }
    }

    /// Whether the sandwich holds at `epsilon`.
    pub fn pass(&self, epsilon: f64) -> bool {
        let hi = 1.0 + epsilon;
        self.lambda_max <= hi * (1.0 + PASS_SLACK)
            && self.lambda_min >= (1.0 / hi) * (1.0 - PASS_SLACK)
    }
}

/// Extreme relative eigenvalues of `L_H` against `L_G`, restricted to the
/// range of `L_G`.
pub fn relative_spectrum(g: &MultiGraph, h: &MultiGraph) -> Result<SimilarityReport> {
    if g.vertex_count() != h.vertex_count() {
        return Err(Error::VertexCountMismatch {
            left: g.vertex_count(),
            right: h.vertex_count(),
        });
    }
    if !g.is_connected() {
        return Err(Error::Disconnected {
            components: crate::graph::connected_components(g).len(),
        });
    }
    let pinv = pseudo_inverse(&laplacian(g))?;
    let (basis, values) = pinv.range();
    if values.is_empty() {
        // single vertex: both forms vanish identically
        return Ok(SimilarityReport::from_extremes(1.0, 1.0));
    }
    // B = D^{-1/2} U^T L_H U D^{-1/2}, where L_G = U D U^T on its range
    let inv_sqrt = DVector::from_iterator(values.len(), values.iter().map(|l| 1.0 / l.sqrt()));
    let half = &basis * DMatrix::from_diagonal(&inv_sqrt);
    let lh = laplacian(h);
    let b = half.transpose() * lh.matrix() * &half;
    let b = (&b + b.transpose()) * 0.5;
    let eig = SymmetricEigen::new(b);
    let lambda_min = eig
        .eigenvalues
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min);
    let lambda_max = eig
        .eigenvalues
        .iter()
        .copied()
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(SimilarityReport::from_extremes(lambda_min, lambda_max))
}

/// `(x^T L_G x, x^T L_H x)`.
pub fn quadratic_form_check(g: &MultiGraph, h: &MultiGraph, x: &[f64]) -> Result<(f64, f64)> {
    if g.vertex_count() != h.vertex_count() {
        return Err(Error::VertexCountMismatch {
            left: g.vertex_count(),
            right: h.vertex_count(),
        });
    }
    if x.len() != g.vertex_count() {
        return Err(Error::LengthMismatch {
            expected: g.vertex_count(),
            got: x.len(),
        });
    }
    Ok((
        laplacian(g).quadratic_form(x),
        laplacian(h).quadratic_form(x),
    ))
}

/// Resistance ratios `R_e(H) / R_e(G)` for every edge of `H`.
#[derive(Debug, Clone, PartialEq)]
pub struct ComparabilityReport {
    pub ratios: Vec<f64>,
    pub min_ratio: f64,
    pub max_ratio: f64,
    /// Every ratio lies in `[1/(1+eps), 1+eps]` up to `1e-8` relative slack.
    pub holds: bool,
}

impl ComparabilityReport {
    /// The ratio farthest from 1 on a log scale.
    pub fn worst_ratio(&self) -> f64 {
        if self.max_ratio.ln().abs() >= self.min_ratio.ln().abs() {
            self.max_ratio
        } else {
            self.min_ratio
        }
    }
}

/// Checks that a certified `(1+eps)`-approximation distorts every edge's
/// effective resistance by at most `1+eps` either way. Fails if `H` is not
/// certified at `epsilon`.
pub fn resistance_comparability(
    g: &MultiGraph,
    h: &MultiGraph,
    epsilon: f64,
) -> Result<ComparabilityReport> {
    let report = relative_spectrum(g, h)?;
    if !report.pass(epsilon) {
        return Err(Error::Precondition(format!(
            "H is not certified at epsilon {epsilon} (achieved {})",
            report.achieved_epsilon
        )));
    }
    let pg = pseudo_inverse(&laplacian(g))?;
    let ph = pseudo_inverse(&laplacian(h))?;
    let mut ratios = Vec::with_capacity(h.edge_count());
    for e in h.edges() {
        let rg = effective_resistance(&pg, e.u, e.v)?;
        let rh = effective_resistance(&ph, e.u, e.v)?;
        ratios.push(rh / rg);
    }
    let min_ratio = ratios.iter().copied().fold(f64::INFINITY, f64::min);
    let max_ratio = ratios.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let hi = 1.0 + epsilon;
    let holds = ratios
        .iter()
        .all(|&r| r >= (1.0 / hi) * (1.0 - 1e-8) && r <= hi * (1.0 + 1e-8));
    Ok(ComparabilityReport {
        ratios,
        min_ratio,
        max_ratio,
        holds,
    })
}
