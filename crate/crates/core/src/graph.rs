//! Weighted undirected multigraphs, their Laplacians, and brute-force oracles
//! (cuts, induced subgraphs, components) the rest of the crate checks against.

use indexmap::IndexMap;
use nalgebra::DMatrix;
use petgraph::unionfind::UnionFind;

use crate::error::{Error, Result};

/// Dense vertex index in `[0, n)`.
pub type VertexId = usize;

/// An undirected edge carrying a conductance (the reciprocal of its resistance).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub u: VertexId,
    pub v: VertexId,
    pub conductance: f64,
}

impl Edge {
    pub fn new(u: VertexId, v: VertexId, conductance: f64) -> Self {
        Edge { u, v, conductance }
    }

    /// Endpoints with the smaller id first.
    pub fn key(&self) -> (VertexId, VertexId) {
        if self.u <= self.v {
            (self.u, self.v)
        } else {
            (self.v, self.u)
        }
    }

    pub fn resistance(&self) -> f64 {
        1.0 / self.conductance
    }

    /// The endpoint opposite to `x`.
    pub fn other(&self, x: VertexId) -> VertexId {
        if self.u == x {
            self.v
        } else {
            self.u
        }
    }
}

/// Weighted undirected multigraph. Parallel edges are allowed, self-loops are not.
///
/// An edge's identity is its position in [`MultiGraph::edges`]; that order is
/// preserved by every transformation in this crate.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiGraph {
    n: usize,
    edges: Vec<Edge>,
    // incident edge indices per vertex, in edge-list order
    incident: Vec<Vec<usize>>,
}

impl MultiGraph {
    pub fn new(n: usize, edges: Vec<Edge>) -> Result<Self> {
        let mut incident = vec![Vec::new(); n];
        for (idx, e) in edges.iter().enumerate() {
            for x in [e.u, e.v] {
                if x >= n {
                    return Err(Error::VertexOutOfRange { vertex: x, n });
                }
            }
            if e.u == e.v {
                return Err(Error::SelfLoop(e.u));
            }
            if !(e.conductance > 0.0 && e.conductance.is_finite()) {
                return Err(Error::BadConductance {
                    u: e.u,
                    v: e.v,
                    conductance: e.conductance,
                });
            }
            incident[e.u].push(idx);
            incident[e.v].push(idx);
        }
        Ok(MultiGraph { n, edges, incident })
    }

    /// Builds a graph from `(u, v, conductance)` triples.
    pub fn from_triples(n: usize, triples: &[(VertexId, VertexId, f64)]) -> Result<Self> {
        Self::new(
            n,
            triples
                .iter()
                .map(|&(u, v, c)| Edge::new(u, v, c))
                .collect(),
        )
    }

    /// Edgeless graph on `n` vertices.
    pub fn empty(n: usize) -> Self {
        MultiGraph {
            n,
            edges: Vec::new(),
            incident: vec![Vec::new(); n],
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, idx: usize) -> &Edge {
        &self.edges[idx]
    }

    /// Indices of edges incident to `v`, in edge-list order.
    pub fn incident(&self, v: VertexId) -> &[usize] {
        &self.incident[v]
    }

    /// Number of incident edges, parallel copies counted individually.
    pub fn degree(&self, v: VertexId) -> usize {
        self.incident[v].len()
    }

    pub fn check_vertex(&self, v: VertexId) -> Result<()> {
        if v < self.n {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange {
                vertex: v,
                n: self.n,
            })
        }
    }

    pub fn total_conductance(&self) -> f64 {
        self.edges.iter().map(|e| e.conductance).sum()
    }

    /// Same topology with every conductance multiplied by `alpha`.
    pub fn scaled(&self, alpha: f64) -> Result<MultiGraph> {
        MultiGraph::new(
            self.n,
            self.edges
                .iter()
                .map(|e| Edge::new(e.u, e.v, e.conductance * alpha))
                .collect(),
        )
    }

    pub fn is_connected(&self) -> bool {
        self.n <= 1 || connected_components(self).len() == 1
    }
}

/// Dense graph Laplacian `D - A`.
#[derive(Debug, Clone, PartialEq)]
pub struct Laplacian(pub DMatrix<f64>);

impl Laplacian {
    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.0
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.0[(i, j)]
    }

    /// `x^T L x`.
    pub fn quadratic_form(&self, x: &[f64]) -> f64 {
        let n = self.dim();
        let mut acc = 0.0;
        for i in 0..n {
            let mut row = 0.0;
            for j in 0..n {
                row += self.0[(i, j)] * x[j];
            }
            acc += x[i] * row;
        }
        acc
    }
}

/// Laplacian with parallel conductances summed.
///
/// Off-diagonals are accumulated per pair in edge-list order and the diagonal
/// is the row sum of the off-diagonal magnitudes, so merging parallel edges
/// beforehand yields a bitwise-identical matrix.
pub fn laplacian(g: &MultiGraph) -> Laplacian {
    let n = g.vertex_count();
    let mut adj = DMatrix::<f64>::zeros(n, n);
    for e in g.edges() {
        let (a, b) = e.key();
        adj[(a, b)] += e.conductance;
    }
    let mut lap = DMatrix::<f64>::zeros(n, n);
    for a in 0..n {
        for b in (a + 1)..n {
            let w = adj[(a, b)];
            lap[(a, b)] = -w;
            lap[(b, a)] = -w;
        }
    }
    for i in 0..n {
        let mut d = 0.0;
        for j in 0..n {
            if j != i {
                d -= lap[(i, j)];
            }
        }
        lap[(i, i)] = d;
    }
    Laplacian(lap)
}

/// Sum of conductances of edges incident to `v`.
pub fn weighted_degree(g: &MultiGraph, v: VertexId) -> Result<f64> {
    g.check_vertex(v)?;
    Ok(g.incident(v).iter().map(|&i| g.edge(i).conductance).sum())
}

/// Membership mask for a vertex list; out-of-range ids are an error.
pub fn membership(n: usize, set: &[VertexId]) -> Result<Vec<bool>> {
    let mut mask = vec![false; n];
    for &v in set {
        if v >= n {
            return Err(Error::VertexOutOfRange { vertex: v, n });
        }
        mask[v] = true;
    }
    Ok(mask)
}

/// Cut weight of `set` by a full scan of the edge list.
pub fn exact_boundary(g: &MultiGraph, set: &[VertexId]) -> Result<f64> {
    let mask = membership(g.vertex_count(), set)?;
    Ok(boundary_by_mask(g, &mask))
}

pub fn boundary_by_mask(g: &MultiGraph, mask: &[bool]) -> f64 {
    g.edges()
        .iter()
        .filter(|e| mask[e.u] != mask[e.v])
        .map(|e| e.conductance)
        .sum()
}

/// Subgraph induced by `keep`, relabeled densely in increasing original id.
/// Edge order and conductances are preserved.
pub fn induced_subgraph(g: &MultiGraph, keep: &[VertexId]) -> Result<MultiGraph> {
    let mask = membership(g.vertex_count(), keep)?;
    let mut relabel = vec![usize::MAX; g.vertex_count()];
    let mut next = 0;
    for (v, &inside) in mask.iter().enumerate() {
        if inside {
            relabel[v] = next;
            next += 1;
        }
    }
    let edges = g
        .edges()
        .iter()
        .filter(|e| mask[e.u] && mask[e.v])
        .map(|e| Edge::new(relabel[e.u], relabel[e.v], e.conductance))
        .collect();
    MultiGraph::new(next, edges)
}

/// Connected components, each sorted ascending, ordered by smallest member.
pub fn connected_components(g: &MultiGraph) -> Vec<Vec<VertexId>> {
    let n = g.vertex_count();
    let mut uf = UnionFind::<usize>::new(n);
    for e in g.edges() {
        uf.union(e.u, e.v);
    }
    let mut by_root: IndexMap<usize, Vec<VertexId>> = IndexMap::new();
    for v in 0..n {
        by_root.entry(uf.find(v)).or_default().push(v);
    }
    by_root.into_values().collect()
}

/// Collapses parallel edges into one edge per vertex pair, summing
/// conductances in edge-list order. Each merged edge sits at the position of
/// its pair's first occurrence and keeps that occurrence's orientation.
pub fn merge_parallel(g: &MultiGraph) -> MultiGraph {
    let mut merged: IndexMap<(VertexId, VertexId), Edge> = IndexMap::new();
    for e in g.edges() {
        merged
            .entry(e.key())
            .and_modify(|m| m.conductance += e.conductance)
            .or_insert(*e);
    }
    MultiGraph::new(g.vertex_count(), merged.into_values().collect())
        .expect("merging a valid graph yields a valid graph")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> MultiGraph {
        MultiGraph::from_triples(3, &[(0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0)]).unwrap()
    }

    #[test]
    fn laplacian_examples() {
        let g = MultiGraph::from_triples(2, &[(0, 1, 2.0)]).unwrap();
        assert_eq!(
            laplacian(&g).0,
            DMatrix::from_row_slice(2, 2, &[2.0, -2.0, -2.0, 2.0])
        );

        assert_eq!(laplacian(&MultiGraph::empty(3)).0, DMatrix::zeros(3, 3));

        let par = MultiGraph::from_triples(2, &[(0, 1, 1.0), (0, 1, 1.0)]).unwrap();
        assert_eq!(
            laplacian(&par).0,
            DMatrix::from_row_slice(2, 2, &[2.0, -2.0, -2.0, 2.0])
        );
    }

    #[test]
    fn rejects_bad_edges() {
        assert!(matches!(
            MultiGraph::from_triples(2, &[(1, 1, 1.0)]),
            Err(Error::SelfLoop(1))
        ));
        assert!(matches!(
            MultiGraph::from_triples(2, &[(0, 2, 1.0)]),
            Err(Error::VertexOutOfRange { vertex: 2, n: 2 })
        ));
        assert!(MultiGraph::from_triples(2, &[(0, 1, 0.0)]).is_err());
        assert!(MultiGraph::from_triples(2, &[(0, 1, f64::NAN)]).is_err());
        assert!(MultiGraph::from_triples(2, &[(0, 1, -1.0)]).is_err());
    }

    #[test]
    fn weighted_degree_examples() {
        let g = triangle();
        for v in 0..3 {
            assert_eq!(weighted_degree(&g, v).unwrap(), 2.0);
        }
        let star =
            MultiGraph::from_triples(6, &[(0, 1, 1.0), (0, 2, 1.0), (0, 3, 1.0), (0, 4, 1.0)])
                .unwrap();
        assert_eq!(weighted_degree(&star, 0).unwrap(), 4.0);
        assert_eq!(weighted_degree(&star, 5).unwrap(), 0.0);
        assert!(weighted_degree(&star, 6).is_err());
    }

    #[test]
    fn boundary_examples() {
        let g = triangle();
        assert_eq!(exact_boundary(&g, &[0]).unwrap(), 2.0);
        assert_eq!(exact_boundary(&g, &[0, 1, 2]).unwrap(), 0.0);
        assert_eq!(exact_boundary(&g, &[]).unwrap(), 0.0);
        assert!(exact_boundary(&g, &[3]).is_err());
    }

    #[test]
    fn induced_examples() {
        let g = triangle();
        let h = induced_subgraph(&g, &[0, 1]).unwrap();
        assert_eq!(h.vertex_count(), 2);
        assert_eq!(h.edges(), &[Edge::new(0, 1, 1.0)]);

        assert_eq!(induced_subgraph(&g, &[0, 1, 2]).unwrap(), g);

        let path = MultiGraph::from_triples(3, &[(0, 1, 1.0), (1, 2, 1.0)]).unwrap();
        let h = induced_subgraph(&path, &[0, 2]).unwrap();
        assert_eq!(h.vertex_count(), 2);
        assert_eq!(h.edge_count(), 0);
    }

    #[test]
    fn component_examples() {
        assert_eq!(connected_components(&triangle()), vec![vec![0, 1, 2]]);
        assert_eq!(
            connected_components(&MultiGraph::empty(3)),
            vec![vec![0], vec![1], vec![2]]
        );
        let g = MultiGraph::from_triples(4, &[(0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0)]).unwrap();
        let sizes: Vec<usize> = connected_components(&g).iter().map(Vec::len).collect();
        assert_eq!(sizes, vec![3, 1]);
        assert!(!g.is_connected());
    }

    #[test]
    fn merge_examples() {
        let g = MultiGraph::from_triples(2, &[(0, 1, 1.0), (0, 1, 1.0)]).unwrap();
        assert_eq!(merge_parallel(&g).edges(), &[Edge::new(0, 1, 2.0)]);

        assert_eq!(merge_parallel(&triangle()), triangle());

        let g = MultiGraph::from_triples(3, &[(0, 1, 1.0), (1, 2, 1.0), (1, 0, 1.0), (0, 2, 1.0)])
            .unwrap();
        let m = merge_parallel(&g);
        let cs: Vec<f64> = m.edges().iter().map(|e| e.conductance).collect();
        assert_eq!(cs, vec![2.0, 1.0, 1.0]);
        assert_eq!(laplacian(&m), laplacian(&g));
    }
}
