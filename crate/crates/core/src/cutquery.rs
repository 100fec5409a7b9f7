//! Cut-boundary queries in time proportional to `c * |S|` for a graph with a
//! `c`-treelike ordering.
//!
//! Each edge is stored once, at its earlier endpoint. For a query set `S`,
//! summing `wd(v)` over `S` counts internal edges twice and crossing edges
//! once; the internal weight is found by scanning only the forward lists of
//! vertices in `S`, where every internal edge appears exactly once.

use crate::error::{Error, Result};
use crate::forests::TreelikeOrdering;
use crate::graph::{MultiGraph, VertexId};

#[derive(Debug, Clone, PartialEq)]
pub struct CutIndex {
    /// `(neighbor, conductance)` for edges to later vertices.
    pub forward_adj: Vec<Vec<(VertexId, f64)>>,
    /// Weighted degree of each vertex.
    pub wd: Vec<f64>,
    /// Work spent building the index (one unit per edge and per vertex).
    pub build_ops: usize,
}

/// Per-query membership bitmap. Marking and clearing cost `O(|S|)`, never
/// `O(n)`. Concurrent queries each need their own.
#[derive(Debug, Clone)]
pub struct QueryScratch {
    member: Vec<bool>,
}

impl QueryScratch {
    pub fn new(n: usize) -> Self {
        QueryScratch {
            member: vec![false; n],
        }
    }
}

/// Result of an instrumented query.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryQuery {
    pub boundary: f64,
    /// Forward-list entries examined.
    pub scanned: usize,
    /// Distinct vertices in the query.
    pub k: usize,
    /// `sum wd(v)` over the query set; the scale of the cancellation.
    pub degree_sum: f64,
}

pub fn build_index(g: &MultiGraph, ord: &TreelikeOrdering) -> Result<CutIndex> {
    let n = g.vertex_count();
    if ord.position.len() != n {
        return Err(Error::VertexCountMismatch {
            left: n,
            right: ord.position.len(),
        });
    }
    let pos = &ord.position;
    let mut forward_adj: Vec<Vec<(VertexId, f64)>> = ord
        .forward_degree
        .iter()
        .map(|&d| Vec::with_capacity(d))
        .collect();
    let mut wd = vec![0.0; n];
    let mut build_ops = n;
    for e in g.edges() {
        build_ops += 1;
        wd[e.u] += e.conductance;
        wd[e.v] += e.conductance;
        let (first, second) = if pos[e.u] < pos[e.v] {
            (e.u, e.v)
        } else {
            (e.v, e.u)
        };
        forward_adj[first].push((second, e.conductance));
    }
    Ok(CutIndex {
        forward_adj,
        wd,
        build_ops,
    })
}

impl CutIndex {
    pub fn vertex_count(&self) -> usize {
        self.wd.len()
    }

    pub fn scratch(&self) -> QueryScratch {
        QueryScratch::new(self.vertex_count())
    }

    pub fn max_list_len(&self) -> usize {
        self.forward_adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Boundary weight of `set`; duplicates in `set` are ignored.
    ///
    /// Cost is `O(c * |set|)` for a `c`-treelike index. Query whichever side of
    /// the cut is smaller; the result is the same.
    pub fn boundary(&self, scratch: &mut QueryScratch, set: &[VertexId]) -> Result<f64> {
        Ok(self.boundary_instrumented(scratch, set)?.boundary)
    }

    /// [`CutIndex::boundary`] plus the number of forward entries examined.
    pub fn boundary_instrumented(
        &self,
        scratch: &mut QueryScratch,
        set: &[VertexId],
    ) -> Result<BoundaryQuery> {
        let n = self.vertex_count();
        if scratch.member.len() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                got: scratch.member.len(),
            });
        }
        if let Some(&bad) = set.iter().find(|&&v| v >= n) {
            return Err(Error::VertexOutOfRange { vertex: bad, n });
        }
        let member = &mut scratch.member;
        let mut distinct = Vec::with_capacity(set.len());
        let mut degree_sum = 0.0;
        for &v in set {
            if !member[v] {
                member[v] = true;
                distinct.push(v);
                degree_sum += self.wd[v];
            }
        }
        let mut internal = 0.0;
        let mut scanned = 0;
        for &u in &distinct {
            for &(w, c) in &self.forward_adj[u] {
                scanned += 1;
                if member[w] {
                    internal += c;
                }
            }
        }
        for &v in &distinct {
            member[v] = false;
        }
        Ok(BoundaryQuery {
            boundary: degree_sum - 2.0 * internal,
            scanned,
            k: distinct.len(),
            degree_sum,
        })
    }
}
