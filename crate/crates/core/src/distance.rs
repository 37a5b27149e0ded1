//! Collaboration distances and bounded shortest-path computation.
//!
//! The direct distance between two collaborating scholars is the Jaccard
//! complement of their publication sets, `1 − cot/(pn_a + pn_b − cot)`:
//! 0 when two scholars only ever publish together, approaching 1 as shared
//! papers become a negligible fraction of their combined output. Indirect
//! distances are shortest paths over those edge weights, explored only up to
//! a cap; pairs farther apart than the cap are treated as unreachable.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::fmt::Write as _;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{CollaborationGraph, NodeId};

/// Direct collaboration distance from co-authored and total paper counts.
///
/// Requires `0 < co_count ≤ min(papers_a, papers_b)`; the result is in
/// `[0, 1)`.
pub fn edge_distance(co_count: u32, papers_a: u32, papers_b: u32) -> Result<f64> {
    if co_count == 0 {
        return Err(Error::InvalidArgument(
            "co-authored paper count must be positive".into(),
        ));
    }
    if co_count > papers_a || co_count > papers_b {
        return Err(Error::Data(format!(
            "co-authored count {co_count} exceeds a scholar's paper count ({papers_a}, {papers_b})"
        )));
    }
    let union = papers_a as u64 + papers_b as u64 - co_count as u64;
    Ok(1.0 - co_count as f64 / union as f64)
}

/// Bounded all-pairs shortest-path table.
///
/// One sparse row per source node holding `(target, distance)` pairs sorted
/// by target, every distance ≤ the cap, the source itself always present at
/// distance 0. Absent pairs are unreachable within the cap (semantically
/// +∞). Rows are computed independently, so the table is identical no matter
/// how many worker threads built it.
#[derive(Debug, Clone)]
pub struct DistanceIndex {
    cap: f64,
    rows: Vec<Vec<(NodeId, f64)>>,
}

impl DistanceIndex {
    pub fn cap(&self) -> f64 {
        self.cap
    }

    pub fn node_count(&self) -> usize {
        self.rows.len()
    }

    /// Distance from `a` to `b` if `b` is within the cap of `a`.
    pub fn get(&self, a: NodeId, b: NodeId) -> Option<f64> {
        let row = &self.rows[a as usize];
        row.binary_search_by_key(&b, |&(t, _)| t)
            .ok()
            .map(|i| row[i].1)
    }

    /// All `(target, distance)` pairs within the cap of `a`, sorted by target.
    pub fn row(&self, a: NodeId) -> &[(NodeId, f64)] {
        &self.rows[a as usize]
    }

    /// Number of nodes within the cap of `a`, counting `a` itself.
    pub fn reachable(&self, a: NodeId) -> usize {
        self.rows[a as usize].len()
    }

    /// Render the table as CSV (`source,target,distance`, 9 decimal places,
    /// sorted by source then target).
    pub fn to_csv(&self, graph: &CollaborationGraph) -> String {
        let mut out = String::from("source,target,distance\n");
        for (source, row) in self.rows.iter().enumerate() {
            for &(target, distance) in row {
                let _ = writeln!(
                    out,
                    "{},{},{distance:.9}",
                    graph.scholar_id(source as NodeId),
                    graph.scholar_id(target)
                );
            }
        }
        out
    }
}

#[derive(PartialEq)]
struct HeapEntry {
    dist: f64,
    node: NodeId,
}

impl Eq for HeapEntry {}

impl Ord for HeapEntry {
    fn cmp(&self, other: &Self) -> Ordering {
        // Reversed: BinaryHeap is a max-heap and we want the smallest
        // distance first, breaking ties on the smaller node index.
        other
            .dist
            .total_cmp(&self.dist)
            .then_with(|| other.node.cmp(&self.node))
    }
}

impl PartialOrd for HeapEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Dijkstra from `source`, keeping nodes at distance ≤ `cap` (inclusive).
///
/// Returns `(node, distance)` pairs sorted by node, including
/// `(source, 0.0)`.
pub fn bounded_sssp(
    graph: &CollaborationGraph,
    source: NodeId,
    cap: f64,
) -> Result<Vec<(NodeId, f64)>> {
    if !cap.is_finite() || cap <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "distance cap must be positive and finite, got {cap}"
        )));
    }
    let n = graph.node_count();
    if source as usize >= n {
        return Err(Error::InvalidArgument(format!(
            "source node {source} out of range"
        )));
    }
    let mut dist = vec![f64::INFINITY; n];
    dist[source as usize] = 0.0;
    let mut heap = BinaryHeap::new();
    heap.push(HeapEntry {
        dist: 0.0,
        node: source,
    });
    while let Some(HeapEntry { dist: d, node: u }) = heap.pop() {
        if d > dist[u as usize] {
            continue;
        }
        for neighbor in graph.neighbors(u) {
            let nd = d + neighbor.distance;
            if nd <= cap && nd < dist[neighbor.node as usize] {
                dist[neighbor.node as usize] = nd;
                heap.push(HeapEntry {
                    dist: nd,
                    node: neighbor.node,
                });
            }
        }
    }
    Ok((0..n as NodeId)
        .filter(|&v| dist[v as usize].is_finite())
        .map(|v| (v, dist[v as usize]))
        .collect())
}

/// Bounded shortest paths from every node, row-parallel.
pub fn all_pairs(graph: &CollaborationGraph, cap: f64) -> Result<DistanceIndex> {
    let n = graph.node_count();
    let rows = (0..n as NodeId)
        .into_par_iter()
        .map(|source| bounded_sssp(graph, source, cap))
        .collect::<Result<Vec<_>>>()?;
    Ok(DistanceIndex { cap, rows })
}
