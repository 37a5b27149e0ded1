//! Triangle census, familiarity measures, and motif significance testing.
//!
//! The undirected triangle is the motif of interest: a scholar's pairwise
//! familiarity with a team counts direct co-authors inside it, while
//! higher-order familiarity counts team members sharing at least one
//! triangle with the scholar. Both are computed on the unweighted topology.
//! Significance of the triangle count is judged against an ensemble of
//! degree-preserving rewirings of the graph.

use std::collections::HashSet;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{CollaborationGraph, EdgeRecord, NodeId, NodeRecord};

/// Exact census of all 3-cliques in a graph.
#[derive(Debug, Clone)]
pub struct TriangleIndex {
    triangles: Vec<[NodeId; 3]>,
    pairs: HashSet<(NodeId, NodeId)>,
    per_node: Vec<u32>,
}

impl TriangleIndex {
    pub fn count(&self) -> usize {
        self.triangles.len()
    }

    /// All triangles as ascending triples, in lexicographic order.
    pub fn triangles(&self) -> &[[NodeId; 3]] {
        &self.triangles
    }

    /// Number of triangles containing `v`.
    pub fn per_node_count(&self, v: NodeId) -> u32 {
        self.per_node[v as usize]
    }

    /// True iff some triangle contains both `a` and `b`.
    pub fn pair_in_triangle(&self, a: NodeId, b: NodeId) -> bool {
        let key = if a < b { (a, b) } else { (b, a) };
        self.pairs.contains(&key)
    }
}

/// Enumerate every triangle once, as `u < v < w` triples.
pub fn enumerate_triangles(graph: &CollaborationGraph) -> TriangleIndex {
    let n = graph.node_count();
    // For each u, pair each higher neighbor v with the common higher
    // neighbors w of u and v; adjacency lists are sorted, so the
    // intersection is a linear merge and each triangle appears exactly once.
    let per_source: Vec<Vec<[NodeId; 3]>> = (0..n as NodeId)
        .into_par_iter()
        .map(|u| {
            let mut found = Vec::new();
            let nu = graph.neighbors(u);
            for (i, nv) in nu.iter().enumerate() {
                let v = nv.node;
                if v <= u {
                    continue;
                }
                let rest = &nu[i + 1..];
                let nw = graph.neighbors(v);
                let mut x = 0;
                let mut y = 0;
                while x < rest.len() && y < nw.len() {
                    let a = rest[x].node;
                    let b = nw[y].node;
                    match a.cmp(&b) {
                        std::cmp::Ordering::Less => x += 1,
                        std::cmp::Ordering::Greater => y += 1,
                        std::cmp::Ordering::Equal => {
                            if a > v {
                                found.push([u, v, a]);
                            }
                            x += 1;
                            y += 1;
                        }
                    }
                }
            }
            found
        })
        .collect();

    let mut triangles = Vec::new();
    for mut list in per_source {
        triangles.append(&mut list);
    }
    let mut pairs = HashSet::with_capacity(triangles.len() * 3);
    let mut per_node = vec![0u32; n];
    for &[a, b, c] in &triangles {
        pairs.insert((a, b));
        pairs.insert((a, c));
        pairs.insert((b, c));
        per_node[a as usize] += 1;
        per_node[b as usize] += 1;
        per_node[c as usize] += 1;
    }
    TriangleIndex {
        triangles,
        pairs,
        per_node,
    }
}

/// Number of team members (excluding `i` itself) directly adjacent to `i`.
pub fn pairwise_familiarity(graph: &CollaborationGraph, i: NodeId, team: &[NodeId]) -> usize {
    team.iter()
        .filter(|&&j| j != i && graph.has_edge(i, j))
        .count()
}

/// Number of team members (excluding `i`) sharing at least one triangle with
/// `i`, where triangles are drawn from the whole graph.
pub fn higher_order_familiarity(triangles: &TriangleIndex, i: NodeId, team: &[NodeId]) -> usize {
    team.iter()
        .filter(|&&j| j != i && triangles.pair_in_triangle(i, j))
        .count()
}

/// Variant of [`higher_order_familiarity`] that only accepts triangles whose
/// third vertex also lies in the team.
pub fn higher_order_familiarity_within(
    graph: &CollaborationGraph,
    i: NodeId,
    team: &[NodeId],
) -> usize {
    team.iter()
        .filter(|&&j| {
            j != i
                && graph.has_edge(i, j)
                && team
                    .iter()
                    .any(|&k| k != i && k != j && graph.has_edge(i, k) && graph.has_edge(j, k))
        })
        .count()
}

fn ordered(a: NodeId, b: NodeId) -> (NodeId, NodeId) {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

/// Degree-preserving randomization by repeated double-edge swaps.
///
/// Attempts `swaps_per_edge · |E|` swaps; proposals creating self-loops or
/// duplicate edges are skipped, so the degree sequence is preserved exactly.
/// Node attributes carry over; the rewired edges have `co_count` 1 and
/// distance 0 since only the topology is meaningful downstream. Graphs with
/// fewer than two edges are returned unchanged.
pub fn rewire_preserving_degrees(
    graph: &CollaborationGraph,
    seed: u64,
    swaps_per_edge: u32,
) -> Result<CollaborationGraph> {
    if swaps_per_edge == 0 {
        return Err(Error::InvalidArgument(
            "swaps_per_edge must be at least 1".into(),
        ));
    }
    let m = graph.edge_count();
    if m < 2 {
        return Ok(graph.clone());
    }
    let mut edges: Vec<(NodeId, NodeId)> = graph.edges().iter().map(|e| (e.a, e.b)).collect();
    let mut present: HashSet<(NodeId, NodeId)> = edges.iter().copied().collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let attempts = (swaps_per_edge as u64).saturating_mul(m as u64);
    for _ in 0..attempts {
        let x = rng.gen_range(0..m);
        let y = rng.gen_range(0..m);
        if x == y {
            continue;
        }
        let (a, b) = edges[x];
        let (mut c, mut d) = edges[y];
        if rng.gen::<bool>() {
            std::mem::swap(&mut c, &mut d);
        }
        // Propose replacing (a,b), (c,d) with (a,d), (c,b).
        if a == d || c == b {
            continue;
        }
        let e1 = ordered(a, d);
        let e2 = ordered(c, b);
        if e1 == e2 || present.contains(&e1) || present.contains(&e2) {
            continue;
        }
        present.remove(&ordered(a, b));
        present.remove(&ordered(c, d));
        present.insert(e1);
        present.insert(e2);
        edges[x] = e1;
        edges[y] = e2;
    }

    let nodes: Vec<NodeRecord> = graph
        .nodes()
        .map(|v| NodeRecord {
            id: graph.scholar_id(v).to_string(),
            paper_count: graph.paper_count(v),
            institutions: graph.institutions(v).to_vec(),
            citation_sum: graph.citation_sum(v),
        })
        .collect();
    edges.sort_unstable();
    let edge_records: Vec<EdgeRecord> = edges
        .into_iter()
        .map(|(a, b)| EdgeRecord {
            a: graph.scholar_id(a).to_string(),
            b: graph.scholar_id(b).to_string(),
            co_count: 1,
            distance: 0.0,
        })
        .collect();
    CollaborationGraph::from_parts(nodes, edge_records)
        .map_err(|err| Error::Internal(format!("rewiring produced an invalid graph: {err}")))
}

/// Parameters of the motif-significance test.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MotifParams {
    /// Ensemble size N.
    pub replicates: usize,
    /// Upper bound P on the estimated p-value (condition 1).
    pub p_threshold: f64,
    /// Frequency cutoff U (condition 2).
    pub frequency_threshold: u64,
    /// Minimum relative excess D over the ensemble mean (condition 3).
    pub effect_threshold: f64,
    pub swaps_per_edge: u32,
    pub seed: u64,
    /// Condition 2 normally requires `f_real ≥ U` (U as a minimum
    /// frequency); set this to compare `f_real ≤ U` instead. The flipped
    /// direction exists because the inequality appears both ways in the
    /// literature describing the test.
    pub frequency_at_most: bool,
}

impl Default for MotifParams {
    fn default() -> Self {
        MotifParams {
            replicates: 1000,
            p_threshold: 0.01,
            frequency_threshold: 4,
            effect_threshold: 0.1,
            swaps_per_edge: 10,
            seed: 0,
            frequency_at_most: false,
        }
    }
}

/// Outcome of the three-condition motif test.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MotifVerdict {
    pub f_real: u64,
    pub f_rand_mean: f64,
    pub f_rand_std: f64,
    pub p_estimate: f64,
    pub significance: bool,
    pub frequency: bool,
    pub effect_size: bool,
    pub is_motif: bool,
}

/// Verdict plus the raw ensemble triangle counts (replicate order).
#[derive(Debug, Clone)]
pub struct MotifSignificance {
    pub verdict: MotifVerdict,
    pub ensemble_counts: Vec<u64>,
}

impl MotifSignificance {
    /// CSV dump of the ensemble: `replicate,triangles`.
    pub fn ensemble_csv(&self) -> String {
        let mut out = String::from("replicate,triangles\n");
        for (i, count) in self.ensemble_counts.iter().enumerate() {
            out.push_str(&format!("{i},{count}\n"));
        }
        out
    }
}

/// Test whether the triangle occurs significantly more often in `graph` than
/// in `replicates` degree-preserving rewirings (seeded `seed + index`).
///
/// The three conditions: the estimated p-value (fraction of rewired graphs
/// with strictly more triangles than the real one) is at most `p_threshold`;
/// the real count passes the frequency cutoff; and the real count exceeds the
/// ensemble mean by more than `effect_threshold` times that mean. The motif
/// verdict is the conjunction of all three.
pub fn motif_significance(
    graph: &CollaborationGraph,
    params: &MotifParams,
) -> Result<MotifSignificance> {
    if params.replicates == 0 {
        return Err(Error::InvalidArgument(
            "ensemble size must be at least 1".into(),
        ));
    }
    if !(0.0..=1.0).contains(&params.p_threshold) {
        return Err(Error::InvalidArgument(format!(
            "p threshold must lie in [0, 1], got {}",
            params.p_threshold
        )));
    }
    if params.effect_threshold < 0.0 || !params.effect_threshold.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "effect threshold must be non-negative, got {}",
            params.effect_threshold
        )));
    }
    if params.swaps_per_edge == 0 {
        return Err(Error::InvalidArgument(
            "swaps_per_edge must be at least 1".into(),
        ));
    }

    let f_real = enumerate_triangles(graph).count() as u64;
    let ensemble_counts: Vec<u64> = (0..params.replicates)
        .into_par_iter()
        .map(|i| -> Result<u64> {
            let rewired = rewire_preserving_degrees(
                graph,
                params.seed.wrapping_add(i as u64),
                params.swaps_per_edge,
            )?;
            Ok(enumerate_triangles(&rewired).count() as u64)
        })
        .collect::<Result<_>>()?;

    let n = ensemble_counts.len() as f64;
    let mean = ensemble_counts.iter().map(|&c| c as f64).sum::<f64>() / n;
    let var = ensemble_counts
        .iter()
        .map(|&c| (c as f64 - mean).powi(2))
        .sum::<f64>()
        / n;
    let exceed = ensemble_counts.iter().filter(|&&c| c > f_real).count();
    let p_estimate = exceed as f64 / n;

    let significance = p_estimate <= params.p_threshold;
    let frequency = if params.frequency_at_most {
        f_real <= params.frequency_threshold
    } else {
        f_real >= params.frequency_threshold
    };
    let effect_size = (f_real as f64 - mean) > params.effect_threshold * mean;
    let verdict = MotifVerdict {
        f_real,
        f_rand_mean: mean,
        f_rand_std: var.sqrt(),
        p_estimate,
        significance,
        frequency,
        effect_size,
        is_motif: significance && frequency && effect_size,
    };
    Ok(MotifSignificance {
        verdict,
        ensemble_counts,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn complete(n: usize) -> CollaborationGraph {
        let mut edges = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                edges.push(EdgeRecord::new(
                    format!("n{i:02}"),
                    format!("n{j:02}"),
                    1,
                    0.2,
                ));
            }
        }
        CollaborationGraph::from_weighted_edges(edges).unwrap()
    }

    fn brute_force_triangles(graph: &CollaborationGraph) -> Vec<[NodeId; 3]> {
        let n = graph.node_count() as NodeId;
        let mut out = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                for c in b + 1..n {
                    if graph.has_edge(a, b) && graph.has_edge(a, c) && graph.has_edge(b, c) {
                        out.push([a, b, c]);
                    }
                }
            }
        }
        out
    }

    #[test]
    fn k3_census() {
        let g = complete(3);
        let tri = enumerate_triangles(&g);
        assert_eq!(tri.count(), 1);
        assert!(tri.pair_in_triangle(0, 1));
        assert!(tri.pair_in_triangle(2, 0));
        assert!(tri.pair_in_triangle(1, 2));
    }

    #[test]
    fn k4_census() {
        let g = complete(4);
        let tri = enumerate_triangles(&g);
        assert_eq!(tri.count(), 4);
        for v in 0..4 {
            assert_eq!(tri.per_node_count(v), 3);
        }
        assert_eq!(tri.triangles()[0], [0, 1, 2]);
    }

    #[test]
    fn tree_has_no_triangles() {
        let g = CollaborationGraph::from_weighted_edges(vec![
            EdgeRecord::new("a", "b", 1, 0.2),
            EdgeRecord::new("b", "c", 1, 0.2),
            EdgeRecord::new("b", "d", 1, 0.2),
        ])
        .unwrap();
        let tri = enumerate_triangles(&g);
        assert_eq!(tri.count(), 0);
        assert!(!tri.pair_in_triangle(0, 1));
    }

    #[test]
    fn census_matches_brute_force_on_random_graphs() {
        for seed in 0..5 {
            let g = crate::synthetic::random_graph(60, 240, seed);
            let tri = enumerate_triangles(&g);
            assert_eq!(
                tri.triangles(),
                brute_force_triangles(&g).as_slice(),
                "seed {seed}"
            );
        }
    }

    #[test]
    fn familiarity_star_and_cliques() {
        // Star: center adjacent to 4 leaves.
        let star = CollaborationGraph::from_weighted_edges(vec![
            EdgeRecord::new("hub", "l1", 1, 0.2),
            EdgeRecord::new("hub", "l2", 1, 0.2),
            EdgeRecord::new("hub", "l3", 1, 0.2),
            EdgeRecord::new("hub", "l4", 1, 0.2),
        ])
        .unwrap();
        let hub = star.node("hub").unwrap();
        let leaves: Vec<NodeId> = star.nodes().filter(|&v| v != hub).collect();
        assert_eq!(pairwise_familiarity(&star, hub, &leaves), 4);
        // A leaf has no edges into the other leaves.
        assert_eq!(pairwise_familiarity(&star, leaves[0], &leaves), 0);
        // No triangles anywhere in a star.
        let tri = enumerate_triangles(&star);
        assert_eq!(higher_order_familiarity(&tri, hub, &leaves), 0);

        let k4 = complete(4);
        let all: Vec<NodeId> = k4.nodes().collect();
        assert_eq!(pairwise_familiarity(&k4, 0, &all), 3);
        let tri4 = enumerate_triangles(&k4);
        assert_eq!(higher_order_familiarity(&tri4, 0, &all), 3);

        let k3 = complete(3);
        let tri3 = enumerate_triangles(&k3);
        let team: Vec<NodeId> = k3.nodes().collect();
        for v in 0..3 {
            assert_eq!(higher_order_familiarity(&tri3, v, &team), 2);
        }
    }

    #[test]
    fn higher_order_on_k4_minus_edge() {
        // Remove edge (0,1): nodes 0 and 1 still share triangles with 2 and 3
        // ({0,2,3} and {1,2,3}) but not with each other.
        let mut edges = Vec::new();
        for i in 0..4u32 {
            for j in i + 1..4 {
                if (i, j) != (0, 1) {
                    edges.push(EdgeRecord::new(format!("n{i}"), format!("n{j}"), 1, 0.2));
                }
            }
        }
        let g = CollaborationGraph::from_weighted_edges(edges).unwrap();
        let tri = enumerate_triangles(&g);
        let all: Vec<NodeId> = g.nodes().collect();
        assert_eq!(higher_order_familiarity(&tri, 0, &all), 2);
        assert_eq!(higher_order_familiarity(&tri, 1, &all), 2);
        assert_eq!(higher_order_familiarity(&tri, 2, &all), 3);
    }

    #[test]
    fn restricted_familiarity_needs_in_team_witness() {
        // Triangle {0,1,2} plus pendant 3 on node 0.
        let g = CollaborationGraph::from_weighted_edges(vec![
            EdgeRecord::new("a", "b", 1, 0.2),
            EdgeRecord::new("a", "c", 1, 0.2),
            EdgeRecord::new("b", "c", 1, 0.2),
            EdgeRecord::new("a", "d", 1, 0.2),
        ])
        .unwrap();
        let (a, b, d) = (
            g.node("a").unwrap(),
            g.node("b").unwrap(),
            g.node("d").unwrap(),
        );
        let tri = enumerate_triangles(&g);
        // Whole-graph triangles still count pairs outside the team.
        let team = vec![a, b, d];
        assert_eq!(higher_order_familiarity(&tri, a, &team), 1);
        // Restricted to the team, the witness c is missing.
        assert_eq!(higher_order_familiarity_within(&g, a, &team), 0);
        let full: Vec<NodeId> = g.nodes().collect();
        assert_eq!(higher_order_familiarity_within(&g, a, &full), 2);
    }

    #[test]
    fn familiarity_order_bound_on_random_graphs() {
        for seed in 0..10 {
            let g = crate::synthetic::random_graph(40, 120, seed);
            let tri = enumerate_triangles(&g);
            let team: Vec<NodeId> = g.nodes().filter(|v| v % 3 == 0).collect();
            for v in g.nodes() {
                let fn_ = higher_order_familiarity(&tri, v, &team);
                let f1 = pairwise_familiarity(&g, v, &team);
                let cap = team.iter().filter(|&&j| j != v).count();
                assert!(fn_ <= f1, "seed {seed} node {v}");
                assert!(f1 <= cap, "seed {seed} node {v}");
                assert!(higher_order_familiarity_within(&g, v, &team) <= fn_);
            }
        }
    }

    #[test]
    fn rewiring_preserves_degrees_and_is_deterministic() {
        let g = crate::synthetic::random_graph(50, 150, 7);
        let r1 = rewire_preserving_degrees(&g, 11, 10).unwrap();
        let r2 = rewire_preserving_degrees(&g, 11, 10).unwrap();
        assert_eq!(r1.edges().len(), g.edge_count());
        assert_eq!(
            r1.edges().iter().map(|e| (e.a, e.b)).collect::<Vec<_>>(),
            r2.edges().iter().map(|e| (e.a, e.b)).collect::<Vec<_>>()
        );
        for v in g.nodes() {
            assert_eq!(r1.degree(v), g.degree(v), "degree of node {v}");
        }
        // A different seed gives a different wiring on a graph this size.
        let r3 = rewire_preserving_degrees(&g, 12, 10).unwrap();
        assert_ne!(
            r1.edges().iter().map(|e| (e.a, e.b)).collect::<Vec<_>>(),
            r3.edges().iter().map(|e| (e.a, e.b)).collect::<Vec<_>>()
        );
    }

    #[test]
    fn rewiring_small_graphs_is_identity() {
        let g = CollaborationGraph::from_weighted_edges(vec![EdgeRecord::new("a", "b", 2, 0.3)])
            .unwrap();
        let r = rewire_preserving_degrees(&g, 5, 10).unwrap();
        assert_eq!(r.edges(), g.edges());
    }

    #[test]
    fn rewiring_usually_changes_triangle_count() {
        let g = crate::synthetic::random_graph(100, 500, 3);
        let before = enumerate_triangles(&g).count();
        let r = rewire_preserving_degrees(&g, 9, 10).unwrap();
        let after = enumerate_triangles(&r).count();
        assert_ne!(before, after);
    }

    fn two_k4s_with_path() -> CollaborationGraph {
        let mut edges = Vec::new();
        for base in ["a", "b"] {
            for i in 0..4u32 {
                for j in i + 1..4 {
                    edges.push(EdgeRecord::new(
                        format!("{base}{i}"),
                        format!("{base}{j}"),
                        1,
                        0.2,
                    ));
                }
            }
        }
        // A long path joining the two cliques.
        edges.push(EdgeRecord::new("a0", "p1", 1, 0.5));
        edges.push(EdgeRecord::new("p1", "p2", 1, 0.5));
        edges.push(EdgeRecord::new("p2", "p3", 1, 0.5));
        edges.push(EdgeRecord::new("p3", "b0", 1, 0.5));
        CollaborationGraph::from_weighted_edges(edges).unwrap()
    }

    #[test]
    fn significance_on_clustered_fixture() {
        let g = two_k4s_with_path();
        let params = MotifParams {
            replicates: 100,
            seed: 42,
            ..MotifParams::default()
        };
        let sig = motif_significance(&g, &params).unwrap();
        assert_eq!(sig.verdict.f_real, 8);
        assert!(sig.verdict.is_motif, "verdict: {:?}", sig.verdict);
        assert!(sig.verdict.f_rand_mean < 8.0);
        assert_eq!(sig.ensemble_counts.len(), 100);
    }

    #[test]
    fn triangle_free_graph_fails_frequency() {
        let g = CollaborationGraph::from_weighted_edges(vec![
            EdgeRecord::new("a", "b", 1, 0.2),
            EdgeRecord::new("b", "c", 1, 0.2),
            EdgeRecord::new("c", "d", 1, 0.2),
        ])
        .unwrap();
        let params = MotifParams {
            replicates: 50,
            seed: 1,
            ..MotifParams::default()
        };
        let sig = motif_significance(&g, &params).unwrap();
        assert_eq!(sig.verdict.f_real, 0);
        assert!(!sig.verdict.frequency);
        assert!(!sig.verdict.is_motif);
    }

    #[test]
    fn complete_graph_fails_effect_size() {
        // Every double-edge swap on a complete graph proposes an existing
        // edge, so the ensemble equals the original graph exactly.
        let g = complete(6);
        let params = MotifParams {
            replicates: 50,
            seed: 3,
            ..MotifParams::default()
        };
        let sig = motif_significance(&g, &params).unwrap();
        assert_eq!(sig.verdict.f_real, 20);
        assert_eq!(sig.verdict.f_rand_mean, 20.0);
        assert!(sig.verdict.significance);
        assert!(sig.verdict.frequency);
        assert!(!sig.verdict.effect_size);
        assert!(!sig.verdict.is_motif);
    }

    #[test]
    fn significance_is_deterministic() {
        let g = two_k4s_with_path();
        let params = MotifParams {
            replicates: 60,
            seed: 9,
            ..MotifParams::default()
        };
        let a = motif_significance(&g, &params).unwrap();
        let b = motif_significance(&g, &params).unwrap();
        assert_eq!(a.ensemble_counts, b.ensemble_counts);
        assert_eq!(a.verdict.p_estimate, b.verdict.p_estimate);
        assert_eq!(a.ensemble_csv(), b.ensemble_csv());
    }

    #[test]
    fn invalid_params_are_rejected() {
        let g = complete(3);
        let bad_n = MotifParams {
            replicates: 0,
            ..MotifParams::default()
        };
        assert!(motif_significance(&g, &bad_n).is_err());
        let bad_p = MotifParams {
            p_threshold: 1.5,
            ..MotifParams::default()
        };
        assert!(motif_significance(&g, &bad_p).is_err());
        let bad_swaps = MotifParams {
            swaps_per_edge: 0,
            ..MotifParams::default()
        };
        assert!(motif_significance(&g, &bad_swaps).is_err());
    }
}
