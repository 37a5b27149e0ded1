//! Seeded synthetic graphs: random benchmarks and planted-team fixtures.
//!
//! Everything here is deterministic in the provided seed, so fixtures can be
//! regenerated exactly inside tests and command-line demos.

use std::collections::HashSet;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{CollaborationGraph, EdgeRecord};

/// Random simple graph with `n` nodes and `m` distinct edges (`m` is clamped
/// to the complete-graph maximum). Edge distances are uniform in
/// `[0.05, 0.95)`, co-author counts uniform in `1..=4`.
pub fn random_graph(n: usize, m: usize, seed: u64) -> CollaborationGraph {
    assert!(n >= 2, "random graph needs at least two nodes");
    let max_edges = n * (n - 1) / 2;
    let m = m.min(max_edges);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut chosen: HashSet<(usize, usize)> = HashSet::with_capacity(m);
    let mut edges = Vec::with_capacity(m);
    while edges.len() < m {
        let a = rng.gen_range(0..n);
        let b = rng.gen_range(0..n);
        if a == b {
            continue;
        }
        let pair = (a.min(b), a.max(b));
        if !chosen.insert(pair) {
            continue;
        }
        let distance = rng.gen::<f64>() * 0.9 + 0.05;
        let co_count = rng.gen_range(1..=4);
        edges.push(EdgeRecord::new(
            format!("n{:04}", pair.0),
            format!("n{:04}", pair.1),
            co_count,
            distance,
        ));
    }
    // Materialize every node, including ones no edge happened to touch, so
    // the graph always has exactly n nodes.
    let mut paper_counts = vec![1u32; n];
    for edge in &edges {
        for id in [&edge.a, &edge.b] {
            let index: usize = id[1..].parse().expect("generated node id");
            paper_counts[index] = paper_counts[index].max(edge.co_count);
        }
    }
    let nodes = (0..n)
        .map(|i| crate::graph::NodeRecord {
            id: format!("n{i:04}"),
            paper_count: paper_counts[i],
            institutions: Vec::new(),
            citation_sum: 0,
        })
        .collect();
    CollaborationGraph::from_parts(nodes, edges).expect("random graph construction is valid")
}

/// Configuration of the planted clique-ring fixture: `cliques` complete
/// groups of `clique_size` scholars, consecutive cliques joined in a ring by
/// single bridge edges between seed-chosen members, plus optional
/// inter-clique noise edges and an optional "loose" member per clique whose
/// internal edges carry a minimal co-author count.
#[derive(Debug, Clone)]
pub struct PlantedConfig {
    pub cliques: usize,
    pub clique_size: usize,
    pub intra_distance: f64,
    pub bridge_distance: f64,
    pub intra_co_count: u32,
    pub bridge_co_count: u32,
    /// Number of extra random inter-clique edges attached per clique.
    pub noise_edges_per_clique: usize,
    pub noise_distance: f64,
    pub noise_co_count: u32,
    /// Demote the last member of every clique: its internal edges get
    /// co-author count 1 regardless of `intra_co_count`.
    pub loose_member: bool,
    pub seed: u64,
}

impl Default for PlantedConfig {
    fn default() -> Self {
        PlantedConfig {
            cliques: 5,
            clique_size: 8,
            intra_distance: 0.2,
            bridge_distance: 0.9,
            intra_co_count: 3,
            bridge_co_count: 1,
            noise_edges_per_clique: 0,
            noise_distance: 0.9,
            noise_co_count: 1,
            loose_member: false,
            seed: 0,
        }
    }
}

/// A planted fixture: the generated graph and the ground-truth member lists
/// (scholar ids, sorted) of each planted clique.
#[derive(Debug, Clone)]
pub struct PlantedCorpus {
    pub graph: CollaborationGraph,
    pub planted: Vec<Vec<String>>,
}

fn member_id(clique: usize, member: usize) -> String {
    format!("c{clique:02}m{member:02}")
}

/// Build the planted clique-ring fixture described by `cfg`.
pub fn planted_clique_ring(cfg: &PlantedConfig) -> Result<PlantedCorpus> {
    if cfg.cliques == 0 || cfg.clique_size < 2 {
        return Err(Error::InvalidArgument(
            "planted fixture needs at least one clique of size 2".into(),
        ));
    }
    if cfg.cliques > 100 || cfg.clique_size > 100 {
        return Err(Error::InvalidArgument(
            "planted fixture is limited to 100x100".into(),
        ));
    }
    if cfg.noise_edges_per_clique > 0 && cfg.cliques < 2 {
        return Err(Error::InvalidArgument(
            "noise edges need at least two cliques".into(),
        ));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut used: HashSet<(String, String)> = HashSet::new();
    let mut edges = Vec::new();
    let mut push = |used: &mut HashSet<(String, String)>,
                    a: String,
                    b: String,
                    co_count: u32,
                    distance: f64|
     -> bool {
        let key = if a < b {
            (a.clone(), b.clone())
        } else {
            (b.clone(), a.clone())
        };
        if !used.insert(key) {
            return false;
        }
        edges.push(EdgeRecord {
            a,
            b,
            co_count,
            distance,
        });
        true
    };

    for ci in 0..cfg.cliques {
        for i in 0..cfg.clique_size {
            for j in i + 1..cfg.clique_size {
                let loose = cfg.loose_member && j == cfg.clique_size - 1;
                let co = if loose { 1 } else { cfg.intra_co_count };
                push(
                    &mut used,
                    member_id(ci, i),
                    member_id(ci, j),
                    co,
                    cfg.intra_distance,
                );
            }
        }
    }

    if cfg.cliques >= 2 {
        let ring_bridges = if cfg.cliques == 2 { 1 } else { cfg.cliques };
        for ci in 0..ring_bridges {
            let cj = (ci + 1) % cfg.cliques;
            let a = member_id(ci, rng.gen_range(0..cfg.clique_size));
            let b = member_id(cj, rng.gen_range(0..cfg.clique_size));
            if !push(&mut used, a, b, cfg.bridge_co_count, cfg.bridge_distance) {
                return Err(Error::Internal(
                    "duplicate bridge in planted fixture".into(),
                ));
            }
        }
    }

    for ci in 0..cfg.cliques {
        for _ in 0..cfg.noise_edges_per_clique {
            let mut attempts = 0;
            loop {
                attempts += 1;
                if attempts > 1000 {
                    return Err(Error::Internal(
                        "could not place a noise edge after 1000 attempts".into(),
                    ));
                }
                let other = rng.gen_range(0..cfg.cliques);
                if other == ci {
                    continue;
                }
                let a = member_id(ci, rng.gen_range(0..cfg.clique_size));
                let b = member_id(other, rng.gen_range(0..cfg.clique_size));
                if push(&mut used, a, b, cfg.noise_co_count, cfg.noise_distance) {
                    break;
                }
            }
        }
    }

    let graph = CollaborationGraph::from_weighted_edges(edges)?;
    let planted = (0..cfg.cliques)
        .map(|ci| (0..cfg.clique_size).map(|i| member_id(ci, i)).collect())
        .collect();
    Ok(PlantedCorpus { graph, planted })
}
