//! Simplified TRAC baseline: threshold the collaboration intensity of
//! nodes and edges, then read teams off the surviving components.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{CollaborationGraph, NodeId};
use crate::team::{team_json, TeamJson};

/// How edge intensity is measured.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum IntensityFunction {
    /// Number of co-authored papers (the default).
    CoCount,
    /// One minus the collaboration distance.
    InverseDistance,
}

impl IntensityFunction {
    pub fn as_str(self) -> &'static str {
        match self {
            IntensityFunction::CoCount => "co-count",
            IntensityFunction::InverseDistance => "inverse-distance",
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        match text {
            "co-count" => Ok(IntensityFunction::CoCount),
            "inverse-distance" => Ok(IntensityFunction::InverseDistance),
            other => Err(Error::InvalidArgument(format!(
                "unknown intensity function {other:?} (expected co-count or inverse-distance)"
            ))),
        }
    }
}

/// Baseline thresholds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TracConfig {
    pub intensity: IntensityFunction,
    /// Minimum edge intensity W; weaker edges are cut.
    pub edge_threshold: f64,
    /// Minimum partnership score (sum of incident intensities); weaker
    /// nodes are removed first.
    pub phi_min: f64,
}

impl Default for TracConfig {
    fn default() -> Self {
        TracConfig {
            intensity: IntensityFunction::CoCount,
            edge_threshold: 0.0,
            phi_min: 0.0,
        }
    }
}

/// One baseline team: a surviving component with at least two members.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TracTeam {
    pub team_id: String,
    /// Sorted member nodes.
    pub members: Vec<NodeId>,
}

/// Run the baseline: score edges, drop weak nodes, cut weak edges, and
/// collect the remaining components of two or more nodes. Teams are ordered
/// by their smallest member.
pub fn trac_recognize(graph: &CollaborationGraph, config: &TracConfig) -> Result<Vec<TracTeam>> {
    if !config.edge_threshold.is_finite() || config.edge_threshold < 0.0 {
        return Err(Error::InvalidArgument(format!(
            "edge threshold must be finite and non-negative, got {}",
            config.edge_threshold
        )));
    }
    if !config.phi_min.is_finite() || config.phi_min < 0.0 {
        return Err(Error::InvalidArgument(format!(
            "partnership threshold must be finite and non-negative, got {}",
            config.phi_min
        )));
    }
    let n = graph.node_count();
    let intensity: Vec<f64> = graph
        .edges()
        .iter()
        .map(|e| match config.intensity {
            IntensityFunction::CoCount => e.co_count as f64,
            IntensityFunction::InverseDistance => 1.0 - e.distance,
        })
        .collect();

    let mut partnership = vec![0.0f64; n];
    for (edge, &w) in graph.edges().iter().zip(&intensity) {
        partnership[edge.a as usize] += w;
        partnership[edge.b as usize] += w;
    }
    let node_kept: Vec<bool> = partnership.iter().map(|&p| p >= config.phi_min).collect();

    let mut adjacency: Vec<Vec<NodeId>> = vec![Vec::new(); n];
    for (edge, &w) in graph.edges().iter().zip(&intensity) {
        if w >= config.edge_threshold && node_kept[edge.a as usize] && node_kept[edge.b as usize] {
            adjacency[edge.a as usize].push(edge.b);
            adjacency[edge.b as usize].push(edge.a);
        }
    }

    let mut visited = vec![false; n];
    let mut teams = Vec::new();
    for seed in 0..n {
        if visited[seed] || adjacency[seed].is_empty() {
            continue;
        }
        let mut members = Vec::new();
        let mut stack = vec![seed as NodeId];
        visited[seed] = true;
        while let Some(v) = stack.pop() {
            members.push(v);
            for &u in &adjacency[v as usize] {
                if !visited[u as usize] {
                    visited[u as usize] = true;
                    stack.push(u);
                }
            }
        }
        if members.len() >= 2 {
            members.sort_unstable();
            teams.push(TracTeam {
                team_id: String::new(),
                members,
            });
        }
    }
    for (index, team) in teams.iter_mut().enumerate() {
        team.team_id = format!("T{:04}", index + 1);
    }
    Ok(teams)
}

/// Serialize baseline teams in the shared schema. The smallest member
/// stands in as center; thresholds are zero and there is no border.
pub fn trac_to_json(graph: &CollaborationGraph, teams: &[TracTeam]) -> Vec<TeamJson> {
    teams
        .iter()
        .map(|team| {
            team_json(
                graph,
                &team.team_id,
                team.members[0],
                0.0,
                0.0,
                "trac",
                &team.members,
                &[],
                false,
            )
        })
        .collect()
}
