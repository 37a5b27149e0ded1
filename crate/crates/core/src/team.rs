//! Team recognition: cluster borders, per-team thresholds, member
//! filtering, institution splits, and the end-to-end pipeline.
//!
//! Each density-peak cluster T is pruned to its familiar core T_c: border
//! nodes (members with an outside node strictly within the cutoff distance)
//! supply the thresholds — the largest border ρ and the largest border
//! familiarity — and only members meeting both survive. Isolated clusters
//! with no border keep every member.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::density::{
    assign_clusters, decision_profile, select_centers, CenterPolicy, DensityProfile,
};
use crate::distance::{all_pairs, DistanceIndex};
use crate::error::{Error, Result};
use crate::graph::{CollaborationGraph, NodeId};
use crate::motif::{
    enumerate_triangles, higher_order_familiarity, higher_order_familiarity_within,
    pairwise_familiarity, TriangleIndex,
};

/// Which familiarity measure drives the member filter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FamiliarityMode {
    /// Direct co-authorship counts (the MOTO-P variant).
    Pairwise,
    /// Shared-triangle counts (the standard MOTO variant).
    HigherOrder,
}

impl FamiliarityMode {
    pub fn as_str(self) -> &'static str {
        match self {
            FamiliarityMode::Pairwise => "pairwise",
            FamiliarityMode::HigherOrder => "higher-order",
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        match text {
            "pairwise" => Ok(FamiliarityMode::Pairwise),
            "higher-order" => Ok(FamiliarityMode::HigherOrder),
            other => Err(Error::InvalidArgument(format!(
                "unknown familiarity mode {other:?} (expected pairwise or higher-order)"
            ))),
        }
    }
}

/// Configuration of the recognition pipeline.
#[derive(Debug, Clone)]
pub struct RecognizeConfig {
    /// Cutoff distance d_c for densities and borders.
    pub d_c: f64,
    /// Shortest-path exploration cap.
    pub cap: f64,
    pub center_policy: CenterPolicy,
    pub familiarity: FamiliarityMode,
    pub min_team_size: usize,
    /// Count only triangles whose third vertex lies inside the team when
    /// computing higher-order familiarity.
    pub restrict_triangles: bool,
}

impl Default for RecognizeConfig {
    fn default() -> Self {
        RecognizeConfig {
            d_c: 1.5,
            cap: 3.5,
            center_policy: CenterPolicy::Auto,
            familiarity: FamiliarityMode::HigherOrder,
            min_team_size: 2,
            restrict_triangles: false,
        }
    }
}

/// One recognized team.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RecognizedTeam {
    pub team_id: String,
    pub center: NodeId,
    /// The whole cluster T, sorted.
    pub raw_members: Vec<NodeId>,
    /// Border nodes of T, sorted.
    pub border: Vec<NodeId>,
    pub rho_threshold: u32,
    pub familiarity_threshold: u32,
    /// The filtered member set T_c, sorted.
    pub members: Vec<NodeId>,
    /// True when the center itself failed the thresholds.
    pub center_excluded: bool,
}

/// Full output of the recognition pipeline.
#[derive(Debug, Clone)]
pub struct Recognition {
    pub mode: FamiliarityMode,
    pub centers: Vec<NodeId>,
    pub profile: DensityProfile,
    /// Teams with at least `min_team_size` surviving members, ordered by
    /// center γ descending.
    pub teams: Vec<RecognizedTeam>,
    /// Members of filtered clusters too small to stand as teams.
    pub isolated: Vec<NodeId>,
    /// Centers whose entire cluster was filtered away.
    pub dissolved_centers: Vec<NodeId>,
    /// Nodes unreachable from every center.
    pub unassigned: Vec<NodeId>,
    /// True when d_c exceeded the distance cap, so densities may be
    /// truncated.
    pub truncated_density: bool,
}

/// Border of a team: members with at least one outside node strictly within
/// `d_c`. `team` must be sorted.
pub fn border_region(team: &[NodeId], distances: &DistanceIndex, d_c: f64) -> Vec<NodeId> {
    team.iter()
        .copied()
        .filter(|&v| {
            distances
                .row(v)
                .iter()
                .any(|&(u, d)| d < d_c && team.binary_search(&u).is_err())
        })
        .collect()
}

/// Per-team thresholds: the maxima of ρ and familiarity over the border.
/// An empty border yields (0, 0), which filters nobody.
pub fn team_thresholds(
    border: &[NodeId],
    rho: &[u32],
    familiarity: impl Fn(NodeId) -> usize,
) -> (u32, u32) {
    let mut rho_max = 0u32;
    let mut fam_max = 0u32;
    for &v in border {
        rho_max = rho_max.max(rho[v as usize]);
        fam_max = fam_max.max(familiarity(v) as u32);
    }
    (rho_max, fam_max)
}

/// Members of `team` meeting both thresholds, in team order.
pub fn filter_team(
    team: &[NodeId],
    rho_threshold: u32,
    familiarity_threshold: u32,
    rho: &[u32],
    familiarity: impl Fn(NodeId) -> usize,
) -> Vec<NodeId> {
    team.iter()
        .copied()
        .filter(|&v| {
            rho[v as usize] >= rho_threshold && familiarity(v) as u32 >= familiarity_threshold
        })
        .collect()
}

/// One institution's share of a team.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstitutionSplit {
    pub institution: String,
    pub members: Vec<String>,
}

/// Reserved institution name for scholars without affiliation data.
pub const UNKNOWN_INSTITUTION: &str = "unknown";

/// Split members by institution; multi-institution scholars appear in each
/// of their splits, scholars without institutions under
/// [`UNKNOWN_INSTITUTION`]. Sorted by institution, members sorted by id.
pub fn split_by_institution(
    graph: &CollaborationGraph,
    members: &[NodeId],
) -> Vec<InstitutionSplit> {
    let mut by_institution: BTreeMap<String, Vec<String>> = BTreeMap::new();
    let mut sorted = members.to_vec();
    sorted.sort_unstable();
    for &v in &sorted {
        let id = graph.scholar_id(v).to_string();
        let institutions = graph.institutions(v);
        if institutions.is_empty() {
            by_institution
                .entry(UNKNOWN_INSTITUTION.to_string())
                .or_default()
                .push(id);
        } else {
            for inst in institutions {
                by_institution
                    .entry(inst.clone())
                    .or_default()
                    .push(id.clone());
            }
        }
    }
    by_institution
        .into_iter()
        .map(|(institution, members)| InstitutionSplit {
            institution,
            members,
        })
        .collect()
}

/// Run the full pipeline: bounded distances, decision profile, centers,
/// cluster assignment, then per-cluster border/threshold/filter.
pub fn recognize(graph: &CollaborationGraph, config: &RecognizeConfig) -> Result<Recognition> {
    if graph.is_empty() {
        return Err(Error::Data(
            "cannot recognize teams in an empty graph".into(),
        ));
    }
    if config.min_team_size == 0 {
        return Err(Error::InvalidArgument(
            "minimum team size must be at least 1".into(),
        ));
    }
    let distances = all_pairs(graph, config.cap)?;
    let profile = decision_profile(&distances, config.d_c)?;
    let centers = select_centers(&profile, &config.center_policy)?;
    let clustering = assign_clusters(&centers, &distances)?;
    let triangles: Option<TriangleIndex> = match config.familiarity {
        FamiliarityMode::HigherOrder if !config.restrict_triangles => {
            Some(enumerate_triangles(graph))
        }
        _ => None,
    };

    let mut teams = Vec::new();
    let mut isolated = Vec::new();
    let mut dissolved_centers = Vec::new();
    for (slot, cluster) in clustering.clusters().into_iter().enumerate() {
        let center = centers[slot];
        let familiarity = |v: NodeId| -> usize {
            match config.familiarity {
                FamiliarityMode::Pairwise => pairwise_familiarity(graph, v, &cluster),
                FamiliarityMode::HigherOrder => {
                    if config.restrict_triangles {
                        higher_order_familiarity_within(graph, v, &cluster)
                    } else {
                        higher_order_familiarity(
                            triangles.as_ref().expect("triangle index present"),
                            v,
                            &cluster,
                        )
                    }
                }
            }
        };
        let border = border_region(&cluster, &distances, config.d_c);
        let (rho_threshold, familiarity_threshold) =
            team_thresholds(&border, &profile.rho, familiarity);
        let members = filter_team(
            &cluster,
            rho_threshold,
            familiarity_threshold,
            &profile.rho,
            familiarity,
        );
        if members.is_empty() {
            dissolved_centers.push(center);
            continue;
        }
        if members.len() < config.min_team_size {
            isolated.extend(&members);
            continue;
        }
        let center_excluded = members.binary_search(&center).is_err();
        teams.push(RecognizedTeam {
            team_id: String::new(),
            center,
            raw_members: cluster,
            border,
            rho_threshold,
            familiarity_threshold,
            members,
            center_excluded,
        });
    }
    for (index, team) in teams.iter_mut().enumerate() {
        team.team_id = format!("T{:04}", index + 1);
    }
    isolated.sort_unstable();

    Ok(Recognition {
        mode: config.familiarity,
        centers,
        profile,
        teams,
        isolated,
        dissolved_centers,
        unassigned: clustering.unassigned(),
        truncated_density: config.d_c > distances.cap(),
    })
}

/// Serialized form of one team, shared by the recognizer and the baseline.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TeamJson {
    pub team_id: String,
    pub center: String,
    pub rho_threshold: f64,
    pub familiarity_threshold: f64,
    pub mode: String,
    pub members: Vec<String>,
    pub border: Vec<String>,
    pub center_excluded: bool,
    pub institution_splits: Vec<InstitutionSplit>,
}

impl TeamJson {
    /// Resolve member ids back to node indices against a graph.
    pub fn member_nodes(&self, graph: &CollaborationGraph) -> Result<Vec<NodeId>> {
        let mut nodes = Vec::with_capacity(self.members.len());
        for id in &self.members {
            let v = graph.node(id).ok_or_else(|| {
                Error::Data(format!(
                    "team {} references unknown scholar {id:?}",
                    self.team_id
                ))
            })?;
            nodes.push(v);
        }
        nodes.sort_unstable();
        nodes.dedup();
        Ok(nodes)
    }
}

/// Assemble the serializable team record used by both recognizers.
#[allow(clippy::too_many_arguments)]
pub fn team_json(
    graph: &CollaborationGraph,
    team_id: &str,
    center: NodeId,
    rho_threshold: f64,
    familiarity_threshold: f64,
    mode: &str,
    members: &[NodeId],
    border: &[NodeId],
    center_excluded: bool,
) -> TeamJson {
    let id_of = |v: &NodeId| graph.scholar_id(*v).to_string();
    TeamJson {
        team_id: team_id.to_string(),
        center: graph.scholar_id(center).to_string(),
        rho_threshold,
        familiarity_threshold,
        mode: mode.to_string(),
        members: members.iter().map(id_of).collect(),
        border: border.iter().map(id_of).collect(),
        center_excluded,
        institution_splits: split_by_institution(graph, members),
    }
}

/// All teams of a recognition result in serialized form.
pub fn recognition_to_json(graph: &CollaborationGraph, recognition: &Recognition) -> Vec<TeamJson> {
    recognition
        .teams
        .iter()
        .map(|team| {
            team_json(
                graph,
                &team.team_id,
                team.center,
                team.rho_threshold as f64,
                team.familiarity_threshold as f64,
                recognition.mode.as_str(),
                &team.members,
                &team.border,
                team.center_excluded,
            )
        })
        .collect()
}
