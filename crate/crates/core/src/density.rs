//! Density-peaks decision quantities and clustering.
//!
//! Every node gets a local density ρ (neighbors strictly within the cutoff
//! distance d_c), a distinguishable distance δ (how far the node sits from
//! anything ranked above it), and γ = normalized ρ · normalized δ. Cluster
//! centers are the nodes with outstanding γ; all remaining nodes join the
//! cluster of their nearest center.

use serde::{Deserialize, Serialize};
use std::fmt::Write as _;

use crate::distance::DistanceIndex;
use crate::error::{Error, Result};
use crate::graph::{CollaborationGraph, NodeId};

/// Per-node decision quantities plus the global tie-break order.
#[derive(Debug, Clone)]
pub struct DensityProfile {
    pub rho: Vec<u32>,
    pub delta: Vec<f64>,
    pub rho_norm: Vec<f64>,
    pub delta_norm: Vec<f64>,
    pub gamma: Vec<f64>,
    /// Rank → node, the total order (ρ descending, node index ascending).
    pub order: Vec<NodeId>,
    /// Node → rank, inverse of `order`.
    pub rank: Vec<u32>,
}

/// ρ per node: how many other nodes lie strictly within `d_c`.
///
/// Pairs beyond the distance cap are absent from the index and count as
/// unreachable. `d_c` larger than the cap still works but can only see
/// capped distances; callers should surface that as a truncation warning.
pub fn local_density(distances: &DistanceIndex, d_c: f64) -> Result<Vec<u32>> {
    if !d_c.is_finite() || d_c <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "cutoff distance must be positive and finite, got {d_c}"
        )));
    }
    let n = distances.node_count();
    let mut rho = vec![0u32; n];
    for v in 0..n as NodeId {
        rho[v as usize] = distances
            .row(v)
            .iter()
            .filter(|&&(u, d)| u != v && d < d_c)
            .count() as u32;
    }
    Ok(rho)
}

/// Total order: ρ descending, node index ascending. Exactly the rank-0 node
/// takes the "maximum density" branch of the δ definition.
pub fn tie_break_order(rho: &[u32]) -> Vec<NodeId> {
    let mut order: Vec<NodeId> = (0..rho.len() as NodeId).collect();
    order.sort_by(|&a, &b| rho[b as usize].cmp(&rho[a as usize]).then(a.cmp(&b)));
    order
}

/// δ per node: the minimum stored distance to any earlier-ranked node, with
/// the cap substituted when no earlier node is reachable. The rank-0 node
/// instead takes its maximum finite stored distance (cap if it has none).
pub fn distinguishable_distance(distances: &DistanceIndex, order: &[NodeId]) -> Vec<f64> {
    let n = order.len();
    let mut rank = vec![0u32; n];
    for (r, &v) in order.iter().enumerate() {
        rank[v as usize] = r as u32;
    }
    let mut delta = vec![0.0f64; n];
    for (r, &v) in order.iter().enumerate() {
        if r == 0 {
            let mut best = f64::NEG_INFINITY;
            for &(u, d) in distances.row(v) {
                if u != v && d > best {
                    best = d;
                }
            }
            delta[v as usize] = if best.is_finite() {
                best
            } else {
                distances.cap()
            };
        } else {
            let mut best = f64::INFINITY;
            for &(u, d) in distances.row(v) {
                if u != v && (rank[u as usize] as usize) < r && d < best {
                    best = d;
                }
            }
            delta[v as usize] = if best.is_finite() {
                best
            } else {
                distances.cap()
            };
        }
    }
    delta
}

/// Min–max normalize to [0, 1]. A constant field has no ordering signal: it
/// collapses to 0 when the shared value is 0 and to the neutral value 1
/// otherwise, so the product γ keeps whatever signal the other axis carries.
fn min_max_normalize(values: &[f64]) -> Vec<f64> {
    if values.is_empty() {
        return Vec::new();
    }
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for &x in values {
        lo = lo.min(x);
        hi = hi.max(x);
    }
    let span = hi - lo;
    if span == 0.0 {
        let fill = if hi == 0.0 { 0.0 } else { 1.0 };
        return vec![fill; values.len()];
    }
    values.iter().map(|&x| (x - lo) / span).collect()
}

/// Assemble the full profile from ρ and δ: normalization, γ, and the
/// tie-break order.
pub fn gamma_scores(rho: Vec<u32>, delta: Vec<f64>) -> DensityProfile {
    let order = tie_break_order(&rho);
    let mut rank = vec![0u32; rho.len()];
    for (r, &v) in order.iter().enumerate() {
        rank[v as usize] = r as u32;
    }
    let rho_f: Vec<f64> = rho.iter().map(|&x| x as f64).collect();
    let rho_norm = min_max_normalize(&rho_f);
    let delta_norm = min_max_normalize(&delta);
    let gamma: Vec<f64> = rho_norm
        .iter()
        .zip(&delta_norm)
        .map(|(&r, &d)| r * d)
        .collect();
    DensityProfile {
        rho,
        delta,
        rho_norm,
        delta_norm,
        gamma,
        order,
        rank,
    }
}

/// Compute ρ, δ, and γ from a distance table in one call.
pub fn decision_profile(distances: &DistanceIndex, d_c: f64) -> Result<DensityProfile> {
    let rho = local_density(distances, d_c)?;
    let order = tie_break_order(&rho);
    let delta = distinguishable_distance(distances, &order);
    Ok(gamma_scores(rho, delta))
}

/// How cluster centers are picked off the decision graph.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum CenterPolicy {
    /// The k nodes with the highest γ.
    TopK(usize),
    /// Every node with γ at or above the threshold.
    Threshold(f64),
    /// Among the top ⌈√n⌉ nodes by γ, cut at the largest consecutive
    /// multiplicative gap in the sorted γ sequence.
    Auto,
}

fn nodes_by_gamma(profile: &DensityProfile) -> Vec<NodeId> {
    let mut nodes: Vec<NodeId> = (0..profile.gamma.len() as NodeId).collect();
    nodes.sort_by(|&a, &b| {
        profile.gamma[b as usize]
            .total_cmp(&profile.gamma[a as usize])
            .then(a.cmp(&b))
    });
    nodes
}

/// Select centers per `policy`; the result is sorted by γ descending, node
/// index ascending, and is non-empty for a non-empty profile.
pub fn select_centers(profile: &DensityProfile, policy: &CenterPolicy) -> Result<Vec<NodeId>> {
    let n = profile.gamma.len();
    if n == 0 {
        return Err(Error::InvalidArgument(
            "cannot select centers of an empty profile".into(),
        ));
    }
    let sorted = nodes_by_gamma(profile);
    match *policy {
        CenterPolicy::TopK(k) => {
            if k == 0 {
                return Err(Error::InvalidArgument(
                    "center count k must be at least 1".into(),
                ));
            }
            if k > n {
                return Err(Error::InvalidArgument(format!(
                    "center count k = {k} exceeds the {n} available nodes"
                )));
            }
            Ok(sorted[..k].to_vec())
        }
        CenterPolicy::Threshold(min_gamma) => {
            if !min_gamma.is_finite() {
                return Err(Error::InvalidArgument(
                    "gamma threshold must be finite".into(),
                ));
            }
            let centers: Vec<NodeId> = sorted
                .iter()
                .copied()
                .take_while(|&v| profile.gamma[v as usize] >= min_gamma)
                .collect();
            if centers.is_empty() {
                return Err(Error::InvalidArgument(format!(
                    "gamma threshold {min_gamma} excludes every node"
                )));
            }
            Ok(centers)
        }
        CenterPolicy::Auto => {
            if n == 1 {
                return Ok(sorted);
            }
            let m = (n as f64).sqrt().ceil() as usize;
            let scan = m.min(n - 1);
            let mut best_i = 1usize;
            let mut best_ratio = f64::NEG_INFINITY;
            for i in 1..=scan {
                let hi = profile.gamma[sorted[i - 1] as usize];
                let lo = profile.gamma[sorted[i] as usize];
                let ratio = if lo > 0.0 {
                    hi / lo
                } else if hi > 0.0 {
                    f64::INFINITY
                } else {
                    1.0
                };
                if ratio > best_ratio {
                    best_ratio = ratio;
                    best_i = i;
                }
            }
            Ok(sorted[..best_i].to_vec())
        }
    }
}

/// Cluster assignment: `assignment[v]` is the position of v's center in
/// `centers`, or `None` when v cannot reach any center within the cap.
#[derive(Debug, Clone)]
pub struct Clustering {
    pub centers: Vec<NodeId>,
    pub assignment: Vec<Option<u32>>,
}

impl Clustering {
    /// Member lists per center (center included), each sorted ascending.
    pub fn clusters(&self) -> Vec<Vec<NodeId>> {
        let mut out = vec![Vec::new(); self.centers.len()];
        for (v, slot) in self.assignment.iter().enumerate() {
            if let Some(c) = slot {
                out[*c as usize].push(v as NodeId);
            }
        }
        out
    }

    /// Nodes unreachable from every center, ascending.
    pub fn unassigned(&self) -> Vec<NodeId> {
        self.assignment
            .iter()
            .enumerate()
            .filter(|(_, slot)| slot.is_none())
            .map(|(v, _)| v as NodeId)
            .collect()
    }
}

/// Assign every node to its nearest center (distance ties go to the earlier
/// center in the list; centers map to themselves).
pub fn assign_clusters(centers: &[NodeId], distances: &DistanceIndex) -> Result<Clustering> {
    if centers.is_empty() {
        return Err(Error::InvalidArgument("center list is empty".into()));
    }
    let n = distances.node_count();
    let mut center_of = vec![None::<u32>; n];
    for (i, &c) in centers.iter().enumerate() {
        if c as usize >= n {
            return Err(Error::InvalidArgument(format!("center {c} out of range")));
        }
        if center_of[c as usize].is_some() {
            return Err(Error::InvalidArgument(format!("center {c} listed twice")));
        }
        center_of[c as usize] = Some(i as u32);
    }
    let mut assignment = vec![None::<u32>; n];
    for v in 0..n as NodeId {
        if let Some(slot) = center_of[v as usize] {
            assignment[v as usize] = Some(slot);
            continue;
        }
        let mut best: Option<(f64, u32)> = None;
        for (i, &c) in centers.iter().enumerate() {
            if let Some(d) = distances.get(v, c) {
                if best.is_none_or(|(bd, _)| d < bd) {
                    best = Some((d, i as u32));
                }
            }
        }
        assignment[v as usize] = best.map(|(_, i)| i);
    }
    Ok(Clustering {
        centers: centers.to_vec(),
        assignment,
    })
}

/// Decision-graph table: `node_id,rho,delta,rho_norm,delta_norm,gamma,
/// is_center`, sorted by γ descending then id ascending.
pub fn decision_csv(
    graph: &CollaborationGraph,
    profile: &DensityProfile,
    centers: &[NodeId],
) -> String {
    let mut is_center = vec![false; profile.gamma.len()];
    for &c in centers {
        is_center[c as usize] = true;
    }
    let mut out = String::from("node_id,rho,delta,rho_norm,delta_norm,gamma,is_center\n");
    for &v in &nodes_by_gamma(profile) {
        let i = v as usize;
        let _ = writeln!(
            out,
            "{},{},{:.9},{:.9},{:.9},{:.9},{}",
            graph.scholar_id(v),
            profile.rho[i],
            profile.delta[i],
            profile.rho_norm[i],
            profile.delta_norm[i],
            profile.gamma[i],
            is_center[i]
        );
    }
    out
}

/// The classic four areas of the decision graph, bounded by the smallest
/// normalized ρ and δ found among the selected centers: the center area
/// (high ρ, high δ), near-center nodes (high ρ, low δ), sparse nodes (low ρ,
/// low δ), and isolated nodes (low ρ, high δ).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RegionAnnotation {
    pub rho_cut: f64,
    pub delta_cut: f64,
    pub center: Vec<String>,
    pub near_center: Vec<String>,
    pub sparse: Vec<String>,
    pub isolated: Vec<String>,
}

/// Annotate each node with its decision-graph area relative to the chosen
/// centers.
pub fn annotate_regions(
    graph: &CollaborationGraph,
    profile: &DensityProfile,
    centers: &[NodeId],
) -> Result<RegionAnnotation> {
    if centers.is_empty() {
        return Err(Error::InvalidArgument(
            "region annotation needs at least one center".into(),
        ));
    }
    let rho_cut = centers
        .iter()
        .map(|&c| profile.rho_norm[c as usize])
        .fold(f64::INFINITY, f64::min);
    let delta_cut = centers
        .iter()
        .map(|&c| profile.delta_norm[c as usize])
        .fold(f64::INFINITY, f64::min);
    let mut annotation = RegionAnnotation {
        rho_cut,
        delta_cut,
        center: Vec::new(),
        near_center: Vec::new(),
        sparse: Vec::new(),
        isolated: Vec::new(),
    };
    for v in 0..profile.gamma.len() as NodeId {
        let id = graph.scholar_id(v).to_string();
        let high_rho = profile.rho_norm[v as usize] >= rho_cut;
        let high_delta = profile.delta_norm[v as usize] >= delta_cut;
        match (high_rho, high_delta) {
            (true, true) => annotation.center.push(id),
            (true, false) => annotation.near_center.push(id),
            (false, false) => annotation.sparse.push(id),
            (false, true) => annotation.isolated.push(id),
        }
    }
    Ok(annotation)
}

/// One candidate cutoff in a [`suggest_dc`] scan.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DcCandidate {
    pub d_c: f64,
    pub mean_rho: f64,
    /// Mean ρ divided by node count.
    pub occupancy: f64,
    pub in_band: bool,
}

/// Result of scanning candidate cutoffs for a target occupancy band.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DcSuggestion {
    pub chosen_d_c: f64,
    pub band_low: f64,
    pub band_high: f64,
    /// False when no candidate hit the band and `chosen_d_c` is the
    /// closest-to-midpoint fallback.
    pub any_in_band: bool,
    pub candidates: Vec<DcCandidate>,
}

/// Scan cutoff candidates 0.1, 0.2, … (up to the distance cap, at most
/// 2.5) and report the mean-density occupancy of each. The suggestion is
/// the smallest candidate whose occupancy falls inside [band_low,
/// band_high]; if none does, the candidate closest to the band midpoint
/// (ties to the smaller cutoff) is returned with `any_in_band = false`.
pub fn suggest_dc(
    distances: &DistanceIndex,
    band_low: f64,
    band_high: f64,
) -> Result<DcSuggestion> {
    if !(band_low > 0.0 && band_low <= band_high && band_high.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "occupancy band must satisfy 0 < low <= high, got [{band_low}, {band_high}]"
        )));
    }
    let n = distances.node_count();
    if n == 0 {
        return Err(Error::InvalidArgument(
            "cannot scan cutoffs on an empty index".into(),
        ));
    }
    let midpoint = (band_low + band_high) / 2.0;
    let mut candidates = Vec::new();
    for step in 1..=25 {
        let d_c = step as f64 / 10.0;
        if d_c > distances.cap() {
            break;
        }
        let rho = local_density(distances, d_c)?;
        let mean_rho = rho.iter().map(|&r| r as f64).sum::<f64>() / n as f64;
        let occupancy = mean_rho / n as f64;
        candidates.push(DcCandidate {
            d_c,
            mean_rho,
            occupancy,
            in_band: occupancy >= band_low && occupancy <= band_high,
        });
    }
    if candidates.is_empty() {
        return Err(Error::InvalidArgument(format!(
            "distance cap {} leaves no cutoff candidates to scan",
            distances.cap()
        )));
    }
    let chosen = candidates
        .iter()
        .find(|c| c.in_band)
        .or_else(|| {
            candidates.iter().min_by(|a, b| {
                (a.occupancy - midpoint)
                    .abs()
                    .total_cmp(&(b.occupancy - midpoint).abs())
                    .then_with(|| a.d_c.total_cmp(&b.d_c))
            })
        })
        .expect("candidate list is non-empty");
    Ok(DcSuggestion {
        chosen_d_c: chosen.d_c,
        band_low,
        band_high,
        any_in_band: chosen.in_band,
        candidates: candidates.clone(),
    })
}

/// Render a cutoff scan as CSV.
pub fn dc_scan_csv(suggestion: &DcSuggestion) -> String {
    let mut out = String::from("d_c,mean_rho,occupancy,in_band\n");
    for c in &suggestion.candidates {
        writeln!(
            out,
            "{:.1},{:.9},{:.9},{}",
            c.d_c, c.mean_rho, c.occupancy, c.in_band
        )
        .expect("string write");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distance::all_pairs;
    use crate::graph::{CollaborationGraph, EdgeRecord, NodeRecord};

    fn unit_path() -> CollaborationGraph {
        // A–B–C with unit weights, encoded as two 0.5+0.5 hops scaled by 2
        // is not possible (weights < 1), so use 0.5 and treat d_c
        // accordingly: distances are A–B 0.5, B–C 0.5, A–C 1.0.
        CollaborationGraph::from_weighted_edges(vec![
            EdgeRecord::new("A", "B", 1, 0.5),
            EdgeRecord::new("B", "C", 1, 0.5),
        ])
        .unwrap()
    }

    #[test]
    fn local_density_on_path() {
        let g = unit_path();
        let index = all_pairs(&g, 3.5).unwrap();
        // d_c = 0.75 covers one hop (0.5) but not two (1.0).
        let rho = local_density(&index, 0.75).unwrap();
        assert_eq!(rho, vec![1, 2, 1]);
        // Nothing within 0.25.
        assert_eq!(local_density(&index, 0.25).unwrap(), vec![0, 0, 0]);
        // Exactly-equal distances are not counted: strict inequality.
        assert_eq!(local_density(&index, 0.5).unwrap(), vec![0, 0, 0]);
        assert_eq!(local_density(&index, 0.5000001).unwrap(), vec![1, 2, 1]);
        assert!(local_density(&index, 0.0).is_err());
    }

    #[test]
    fn tie_break_order_cases() {
        // ρ = {A:2, B:2, C:1} → [A, B, C].
        assert_eq!(tie_break_order(&[2, 2, 1]), vec![0, 1, 2]);
        // All equal → ascending index.
        assert_eq!(tie_break_order(&[3, 3, 3]), vec![0, 1, 2]);
        // ρ = {X:1, A:5} with A the higher index.
        assert_eq!(tie_break_order(&[1, 5]), vec![1, 0]);
    }

    #[test]
    fn delta_on_path_matches_hand_enumeration() {
        let g = unit_path();
        let index = all_pairs(&g, 3.5).unwrap();
        let rho = local_density(&index, 0.75).unwrap();
        let order = tie_break_order(&rho);
        assert_eq!(order, vec![1, 0, 2]); // B first, then A, C.
        let delta = distinguishable_distance(&index, &order);
        // δ(B) = max distance from B = 0.5; δ(A) = dis(A,B) = 0.5;
        // δ(C) = min(dis(C,B)=0.5, dis(C,A)=1.0) = 0.5.
        assert_eq!(delta, vec![0.5, 0.5, 0.5]);
    }

    #[test]
    fn delta_fallbacks() {
        // Single node: δ = cap.
        let lone = CollaborationGraph::from_parts(
            vec![NodeRecord {
                id: "solo".into(),
                paper_count: 1,
                institutions: vec![],
                citation_sum: 0,
            }],
            vec![],
        )
        .unwrap();
        let index = all_pairs(&lone, 3.5).unwrap();
        let profile = decision_profile(&index, 1.0).unwrap();
        assert_eq!(profile.delta, vec![3.5]);
        assert_eq!(profile.gamma, vec![0.0]);

        // Two disconnected nodes: lower-ranked δ = cap, rank-0 too (no
        // finite distances).
        let pair = CollaborationGraph::from_parts(
            vec![
                NodeRecord {
                    id: "a".into(),
                    paper_count: 1,
                    institutions: vec![],
                    citation_sum: 0,
                },
                NodeRecord {
                    id: "b".into(),
                    paper_count: 1,
                    institutions: vec![],
                    citation_sum: 0,
                },
            ],
            vec![],
        )
        .unwrap();
        let index = all_pairs(&pair, 3.5).unwrap();
        let delta = distinguishable_distance(&index, &[0, 1]);
        assert_eq!(delta, vec![3.5, 3.5]);
    }

    #[test]
    fn gamma_normalization_example() {
        let profile = gamma_scores(vec![2, 1, 0], vec![4.0, 2.0, 2.0]);
        assert_eq!(profile.rho_norm, vec![1.0, 0.5, 0.0]);
        assert_eq!(profile.delta_norm, vec![1.0, 0.0, 0.0]);
        assert_eq!(profile.gamma, vec![1.0, 0.0, 0.0]);
        assert_eq!(profile.order, vec![0, 1, 2]);
        assert_eq!(profile.rank, vec![0, 1, 2]);
    }

    #[test]
    fn constant_fields_keep_the_other_axis() {
        // Constant nonzero ρ: γ is carried entirely by δ.
        let profile = gamma_scores(vec![4, 4, 4], vec![0.2, 0.2, 1.0]);
        assert_eq!(profile.rho_norm, vec![1.0, 1.0, 1.0]);
        assert_eq!(profile.gamma, vec![0.0, 0.0, 1.0]);
        // Constant zero ρ: no density signal at all.
        let profile = gamma_scores(vec![0, 0, 0], vec![0.2, 0.2, 1.0]);
        assert_eq!(profile.gamma, vec![0.0, 0.0, 0.0]);
        // Identical (ρ, δ) → identical γ.
        let profile = gamma_scores(vec![2, 2, 1], vec![0.4, 0.4, 0.1]);
        assert_eq!(profile.gamma[0], profile.gamma[1]);
    }

    #[test]
    fn rho_is_monotone_in_dc() {
        for seed in 0..5 {
            let g = crate::synthetic::random_graph(40, 100, seed);
            let index = all_pairs(&g, 3.5).unwrap();
            let mut prev = local_density(&index, 0.1).unwrap();
            for step in 2..12 {
                let next = local_density(&index, 0.1 * step as f64).unwrap();
                for v in 0..prev.len() {
                    assert!(next[v] >= prev[v], "seed {seed} node {v}");
                }
                prev = next;
            }
        }
    }

    #[test]
    fn center_selection_policies() {
        // γ = {A:1.0, B:0.9, C:0.1, D:0.05} via handcrafted ρ/δ.
        let profile = DensityProfile {
            rho: vec![4, 3, 2, 1],
            delta: vec![0.0; 4],
            rho_norm: vec![1.0, 0.9, 0.1, 0.05],
            delta_norm: vec![1.0; 4],
            gamma: vec![1.0, 0.9, 0.1, 0.05],
            order: vec![0, 1, 2, 3],
            rank: vec![0, 1, 2, 3],
        };
        assert_eq!(
            select_centers(&profile, &CenterPolicy::Auto).unwrap(),
            vec![0, 1]
        );
        assert_eq!(
            select_centers(&profile, &CenterPolicy::TopK(1)).unwrap(),
            vec![0]
        );
        assert_eq!(
            select_centers(&profile, &CenterPolicy::Threshold(0.0)).unwrap(),
            vec![0, 1, 2, 3]
        );
        assert!(select_centers(&profile, &CenterPolicy::TopK(9)).is_err());
        assert!(select_centers(&profile, &CenterPolicy::TopK(0)).is_err());
        assert!(select_centers(&profile, &CenterPolicy::Threshold(2.0)).is_err());
    }

    #[test]
    fn auto_policy_with_flat_gamma_picks_one() {
        let profile = gamma_scores(vec![2, 2, 2, 2], vec![1.0, 1.0, 1.0, 1.0]);
        assert_eq!(
            select_centers(&profile, &CenterPolicy::Auto).unwrap(),
            vec![0]
        );
    }

    #[test]
    fn assignment_on_two_cliques() {
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
        edges.push(EdgeRecord::new("a0", "b0", 1, 0.9));
        let g = CollaborationGraph::from_weighted_edges(edges).unwrap();
        let index = all_pairs(&g, 3.5).unwrap();
        let centers = vec![g.node("a1").unwrap(), g.node("b1").unwrap()];
        let clustering = assign_clusters(&centers, &index).unwrap();
        let clusters = clustering.clusters();
        let names = |c: &Vec<NodeId>| c.iter().map(|&v| g.scholar_id(v)).collect::<Vec<_>>();
        assert_eq!(names(&clusters[0]), vec!["a0", "a1", "a2", "a3"]);
        assert_eq!(names(&clusters[1]), vec!["b0", "b1", "b2", "b3"]);
        assert!(clustering.unassigned().is_empty());
        // Centers map to themselves.
        assert_eq!(clustering.assignment[centers[0] as usize], Some(0));
    }

    #[test]
    fn assignment_ties_and_unreachable() {
        // X at equal distance from both centers; Z unreachable within cap.
        let g = CollaborationGraph::from_weighted_edges(vec![
            EdgeRecord::new("c1", "x", 1, 0.4),
            EdgeRecord::new("c2", "x", 1, 0.4),
            EdgeRecord::new("z", "far", 1, 0.9),
        ])
        .unwrap();
        let index = all_pairs(&g, 0.5).unwrap();
        let centers = vec![g.node("c2").unwrap(), g.node("c1").unwrap()];
        let clustering = assign_clusters(&centers, &index).unwrap();
        // Tie broken by list order: c2 first.
        assert_eq!(
            clustering.assignment[g.node("x").unwrap() as usize],
            Some(0)
        );
        assert_eq!(clustering.assignment[g.node("z").unwrap() as usize], None);
        let unassigned = clustering.unassigned();
        assert!(unassigned.contains(&g.node("z").unwrap()));
        assert!(assign_clusters(&[], &index).is_err());
        assert!(assign_clusters(&[0, 0], &index).is_err());
    }

    #[test]
    fn decision_csv_golden_lines() {
        let g = unit_path();
        let index = all_pairs(&g, 3.5).unwrap();
        let profile = decision_profile(&index, 0.75).unwrap();
        let centers = select_centers(&profile, &CenterPolicy::TopK(1)).unwrap();
        let csv = decision_csv(&g, &profile, &centers);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(
            lines[0],
            "node_id,rho,delta,rho_norm,delta_norm,gamma,is_center"
        );
        // B has ρ=2, δ=0.5, both norms 1 (ρ spans {1,2}, δ constant 0.5).
        assert_eq!(
            lines[1],
            "B,2,0.500000000,1.000000000,1.000000000,1.000000000,true"
        );
        assert_eq!(lines.len(), 4);
    }

    #[test]
    fn region_annotation_partitions_nodes() {
        let g = crate::synthetic::random_graph(30, 90, 2);
        let index = all_pairs(&g, 3.5).unwrap();
        let profile = decision_profile(&index, 0.4).unwrap();
        let centers = select_centers(&profile, &CenterPolicy::TopK(3)).unwrap();
        let regions = annotate_regions(&g, &profile, &centers).unwrap();
        let total = regions.center.len()
            + regions.near_center.len()
            + regions.sparse.len()
            + regions.isolated.len();
        assert_eq!(total, g.node_count());
        for &c in &centers {
            assert!(regions.center.contains(&g.scholar_id(c).to_string()));
        }
    }

    #[test]
    fn delta_never_exceeds_distance_to_rank0() {
        for seed in 0..5 {
            let g = crate::synthetic::random_graph(50, 150, seed);
            let index = all_pairs(&g, 3.5).unwrap();
            let profile = decision_profile(&index, 0.4).unwrap();
            let top = profile.order[0];
            for v in g.nodes() {
                if v == top {
                    continue;
                }
                if let Some(d) = index.get(v, top) {
                    assert!(
                        profile.delta[v as usize] <= d + 1e-12,
                        "seed {seed} node {v}: delta {} vs dist-to-top {d}",
                        profile.delta[v as usize]
                    );
                }
            }
        }
    }

    #[test]
    fn dc_scan_matches_independent_occupancies() {
        let g = crate::synthetic::random_graph(200, 300, 9);
        let index = all_pairs(&g, 3.5).unwrap();
        let suggestion = suggest_dc(&index, 0.01, 0.02).unwrap();
        assert_eq!(suggestion.candidates.len(), 25);
        for candidate in &suggestion.candidates {
            let rho = local_density(&index, candidate.d_c).unwrap();
            let mean = rho.iter().map(|&r| r as f64).sum::<f64>() / 200.0;
            assert!((candidate.mean_rho - mean).abs() < 1e-12);
            assert!((candidate.occupancy - mean / 200.0).abs() < 1e-12);
            assert_eq!(
                candidate.in_band,
                (0.01..=0.02).contains(&candidate.occupancy)
            );
        }
        if suggestion.any_in_band {
            let first = suggestion.candidates.iter().find(|c| c.in_band).unwrap();
            assert_eq!(suggestion.chosen_d_c, first.d_c);
        }
        // Occupancy grows with the cutoff, so the flags are one contiguous
        // run at most.
        let occupancies: Vec<f64> = suggestion.candidates.iter().map(|c| c.occupancy).collect();
        assert!(occupancies.windows(2).all(|w| w[0] <= w[1]));
        let csv = dc_scan_csv(&suggestion);
        assert!(csv.starts_with("d_c,mean_rho,occupancy,in_band\n"));
        assert_eq!(csv.lines().count(), 26);
    }

    #[test]
    fn dc_scan_fallback_picks_nearest_midpoint() {
        // Two nodes at distance 0.2: occupancy jumps 0 -> 0.5 and never
        // enters [0.01, 0.02]; the zero-occupancy cutoffs are closest to
        // the midpoint and the tie resolves to the smallest, 0.1.
        let g = CollaborationGraph::from_weighted_edges(vec![crate::graph::EdgeRecord::new(
            "a", "b", 1, 0.2,
        )])
        .unwrap();
        let index = all_pairs(&g, 3.5).unwrap();
        let suggestion = suggest_dc(&index, 0.01, 0.02).unwrap();
        assert!(!suggestion.any_in_band);
        assert_eq!(suggestion.chosen_d_c, 0.1);
        assert!(suggest_dc(&index, 0.0, 0.02).is_err());
        assert!(suggest_dc(&index, 0.05, 0.01).is_err());
    }
}
