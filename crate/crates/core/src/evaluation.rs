//! Evaluation metrics for recognized teams: collaboration convenience,
//! in-team triangles, separability, citation means, interagency
//! proportions, and the co-author histogram.

use std::collections::BinaryHeap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::corpus::PublicationRecord;
use crate::error::{Error, Result};
use crate::graph::{CollaborationGraph, NodeId};
use crate::motif::TriangleIndex;

/// How path lengths are measured for the convenience metric.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CcrMode {
    /// Sum of edge distances (the default).
    Weighted,
    /// Plain hop counts.
    Hops,
}

impl CcrMode {
    pub fn as_str(self) -> &'static str {
        match self {
            CcrMode::Weighted => "weighted",
            CcrMode::Hops => "hops",
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        match text {
            "weighted" => Ok(CcrMode::Weighted),
            "hops" => Ok(CcrMode::Hops),
            other => Err(Error::InvalidArgument(format!(
                "unknown ccr mode {other:?} (expected weighted or hops)"
            ))),
        }
    }
}

#[derive(Copy, Clone, PartialEq)]
struct HeapEntry {
    dist: f64,
    node: usize,
}

impl Eq for HeapEntry {}

impl Ord for HeapEntry {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        other
            .dist
            .total_cmp(&self.dist)
            .then_with(|| other.node.cmp(&self.node))
    }
}

impl PartialOrd for HeapEntry {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Shortest distances from `members[source]` to every member, walking only
/// edges whose both endpoints belong to the team. Unreachable entries are
/// infinite.
fn induced_sssp(
    graph: &CollaborationGraph,
    members: &[NodeId],
    source: usize,
    mode: CcrMode,
) -> Vec<f64> {
    let mut dist = vec![f64::INFINITY; members.len()];
    dist[source] = 0.0;
    let mut heap = BinaryHeap::new();
    heap.push(HeapEntry {
        dist: 0.0,
        node: source,
    });
    while let Some(HeapEntry { dist: d, node }) = heap.pop() {
        if d > dist[node] {
            continue;
        }
        for neighbor in graph.neighbors(members[node]) {
            let Ok(local) = members.binary_search(&neighbor.node) else {
                continue;
            };
            let weight = match mode {
                CcrMode::Weighted => neighbor.distance,
                CcrMode::Hops => 1.0,
            };
            let nd = d + weight;
            if nd < dist[local] {
                dist[local] = nd;
                heap.push(HeapEntry {
                    dist: nd,
                    node: local,
                });
            }
        }
    }
    dist
}

/// Collaboration convenience of a team: the diameter of its induced
/// subgraph. Returns the value together with a flag that is true when the
/// induced subgraph is disconnected, in which case the largest finite
/// pairwise distance is reported. Singleton teams score 0.
pub fn ccr(graph: &CollaborationGraph, members: &[NodeId], mode: CcrMode) -> Result<(f64, bool)> {
    if members.is_empty() {
        return Err(Error::InvalidArgument(
            "ccr requires a non-empty team".into(),
        ));
    }
    let mut sorted = members.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() == 1 {
        return Ok((0.0, false));
    }
    if sorted[sorted.len() - 1] as usize >= graph.node_count() {
        return Err(Error::InvalidArgument("team member out of range".into()));
    }
    let mut diameter = 0.0f64;
    let mut disconnected = false;
    for source in 0..sorted.len() {
        for &d in &induced_sssp(graph, &sorted, source, mode) {
            if d.is_finite() {
                diameter = diameter.max(d);
            } else {
                disconnected = true;
            }
        }
    }
    Ok((diameter, disconnected))
}

/// Number of whole-graph triangles entirely inside the team.
pub fn team_triangles(triangles: &TriangleIndex, members: &[NodeId]) -> usize {
    let mut sorted = members.to_vec();
    sorted.sort_unstable();
    triangles
        .triangles()
        .iter()
        .filter(|t| t.iter().all(|v| sorted.binary_search(v).is_ok()))
        .count()
}

/// Separability: outgoing edges over outgoing plus internal edges. Lower is
/// better; a team with no incident edges at all scores 0.
pub fn separability(graph: &CollaborationGraph, members: &[NodeId]) -> f64 {
    let mut sorted = members.to_vec();
    sorted.sort_unstable();
    let inside = |v: NodeId| sorted.binary_search(&v).is_ok();
    let mut outgoing = 0usize;
    let mut internal = 0usize;
    for edge in graph.edges() {
        match (inside(edge.a), inside(edge.b)) {
            (true, true) => internal += 1,
            (true, false) | (false, true) => outgoing += 1,
            (false, false) => {}
        }
    }
    if outgoing + internal == 0 {
        0.0
    } else {
        outgoing as f64 / (outgoing + internal) as f64
    }
}

/// Mean citation sum over team members.
pub fn mean_citation(graph: &CollaborationGraph, members: &[NodeId]) -> f64 {
    if members.is_empty() {
        return 0.0;
    }
    let total: u64 = members.iter().map(|&v| graph.citation_sum(v)).sum();
    total as f64 / members.len() as f64
}

/// True when the team spans at least two distinct institutions. Scholars
/// without affiliation data contribute nothing.
pub fn is_interagency(graph: &CollaborationGraph, members: &[NodeId]) -> bool {
    let mut seen: Vec<&str> = Vec::new();
    for &v in members {
        for inst in graph.institutions(v) {
            if !seen.contains(&inst.as_str()) {
                seen.push(inst);
                if seen.len() >= 2 {
                    return true;
                }
            }
        }
    }
    false
}

/// Per-team metric row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TeamMetrics {
    pub team_id: String,
    pub size: usize,
    pub ccr: f64,
    pub disconnected: bool,
    pub triangles: usize,
    pub separability: f64,
    pub mean_citation: f64,
}

/// Compute the metric row for every team, in input order.
pub fn evaluate_teams(
    graph: &CollaborationGraph,
    teams: &[(String, Vec<NodeId>)],
    mode: CcrMode,
) -> Result<Vec<TeamMetrics>> {
    let triangles = crate::motif::enumerate_triangles(graph);
    let mut rows = Vec::with_capacity(teams.len());
    for (team_id, members) in teams {
        let (ccr_value, disconnected) = ccr(graph, members, mode)?;
        rows.push(TeamMetrics {
            team_id: team_id.clone(),
            size: members.len(),
            ccr: ccr_value,
            disconnected,
            triangles: team_triangles(&triangles, members),
            separability: separability(graph, members),
            mean_citation: mean_citation(graph, members),
        });
    }
    Ok(rows)
}

/// Render metric rows as CSV with a pinned header.
pub fn metrics_csv(rows: &[TeamMetrics]) -> String {
    let mut out =
        String::from("team_id,size,ccr,disconnected,triangles,separability,mean_citation\n");
    for row in rows {
        writeln!(
            out,
            "{},{},{:.9},{},{},{:.9},{:.9}",
            row.team_id,
            row.size,
            row.ccr,
            row.disconnected,
            row.triangles,
            row.separability,
            row.mean_citation
        )
        .expect("string write");
    }
    out
}

/// Aggregate statistics for one team size.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SizeAggregate {
    pub size: usize,
    pub team_count: usize,
    pub mean_ccr: f64,
    pub mean_triangles: f64,
    pub mean_separability: f64,
    pub mean_citation: f64,
    pub interagency_proportion: f64,
}

/// Corpus-level aggregate over all evaluated teams.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaluationSummary {
    pub team_count: usize,
    pub mean_size: f64,
    pub mean_ccr: f64,
    pub mean_triangles: f64,
    pub mean_separability: f64,
    pub mean_citation: f64,
    pub interagency_proportion: f64,
    pub per_size: Vec<SizeAggregate>,
}

fn mean(values: impl Iterator<Item = f64>, count: usize) -> f64 {
    if count == 0 {
        0.0
    } else {
        values.sum::<f64>() / count as f64
    }
}

/// Summarize metric rows, grouped overall and by team size (ascending).
pub fn summarize(
    graph: &CollaborationGraph,
    teams: &[(String, Vec<NodeId>)],
    rows: &[TeamMetrics],
) -> EvaluationSummary {
    let interagency: Vec<bool> = teams
        .iter()
        .map(|(_, members)| is_interagency(graph, members))
        .collect();
    let overall = |indices: &[usize]| -> (f64, f64, f64, f64, f64) {
        let n = indices.len();
        (
            mean(indices.iter().map(|&i| rows[i].ccr), n),
            mean(indices.iter().map(|&i| rows[i].triangles as f64), n),
            mean(indices.iter().map(|&i| rows[i].separability), n),
            mean(indices.iter().map(|&i| rows[i].mean_citation), n),
            mean(
                indices
                    .iter()
                    .map(|&i| if interagency[i] { 1.0 } else { 0.0 }),
                n,
            ),
        )
    };
    let all: Vec<usize> = (0..rows.len()).collect();
    let (mean_ccr, mean_triangles, mean_separability, mean_cit, interagency_proportion) =
        overall(&all);
    let mut sizes: Vec<usize> = rows.iter().map(|r| r.size).collect();
    sizes.sort_unstable();
    sizes.dedup();
    let per_size = sizes
        .into_iter()
        .map(|size| {
            let indices: Vec<usize> = (0..rows.len()).filter(|&i| rows[i].size == size).collect();
            let (mean_ccr, mean_triangles, mean_separability, mean_citation, prop) =
                overall(&indices);
            SizeAggregate {
                size,
                team_count: indices.len(),
                mean_ccr,
                mean_triangles,
                mean_separability,
                mean_citation,
                interagency_proportion: prop,
            }
        })
        .collect();
    EvaluationSummary {
        team_count: rows.len(),
        mean_size: mean(rows.iter().map(|r| r.size as f64), rows.len()),
        mean_ccr,
        mean_triangles,
        mean_separability,
        mean_citation: mean_cit,
        interagency_proportion,
        per_size,
    }
}

/// One row of the interagency-by-size report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InteragencyRow {
    pub size: usize,
    pub team_count: usize,
    pub interagency_count: usize,
    pub proportion: f64,
    /// The same statistics restricted to the top cited share of this size
    /// class.
    pub top_team_count: usize,
    pub top_interagency_count: usize,
    pub top_proportion: f64,
}

/// Interagency proportions per team size, for all teams and for the top
/// `q` share ranked by mean citation (ties broken by team id). Sizes appear
/// in ascending order; sizes with no teams are omitted.
pub fn interagency_report(
    graph: &CollaborationGraph,
    teams: &[(String, Vec<NodeId>)],
    q: f64,
) -> Result<Vec<InteragencyRow>> {
    if !(q > 0.0 && q <= 1.0) {
        return Err(Error::InvalidArgument(format!(
            "citation share q must be in (0, 1], got {q}"
        )));
    }
    let mut sizes: Vec<usize> = teams.iter().map(|(_, m)| m.len()).collect();
    sizes.sort_unstable();
    sizes.dedup();
    let mut report = Vec::with_capacity(sizes.len());
    for size in sizes {
        let mut class: Vec<(usize, f64)> = teams
            .iter()
            .enumerate()
            .filter(|(_, (_, members))| members.len() == size)
            .map(|(i, (_, members))| (i, mean_citation(graph, members)))
            .collect();
        let team_count = class.len();
        let interagency_count = class
            .iter()
            .filter(|&&(i, _)| is_interagency(graph, &teams[i].1))
            .count();
        class.sort_by(|a, b| {
            b.1.total_cmp(&a.1)
                .then_with(|| teams[a.0].0.cmp(&teams[b.0].0))
        });
        let top_team_count = (q * team_count as f64).ceil() as usize;
        let top_interagency_count = class[..top_team_count]
            .iter()
            .filter(|&&(i, _)| is_interagency(graph, &teams[i].1))
            .count();
        report.push(InteragencyRow {
            size,
            team_count,
            interagency_count,
            proportion: interagency_count as f64 / team_count as f64,
            top_team_count,
            top_interagency_count,
            top_proportion: if top_team_count == 0 {
                0.0
            } else {
                top_interagency_count as f64 / top_team_count as f64
            },
        });
    }
    Ok(report)
}

/// One bucket of the co-author histogram.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoauthorBucket {
    pub label: String,
    pub papers: usize,
    pub fraction: f64,
}

/// Distribution of author counts per paper, bucketed 1..=9 plus "10+".
/// Duplicate paper ids count once (first occurrence wins); empty buckets
/// are omitted.
pub fn coauthor_distribution(records: &[PublicationRecord]) -> Vec<CoauthorBucket> {
    let mut seen: Vec<&str> = Vec::new();
    let mut counts = [0usize; 10];
    for record in records {
        if seen.contains(&record.paper_id.as_str()) {
            continue;
        }
        seen.push(&record.paper_id);
        let authors = record.authors.len();
        if authors == 0 {
            continue;
        }
        counts[authors.min(10) - 1] += 1;
    }
    let total: usize = counts.iter().sum();
    if total == 0 {
        return Vec::new();
    }
    (0..10)
        .filter(|&i| counts[i] > 0)
        .map(|i| CoauthorBucket {
            label: if i < 9 {
                (i + 1).to_string()
            } else {
                "10+".to_string()
            },
            papers: counts[i],
            fraction: counts[i] as f64 / total as f64,
        })
        .collect()
}
