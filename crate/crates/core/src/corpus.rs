//! Publication-corpus ingestion: JSON-lines parsing, scholar/window/field
//! filters, and collaboration-graph construction.
//!
//! The input is one JSON object per line with keys `paper_id`, `year`,
//! `authors`, and optionally `institutions` (per-author lists, aligned with
//! `authors`), `citations`, and `fields`. The standard pipeline parses the
//! corpus, optionally restricts it to a field whitelist, keeps scholars
//! whose career spans enough years (measured over the whole corpus), cuts a
//! year window, builds the co-authorship graph of that window, and keeps its
//! largest connected component.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::distance::edge_distance;
use crate::error::{Error, Result};
use crate::graph::{CollaborationGraph, EdgeRecord, NodeRecord};
use crate::motif::enumerate_triangles;

/// One publication, as parsed from a corpus line.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PublicationRecord {
    pub paper_id: String,
    pub year: i32,
    pub authors: Vec<String>,
    /// Per-author institution lists, aligned with `authors`; may be empty
    /// when the corpus carries no affiliation data.
    #[serde(default)]
    pub institutions: Vec<Vec<String>>,
    #[serde(default)]
    pub citations: u64,
    #[serde(default)]
    pub fields: Vec<String>,
}

/// A corpus line that failed validation, with its 1-based line number.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RejectedLine {
    pub line: usize,
    pub reason: String,
}

/// Result of parsing a corpus stream: the well-formed records plus every
/// rejected line. Parsing never aborts on bad lines.
#[derive(Debug, Clone, Default)]
pub struct ParseOutcome {
    pub records: Vec<PublicationRecord>,
    pub rejected: Vec<RejectedLine>,
    pub total_lines: usize,
}

fn validate_record(record: &PublicationRecord) -> std::result::Result<(), String> {
    if record.paper_id.is_empty() {
        return Err("empty paper_id".into());
    }
    if record.authors.is_empty() {
        return Err("no authors".into());
    }
    let mut seen = HashSet::new();
    for author in &record.authors {
        if author.is_empty() {
            return Err("empty author id".into());
        }
        if author.contains(['\t', '\n', '\r']) {
            return Err(format!("author id {author:?} contains tab or newline"));
        }
        if !seen.insert(author.as_str()) {
            return Err(format!("duplicate author {author:?}"));
        }
    }
    if !record.institutions.is_empty() && record.institutions.len() != record.authors.len() {
        return Err(format!(
            "institutions list has {} entries for {} authors",
            record.institutions.len(),
            record.authors.len()
        ));
    }
    for per_author in &record.institutions {
        for inst in per_author {
            if inst.is_empty() {
                return Err("empty institution id".into());
            }
            if inst.contains(['\t', '\n', '\r', ';']) {
                return Err(format!(
                    "institution {inst:?} contains a reserved character"
                ));
            }
        }
    }
    Ok(())
}

/// Parse a JSON-lines corpus. Blank lines are skipped; malformed lines are
/// collected with their line numbers instead of aborting the parse.
pub fn parse_publications(text: &str) -> ParseOutcome {
    let mut outcome = ParseOutcome::default();
    for (idx, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        outcome.total_lines += 1;
        match serde_json::from_str::<PublicationRecord>(line) {
            Ok(record) => match validate_record(&record) {
                Ok(()) => outcome.records.push(record),
                Err(reason) => outcome.rejected.push(RejectedLine {
                    line: idx + 1,
                    reason,
                }),
            },
            Err(err) => outcome.rejected.push(RejectedLine {
                line: idx + 1,
                reason: err.to_string(),
            }),
        }
    }
    outcome
}

/// Keep records with `start_year ≤ year ≤ end_year` (inclusive bounds).
pub fn filter_window(
    records: &[PublicationRecord],
    start_year: i32,
    end_year: i32,
) -> Result<Vec<PublicationRecord>> {
    if start_year > end_year {
        return Err(Error::InvalidArgument(format!(
            "window start {start_year} is after end {end_year}"
        )));
    }
    Ok(records
        .iter()
        .filter(|r| (start_year..=end_year).contains(&r.year))
        .cloned()
        .collect())
}

/// Keep records tagged with at least one whitelisted field; an empty
/// whitelist keeps everything.
pub fn filter_fields(
    records: &[PublicationRecord],
    whitelist: &[String],
) -> Vec<PublicationRecord> {
    if whitelist.is_empty() {
        return records.to_vec();
    }
    let allowed: HashSet<&str> = whitelist.iter().map(String::as_str).collect();
    records
        .iter()
        .filter(|r| r.fields.iter().any(|f| allowed.contains(f.as_str())))
        .cloned()
        .collect()
}

/// Scholars whose career spans at least `min_career_years`, where the span
/// is `last_year − first_year + 1` over the records given (use the whole
/// corpus, not a single window).
pub fn filter_scholars(
    all_records: &[PublicationRecord],
    min_career_years: u32,
) -> BTreeSet<String> {
    let mut spans: BTreeMap<&str, (i32, i32)> = BTreeMap::new();
    for record in all_records {
        for author in &record.authors {
            let entry = spans.entry(author).or_insert((record.year, record.year));
            entry.0 = entry.0.min(record.year);
            entry.1 = entry.1.max(record.year);
        }
    }
    spans
        .into_iter()
        .filter(|(_, (first, last))| (last - first + 1) >= min_career_years as i32)
        .map(|(id, _)| id.to_string())
        .collect()
}

#[derive(Default)]
struct ScholarAggregate {
    papers: u32,
    citations: u64,
    institutions: BTreeSet<String>,
}

/// Build the collaboration graph of a record window, restricted to
/// `retained` scholars. Paper counts, citation sums, and institution sets
/// are window-local; one edge per pair of retained scholars with at least
/// one shared paper, weighted by the collaboration distance. Records whose
/// `paper_id` repeats are counted once (first occurrence wins).
pub fn build_graph(
    window_records: &[PublicationRecord],
    retained: &BTreeSet<String>,
) -> Result<CollaborationGraph> {
    if retained.is_empty() {
        return Err(Error::Data("no scholars remain after filtering".into()));
    }
    let mut seen_papers: HashSet<&str> = HashSet::new();
    let mut aggregates: BTreeMap<&str, ScholarAggregate> = BTreeMap::new();
    let mut pair_counts: HashMap<(&str, &str), u32> = HashMap::new();

    for record in window_records {
        if !seen_papers.insert(record.paper_id.as_str()) {
            continue;
        }
        let mut kept: Vec<(usize, &str)> = Vec::new();
        let mut dedup: HashSet<&str> = HashSet::new();
        for (idx, author) in record.authors.iter().enumerate() {
            if retained.contains(author) && dedup.insert(author.as_str()) {
                kept.push((idx, author.as_str()));
            }
        }
        if kept.is_empty() {
            continue;
        }
        for &(idx, author) in &kept {
            let agg = aggregates.entry(author).or_default();
            agg.papers += 1;
            agg.citations += record.citations;
            if let Some(insts) = record.institutions.get(idx) {
                for inst in insts {
                    agg.institutions.insert(inst.clone());
                }
            }
        }
        for i in 0..kept.len() {
            for j in i + 1..kept.len() {
                let (a, b) = (kept[i].1, kept[j].1);
                let pair = if a < b { (a, b) } else { (b, a) };
                *pair_counts.entry(pair).or_insert(0) += 1;
            }
        }
    }

    let nodes: Vec<NodeRecord> = aggregates
        .iter()
        .map(|(id, agg)| NodeRecord {
            id: id.to_string(),
            paper_count: agg.papers,
            institutions: agg.institutions.iter().cloned().collect(),
            citation_sum: agg.citations,
        })
        .collect();
    let edges = pair_counts
        .into_iter()
        .map(|((a, b), cot)| -> Result<EdgeRecord> {
            let pa = aggregates[a].papers;
            let pb = aggregates[b].papers;
            Ok(EdgeRecord {
                a: a.to_string(),
                b: b.to_string(),
                co_count: cot,
                distance: edge_distance(cot, pa, pb)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    CollaborationGraph::from_parts(nodes, edges)
}

/// Restrict a graph to its largest connected component (ties go to the
/// component containing the smallest scholar id). An empty graph is
/// returned unchanged.
pub fn largest_component(graph: &CollaborationGraph) -> Result<CollaborationGraph> {
    if graph.is_empty() {
        return Ok(graph.clone());
    }
    graph.induced_subgraph(&graph.largest_component_nodes())
}

/// Headline statistics of a collaboration network.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetworkProfile {
    pub node_count: usize,
    pub edge_count: usize,
    /// Mean co-authored-paper count over edges.
    pub avg_co_times: f64,
    pub avg_degree: f64,
    pub triangle_count: usize,
    /// Mean local clustering coefficient; nodes of degree < 2 contribute 0.
    pub clustering_coefficient: f64,
}

/// Compute the headline statistics of a graph.
pub fn profile(graph: &CollaborationGraph) -> NetworkProfile {
    let triangles = enumerate_triangles(graph);
    let n = graph.node_count();
    let ccf = if n == 0 {
        0.0
    } else {
        graph
            .nodes()
            .map(|v| {
                let deg = graph.degree(v);
                if deg < 2 {
                    0.0
                } else {
                    2.0 * triangles.per_node_count(v) as f64 / (deg * (deg - 1)) as f64
                }
            })
            .sum::<f64>()
            / n as f64
    };
    NetworkProfile {
        node_count: n,
        edge_count: graph.edge_count(),
        avg_co_times: graph.mean_co_count(),
        avg_degree: graph.mean_degree(),
        triangle_count: triangles.count(),
        clustering_coefficient: ccf,
    }
}

/// Options of the standard ingestion pipeline.
#[derive(Debug, Clone, Default)]
pub struct IngestOptions {
    /// Inclusive year window; both bounds or neither.
    pub window: Option<(i32, i32)>,
    pub min_career_years: u32,
    /// Field whitelist; empty keeps all records.
    pub fields: Vec<String>,
    /// Keep every component instead of only the largest one.
    pub keep_all_components: bool,
}

/// Stage-by-stage counts of one ingestion run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IngestReport {
    pub total_lines: usize,
    pub parsed_records: usize,
    pub rejected: Vec<RejectedLine>,
    pub after_field_filter: usize,
    pub window: Option<(i32, i32)>,
    pub after_window_filter: usize,
    pub retained_scholars: usize,
    pub graph_nodes: usize,
    pub graph_edges: usize,
    pub component_nodes: usize,
    pub component_edges: usize,
}

/// Run the full pipeline: parse → field filter → career filter (whole
/// corpus) → window filter → graph → largest component.
pub fn ingest(text: &str, options: &IngestOptions) -> Result<(CollaborationGraph, IngestReport)> {
    let outcome = parse_publications(text);
    let fielded = filter_fields(&outcome.records, &options.fields);
    let retained = filter_scholars(&fielded, options.min_career_years);
    let windowed = match options.window {
        Some((start, end)) => filter_window(&fielded, start, end)?,
        None => fielded.clone(),
    };
    let full = build_graph(&windowed, &retained)?;
    let graph = if options.keep_all_components {
        full.clone()
    } else {
        largest_component(&full)?
    };
    let report = IngestReport {
        total_lines: outcome.total_lines,
        parsed_records: outcome.records.len(),
        rejected: outcome.rejected,
        after_field_filter: fielded.len(),
        window: options.window,
        after_window_filter: windowed.len(),
        retained_scholars: retained.len(),
        graph_nodes: full.node_count(),
        graph_edges: full.edge_count(),
        component_nodes: graph.node_count(),
        component_edges: graph.edge_count(),
    };
    Ok((graph, report))
}
