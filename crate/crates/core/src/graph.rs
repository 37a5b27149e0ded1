//! Undirected collaboration graph with interned scholar ids.
//!
//! Nodes are scholars; an edge records how many publications two scholars
//! wrote together (`co_count`) and the collaboration distance derived from
//! it. Scholar ids are interned to dense `u32` indices assigned in ascending
//! lexicographic id order, so index order and id order agree and every
//! index-order traversal is reproducible. Adjacency lists are kept sorted by
//! neighbor index and the edge list sorted by `(a, b)`; no iteration that
//! feeds an output ever walks a hash map.

use std::collections::HashMap;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::ioutil::write_atomic;

/// Dense node index; ordering matches lexicographic scholar-id order.
pub type NodeId = u32;

/// Node attributes supplied when assembling a graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodeRecord {
    pub id: String,
    /// Total number of publications attributed to the scholar.
    pub paper_count: u32,
    pub institutions: Vec<String>,
    pub citation_sum: u64,
}

/// Edge attributes supplied when assembling a graph; endpoints are scholar ids.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeRecord {
    pub a: String,
    pub b: String,
    pub co_count: u32,
    pub distance: f64,
}

impl EdgeRecord {
    pub fn new(a: impl Into<String>, b: impl Into<String>, co_count: u32, distance: f64) -> Self {
        EdgeRecord {
            a: a.into(),
            b: b.into(),
            co_count,
            distance,
        }
    }
}

/// A materialized undirected edge between dense node indices, with `a < b`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub a: NodeId,
    pub b: NodeId,
    pub co_count: u32,
    pub distance: f64,
}

/// One entry of a node's sorted adjacency list.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Neighbor {
    pub node: NodeId,
    pub co_count: u32,
    pub distance: f64,
}

#[derive(Debug, Clone, Default)]
pub struct CollaborationGraph {
    ids: Vec<String>,
    index: HashMap<String, NodeId>,
    paper_counts: Vec<u32>,
    institutions: Vec<Vec<String>>,
    citation_sums: Vec<u64>,
    edges: Vec<Edge>,
    adjacency: Vec<Vec<Neighbor>>,
}

fn check_text_field(kind: &str, value: &str, allow_semicolon: bool) -> Result<()> {
    if value.is_empty() {
        return Err(Error::Data(format!("empty {kind}")));
    }
    if value.contains(['\t', '\n', '\r']) {
        return Err(Error::Data(format!(
            "{kind} {value:?} contains tab or newline"
        )));
    }
    if !allow_semicolon && value.contains(';') {
        return Err(Error::Data(format!("{kind} {value:?} contains ';'")));
    }
    Ok(())
}

impl CollaborationGraph {
    /// Assemble a graph from explicit node and edge records.
    ///
    /// Node ids must be unique and edges must reference known ids, connect
    /// two distinct scholars, appear at most once per unordered pair, carry a
    /// positive `co_count`, and a finite distance in `[0, 1)`.
    pub fn from_parts(nodes: Vec<NodeRecord>, edges: Vec<EdgeRecord>) -> Result<Self> {
        let mut nodes = nodes;
        nodes.sort_by(|a, b| a.id.cmp(&b.id));
        if nodes.len() > u32::MAX as usize {
            return Err(Error::Data(
                "more nodes than the index type supports".into(),
            ));
        }

        let mut index = HashMap::with_capacity(nodes.len());
        let mut ids = Vec::with_capacity(nodes.len());
        let mut paper_counts = Vec::with_capacity(nodes.len());
        let mut institutions = Vec::with_capacity(nodes.len());
        let mut citation_sums = Vec::with_capacity(nodes.len());
        for record in nodes {
            check_text_field("scholar id", &record.id, true)?;
            if record.paper_count == 0 {
                return Err(Error::Data(format!(
                    "scholar {:?} has zero publications",
                    record.id
                )));
            }
            let mut insts = record.institutions;
            for inst in &insts {
                check_text_field("institution", inst, false)?;
            }
            insts.sort();
            insts.dedup();
            if index
                .insert(record.id.clone(), ids.len() as NodeId)
                .is_some()
            {
                return Err(Error::Data(format!("duplicate scholar id {:?}", record.id)));
            }
            ids.push(record.id);
            paper_counts.push(record.paper_count);
            institutions.push(insts);
            citation_sums.push(record.citation_sum);
        }

        let mut resolved = Vec::with_capacity(edges.len());
        for record in &edges {
            let a = *index.get(&record.a).ok_or_else(|| {
                Error::Data(format!("edge references unknown scholar {:?}", record.a))
            })?;
            let b = *index.get(&record.b).ok_or_else(|| {
                Error::Data(format!("edge references unknown scholar {:?}", record.b))
            })?;
            if a == b {
                return Err(Error::Data(format!("self loop on scholar {:?}", record.a)));
            }
            if record.co_count == 0 {
                return Err(Error::Data(format!(
                    "edge {:?} -- {:?} has zero co-authored papers",
                    record.a, record.b
                )));
            }
            if !record.distance.is_finite() || !(0.0..1.0).contains(&record.distance) {
                return Err(Error::Data(format!(
                    "edge {:?} -- {:?} has distance {} outside [0, 1)",
                    record.a, record.b, record.distance
                )));
            }
            let (a, b) = if a < b { (a, b) } else { (b, a) };
            resolved.push(Edge {
                a,
                b,
                co_count: record.co_count,
                distance: record.distance,
            });
        }
        resolved.sort_by_key(|e| (e.a, e.b));
        for pair in resolved.windows(2) {
            if pair[0].a == pair[1].a && pair[0].b == pair[1].b {
                return Err(Error::Data(format!(
                    "duplicate edge {:?} -- {:?}",
                    ids[pair[0].a as usize], ids[pair[0].b as usize]
                )));
            }
        }

        let mut adjacency = vec![Vec::new(); ids.len()];
        for edge in &resolved {
            adjacency[edge.a as usize].push(Neighbor {
                node: edge.b,
                co_count: edge.co_count,
                distance: edge.distance,
            });
            adjacency[edge.b as usize].push(Neighbor {
                node: edge.a,
                co_count: edge.co_count,
                distance: edge.distance,
            });
        }
        for list in &mut adjacency {
            list.sort_by_key(|n| n.node);
        }

        Ok(CollaborationGraph {
            ids,
            index,
            paper_counts,
            institutions,
            citation_sums,
            edges: resolved,
            adjacency,
        })
    }

    /// Assemble a graph from weighted edges alone. The node set is the set of
    /// endpoints; each scholar's paper count is the largest co-authored count
    /// on an incident edge, institutions are empty and citations zero. Handy
    /// for synthetic graphs and tests.
    pub fn from_weighted_edges(edges: Vec<EdgeRecord>) -> Result<Self> {
        let mut counts: HashMap<&str, u32> = HashMap::new();
        for record in &edges {
            for id in [record.a.as_str(), record.b.as_str()] {
                let entry = counts.entry(id).or_insert(0);
                *entry = (*entry).max(record.co_count);
            }
        }
        let mut nodes: Vec<NodeRecord> = counts
            .into_iter()
            .map(|(id, paper_count)| NodeRecord {
                id: id.to_string(),
                paper_count: paper_count.max(1),
                institutions: Vec::new(),
                citation_sum: 0,
            })
            .collect();
        nodes.sort_by(|a, b| a.id.cmp(&b.id));
        Self::from_parts(nodes, edges)
    }

    pub fn node_count(&self) -> usize {
        self.ids.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    /// Dense indices in ascending order.
    pub fn nodes(&self) -> impl Iterator<Item = NodeId> {
        0..self.ids.len() as NodeId
    }

    pub fn scholar_id(&self, v: NodeId) -> &str {
        &self.ids[v as usize]
    }

    pub fn node(&self, id: &str) -> Option<NodeId> {
        self.index.get(id).copied()
    }

    pub fn paper_count(&self, v: NodeId) -> u32 {
        self.paper_counts[v as usize]
    }

    /// Sorted, deduplicated institution names for a scholar; may be empty.
    pub fn institutions(&self, v: NodeId) -> &[String] {
        &self.institutions[v as usize]
    }

    pub fn citation_sum(&self, v: NodeId) -> u64 {
        self.citation_sums[v as usize]
    }

    pub fn degree(&self, v: NodeId) -> usize {
        self.adjacency[v as usize].len()
    }

    /// Adjacency list of `v`, sorted by neighbor index.
    pub fn neighbors(&self, v: NodeId) -> &[Neighbor] {
        &self.adjacency[v as usize]
    }

    /// Edge list sorted by `(a, b)` with `a < b`.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn has_edge(&self, a: NodeId, b: NodeId) -> bool {
        self.adjacency[a as usize]
            .binary_search_by_key(&b, |n| n.node)
            .is_ok()
    }

    pub fn edge_between(&self, a: NodeId, b: NodeId) -> Option<Neighbor> {
        self.adjacency[a as usize]
            .binary_search_by_key(&b, |n| n.node)
            .ok()
            .map(|i| self.adjacency[a as usize][i])
    }

    /// Connected components as sorted node lists, ordered by smallest member.
    pub fn components(&self) -> Vec<Vec<NodeId>> {
        let n = self.node_count();
        let mut seen = vec![false; n];
        let mut components = Vec::new();
        let mut stack = Vec::new();
        for seed in 0..n {
            if seen[seed] {
                continue;
            }
            seen[seed] = true;
            stack.push(seed as NodeId);
            let mut members = Vec::new();
            while let Some(v) = stack.pop() {
                members.push(v);
                for neighbor in self.neighbors(v) {
                    if !seen[neighbor.node as usize] {
                        seen[neighbor.node as usize] = true;
                        stack.push(neighbor.node);
                    }
                }
            }
            members.sort_unstable();
            components.push(members);
        }
        components
    }

    /// Nodes of the largest connected component; among equally large
    /// components the one containing the smallest index wins.
    pub fn largest_component_nodes(&self) -> Vec<NodeId> {
        let mut best: Vec<NodeId> = Vec::new();
        for component in self.components() {
            if component.len() > best.len() {
                best = component;
            }
        }
        best
    }

    /// Subgraph induced by `keep` (any order, duplicates rejected). Node
    /// attributes carry over; edges survive iff both endpoints are kept.
    pub fn induced_subgraph(&self, keep: &[NodeId]) -> Result<CollaborationGraph> {
        let mut keep = keep.to_vec();
        keep.sort_unstable();
        if keep.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidArgument(
                "duplicate node in subgraph selection".into(),
            ));
        }
        if let Some(&v) = keep.last() {
            if v as usize >= self.node_count() {
                return Err(Error::InvalidArgument(format!(
                    "node index {v} out of range"
                )));
            }
        }
        let mut member = vec![false; self.node_count()];
        for &v in &keep {
            member[v as usize] = true;
        }
        let nodes = keep
            .iter()
            .map(|&v| NodeRecord {
                id: self.ids[v as usize].clone(),
                paper_count: self.paper_counts[v as usize],
                institutions: self.institutions[v as usize].clone(),
                citation_sum: self.citation_sums[v as usize],
            })
            .collect();
        let edges = self
            .edges
            .iter()
            .filter(|e| member[e.a as usize] && member[e.b as usize])
            .map(|e| EdgeRecord {
                a: self.ids[e.a as usize].clone(),
                b: self.ids[e.b as usize].clone(),
                co_count: e.co_count,
                distance: e.distance,
            })
            .collect();
        Self::from_parts(nodes, edges)
    }

    /// Sum of `co_count` over all edges divided by the edge count; 0 for an
    /// edgeless graph.
    pub fn mean_co_count(&self) -> f64 {
        if self.edges.is_empty() {
            return 0.0;
        }
        let total: u64 = self.edges.iter().map(|e| e.co_count as u64).sum();
        total as f64 / self.edges.len() as f64
    }

    pub fn mean_degree(&self) -> f64 {
        if self.ids.is_empty() {
            return 0.0;
        }
        2.0 * self.edges.len() as f64 / self.ids.len() as f64
    }

    /// Render `nodes.tsv`: `id`, `paper_count`, `;`-joined institutions and
    /// `citation_sum`, one scholar per line in id order.
    pub fn nodes_tsv(&self) -> String {
        let mut out = String::new();
        for v in self.nodes() {
            out.push_str(&format!(
                "{}\t{}\t{}\t{}\n",
                self.ids[v as usize],
                self.paper_counts[v as usize],
                self.institutions[v as usize].join(";"),
                self.citation_sums[v as usize]
            ));
        }
        out
    }

    /// Render `edges.tsv`: `a`, `b`, `co_count`, `distance` with `a < b`,
    /// sorted; distances are printed in shortest round-trip form so
    /// re-reading is lossless.
    pub fn edges_tsv(&self) -> String {
        let mut out = String::new();
        for edge in &self.edges {
            out.push_str(&format!(
                "{}\t{}\t{}\t{}\n",
                self.ids[edge.a as usize], self.ids[edge.b as usize], edge.co_count, edge.distance
            ));
        }
        out
    }

    /// Write `nodes.tsv` and `edges.tsv` into `dir` (created if missing).
    pub fn write_snapshot(&self, dir: &Path) -> Result<()> {
        write_atomic(&dir.join("nodes.tsv"), self.nodes_tsv().as_bytes())?;
        write_atomic(&dir.join("edges.tsv"), self.edges_tsv().as_bytes())?;
        Ok(())
    }

    /// Read a snapshot previously written by [`write_snapshot`].
    ///
    /// [`write_snapshot`]: CollaborationGraph::write_snapshot
    pub fn read_snapshot(dir: &Path) -> Result<Self> {
        let nodes_path = dir.join("nodes.tsv");
        let edges_path = dir.join("edges.tsv");
        let nodes_text = fs::read_to_string(&nodes_path)
            .map_err(|err| Error::Data(format!("cannot read {}: {err}", nodes_path.display())))?;
        let edges_text = fs::read_to_string(&edges_path)
            .map_err(|err| Error::Data(format!("cannot read {}: {err}", edges_path.display())))?;

        let mut nodes = Vec::new();
        for (lineno, line) in nodes_text.lines().enumerate() {
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split('\t').collect();
            if fields.len() != 4 {
                return Err(Error::Data(format!(
                    "nodes.tsv line {}: expected 4 tab-separated fields, found {}",
                    lineno + 1,
                    fields.len()
                )));
            }
            let paper_count: u32 = fields[1].parse().map_err(|_| {
                Error::Data(format!(
                    "nodes.tsv line {}: bad paper count {:?}",
                    lineno + 1,
                    fields[1]
                ))
            })?;
            let citation_sum: u64 = fields[3].parse().map_err(|_| {
                Error::Data(format!(
                    "nodes.tsv line {}: bad citation sum {:?}",
                    lineno + 1,
                    fields[3]
                ))
            })?;
            let institutions = if fields[2].is_empty() {
                Vec::new()
            } else {
                fields[2].split(';').map(str::to_string).collect()
            };
            nodes.push(NodeRecord {
                id: fields[0].to_string(),
                paper_count,
                institutions,
                citation_sum,
            });
        }

        let mut edges = Vec::new();
        for (lineno, line) in edges_text.lines().enumerate() {
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split('\t').collect();
            if fields.len() != 4 {
                return Err(Error::Data(format!(
                    "edges.tsv line {}: expected 4 tab-separated fields, found {}",
                    lineno + 1,
                    fields.len()
                )));
            }
            let co_count: u32 = fields[2].parse().map_err(|_| {
                Error::Data(format!(
                    "edges.tsv line {}: bad co-author count {:?}",
                    lineno + 1,
                    fields[2]
                ))
            })?;
            let distance: f64 = fields[3].parse().map_err(|_| {
                Error::Data(format!(
                    "edges.tsv line {}: bad distance {:?}",
                    lineno + 1,
                    fields[3]
                ))
            })?;
            edges.push(EdgeRecord {
                a: fields[0].to_string(),
                b: fields[1].to_string(),
                co_count,
                distance,
            });
        }

        Self::from_parts(nodes, edges)
    }
}
