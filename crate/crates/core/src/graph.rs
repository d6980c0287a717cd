//! Temporal graph data model: the immutable edge set, object subsets,
//! mined near bi-cliques and the mutable residual view used while mining.

use std::collections::HashMap;
use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Position of an edge in [`TemporalGraph::edges`].
pub type EdgeId = u32;

/// An edge as `[source, destination, timestamp]` per-kind indices.
pub type Triple = [u32; 3];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ObjectKind {
    Source,
    Destination,
    Timestamp,
}

impl ObjectKind {
    pub const ALL: [ObjectKind; 3] = [ObjectKind::Source, ObjectKind::Destination, ObjectKind::Timestamp];

    /// Coordinate of this kind inside a [`Triple`].
    pub fn position(self) -> usize {
        match self {
            ObjectKind::Source => 0,
            ObjectKind::Destination => 1,
            ObjectKind::Timestamp => 2,
        }
    }

    pub fn from_position(pos: usize) -> ObjectKind {
        Self::ALL[pos]
    }

    pub fn short_name(self) -> &'static str {
        match self {
            ObjectKind::Source => "S",
            ObjectKind::Destination => "D",
            ObjectKind::Timestamp => "T",
        }
    }
}

/// Immutable, deduplicated set of `(s, d, t)` edges with per-object adjacency.
///
/// Objects of the three kinds live in disjoint namespaces. Each object also
/// has a global index: sources first, then destinations, then timestamps.
/// Edges are stored in canonical `(s, d, t)` ascending order, so an
/// [`EdgeId`] is the rank of the triple in that order.
#[derive(Clone, Debug)]
pub struct TemporalGraph {
    counts: [u32; 3],
    edges: Vec<Triple>,
    labels: Option<[Vec<String>; 3]>,
    adj_offsets: Vec<usize>,
    adj_edges: Vec<EdgeId>,
}

impl TemporalGraph {
    /// Builds a graph over `counts = [|S|, |D|, |T|]` from index triples.
    /// Duplicate triples collapse to one edge.
    pub fn from_edges<I>(counts: [u32; 3], edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = Triple>,
    {
        let mut edges: Vec<Triple> = edges.into_iter().collect();
        for e in &edges {
            for kind in ObjectKind::ALL {
                let p = kind.position();
                if e[p] >= counts[p] {
                    return Err(Error::IndexOutOfRange {
                        kind,
                        index: e[p],
                        count: counts[p],
                    });
                }
            }
        }
        edges.sort_unstable();
        edges.dedup();
        if edges.len() > u32::MAX as usize {
            return Err(Error::InvalidConfig("more than 2^32 edges".into()));
        }

        let num_objects = counts.iter().map(|&c| c as usize).sum::<usize>();
        let offsets = [0, counts[0] as usize, (counts[0] + counts[1]) as usize];
        let mut degree = vec![0usize; num_objects + 1];
        for e in &edges {
            for p in 0..3 {
                degree[offsets[p] + e[p] as usize + 1] += 1;
            }
        }
        for i in 1..degree.len() {
            degree[i] += degree[i - 1];
        }
        let adj_offsets = degree;
        let mut cursor = adj_offsets.clone();
        let mut adj_edges = vec![0 as EdgeId; edges.len() * 3];
        for (id, e) in edges.iter().enumerate() {
            for p in 0..3 {
                let g = offsets[p] + e[p] as usize;
                adj_edges[cursor[g]] = id as EdgeId;
                cursor[g] += 1;
            }
        }

        Ok(TemporalGraph {
            counts,
            edges,
            labels: None,
            adj_offsets,
            adj_edges,
        })
    }

    /// Attaches external labels, one table per kind, indexed by dense index.
    pub fn with_labels(mut self, labels: [Vec<String>; 3]) -> Result<Self> {
        for kind in ObjectKind::ALL {
            let p = kind.position();
            if labels[p].len() != self.counts[p] as usize {
                return Err(Error::InvalidConfig(format!(
                    "{} labels for {:?}, expected {}",
                    labels[p].len(),
                    kind,
                    self.counts[p]
                )));
            }
        }
        self.labels = Some(labels);
        Ok(self)
    }

    /// Parses an edge list: one `source destination timestamp` triple per
    /// line, split on `separator` (or any whitespace when `None`). Blank
    /// lines and lines starting with `#` are skipped. Labels get dense
    /// indices in order of first appearance, separately per kind.
    pub fn load_edge_list<R: BufRead>(reader: R, separator: Option<char>) -> Result<Self> {
        let mut maps: [HashMap<String, u32>; 3] = Default::default();
        let mut tables: [Vec<String>; 3] = Default::default();
        let mut triples = Vec::new();

        for (n, line) in reader.lines().enumerate() {
            let line = line?;
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = match separator {
                Some(c) => trimmed.split(c).map(str::trim).collect(),
                None => trimmed.split_whitespace().collect(),
            };
            if fields.len() != 3 || fields.iter().any(|f| f.is_empty()) {
                return Err(Error::Parse {
                    line: n + 1,
                    message: format!("expected 3 fields, found {}", fields.len()),
                });
            }
            let mut triple = [0u32; 3];
            for p in 0..3 {
                let next = tables[p].len() as u32;
                let idx = *maps[p].entry(fields[p].to_string()).or_insert_with(|| {
                    tables[p].push(fields[p].to_string());
                    next
                });
                triple[p] = idx;
            }
            triples.push(triple);
        }

        if triples.is_empty() {
            return Err(Error::EmptyGraph);
        }
        let counts = [tables[0].len() as u32, tables[1].len() as u32, tables[2].len() as u32];
        TemporalGraph::from_edges(counts, triples)?.with_labels(tables)
    }

    pub fn load_edge_list_str(text: &str) -> Result<Self> {
        Self::load_edge_list(text.as_bytes(), None)
    }

    /// Writes edges in canonical `(s, d, t)` index order, tab-separated,
    /// using labels when present.
    pub fn write_edge_list<W: Write>(&self, mut out: W) -> Result<()> {
        for e in &self.edges {
            match &self.labels {
                Some(l) => writeln!(
                    out,
                    "{}\t{}\t{}",
                    l[0][e[0] as usize], l[1][e[1] as usize], l[2][e[2] as usize]
                )?,
                None => writeln!(out, "{}\t{}\t{}", e[0], e[1], e[2])?,
            }
        }
        Ok(())
    }

    pub fn counts(&self) -> [u32; 3] {
        self.counts
    }

    pub fn count(&self, kind: ObjectKind) -> u32 {
        self.counts[kind.position()]
    }

    pub fn num_sources(&self) -> u32 {
        self.counts[0]
    }

    pub fn num_destinations(&self) -> u32 {
        self.counts[1]
    }

    pub fn num_timestamps(&self) -> u32 {
        self.counts[2]
    }

    /// `|I| = |S| + |D| + |T|`.
    pub fn num_objects(&self) -> usize {
        self.counts.iter().map(|&c| c as usize).sum()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn edges(&self) -> &[Triple] {
        &self.edges
    }

    pub fn edge(&self, id: EdgeId) -> Triple {
        self.edges[id as usize]
    }

    pub fn labels(&self) -> Option<&[Vec<String>; 3]> {
        self.labels.as_ref()
    }

    pub fn label(&self, kind: ObjectKind, index: u32) -> Option<&str> {
        self.labels
            .as_ref()
            .map(|l| l[kind.position()][index as usize].as_str())
    }

    fn kind_offset(&self, kind: ObjectKind) -> u32 {
        match kind {
            ObjectKind::Source => 0,
            ObjectKind::Destination => self.counts[0],
            ObjectKind::Timestamp => self.counts[0] + self.counts[1],
        }
    }

    pub fn global_index(&self, kind: ObjectKind, index: u32) -> u32 {
        self.kind_offset(kind) + index
    }

    /// Inverse of [`global_index`](Self::global_index).
    pub fn object_of(&self, global: u32) -> (ObjectKind, u32) {
        if global < self.counts[0] {
            (ObjectKind::Source, global)
        } else if global < self.counts[0] + self.counts[1] {
            (ObjectKind::Destination, global - self.counts[0])
        } else {
            (ObjectKind::Timestamp, global - self.counts[0] - self.counts[1])
        }
    }

    /// Global indices of the three endpoints of an edge.
    pub fn edge_globals(&self, id: EdgeId) -> [u32; 3] {
        let e = self.edges[id as usize];
        [e[0], self.counts[0] + e[1], self.counts[0] + self.counts[1] + e[2]]
    }

    /// Edges incident to the object with the given global index.
    pub fn incident(&self, global: u32) -> &[EdgeId] {
        let g = global as usize;
        &self.adj_edges[self.adj_offsets[g]..self.adj_offsets[g + 1]]
    }

    pub fn degree(&self, global: u32) -> usize {
        self.incident(global).len()
    }

    pub fn check_subset(&self, subset: &ObjectSubset) -> Result<()> {
        for kind in ObjectKind::ALL {
            let count = self.count(kind);
            if let Some(&bad) = subset.get(kind).iter().find(|&&i| i >= count) {
                return Err(Error::IndexOutOfRange {
                    kind,
                    index: bad,
                    count,
                });
            }
        }
        Ok(())
    }

    /// Ids of the edges with all three endpoints in `subset`, ascending.
    pub fn induced_edges(&self, subset: &ObjectSubset) -> Result<Vec<EdgeId>> {
        self.check_subset(subset)?;
        Ok(self.induced_filtered(subset, |_| true))
    }

    /// `|E_Ĩ|`: number of edges induced by `subset`.
    pub fn induced_edge_count(&self, subset: &ObjectSubset) -> Result<u64> {
        Ok(self.induced_edges(subset)?.len() as u64)
    }

    /// Scans the adjacency of the subset's cheapest kind and keeps edges
    /// whose other two endpoints are members and which pass `keep`.
    pub(crate) fn induced_filtered<F: Fn(EdgeId) -> bool>(&self, subset: &ObjectSubset, keep: F) -> Vec<EdgeId> {
        if subset.potential_size() == 0 {
            return Vec::new();
        }
        let kind = ObjectKind::ALL
            .into_iter()
            .min_by_key(|&k| {
                subset
                    .get(k)
                    .iter()
                    .map(|&i| self.degree(self.global_index(k, i)))
                    .sum::<usize>()
            })
            .unwrap();
        let mut out = Vec::new();
        for &i in subset.get(kind) {
            for &id in self.incident(self.global_index(kind, i)) {
                if keep(id) && subset.contains_triple(&self.edges[id as usize]) {
                    out.push(id);
                }
            }
        }
        out.sort_unstable();
        out
    }
}

/// Candidate bi-clique object sets `(S̃, D̃, T̃)`, each sorted and unique.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ObjectSubset {
    pub sources: Vec<u32>,
    pub destinations: Vec<u32>,
    pub timestamps: Vec<u32>,
}

impl ObjectSubset {
    pub fn new(mut sources: Vec<u32>, mut destinations: Vec<u32>, mut timestamps: Vec<u32>) -> Self {
        for v in [&mut sources, &mut destinations, &mut timestamps] {
            v.sort_unstable();
            v.dedup();
        }
        ObjectSubset {
            sources,
            destinations,
            timestamps,
        }
    }

    /// Every object of the graph's universe.
    pub fn full(graph: &TemporalGraph) -> Self {
        ObjectSubset {
            sources: (0..graph.num_sources()).collect(),
            destinations: (0..graph.num_destinations()).collect(),
            timestamps: (0..graph.num_timestamps()).collect(),
        }
    }

    /// Builds a subset from global object indices of `graph`.
    pub fn from_globals<I: IntoIterator<Item = u32>>(graph: &TemporalGraph, globals: I) -> Self {
        let mut parts: [Vec<u32>; 3] = Default::default();
        for g in globals {
            let (kind, idx) = graph.object_of(g);
            parts[kind.position()].push(idx);
        }
        let [s, d, t] = parts;
        ObjectSubset::new(s, d, t)
    }

    pub fn get(&self, kind: ObjectKind) -> &[u32] {
        match kind {
            ObjectKind::Source => &self.sources,
            ObjectKind::Destination => &self.destinations,
            ObjectKind::Timestamp => &self.timestamps,
        }
    }

    pub fn sizes(&self) -> [u64; 3] {
        [
            self.sources.len() as u64,
            self.destinations.len() as u64,
            self.timestamps.len() as u64,
        ]
    }

    /// `|Ĩ| = |S̃| + |D̃| + |T̃|`.
    pub fn total_size(&self) -> u64 {
        self.sizes().iter().sum()
    }

    /// `|S̃|·|D̃|·|T̃|`, the number of edges a full bi-clique on these objects has.
    pub fn potential_size(&self) -> u64 {
        self.sizes().iter().product()
    }

    pub fn contains(&self, kind: ObjectKind, index: u32) -> bool {
        self.get(kind).binary_search(&index).is_ok()
    }

    pub fn contains_triple(&self, e: &Triple) -> bool {
        self.sources.binary_search(&e[0]).is_ok()
            && self.destinations.binary_search(&e[1]).is_ok()
            && self.timestamps.binary_search(&e[2]).is_ok()
    }

    /// Global indices of all members, ascending.
    pub fn globals(&self, graph: &TemporalGraph) -> Vec<u32> {
        ObjectKind::ALL
            .into_iter()
            .flat_map(|k| self.get(k).iter().map(move |&i| graph.global_index(k, i)))
            .collect()
    }

    /// All span triples `S̃ × D̃ × T̃` in canonical order.
    pub fn span(&self) -> impl Iterator<Item = Triple> + '_ {
        self.sources.iter().flat_map(move |&s| {
            self.destinations
                .iter()
                .flat_map(move |&d| self.timestamps.iter().map(move |&t| [s, d, t]))
        })
    }
}

/// An accepted near bi-clique.
///
/// `edge_count` and `missing_count` are measured against the original
/// graph; `residual_edge_count` is the number of residual edges it claimed
/// when accepted, which is what `acceptance_saving` was computed from.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NearBiclique {
    pub objects: ObjectSubset,
    pub edge_count: u64,
    pub missing_count: u64,
    pub residual_edge_count: u64,
    pub acceptance_saving: f64,
}

impl NearBiclique {
    pub(crate) fn from_original(
        graph: &TemporalGraph,
        objects: ObjectSubset,
        residual_edge_count: u64,
        saving: f64,
    ) -> Self {
        let edge_count = graph.induced_filtered(&objects, |_| true).len() as u64;
        let missing_count = objects.potential_size() - edge_count;
        NearBiclique {
            objects,
            edge_count,
            missing_count,
            residual_edge_count,
            acceptance_saving: saving,
        }
    }

    pub fn density(&self) -> f64 {
        let p = self.objects.potential_size();
        if p == 0 {
            0.0
        } else {
            self.edge_count as f64 / p as f64
        }
    }
}

/// Live-edge view `G'` over a [`TemporalGraph`]. Edges can only be removed.
#[derive(Clone, Debug)]
pub struct ResidualGraph<'a> {
    base: &'a TemporalGraph,
    alive: Vec<bool>,
    live_count: usize,
    degree: Vec<u32>,
}

impl<'a> ResidualGraph<'a> {
    pub fn new(base: &'a TemporalGraph) -> Self {
        let degree = (0..base.num_objects() as u32).map(|g| base.degree(g) as u32).collect();
        ResidualGraph {
            base,
            alive: vec![true; base.num_edges()],
            live_count: base.num_edges(),
            degree,
        }
    }

    pub fn base(&self) -> &'a TemporalGraph {
        self.base
    }

    /// `|E'|`.
    pub fn live_count(&self) -> usize {
        self.live_count
    }

    pub fn is_alive(&self, id: EdgeId) -> bool {
        self.alive[id as usize]
    }

    /// Residual degree of the object with the given global index.
    pub fn degree(&self, global: u32) -> u32 {
        self.degree[global as usize]
    }

    pub fn alive_edges(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.alive
            .iter()
            .enumerate()
            .filter(|(_, &a)| a)
            .map(|(i, _)| i as EdgeId)
    }

    /// Alive edges induced by `subset`, ascending.
    pub fn induced_edges(&self, subset: &ObjectSubset) -> Result<Vec<EdgeId>> {
        self.base.check_subset(subset)?;
        Ok(self.base.induced_filtered(subset, |id| self.alive[id as usize]))
    }

    /// `|E'_Ĩ|`.
    pub fn induced_edge_count(&self, subset: &ObjectSubset) -> Result<u64> {
        Ok(self.induced_edges(subset)?.len() as u64)
    }

    /// Kills every alive edge induced by `subset` and returns how many died.
    pub fn remove_edges(&mut self, subset: &ObjectSubset) -> Result<u64> {
        let ids = self.induced_edges(subset)?;
        Ok(self.remove_edge_ids(&ids))
    }

    /// Kills the given edges; already-dead ids are ignored.
    pub fn remove_edge_ids(&mut self, ids: &[EdgeId]) -> u64 {
        let mut removed = 0;
        for &id in ids {
            if !self.alive[id as usize] {
                continue;
            }
            self.alive[id as usize] = false;
            self.live_count -= 1;
            for g in self.base.edge_globals(id) {
                self.degree[g as usize] -= 1;
            }
            removed += 1;
        }
        removed
    }
}
