//! Seeded synthetic temporal graphs: uniform random edge sets and planted
//! near bi-cliques.

use std::collections::HashSet;
use std::str::FromStr;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{ObjectSubset, TemporalGraph, Triple};

/// Objects per kind for a uniform random graph of `num_edges` edges:
/// 0.1% of the edge count, at least one.
pub fn er_objects_per_kind(num_edges: u64) -> u32 {
    (num_edges / 1000).max(1) as u32
}

/// Uniform random graph with exactly `num_edges` distinct edges and
/// `er_objects_per_kind(num_edges)` objects of each kind.
pub fn gen_er(num_edges: u64, seed: u64) -> Result<TemporalGraph> {
    let n = er_objects_per_kind(num_edges);
    let edges = sample_edges([n, n, n], num_edges, &HashSet::new(), seed)?;
    TemporalGraph::from_edges([n, n, n], edges)
}

/// Draws `count` distinct triples uniformly from the universe, avoiding
/// `exclude`.
fn sample_edges(counts: [u32; 3], count: u64, exclude: &HashSet<Triple>, seed: u64) -> Result<Vec<Triple>> {
    let space = counts.iter().map(|&c| c as u64).product::<u64>();
    let free = space - exclude.len() as u64;
    if count > free {
        return Err(Error::InsufficientUniverse(format!(
            "{count} edges requested but only {free} of {space} triples are available"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen: HashSet<Triple> = HashSet::with_capacity(count as usize);
    let mut out = Vec::with_capacity(count as usize);
    while (out.len() as u64) < count {
        let e = [
            rng.gen_range(0..counts[0]),
            rng.gen_range(0..counts[1]),
            rng.gen_range(0..counts[2]),
        ];
        if !exclude.contains(&e) && seen.insert(e) {
            out.push(e);
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PlantSpec {
    pub widths: [u32; 3],
    /// Fraction of span edges present, in `(0.5, 1]`.
    pub fill: f64,
}

impl PlantSpec {
    pub fn new(widths: [u32; 3], fill: f64) -> Result<Self> {
        if widths.contains(&0) {
            return Err(Error::InvalidConfig(format!(
                "plant widths must be positive, got {widths:?}"
            )));
        }
        if !(fill > 0.5 && fill <= 1.0) {
            return Err(Error::InvalidConfig(format!(
                "plant fill must lie in (0.5, 1], got {fill}"
            )));
        }
        Ok(PlantSpec { widths, fill })
    }

    pub fn span(&self) -> u64 {
        self.widths.iter().map(|&w| w as u64).product()
    }

    /// `⌈fill · span⌉`
    pub fn edge_count(&self) -> u64 {
        let exact = self.fill * self.span() as f64;
        // shave float noise so that e.g. 0.9 · 50 stays 45
        (exact - 1e-9).ceil().max(1.0) as u64
    }
}

/// Parses `WxHxT` or `WxHxT:fill` (fill defaults to 1).
impl FromStr for PlantSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidConfig(format!("bad plant spec {s:?}, expected WxHxT[:fill]"));
        let (dims, fill) = match s.split_once(':') {
            Some((d, f)) => (d, f.parse::<f64>().map_err(|_| bad())?),
            None => (s, 1.0),
        };
        let widths: Vec<u32> = dims
            .split('x')
            .map(|w| w.trim().parse::<u32>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| bad())?;
        let widths: [u32; 3] = widths.try_into().map_err(|_| bad())?;
        PlantSpec::new(widths, fill)
    }
}

/// Plants each spec on its own fresh block of object indices, claimed in
/// order from index 0 of every kind. Without a base graph the universe is
/// exactly the plants; with one, its edges are kept and its universe must
/// be large enough to hold every plant.
pub fn plant(
    base: Option<&TemporalGraph>,
    specs: &[PlantSpec],
    seed: u64,
) -> Result<(TemporalGraph, Vec<ObjectSubset>)> {
    let mut needed = [0u32; 3];
    for spec in specs {
        for (n, w) in needed.iter_mut().zip(spec.widths) {
            *n += w;
        }
    }
    let counts = match base {
        Some(g) => {
            let have = g.counts();
            if (0..3).any(|p| have[p] < needed[p]) {
                return Err(Error::InsufficientUniverse(format!(
                    "plants need {needed:?} objects per kind, base has {have:?}"
                )));
            }
            have
        }
        None => needed,
    };
    if counts.contains(&0) {
        return Err(Error::InsufficientUniverse("no objects to plant on".into()));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges: Vec<Triple> = base.map(|g| g.edges().to_vec()).unwrap_or_default();
    let mut truth = Vec::with_capacity(specs.len());
    let mut cursor = [0u32; 3];
    for spec in specs {
        let subset = ObjectSubset::new(
            (cursor[0]..cursor[0] + spec.widths[0]).collect(),
            (cursor[1]..cursor[1] + spec.widths[1]).collect(),
            (cursor[2]..cursor[2] + spec.widths[2]).collect(),
        );
        let span: Vec<Triple> = subset.span().collect();
        let k = spec.edge_count() as usize;
        for i in sample(&mut rng, span.len(), k) {
            edges.push(span[i]);
        }
        for (c, w) in cursor.iter_mut().zip(spec.widths) {
            *c += w;
        }
        truth.push(subset);
    }
    let graph = TemporalGraph::from_edges(counts, edges)?;
    Ok((graph, truth))
}

/// Adds `count` uniformly random new edges to `graph`.
pub fn add_noise(graph: &TemporalGraph, count: u64, seed: u64) -> Result<TemporalGraph> {
    let existing: HashSet<Triple> = graph.edges().iter().copied().collect();
    let mut edges = graph.edges().to_vec();
    edges.extend(sample_edges(graph.counts(), count, &existing, seed)?);
    TemporalGraph::from_edges(graph.counts(), edges)
}
