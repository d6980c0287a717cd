//! Brute-force reference computations for small instances.
//!
//! Everything here works on explicit edge sets and recomputes costs from
//! their set definitions (missing edges, remaining edges, bi-clique lists).
//! None of it goes through [`Universe::saving`](crate::cost::Universe::saving)
//! or the adjacency machinery of [`TemporalGraph`], so it can check them.

use std::collections::HashSet;

use crate::cost::CostBreakdown;
use crate::error::{Error, Result};
use crate::graph::{ObjectSubset, ResidualGraph, TemporalGraph, Triple};

pub const MAX_OBJECTS: usize = 14;

/// A universe and an explicit edge set over it.
#[derive(Clone, Debug)]
pub struct EdgeSet {
    pub counts: [u32; 3],
    pub edges: HashSet<Triple>,
}

impl EdgeSet {
    pub fn of_graph(graph: &TemporalGraph) -> Self {
        EdgeSet {
            counts: graph.counts(),
            edges: graph.edges().iter().copied().collect(),
        }
    }

    pub fn of_residual(residual: &ResidualGraph<'_>) -> Self {
        let base = residual.base();
        EdgeSet {
            counts: base.counts(),
            edges: residual.alive_edges().map(|id| base.edge(id)).collect(),
        }
    }

    fn num_objects(&self) -> usize {
        self.counts.iter().map(|&c| c as usize).sum()
    }

    fn edge_bits(&self) -> f64 {
        self.counts
            .iter()
            .map(|&c| if c == 0 { 0.0 } else { (c as f64).log2() })
            .sum()
    }

    fn object_bits(&self) -> f64 {
        (self.num_objects() as f64).log2()
    }

    /// Total cost with `M` built per bi-clique and `R` as an explicit set.
    pub fn cost(&self, bicliques: &[ObjectSubset]) -> CostBreakdown {
        let mut missing: Vec<Triple> = Vec::new();
        let mut covered: HashSet<Triple> = HashSet::new();
        let mut listed_objects = 0.0;
        for b in bicliques {
            for e in b.span() {
                if self.edges.contains(&e) {
                    covered.insert(e);
                } else {
                    missing.push(e);
                }
            }
            let n = b.sources.len() + b.destinations.len() + b.timestamps.len();
            listed_objects += (n + 1) as f64 * self.object_bits();
        }
        let remaining: Vec<&Triple> = self.edges.iter().filter(|e| !covered.contains(*e)).collect();
        CostBreakdown::new(
            missing.len() as f64 * self.edge_bits(),
            remaining.len() as f64 * self.edge_bits(),
            listed_objects,
        )
    }

    /// Cost of the empty model minus cost of the one-bi-clique model.
    pub fn saving(&self, subset: &ObjectSubset) -> f64 {
        self.cost(&[]).total_bits - self.cost(std::slice::from_ref(subset)).total_bits
    }
}

/// Total cost of `graph` under `bicliques`, from set definitions.
pub fn direct_cost(graph: &TemporalGraph, bicliques: &[ObjectSubset]) -> CostBreakdown {
    EdgeSet::of_graph(graph).cost(bicliques)
}

/// Exhaustive search over all `2^|I|` object subsets for the largest
/// first-principles saving. Ties go to the lexicographically smallest list
/// of global indices.
pub fn brute_best_subset(set: &EdgeSet, max_objects: usize) -> Result<(ObjectSubset, f64)> {
    let limit = max_objects.min(MAX_OBJECTS);
    let n = set.num_objects();
    if n > limit {
        return Err(Error::TooManyObjects { actual: n, limit });
    }
    let offsets = [0u32, set.counts[0], set.counts[0] + set.counts[1]];
    let split = |globals: &[u32]| {
        let mut parts: [Vec<u32>; 3] = Default::default();
        for &g in globals {
            let k = if g >= offsets[2] {
                2
            } else if g >= offsets[1] {
                1
            } else {
                0
            };
            parts[k].push(g - offsets[k]);
        }
        let [s, d, t] = parts;
        ObjectSubset::new(s, d, t)
    };

    let mut best: Option<(Vec<u32>, f64)> = None;
    for mask in 0u32..(1u32 << n) {
        let globals: Vec<u32> = (0..n as u32).filter(|&i| mask & (1 << i) != 0).collect();
        let saving = set.saving(&split(&globals));
        let better = match &best {
            None => true,
            Some((bg, bs)) => saving > *bs || (saving == *bs && globals < *bg),
        };
        if better {
            best = Some((globals, saving));
        }
    }
    let (globals, saving) = best.expect("at least the empty subset is enumerated");
    Ok((split(&globals), saving))
}
