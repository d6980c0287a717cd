//! Description-length accounting, in bits.
//!
//! A model of a graph is a list of bi-cliques `B`, the span edges of those
//! bi-cliques that are absent from the graph `M`, and the graph edges no
//! bi-clique covers `R`. Each listed edge costs `L_e = log2|S| + log2|D| +
//! log2|T|` bits; a bi-clique on `n` objects costs `(n + 1)·log2|I|`.
//! Logarithms are real-valued throughout.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{ObjectSubset, TemporalGraph};

/// Constants of the encoding, frozen from the input graph.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Universe {
    pub num_sources: u32,
    pub num_destinations: u32,
    pub num_timestamps: u32,
    pub num_objects: u64,
    pub num_edges: u64,
    /// `L_e`
    pub bits_per_edge: f64,
    /// `log2 |I|`
    pub bits_per_object: f64,
}

impl Universe {
    pub fn new(counts: [u32; 3], num_edges: u64) -> Self {
        let num_objects = counts.iter().map(|&c| c as u64).sum::<u64>();
        let bits_per_edge = counts.iter().map(|&c| log2(c as f64)).sum();
        Universe {
            num_sources: counts[0],
            num_destinations: counts[1],
            num_timestamps: counts[2],
            num_objects,
            num_edges,
            bits_per_edge,
            bits_per_object: log2(num_objects as f64),
        }
    }

    pub fn of(graph: &TemporalGraph) -> Self {
        Universe::new(graph.counts(), graph.num_edges() as u64)
    }

    /// `(n + 1)·log2|I|`: bits to list a bi-clique of `subset_size` objects.
    pub fn biclique_bits(&self, subset_size: u64) -> f64 {
        (subset_size + 1) as f64 * self.bits_per_object
    }

    /// Bits saved by describing the `edges_in_subset` residual edges through
    /// one bi-clique on a subset with the given per-kind sizes, instead of
    /// listing them one by one:
    /// `(2·|E'_Ĩ| − |S̃|·|D̃|·|T̃|)·L_e − (|Ĩ| + 1)·log2|I|`.
    pub fn saving_from_counts(&self, sizes: [u64; 3], edges_in_subset: u64) -> f64 {
        let potential = sizes[0] * sizes[1] * sizes[2];
        let total = sizes[0] + sizes[1] + sizes[2];
        let net_edges = 2.0 * edges_in_subset as f64 - potential as f64;
        net_edges * self.bits_per_edge - self.biclique_bits(total)
    }

    pub fn saving(&self, subset: &ObjectSubset, edges_in_subset: u64) -> f64 {
        self.saving_from_counts(subset.sizes(), edges_in_subset)
    }

    /// Bits per potential edge when the subset is encoded as a bi-clique.
    pub fn bits_per_edge_of_biclique(&self, subset: &ObjectSubset) -> Result<f64> {
        let potential = subset.potential_size();
        if potential == 0 {
            return Err(Error::ZeroPotential);
        }
        Ok(self.biclique_bits(subset.total_size()) / potential as f64)
    }

    /// Bits to list every edge of the graph individually, `|E|·L_e`.
    pub fn baseline_bits(&self) -> f64 {
        self.num_edges as f64 * self.bits_per_edge
    }
}

fn log2(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        x.log2()
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct CostBreakdown {
    /// Bits for missing edges.
    pub preciseness_bits: f64,
    /// Bits for remaining (uncovered) edges.
    pub exhaustiveness_bits: f64,
    /// Bits for the bi-clique object lists.
    pub conciseness_bits: f64,
    pub total_bits: f64,
}

impl CostBreakdown {
    pub fn new(preciseness_bits: f64, exhaustiveness_bits: f64, conciseness_bits: f64) -> Self {
        CostBreakdown {
            preciseness_bits,
            exhaustiveness_bits,
            conciseness_bits,
            total_bits: preciseness_bits + exhaustiveness_bits + conciseness_bits,
        }
    }
}

/// Total description length of `graph` under the model `bicliques`.
///
/// Missing edges are charged per bi-clique, so a span edge absent from the
/// graph and shared by two bi-cliques is paid for twice.
pub fn total_cost(graph: &TemporalGraph, bicliques: &[ObjectSubset]) -> Result<CostBreakdown> {
    let universe = Universe::of(graph);
    let mut covered = vec![false; graph.num_edges()];
    let mut missing = 0u64;
    let mut concise = 0.0;
    for subset in bicliques {
        let induced = graph.induced_edges(subset)?;
        missing += subset.potential_size() - induced.len() as u64;
        concise += universe.biclique_bits(subset.total_size());
        for id in induced {
            covered[id as usize] = true;
        }
    }
    let remaining = covered.iter().filter(|&&c| !c).count() as f64;
    Ok(CostBreakdown::new(
        missing as f64 * universe.bits_per_edge,
        remaining * universe.bits_per_edge,
        concise,
    ))
}

/// `total_bits / (|E|·L_e)`; equal to 1 for the empty model.
pub fn relative_cost(breakdown: &CostBreakdown, universe: &Universe) -> Result<f64> {
    if universe.num_edges == 0 {
        return Err(Error::UndefinedForEmptyGraph);
    }
    let baseline = universe.baseline_bits();
    if baseline == 0.0 {
        // |S| = |D| = |T| = 1: the single possible edge is free to list.
        return Ok(if breakdown.total_bits == 0.0 {
            1.0
        } else {
            f64::INFINITY
        });
    }
    Ok(breakdown.total_bits / baseline)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    fn full_block(ws: u32, wd: u32, wt: u32) -> TemporalGraph {
        let mut edges = Vec::new();
        for s in 0..ws {
            for d in 0..wd {
                for t in 0..wt {
                    edges.push([s, d, t]);
                }
            }
        }
        TemporalGraph::from_edges([ws, wd, wt], edges).unwrap()
    }

    #[test]
    fn biclique_bits_values() {
        let u8 = Universe::new([3, 3, 2], 18);
        assert_eq!(u8.num_objects, 8);
        assert_eq!(u8.biclique_bits(0), 3.0);
        assert_eq!(u8.biclique_bits(8), 27.0);
        let u5 = Universe::new([2, 2, 1], 4);
        assert!(close(u5.biclique_bits(5), 6.0 * 5f64.log2(), 1e-12));
        assert!(close(u5.biclique_bits(5), 13.932, 1e-3));
    }

    #[test]
    fn bits_per_edge_is_real_valued() {
        let u = Universe::new([3, 3, 2], 18);
        assert!(close(u.bits_per_edge, 2.0 * 3f64.log2() + 1.0, 1e-12));
        assert!(close(u.bits_per_edge, 4.1699, 1e-4));
    }

    #[test]
    fn saving_values() {
        let u = Universe::new([3, 3, 2], 18);
        assert!(close(u.saving(&ObjectSubset::default(), 0), -3.0, 1e-12));
        let full = ObjectSubset::new(vec![0, 1, 2], vec![0, 1, 2], vec![0, 1]);
        let s = u.saving(&full, 18);
        assert!(close(s, 18.0 * u.bits_per_edge - 27.0, 1e-12));
        assert!(close(s, 48.06, 1e-2));

        // |I| = 5 and L_e = 2: two sources and two destinations (log2 2 each),
        // one timestamp (log2 1 = 0).
        let u = Universe::new([2, 2, 1], 4);
        assert_eq!(u.bits_per_edge, 2.0);
        let sub = ObjectSubset::new(vec![0, 1], vec![0, 1], vec![0]);
        let s = u.saving(&sub, 4);
        assert!(close(s, 8.0 - 6.0 * 5f64.log2(), 1e-12));
        assert!(close(s, -5.932, 1e-3));
    }

    #[test]
    fn empty_model_cost() {
        let g = full_block(3, 3, 2);
        let u = Universe::of(&g);
        let c = total_cost(&g, &[]).unwrap();
        assert_eq!(c.preciseness_bits, 0.0);
        assert_eq!(c.conciseness_bits, 0.0);
        assert!(close(c.exhaustiveness_bits, 18.0 * u.bits_per_edge, 1e-9));
        assert_eq!(relative_cost(&c, &u).unwrap(), 1.0);
    }

    #[test]
    fn single_full_block_cost() {
        let g = full_block(3, 3, 2);
        let u = Universe::of(&g);
        let c = total_cost(&g, &[ObjectSubset::full(&g)]).unwrap();
        assert_eq!(c.preciseness_bits, 0.0);
        assert_eq!(c.exhaustiveness_bits, 0.0);
        assert_eq!(c.conciseness_bits, 27.0);
        assert_eq!(c.total_bits, 27.0);
        let rc = relative_cost(&c, &u).unwrap();
        assert!(close(rc, 27.0 / (18.0 * u.bits_per_edge), 1e-12));
        assert!(close(rc, 0.3597, 1e-4));
    }

    #[test]
    fn one_absent_edge_costs_one_edge() {
        let full = full_block(3, 3, 2);
        let edges: Vec<_> = full.edges()[1..].to_vec();
        let g = TemporalGraph::from_edges([3, 3, 2], edges).unwrap();
        let u = Universe::of(&g);
        let c = total_cost(&g, &[ObjectSubset::full(&g)]).unwrap();
        assert!(close(c.preciseness_bits, u.bits_per_edge, 1e-12));
        assert!(close(c.preciseness_bits, 4.17, 1e-2));
    }

    #[test]
    fn overlapping_missing_edges_are_charged_per_biclique() {
        let g = TemporalGraph::from_edges([2, 2, 1], [[0, 0, 0], [1, 0, 0], [0, 1, 0]]).unwrap();
        let u = Universe::of(&g);
        let b = ObjectSubset::new(vec![0, 1], vec![0, 1], vec![0]);
        let c = total_cost(&g, &[b.clone(), b]).unwrap();
        assert!(close(c.preciseness_bits, 2.0 * u.bits_per_edge, 1e-12));
    }

    #[test]
    fn bits_per_edge_of_biclique_values() {
        let u = Universe::new([4, 2, 2], 1);
        let one = ObjectSubset::new(vec![0], vec![0], vec![0]);
        let two = ObjectSubset::new(vec![0, 1], vec![0, 1], vec![0, 1]);
        let wider = ObjectSubset::new(vec![0, 1], vec![0], vec![0]);
        assert_eq!(u.bits_per_edge_of_biclique(&one).unwrap(), 12.0);
        assert_eq!(u.bits_per_edge_of_biclique(&two).unwrap(), 2.625);
        assert!(u.bits_per_edge_of_biclique(&wider).unwrap() < 12.0);
        assert!(matches!(
            u.bits_per_edge_of_biclique(&ObjectSubset::default()),
            Err(Error::ZeroPotential)
        ));
    }

    #[test]
    fn relative_cost_requires_edges() {
        let u = Universe::new([1, 1, 1], 0);
        assert!(matches!(
            relative_cost(&CostBreakdown::default(), &u),
            Err(Error::UndefinedForEmptyGraph)
        ));
    }
}
