//! Search drivers: plain repeated peeling, and cut-and-peel with an
//! adaptive acceptance threshold.

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cost::{relative_cost, total_cost, CostBreakdown, Universe};
use crate::cut::{cut, derive_seed, Partition, RandomLabeling};
use crate::error::{Error, Result};
use crate::graph::{EdgeId, NearBiclique, ObjectKind, ObjectSubset, ResidualGraph, TemporalGraph, Triple};
use crate::peel::{peel_one_with, PeelOutcome, PeelScratch};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    CutNPeel,
    Peel,
}

impl std::str::FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "cutnpeel" => Ok(Algorithm::CutNPeel),
            "peel" => Ok(Algorithm::Peel),
            other => Err(Error::InvalidConfig(format!("unknown algorithm {other:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DriverConfig {
    /// Upper bound on cut-and-peel iterations (`T`).
    pub max_iterations: u32,
    /// Threshold decay `α`, strictly between 0 and 1.
    pub threshold_decay: f64,
    pub seed: u64,
    pub anchor_order: Vec<ObjectKind>,
    /// Mine the partitions of each cut on the rayon pool.
    pub parallel: bool,
}

impl Default for DriverConfig {
    fn default() -> Self {
        DriverConfig {
            max_iterations: 80,
            threshold_decay: 0.8,
            seed: 0,
            anchor_order: ObjectKind::ALL.to_vec(),
            parallel: false,
        }
    }
}

impl DriverConfig {
    pub fn validate(&self) -> Result<()> {
        if self.max_iterations < 1 {
            return Err(Error::InvalidConfig("iterations must be at least 1".into()));
        }
        if !(self.threshold_decay > 0.0 && self.threshold_decay < 1.0) {
            return Err(Error::InvalidConfig(format!(
                "alpha must lie in (0, 1), got {}",
                self.threshold_decay
            )));
        }
        if self.anchor_order.is_empty() {
            return Err(Error::InvalidConfig("anchor order is empty".into()));
        }
        Ok(())
    }
}

/// Acceptance bar for the current iteration and the bar being collected
/// for the next one.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ThresholdState {
    pub current: f64,
    pub next: f64,
}

impl Default for ThresholdState {
    fn default() -> Self {
        ThresholdState {
            current: f64::INFINITY,
            next: 0.0,
        }
    }
}

impl ThresholdState {
    pub fn accepts(&self, saving: f64) -> bool {
        saving >= self.current
    }

    pub fn fold_rejected(&mut self, saving: f64, decay: f64) {
        self.next = self.next.max(saving * decay);
    }

    pub fn advance(&mut self) {
        self.current = self.next;
        self.next = 0.0;
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IterationStats {
    pub iteration: u32,
    /// `None` stands for an unbounded threshold.
    pub threshold: Option<f64>,
    pub next_threshold: f64,
    pub partitions: usize,
    pub accepted: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MiningReport {
    pub algorithm: Algorithm,
    pub config: DriverConfig,
    pub universe: Universe,
    pub bicliques: Vec<NearBiclique>,
    pub cost: CostBreakdown,
    pub relative_cost: f64,
    pub iterations: Vec<IterationStats>,
    pub residual_edges: usize,
    pub elapsed_seconds: f64,
}

struct MiningRun {
    bicliques: Vec<NearBiclique>,
    iterations: Vec<IterationStats>,
    residual_edges: usize,
}

/// Repeatedly peels the whole residual graph and keeps every result with a
/// positive saving; stops at the first non-positive one.
pub fn peel(graph: &TemporalGraph) -> Result<Vec<NearBiclique>> {
    Ok(run_peel(graph)?.bicliques)
}

fn run_peel(graph: &TemporalGraph) -> Result<MiningRun> {
    if graph.is_empty() {
        return Err(Error::EmptyGraph);
    }
    let universe = Universe::of(graph);
    let mut residual = ResidualGraph::new(graph);
    let mut bicliques = Vec::new();
    let mut scratch = PeelScratch::new(graph);
    while residual.live_count() > 0 {
        let view: Vec<EdgeId> = residual.alive_edges().collect();
        let globals: Vec<Triple> = view.iter().map(|&id| graph.edge_globals(id)).collect();
        let out = peel_one_with(&universe, graph, &view, &globals, &mut scratch)?;
        if out.saving <= 0.0 {
            break;
        }
        residual.remove_edge_ids(&out.edges);
        bicliques.push(accept(graph, out));
    }
    Ok(MiningRun {
        bicliques,
        iterations: Vec::new(),
        residual_edges: residual.live_count(),
    })
}

fn accept(graph: &TemporalGraph, out: PeelOutcome) -> NearBiclique {
    NearBiclique::from_original(graph, out.subset, out.edges.len() as u64, out.saving)
}

/// Cut-and-peel search with the adaptive threshold schedule.
pub fn mine(graph: &TemporalGraph, config: &DriverConfig) -> Result<Vec<NearBiclique>> {
    Ok(run_cutnpeel(graph, config)?.bicliques)
}

struct PartitionResult {
    accepted: Vec<PeelOutcome>,
    rejected: Option<f64>,
}

/// Peels one partition until a result falls below `threshold` or the
/// partition runs out of edges.
fn mine_partition(
    universe: &Universe,
    graph: &TemporalGraph,
    mut edges: Vec<EdgeId>,
    threshold: f64,
) -> Result<PartitionResult> {
    let mut accepted = Vec::new();
    let mut scratch = PeelScratch::new(graph);
    // a local copy of the triples keeps repeated searches cache-friendly
    let mut globals: Vec<Triple> = edges.iter().map(|&id| graph.edge_globals(id)).collect();
    while !edges.is_empty() {
        let out = peel_one_with(universe, graph, &edges, &globals, &mut scratch)?;
        if out.saving < threshold {
            return Ok(PartitionResult {
                accepted,
                rejected: Some(out.saving),
            });
        }
        // both sides ascending
        let mut taken = out.edges.iter().peekable();
        let mut w = 0;
        for r in 0..edges.len() {
            let id = edges[r];
            while taken.next_if(|&&t| t < id).is_some() {}
            if taken.next_if(|&&t| t == id).is_none() {
                edges[w] = id;
                globals[w] = globals[r];
                w += 1;
            }
        }
        edges.truncate(w);
        globals.truncate(w);
        accepted.push(out);
    }
    Ok(PartitionResult {
        accepted,
        rejected: None,
    })
}

fn order_partitions(parts: &mut [Partition]) {
    parts.sort_by(|a, b| {
        b.edges
            .len()
            .cmp(&a.edges.len())
            .then_with(|| a.members[0].cmp(&b.members[0]))
    });
}

fn run_cutnpeel(graph: &TemporalGraph, config: &DriverConfig) -> Result<MiningRun> {
    config.validate()?;
    if graph.is_empty() {
        return Err(Error::EmptyGraph);
    }
    let universe = Universe::of(graph);
    let mut residual = ResidualGraph::new(graph);
    let mut threshold = ThresholdState::default();
    let mut bicliques = Vec::new();
    let mut iterations = Vec::new();

    for t in 1..=config.max_iterations {
        let mut stats = IterationStats {
            iteration: t,
            threshold: threshold.current.is_finite().then_some(threshold.current),
            next_threshold: 0.0,
            partitions: 0,
            accepted: 0,
        };
        for &anchor in &config.anchor_order {
            if residual.live_count() == 0 {
                break;
            }
            let labeling = RandomLabeling::new(graph.num_objects(), derive_seed(config.seed, t as u64, anchor));
            let mut parts = cut(&residual, anchor, &labeling)?;
            order_partitions(&mut parts);
            stats.partitions += parts.len();

            let bar = threshold.current;
            let results: Vec<PartitionResult> = if config.parallel {
                parts
                    .into_par_iter()
                    .map(|p| mine_partition(&universe, graph, p.edges, bar))
                    .collect::<Result<_>>()?
            } else {
                parts
                    .into_iter()
                    .map(|p| mine_partition(&universe, graph, p.edges, bar))
                    .collect::<Result<_>>()?
            };
            for r in results {
                if let Some(s) = r.rejected {
                    threshold.fold_rejected(s, config.threshold_decay);
                }
                for out in r.accepted {
                    residual.remove_edge_ids(&out.edges);
                    bicliques.push(accept(graph, out));
                    stats.accepted += 1;
                }
            }
        }
        stats.next_threshold = threshold.next;
        iterations.push(stats);
        if threshold.next == 0.0 || residual.live_count() == 0 {
            break;
        }
        threshold.advance();
    }

    Ok(MiningRun {
        bicliques,
        iterations,
        residual_edges: residual.live_count(),
    })
}

/// Runs `algorithm` and scores the result.
pub fn mine_report(graph: &TemporalGraph, algorithm: Algorithm, config: &DriverConfig) -> Result<MiningReport> {
    let start = Instant::now();
    let run = match algorithm {
        Algorithm::CutNPeel => run_cutnpeel(graph, config)?,
        Algorithm::Peel => run_peel(graph)?,
    };
    let elapsed_seconds = start.elapsed().as_secs_f64();
    let universe = Universe::of(graph);
    let subsets: Vec<ObjectSubset> = run.bicliques.iter().map(|b| b.objects.clone()).collect();
    let cost = total_cost(graph, &subsets)?;
    Ok(MiningReport {
        algorithm,
        config: config.clone(),
        universe,
        relative_cost: relative_cost(&cost, &universe)?,
        cost,
        bicliques: run.bicliques,
        iterations: run.iterations,
        residual_edges: run.residual_edges,
        elapsed_seconds,
    })
}
