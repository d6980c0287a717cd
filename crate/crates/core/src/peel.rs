//! Top-down greedy search for a single near bi-clique.
//!
//! Starting from every object touched by the view's edges, the search
//! repeatedly drops the object whose share of existing edges among its
//! potential edges is smallest, and remembers the intermediate object set
//! with the largest saving.

use std::cmp::{Ordering, Reverse};
use std::collections::BinaryHeap;

use crate::cost::Universe;
use crate::error::{Error, Result};
use crate::graph::{EdgeId, ObjectKind, ObjectSubset, TemporalGraph, Triple};

/// One step of the search, recorded before the object is removed.
#[derive(Clone, Debug, PartialEq)]
pub struct PeelStep {
    pub removed: u32,
    pub sizes: [u64; 3],
    pub induced_edges: u64,
    pub saving: f64,
}

#[derive(Clone, Debug)]
pub struct PeelOutcome {
    pub subset: ObjectSubset,
    pub saving: f64,
    /// View edges induced by `subset`, ascending.
    pub edges: Vec<EdgeId>,
}

/// `within / marginal` kept as an exact fraction so that comparisons do not
/// depend on floating-point rounding. A zero marginal reads as zero.
#[derive(Clone, Copy, Debug)]
struct Ratio {
    num: u64,
    den: u64,
}

impl Ratio {
    fn new(num: u64, den: u64) -> Self {
        if den == 0 {
            Ratio { num: 0, den: 1 }
        } else {
            Ratio { num, den }
        }
    }

    fn cmp(&self, other: &Ratio) -> Ordering {
        (self.num as u128 * other.den as u128).cmp(&(other.num as u128 * self.den as u128))
    }

    fn value(&self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

const UNMAPPED: u32 = u32::MAX;

/// Global-to-local object map shared by successive searches over views of
/// one graph. Left all-unmapped between searches.
pub(crate) struct PeelScratch {
    local: Vec<u32>,
}

impl PeelScratch {
    pub(crate) fn new(graph: &TemporalGraph) -> Self {
        PeelScratch {
            local: vec![UNMAPPED; graph.num_objects()],
        }
    }
}

/// Working state of one greedy search over an edge view.
pub struct PeelState<'g> {
    graph: &'g TemporalGraph,
    universe: Universe,
    view: Vec<EdgeId>,
    /// local object -> global index, ascending
    objects: Vec<u32>,
    kinds: Vec<ObjectKind>,
    local_edges: Vec<[u32; 3]>,
    adj_offsets: Vec<usize>,
    adj: Vec<u32>,
    edge_alive: Vec<bool>,
    degree: Vec<u64>,
    in_set: Vec<bool>,
    /// Per kind, min-heap of `(degree, local)`. Entries go stale when the
    /// degree drops or the object leaves; they are skipped on pop. Local
    /// order equals global order, so ties resolve by global index.
    queues: [BinaryHeap<Reverse<(u64, u32)>>; 3],
    sizes: [u64; 3],
    induced: u64,
    removal_log: Vec<u32>,
    removed_local: Vec<u32>,
    best_saving: f64,
    best_step: usize,
}

impl<'g> PeelState<'g> {
    /// Sets up a search over the edges `view` of `graph`. Only objects with
    /// at least one view edge take part.
    pub fn new(universe: &Universe, graph: &'g TemporalGraph, view: &[EdgeId]) -> Result<Self> {
        let globals: Vec<Triple> = view.iter().map(|&id| graph.edge_globals(id)).collect();
        Self::with_scratch(universe, graph, view, &globals, &mut PeelScratch::new(graph))
    }

    /// Like [`PeelState::new`] with the view's global triples supplied by the
    /// caller (`globals[i]` belongs to `view[i]`) and a reusable index map.
    pub(crate) fn with_scratch(
        universe: &Universe,
        graph: &'g TemporalGraph,
        view: &[EdgeId],
        globals: &[Triple],
        scratch: &mut PeelScratch,
    ) -> Result<Self> {
        if view.is_empty() {
            return Err(Error::NoEdgesToPeel);
        }
        let map = &mut scratch.local;
        let mut objects: Vec<u32> = Vec::new();
        for e in globals {
            for &g in e {
                if map[g as usize] == UNMAPPED {
                    map[g as usize] = 0;
                    objects.push(g);
                }
            }
        }
        objects.sort_unstable();
        for (i, &g) in objects.iter().enumerate() {
            map[g as usize] = i as u32;
        }
        let n = objects.len();
        let local_edges: Vec<[u32; 3]> = globals.iter().map(|e| e.map(|g| map[g as usize])).collect();
        for &g in &objects {
            map[g as usize] = UNMAPPED;
        }

        let mut degree = vec![0u64; n];
        for e in &local_edges {
            for &o in e {
                degree[o as usize] += 1;
            }
        }
        let mut adj_offsets = vec![0usize; n + 1];
        for o in 0..n {
            adj_offsets[o + 1] = adj_offsets[o] + degree[o] as usize;
        }
        let mut cursor = adj_offsets.clone();
        let mut adj = vec![0u32; local_edges.len() * 3];
        for (i, e) in local_edges.iter().enumerate() {
            for &o in e {
                adj[cursor[o as usize]] = i as u32;
                cursor[o as usize] += 1;
            }
        }

        let kinds: Vec<ObjectKind> = objects.iter().map(|&g| graph.object_of(g).0).collect();
        let mut heaps: [Vec<Reverse<(u64, u32)>>; 3] = Default::default();
        let mut sizes = [0u64; 3];
        for o in 0..n {
            let p = kinds[o].position();
            heaps[p].push(Reverse((degree[o], o as u32)));
            sizes[p] += 1;
        }
        let queues = heaps.map(BinaryHeap::from);

        Ok(PeelState {
            graph,
            universe: *universe,
            view: view.to_vec(),
            edge_alive: vec![true; local_edges.len()],
            induced: local_edges.len() as u64,
            local_edges,
            adj_offsets,
            adj,
            in_set: vec![true; n],
            degree,
            queues,
            sizes,
            kinds,
            objects,
            removal_log: Vec::with_capacity(n),
            removed_local: Vec::with_capacity(n),
            best_saving: f64::NEG_INFINITY,
            best_step: 0,
        })
    }

    fn local(&self, global: u32) -> Option<usize> {
        self.objects.binary_search(&global).ok()
    }

    pub fn sizes(&self) -> [u64; 3] {
        self.sizes
    }

    /// `|E_Ĩ|` over the view for the current object set.
    pub fn induced_edges(&self) -> u64 {
        self.induced
    }

    pub fn is_empty(&self) -> bool {
        self.sizes.iter().all(|&s| s == 0)
    }

    pub fn within_degree(&self, global: u32) -> Option<u64> {
        self.local(global).filter(|&o| self.in_set[o]).map(|o| self.degree[o])
    }

    pub fn current_saving(&self) -> f64 {
        self.universe.saving_from_counts(self.sizes, self.induced)
    }

    pub fn best_saving(&self) -> f64 {
        self.best_saving
    }

    pub fn removal_log(&self) -> &[u32] {
        &self.removal_log
    }

    /// The current object set.
    pub fn remaining(&self) -> ObjectSubset {
        ObjectSubset::from_globals(
            self.graph,
            (0..self.objects.len())
                .filter(|&o| self.in_set[o])
                .map(|o| self.objects[o]),
        )
    }

    fn marginal_potential(&self, kind: ObjectKind) -> u64 {
        let [s, d, t] = self.sizes;
        match kind {
            ObjectKind::Source => d * t,
            ObjectKind::Destination => t * s,
            ObjectKind::Timestamp => s * d,
        }
    }

    fn ratio(&self, o: usize) -> Ratio {
        Ratio::new(self.degree[o], self.marginal_potential(self.kinds[o]))
    }

    /// Existing edges at the object divided by its potential edges inside
    /// the current set.
    pub fn rho(&self, global: u32) -> Result<f64> {
        match self.local(global) {
            Some(o) if self.in_set[o] => Ok(self.ratio(o).value()),
            _ => Err(Error::NotInSubset(global)),
        }
    }

    /// Object to remove next: per kind the lowest-degree member (ties by
    /// global index), then the smallest ratio across kinds, ties going to
    /// the earlier kind.
    fn argmin(&mut self) -> Option<usize> {
        let mut best: Option<(Ratio, usize)> = None;
        for kind in ObjectKind::ALL {
            let q = &mut self.queues[kind.position()];
            while let Some(&Reverse((deg, o))) = q.peek() {
                let o = o as usize;
                if self.in_set[o] && self.degree[o] == deg {
                    break;
                }
                q.pop();
            }
            if let Some(&Reverse((_, o))) = q.peek() {
                let o = o as usize;
                let r = self.ratio(o);
                if best.is_none_or(|(br, _)| r.cmp(&br) == Ordering::Less) {
                    best = Some((r, o));
                }
            }
        }
        best.map(|(_, o)| o)
    }

    /// Scores the current set, then removes the next object. Returns `None`
    /// once the set is empty.
    pub fn step(&mut self) -> Option<PeelStep> {
        let o = self.argmin()?;
        let saving = self.current_saving();
        if saving > self.best_saving {
            self.best_saving = saving;
            self.best_step = self.removal_log.len();
        }
        let record = PeelStep {
            removed: self.objects[o],
            sizes: self.sizes,
            induced_edges: self.induced,
            saving,
        };

        let kind = self.kinds[o];
        self.queues[kind.position()].pop();
        self.in_set[o] = false;
        self.sizes[kind.position()] -= 1;
        for k in self.adj_offsets[o]..self.adj_offsets[o + 1] {
            let e = self.adj[k] as usize;
            if !self.edge_alive[e] {
                continue;
            }
            self.edge_alive[e] = false;
            self.induced -= 1;
            for &other in &self.local_edges[e] {
                let other = other as usize;
                if other == o {
                    continue;
                }
                self.degree[other] -= 1;
                self.queues[self.kinds[other].position()].push(Reverse((self.degree[other], other as u32)));
            }
        }
        self.degree[o] = 0;
        self.removal_log.push(self.objects[o]);
        self.removed_local.push(o as u32);
        Some(record)
    }

    /// Peels to exhaustion and returns the best intermediate set.
    pub fn run(mut self) -> PeelOutcome {
        while self.step().is_some() {}
        self.finish()
    }

    fn finish(self) -> PeelOutcome {
        let chosen = &self.removal_log[self.best_step..];
        let subset = ObjectSubset::from_globals(self.graph, chosen.iter().copied());
        // the chosen objects are exactly those removed from `best_step` on
        let mut member = vec![false; self.objects.len()];
        for &o in &self.removed_local[self.best_step..] {
            member[o as usize] = true;
        }
        let edges = self
            .local_edges
            .iter()
            .zip(&self.view)
            .filter(|(e, _)| e.iter().all(|&o| member[o as usize]))
            .map(|(_, &id)| id)
            .collect::<Vec<_>>();
        PeelOutcome {
            subset,
            saving: self.best_saving,
            edges,
        }
    }
}

/// Finds one near bi-clique in the edges `view` of `graph`. The returned
/// saving may be negative; callers decide whether to accept it.
pub fn peel_one(universe: &Universe, graph: &TemporalGraph, view: &[EdgeId]) -> Result<PeelOutcome> {
    Ok(PeelState::new(universe, graph, view)?.run())
}

pub(crate) fn peel_one_with(
    universe: &Universe,
    graph: &TemporalGraph,
    view: &[EdgeId],
    globals: &[Triple],
    scratch: &mut PeelScratch,
) -> Result<PeelOutcome> {
    Ok(PeelState::with_scratch(universe, graph, view, globals, scratch)?.run())
}

/// Like [`peel_one`] but also returns every step of the search.
pub fn peel_one_traced(
    universe: &Universe,
    graph: &TemporalGraph,
    view: &[EdgeId],
) -> Result<(PeelOutcome, Vec<PeelStep>)> {
    let mut state = PeelState::new(universe, graph, view)?;
    let mut trace = Vec::new();
    while let Some(step) = state.step() {
        trace.push(step);
    }
    Ok((state.finish(), trace))
}
