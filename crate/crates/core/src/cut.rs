//! Min-hash style partitioning of the residual graph by one object kind.
//!
//! Every object gets a random label from a seeded permutation. An anchor
//! object's shingle is the minimum, over its alive edges, of the label pair
//! formed by the edge's two other endpoints. Anchor objects with equal
//! shingles form one partition, which owns all alive edges of its members.

use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{EdgeId, ObjectKind, ResidualGraph, TemporalGraph, Triple};

/// A uniformly random bijection from global object index to `1..=|I|`.
#[derive(Clone, Debug)]
pub struct RandomLabeling {
    seed: u64,
    labels: Vec<u64>,
}

impl RandomLabeling {
    pub fn new(num_objects: usize, seed: u64) -> Self {
        let mut labels: Vec<u64> = (1..=num_objects as u64).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        labels.shuffle(&mut rng);
        RandomLabeling { seed, labels }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn label(&self, global: u32) -> u64 {
        self.labels[global as usize]
    }

    pub fn labels(&self) -> &[u64] {
        &self.labels
    }

    /// Every value in `1..=len` appears exactly once.
    pub fn is_bijection(&self) -> bool {
        let n = self.labels.len() as u64;
        let mut seen = vec![false; self.labels.len()];
        for &l in &self.labels {
            if l == 0 || l > n || seen[(l - 1) as usize] {
                return false;
            }
            seen[(l - 1) as usize] = true;
        }
        true
    }
}

/// Sub-seed for the cut of one anchor kind in one iteration.
pub fn derive_seed(run_seed: u64, iteration: u64, anchor: ObjectKind) -> u64 {
    // splitmix64 finalizer over a packed (iteration, anchor) stream position
    let mut z = run_seed ^ (iteration * 3 + anchor.position() as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Shingle of `edge` seen from its `anchor` endpoint.
pub fn shingle_value(graph: &TemporalGraph, edge: Triple, anchor: ObjectKind, labeling: &RandomLabeling) -> u64 {
    let n = graph.num_objects() as u64;
    let h = |kind: ObjectKind| labeling.label(graph.global_index(kind, edge[kind.position()]));
    let (hi, lo) = match anchor {
        ObjectKind::Source => (ObjectKind::Destination, ObjectKind::Timestamp),
        ObjectKind::Destination => (ObjectKind::Timestamp, ObjectKind::Source),
        ObjectKind::Timestamp => (ObjectKind::Source, ObjectKind::Destination),
    };
    h(hi) * n + h(lo)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partition {
    pub anchor: ObjectKind,
    /// Anchor-kind indices, ascending.
    pub members: Vec<u32>,
    /// Alive edges whose anchor endpoint is a member, ascending.
    pub edges: Vec<EdgeId>,
    pub shingle: u64,
}

/// Partitions the alive edges of `residual` by shingles of `anchor` objects.
/// Anchor objects without alive edges are left out. Partitions come back
/// ordered by their smallest member.
pub fn cut(residual: &ResidualGraph<'_>, anchor: ObjectKind, labeling: &RandomLabeling) -> Result<Vec<Partition>> {
    if residual.live_count() == 0 {
        return Err(Error::NoEdgesToCut);
    }
    let graph = residual.base();
    let p = anchor.position();
    let mut f = vec![u64::MAX; graph.count(anchor) as usize];
    for id in residual.alive_edges() {
        let e = graph.edge(id);
        let g = shingle_value(graph, e, anchor, labeling);
        let slot = &mut f[e[p] as usize];
        if g < *slot {
            *slot = g;
        }
    }

    let mut by_shingle: HashMap<u64, usize> = HashMap::new();
    let mut group_of = vec![usize::MAX; f.len()];
    let mut parts: Vec<Partition> = Vec::new();
    for (v, &fv) in f.iter().enumerate() {
        if fv == u64::MAX {
            continue;
        }
        let k = *by_shingle.entry(fv).or_insert_with(|| {
            parts.push(Partition {
                anchor,
                members: Vec::new(),
                edges: Vec::new(),
                shingle: fv,
            });
            parts.len() - 1
        });
        parts[k].members.push(v as u32);
        group_of[v] = k;
    }
    for id in residual.alive_edges() {
        let v = graph.edge(id)[p] as usize;
        parts[group_of[v]].edges.push(id);
    }
    Ok(parts)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn global_identity_labeling(graph: &TemporalGraph) -> RandomLabeling {
        RandomLabeling {
            seed: 0,
            labels: (1..=graph.num_objects() as u64).collect(),
        }
    }

    #[test]
    fn labeling_is_bijection_and_seeded() {
        for seed in 0..20 {
            let a = RandomLabeling::new(37, seed);
            assert!(a.is_bijection());
            assert_eq!(a.labels(), RandomLabeling::new(37, seed).labels());
        }
        assert_ne!(RandomLabeling::new(50, 1).labels(), RandomLabeling::new(50, 2).labels());
    }

    #[test]
    fn shingle_formula() {
        // |I| = 4: one source (global 0), two destinations (1, 2), one timestamp (3)
        let g = TemporalGraph::from_edges([1, 2, 1], [[0, 1, 0]]).unwrap();
        let h = global_identity_labeling(&g);
        assert_eq!(shingle_value(&g, [0, 1, 0], ObjectKind::Source, &h), 3 * 4 + 4);
        assert_eq!(shingle_value(&g, [0, 1, 0], ObjectKind::Destination, &h), 4 * 4 + 1);
        assert_eq!(shingle_value(&g, [0, 1, 0], ObjectKind::Timestamp, &h), 4 + 3);
    }

    #[test]
    fn min_shingle_over_incident_edges() {
        // |I| = 5: source 0, destinations 1 and 2, timestamps 3 and 4.
        // h(d1)=2, h(t1)=3, h(d2)=1, h(t2)=4 gives shingles 13 and 9.
        let g = TemporalGraph::from_edges([1, 2, 2], [[0, 0, 0], [0, 1, 1]]).unwrap();
        let h = RandomLabeling {
            seed: 0,
            labels: vec![5, 2, 1, 3, 4],
        };
        assert_eq!(shingle_value(&g, [0, 0, 0], ObjectKind::Source, &h), 13);
        assert_eq!(shingle_value(&g, [0, 1, 1], ObjectKind::Source, &h), 9);
        let r = ResidualGraph::new(&g);
        let parts = cut(&r, ObjectKind::Source, &h).unwrap();
        assert_eq!(parts.len(), 1);
        assert_eq!(parts[0].shingle, 9);
    }

    #[test]
    fn same_pair_same_shingle() {
        let g = TemporalGraph::from_edges([2, 1, 1], [[0, 0, 0], [1, 0, 0]]).unwrap();
        let h = RandomLabeling::new(g.num_objects(), 3);
        assert_eq!(
            shingle_value(&g, [0, 0, 0], ObjectKind::Source, &h),
            shingle_value(&g, [1, 0, 0], ObjectKind::Source, &h)
        );
    }

    #[test]
    fn full_block_is_one_partition() {
        let mut edges = Vec::new();
        for s in 0..3 {
            for d in 0..3 {
                for t in 0..2 {
                    edges.push([s, d, t]);
                }
            }
        }
        let g = TemporalGraph::from_edges([3, 3, 2], edges).unwrap();
        let r = ResidualGraph::new(&g);
        for anchor in ObjectKind::ALL {
            let parts = cut(&r, anchor, &RandomLabeling::new(8, 11)).unwrap();
            assert_eq!(parts.len(), 1);
            assert_eq!(parts[0].edges.len(), 18);
            assert_eq!(parts[0].members.len(), g.count(anchor) as usize);
        }
    }

    #[test]
    fn disjoint_blocks_split_on_fixed_seed() {
        let mut edges = Vec::new();
        for (off_s, off_d, off_t) in [(0, 0, 0), (2, 2, 2)] {
            for s in 0..2 {
                for d in 0..2 {
                    for t in 0..2 {
                        edges.push([off_s + s, off_d + d, off_t + t]);
                    }
                }
            }
        }
        let g = TemporalGraph::from_edges([4, 4, 4], edges).unwrap();
        let r = ResidualGraph::new(&g);
        let parts = cut(&r, ObjectKind::Source, &RandomLabeling::new(12, 7)).unwrap();
        assert_eq!(parts.len(), 2);
        assert_eq!(parts[0].members, vec![0, 1]);
        assert_eq!(parts[1].members, vec![2, 3]);
    }

    #[test]
    fn dead_edges_and_idle_objects_are_skipped() {
        let g = TemporalGraph::from_edges([3, 1, 1], [[0, 0, 0], [1, 0, 0]]).unwrap();
        let mut r = ResidualGraph::new(&g);
        r.remove_edge_ids(&[0]);
        let parts = cut(&r, ObjectKind::Source, &RandomLabeling::new(5, 1)).unwrap();
        assert_eq!(parts.len(), 1);
        assert_eq!(parts[0].members, vec![1]);
        assert_eq!(parts[0].edges, vec![1]);
        r.remove_edge_ids(&[1]);
        assert!(matches!(
            cut(&r, ObjectKind::Source, &RandomLabeling::new(5, 1)),
            Err(Error::NoEdgesToCut)
        ));
    }

    #[test]
    fn derived_seeds_differ() {
        let a = derive_seed(1, 1, ObjectKind::Source);
        let b = derive_seed(1, 1, ObjectKind::Destination);
        let c = derive_seed(1, 2, ObjectKind::Source);
        let d = derive_seed(2, 1, ObjectKind::Source);
        assert!(a != b && a != c && a != d && b != c);
    }
}
