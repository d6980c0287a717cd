//! Near bi-clique mining on temporal graphs.
//!
//! A temporal graph is a set of `(source, destination, timestamp)` triples.
//! This crate searches for a set of near bi-cliques (dense cross-product
//! blocks) that minimizes a description-length cost and uses the result to
//! encode the graph losslessly.
//!
//! The main entry points are [`driver::mine`] (cut-and-peel search),
//! [`driver::peel`] (plain greedy peeling), [`cost::total_cost`] and the
//! [`codec`] module.

pub mod codec;
pub mod cost;
pub mod cut;
pub mod driver;
pub mod error;
pub mod graph;
pub mod oracle;
pub mod peel;
pub mod synth;

pub use cost::{CostBreakdown, Universe};
pub use driver::{mine, mine_report, peel, Algorithm, DriverConfig, MiningReport};
pub use error::{Error, Result};
pub use graph::{EdgeId, NearBiclique, ObjectKind, ObjectSubset, ResidualGraph, TemporalGraph};
