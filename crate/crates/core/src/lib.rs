//! Stabilizer codes over prime qudits, their interaction graphs, and the
//! adversarial constructions that bound their local testability.

pub mod adversary;
pub mod cli;
pub mod code;
pub mod dense;
pub mod field;
pub mod graph;
pub mod pauli;
pub mod search;
pub mod zoo;

pub use code::{BuildOptions, CodeError, Membership, StabilizerCode, Syndrome};
pub use graph::{BipartiteGraph, ExpansionMode, ExpansionStats, Side};
pub use pauli::{PauliError, PauliOp, Symbol};
pub use search::{Budget, DistanceReport, Exactness, Succinctness, WeightBound, WeightSearch};
