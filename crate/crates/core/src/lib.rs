//! Biased Maker-Breaker C4 game on `K_n`: board, threat index, strategies,
//! referee, lemma diagnostics and the sweep/verify drivers behind the CLI.

pub mod analysis;
pub mod engine;
pub mod error;
pub mod gen;
pub mod graph;
pub mod params;
pub mod strategy;
pub mod sweep;
pub mod threat;
pub mod transcript;
pub mod verify;

pub use error::{Error, Result};
pub use graph::{Board, Edge, EdgeId, Owner, Player, VertexId};
pub use params::{validate_params, GameParams};
