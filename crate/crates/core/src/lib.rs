//! Knowledge, knowability and belief over finite topological subset spaces.

pub mod set;
pub mod syntax;
pub mod topology;
pub mod models;
pub mod relational;
pub mod proofs;
pub mod io;
pub mod search;

pub use set::PointSet;
pub use syntax::{parse, Formula, Modality, Translation, Tree};
