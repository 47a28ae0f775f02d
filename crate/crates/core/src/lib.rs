//! Rainbow perfect matchings in randomly colored k-partite hypergraphs and
//! rainbow Hamilton cycles in randomly colored graphs.
//!
//! - [`model`]: instances, samplers and seeded randomness
//! - [`count`]: exact search and counting, closed-form moments, the
//!   colored-to-uniform reduction, latin transversals
//! - [`process`]: the random edge-deletion process and its weights, events
//!   and entropy tools
//! - [`hamilton`]: rainbow Hamilton cycle search and the matching-union and
//!   contract-and-lift constructions
//! - [`experiment`]: the Monte Carlo harness behind the CLI

pub mod count;
pub mod error;
pub mod experiment;
pub mod hamilton;
pub mod model;
pub mod process;

pub use count::{Budget, CountMethod, CountReport};
pub use error::{Error, Result};
pub use model::{ColoredEdge, ColoredHypergraph, Matching, Mode, PartiteVertex, RandomnessSpec};
