//! Constant-round dominating set approximation for uniformly sparse graphs,
//! together with the machinery needed to validate it at desk scale:
//!
//! - [`graph`]: immutable simple graphs with neighborhood and ball queries;
//! - [`sparsity`]: exact density measures (subgraph density, 1-shallow-minor
//!   density, smallest excluded biclique) that parameterize the algorithm;
//! - [`sim`]: a deterministic synchronous message-passing simulator where the
//!   only measured cost is the number of communication rounds;
//! - [`params`]: the derived constant bundle driving every threshold;
//! - [`cover`], [`pseudocover`], [`sequence`], [`phases`]: the algorithm
//!   itself, as pure functions over a graph (reference mode);
//! - [`protocol`]: the same algorithm as a fixed 10-round protocol for the
//!   simulator (distributed mode);
//! - [`oracle`]: exact and greedy minimum dominating sets for ground truth;
//! - [`generators`]: seeded instance families;
//! - [`report`], [`experiment`]: bound checking and machine-readable reports.



pub mod cover;
pub mod experiment;
mod flow;
pub mod generators;
pub mod oracle;
pub mod params;
pub mod phases;
pub mod protocol;

pub mod graph;







pub mod pseudocover;
pub mod report;
pub mod sequence;
pub mod sim;
pub mod sparsity;

pub use graph::{Graph, GraphError, Vertex};
pub use params::Params;
pub use sparsity::Density;
