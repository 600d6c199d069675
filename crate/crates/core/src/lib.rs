//! Exact spanning-tree counts for `K_n - H`, the complete graph on `n`
//! vertices with the edges of `H` removed.
//!
//! Two linear-time engines cover the structured cases: [`tree`] when `H` is a
//! tree and [`qt`] when `H` is a connected quasi-threshold graph (including
//! the closed form for complete split graphs). Everything they return can be
//! checked against the determinant and enumeration oracles in [`oracle`].
//!
//! ```
//! use kncomp::graph::{Graph, Problem};
//! use kncomp::{oracle, tree};
//!
//! let p = Problem::new(4, Graph::path(3)).unwrap();
//! let tau = tree::count_kn_minus_tree(&p).unwrap();
//! assert_eq!(tau, oracle::kirchhoff_count(&kncomp::graph::complement_in_host(&p)));
//! assert_eq!(tau.to_string(), "3");
//! ```

pub mod arith;
pub mod dispatch;
pub mod graph;
pub mod oracle;
pub mod qt;
pub mod tree;
pub mod workload;

pub use arith::{BigInt, ExactRational, ModField};
pub use dispatch::{count, verify, CountError, CountResult, Method, Subtrahend, Verification};
pub use graph::{complement_in_host, parse_edge_list, Graph, GraphError, Problem};
pub use qt::{CentTree, QtError};
pub use tree::{StDecomposition, TreeError};
