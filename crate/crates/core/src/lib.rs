//! Drug co-medication networks from prescription dispensing data.
//!
//! Dispensing records become treatment episodes, episodes overlapping an index
//! date become per-patient drug sets, and drug pairs used together become
//! weighted edges. The resulting [`Network`] can then be measured (topology,
//! centrality, assortativity), partitioned into modules, compared with or
//! masked by other networks, and exported to Pajek, GEXF or the explorer JSON.
//!
//! ```
//! use comednet::graph::Network;
//! use comednet::ingest::EdgeListEntry;
//! use comednet::metrics;
//!
//! let edges = [
//!     EdgeListEntry::new("B01AC06", "C10AA01", 5),
//!     EdgeListEntry::new("C10AA01", "N05CF01", 2),
//! ];
//! let net = Network::from_edge_list(&edges, false, true).unwrap();
//! assert_eq!(metrics::density(&net).unwrap(), 2.0 / 3.0);
//! ```

pub mod algebra;
pub mod atc;
pub mod community;
pub mod error;
pub mod graph;
pub mod ingest;
pub mod io;
pub mod metrics;

pub use error::{Error, Result};
pub use graph::{EgoNetwork, Network, NetworkBuilder, NodeRecord};
