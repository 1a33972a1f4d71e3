//! Topology, centrality and assortativity measures.
//!
//! All measures read an immutable [`Network`](crate::graph::Network). Path
//! based measures ignore weights unless [`PathMode::InverseWeight`] is asked
//! for.

pub mod assortativity;
pub mod centrality;
mod paths;
pub mod topology;

pub use assortativity::{attribute_assortativity, GroupAssortativityRow};
pub use centrality::{
    betweenness_centrality, centrality_report, closeness_centrality, degree_centrality, eigenvector_centrality,
    BetweennessOptions, CentralityOptions, CentralityReport, DegreeScores, EigenScale, EigenvectorOptions, Measure,
    NodeCentrality,
};
pub use paths::PathMode;
pub use topology::{
    average_path_length, degree_assortativity, density, density_from_counts, edge_extremes, summarize,
    EdgeExtremes, TopologySummary, WeightedPair,
};
