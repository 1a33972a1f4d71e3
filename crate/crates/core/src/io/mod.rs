//! File formats: edge-list and node CSV, Pajek, GEXF and the explorer JSON.

pub mod csv_files;
pub mod explorer;
pub mod gexf;
pub mod pajek;

pub use csv_files::{
    read_ddi_catalog, read_edge_list, read_node_table, read_partition, write_edge_list, write_node_table,
    write_partition,
};
pub use explorer::{explorer_document, write_explorer_json};
pub use gexf::write_gexf;
pub use pajek::{read_pajek, write_pajek};

/// Integral weights print without a fractional part; others use the shortest
/// representation that round-trips.
pub fn format_weight(weight: f64) -> String {
    if weight.fract() == 0.0 && weight.abs() < 1e15 {
        format!("{}", weight as i64)
    } else {
        format!("{weight}")
    }
}
