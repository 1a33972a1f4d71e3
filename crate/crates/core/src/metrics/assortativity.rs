//! Attribute assortativity as a ratio of within-group density to a reference
//! density.
//!
//! For a group of `m` nodes sharing an attribute value, the within-group
//! density is the number of edges with both endpoints in the group over the
//! `m(m-1)/2` possible ones. A ratio above 1 means the group is more densely
//! interconnected than the reference (typically the whole network).

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Network;

/// Group name used for nodes lacking the attribute.
pub const UNKNOWN_GROUP: &str = "unknown";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupAssortativityRow {
    pub group: String,
    pub member_count: usize,
    pub potential_edges: u64,
    pub actual_edges: u64,
    pub group_density: f64,
    pub ratio: f64,
}

impl GroupAssortativityRow {
    /// Row from raw counts; density is 0 for groups with fewer than 2 members.
    pub fn from_counts(
        group: impl Into<String>,
        member_count: usize,
        actual_edges: u64,
        reference_density: f64,
    ) -> Result<Self> {
        if !(reference_density.is_finite() && reference_density > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "reference density must be positive, got {reference_density}"
            )));
        }
        let m = member_count as u64;
        let potential_edges = m * m.saturating_sub(1) / 2;
        let group_density = if potential_edges == 0 {
            0.0
        } else {
            actual_edges as f64 / potential_edges as f64
        };
        Ok(GroupAssortativityRow {
            group: group.into(),
            member_count,
            potential_edges,
            actual_edges,
            group_density,
            ratio: group_density / reference_density,
        })
    }
}

/// One row per attribute value, sorted by group name. Isolated nodes count as
/// members.
pub fn attribute_assortativity(
    net: &Network,
    attribute: &str,
    reference_density: f64,
) -> Result<Vec<GroupAssortativityRow>> {
    if !(reference_density.is_finite() && reference_density > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "reference density must be positive, got {reference_density}"
        )));
    }
    let groups: Vec<&str> = net
        .attribute_values(attribute)
        .map(|v| v.unwrap_or(UNKNOWN_GROUP))
        .collect();
    let mut counts: BTreeMap<&str, (usize, u64)> = BTreeMap::new();
    for g in &groups {
        counts.entry(g).or_default().0 += 1;
    }
    for e in net.edges() {
        if groups[e.source] == groups[e.target] {
            counts.get_mut(groups[e.source]).expect("group counted").1 += 1;
        }
    }
    counts
        .into_iter()
        .map(|(g, (m, actual))| GroupAssortativityRow::from_counts(g, m, actual, reference_density))
        .collect()
}
