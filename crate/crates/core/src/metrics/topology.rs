//! Network-level and edge-level topology measures.

use std::collections::VecDeque;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Network;

use super::paths::bfs_hops;

/// Density from node and edge counts: `E / (n(n-1)/2)` undirected,
/// `E / (n(n-1))` directed.
pub fn density_from_counts(node_count: usize, edge_count: usize, directed: bool) -> Result<f64> {
    if node_count < 2 {
        return Err(Error::Undefined(format!("density needs at least 2 nodes, got {node_count}")));
    }
    let n = node_count as f64;
    let possible = if directed { n * (n - 1.0) } else { n * (n - 1.0) / 2.0 };
    Ok(edge_count as f64 / possible)
}

pub fn density(net: &Network) -> Result<f64> {
    density_from_counts(net.node_count(), net.edge_count(), net.is_directed())
}

/// Pearson correlation of the degrees at either end of each edge.
///
/// Undirected edges contribute both orientations; directed edges pair the
/// source's out-degree with the target's in-degree. Returns `Ok(None)` when a
/// degree sequence has zero variance (regular graphs).
pub fn degree_assortativity(net: &Network) -> Result<Option<f64>> {
    if net.edge_count() == 0 {
        return Err(Error::Undefined("degree assortativity of an edgeless network".into()));
    }
    // Integer sums keep the zero-variance test exact.
    let (mut n, mut sx, mut sy, mut sxx, mut syy, mut sxy) = (0i128, 0i128, 0i128, 0i128, 0i128, 0i128);
    let mut add = |x: usize, y: usize| {
        let (x, y) = (x as i128, y as i128);
        n += 1;
        sx += x;
        sy += y;
        sxx += x * x;
        syy += y * y;
        sxy += x * y;
    };
    for e in net.edges() {
        if net.is_directed() {
            add(net.out_degree(e.source), net.in_degree(e.target));
        } else {
            let (du, dv) = (net.degree(e.source), net.degree(e.target));
            add(du, dv);
            add(dv, du);
        }
    }
    let cov = n * sxy - sx * sy;
    let var_x = n * sxx - sx * sx;
    let var_y = n * syy - sy * sy;
    if var_x == 0 || var_y == 0 {
        return Ok(None);
    }
    // Symmetric (undirected) sums give var_x == var_y; one division then
    // rounds exactly once.
    let r = if var_x == var_y {
        cov as f64 / var_x as f64
    } else {
        cov as f64 / ((var_x as f64).sqrt() * (var_y as f64).sqrt())
    };
    Ok(Some(r.clamp(-1.0, 1.0)))
}

/// Mean hop distance over ordered pairs of distinct, mutually reachable
/// nodes. Unreachable pairs are left out of both sums.
pub fn average_path_length(net: &Network) -> Result<f64> {
    let n = net.node_count();
    let (total, pairs) = (0..n)
        .into_par_iter()
        .map_init(
            || (vec![usize::MAX; n], VecDeque::new()),
            |(dist, queue), s| {
                bfs_hops(net, s, dist, queue);
                dist.iter()
                    .filter(|&&d| d != usize::MAX && d > 0)
                    .fold((0u64, 0u64), |(t, c), &d| (t + d as u64, c + 1))
            },
        )
        .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1));
    if pairs == 0 {
        return Err(Error::Undefined("no reachable pair of nodes".into()));
    }
    Ok(total as f64 / pairs as f64)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightedPair {
    pub source: String,
    pub target: String,
    pub weight: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EdgeExtremes {
    pub thickest: WeightedPair,
    pub min_weight: f64,
    pub max_weight: f64,
}

/// Heaviest edge (ties to the smallest `(source, target)` ids) and the weight
/// range.
pub fn edge_extremes(net: &Network) -> Result<EdgeExtremes> {
    let mut best: Option<(f64, &str, &str)> = None;
    let mut min = f64::INFINITY;
    for e in net.edges() {
        let (a, b) = net.edge_ids(e);
        min = min.min(e.weight);
        let better = match best {
            None => true,
            Some((w, ba, bb)) => e.weight > w || (e.weight == w && (a, b) < (ba, bb)),
        };
        if better {
            best = Some((e.weight, a, b));
        }
    }
    let (max, a, b) = best.ok_or_else(|| Error::Undefined("edge extremes of an edgeless network".into()))?;
    Ok(EdgeExtremes {
        thickest: WeightedPair {
            source: a.to_owned(),
            target: b.to_owned(),
            weight: max,
        },
        min_weight: min,
        max_weight: max,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TopologySummary {
    pub directed: bool,
    pub node_count: usize,
    pub edge_count: usize,
    pub density: f64,
    /// `2E/N` undirected, `E/N` directed.
    pub avg_degree_standard: f64,
    /// `E/N`, the convention behind commonly reported co-medication tables.
    pub edges_per_node: f64,
    /// `None` when undefined (zero degree variance).
    pub degree_assortativity: Option<f64>,
    pub avg_path_length: f64,
    pub thickest_edge: WeightedPair,
    pub weight_range: (f64, f64),
}

pub fn summarize(net: &Network) -> Result<TopologySummary> {
    let n = net.node_count();
    let e = net.edge_count();
    let density = density(net)?;
    let per_node = e as f64 / n as f64;
    let extremes = edge_extremes(net)?;
    Ok(TopologySummary {
        directed: net.is_directed(),
        node_count: n,
        edge_count: e,
        density,
        avg_degree_standard: if net.is_directed() { per_node } else { 2.0 * per_node },
        edges_per_node: per_node,
        degree_assortativity: degree_assortativity(net)?,
        avg_path_length: average_path_length(net)?,
        thickest_edge: extremes.thickest,
        weight_range: (extremes.min_weight, extremes.max_weight),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::NetworkBuilder;

    fn undirected(edges: &[(&str, &str, f64)]) -> Network {
        let mut b = NetworkBuilder::new(false, true);
        for (a, t, w) in edges {
            b.edge(a, t, *w).unwrap();
        }
        b.build()
    }

    fn triangle() -> Network {
        undirected(&[("a", "b", 1.0), ("b", "c", 1.0), ("a", "c", 1.0)])
    }

    #[test]
    fn density_examples() {
        assert!((density_from_counts(762, 75052, false).unwrap() - 0.2589).abs() < 5e-5);
        assert!((density_from_counts(1699, 57151, false).unwrap() - 0.0396).abs() < 5e-5);
        assert_eq!(density(&triangle()).unwrap(), 1.0);
        assert!(density_from_counts(1, 0, false).is_err());
        assert_eq!(density_from_counts(2, 2, true).unwrap(), 1.0);
    }

    #[test]
    fn assortativity_examples() {
        let star = undirected(&[("c", "a", 1.0), ("c", "b", 1.0), ("c", "d", 1.0), ("c", "e", 1.0)]);
        assert!((degree_assortativity(&star).unwrap().unwrap() + 1.0).abs() < 1e-12);
        let cycle = undirected(&[("a", "b", 1.0), ("b", "c", 1.0), ("c", "d", 1.0), ("d", "a", 1.0)]);
        assert_eq!(degree_assortativity(&cycle).unwrap(), None);
        assert!(degree_assortativity(&NetworkBuilder::new(false, true).build()).is_err());
    }

    #[test]
    fn path_length_examples() {
        let p = undirected(&[("a", "b", 1.0), ("b", "c", 1.0)]);
        assert!((average_path_length(&p).unwrap() - 4.0 / 3.0).abs() < 1e-15);
        assert_eq!(average_path_length(&triangle()).unwrap(), 1.0);

        let mut b = NetworkBuilder::new(false, true);
        b.edge("a", "b", 1.0).unwrap();
        b.node("c");
        assert_eq!(average_path_length(&b.build()).unwrap(), 1.0);

        let mut b = NetworkBuilder::new(false, true);
        b.node("x");
        assert!(average_path_length(&b.build()).is_err());
    }

    #[test]
    fn extremes_examples() {
        let net = undirected(&[("a", "b", 5.0), ("b", "c", 2.0), ("c", "d", 9.0)]);
        let x = edge_extremes(&net).unwrap();
        assert_eq!(x.max_weight, 9.0);
        assert_eq!(x.min_weight, 2.0);
        assert_eq!((x.thickest.source.as_str(), x.thickest.target.as_str()), ("c", "d"));

        let single = undirected(&[("a", "b", 4.0)]);
        let x = edge_extremes(&single).unwrap();
        assert_eq!((x.min_weight, x.max_weight), (4.0, 4.0));

        let tie = undirected(&[("x", "y", 3.0), ("a", "z", 3.0)]);
        assert_eq!(edge_extremes(&tie).unwrap().thickest.source, "a");
        assert!(edge_extremes(&NetworkBuilder::new(false, true).build()).is_err());
    }

    #[test]
    fn summarize_triangle() {
        let s = summarize(&triangle()).unwrap();
        assert_eq!(s.density, 1.0);
        assert_eq!(s.avg_degree_standard, 2.0);
        assert_eq!(s.edges_per_node, 1.0);
        assert_eq!(s.avg_path_length, 1.0);
        assert_eq!(s.degree_assortativity, None);
    }
}
