//! Node centrality: degree, betweenness, closeness and eigenvector.
//!
//! Betweenness follows Freeman's definition: for every pair `s != t` the
//! share of shortest `s`-`t` paths passing through `v` is credited to `v`,
//! and an undirected pair is counted once. It is computed with Brandes'
//! dependency accumulation, one sweep per source.
//!
//! Per-source sweeps run on the current rayon pool. Sources are cut into
//! fixed-size blocks whose partial sums are added in block order, so the
//! result is bitwise identical for any number of workers.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Network;

use super::paths::{PathMode, Sweep};

const SOURCE_BLOCK: usize = 32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeScores {
    pub degree: usize,
    pub in_degree: Option<usize>,
    pub out_degree: Option<usize>,
}

/// Edge counts per node, ignoring weights. In/out splits only for directed
/// networks.
pub fn degree_centrality(net: &Network) -> Vec<DegreeScores> {
    (0..net.node_count())
        .map(|i| DegreeScores {
            degree: net.degree(i),
            in_degree: net.is_directed().then(|| net.in_degree(i)),
            out_degree: net.is_directed().then(|| net.out_degree(i)),
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct BetweennessOptions {
    /// Divide by the number of pairs not involving the node.
    pub normalized: bool,
    pub paths: PathMode,
}

fn accumulate_block(net: &Network, sources: std::ops::Range<usize>, paths: PathMode) -> Vec<f64> {
    let n = net.node_count();
    let mut sweep = Sweep::new(n);
    let mut delta = vec![0.0; n];
    let mut partial = vec![0.0; n];
    for s in sources {
        sweep.run(net, s, paths);
        for &v in &sweep.order {
            delta[v] = 0.0;
        }
        for &w in sweep.order.iter().rev() {
            let coeff = (1.0 + delta[w]) / sweep.sigma[w];
            for &v in &sweep.preds[w] {
                delta[v] += sweep.sigma[v] * coeff;
            }
            if w != s {
                partial[w] += delta[w];
            }
        }
    }
    partial
}

pub fn betweenness_centrality(net: &Network, options: BetweennessOptions) -> Vec<f64> {
    let n = net.node_count();
    let blocks: Vec<Vec<f64>> = (0..n.div_ceil(SOURCE_BLOCK))
        .into_par_iter()
        .map(|b| accumulate_block(net, b * SOURCE_BLOCK..((b + 1) * SOURCE_BLOCK).min(n), options.paths))
        .collect();

    let mut scores = vec![0.0; n];
    for block in &blocks {
        for (s, x) in scores.iter_mut().zip(block) {
            *s += x;
        }
    }
    if !net.is_directed() {
        scores.iter_mut().for_each(|s| *s /= 2.0);
    }
    if options.normalized {
        let pairs = if n > 2 { ((n - 1) * (n - 2)) as f64 } else { 0.0 };
        let scale = match (pairs > 0.0, net.is_directed()) {
            (false, _) => 0.0,
            (true, true) => 1.0 / pairs,
            (true, false) => 2.0 / pairs,
        };
        scores.iter_mut().for_each(|s| *s *= scale);
    }
    scores
}

/// Closeness `(r - 1) / Σ d` over the `r - 1` nodes reachable from each node,
/// so a node adjacent to everything it can reach scores 1. Isolated nodes
/// score 0. Directed networks follow outgoing edges.
pub fn closeness_centrality(net: &Network, paths: PathMode) -> Vec<f64> {
    let n = net.node_count();
    (0..n)
        .into_par_iter()
        .map_init(
            || Sweep::new(n),
            |sweep, v| {
                sweep.run(net, v, paths);
                let total: f64 = sweep.order.iter().map(|&u| sweep.dist[u]).sum();
                let reached = sweep.order.len() - 1;
                if reached == 0 || total <= 0.0 {
                    0.0
                } else {
                    reached as f64 / total
                }
            },
        )
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EigenScale {
    /// Largest score is 1.
    #[default]
    Max,
    /// Euclidean norm is 1.
    Unit,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EigenvectorOptions {
    pub tolerance: f64,
    pub max_iterations: usize,
    /// Use edge weights as adjacency entries instead of 1.
    pub use_weights: bool,
    pub scale: EigenScale,
}

impl Default for EigenvectorOptions {
    fn default() -> Self {
        EigenvectorOptions {
            tolerance: 1e-9,
            max_iterations: 1000,
            use_weights: false,
            scale: EigenScale::Max,
        }
    }
}

/// Principal eigenvector of the adjacency matrix by power iteration.
///
/// Iterates with `A + I`, which has the same eigenvectors as `A` but a unique
/// dominant eigenvalue even on bipartite graphs, where plain power iteration
/// oscillates. Each step is rescaled to max 1 and convergence is declared
/// when successive iterates differ by less than `tolerance` in max-norm.
pub fn eigenvector_centrality(net: &Network, options: &EigenvectorOptions) -> Result<Vec<f64>> {
    if net.is_directed() {
        return Err(Error::DirectedUnsupported("eigenvector centrality"));
    }
    let n = net.node_count();
    if n == 0 {
        return Err(Error::Undefined("eigenvector centrality of an empty network".into()));
    }
    let mut x = vec![1.0; n];
    let mut next = vec![0.0; n];
    for _ in 0..options.max_iterations {
        for (v, out) in next.iter_mut().enumerate() {
            *out = x[v]
                + net
                    .neighbors(v)
                    .map(|(u, w)| if options.use_weights { w * x[u] } else { x[u] })
                    .sum::<f64>();
        }
        let max = next.iter().cloned().fold(0.0, f64::max);
        if max <= 0.0 {
            return Err(Error::Undefined("eigenvector iterate vanished".into()));
        }
        next.iter_mut().for_each(|v| *v /= max);
        let diff = x.iter().zip(&next).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        std::mem::swap(&mut x, &mut next);
        if diff < options.tolerance {
            if options.scale == EigenScale::Unit {
                let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
                x.iter_mut().for_each(|v| *v /= norm);
            }
            return Ok(x);
        }
    }
    Err(Error::NoConvergence {
        iterations: options.max_iterations,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Measure {
    Degree,
    Betweenness,
    Closeness,
    Eigenvector,
}

impl Measure {
    pub const ALL: [Measure; 4] = [Measure::Degree, Measure::Betweenness, Measure::Closeness, Measure::Eigenvector];

    pub fn name(self) -> &'static str {
        match self {
            Measure::Degree => "degree",
            Measure::Betweenness => "betweenness",
            Measure::Closeness => "closeness",
            Measure::Eigenvector => "eigenvector",
        }
    }
}

impl std::str::FromStr for Measure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Measure::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown measure `{s}`")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NodeCentrality {
    pub id: String,
    pub degree: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub in_degree: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out_degree: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub betweenness: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub closeness: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eigenvector: Option<f64>,
}

impl NodeCentrality {
    pub fn get(&self, measure: Measure) -> Option<f64> {
        match measure {
            Measure::Degree => Some(self.degree as f64),
            Measure::Betweenness => self.betweenness,
            Measure::Closeness => self.closeness,
            Measure::Eigenvector => self.eigenvector,
        }
    }

    /// All computed scores keyed by measure name.
    pub fn measures(&self) -> BTreeMap<&'static str, f64> {
        let mut out = BTreeMap::new();
        out.insert("degree", self.degree as f64);
        if let Some(v) = self.in_degree {
            out.insert("in_degree", v as f64);
        }
        if let Some(v) = self.out_degree {
            out.insert("out_degree", v as f64);
        }
        for m in [Measure::Betweenness, Measure::Closeness, Measure::Eigenvector] {
            if let Some(v) = self.get(m) {
                out.insert(m.name(), v);
            }
        }
        out
    }
}

/// Per-node centrality scores in network node order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CentralityReport {
    pub nodes: Vec<NodeCentrality>,
}

impl CentralityReport {
    /// The `k` highest-scoring nodes, ties broken by ascending id.
    pub fn top_k(&self, measure: Measure, k: usize) -> Vec<(&str, f64)> {
        let mut ranked: Vec<(&str, f64)> = self
            .nodes
            .iter()
            .filter_map(|n| n.get(measure).map(|v| (n.id.as_str(), v)))
            .collect();
        ranked.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(b.0)));
        ranked.truncate(k);
        ranked
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CentralityOptions {
    pub measures: Vec<Measure>,
    pub paths: PathMode,
    pub normalized_betweenness: bool,
    pub eigenvector: EigenvectorOptions,
}

impl Default for CentralityOptions {
    fn default() -> Self {
        CentralityOptions {
            measures: Measure::ALL.to_vec(),
            paths: PathMode::Hops,
            normalized_betweenness: false,
            eigenvector: EigenvectorOptions::default(),
        }
    }
}

/// Compute the requested measures. Degree is always included.
pub fn centrality_report(net: &Network, options: &CentralityOptions) -> Result<CentralityReport> {
    let wants = |m: Measure| options.measures.contains(&m);
    let degrees = degree_centrality(net);
    let betweenness = wants(Measure::Betweenness).then(|| {
        betweenness_centrality(
            net,
            BetweennessOptions {
                normalized: options.normalized_betweenness,
                paths: options.paths,
            },
        )
    });
    let closeness = wants(Measure::Closeness).then(|| closeness_centrality(net, options.paths));
    let eigenvector = if wants(Measure::Eigenvector) {
        Some(eigenvector_centrality(net, &options.eigenvector)?)
    } else {
        None
    };
    let nodes = net
        .nodes()
        .iter()
        .enumerate()
        .map(|(i, node)| NodeCentrality {
            id: node.id.clone(),
            degree: degrees[i].degree,
            in_degree: degrees[i].in_degree,
            out_degree: degrees[i].out_degree,
            betweenness: betweenness.as_ref().map(|b| b[i]),
            closeness: closeness.as_ref().map(|c| c[i]),
            eigenvector: eigenvector.as_ref().map(|e| e[i]),
        })
        .collect();
    Ok(CentralityReport { nodes })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::NetworkBuilder;

    fn undirected(edges: &[(&str, &str)]) -> Network {
        let mut b = NetworkBuilder::new(false, false);
        for (a, t) in edges {
            b.edge(a, t, 1.0).unwrap();
        }
        b.build()
    }

    fn by_id<'a>(net: &Network, scores: &'a [f64], id: &str) -> f64 {
        scores[net.index_of(id).unwrap()]
    }

    fn path3() -> Network {
        undirected(&[("A", "B"), ("B", "C")])
    }

    fn star(leaves: usize) -> Network {
        let ids: Vec<String> = (0..leaves).map(|i| format!("l{i}")).collect();
        let edges: Vec<(&str, &str)> = ids.iter().map(|l| ("c", l.as_str())).collect();
        undirected(&edges)
    }

    #[test]
    fn degree_examples() {
        let p = path3();
        let d = degree_centrality(&p);
        assert_eq!(d[p.index_of("B").unwrap()].degree, 2);
        assert_eq!(d[p.index_of("A").unwrap()].degree, 1);
        assert_eq!(d[p.index_of("A").unwrap()].in_degree, None);
        assert_eq!(degree_centrality(&star(4))[0].degree, 4);

        let mut b = NetworkBuilder::new(true, false);
        b.edge("A", "B", 1.0).unwrap();
        let dn = b.build();
        let d = degree_centrality(&dn);
        assert_eq!(d[0].out_degree, Some(1));
        assert_eq!(d[0].in_degree, Some(0));
        assert_eq!(d[1].in_degree, Some(1));
    }

    #[test]
    fn betweenness_examples() {
        let p = path3();
        let b = betweenness_centrality(&p, BetweennessOptions::default());
        assert_eq!(by_id(&p, &b, "B"), 1.0);
        assert_eq!(by_id(&p, &b, "A"), 0.0);

        let c4 = undirected(&[("a", "b"), ("b", "c"), ("c", "d"), ("d", "a")]);
        for v in betweenness_centrality(&c4, BetweennessOptions::default()) {
            assert!((v - 0.5).abs() < 1e-15);
        }

        let s = star(4);
        let b = betweenness_centrality(&s, BetweennessOptions::default());
        assert_eq!(by_id(&s, &b, "c"), 6.0);
        assert_eq!(by_id(&s, &b, "l0"), 0.0);
    }

    #[test]
    fn normalized_betweenness_of_star_center_is_one() {
        let s = star(4);
        let b = betweenness_centrality(
            &s,
            BetweennessOptions {
                normalized: true,
                paths: PathMode::Hops,
            },
        );
        assert!((by_id(&s, &b, "c") - 1.0).abs() < 1e-15);
    }

    #[test]
    fn weighted_betweenness_prefers_heavy_edges() {
        // a-b-c via weight 10 edges (length 0.2) beats direct a-c (length 1).
        let mut b = NetworkBuilder::new(false, true);
        b.edge("a", "b", 10.0).unwrap();
        b.edge("b", "c", 10.0).unwrap();
        b.edge("a", "c", 1.0).unwrap();
        let net = b.build();
        let hops = betweenness_centrality(&net, BetweennessOptions::default());
        assert_eq!(by_id(&net, &hops, "b"), 0.0);
        let weighted = betweenness_centrality(
            &net,
            BetweennessOptions {
                normalized: false,
                paths: PathMode::InverseWeight,
            },
        );
        assert_eq!(by_id(&net, &weighted, "b"), 1.0);
    }

    #[test]
    fn directed_betweenness_counts_ordered_pairs() {
        let mut b = NetworkBuilder::new(true, false);
        b.edge("a", "b", 1.0).unwrap();
        b.edge("b", "c", 1.0).unwrap();
        let net = b.build();
        let s = betweenness_centrality(&net, BetweennessOptions::default());
        assert_eq!(s, vec![0.0, 1.0, 0.0]);
    }

    #[test]
    fn closeness_examples() {
        let c = closeness_centrality(&star(4), PathMode::Hops);
        assert_eq!(c[0], 1.0);
        let p = path3();
        let c = closeness_centrality(&p, PathMode::Hops);
        assert!((by_id(&p, &c, "A") - 2.0 / 3.0).abs() < 1e-15);

        let mut b = NetworkBuilder::new(false, false);
        b.edge("a", "b", 1.0).unwrap();
        b.node("lonely");
        let net = b.build();
        let c = closeness_centrality(&net, PathMode::Hops);
        assert_eq!(by_id(&net, &c, "lonely"), 0.0);
        assert_eq!(by_id(&net, &c, "a"), 1.0);
    }

    #[test]
    fn eigenvector_examples() {
        let tri = undirected(&[("a", "b"), ("b", "c"), ("a", "c")]);
        for v in eigenvector_centrality(&tri, &EigenvectorOptions::default()).unwrap() {
            assert!((v - 1.0).abs() < 1e-9);
        }

        let s = star(3);
        let e = eigenvector_centrality(&s, &EigenvectorOptions::default()).unwrap();
        assert!((e[0] - 1.0).abs() < 1e-12);
        for leaf in &e[1..] {
            assert!((leaf - 1.0 / 3f64.sqrt()).abs() < 1e-6);
        }

        let p = path3();
        let e = eigenvector_centrality(&p, &EigenvectorOptions::default()).unwrap();
        assert!((by_id(&p, &e, "B") - 1.0).abs() < 1e-12);
        assert!((by_id(&p, &e, "A") - 1.0 / 2f64.sqrt()).abs() < 1e-6);
    }

    #[test]
    fn eigenvector_unit_scale() {
        let opts = EigenvectorOptions {
            scale: EigenScale::Unit,
            ..EigenvectorOptions::default()
        };
        let e = eigenvector_centrality(&path3(), &opts).unwrap();
        let norm: f64 = e.iter().map(|v| v * v).sum();
        assert!((norm - 1.0).abs() < 1e-12);
    }

    #[test]
    fn eigenvector_rejects_directed_and_reports_non_convergence() {
        let mut b = NetworkBuilder::new(true, false);
        b.edge("a", "b", 1.0).unwrap();
        assert!(matches!(
            eigenvector_centrality(&b.build(), &EigenvectorOptions::default()),
            Err(Error::DirectedUnsupported(_))
        ));
        let opts = EigenvectorOptions {
            max_iterations: 2,
            tolerance: 1e-300,
            ..EigenvectorOptions::default()
        };
        assert!(matches!(
            eigenvector_centrality(&path3(), &opts),
            Err(Error::NoConvergence { iterations: 2 })
        ));
    }

    #[test]
    fn top_k_breaks_ties_by_id() {
        let report = centrality_report(&star(3), &CentralityOptions::default()).unwrap();
        let top = report.top_k(Measure::Degree, 3);
        assert_eq!(top, vec![("c", 3.0), ("l0", 1.0), ("l1", 1.0)]);
        assert_eq!(report.top_k(Measure::Betweenness, 1)[0].0, "c");
    }

    #[test]
    fn report_respects_measure_selection() {
        let opts = CentralityOptions {
            measures: vec![Measure::Degree],
            ..CentralityOptions::default()
        };
        let r = centrality_report(&path3(), &opts).unwrap();
        assert!(r.nodes.iter().all(|n| n.betweenness.is_none() && n.eigenvector.is_none()));
        assert_eq!(r.nodes[0].measures().len(), 1);
    }
}
