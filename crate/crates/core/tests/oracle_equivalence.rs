//! Measures checked against brute-force reference implementations on small
//! random graphs.

use std::collections::{BTreeMap, HashMap};

use comednet::algebra::{self, BipartiteNetwork, CompareMode, Side};
use comednet::community::{self, LouvainOptions};
use comednet::metrics::{
    self, BetweennessOptions, EigenvectorOptions, PathMode,
};
use comednet_testkit::{self as kit, TestGraph, Q};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const EXACT: f64 = 1e-12;

fn assert_fractions(label: &str, got: &[f64], want: &[Q], tol: f64) {
    for (i, (g, w)) in got.iter().zip(want).enumerate() {
        let scale = (*w.numer() as f64 / *w.denom() as f64).abs().max(1.0);
        assert!(kit::gap(*g, *w) <= tol * scale, "{label}: node {i} got {g}, want {w}");
    }
}

#[test]
fn hop_centralities_match_path_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..150 {
        let n = rng.gen_range(2..=8);
        let p = rng.gen_range(0.0..0.6);
        let g = kit::random_connected(&mut rng, n, p, 1);
        let net = g.to_network(false);

        let degrees: Vec<usize> = (0..n).map(|i| net.degree(i)).collect();
        assert_eq!(degrees, kit::degree_oracle(&g));

        let b = metrics::betweenness_centrality(&net, BetweennessOptions::default());
        assert_fractions("betweenness", &b, &kit::betweenness_oracle(&g, false), EXACT);

        let c = metrics::closeness_centrality(&net, PathMode::Hops);
        assert_fractions("closeness", &c, &kit::closeness_oracle(&g, false), 1e-9);
    }
}

#[test]
fn inverse_weight_paths_match_enumeration() {
    // Weights 1, 2 and 4 make tied path lengths common (1/2 + 1/2 = 1).
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..150 {
        let n = rng.gen_range(2..=7);
        let mut g = kit::random_connected(&mut rng, n, 0.4, 3);
        for e in &mut g.edges {
            e.2 = [1, 2, 4][e.2 as usize - 1];
        }
        let net = g.to_network(true);
        let opts = BetweennessOptions {
            normalized: false,
            paths: PathMode::InverseWeight,
        };
        let b = metrics::betweenness_centrality(&net, opts);
        assert_fractions("weighted betweenness", &b, &kit::betweenness_oracle(&g, true), EXACT);
        let c = metrics::closeness_centrality(&net, PathMode::InverseWeight);
        assert_fractions("weighted closeness", &c, &kit::closeness_oracle(&g, true), 1e-9);
    }
}

#[test]
fn directed_betweenness_counts_ordered_pairs() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..100 {
        let n = rng.gen_range(2..=7);
        let g = kit::random_graph(&mut rng, n, 0.35, 1, true);
        let net = g.to_network(false);
        let b = metrics::betweenness_centrality(&net, BetweennessOptions::default());
        assert_fractions("directed betweenness", &b, &kit::betweenness_oracle(&g, false), EXACT);
        let c = metrics::closeness_centrality(&net, PathMode::Hops);
        assert_fractions("directed closeness", &c, &kit::closeness_oracle(&g, false), 1e-9);
    }
}

#[test]
fn eigenvector_matches_dense_decomposition() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for _ in 0..150 {
        let n = rng.gen_range(2..=8);
        let weighted = rng.gen_bool(0.5);
        let p = rng.gen_range(0.0..0.7);
        let g = kit::random_connected(&mut rng, n, p, 6);
        let net = g.to_network(true);
        let opts = EigenvectorOptions {
            use_weights: weighted,
            ..EigenvectorOptions::default()
        };
        let got = metrics::eigenvector_centrality(&net, &opts).unwrap();
        let want = kit::eigenvector_oracle(&g, weighted);
        for (i, (a, b)) in got.iter().zip(&want).enumerate() {
            assert!((a - b).abs() <= 1e-6, "node {i}: {a} vs {b} on {g:?}");
        }
    }
}

#[test]
fn modularity_matches_double_sum() {
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    for _ in 0..200 {
        let n = rng.gen_range(2..=9);
        let g = kit::random_graph(&mut rng, n, 0.4, 5, false);
        if g.edges.is_empty() {
            continue;
        }
        let weighted = rng.gen_bool(0.5);
        let net = g.to_network(weighted);
        let labels: Vec<usize> = (0..n).map(|_| rng.gen_range(0..3)).collect();
        let got = community::modularity_of(&net, &labels).unwrap();
        let want = kit::modularity_oracle(&g, weighted, &labels);
        assert!((got - want).abs() < 1e-12, "{got} vs {want}");

        let by_id: HashMap<String, usize> = (0..n).map(|i| (TestGraph::id(i), labels[i])).collect();
        assert!((community::modularity_q(&net, &by_id).unwrap() - want).abs() < 1e-12);
    }
}

#[test]
fn louvain_is_near_exhaustive_optimum() {
    let mut rng = ChaCha8Rng::seed_from_u64(16);
    let mut checked = 0;
    while checked < 40 {
        let n = rng.gen_range(3..=9);
        let p = rng.gen_range(0.2..0.7);
        let g = kit::random_graph(&mut rng, n, p, 4, false);
        if g.edges.is_empty() {
            continue;
        }
        checked += 1;
        let net = g.to_network(true);
        let part = community::louvain(&net, &LouvainOptions::default()).unwrap();
        let (best, _) = kit::optimal_modularity(&g, true);
        assert!(part.modularity <= best + 1e-12);
        assert!(part.modularity >= 0.95 * best - 1e-12, "{} < 0.95 × {best}", part.modularity);

        // Reported Q is the Q of the reported partition.
        let labels: Vec<usize> = part.assignment.iter().map(|(_, m)| *m).collect();
        assert!((kit::modularity_oracle(&g, true, &labels) - part.modularity).abs() < 1e-12);
    }
}

fn weighted_edges(g: &TestGraph) -> Vec<(String, String, f64)> {
    g.edges
        .iter()
        .map(|&(u, v, w)| (TestGraph::id(u), TestGraph::id(v), w as f64))
        .collect()
}

#[test]
fn compare_matches_pair_scan() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for _ in 0..60 {
        let n = rng.gen_range(2..=25);
        let (pa, pb) = (rng.gen_range(0.05..0.5), rng.gen_range(0.05..0.5));
        let a = kit::random_graph(&mut rng, n, pa, 5, false);
        let b = kit::random_graph(&mut rng, n, pb, 5, false);
        let result = algebra::compare(&a.to_network(true), &b.to_network(true), CompareMode::Ratio).unwrap();
        let scan = kit::compare_oracle(&weighted_edges(&a), &weighted_edges(&b));

        let c = result.classification;
        assert_eq!((c.lower_in_a, c.no_change, c.higher_in_a), (scan.lower_in_a, scan.no_change, scan.higher_in_a));
        let matched: Vec<_> = result
            .matched
            .iter()
            .map(|m| (m.pair.a.clone(), m.pair.b.clone(), m.weight_a, m.weight_b))
            .collect();
        assert_eq!(matched, scan.matched);
        let pairs = |v: &[algebra::Pair]| v.iter().map(|p| (p.a.clone(), p.b.clone())).collect::<Vec<_>>();
        assert_eq!(pairs(&result.only_in_a), scan.only_a);
        assert_eq!(pairs(&result.only_in_b), scan.only_b);
        for m in &result.matched {
            assert_eq!(m.value, m.weight_a / m.weight_b);
        }
    }
}

#[test]
fn projection_matches_set_intersection() {
    let mut rng = ChaCha8Rng::seed_from_u64(18);
    for _ in 0..60 {
        let left: Vec<String> = (0..rng.gen_range(1..8)).map(|i| format!("L{i}")).collect();
        let right: Vec<String> = (0..rng.gen_range(1..8)).map(|i| format!("R{i}")).collect();
        let mut links = Vec::new();
        for l in &left {
            for r in &right {
                if rng.gen_bool(0.4) {
                    links.push((l.clone(), r.clone()));
                }
            }
        }
        let edges: Vec<(String, String, f64)> = links.iter().map(|(l, r)| (l.clone(), r.clone(), 1.0)).collect();
        let bip = BipartiteNetwork::from_edges(left.clone(), right.clone(), &edges).unwrap();
        for (side, nodes) in [(Side::Left, &left), (Side::Right, &right)] {
            let net = bip.project(side);
            assert_eq!(net.node_count(), nodes.len());
            let got: BTreeMap<(String, String), usize> = net
                .edges()
                .iter()
                .map(|e| {
                    let (a, b) = net.edge_ids(e);
                    let key = if a < b { (a.to_owned(), b.to_owned()) } else { (b.to_owned(), a.to_owned()) };
                    (key, e.weight as usize)
                })
                .collect();
            assert_eq!(got, kit::projection_oracle(&links, nodes));
        }
    }
}
