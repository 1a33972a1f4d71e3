//! Reference implementations used only by tests.
//!
//! Everything here is deliberately naive: path measures enumerate every
//! simple path, modularity is the textbook double sum, community optima come
//! from enumerating all set partitions, and episodes are built by marking
//! individual calendar days. None of it shares code with `comednet` beyond
//! converting a [`TestGraph`] into a `Network`.

use std::collections::{BTreeMap, BTreeSet};

use chrono::{Days, NaiveDate};
use comednet::{Network, NetworkBuilder};
use nalgebra::{DMatrix, SymmetricEigen};
use num_rational::Ratio;
use rand::seq::SliceRandom;
use rand::Rng;

pub type Q = Ratio<i64>;

/// Small graph over nodes `0..n` with integer weights.
#[derive(Debug, Clone, PartialEq)]
pub struct TestGraph {
    pub n: usize,
    pub directed: bool,
    pub edges: Vec<(usize, usize, u64)>,
}

impl TestGraph {
    pub fn id(i: usize) -> String {
        format!("v{i:02}")
    }

    /// Nodes are inserted first, so node `i` of the network is `v{i}`.
    pub fn to_network(&self, weighted: bool) -> Network {
        let mut b = NetworkBuilder::new(self.directed, weighted);
        for i in 0..self.n {
            b.node(&Self::id(i));
        }
        for &(u, v, w) in &self.edges {
            b.edge(&Self::id(u), &Self::id(v), w as f64).expect("valid test edge");
        }
        b.build()
    }

    /// Outgoing adjacency; both directions when undirected.
    pub fn adjacency(&self) -> Vec<Vec<(usize, u64)>> {
        let mut adj = vec![Vec::new(); self.n];
        for &(u, v, w) in &self.edges {
            adj[u].push((v, w));
            if !self.directed {
                adj[v].push((u, w));
            }
        }
        adj
    }

    /// Symmetric weight matrix (undirected graphs only).
    pub fn matrix(&self, weighted: bool) -> Vec<Vec<f64>> {
        let mut a = vec![vec![0.0; self.n]; self.n];
        for &(u, v, w) in &self.edges {
            let x = if weighted { w as f64 } else { 1.0 };
            a[u][v] = x;
            a[v][u] = x;
        }
        a
    }

    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let mut und = vec![Vec::new(); self.n];
        for &(u, v, _) in &self.edges {
            und[u].push(v);
            und[v].push(u);
        }
        let mut seen = vec![false; self.n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(u) = stack.pop() {
            for &v in &und[u] {
                if !seen[v] {
                    seen[v] = true;
                    stack.push(v);
                }
            }
        }
        seen.iter().all(|&s| s)
    }
}

/// Erdős–Rényi graph with weights drawn from `1..=max_weight`.
pub fn random_graph<R: Rng>(rng: &mut R, n: usize, p: f64, max_weight: u64, directed: bool) -> TestGraph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in 0..n {
            if u == v || (!directed && v < u) {
                continue;
            }
            if rng.gen_bool(p) {
                edges.push((u, v, rng.gen_range(1..=max_weight)));
            }
        }
    }
    TestGraph { n, directed, edges }
}

/// Connected undirected graph: a random spanning tree plus extra edges with
/// probability `p`.
pub fn random_connected<R: Rng>(rng: &mut R, n: usize, p: f64, max_weight: u64) -> TestGraph {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut present = BTreeSet::new();
    for i in 1..n {
        let j = rng.gen_range(0..i);
        let (a, b) = (order[i].min(order[j]), order[i].max(order[j]));
        present.insert((a, b));
    }
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                present.insert((u, v));
            }
        }
    }
    let edges = present
        .into_iter()
        .map(|(u, v)| (u, v, rng.gen_range(1..=max_weight)))
        .collect();
    TestGraph {
        n,
        directed: false,
        edges,
    }
}

/// Every simple path from `s` to `t`, as node sequences.
fn simple_paths(adj: &[Vec<(usize, u64)>], s: usize, t: usize) -> Vec<Vec<usize>> {
    fn walk(adj: &[Vec<(usize, u64)>], t: usize, path: &mut Vec<usize>, on: &mut [bool], out: &mut Vec<Vec<usize>>) {
        let u = *path.last().unwrap();
        if u == t {
            out.push(path.clone());
            return;
        }
        for &(v, _) in &adj[u] {
            if !on[v] {
                on[v] = true;
                path.push(v);
                walk(adj, t, path, on, out);
                path.pop();
                on[v] = false;
            }
        }
    }
    let mut on = vec![false; adj.len()];
    on[s] = true;
    let mut out = Vec::new();
    walk(adj, t, &mut vec![s], &mut on, &mut out);
    out
}

/// Path length: hop count, or the sum of `1 / weight` when `inverse_weight`.
fn path_length(adj: &[Vec<(usize, u64)>], path: &[usize], inverse_weight: bool) -> Q {
    path.windows(2)
        .map(|w| {
            if inverse_weight {
                let weight = adj[w[0]].iter().find(|(v, _)| *v == w[1]).unwrap().1;
                Q::new(1, weight as i64)
            } else {
                Q::from_integer(1)
            }
        })
        .sum()
}

/// Shortest paths between `s` and `t` and their common length.
fn shortest_paths(adj: &[Vec<(usize, u64)>], s: usize, t: usize, inverse_weight: bool) -> Option<(Q, Vec<Vec<usize>>)> {
    let mut best: Option<(Q, Vec<Vec<usize>>)> = None;
    for p in simple_paths(adj, s, t) {
        let len = path_length(adj, &p, inverse_weight);
        match &mut best {
            Some((b, paths)) if len == *b => paths.push(p),
            Some((b, _)) if len > *b => {}
            _ => best = Some((len, vec![p])),
        }
    }
    best
}

/// Betweenness as exact fractions. Undirected graphs count each unordered
/// pair once; directed graphs count ordered pairs.
pub fn betweenness_oracle(g: &TestGraph, inverse_weight: bool) -> Vec<Q> {
    let adj = g.adjacency();
    let mut score = vec![Q::from_integer(0); g.n];
    for s in 0..g.n {
        for t in 0..g.n {
            if s == t || (!g.directed && t < s) {
                continue;
            }
            let Some((_, paths)) = shortest_paths(&adj, s, t, inverse_weight) else {
                continue;
            };
            let sigma = paths.len() as i64;
            let mut through = vec![0i64; g.n];
            for p in &paths {
                for &v in &p[1..p.len() - 1] {
                    through[v] += 1;
                }
            }
            for v in 0..g.n {
                if through[v] > 0 {
                    score[v] += Q::new(through[v], sigma);
                }
            }
        }
    }
    score
}

/// Shortest distance to every node reachable from `s`.
pub fn distances_oracle(g: &TestGraph, s: usize, inverse_weight: bool) -> Vec<Option<Q>> {
    let adj = g.adjacency();
    (0..g.n)
        .map(|t| {
            if t == s {
                Some(Q::from_integer(0))
            } else {
                shortest_paths(&adj, s, t, inverse_weight).map(|(d, _)| d)
            }
        })
        .collect()
}

/// `(reachable - 1) / Σ distance`, 0 for nodes that reach nothing.
pub fn closeness_oracle(g: &TestGraph, inverse_weight: bool) -> Vec<Q> {
    (0..g.n)
        .map(|s| {
            let d: Vec<Q> = distances_oracle(g, s, inverse_weight)
                .into_iter()
                .enumerate()
                .filter(|&(t, _)| t != s)
                .filter_map(|(_, d)| d)
                .collect();
            let total: Q = d.iter().copied().sum();
            if d.is_empty() {
                Q::from_integer(0)
            } else {
                Q::from_integer(d.len() as i64) / total
            }
        })
        .collect()
}

/// Degree of each node (in + out when directed).
pub fn degree_oracle(g: &TestGraph) -> Vec<usize> {
    let mut deg = vec![0; g.n];
    for &(u, v, _) in &g.edges {
        deg[u] += 1;
        deg[v] += 1;
    }
    deg
}

/// Leading eigenvector of the adjacency matrix from a dense symmetric
/// decomposition, signed positive and scaled to max 1.
pub fn eigenvector_oracle(g: &TestGraph, weighted: bool) -> Vec<f64> {
    let a = g.matrix(weighted);
    let m = DMatrix::from_fn(g.n, g.n, |i, j| a[i][j]);
    let eig = SymmetricEigen::new(m);
    let top = (0..g.n)
        .max_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]))
        .unwrap();
    let v: Vec<f64> = eig.eigenvectors.column(top).iter().map(|x| x.abs()).collect();
    let max = v.iter().cloned().fold(0.0, f64::max);
    v.into_iter().map(|x| x / max).collect()
}

/// `Q = 1/2m Σ_ij [A_ij - k_i k_j / 2m] δ(c_i, c_j)` over the full matrix.
pub fn modularity_oracle(g: &TestGraph, weighted: bool, modules: &[usize]) -> f64 {
    let a = g.matrix(weighted);
    let k: Vec<f64> = a.iter().map(|row| row.iter().sum()).collect();
    let two_m: f64 = k.iter().sum();
    let mut q = 0.0;
    for i in 0..g.n {
        for j in 0..g.n {
            if modules[i] == modules[j] {
                q += a[i][j] - k[i] * k[j] / two_m;
            }
        }
    }
    q / two_m
}

/// Call `visit` on every set partition of `0..n`, encoded as a restricted
/// growth string.
pub fn for_each_partition(n: usize, mut visit: impl FnMut(&[usize])) {
    fn rec(i: usize, max: usize, labels: &mut Vec<usize>, visit: &mut dyn FnMut(&[usize])) {
        if i == labels.len() {
            visit(labels);
            return;
        }
        for c in 0..=max + 1 {
            labels[i] = c;
            rec(i + 1, max.max(c), labels, visit);
        }
    }
    if n == 0 {
        visit(&[]);
        return;
    }
    let mut labels = vec![0; n];
    rec(1, 0, &mut labels, &mut visit);
}

/// Highest modularity over every partition of the node set.
pub fn optimal_modularity(g: &TestGraph, weighted: bool) -> (f64, Vec<usize>) {
    let mut best = (f64::NEG_INFINITY, Vec::new());
    for_each_partition(g.n, |labels| {
        let q = modularity_oracle(g, weighted, labels);
        if q > best.0 {
            best = (q, labels.to_vec());
        }
    });
    best
}

/// A fill for the episode oracle: whole DDDs only, so durations are exact.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fill {
    pub patient: String,
    pub atc: String,
    pub date: NaiveDate,
    pub ddd: u64,
}

/// Episodes from day-level coverage: mark every day each fill covers
/// (`ceil(ddd × num / den)` days), then join covered runs separated by at
/// most `gap_days` uncovered days. Output sorted by patient, drug, start.
pub fn episodes_oracle(fills: &[Fill], factor: (u64, u64), gap_days: u64) -> Vec<(String, String, NaiveDate, NaiveDate)> {
    let mut covered: BTreeMap<(String, String), BTreeSet<NaiveDate>> = BTreeMap::new();
    for f in fills {
        let days = (f.ddd * factor.0).div_ceil(factor.1).max(1);
        let set = covered.entry((f.patient.clone(), f.atc.clone())).or_default();
        for d in 0..days {
            set.insert(f.date + Days::new(d));
        }
    }
    let mut out = Vec::new();
    for ((patient, atc), days) in covered {
        let mut run: Option<(NaiveDate, NaiveDate)> = None;
        for d in days {
            run = match run {
                Some((start, end)) if (d - end).num_days() - 1 <= gap_days as i64 => Some((start, d)),
                Some((start, end)) => {
                    out.push((patient.clone(), atc.clone(), start, end));
                    Some((d, d))
                }
                None => Some((d, d)),
            };
        }
        if let Some((start, end)) = run {
            out.push((patient.clone(), atc.clone(), start, end));
        }
    }
    out
}

/// `Σ_p C(k_p, 2)` for per-patient drug counts.
pub fn pair_count(drug_counts: impl IntoIterator<Item = usize>) -> u64 {
    drug_counts.into_iter().map(|k| (k * k.saturating_sub(1) / 2) as u64).sum()
}

/// Outcome of comparing two weighted graphs by scanning every id pair.
#[derive(Debug, Default, Clone, PartialEq)]
pub struct PairScan {
    pub matched: Vec<(String, String, f64, f64)>,
    pub only_a: Vec<(String, String)>,
    pub only_b: Vec<(String, String)>,
    pub lower_in_a: usize,
    pub no_change: usize,
    pub higher_in_a: usize,
}

/// Scan every unordered pair of ids present in either network.
pub fn compare_oracle(a: &[(String, String, f64)], b: &[(String, String, f64)]) -> PairScan {
    let lookup = |edges: &[(String, String, f64)], x: &str, y: &str| {
        edges
            .iter()
            .find(|(u, v, _)| (u == x && v == y) || (u == y && v == x))
            .map(|e| e.2)
    };
    let ids: BTreeSet<&str> = a
        .iter()
        .chain(b)
        .flat_map(|(u, v, _)| [u.as_str(), v.as_str()])
        .collect();
    let ids: Vec<&str> = ids.into_iter().collect();
    let mut scan = PairScan::default();
    for (i, x) in ids.iter().enumerate() {
        for y in &ids[i + 1..] {
            let pair = (x.to_string(), y.to_string());
            match (lookup(a, x, y), lookup(b, x, y)) {
                (Some(wa), Some(wb)) => {
                    if wa < wb {
                        scan.lower_in_a += 1;
                    } else if wa > wb {
                        scan.higher_in_a += 1;
                    } else {
                        scan.no_change += 1;
                    }
                    scan.matched.push((pair.0, pair.1, wa, wb));
                }
                (Some(_), None) => scan.only_a.push(pair),
                (None, Some(_)) => scan.only_b.push(pair),
                (None, None) => {}
            }
        }
    }
    scan
}

/// One-mode projection by set intersection: weight of `{x, y}` is the number
/// of counterparts adjacent to both.
pub fn projection_oracle(links: &[(String, String)], side_nodes: &[String]) -> BTreeMap<(String, String), usize> {
    let mut neighbors: BTreeMap<&str, BTreeSet<&str>> = BTreeMap::new();
    for (l, r) in links {
        neighbors.entry(l).or_default().insert(r);
        neighbors.entry(r).or_default().insert(l);
    }
    let empty = BTreeSet::new();
    let mut out = BTreeMap::new();
    for (i, x) in side_nodes.iter().enumerate() {
        for y in &side_nodes[i + 1..] {
            let nx = neighbors.get(x.as_str()).unwrap_or(&empty);
            let ny = neighbors.get(y.as_str()).unwrap_or(&empty);
            let shared = nx.intersection(ny).count();
            if shared > 0 {
                let key = if x < y { (x.clone(), y.clone()) } else { (y.clone(), x.clone()) };
                out.insert(key, shared);
            }
        }
    }
    out
}

/// Convert an `f64` that should equal a fraction and report the gap.
pub fn gap(value: f64, exact: Q) -> f64 {
    (value - *exact.numer() as f64 / *exact.denom() as f64).abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bell_numbers() {
        for (n, bell) in [(0, 1), (1, 1), (2, 2), (3, 5), (4, 15), (5, 52), (6, 203)] {
            let mut count = 0;
            for_each_partition(n, |_| count += 1);
            assert_eq!(count, bell, "n = {n}");
        }
    }

    #[test]
    fn path_graph_betweenness() {
        let g = TestGraph {
            n: 3,
            directed: false,
            edges: vec![(0, 1, 1), (1, 2, 1)],
        };
        let b = betweenness_oracle(&g, false);
        assert_eq!(b, vec![Q::from_integer(0), Q::from_integer(1), Q::from_integer(0)]);
        let c = closeness_oracle(&g, false);
        assert_eq!(c[1], Q::from_integer(1));
        assert_eq!(c[0], Q::new(2, 3));
    }

    #[test]
    fn square_has_split_paths() {
        let g = TestGraph {
            n: 4,
            directed: false,
            edges: vec![(0, 1, 1), (1, 2, 1), (2, 3, 1), (3, 0, 1)],
        };
        assert_eq!(betweenness_oracle(&g, false), vec![Q::new(1, 2); 4]);
    }

    #[test]
    fn episode_example() {
        let d = |s: &str| NaiveDate::parse_from_str(s, "%Y-%m-%d").unwrap();
        let fill = |date: &str, ddd| Fill {
            patient: "P1".into(),
            atc: "N05CF01".into(),
            date: d(date),
            ddd,
        };
        let one = episodes_oracle(&[fill("2012-12-10", 30)], (6, 5), 14);
        assert_eq!(one[0].2, d("2012-12-10"));
        assert_eq!(one[0].3, d("2013-01-14"));
    }

    #[test]
    fn two_triangles_optimum() {
        let g = TestGraph {
            n: 6,
            directed: false,
            edges: vec![(0, 1, 1), (1, 2, 1), (0, 2, 1), (3, 4, 1), (4, 5, 1), (3, 5, 1), (2, 3, 1)],
        };
        let (q, labels) = optimal_modularity(&g, false);
        assert!((q - 5.0 / 14.0).abs() < 1e-12);
        assert_eq!(labels, vec![0, 0, 0, 1, 1, 1]);
    }
}
