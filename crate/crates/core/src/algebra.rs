//! Operations across networks: intersection with a mask, edge-wise
//! comparison, and bipartite networks with one-mode projection.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Network, NetworkBuilder};

/// Keep the edges of `weighted` that also exist in `mask`, with their weights.
/// Nodes without a surviving edge are dropped.
pub fn combine_intersection(weighted: &Network, mask: &Network) -> Result<Network> {
    if weighted.is_directed() || mask.is_directed() {
        return Err(Error::DirectedUnsupported("network intersection"));
    }
    let survives: Vec<bool> = weighted
        .edges()
        .iter()
        .map(|e| {
            let (a, b) = weighted.edge_ids(e);
            match (mask.index_of(a), mask.index_of(b)) {
                (Some(ma), Some(mb)) => mask.edge_between(ma, mb).is_some(),
                _ => false,
            }
        })
        .collect();

    let mut builder = NetworkBuilder::new(false, weighted.is_weighted());
    let mut endpoint = vec![false; weighted.node_count()];
    for (e, &keep) in weighted.edges().iter().zip(&survives) {
        if keep {
            endpoint[e.source] = true;
            endpoint[e.target] = true;
        }
    }
    for (i, node) in weighted.nodes().iter().enumerate() {
        if endpoint[i] {
            builder.add_record(node.clone());
        }
    }
    for (e, &keep) in weighted.edges().iter().zip(&survives) {
        if keep {
            let (a, b) = weighted.edge_ids(e);
            builder.edge(a, b, e.weight)?;
        }
    }
    Ok(builder.build())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CompareMode {
    /// `w_a / w_b`
    #[default]
    Ratio,
    /// `w_a - w_b`
    Difference,
}

/// An unordered node pair, stored with `a <= b`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Pair {
    pub a: String,
    pub b: String,
}

impl Pair {
    pub fn new(x: &str, y: &str) -> Pair {
        let (a, b) = if x <= y { (x, y) } else { (y, x) };
        Pair {
            a: a.to_owned(),
            b: b.to_owned(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatchedEdge {
    pub pair: Pair,
    pub weight_a: f64,
    pub weight_b: f64,
    /// Ratio or difference, per the comparison mode.
    pub value: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ChangeCounts {
    pub lower_in_a: usize,
    pub no_change: usize,
    pub higher_in_a: usize,
}

impl ChangeCounts {
    pub fn total(&self) -> usize {
        self.lower_in_a + self.no_change + self.higher_in_a
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonResult {
    pub mode: CompareMode,
    /// Shared pairs in canonical order.
    pub matched: Vec<MatchedEdge>,
    pub only_in_a: Vec<Pair>,
    pub only_in_b: Vec<Pair>,
    pub classification: ChangeCounts,
    /// `|matched| / |edges(A) ∪ edges(B)|`.
    pub matched_fraction: f64,
    /// `|matched| / |edges(A)|`.
    pub matched_fraction_a: f64,
    /// `|matched| / |edges(B)|`.
    pub matched_fraction_b: f64,
}

fn weights_by_pair(net: &Network) -> BTreeMap<Pair, f64> {
    net.edges()
        .iter()
        .map(|e| {
            let (a, b) = net.edge_ids(e);
            (Pair::new(a, b), e.weight)
        })
        .collect()
}

fn fraction(num: usize, den: usize) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

/// Compare two undirected weighted networks edge by edge.
pub fn compare(a: &Network, b: &Network, mode: CompareMode) -> Result<ComparisonResult> {
    if a.is_directed() || b.is_directed() {
        return Err(Error::DirectedUnsupported("network comparison"));
    }
    let wa = weights_by_pair(a);
    let wb = weights_by_pair(b);

    let mut matched = Vec::new();
    let mut only_in_a = Vec::new();
    let mut classification = ChangeCounts::default();
    for (pair, &x) in &wa {
        let Some(&y) = wb.get(pair) else {
            only_in_a.push(pair.clone());
            continue;
        };
        let value = match mode {
            CompareMode::Ratio => {
                if y == 0.0 {
                    return Err(Error::ZeroWeight(pair.a.clone(), pair.b.clone()));
                }
                x / y
            }
            CompareMode::Difference => x - y,
        };
        if x == y {
            classification.no_change += 1;
        } else if x > y {
            classification.higher_in_a += 1;
        } else {
            classification.lower_in_a += 1;
        }
        matched.push(MatchedEdge {
            pair: pair.clone(),
            weight_a: x,
            weight_b: y,
            value,
        });
    }
    let only_in_b: Vec<Pair> = wb.keys().filter(|p| !wa.contains_key(p)).cloned().collect();
    let union = matched.len() + only_in_a.len() + only_in_b.len();
    Ok(ComparisonResult {
        mode,
        matched_fraction: fraction(matched.len(), union),
        matched_fraction_a: fraction(matched.len(), wa.len()),
        matched_fraction_b: fraction(matched.len(), wb.len()),
        matched,
        only_in_a,
        only_in_b,
        classification,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ShiftDirection {
    /// Largest `w_a / w_b`.
    AOverB,
    /// Largest `w_b / w_a`.
    BOverA,
}

/// The `k` matched pairs that shifted most in `direction`, as
/// `(edge, oriented ratio)`. Ties go to the smaller pair.
pub fn top_shifted(result: &ComparisonResult, direction: ShiftDirection, k: usize) -> Result<Vec<(&MatchedEdge, f64)>> {
    if result.mode != CompareMode::Ratio {
        return Err(Error::InvalidParameter("top shifted pairs need a ratio comparison".into()));
    }
    if k == 0 {
        return Err(Error::InvalidParameter("k must be positive".into()));
    }
    let mut ranked: Vec<(&MatchedEdge, f64)> = result
        .matched
        .iter()
        .map(|m| {
            let r = match direction {
                ShiftDirection::AOverB => m.value,
                ShiftDirection::BOverA => m.weight_b / m.weight_a,
            };
            (m, r)
        })
        .collect();
    ranked.sort_by(|x, y| y.1.total_cmp(&x.1).then_with(|| x.0.pair.cmp(&y.0.pair)));
    ranked.truncate(k);
    Ok(ranked)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Left,
    Right,
}

/// Two disjoint node sets with weighted edges only across them.
#[derive(Debug, Clone, PartialEq)]
pub struct BipartiteNetwork {
    left: Vec<String>,
    right: Vec<String>,
    /// `(left index, right index, weight)`
    edges: Vec<(usize, usize, f64)>,
}

impl BipartiteNetwork {
    /// Build from declared node sets and `(x, y, weight)` edges, where one
    /// endpoint must be on each side (either order).
    pub fn from_edges<L, R, S>(left: L, right: R, edges: &[(S, S, f64)]) -> Result<Self>
    where
        L: IntoIterator,
        L::Item: Into<String>,
        R: IntoIterator,
        R::Item: Into<String>,
        S: AsRef<str>,
    {
        let left: Vec<String> = dedup(left.into_iter().map(Into::into));
        let right: Vec<String> = dedup(right.into_iter().map(Into::into));
        let li: HashMap<&str, usize> = left.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect();
        let ri: HashMap<&str, usize> = right.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect();
        if let Some(shared) = left.iter().find(|id| ri.contains_key(id.as_str())) {
            return Err(Error::InvalidParameter(format!("`{shared}` declared on both sides")));
        }

        let mut seen = BTreeSet::new();
        let mut out = Vec::with_capacity(edges.len());
        for (x, y, w) in edges {
            let (x, y) = (x.as_ref(), y.as_ref());
            let (l, r) = match (li.get(x), ri.get(y), li.get(y), ri.get(x)) {
                (Some(&l), Some(&r), _, _) | (_, _, Some(&l), Some(&r)) => (l, r),
                _ => {
                    let known = |id: &str| li.contains_key(id) || ri.contains_key(id);
                    if !known(x) {
                        return Err(Error::UnknownNode(x.to_owned()));
                    }
                    if !known(y) {
                        return Err(Error::UnknownNode(y.to_owned()));
                    }
                    return Err(Error::SameSide(x.to_owned(), y.to_owned()));
                }
            };
            if !seen.insert((l, r)) {
                return Err(Error::DuplicateEdge(left[l].clone(), right[r].clone()));
            }
            out.push((l, r, *w));
        }
        Ok(BipartiteNetwork {
            left,
            right,
            edges: out,
        })
    }

    pub fn nodes(&self, side: Side) -> &[String] {
        match side {
            Side::Left => &self.left,
            Side::Right => &self.right,
        }
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn degree(&self, side: Side, id: &str) -> Option<usize> {
        let i = self.nodes(side).iter().position(|n| n == id)?;
        Some(
            self.edges
                .iter()
                .filter(|&&(l, r, _)| match side {
                    Side::Left => l == i,
                    Side::Right => r == i,
                })
                .count(),
        )
    }

    /// One-mode projection onto `side`: two nodes are linked when they share
    /// a counterpart, weighted by the number of shared counterparts. Every
    /// node of the side is kept.
    pub fn project(&self, side: Side) -> Network {
        let (own, other_len) = match side {
            Side::Left => (&self.left, self.right.len()),
            Side::Right => (&self.right, self.left.len()),
        };
        let mut by_counterpart: Vec<Vec<usize>> = vec![Vec::new(); other_len];
        for &(l, r, _) in &self.edges {
            match side {
                Side::Left => by_counterpart[r].push(l),
                Side::Right => by_counterpart[l].push(r),
            }
        }
        let mut shared: BTreeMap<(usize, usize), u64> = BTreeMap::new();
        for members in &mut by_counterpart {
            members.sort_unstable();
            for (i, &x) in members.iter().enumerate() {
                for &y in &members[i + 1..] {
                    *shared.entry((x, y)).or_insert(0) += 1;
                }
            }
        }
        let mut builder = NetworkBuilder::new(false, true);
        for id in own {
            builder.node(id);
        }
        for ((x, y), count) in shared {
            builder
                .edge(&own[x], &own[y], count as f64)
                .expect("distinct side members form a simple graph");
        }
        builder.build()
    }
}

fn dedup(ids: impl Iterator<Item = String>) -> Vec<String> {
    let mut seen = BTreeSet::new();
    ids.filter(|id| seen.insert(id.clone())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn weighted(edges: &[(&str, &str, f64)]) -> Network {
        let mut b = NetworkBuilder::new(false, true);
        for (a, t, w) in edges {
            b.edge(a, t, *w).unwrap();
        }
        b.build()
    }

    fn mask(edges: &[(&str, &str)]) -> Network {
        let mut b = NetworkBuilder::new(false, false);
        for (a, t) in edges {
            b.edge(a, t, 1.0).unwrap();
        }
        b.build()
    }

    fn edge_set(net: &Network) -> Vec<(String, String, f64)> {
        let mut v: Vec<_> = net
            .edges()
            .iter()
            .map(|e| {
                let (a, b) = net.edge_ids(e);
                (a.to_owned(), b.to_owned(), e.weight)
            })
            .collect();
        v.sort_by(|x, y| (&x.0, &x.1).cmp(&(&y.0, &y.1)));
        v
    }

    #[test]
    fn intersection_examples() {
        let w = weighted(&[("X", "Y", 5.0), ("Y", "Z", 3.0)]);
        let combined = combine_intersection(&w, &mask(&[("Z", "Y")])).unwrap();
        assert_eq!(edge_set(&combined), vec![("Y".into(), "Z".into(), 3.0)]);
        assert_eq!(combined.node_count(), 2);

        let empty = combine_intersection(&w, &mask(&[("A", "B")])).unwrap();
        assert_eq!((empty.node_count(), empty.edge_count()), (0, 0));

        let all = combine_intersection(&w, &mask(&[("X", "Y"), ("Y", "Z"), ("Z", "Q")])).unwrap();
        assert_eq!(edge_set(&all), edge_set(&w));
    }

    #[test]
    fn compare_examples() {
        let a = weighted(&[("X", "Y", 20.0), ("Y", "Z", 7.0)]);
        let b = weighted(&[("X", "Y", 10.0), ("Y", "Z", 7.0)]);
        let r = compare(&a, &b, CompareMode::Ratio).unwrap();
        assert_eq!(r.matched[0].value, 2.0);
        assert_eq!(r.matched[1].value, 1.0);
        assert_eq!(r.classification.higher_in_a, 1);
        assert_eq!(r.classification.no_change, 1);
        assert_eq!(r.matched_fraction, 1.0);

        let d = compare(&a, &b, CompareMode::Difference).unwrap();
        assert_eq!(d.matched[0].value, 10.0);

        let r = compare(&weighted(&[("X", "Y", 4.0)]), &weighted(&[("Y", "Z", 2.0)]), CompareMode::Ratio).unwrap();
        assert!(r.matched.is_empty());
        assert_eq!(r.only_in_a, vec![Pair::new("X", "Y")]);
        assert_eq!(r.only_in_b, vec![Pair::new("Y", "Z")]);
        assert_eq!(r.matched_fraction, 0.0);
    }

    #[test]
    fn ratio_guards_zero_weight() {
        let a = weighted(&[("X", "Y", 4.0)]);
        let b = weighted(&[("X", "Y", 0.0)]);
        assert!(matches!(compare(&a, &b, CompareMode::Ratio), Err(Error::ZeroWeight(..))));
        assert!(compare(&a, &b, CompareMode::Difference).is_ok());
    }

    #[test]
    fn top_shifted_examples() {
        let a = weighted(&[("a", "b", 3.0), ("c", "d", 21.0), ("e", "f", 2.0)]);
        let b = weighted(&[("a", "b", 1.0), ("c", "d", 1.0), ("e", "f", 1.0)]);
        let r = compare(&a, &b, CompareMode::Ratio).unwrap();
        let top = top_shifted(&r, ShiftDirection::AOverB, 1).unwrap();
        assert_eq!((top[0].0.pair.a.as_str(), top[0].1), ("c", 21.0));
        assert_eq!(top_shifted(&r, ShiftDirection::AOverB, 10).unwrap().len(), 3);
        let inv = top_shifted(&r, ShiftDirection::BOverA, 1).unwrap();
        assert_eq!(inv[0].0.pair.a, "e");
        assert!(top_shifted(&r, ShiftDirection::AOverB, 0).is_err());
        let d = compare(&a, &b, CompareMode::Difference).unwrap();
        assert!(top_shifted(&d, ShiftDirection::AOverB, 1).is_err());
    }

    #[test]
    fn bipartite_construction() {
        let bn = BipartiteNetwork::from_edges(
            ["d1"],
            ["p1", "p2"],
            &[("d1", "p1", 3.0), ("d1", "p2", 1.0)],
        )
        .unwrap();
        assert_eq!(bn.nodes(Side::Left).len(), 1);
        assert_eq!(bn.degree(Side::Left, "d1"), Some(2));

        let err = BipartiteNetwork::from_edges(["d1"], ["p1", "p2"], &[("p1", "p2", 1.0)]).unwrap_err();
        assert!(matches!(err, Error::SameSide(..)));

        let empty = BipartiteNetwork::from_edges(Vec::<String>::new(), Vec::<String>::new(), &[] as &[(&str, &str, f64)])
            .unwrap();
        assert_eq!(empty.edge_count(), 0);
    }

    #[test]
    fn projection_examples() {
        let bn = BipartiteNetwork::from_edges(
            ["d1", "d2"],
            ["p1", "p2"],
            &[("d1", "p1", 1.0), ("d1", "p2", 1.0), ("p2", "d2", 1.0)],
        )
        .unwrap();
        let left = bn.project(Side::Left);
        assert_eq!(edge_set(&left), vec![("d1".into(), "d2".into(), 1.0)]);
        let right = bn.project(Side::Right);
        assert_eq!(edge_set(&right), vec![("p1".into(), "p2".into(), 1.0)]);

        let apart = BipartiteNetwork::from_edges(["d1", "d2"], ["p1", "p2"], &[("d1", "p1", 1.0), ("d2", "p2", 1.0)])
            .unwrap();
        assert_eq!(apart.project(Side::Left).edge_count(), 0);
        assert_eq!(apart.project(Side::Left).node_count(), 2);

        let both = BipartiteNetwork::from_edges(
            ["d1", "d2"],
            ["p1", "p2"],
            &[("d1", "p1", 1.0), ("d1", "p2", 1.0), ("d2", "p1", 1.0), ("d2", "p2", 1.0)],
        )
        .unwrap();
        assert_eq!(edge_set(&both.project(Side::Left)), vec![("d1".into(), "d2".into(), 2.0)]);
    }
}
