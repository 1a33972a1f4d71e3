//! Single-source shortest paths shared by the centrality and topology measures.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::graph::Network;

/// How path lengths are measured.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PathMode {
    /// Every edge has length 1; weights are ignored.
    #[default]
    Hops,
    /// Edge length is `1 / weight`, so heavier edges are shorter.
    InverseWeight,
}

/// Relative slack when comparing floating-point path lengths for equality.
const TIE_EPS: f64 = 1e-12;

fn same_length(a: f64, b: f64) -> bool {
    (a - b).abs() <= TIE_EPS * a.abs().max(b.abs())
}

/// Reusable buffers for one shortest-path sweep from a source.
///
/// After [`Sweep::run`], `order` lists reached nodes by non-decreasing
/// distance, `sigma` holds shortest-path counts and `preds` the predecessors
/// on shortest paths.
pub(crate) struct Sweep {
    pub dist: Vec<f64>,
    pub sigma: Vec<f64>,
    pub preds: Vec<Vec<usize>>,
    pub order: Vec<usize>,
    queue: VecDeque<usize>,
    heap: BinaryHeap<HeapItem>,
}

#[derive(PartialEq)]
struct HeapItem {
    dist: f64,
    node: usize,
}

impl Eq for HeapItem {}

impl Ord for HeapItem {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .dist
            .total_cmp(&self.dist)
            .then_with(|| other.node.cmp(&self.node))
    }
}

impl PartialOrd for HeapItem {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Sweep {
    pub fn new(n: usize) -> Self {
        Sweep {
            dist: vec![f64::INFINITY; n],
            sigma: vec![0.0; n],
            preds: vec![Vec::new(); n],
            order: Vec::with_capacity(n),
            queue: VecDeque::new(),
            heap: BinaryHeap::new(),
        }
    }

    fn reset(&mut self) {
        for &v in &self.order {
            self.dist[v] = f64::INFINITY;
            self.sigma[v] = 0.0;
            self.preds[v].clear();
        }
        self.order.clear();
    }

    /// Shortest paths from `source` following outgoing edges.
    pub fn run(&mut self, net: &Network, source: usize, mode: PathMode) {
        self.reset();
        match mode {
            PathMode::Hops => self.bfs(net, source),
            PathMode::InverseWeight => self.dijkstra(net, source),
        }
    }

    fn bfs(&mut self, net: &Network, source: usize) {
        self.dist[source] = 0.0;
        self.sigma[source] = 1.0;
        self.queue.push_back(source);
        while let Some(v) = self.queue.pop_front() {
            self.order.push(v);
            let next = self.dist[v] + 1.0;
            for (w, _) in net.neighbors(v) {
                if self.dist[w].is_infinite() {
                    self.dist[w] = next;
                    self.queue.push_back(w);
                }
                if self.dist[w] == next {
                    self.sigma[w] += self.sigma[v];
                    self.preds[w].push(v);
                }
            }
        }
    }

    fn dijkstra(&mut self, net: &Network, source: usize) {
        // Every node given a finite distance is pushed and later settled, so
        // `order` covers everything reset() must clear.
        self.dist[source] = 0.0;
        self.sigma[source] = 1.0;
        self.heap.push(HeapItem { dist: 0.0, node: source });
        let mut settled = vec![false; net.node_count()];
        while let Some(HeapItem { dist, node: v }) = self.heap.pop() {
            if settled[v] || dist > self.dist[v] {
                continue;
            }
            settled[v] = true;
            self.order.push(v);
            for (w, weight) in net.neighbors(v) {
                if weight <= 0.0 || settled[w] {
                    continue;
                }
                let alt = dist + 1.0 / weight;
                if self.dist[w].is_finite() && same_length(alt, self.dist[w]) {
                    self.sigma[w] += self.sigma[v];
                    self.preds[w].push(v);
                } else if alt < self.dist[w] {
                    self.dist[w] = alt;
                    self.sigma[w] = self.sigma[v];
                    self.preds[w].clear();
                    self.preds[w].push(v);
                    self.heap.push(HeapItem { dist: alt, node: w });
                }
            }
        }
    }
}

/// Hop distances from `source`; `usize::MAX` marks unreachable nodes.
pub(crate) fn bfs_hops(net: &Network, source: usize, dist: &mut [usize], queue: &mut VecDeque<usize>) {
    dist.fill(usize::MAX);
    dist[source] = 0;
    queue.clear();
    queue.push_back(source);
    while let Some(v) = queue.pop_front() {
        let next = dist[v] + 1;
        for (w, _) in net.neighbors(v) {
            if dist[w] == usize::MAX {
                dist[w] = next;
                queue.push_back(w);
            }
        }
    }
}
