//! Modularity and Louvain community detection.
//!
//! Modularity of a partition into communities `c`:
//!
//! ```text
//! Q = Σ_c [ e_c / m - (d_c / 2m)^2 ]
//! ```
//!
//! with `m` the total edge weight, `e_c` the weight inside `c` and `d_c` the
//! summed weighted degree of `c`. Directed networks are treated as undirected.
//!
//! Louvain alternates greedy local moves with aggregation of communities into
//! single nodes until no move improves the objective. Node visiting order is
//! shuffled from a seed, so a fixed seed gives a fixed partition.

use std::collections::{BTreeMap, HashMap};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Network;

pub const DEFAULT_SEED: u64 = 42;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CommunityPartition {
    /// Node id and module id, in network node order. Module 0 is the largest.
    pub assignment: Vec<(String, usize)>,
    pub modularity: f64,
    pub module_sizes: Vec<usize>,
    pub resolution: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl CommunityPartition {
    pub fn module_count(&self) -> usize {
        self.module_sizes.len()
    }

    pub fn module_of(&self, id: &str) -> Option<usize> {
        self.assignment.iter().find(|(n, _)| n == id).map(|&(_, m)| m)
    }

    pub fn to_map(&self) -> HashMap<String, usize> {
        self.assignment.iter().cloned().collect()
    }
}

/// Modularity of a labelled partition. Every node must be assigned.
pub fn modularity_q(net: &Network, assignment: &HashMap<String, usize>) -> Result<f64> {
    let modules = net
        .nodes()
        .iter()
        .map(|n| {
            assignment
                .get(&n.id)
                .copied()
                .ok_or_else(|| Error::UncoveredNode(n.id.clone()))
        })
        .collect::<Result<Vec<_>>>()?;
    modularity_of(net, &modules)
}

/// Modularity with `modules[i]` the community of node `i`.
pub fn modularity_of(net: &Network, modules: &[usize]) -> Result<f64> {
    assert_eq!(modules.len(), net.node_count(), "one module per node");
    let m: f64 = net.edges().iter().map(|e| e.weight).sum();
    if m <= 0.0 {
        return Err(Error::Undefined("modularity of a network without edge weight".into()));
    }
    let mut per: BTreeMap<usize, (f64, f64)> = BTreeMap::new();
    for e in net.edges() {
        let (cs, ct) = (modules[e.source], modules[e.target]);
        if cs == ct {
            per.entry(cs).or_default().0 += e.weight;
        }
        per.entry(cs).or_default().1 += e.weight;
        per.entry(ct).or_default().1 += e.weight;
    }
    Ok(per
        .values()
        .map(|&(inner, degree)| inner / m - (degree / (2.0 * m)).powi(2))
        .sum())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LouvainOptions {
    pub resolution: f64,
    pub seed: u64,
    /// Cap on local-moving sweeps per level.
    pub max_passes: usize,
    /// Independent runs with fresh node orders; the best partition wins.
    pub restarts: usize,
}

impl Default for LouvainOptions {
    fn default() -> Self {
        LouvainOptions {
            resolution: 1.0,
            seed: DEFAULT_SEED,
            max_passes: 1000,
            restarts: 100,
        }
    }
}

/// Weighted graph at one aggregation level.
struct Level {
    adj: Vec<Vec<(usize, f64)>>,
    /// Weight of edges folded inside each super-node, each edge counted once.
    inner: Vec<f64>,
}

impl Level {
    fn from_network(net: &Network) -> Level {
        let adj = (0..net.node_count())
            .map(|i| {
                let mut merged: Vec<(usize, f64)> = Vec::new();
                for (j, w) in net.all_neighbors(i) {
                    match merged.iter_mut().find(|(k, _)| *k == j) {
                        Some(slot) => slot.1 += w,
                        None => merged.push((j, w)),
                    }
                }
                merged
            })
            .collect();
        Level {
            adj,
            inner: vec![0.0; net.node_count()],
        }
    }

    fn len(&self) -> usize {
        self.adj.len()
    }

    fn strength(&self, i: usize) -> f64 {
        self.adj[i].iter().map(|&(_, w)| w).sum::<f64>() + 2.0 * self.inner[i]
    }

    fn aggregate(&self, comm: &[usize], count: usize) -> Level {
        let mut inner = vec![0.0; count];
        let mut links: Vec<BTreeMap<usize, f64>> = vec![BTreeMap::new(); count];
        for i in 0..self.len() {
            let ci = comm[i];
            inner[ci] += self.inner[i];
            for &(j, w) in &self.adj[i] {
                let cj = comm[j];
                if ci == cj {
                    // Seen from both endpoints.
                    inner[ci] += w / 2.0;
                } else {
                    *links[ci].entry(cj).or_insert(0.0) += w;
                }
            }
        }
        Level {
            adj: links.into_iter().map(|l| l.into_iter().collect()).collect(),
            inner,
        }
    }
}

fn improves(gain: f64, best: f64) -> bool {
    gain - best > 1e-12 * (1.0 + gain.abs().max(best.abs()))
}

/// Greedy local moves starting from `init` (labels in `0..n`); returns
/// compact community labels.
///
/// Each node may join a neighbouring community or an empty one, and moves
/// only on a strict gain.
fn local_moves(level: &Level, init: &[usize], resolution: f64, max_passes: usize, rng: &mut ChaCha8Rng) -> Vec<usize> {
    let n = level.len();
    let strength: Vec<f64> = (0..n).map(|i| level.strength(i)).collect();
    let two_m: f64 = strength.iter().sum();
    let mut comm = init.to_vec();
    let mut total = vec![0.0; n];
    let mut size = vec![0usize; n];
    for (i, &c) in comm.iter().enumerate() {
        total[c] += strength[i];
        size[c] += 1;
    }
    let mut empty: Vec<usize> = (0..n).rev().filter(|&c| size[c] == 0).collect();
    let mut link_to = vec![0.0; n];
    let mut touched: Vec<usize> = Vec::new();
    let mut is_touched = vec![false; n];
    let mut order: Vec<usize> = (0..n).collect();

    for _ in 0..max_passes {
        order.shuffle(rng);
        let mut moved = false;
        for &i in &order {
            let ci = comm[i];
            let ki = strength[i];
            for &(j, w) in &level.adj[i] {
                let c = comm[j];
                if !is_touched[c] {
                    is_touched[c] = true;
                    touched.push(c);
                }
                link_to[c] += w;
            }
            total[ci] -= ki;
            size[ci] -= 1;
            let gain = |c: usize| link_to[c] - resolution * total[c] * ki / two_m;
            let mut best = ci;
            let mut best_gain = gain(ci);
            for &c in &touched {
                let g = gain(c);
                if improves(g, best_gain) {
                    best = c;
                    best_gain = g;
                }
            }
            // An empty community gains exactly 0.
            if size[ci] > 0 && improves(0.0, best_gain) {
                if let Some(&c) = empty.last() {
                    best = c;
                }
            }
            if best != ci {
                moved = true;
                if size[ci] == 0 {
                    empty.push(ci);
                }
                if empty.last() == Some(&best) {
                    empty.pop();
                }
            }
            total[best] += ki;
            size[best] += 1;
            comm[i] = best;
            for &c in &touched {
                link_to[c] = 0.0;
                is_touched[c] = false;
            }
            touched.clear();
        }
        if !moved {
            break;
        }
    }

    let mut relabel = vec![usize::MAX; n];
    let mut next = 0;
    for c in comm.iter_mut() {
        if relabel[*c] == usize::MAX {
            relabel[*c] = next;
            next += 1;
        }
        *c = relabel[*c];
    }
    comm
}

/// One multilevel Louvain run whose first level starts from `start`.
///
/// Levels are coarsened until no merge helps, then the final partition is
/// projected back down and refined by local moves at every level.
fn multilevel(base: &Level, start: &[usize], options: &LouvainOptions, rng: &mut ChaCha8Rng) -> Vec<usize> {
    // levels[k] is the graph at depth k; maps[k] sends its nodes to nodes of
    // levels[k + 1].
    let mut levels: Vec<Level> = Vec::new();
    let mut maps: Vec<Vec<usize>> = Vec::new();
    let mut init = start.to_vec();
    let mut top = loop {
        let level = levels.last().unwrap_or(base);
        let comm = local_moves(level, &init, options.resolution, options.max_passes, rng);
        let count = comm.iter().max().map_or(0, |&c| c + 1);
        if count == level.len() {
            break comm;
        }
        let next = level.aggregate(&comm, count);
        maps.push(comm);
        levels.push(next);
        init = (0..count).collect();
    };

    // Uncoarsen: labels for level k are the top labels of its super-nodes.
    for k in (0..maps.len()).rev() {
        let projected: Vec<usize> = maps[k].iter().map(|&s| top[s]).collect();
        let level = if k == 0 { base } else { &levels[k - 1] };
        top = local_moves(level, &projected, options.resolution, options.max_passes, rng);
    }
    top
}

/// Range of the share of nodes reassigned when perturbing a partition.
const PERTURB_FRACTION: std::ops::Range<f64> = 0.1..0.5;

/// Kick a random subset of nodes: each goes either to the community of a
/// random neighbour or to one shared fresh community, which can seed a split.
fn perturb(level: &Level, labels: &[usize], rng: &mut ChaCha8Rng) -> Vec<usize> {
    let mut used = vec![false; level.len()];
    for &c in labels {
        used[c] = true;
    }
    let fresh = used.iter().position(|&u| !u);
    let fraction = rng.gen_range(PERTURB_FRACTION);
    let mut out = labels.to_vec();
    for i in 0..level.len() {
        if !rng.gen_bool(fraction) {
            continue;
        }
        match fresh {
            Some(c) if rng.gen_bool(0.5) => out[i] = c,
            _ => {
                if let Some(&(j, _)) = level.adj[i].choose(rng) {
                    out[i] = labels[j];
                }
            }
        }
    }
    out
}

/// Cap on restarts from the previous result.
const MAX_ROUNDS: usize = 100;

/// Louvain community detection. Requires at least one edge.
///
/// After a standard multilevel run, the run is repeated on the original
/// nodes starting from the previous partition, which lets nodes leave
/// modules formed at coarser levels. Rounds stop when modularity no longer
/// improves. The whole procedure is repeated `restarts` times with node
/// orders drawn from the one seeded generator and the best result is kept
/// (the earliest on ties), so a given seed always gives the same partition.
pub fn louvain(net: &Network, options: &LouvainOptions) -> Result<CommunityPartition> {
    if net.edge_count() == 0 {
        return Err(Error::Undefined("community detection needs at least one edge".into()));
    }
    if !(options.resolution.is_finite() && options.resolution > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "resolution must be positive, got {}",
            options.resolution
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
    let base = Level::from_network(net);
    let singletons: Vec<usize> = (0..net.node_count()).collect();

    let mut best: Option<(Vec<usize>, f64)> = None;
    for run_index in 0..options.restarts.max(1) {
        // Odd runs restart from a perturbed copy of the best partition so far.
        let start = match &best {
            Some((labels, _)) if run_index % 2 == 1 => perturb(&base, labels, &mut rng),
            _ => singletons.clone(),
        };
        let mut run = multilevel(&base, &start, options, &mut rng);
        let mut run_q = quality(&base, &run, options.resolution);
        for _ in 1..MAX_ROUNDS {
            let next = multilevel(&base, &run, options, &mut rng);
            let q = quality(&base, &next, options.resolution);
            if !improves(q, run_q) {
                break;
            }
            run = next;
            run_q = q;
        }
        if best.as_ref().is_none_or(|(_, q)| improves(run_q, *q)) {
            best = Some((run, run_q));
        }
    }
    let (best, _) = best.expect("at least one run");

    let mut modules = relabel_by_size(&best);
    let mut modularity = modularity_of(net, &modules)?;
    if modularity < 0.0 {
        modules = vec![0; net.node_count()];
        modularity = modularity_of(net, &modules)?;
    }
    let count = modules.iter().max().map_or(0, |&c| c + 1);
    let mut module_sizes = vec![0; count];
    for &c in &modules {
        module_sizes[c] += 1;
    }
    Ok(CommunityPartition {
        assignment: net
            .nodes()
            .iter()
            .zip(&modules)
            .map(|(n, &c)| (n.id.clone(), c))
            .collect(),
        modularity,
        module_sizes,
        resolution: options.resolution,
        seed: Some(options.seed),
    })
}

/// Resolution-scaled modularity of a labelling of `level`'s nodes.
fn quality(level: &Level, labels: &[usize], resolution: f64) -> f64 {
    let n = level.len();
    let mut inside = vec![0.0; n];
    let mut total = vec![0.0; n];
    let mut two_m = 0.0;
    for i in 0..n {
        let k = level.strength(i);
        two_m += k;
        total[labels[i]] += k;
        inside[labels[i]] += 2.0 * level.inner[i];
        for &(j, w) in &level.adj[i] {
            if labels[j] == labels[i] {
                inside[labels[i]] += w;
            }
        }
    }
    (0..n)
        .map(|c| inside[c] / two_m - resolution * (total[c] / two_m).powi(2))
        .sum()
}

/// Renumber so module 0 is the largest; equal sizes keep first-appearance
/// order.
fn relabel_by_size(labels: &[usize]) -> Vec<usize> {
    let mut first_seen: Vec<(usize, usize, usize)> = Vec::new(); // (label, size, first index)
    let mut slot: HashMap<usize, usize> = HashMap::new();
    for (i, &c) in labels.iter().enumerate() {
        let k = *slot.entry(c).or_insert_with(|| {
            first_seen.push((c, 0, i));
            first_seen.len() - 1
        });
        first_seen[k].1 += 1;
    }
    first_seen.sort_by(|a, b| b.1.cmp(&a.1).then(a.2.cmp(&b.2)));
    let new_id: HashMap<usize, usize> = first_seen.iter().enumerate().map(|(new, &(c, _, _))| (c, new)).collect();
    labels.iter().map(|c| new_id[c]).collect()
}
