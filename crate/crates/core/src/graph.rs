//! In-memory network model.
//!
//! Nodes keep their insertion order, so every export is deterministic.
//! Undirected edges are stored once with endpoints in lexicographic id order.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::atc::{AtcCode, AtcLevel};
use crate::error::{Error, Result};
use crate::ingest::EdgeListEntry;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeRecord {
    pub id: String,
    pub label: String,
    pub attributes: BTreeMap<String, String>,
}

impl NodeRecord {
    /// A node labelled with its id, carrying ATC level attributes when the
    /// id is an ATC code.
    pub fn new(id: impl Into<String>) -> Self {
        let id = id.into();
        let mut attributes = BTreeMap::new();
        if let Ok(code) = AtcCode::parse(&id) {
            for level in [AtcLevel::Anatomical, AtcLevel::Therapeutic, AtcLevel::Pharmacological] {
                attributes.insert(level.attribute_key().to_owned(), code.level(level).to_owned());
            }
        }
        NodeRecord {
            label: id.clone(),
            id,
            attributes,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub source: usize,
    pub target: usize,
    pub weight: f64,
}

#[derive(Debug, Clone)]
pub struct Network {
    directed: bool,
    weighted: bool,
    nodes: Vec<NodeRecord>,
    index: HashMap<String, usize>,
    edges: Vec<Edge>,
    /// Outgoing neighbours (all neighbours when undirected) as `(node, edge)`.
    out_adj: Vec<Vec<(usize, usize)>>,
    /// Incoming neighbours; empty vectors when undirected.
    in_adj: Vec<Vec<(usize, usize)>>,
}

/// Incremental constructor enforcing the [`Network`] invariants.
#[derive(Debug, Clone)]
pub struct NetworkBuilder {
    net: Network,
    pairs: HashMap<(usize, usize), usize>,
}

impl NetworkBuilder {
    pub fn new(directed: bool, weighted: bool) -> Self {
        NetworkBuilder {
            net: Network {
                directed,
                weighted,
                nodes: Vec::new(),
                index: HashMap::new(),
                edges: Vec::new(),
                out_adj: Vec::new(),
                in_adj: Vec::new(),
            },
            pairs: HashMap::new(),
        }
    }

    /// Index of `id`, inserting a fresh node if needed.
    pub fn node(&mut self, id: &str) -> usize {
        if let Some(&i) = self.net.index.get(id) {
            return i;
        }
        self.add_record(NodeRecord::new(id))
    }

    /// Insert a node record, replacing label and merging attributes if the id
    /// is already present.
    pub fn add_record(&mut self, record: NodeRecord) -> usize {
        if let Some(&i) = self.net.index.get(&record.id) {
            let existing = &mut self.net.nodes[i];
            existing.label = record.label;
            existing.attributes.extend(record.attributes);
            return i;
        }
        let i = self.net.nodes.len();
        self.net.index.insert(record.id.clone(), i);
        self.net.nodes.push(record);
        self.net.out_adj.push(Vec::new());
        self.net.in_adj.push(Vec::new());
        i
    }

    pub fn set_label(&mut self, id: &str, label: impl Into<String>) {
        let i = self.node(id);
        self.net.nodes[i].label = label.into();
    }

    pub fn set_attribute(&mut self, id: &str, key: impl Into<String>, value: impl Into<String>) {
        let i = self.node(id);
        self.net.nodes[i].attributes.insert(key.into(), value.into());
    }

    /// Add an edge. Weights are coerced to 1 on unweighted networks.
    pub fn edge(&mut self, a: &str, b: &str, weight: f64) -> Result<usize> {
        if a == b {
            return Err(Error::SelfLoop(a.to_owned()));
        }
        if !(weight.is_finite() && weight >= 0.0) {
            return Err(Error::InvalidParameter(format!("edge weight {weight} on `{a}`-`{b}`")));
        }
        let (a, b) = if self.net.directed || a < b { (a, b) } else { (b, a) };
        let (ia, ib) = (self.node(a), self.node(b));
        if self.pairs.contains_key(&(ia, ib)) {
            return Err(Error::DuplicateEdge(a.to_owned(), b.to_owned()));
        }
        let e = self.net.edges.len();
        self.pairs.insert((ia, ib), e);
        self.net.edges.push(Edge {
            source: ia,
            target: ib,
            weight: if self.net.weighted { weight } else { 1.0 },
        });
        self.net.out_adj[ia].push((ib, e));
        if self.net.directed {
            self.net.in_adj[ib].push((ia, e));
        } else {
            self.net.out_adj[ib].push((ia, e));
        }
        Ok(e)
    }

    pub fn contains_edge(&self, a: &str, b: &str) -> bool {
        let (a, b) = if self.net.directed || a < b { (a, b) } else { (b, a) };
        match (self.net.index.get(a), self.net.index.get(b)) {
            (Some(&ia), Some(&ib)) => self.pairs.contains_key(&(ia, ib)),
            _ => false,
        }
    }

    pub fn build(self) -> Network {
        self.net
    }
}

impl Network {
    pub fn from_edge_list(entries: &[EdgeListEntry], directed: bool, weighted: bool) -> Result<Network> {
        let mut b = NetworkBuilder::new(directed, weighted);
        for e in entries {
            b.edge(&e.drug_a, &e.drug_b, e.weight as f64)?;
        }
        Ok(b.build())
    }

    /// Canonical edge list sorted by `(drug_a, drug_b)`; fails on non-integral
    /// weights such as ratio networks.
    pub fn to_edge_list(&self) -> Result<Vec<EdgeListEntry>> {
        let mut out = self
            .edges
            .iter()
            .map(|e| {
                if e.weight.fract() != 0.0 {
                    return Err(Error::NonIntegralWeight(e.weight));
                }
                Ok(EdgeListEntry::new(
                    self.nodes[e.source].id.clone(),
                    self.nodes[e.target].id.clone(),
                    e.weight as u64,
                ))
            })
            .collect::<Result<Vec<_>>>()?;
        out.sort();
        Ok(out)
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    pub fn is_weighted(&self) -> bool {
        self.weighted
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn nodes(&self) -> &[NodeRecord] {
        &self.nodes
    }

    pub fn node(&self, i: usize) -> &NodeRecord {
        &self.nodes[i]
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    pub fn require(&self, id: &str) -> Result<usize> {
        self.index_of(id).ok_or_else(|| Error::UnknownNode(id.to_owned()))
    }

    /// Outgoing neighbours (all neighbours when undirected) with edge weights.
    pub fn neighbors(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.out_adj[i].iter().map(|&(j, e)| (j, self.edges[e].weight))
    }

    pub fn in_neighbors(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let adj = if self.directed { &self.in_adj[i] } else { &self.out_adj[i] };
        adj.iter().map(|&(j, e)| (j, self.edges[e].weight))
    }

    /// Neighbours ignoring direction; a node linked both ways appears twice.
    pub fn all_neighbors(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let incoming = if self.directed { &self.in_adj[i][..] } else { &[][..] };
        self.out_adj[i]
            .iter()
            .chain(incoming)
            .map(|&(j, e)| (j, self.edges[e].weight))
    }

    pub fn out_degree(&self, i: usize) -> usize {
        self.out_adj[i].len()
    }

    pub fn in_degree(&self, i: usize) -> usize {
        if self.directed {
            self.in_adj[i].len()
        } else {
            self.out_adj[i].len()
        }
    }

    /// Number of incident edges regardless of direction.
    pub fn degree(&self, i: usize) -> usize {
        if self.directed {
            self.out_adj[i].len() + self.in_adj[i].len()
        } else {
            self.out_adj[i].len()
        }
    }

    pub fn edge_between(&self, a: usize, b: usize) -> Option<&Edge> {
        self.out_adj[a]
            .iter()
            .find(|&&(j, _)| j == b)
            .map(|&(_, e)| &self.edges[e])
    }

    pub fn edge_ids(&self, edge: &Edge) -> (&str, &str) {
        (&self.nodes[edge.source].id, &self.nodes[edge.target].id)
    }

    /// Subgraph induced by `keep`, preserving the parent's node order.
    pub fn induced(&self, keep: &[bool]) -> Network {
        let mut b = NetworkBuilder::new(self.directed, self.weighted);
        for (i, node) in self.nodes.iter().enumerate() {
            if keep[i] {
                b.add_record(node.clone());
            }
        }
        for e in &self.edges {
            if keep[e.source] && keep[e.target] {
                let (a, t) = self.edge_ids(e);
                b.edge(a, t, e.weight).expect("parent network is valid");
            }
        }
        b.build()
    }

    /// The focus node, its direct neighbours, and every edge among them.
    pub fn ego(&self, id: &str) -> Result<EgoNetwork> {
        let focus = self.require(id)?;
        let mut keep = vec![false; self.node_count()];
        keep[focus] = true;
        for (j, _) in self.all_neighbors(focus) {
            keep[j] = true;
        }
        Ok(EgoNetwork {
            focus: id.to_owned(),
            subgraph: self.induced(&keep),
        })
    }

    /// Values of an attribute per node, `None` where absent.
    pub fn attribute_values<'a>(&'a self, key: &'a str) -> impl Iterator<Item = Option<&'a str>> + 'a {
        self.nodes.iter().map(move |n| n.attributes.get(key).map(String::as_str))
    }
}

#[derive(Debug, Clone)]
pub struct EgoNetwork {
    pub focus: String,
    pub subgraph: Network,
}
