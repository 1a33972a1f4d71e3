//! JSON document consumed by the interactive network explorer.
//!
//! ```json
//! {"edges":[{"source":"X","target":"Y","weight":5}],
//!  "meta":{"counts":{"edges":1,"nodes":2},"directed":false,"weighted":true},
//!  "nodes":[{"attrs":{},"id":"X","label":"X","measures":{"degree":1},"module":0}, ...]}
//! ```
//!
//! Object keys are sorted, so the bytes are a pure function of the input.
//! The JSON Schema lives in `docs/explorer.schema.json`.

use std::collections::HashMap;
use std::io::Write;

use serde_json::{json, Map, Value};

use crate::community::CommunityPartition;
use crate::error::{Error, Result};
use crate::graph::Network;
use crate::metrics::CentralityReport;

fn number(x: f64) -> Value {
    if x.fract() == 0.0 && x.abs() < 1e15 {
        Value::from(x as i64)
    } else {
        Value::from(x)
    }
}

/// Build the explorer document. Measures and module ids must refer to nodes
/// of `net`.
pub fn explorer_document(
    net: &Network,
    measures: Option<&CentralityReport>,
    partition: Option<&CommunityPartition>,
) -> Result<Value> {
    let mut node_measures: HashMap<usize, Map<String, Value>> = HashMap::new();
    if let Some(report) = measures {
        for row in &report.nodes {
            let i = net.require(&row.id)?;
            let m = row.measures().into_iter().map(|(k, v)| (k.to_owned(), number(v))).collect();
            node_measures.insert(i, m);
        }
    }
    let mut modules: HashMap<usize, usize> = HashMap::new();
    if let Some(p) = partition {
        for (id, module) in &p.assignment {
            modules.insert(net.require(id)?, *module);
        }
    }

    let nodes: Vec<Value> = net
        .nodes()
        .iter()
        .enumerate()
        .map(|(i, n)| {
            let mut obj = Map::new();
            obj.insert("id".into(), Value::from(n.id.clone()));
            obj.insert("label".into(), Value::from(n.label.clone()));
            obj.insert(
                "attrs".into(),
                Value::Object(
                    n.attributes
                        .iter()
                        .map(|(k, v)| (k.clone(), Value::from(v.clone())))
                        .collect(),
                ),
            );
            if let Some(m) = node_measures.remove(&i) {
                obj.insert("measures".into(), Value::Object(m));
            }
            if let Some(&module) = modules.get(&i) {
                obj.insert("module".into(), Value::from(module));
            }
            Value::Object(obj)
        })
        .collect();

    let edges: Vec<Value> = net
        .edges()
        .iter()
        .map(|e| {
            let (a, b) = net.edge_ids(e);
            json!({ "source": a, "target": b, "weight": number(e.weight) })
        })
        .collect();

    let mut meta = json!({
        "directed": net.is_directed(),
        "weighted": net.is_weighted(),
        "counts": { "nodes": net.node_count(), "edges": net.edge_count() },
    });
    if let Some(p) = partition {
        meta["modularity"] = Value::from(p.modularity);
        if let Some(seed) = p.seed {
            meta["seed"] = Value::from(seed);
        }
    }

    Ok(json!({ "meta": meta, "nodes": nodes, "edges": edges }))
}

pub fn write_explorer_json<W: Write>(
    net: &Network,
    measures: Option<&CentralityReport>,
    partition: Option<&CommunityPartition>,
    mut sink: W,
) -> Result<()> {
    let doc = explorer_document(net, measures, partition)?;
    serde_json::to_writer(&mut sink, &doc).map_err(Error::from)?;
    writeln!(sink)?;
    sink.flush()?;
    Ok(())
}
