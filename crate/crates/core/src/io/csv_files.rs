use std::io::{Read, Write};

use crate::community::CommunityPartition;
use crate::error::{Error, Result, RowDiagnostic};
use crate::graph::{Network, NetworkBuilder, NodeRecord};

use super::format_weight;

pub const EDGE_HEADER: [&str; 3] = ["drug_a", "drug_b", "weight"];

fn column(headers: &csv::StringRecord, name: &str) -> Result<usize> {
    headers
        .iter()
        .position(|h| h.trim() == name)
        .ok_or_else(|| Error::MissingColumn(name.to_owned()))
}

fn optional_column(headers: &csv::StringRecord, name: &str) -> Option<usize> {
    headers.iter().position(|h| h.trim() == name)
}

fn row_error(row: &csv::StringRecord, message: impl Into<String>) -> Error {
    Error::Row(RowDiagnostic {
        line: row.position().map_or(0, |p| p.line()),
        message: message.into(),
    })
}

fn field<'r>(row: &'r csv::StringRecord, i: usize) -> Result<&'r str> {
    row.get(i)
        .map(str::trim)
        .ok_or_else(|| row_error(row, format!("missing field {}", i + 1)))
}

/// Read a node table (`id,label`, further columns become attributes).
pub fn read_node_table<R: Read>(source: R) -> Result<Vec<NodeRecord>> {
    let mut reader = csv::ReaderBuilder::new().flexible(true).from_reader(source);
    let headers = reader.headers()?.clone();
    let id_col = column(&headers, "id")?;
    let label_col = optional_column(&headers, "label");
    let mut out = Vec::new();
    for row in reader.records() {
        let row = row?;
        let mut record = NodeRecord::new(field(&row, id_col)?);
        if let Some(l) = label_col {
            let label = field(&row, l)?;
            if !label.is_empty() {
                record.label = label.to_owned();
            }
        }
        for (i, key) in headers.iter().enumerate() {
            if i != id_col && Some(i) != label_col {
                if let Some(v) = row.get(i) {
                    record.attributes.insert(key.trim().to_owned(), v.trim().to_owned());
                }
            }
        }
        out.push(record);
    }
    Ok(out)
}

pub fn write_node_table<W: Write>(net: &Network, sink: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(sink);
    w.write_record(["id", "label"])?;
    for node in net.nodes() {
        w.write_record([node.id.as_str(), node.label.as_str()])?;
    }
    w.flush()?;
    Ok(())
}

/// Read an edge-list CSV with header `drug_a,drug_b,weight`. Node records,
/// when given, are inserted first so isolated nodes and labels survive.
pub fn read_edge_list<R: Read>(
    source: R,
    directed: bool,
    weighted: bool,
    nodes: Option<&[NodeRecord]>,
) -> Result<Network> {
    let mut builder = NetworkBuilder::new(directed, weighted);
    for node in nodes.unwrap_or_default() {
        builder.add_record(node.clone());
    }
    let mut reader = csv::ReaderBuilder::new().flexible(true).from_reader(source);
    let headers = reader.headers()?.clone();
    let a_col = column(&headers, EDGE_HEADER[0])?;
    let b_col = column(&headers, EDGE_HEADER[1])?;
    let w_col = optional_column(&headers, EDGE_HEADER[2]);
    for row in reader.records() {
        let row = row?;
        let a = field(&row, a_col)?;
        let b = field(&row, b_col)?;
        let weight = match w_col {
            Some(i) => {
                let raw = field(&row, i)?;
                raw.parse::<f64>()
                    .map_err(|_| row_error(&row, format!("malformed weight `{raw}`")))?
            }
            None => 1.0,
        };
        builder.edge(a, b, weight).map_err(|e| row_error(&row, e.to_string()))?;
    }
    Ok(builder.build())
}

/// Write edges in stored order (canonical for undirected networks).
pub fn write_edge_list<W: Write>(net: &Network, sink: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(sink);
    w.write_record(EDGE_HEADER)?;
    let mut rows: Vec<(&str, &str, f64)> = net
        .edges()
        .iter()
        .map(|e| {
            let (a, b) = net.edge_ids(e);
            (a, b, e.weight)
        })
        .collect();
    rows.sort_by(|x, y| (x.0, x.1).cmp(&(y.0, y.1)));
    for (a, b, weight) in rows {
        w.write_record([a, b, &format_weight(weight)])?;
    }
    w.flush()?;
    Ok(())
}

/// Read a drug-drug interaction catalog (`atc_a,atc_b[,severity]`) into an
/// undirected, unweighted mask network. When a severity column is present
/// only rows labelled `severe` are kept. Repeated pairs collapse.
pub fn read_ddi_catalog<R: Read>(source: R) -> Result<Network> {
    let mut reader = csv::ReaderBuilder::new().flexible(true).from_reader(source);
    let headers = reader.headers()?.clone();
    let a_col = column(&headers, "atc_a")?;
    let b_col = column(&headers, "atc_b")?;
    let sev_col = optional_column(&headers, "severity");
    let mut builder = NetworkBuilder::new(false, false);
    for row in reader.records() {
        let row = row?;
        if let Some(s) = sev_col {
            if !row.get(s).is_some_and(|v| v.trim().eq_ignore_ascii_case("severe")) {
                continue;
            }
        }
        let (a, b) = (field(&row, a_col)?, field(&row, b_col)?);
        if a == b {
            return Err(row_error(&row, format!("self-interaction on `{a}`")));
        }
        if !builder.contains_edge(a, b) {
            builder.edge(a, b, 1.0)?;
        }
    }
    Ok(builder.build())
}

pub fn write_partition<W: Write>(partition: &CommunityPartition, sink: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(sink);
    w.write_record(["node", "module"])?;
    for (id, module) in &partition.assignment {
        w.write_record([id.as_str(), &module.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_partition<R: Read>(source: R) -> Result<Vec<(String, usize)>> {
    let mut reader = csv::Reader::from_reader(source);
    let headers = reader.headers()?.clone();
    let n_col = column(&headers, "node")?;
    let m_col = column(&headers, "module")?;
    let mut out = Vec::new();
    for row in reader.records() {
        let row = row?;
        let raw = field(&row, m_col)?;
        let module = raw
            .parse()
            .map_err(|_| row_error(&row, format!("malformed module `{raw}`")))?;
        out.push((field(&row, n_col)?.to_owned(), module));
    }
    Ok(out)
}
