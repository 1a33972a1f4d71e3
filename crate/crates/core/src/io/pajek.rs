//! Pajek `.net` files.
//!
//! ```text
//! *Vertices 2
//! 1 "X"
//! 2 "Y"
//! *Edges
//! 1 2 5
//! ```
//!
//! Vertices are numbered from 1 in node order and quoted with their id.
//! Directed networks use an `*Arcs` section.

use std::io::{BufRead, Write};

use crate::error::{Error, Result};
use crate::graph::{Network, NetworkBuilder};

use super::format_weight;

pub fn write_pajek<W: Write>(net: &Network, mut sink: W) -> Result<()> {
    writeln!(sink, "*Vertices {}", net.node_count())?;
    for (i, node) in net.nodes().iter().enumerate() {
        writeln!(sink, "{} \"{}\"", i + 1, node.id)?;
    }
    writeln!(sink, "{}", if net.is_directed() { "*Arcs" } else { "*Edges" })?;
    for e in net.edges() {
        writeln!(sink, "{} {} {}", e.source + 1, e.target + 1, format_weight(e.weight))?;
    }
    sink.flush()?;
    Ok(())
}

enum Section {
    Preamble,
    Vertices,
    Links,
}

fn err(line: usize, message: impl Into<String>) -> Error {
    Error::Pajek {
        line,
        message: message.into(),
    }
}

/// Parse a Pajek file with one `*Edges` or `*Arcs` section. The network is
/// weighted if any link carries a weight column.
pub fn read_pajek<R: BufRead>(source: R) -> Result<Network> {
    let mut section = Section::Preamble;
    let mut ids: Vec<Option<String>> = Vec::new();
    let mut links: Vec<(usize, usize, Option<f64>, usize)> = Vec::new();
    let mut directed = false;

    for (n, line) in source.lines().enumerate() {
        let line_no = n + 1;
        let line = line?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('%') {
            continue;
        }
        if let Some(rest) = line.strip_prefix('*') {
            let mut parts = rest.split_whitespace();
            let keyword = parts.next().unwrap_or("").to_ascii_lowercase();
            match keyword.as_str() {
                "vertices" => {
                    let count: usize = parts
                        .next()
                        .and_then(|c| c.parse().ok())
                        .ok_or_else(|| err(line_no, "missing vertex count"))?;
                    ids = vec![None; count];
                    section = Section::Vertices;
                }
                "edges" | "arcs" => {
                    directed = keyword == "arcs";
                    section = Section::Links;
                }
                other => return Err(err(line_no, format!("unsupported section `*{other}`"))),
            }
            continue;
        }
        match section {
            Section::Preamble => return Err(err(line_no, "content before `*Vertices`")),
            Section::Vertices => {
                let (num, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
                let idx: usize = num.parse().map_err(|_| err(line_no, "bad vertex number"))?;
                if idx == 0 || idx > ids.len() {
                    return Err(err(line_no, format!("vertex {idx} out of range")));
                }
                let rest = rest.trim();
                let label = if let Some(quoted) = rest.strip_prefix('"') {
                    let end = quoted.find('"').ok_or_else(|| err(line_no, "unterminated label"))?;
                    quoted[..end].to_owned()
                } else {
                    rest.split_whitespace().next().unwrap_or(num).to_owned()
                };
                ids[idx - 1] = Some(label);
            }
            Section::Links => {
                let mut parts = line.split_whitespace();
                let mut next_index = || -> Result<usize> {
                    let v: usize = parts
                        .next()
                        .and_then(|p| p.parse().ok())
                        .ok_or_else(|| err(line_no, "bad link endpoint"))?;
                    if v == 0 || v > ids.len() {
                        return Err(err(line_no, format!("vertex {v} out of range")));
                    }
                    Ok(v - 1)
                };
                let a = next_index()?;
                let b = next_index()?;
                let w = match parts.next() {
                    Some(p) => Some(p.parse::<f64>().map_err(|_| err(line_no, "bad weight"))?),
                    None => None,
                };
                links.push((a, b, w, line_no));
            }
        }
    }

    let weighted = links.iter().any(|l| l.2.is_some());
    let mut builder = NetworkBuilder::new(directed, weighted);
    let ids: Vec<String> = ids
        .into_iter()
        .enumerate()
        .map(|(i, id)| id.unwrap_or_else(|| (i + 1).to_string()))
        .collect();
    for id in &ids {
        builder.node(id);
    }
    for (a, b, w, line_no) in links {
        builder
            .edge(&ids[a], &ids[b], w.unwrap_or(1.0))
            .map_err(|e| err(line_no, e.to_string()))?;
    }
    Ok(builder.build())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::EdgeListEntry;

    fn render(net: &Network) -> String {
        let mut out = Vec::new();
        write_pajek(net, &mut out).unwrap();
        String::from_utf8(out).unwrap()
    }

    #[test]
    fn k2_golden() {
        let net = Network::from_edge_list(&[EdgeListEntry::new("X", "Y", 5)], false, true).unwrap();
        assert_eq!(render(&net), "*Vertices 2\n1 \"X\"\n2 \"Y\"\n*Edges\n1 2 5\n");
    }

    #[test]
    fn empty_network() {
        let net = NetworkBuilder::new(false, true).build();
        assert_eq!(render(&net), "*Vertices 0\n*Edges\n");
    }

    #[test]
    fn directed_uses_arcs() {
        let net = Network::from_edge_list(&[EdgeListEntry::new("Y", "X", 1)], true, false).unwrap();
        assert_eq!(render(&net), "*Vertices 2\n1 \"Y\"\n2 \"X\"\n*Arcs\n1 2 1\n");
        let back = read_pajek(render(&net).as_bytes()).unwrap();
        assert!(back.is_directed());
        assert_eq!(back.edge_ids(&back.edges()[0]), ("Y", "X"));
    }

    #[test]
    fn reads_unquoted_and_unweighted() {
        let src = "% comment\n*vertices 3\n1 a\n2 \"b c\"\n*edges\n1 2\n2 3\n";
        let net = read_pajek(src.as_bytes()).unwrap();
        assert!(!net.is_weighted());
        assert_eq!(net.node(1).id, "b c");
        assert_eq!(net.node(2).id, "3");
        assert_eq!(net.edge_count(), 2);
    }

    #[test]
    fn out_of_range_vertex() {
        let src = "*Vertices 1\n1 \"a\"\n*Edges\n1 2 1\n";
        assert!(matches!(read_pajek(src.as_bytes()), Err(Error::Pajek { line: 4, .. })));
    }
}
