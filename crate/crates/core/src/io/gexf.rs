//! GEXF 1.2 export for Gephi.

use std::collections::BTreeSet;
use std::io::Write;

use crate::error::Result;
use crate::graph::Network;

use super::format_weight;

fn escape(raw: &str) -> String {
    let mut out = String::with_capacity(raw.len());
    for c in raw.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            c => out.push(c),
        }
    }
    out
}

/// Write a static GEXF 1.2 document. Node attributes are declared as string
/// attributes, numbered in key order.
pub fn write_gexf<W: Write>(net: &Network, mut sink: W) -> Result<()> {
    let keys: Vec<&str> = net
        .nodes()
        .iter()
        .flat_map(|n| n.attributes.keys().map(String::as_str))
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let edge_type = if net.is_directed() { "directed" } else { "undirected" };

    writeln!(sink, r#"<?xml version="1.0" encoding="UTF-8"?>"#)?;
    writeln!(sink, r#"<gexf xmlns="http://www.gexf.net/1.2draft" version="1.2">"#)?;
    writeln!(sink, r#"  <graph mode="static" defaultedgetype="{edge_type}">"#)?;
    if !keys.is_empty() {
        writeln!(sink, r#"    <attributes class="node">"#)?;
        for (i, key) in keys.iter().enumerate() {
            writeln!(sink, r#"      <attribute id="{i}" title="{}" type="string"/>"#, escape(key))?;
        }
        writeln!(sink, "    </attributes>")?;
    }

    writeln!(sink, "    <nodes>")?;
    for node in net.nodes() {
        let open = format!(r#"      <node id="{}" label="{}""#, escape(&node.id), escape(&node.label));
        if node.attributes.is_empty() {
            writeln!(sink, "{open}/>")?;
            continue;
        }
        writeln!(sink, "{open}>")?;
        writeln!(sink, "        <attvalues>")?;
        for (i, key) in keys.iter().enumerate() {
            if let Some(value) = node.attributes.get(*key) {
                writeln!(sink, r#"          <attvalue for="{i}" value="{}"/>"#, escape(value))?;
            }
        }
        writeln!(sink, "        </attvalues>")?;
        writeln!(sink, "      </node>")?;
    }
    writeln!(sink, "    </nodes>")?;

    writeln!(sink, "    <edges>")?;
    for (i, e) in net.edges().iter().enumerate() {
        let (a, b) = net.edge_ids(e);
        writeln!(
            sink,
            r#"      <edge id="{i}" source="{}" target="{}" weight="{}"/>"#,
            escape(a),
            escape(b),
            format_weight(e.weight)
        )?;
    }
    writeln!(sink, "    </edges>")?;
    writeln!(sink, "  </graph>")?;
    writeln!(sink, "</gexf>")?;
    sink.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn escapes_markup() {
        assert_eq!(escape(r#"a<b>&"c'"#), "a&lt;b&gt;&amp;&quot;c&apos;");
    }
}
