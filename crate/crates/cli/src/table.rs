//! Aligned plain-text tables. Numbers print with six decimals and are
//! right-aligned; text is left-aligned.

use comednet::algebra::{ComparisonResult, MatchedEdge};
use comednet::metrics::{CentralityReport, GroupAssortativityRow, Measure, TopologySummary};

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Text(String),
    Int(u64),
    Num(f64),
    Missing,
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Text(s) => s.clone(),
            Cell::Int(i) => i.to_string(),
            Cell::Num(x) => format!("{x:.6}"),
            Cell::Missing => "-".into(),
        }
    }

    fn right_aligned(&self) -> bool {
        !matches!(self, Cell::Text(_))
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Cell {
        Cell::Text(s.to_owned())
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Cell {
        Cell::Num(x)
    }
}

impl From<usize> for Cell {
    fn from(x: usize) -> Cell {
        Cell::Int(x as u64)
    }
}

impl From<u64> for Cell {
    fn from(x: u64) -> Cell {
        Cell::Int(x)
    }
}

impl<T: Into<Cell>> From<Option<T>> for Cell {
    fn from(x: Option<T>) -> Cell {
        x.map_or(Cell::Missing, Into::into)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub headers: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new<S: Into<String>>(headers: impl IntoIterator<Item = S>) -> Table {
        Table {
            headers: headers.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.headers.len());
        self.rows.push(row);
    }
}

pub trait ToTable {
    fn to_table(&self) -> Table;
}

/// Render with two spaces between columns and no trailing whitespace.
pub fn render_table<T: ToTable + ?Sized>(report: &T) -> String {
    let table = report.to_table();
    let rendered: Vec<Vec<String>> = table.rows.iter().map(|r| r.iter().map(Cell::render).collect()).collect();
    let widths: Vec<usize> = (0..table.headers.len())
        .map(|c| {
            rendered
                .iter()
                .map(|r| r[c].chars().count())
                .chain([table.headers[c].chars().count()])
                .max()
                .unwrap_or(0)
        })
        .collect();

    let mut out = String::new();
    let mut line = |cells: Vec<(String, bool)>| {
        let parts: Vec<String> = cells
            .into_iter()
            .zip(&widths)
            .map(|((s, right), &w)| if right { format!("{s:>w$}") } else { format!("{s:<w$}") })
            .collect();
        out.push_str(parts.join("  ").trim_end());
        out.push('\n');
    };
    // Headers follow their column's alignment.
    let header_align: Vec<bool> = (0..table.headers.len())
        .map(|c| table.rows.first().is_some_and(|r| r[c].right_aligned()))
        .collect();
    line(table.headers.iter().cloned().zip(header_align).collect());
    for (row, cells) in rendered.into_iter().zip(&table.rows) {
        line(row.into_iter().zip(cells.iter().map(Cell::right_aligned)).collect());
    }
    out
}

impl ToTable for TopologySummary {
    fn to_table(&self) -> Table {
        let mut t = Table::new([
            "nodes",
            "edges",
            "density",
            "avg_degree",
            "avg_degree_e_over_n",
            "assortativity",
            "avg_path_length",
            "thickest_edge",
            "thickest_weight",
            "min_weight",
        ]);
        t.push(vec![
            self.node_count.into(),
            self.edge_count.into(),
            self.density.into(),
            self.avg_degree_standard.into(),
            self.edges_per_node.into(),
            self.degree_assortativity.into(),
            self.avg_path_length.into(),
            Cell::Text(format!("{}-{}", self.thickest_edge.source, self.thickest_edge.target)),
            self.thickest_edge.weight.into(),
            self.weight_range.0.into(),
        ]);
        t
    }
}

impl ToTable for [GroupAssortativityRow] {
    fn to_table(&self) -> Table {
        let mut t = Table::new([
            "group",
            "members",
            "potential_edges",
            "actual_edges",
            "group_density",
            "ratio",
        ]);
        for r in self {
            t.push(vec![
                r.group.as_str().into(),
                r.member_count.into(),
                r.potential_edges.into(),
                r.actual_edges.into(),
                r.group_density.into(),
                r.ratio.into(),
            ]);
        }
        t
    }
}

impl ToTable for Vec<GroupAssortativityRow> {
    fn to_table(&self) -> Table {
        self.as_slice().to_table()
    }
}

impl ToTable for CentralityReport {
    fn to_table(&self) -> Table {
        let directed = self.nodes.iter().any(|n| n.in_degree.is_some());
        let mut headers = vec!["id", "degree"];
        if directed {
            headers.extend(["in_degree", "out_degree"]);
        }
        let present: Vec<Measure> = [Measure::Betweenness, Measure::Closeness, Measure::Eigenvector]
            .into_iter()
            .filter(|&m| self.nodes.iter().any(|n| n.get(m).is_some()))
            .collect();
        headers.extend(present.iter().map(|m| m.name()));
        let mut t = Table::new(headers);
        for n in &self.nodes {
            let mut row: Vec<Cell> = vec![n.id.as_str().into(), n.degree.into()];
            if directed {
                row.push(n.in_degree.into());
                row.push(n.out_degree.into());
            }
            row.extend(present.iter().map(|&m| n.get(m).into()));
            t.push(row);
        }
        t
    }
}

/// Top-k listing for one measure.
pub struct Ranking<'a> {
    pub measure: Measure,
    pub entries: Vec<(&'a str, f64)>,
}

impl ToTable for Ranking<'_> {
    fn to_table(&self) -> Table {
        let mut t = Table::new(["rank", "id", self.measure.name()]);
        for (i, (id, v)) in self.entries.iter().enumerate() {
            t.push(vec![(i + 1).into(), (*id).into(), (*v).into()]);
        }
        t
    }
}

fn percent(part: usize, total: usize) -> f64 {
    if total == 0 {
        0.0
    } else {
        100.0 * part as f64 / total as f64
    }
}

impl ToTable for ComparisonResult {
    /// Frequency and percentage of each change class among matched pairs,
    /// then the unmatched counts.
    fn to_table(&self) -> Table {
        let c = &self.classification;
        let total = c.total();
        let mut t = Table::new(["class", "frequency", "percent"]);
        for (name, n) in [
            ("lower_in_a", c.lower_in_a),
            ("no_change", c.no_change),
            ("higher_in_a", c.higher_in_a),
            ("total", total),
        ] {
            t.push(vec![name.into(), n.into(), percent(n, total).into()]);
        }
        let union = total + self.only_in_a.len() + self.only_in_b.len();
        for (name, n) in [("only_in_a", self.only_in_a.len()), ("only_in_b", self.only_in_b.len())] {
            t.push(vec![name.into(), n.into(), percent(n, union).into()]);
        }
        t.push(vec!["matched_of_union".into(), total.into(), (100.0 * self.matched_fraction).into()]);
        t
    }
}

/// Ranked shifted pairs from a ratio comparison.
pub struct ShiftTable<'a> {
    pub entries: Vec<(&'a MatchedEdge, f64)>,
}

impl ToTable for ShiftTable<'_> {
    fn to_table(&self) -> Table {
        let mut t = Table::new(["rank", "drug_a", "drug_b", "weight_a", "weight_b", "ratio"]);
        for (i, (m, r)) in self.entries.iter().enumerate() {
            t.push(vec![
                (i + 1).into(),
                m.pair.a.as_str().into(),
                m.pair.b.as_str().into(),
                m.weight_a.into(),
                m.weight_b.into(),
                (*r).into(),
            ]);
        }
        t
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn assortativity_table_layout() {
        let rows = vec![
            GroupAssortativityRow::from_counts("D", 6, 0, 0.26).unwrap(),
            GroupAssortativityRow::from_counts("S", 14, 81, 0.26).unwrap(),
        ];
        let text = render_table(&rows);
        let expected = "\
group  members  potential_edges  actual_edges  group_density     ratio
D            6               15             0       0.000000  0.000000
S           14               91            81       0.890110  3.423500
";
        assert_eq!(text, expected);
    }

    #[test]
    fn empty_report_is_header_only() {
        let rows: Vec<GroupAssortativityRow> = Vec::new();
        let text = render_table(&rows);
        assert_eq!(text.lines().count(), 1);
        assert!(text.starts_with("group  members"));
    }

    #[test]
    fn summary_is_two_lines() {
        let s = TopologySummary {
            directed: false,
            node_count: 3,
            edge_count: 3,
            density: 1.0,
            avg_degree_standard: 2.0,
            edges_per_node: 1.0,
            degree_assortativity: None,
            avg_path_length: 1.0,
            thickest_edge: comednet::metrics::WeightedPair {
                source: "a".into(),
                target: "b".into(),
                weight: 1.0,
            },
            weight_range: (1.0, 1.0),
        };
        let text = render_table(&s);
        assert_eq!(text.lines().count(), 2);
        assert!(text.contains("1.000000"));
        assert!(text.lines().nth(1).unwrap().contains(" - "));
    }
}
