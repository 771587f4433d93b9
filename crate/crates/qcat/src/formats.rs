//! File formats: graph adjacency text, syndrome-table CSV/JSON/text.

use std::fmt::Write as _;

use qcat_core::graph_code::{GraphAdjacency, SyndromeRow, SyndromeTable};

use crate::Error;

/// Bundled `[[5,1,3]]` graph.
pub const REFERENCE_GRAPH: &str = include_str!("../assets/graph_5_1_3.txt");

/// Bundled copy of the published syndrome table.
pub const REFERENCE_TABLE_CSV: &str = include_str!("../assets/syndrome_table_reference.csv");

/// Parses `n_input n_output` followed by the `(n_input + n_output)`-square
/// adjacency matrix, one row per line. `#` starts a comment.
pub fn parse_graph(text: &str) -> Result<GraphAdjacency, Error> {
    let mut lines = text
        .lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .filter(|l| !l.is_empty());
    let header = lines
        .next()
        .ok_or_else(|| Error::Parse("empty graph file".into()))?;
    let dims: Vec<usize> = header
        .split_whitespace()
        .map(|t| {
            t.parse()
                .map_err(|_| Error::Parse(format!("bad size {t:?}")))
        })
        .collect::<Result<_, _>>()?;
    let [n_in, n_out] = dims[..] else {
        return Err(Error::Parse(format!(
            "header must be `n_input n_output`, got {header:?}"
        )));
    };
    let n = n_in + n_out;
    let mut entries = Vec::with_capacity(n * n);
    for (r, line) in lines.enumerate() {
        let row: Vec<u8> = line
            .split_whitespace()
            .map(|t| {
                t.parse()
                    .map_err(|_| Error::Parse(format!("bad entry {t:?} in row {r}")))
            })
            .collect::<Result<_, _>>()?;
        if row.len() != n {
            return Err(Error::Parse(format!(
                "row {r} has {} entries, expected {n}",
                row.len()
            )));
        }
        entries.extend(row);
    }
    if entries.len() != n * n {
        return Err(Error::Parse(format!(
            "{} rows, expected {n}",
            entries.len() / n.max(1)
        )));
    }
    Ok(GraphAdjacency::new(n_in, n_out, &entries)?)
}

pub fn write_graph(graph: &GraphAdjacency) -> String {
    let mut out = format!("{} {}\n", graph.n_input(), graph.n_output());
    for u in 0..graph.vertex_count() {
        let row: Vec<String> = graph.row(u).map(|b| b.to_string()).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

pub fn table_to_csv(rows: &[SyndromeRow]) -> Result<String, Error> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.serialize(row)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

pub fn table_from_csv(text: &str) -> Result<Vec<SyndromeRow>, Error> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    Ok(r.deserialize().collect::<Result<_, _>>()?)
}

pub fn table_to_json(rows: &[SyndromeRow]) -> Result<String, Error> {
    Ok(serde_json::to_string_pretty(rows)?)
}

pub fn table_to_text(rows: &[SyndromeRow]) -> String {
    let mut out = format!(
        "{:<9}{:<7}{:<22}{}\n",
        "syndrome", "error", "data qubit", "correction"
    );
    for r in rows {
        let _ = writeln!(
            out,
            "{:<9}{:<7}{:<22}{}",
            r.syndrome.to_string(),
            r.error.to_string(),
            r.data_state.to_string(),
            r.correction
        );
    }
    out
}

pub fn reference_table() -> Result<SyndromeTable, Error> {
    Ok(SyndromeTable::from_rows(table_from_csv(
        REFERENCE_TABLE_CSV,
    )?)?)
}

/// Row-by-row differences, empty when the tables agree.
pub fn diff_tables(generated: &SyndromeTable, reference: &SyndromeTable) -> Vec<String> {
    let mut diffs = Vec::new();
    for (g, r) in generated.rows().iter().zip(reference.rows()) {
        if g != r {
            diffs.push(format!(
                "- {},{},{},{}\n+ {},{},{},{}",
                r.syndrome,
                r.error,
                r.data_state,
                r.correction,
                g.syndrome,
                g.error,
                g.data_state,
                g.correction
            ));
        }
    }
    if generated.rows().len() != reference.rows().len() {
        diffs.push(format!(
            "row count {} vs reference {}",
            generated.rows().len(),
            reference.rows().len()
        ));
    }
    diffs
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_graph_is_the_five_qubit_code() {
        assert_eq!(
            parse_graph(REFERENCE_GRAPH).unwrap(),
            GraphAdjacency::five_qubit_code()
        );
    }

    #[test]
    fn graph_round_trip() {
        let g = GraphAdjacency::five_qubit_code();
        assert_eq!(parse_graph(&write_graph(&g)).unwrap(), g);
    }

    #[test]
    fn malformed_graphs() {
        assert!(parse_graph("").is_err());
        assert!(parse_graph("1 1\n0 1\n").is_err());
        assert!(parse_graph("1 1\n0 1\n0 0\n").is_err());
        assert!(parse_graph("1 1\n0 2\n2 0\n").is_err());
        assert!(parse_graph("1\n0\n").is_err());
    }

    #[test]
    fn reference_table_loads() {
        let t = reference_table().unwrap();
        let bold = t.lookup("0110".parse().unwrap()).unwrap();
        assert_eq!(bold.error.to_string(), "B1");
        assert_eq!(bold.correction.to_string(), "S5");
    }

    #[test]
    fn csv_round_trip_is_byte_exact() {
        let rows = table_from_csv(REFERENCE_TABLE_CSV).unwrap();
        assert_eq!(table_to_csv(&rows).unwrap(), REFERENCE_TABLE_CSV);
    }

    #[test]
    fn diff_reports_changed_rows() {
        let t = reference_table().unwrap();
        assert!(diff_tables(&t, &t).is_empty());
        let mut rows = t.rows().to_vec();
        rows[6].correction = "B5".parse().unwrap();
        let changed = SyndromeTable::from_rows(rows).unwrap();
        let d = diff_tables(&changed, &t);
        assert_eq!(d.len(), 1);
        assert!(d[0].contains("0110"));
    }
}
