//! Plain-text edge lists: one `u v` pair per line, `#` comments, and an
//! optional `n <count>` header declaring the vertex count so isolated
//! vertices survive the round trip.

use thiserror::Error;

use crate::graph::{Graph, GraphError};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EdgeListError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

pub fn parse_edge_list(text: &str) -> Result<Graph, EdgeListError> {
    let mut edges: Vec<(u64, u64)> = Vec::new();
    let mut declared: u64 = 0;
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut tokens = line.split_whitespace();
        let first = tokens.next().unwrap();
        if first == "n" {
            let val = tokens.next().ok_or(EdgeListError::Parse {
                line: i + 1,
                msg: "header 'n' needs a count".into(),
            })?;
            declared = declared.max(val.parse().map_err(|_| EdgeListError::Parse {
                line: i + 1,
                msg: format!("bad vertex count '{val}'"),
            })?);
            continue;
        }
        let second = tokens.next().ok_or(EdgeListError::Parse {
            line: i + 1,
            msg: "expected two vertex labels".into(),
        })?;
        if tokens.next().is_some() {
            return Err(EdgeListError::Parse {
                line: i + 1,
                msg: "expected exactly two vertex labels".into(),
            });
        }
        let parse = |tok: &str| {
            tok.parse::<u64>().map_err(|_| EdgeListError::Parse {
                line: i + 1,
                msg: format!("bad vertex label '{tok}'"),
            })
        };
        edges.push((parse(first)?, parse(second)?));
    }
    Ok(Graph::build_with_min_label_range(&edges, declared)?)
}

/// Writes the header and the edges in ascending label order; the output is
/// byte-stable for a given graph.
pub fn write_edge_list(g: &Graph) -> String {
    let mut out = format!("n {}\n", g.n());
    for (u, v) in g.edges() {
        out.push_str(&format!("{} {}\n", g.label(u), g.label(v)));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_with_header_and_comments() {
        let text = "# sample\nn 6\n0 1\n1 2\n\n2 0\n";
        let g = parse_edge_list(text).unwrap();
        assert_eq!(g.n(), 6);
        assert_eq!(g.m(), 3);
    }

    #[test]
    fn round_trip_is_stable() {
        let text = "n 4\n0 1\n1 2\n2 3\n";
        let g = parse_edge_list(text).unwrap();
        let written = write_edge_list(&g);
        assert_eq!(written, text);
        let g2 = parse_edge_list(&written).unwrap();
        assert_eq!(write_edge_list(&g2), written);
    }

    #[test]
    fn rejects_malformed_lines() {
        assert!(matches!(
            parse_edge_list("0\n"),
            Err(EdgeListError::Parse { line: 1, .. })
        ));
        assert!(matches!(
            parse_edge_list("0 1 2\n"),
            Err(EdgeListError::Parse { line: 1, .. })
        ));
        assert!(matches!(
            parse_edge_list("a b\n"),
            Err(EdgeListError::Parse { line: 1, .. })
        ));
        assert!(matches!(
            parse_edge_list("3 3\n"),
            Err(EdgeListError::Graph(GraphError::LoopEdge(3)))
        ));
    }

    #[test]
    fn labels_survive_remapping() {
        let g = parse_edge_list("10 20\n20 30\n").unwrap();
        assert_eq!(g.n(), 3);
        let written = write_edge_list(&g);
        assert!(written.contains("10 20") && written.contains("20 30"));
    }
}
