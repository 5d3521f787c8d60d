//! Graph text and JSON formats.
//!
//! Text form: a header line `n m` followed by exactly `m` lines `u v`
//! (0-based, whitespace separated, each undirected edge once). Blank lines
//! are ignored. JSON form: `{"vertex_count": n, "edges": [[u, v], ...],
//! "labels": [...]}` with `labels` optional.

use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{Graph, Label};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GraphJson {
    pub vertex_count: usize,
    pub edges: Vec<[usize; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<Label>>,
}

fn parse_line(line: &str, lineno: usize) -> Result<(usize, usize)> {
    let mut it = line.split_whitespace();
    let mut next = |what: &str| -> Result<usize> {
        let tok = it.next().ok_or_else(|| Error::Parse {
            line: lineno,
            message: format!("missing {what}"),
        })?;
        tok.parse().map_err(|_| Error::Parse {
            line: lineno,
            message: format!("{what} {tok:?} is not a non-negative integer"),
        })
    };
    let a = next("first field")?;
    let b = next("second field")?;
    if it.next().is_some() {
        return Err(Error::Parse {
            line: lineno,
            message: "expected exactly two fields".into(),
        });
    }
    Ok((a, b))
}

pub fn parse_graph_text(text: &str) -> Result<Graph> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty());
    let (hline, header) = lines.next().ok_or(Error::Parse {
        line: 1,
        message: "empty graph file".into(),
    })?;
    let (n, m) = parse_line(header, hline)?;
    let mut edges = Vec::with_capacity(m);
    let mut seen = std::collections::HashSet::new();
    for (lineno, line) in lines {
        if edges.len() == m {
            return Err(Error::Parse {
                line: lineno,
                message: format!("more than the {m} declared edges"),
            });
        }
        let (u, v) = parse_line(line, lineno)?;
        let err = |message: String| Error::Parse {
            line: lineno,
            message,
        };
        if u >= n || v >= n {
            return Err(err(format!("edge {u} {v} out of range for {n} vertices")));
        }
        if u == v {
            return Err(err(format!("self-loop at {u}")));
        }
        if !seen.insert((u.min(v), u.max(v))) {
            return Err(err(format!("duplicate edge {u} {v}")));
        }
        edges.push((u, v));
    }
    if edges.len() != m {
        return Err(Error::Parse {
            line: text.lines().count().max(1),
            message: format!("declared {m} edges, found {}", edges.len()),
        });
    }
    Graph::from_edges(n, &edges)
}

impl Graph {
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.vertex_count(), self.edge_count());
        for (u, v) in self.edges() {
            out.push_str(&format!("{u} {v}\n"));
        }
        out
    }

    pub fn to_json(&self) -> GraphJson {
        GraphJson {
            vertex_count: self.vertex_count(),
            edges: self.edges().map(|(u, v)| [u, v]).collect(),
            labels: self.labels().map(<[Label]>::to_vec),
        }
    }

    pub fn from_json(json: &GraphJson) -> Result<Graph> {
        let edges: Vec<(usize, usize)> = json.edges.iter().map(|e| (e[0], e[1])).collect();
        let g = Graph::from_edges(json.vertex_count, &edges)?;
        match &json.labels {
            Some(l) => g.with_labels(l.clone()),
            None => Ok(g),
        }
    }

    /// Parses either format, choosing JSON when the first non-blank
    /// character is `{`.
    pub fn parse(text: &str) -> Result<Graph> {
        if text.trim_start().starts_with('{') {
            let json: GraphJson = serde_json::from_str(text).map_err(|e| Error::Parse {
                line: e.line(),
                message: e.to_string(),
            })?;
            Graph::from_json(&json)
        } else {
            parse_graph_text(text)
        }
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Graph> {
        Graph::parse(&std::fs::read_to_string(path)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::named::{cycle, hypercube};
    use proptest::prelude::*;

    #[test]
    fn text_roundtrip() {
        let g = hypercube(3);
        assert_eq!(parse_graph_text(&g.to_text()).unwrap(), g);
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let e = parse_graph_text("3 2\n0 1\n1 x\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 3, .. }), "{e}");
        let e = parse_graph_text("3 2\n0 1\n1 0\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 3, .. }), "{e}");
        let e = parse_graph_text("3 1\n0 1\n1 2\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 3, .. }), "{e}");
        let e = parse_graph_text("3 2\n0 5\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 2, .. }), "{e}");
        assert!(parse_graph_text("3 2\n0 1\n").is_err());
        assert!(parse_graph_text("").is_err());
    }

    #[test]
    fn json_with_labels() {
        let g = cycle(4)
            .with_labels(vec![
                Label::Int(0),
                Label::Coord(vec![1, 2]),
                Label::pair(Label::Int(3), Label::Int(1)),
                Label::Text("x".into()),
            ])
            .unwrap();
        let s = serde_json::to_string(&g.to_json()).unwrap();
        assert_eq!(Graph::parse(&s).unwrap(), g);
    }

    proptest! {
        #[test]
        fn random_graphs_roundtrip(n in 1usize..12, mask in any::<u64>()) {
            let pairs: Vec<(usize, usize)> = (0..n)
                .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
                .enumerate()
                .filter(|(k, _)| mask >> (k % 64) & 1 == 1)
                .map(|(_, e)| e)
                .collect();
            let g = Graph::from_edges(n, &pairs).unwrap();
            prop_assert_eq!(&parse_graph_text(&g.to_text()).unwrap(), &g);
            let js = serde_json::to_string(&g.to_json()).unwrap();
            prop_assert_eq!(&Graph::parse(&js).unwrap(), &g);
        }
    }
}
