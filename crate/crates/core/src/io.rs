//! Graph file formats.
//!
//! Two interchangeable representations, both 1-based:
//!
//! - edge list: a header line `N <n>` followed by `<u> <v> <w>` lines,
//!   whitespace-separated, `w` a decimal weight;
//! - JSON: `{"n": <n>, "edges": [[u, v, w], ...]}`.
//!
//! Weights are printed with the shortest decimal that round-trips the f64
//! bit pattern, so write → read is bit-exact.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;

#[derive(Serialize, Deserialize)]
struct GraphJson {
    n: usize,
    edges: Vec<(usize, usize, f64)>,
}

/// Serialize to the edge-list text format.
pub fn to_edge_list(g: &Graph) -> String {
    let mut out = format!("N {}\n", g.n());
    for (u, v, w) in g.edges() {
        out.push_str(&format!("{u} {v} {w}\n"));
    }
    out
}

/// Parse the edge-list text format.
pub fn from_edge_list(text: &str) -> Result<Graph> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header = lines
        .next()
        .ok_or_else(|| Error::parse("empty graph file"))?;
    let mut parts = header.split_whitespace();
    match (parts.next(), parts.next(), parts.next()) {
        (Some("N"), Some(n), None) => {
            let n: usize = n
                .parse()
                .map_err(|_| Error::parse(format!("bad node count {n:?}")))?;
            let mut edges = Vec::new();
            for (i, line) in lines.enumerate() {
                let fields: Vec<&str> = line.split_whitespace().collect();
                if fields.len() != 3 {
                    return Err(Error::parse(format!(
                        "edge line {} must be `u v w`, got {line:?}",
                        i + 2
                    )));
                }
                let u: usize = fields[0]
                    .parse()
                    .map_err(|_| Error::parse(format!("bad node id {:?}", fields[0])))?;
                let v: usize = fields[1]
                    .parse()
                    .map_err(|_| Error::parse(format!("bad node id {:?}", fields[1])))?;
                let w: f64 = fields[2]
                    .parse()
                    .map_err(|_| Error::parse(format!("bad weight {:?}", fields[2])))?;
                edges.push((u, v, w));
            }
            Graph::from_edges(n, &edges)
        }
        _ => Err(Error::parse(format!(
            "expected header `N <count>`, got {header:?}"
        ))),
    }
}

/// Serialize to the JSON format.
pub fn to_json(g: &Graph) -> String {
    let doc = GraphJson {
        n: g.n(),
        edges: g.edges(),
    };
    serde_json::to_string(&doc).expect("graph serialization cannot fail")
}

/// Parse the JSON format.
pub fn from_json(text: &str) -> Result<Graph> {
    let doc: GraphJson =
        serde_json::from_str(text).map_err(|e| Error::parse(format!("bad graph JSON: {e}")))?;
    Graph::from_edges(doc.n, &doc.edges)
}

/// Read a graph, choosing the format from the file extension
/// (`.json` → JSON, anything else → edge list).
pub fn read_graph(path: &Path) -> Result<Graph> {
    let text = std::fs::read_to_string(path)?;
    if path.extension().is_some_and(|e| e == "json") {
        from_json(&text)
    } else {
        from_edge_list(&text)
    }
}

/// Write a graph, choosing the format from the file extension.
pub fn write_graph(g: &Graph, path: &Path) -> Result<()> {
    let text = if path.extension().is_some_and(|e| e == "json") {
        to_json(g)
    } else {
        to_edge_list(g)
    };
    std::fs::write(path, text)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{gen_random, gen_star};

    #[test]
    fn edge_list_round_trip() {
        let g =
            Graph::from_edges(4, &[(1, 2, 0.1), (2, 3, 1.5), (3, 4, 0.30000000000000004)]).unwrap();
        let text = to_edge_list(&g);
        let back = from_edge_list(&text).unwrap();
        assert_eq!(g, back);
        // writing twice yields identical bytes
        assert_eq!(text, to_edge_list(&back));
    }

    #[test]
    fn json_round_trip() {
        let g = gen_random(7, 0.5, 2).unwrap();
        let back = from_json(&to_json(&g)).unwrap();
        assert_eq!(g, back);
    }

    #[test]
    fn formats_agree() {
        let g = gen_star(5).unwrap();
        assert_eq!(from_edge_list(&to_edge_list(&g)).unwrap(), g);
        assert_eq!(from_json(&to_json(&g)).unwrap(), g);
    }

    #[test]
    fn parse_errors() {
        assert!(from_edge_list("").is_err());
        assert!(from_edge_list("M 3\n").is_err());
        assert!(from_edge_list("N 3\n1 2\n").is_err());
        assert!(from_edge_list("N 3\n1 2 x\n").is_err());
        assert!(from_edge_list("N 3\n1 5 1.0\n").is_err());
        assert!(from_json("{\"n\": 2}").is_err());
    }
}
