//! Plain-text edge lists: an optional `# vertices N` header followed by one
//! `u v` pair per line. Blank lines and other `#` comments are ignored.

use std::fmt::Write as _;

use super::Graph;
use crate::error::{Error, Result};

pub fn parse_edge_list(text: &str) -> Result<Graph> {
    let mut declared: Option<usize> = None;
    let mut edges = Vec::new();
    let mut max_id: Option<usize> = None;
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        let lineno = i + 1;
        if line.is_empty() {
            continue;
        }
        if let Some(comment) = line.strip_prefix('#') {
            let mut words = comment.split_whitespace();
            if words.next() == Some("vertices") {
                let n = words
                    .next()
                    .and_then(|w| w.parse::<usize>().ok())
                    .ok_or_else(|| Error::Parse {
                        line: lineno,
                        msg: "expected `# vertices N`".into(),
                    })?;
                declared = Some(n);
            }
            continue;
        }
        let mut words = line.split_whitespace();
        let mut next = || -> Result<usize> {
            words
                .next()
                .ok_or_else(|| Error::Parse {
                    line: lineno,
                    msg: "expected two vertex ids".into(),
                })?
                .parse::<usize>()
                .map_err(|e| Error::Parse {
                    line: lineno,
                    msg: e.to_string(),
                })
        };
        let (u, v) = (next()?, next()?);
        if words.next().is_some() {
            return Err(Error::Parse {
                line: lineno,
                msg: "trailing tokens after edge".into(),
            });
        }
        if u == v {
            return Err(Error::Parse {
                line: lineno,
                msg: format!("loop at vertex {u}"),
            });
        }
        max_id = Some(max_id.map_or(u.max(v), |m| m.max(u).max(v)));
        edges.push((u, v));
    }
    let needed = max_id.map_or(0, |m| m + 1);
    let n = match declared {
        Some(n) if n < needed => {
            return Err(Error::Parse {
                line: 0,
                msg: format!("header declares {n} vertices but edges use id {}", needed - 1),
            })
        }
        Some(n) => n,
        None => needed,
    };
    Graph::from_edges(n, edges)
}

pub fn write_edge_list(g: &Graph) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# vertices {}", g.vertex_count());
    for (u, v) in g.edges() {
        let _ = writeln!(out, "{u} {v}");
    }
    out
}
