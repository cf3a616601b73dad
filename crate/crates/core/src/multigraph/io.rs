//! Line-oriented graph file format.
//!
//! ```text
//! v 2
//! e 0 1
//! e 0 1
//! e 0 1
//! ```
//!
//! The first record gives the vertex count; every following `e a b` record is
//! one edge, loops written as `e a a`. Blank lines and `#` comments are ignored.
//! Edge `i` in file order owns darts `2i` (tailed at `a`) and `2i + 1`.

use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::Multigraph;
use crate::{Error, Result};

/// Structured-document form of a graph file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphRecord {
    pub vertices: usize,
    pub edges: Vec<[usize; 2]>,
}

impl From<&Multigraph> for GraphRecord {
    fn from(g: &Multigraph) -> Self {
        GraphRecord {
            vertices: g.vertex_count(),
            edges: g.edges().into_iter().map(|(a, b)| [a, b]).collect(),
        }
    }
}

impl TryFrom<GraphRecord> for Multigraph {
    type Error = Error;

    fn try_from(r: GraphRecord) -> Result<Self> {
        let edges: Vec<_> = r.edges.iter().map(|&[a, b]| (a, b)).collect();
        Multigraph::new(r.vertices, &edges)
    }
}

impl Multigraph {
    pub fn to_text(&self) -> String {
        let mut s = format!("v {}\n", self.vertex_count());
        for (a, b) in self.edges() {
            writeln!(s, "e {a} {b}").expect("writing to a String");
        }
        s
    }
}

impl FromStr for Multigraph {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut vertex_count = None;
        let mut edges = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let parse_err = |message: String| Error::Parse { line, message };
            let mut fields = content.split_whitespace();
            let tag = fields.next().unwrap_or_default();
            let nums: Vec<usize> = fields
                .map(|f| {
                    f.parse::<usize>().map_err(|_| {
                        parse_err(format!("expected a non-negative integer, found `{f}`"))
                    })
                })
                .collect::<Result<_>>()?;
            match (tag, vertex_count, nums.as_slice()) {
                ("v", None, &[n]) => vertex_count = Some(n),
                ("v", Some(_), _) => return Err(parse_err("duplicate `v` record".into())),
                ("v", None, _) => return Err(parse_err("`v` takes exactly one count".into())),
                ("e", None, _) => return Err(parse_err("`e` record before `v` record".into())),
                ("e", Some(_), &[a, b]) => edges.push((a, b)),
                ("e", Some(_), _) => {
                    return Err(parse_err("`e` takes exactly two endpoints".into()))
                }
                _ => return Err(parse_err(format!("unknown record `{tag}`"))),
            }
        }
        let n = vertex_count.ok_or(Error::Parse {
            line: 0,
            message: "missing `v` record".into(),
        })?;
        Multigraph::new(n, &edges)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_prints() {
        let text = "# theta\nv 2\ne 0 1\n\ne 1 0  # reversed\ne 0 1\n";
        let g: Multigraph = text.parse().unwrap();
        assert_eq!(g.edge_count(), 3);
        assert_eq!(g.tail(2), 1);
        assert_eq!(g.to_text(), "v 2\ne 0 1\ne 1 0\ne 0 1\n");
        let again: Multigraph = g.to_text().parse().unwrap();
        assert_eq!(again, g);
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let err = "v 2\ne 0 5\n".parse::<Multigraph>().unwrap_err();
        assert!(matches!(err, Error::EndpointOutOfRange { endpoint: 5, .. }));
        let err = "v 2\nx 0 1\n".parse::<Multigraph>().unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
        let err = "e 0 1\n".parse::<Multigraph>().unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));
        let err = "v 1\nv 1\n".parse::<Multigraph>().unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
        assert!(matches!(
            "".parse::<Multigraph>(),
            Err(Error::Parse { line: 0, .. })
        ));
        assert!(matches!(
            "v 2\ne 0 -1".parse::<Multigraph>(),
            Err(Error::Parse { line: 2, .. })
        ));
    }

    #[test]
    fn record_conversion() {
        let g = Multigraph::new(2, &[(0, 0), (0, 1), (1, 1)]).unwrap();
        let r = GraphRecord::from(&g);
        assert_eq!(r.edges, vec![[0, 0], [0, 1], [1, 1]]);
        assert_eq!(Multigraph::try_from(r).unwrap(), g);
    }
}
