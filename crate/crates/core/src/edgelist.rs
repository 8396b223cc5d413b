//! Text edge lists.
//!
//! ```text
//! # upag-el v1 M=3 n=4
//! 1 0
//! 1 0
//! ...
//! ```
//!
//! After the header come `n * M` lines `src dst`. In block order the sources
//! read `1` (M times), `2` (M times), and so on, and every target is smaller
//! than its source; the file is then the DAG verbatim. Any other order is read
//! as an undirected multigraph and the DAG is recovered by peeling.

use std::fmt::Write as _;
use std::path::Path;

use crate::construct::peel_with_order;
use crate::graph::{Dag, UndirectedMultigraph, Vertex};
use crate::{Error, Result};

pub const HEADER_PREFIX: &str = "# upag-el v1";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeList {
    pub dag: Dag,
    /// Set when the file was not in block order and arrival order had to be
    /// inferred by peeling.
    pub arrival_inferred: bool,
    /// `arrival[t]` is the file label of the vertex now labelled `t`.
    pub arrival: Vec<Vertex>,
}

fn parse_header(line: &str) -> Result<(usize, usize)> {
    let bad = |msg: &str| Error::Parse {
        line: 1,
        msg: msg.to_string(),
    };
    let rest = line
        .strip_prefix(HEADER_PREFIX)
        .ok_or_else(|| bad("expected header '# upag-el v1 M=<M> n=<n>'"))?;
    let (mut m, mut n) = (None, None);
    for field in rest.split_whitespace() {
        let (key, value) = field
            .split_once('=')
            .ok_or_else(|| bad("header fields must be key=value"))?;
        let value: usize = value
            .parse()
            .map_err(|_| bad("header value is not an integer"))?;
        match key {
            "M" => m = Some(value),
            "n" => n = Some(value),
            _ => return Err(bad(&format!("unknown header field '{key}'"))),
        }
    }
    match (m, n) {
        (Some(m), Some(n)) if m >= 1 && n >= 1 => Ok((m, n)),
        (Some(_), Some(_)) => Err(bad("M and n must be positive")),
        _ => Err(bad("header needs both M and n")),
    }
}

pub fn parse(text: &str) -> Result<EdgeList> {
    let mut lines = text.lines();
    let (m, n) = parse_header(lines.next().unwrap_or(""))?;
    let mut edges = Vec::with_capacity(n.saturating_mul(m).min(1 << 24));
    for (k, line) in lines.enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let lineno = k + 2;
        let mut it = line.split_whitespace();
        let mut field = || -> Result<Vertex> {
            it.next()
                .ok_or_else(|| Error::Parse {
                    line: lineno,
                    msg: "expected 'src dst'".into(),
                })?
                .parse()
                .map_err(|_| Error::Parse {
                    line: lineno,
                    msg: "vertex is not a non-negative integer".into(),
                })
        };
        let (s, t) = (field()?, field()?);
        if it.next().is_some() {
            return Err(Error::Parse {
                line: lineno,
                msg: "trailing fields".into(),
            });
        }
        if s > n || t > n {
            return Err(Error::Parse {
                line: lineno,
                msg: format!("vertex out of range 0..={n}"),
            });
        }
        edges.push((s, t));
    }
    if edges.len() != n * m {
        return Err(Error::MalformedGraph(format!(
            "{} edges, header promises n*M = {}",
            edges.len(),
            n * m
        )));
    }
    let block_order = edges
        .iter()
        .enumerate()
        .all(|(i, &(s, t))| s == i / m + 1 && t < s);
    if block_order {
        let dag = Dag::new(m, edges.into_iter().map(|(_, t)| t).collect())?;
        return Ok(EdgeList {
            dag,
            arrival_inferred: false,
            arrival: (0..=n).collect(),
        });
    }
    let u = UndirectedMultigraph::new(n + 1, edges)?;
    let peeled = peel_with_order(&u, m)?;
    Ok(EdgeList {
        dag: peeled.dag,
        arrival_inferred: true,
        arrival: peeled.arrival,
    })
}

pub fn read(path: impl AsRef<Path>) -> Result<EdgeList> {
    parse(&std::fs::read_to_string(path)?)
}

pub fn to_text(d: &Dag) -> String {
    let m = d.m();
    let mut s = String::with_capacity(16 * d.targets().len() + 32);
    writeln!(s, "{HEADER_PREFIX} M={m} n={}", d.n()).expect("string write");
    for (i, &t) in d.targets().iter().enumerate() {
        writeln!(s, "{} {t}", i / m + 1).expect("string write");
    }
    s
}

pub fn write(path: impl AsRef<Path>, d: &Dag) -> Result<()> {
    std::fs::write(path, to_text(d))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    const EXAMPLE_N4: &str =
        "# upag-el v1 M=3 n=4\n1 0\n1 0\n1 0\n2 0\n2 0\n2 1\n3 0\n3 1\n3 1\n4 0\n4 1\n4 3\n";

    #[test]
    fn block_order_round_trip() {
        let e = parse(EXAMPLE_N4).unwrap();
        assert!(!e.arrival_inferred);
        assert_eq!(e.dag.targets(), &[0, 0, 0, 0, 0, 1, 0, 1, 1, 0, 1, 3]);
        assert_eq!(to_text(&e.dag), EXAMPLE_N4);
    }

    #[test]
    fn shuffled_lines_are_peeled() {
        let mut lines: Vec<&str> = EXAMPLE_N4.lines().skip(1).collect();
        lines.reverse();
        let text = format!("# upag-el v1 M=3 n=4\n{}\n", lines.join("\n"));
        let e = parse(&text).unwrap();
        assert!(e.arrival_inferred);
        let mut got: Vec<Vec<Vertex>> = (1..=4).map(|t| e.dag.block(t).to_vec()).collect();
        for b in &mut got {
            b.sort();
        }
        assert_eq!(
            got,
            vec![vec![0, 0, 0], vec![0, 0, 1], vec![0, 1, 1], vec![0, 1, 3]]
        );
    }

    #[test]
    fn errors() {
        assert!(matches!(parse(""), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(
            parse("# upag-el v1 M=3\n"),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(
            parse("# upag-el v1 M=0 n=1\n"),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(
            parse("# upag-el v1 M=1 n=1\n1 x\n"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(
            parse("# upag-el v1 M=1 n=1\n1 5\n"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(
            parse("# upag-el v1 M=1 n=2\n1 0\n"),
            Err(Error::MalformedGraph(_))
        ));
    }

    #[test]
    fn single_edge() {
        let e = parse("# upag-el v1 M=1 n=1\n1 0\n").unwrap();
        assert_eq!(e.dag.targets(), &[0]);
    }
}
