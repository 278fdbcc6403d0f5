//! Plain-text instance format.
//!
//! ```text
//! # comment lines start with '#'
//! n m k
//! t_1 t_2 ... t_k        (terminals in π order)
//! u v w                  (m edge lines)
//! ```

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::graph::{Edge, WeightedGraph};
use crate::terminals::TerminalSet;

pub fn parse_instance(text: &str) -> Result<(WeightedGraph, TerminalSet)> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let parse_err = |line: usize, msg: String| Error::Parse { line, msg };
    let fields = |line: usize, l: &str, expected: usize| -> Result<Vec<String>> {
        let parts: Vec<String> = l.split_whitespace().map(str::to_owned).collect();
        if parts.len() != expected {
            return Err(parse_err(line, format!("expected {expected} fields, found {}", parts.len())));
        }
        Ok(parts)
    };
    let int = |line: usize, s: &str| -> Result<usize> {
        s.parse().map_err(|_| parse_err(line, format!("`{s}` is not a vertex id or count")))
    };

    let (line, header) = lines.next().ok_or_else(|| parse_err(0, "missing header `n m k`".into()))?;
    let h = fields(line, header, 3)?;
    let (n, m, k) = (int(line, &h[0])?, int(line, &h[1])?, int(line, &h[2])?);

    let terminals = if k == 0 {
        Vec::new()
    } else {
        let (line, l) = lines.next().ok_or_else(|| parse_err(line, "missing terminal line".into()))?;
        fields(line, l, k)?
            .iter()
            .map(|s| int(line, s))
            .collect::<Result<Vec<_>>>()?
    };

    let mut edges = Vec::with_capacity(m);
    for _ in 0..m {
        let (line, l) = lines
            .next()
            .ok_or_else(|| parse_err(0, format!("expected {m} edges, found {}", edges.len())))?;
        let f = fields(line, l, 3)?;
        let w: f64 = f[2]
            .parse()
            .map_err(|_| parse_err(line, format!("`{}` is not a weight", f[2])))?;
        edges.push(Edge::new(int(line, &f[0])?, int(line, &f[1])?, w));
    }
    if let Some((line, _)) = lines.next() {
        return Err(parse_err(line, "trailing content after the edge list".into()));
    }

    let g = WeightedGraph::new(n, edges)?;
    let terminals = TerminalSet::new(terminals, n)?;
    Ok((g, terminals))
}

pub fn write_instance(g: &WeightedGraph, terminals: &TerminalSet) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{} {} {}", g.n(), g.m(), terminals.len());
    let ids: Vec<String> = terminals.iter().map(|t| t.to_string()).collect();
    let _ = writeln!(out, "{}", ids.join(" "));
    for e in g.edges() {
        // {:?} keeps a round-trippable representation of the weight
        let _ = writeln!(out, "{} {} {:?}", e.u, e.v, e.w);
    }
    out
}
