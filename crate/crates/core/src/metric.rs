//! Dense finite metric spaces.

use crate::error::{Error, Result};
use crate::graph::{dijkstra_multi, WeightedGraph};
use crate::terminals::TerminalSet;

/// Absolute slack allowed when checking metric axioms.
pub const METRIC_TOLERANCE: f64 = 1e-9;

/// Largest `n` for which the O(n³) triangle check runs under
/// [`TriangleCheck::Auto`].
pub const AUTO_TRIANGLE_LIMIT: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TriangleCheck {
    Always,
    Never,
    #[default]
    Auto,
}

/// `n` points with a full symmetric distance matrix stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricSpace {
    n: usize,
    dist: Vec<f64>,
}

impl MetricSpace {
    pub fn new(n: usize, dist: Vec<f64>) -> Result<Self> {
        Self::with_check(n, dist, TriangleCheck::Auto)
    }

    /// Builds from a row-major matrix. Zero diagonal, symmetry and
    /// non-negativity are always checked; the triangle inequality per `check`.
    pub fn with_check(n: usize, dist: Vec<f64>, check: TriangleCheck) -> Result<Self> {
        if dist.len() != n * n {
            return Err(Error::SizeMismatch(format!(
                "distance matrix has {} entries, expected {}",
                dist.len(),
                n * n
            )));
        }
        let m = MetricSpace { n, dist };
        for x in 0..n {
            if m.dist(x, x) != 0.0 {
                return Err(Error::InvalidMetric(format!("d({x},{x}) = {}", m.dist(x, x))));
            }
            for y in 0..n {
                let d = m.dist(x, y);
                if !(d >= 0.0) || !d.is_finite() {
                    return Err(Error::InvalidMetric(format!("d({x},{y}) = {d}")));
                }
                if (d - m.dist(y, x)).abs() > METRIC_TOLERANCE {
                    return Err(Error::InvalidMetric(format!("d({x},{y}) != d({y},{x})")));
                }
            }
        }
        let run_triangle = match check {
            TriangleCheck::Always => true,
            TriangleCheck::Never => false,
            TriangleCheck::Auto => n <= AUTO_TRIANGLE_LIMIT,
        };
        if run_triangle {
            m.check_triangle()?;
        }
        Ok(m)
    }

    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::SizeMismatch("distance rows are not square".into()));
        }
        Self::new(n, rows.into_iter().flatten().collect())
    }

    /// Builds the metric induced by a distance function on `0..n`.
    pub fn from_fn(n: usize, check: TriangleCheck, f: impl Fn(usize, usize) -> f64) -> Result<Self> {
        let mut dist = Vec::with_capacity(n * n);
        for x in 0..n {
            for y in 0..n {
                dist.push(if x == y { 0.0 } else { f(x, y) });
            }
        }
        Self::with_check(n, dist, check)
    }

    fn check_triangle(&self) -> Result<()> {
        let n = self.n;
        for z in 0..n {
            for x in 0..n {
                let dxz = self.dist(x, z);
                for y in 0..n {
                    if self.dist(x, y) > dxz + self.dist(z, y) + METRIC_TOLERANCE {
                        return Err(Error::InvalidMetric(format!(
                            "triangle inequality fails for ({x},{y}) via {z}"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn dist(&self, x: usize, y: usize) -> f64 {
        self.dist[x * self.n + y]
    }

    pub fn row(&self, x: usize) -> &[f64] {
        &self.dist[x * self.n..(x + 1) * self.n]
    }

    /// `D(x)`, the distance from each point to its nearest terminal.
    pub fn terminal_distances(&self, terminals: &TerminalSet) -> Result<Vec<f64>> {
        if terminals.is_empty() {
            return Err(Error::NoTerminals);
        }
        terminals.check_bounds(self.n)?;
        Ok((0..self.n)
            .map(|x| {
                terminals
                    .iter()
                    .map(|t| self.dist(x, t))
                    .fold(f64::INFINITY, f64::min)
            })
            .collect())
    }

    pub fn diameter(&self) -> f64 {
        self.dist.iter().copied().fold(0.0, f64::max)
    }
}

/// Shortest-path metric of a connected graph, one Dijkstra run per vertex.
pub fn metric_from_graph(g: &WeightedGraph) -> Result<MetricSpace> {
    g.ensure_connected()?;
    let n = g.n();
    let mut dist = Vec::with_capacity(n * n);
    for s in 0..n {
        dist.extend(dijkstra_multi(g, &[s]));
    }
    // shortest-path distances are a metric by construction
    MetricSpace::with_check(n, dist, TriangleCheck::Never)
}
