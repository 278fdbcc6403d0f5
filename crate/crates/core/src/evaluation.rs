//! Distortion of induced minors and Monte-Carlo stretch of randomized
//! retractions, plus the all-pairs oracle used to check them.

use rand::seq::index::sample as sample_indices;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::clustering::{
    metric_relaxed_voronoi, GraphicEngine, InducedMinor, Retraction, Frontier,
};
use crate::error::{Error, Result};
use crate::graph::{terminal_rows, WeightedGraph, UNREACHABLE};
use crate::magnitudes::{derive_seed, rng_for, MagnitudePolicy};
use crate::metric::MetricSpace;
use crate::orderings::OrderingPolicy;
use crate::terminals::TerminalSet;
use crate::validation::ValidationLevel;

/// Default size cap for [`floyd_warshall`].
pub const FLOYD_WARSHALL_CAP: usize = 512;

/// Exhaustive pair enumeration is used up to this many points.
pub const EXHAUSTIVE_PAIR_LIMIT: usize = 100;

pub const DEFAULT_PAIR_SAMPLE: usize = 2000;

/// All-pairs shortest paths by dynamic programming. Unreachable pairs are
/// [`UNREACHABLE`].
pub fn floyd_warshall(g: &WeightedGraph) -> Result<Vec<Vec<f64>>> {
    floyd_warshall_capped(g, FLOYD_WARSHALL_CAP)
}

pub fn floyd_warshall_capped(g: &WeightedGraph, cap: usize) -> Result<Vec<Vec<f64>>> {
    let n = g.n();
    if n > cap {
        return Err(Error::OracleCapExceeded { n, cap });
    }
    let mut d = vec![vec![UNREACHABLE; n]; n];
    for (v, row) in d.iter_mut().enumerate() {
        row[v] = 0.0;
    }
    for e in g.edges() {
        if e.w < d[e.u][e.v] {
            d[e.u][e.v] = e.w;
            d[e.v][e.u] = e.w;
        }
    }
    for z in 0..n {
        for x in 0..n {
            let dxz = d[x][z];
            if dxz == UNREACHABLE {
                continue;
            }
            for y in 0..n {
                let via = dxz + d[z][y];
                if via < d[x][y] {
                    d[x][y] = via;
                }
            }
        }
    }
    Ok(d)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistortionReport {
    pub max_distortion: f64,
    /// Positions in π of the worst pair; `None` when `k = 1`.
    pub argmax_pair: Option<(usize, usize)>,
    /// Vertex ids of the worst pair.
    pub argmax_terminals: Option<(usize, usize)>,
    /// `per_pair[i][j] = d_M(t_i, t_j) / d_G(t_i, t_j)`, 1 on the diagonal.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub per_pair: Option<Vec<Vec<f64>>>,
}

impl DistortionReport {
    pub fn pair(&self, i: usize, j: usize) -> Option<f64> {
        self.per_pair.as_ref().map(|t| t[i][j])
    }
}

fn ratio(minor: f64, original: f64) -> f64 {
    if original > 0.0 {
        minor / original
    } else if minor > 0.0 {
        f64::INFINITY
    } else {
        1.0
    }
}

/// Exact worst-case distortion of `minor` with respect to `g`.
pub fn minor_distortion(g: &WeightedGraph, terminals: &TerminalSet, minor: &InducedMinor) -> Result<DistortionReport> {
    let rows = terminal_rows(g, terminals)?;
    let original: Vec<Vec<f64>> = rows
        .iter()
        .map(|row| terminals.iter().map(|t| row[t]).collect())
        .collect();
    distortion_from_tables(terminals, minor, &original, true)
}

/// Like [`minor_distortion`] with the terminal distance table supplied by
/// the caller (`original[i][j] = d_G(t_i, t_j)`).
pub fn distortion_from_tables(
    terminals: &TerminalSet,
    minor: &InducedMinor,
    original: &[Vec<f64>],
    keep_table: bool,
) -> Result<DistortionReport> {
    let k = terminals.len();
    if minor.k != k || original.len() != k {
        return Err(Error::SizeMismatch(format!(
            "minor has {} vertices, table {} rows, {k} terminals",
            minor.k,
            original.len()
        )));
    }
    let in_minor = minor.distances()?;
    let mut table = vec![vec![1.0; k]; k];
    let mut best = (1.0, None);
    for i in 0..k {
        for j in 0..k {
            if i == j {
                continue;
            }
            let r = ratio(in_minor[i][j], original[i][j]);
            table[i][j] = r;
            if i < j && (r > best.0 || best.1.is_none()) {
                best = (r, Some((i, j)));
            }
        }
    }
    Ok(DistortionReport {
        max_distortion: best.0,
        argmax_pair: best.1,
        argmax_terminals: best.1.map(|(i, j)| (terminals.get(i), terminals.get(j))),
        per_pair: keep_table.then_some(table),
    })
}

/// An instance for the randomized engines.
#[derive(Debug, Clone)]
pub enum Instance {
    Metric { metric: MetricSpace, terminals: TerminalSet },
    Graph { graph: WeightedGraph, terminals: TerminalSet },
}

impl Instance {
    pub fn terminals(&self) -> &TerminalSet {
        match self {
            Instance::Metric { terminals, .. } | Instance::Graph { terminals, .. } => terminals,
        }
    }

    pub fn n(&self) -> usize {
        match self {
            Instance::Metric { metric, .. } => metric.n(),
            Instance::Graph { graph, .. } => graph.n(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EngineConfig {
    pub ordering: OrderingPolicy,
    pub magnitudes: MagnitudePolicy,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StretchOptions {
    pub trials: usize,
    pub pair_sample: usize,
    pub seed: u64,
    /// Validation of graphic partitions before they are used.
    pub validation: ValidationLevel,
}

impl Default for StretchOptions {
    fn default() -> Self {
        StretchOptions {
            trials: 100,
            pair_sample: DEFAULT_PAIR_SAMPLE,
            seed: 0,
            validation: ValidationLevel::Always,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairStretch {
    pub x: usize,
    pub y: usize,
    pub dist: f64,
    /// Mean over trials of `d(f(x), f(y))`.
    pub mean_image_dist: f64,
    /// `mean_image_dist / dist`.
    pub mean_stretch: f64,
    /// Variance over trials of `d(f(x), f(y)) / dist`.
    pub stretch_variance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StretchReport {
    pub pairs: Vec<PairStretch>,
    pub max_mean_stretch: f64,
    pub argmax_pair: Option<(usize, usize)>,
    pub trials: usize,
    pub seed: u64,
}

/// Pairs `(x, y)` with `x < y` and positive distance: all of them when
/// `n <= EXHAUSTIVE_PAIR_LIMIT`, otherwise a uniform sample without replacement.
fn metric_pairs(m: &MetricSpace, pair_sample: usize, seed: u64) -> Vec<(usize, usize)> {
    let n = m.n();
    let total = n * n.saturating_sub(1) / 2;
    let decode = |mut idx: usize| {
        // row x holds n-1-x pairs
        let mut x = 0;
        while idx >= n - 1 - x {
            idx -= n - 1 - x;
            x += 1;
        }
        (x, x + 1 + idx)
    };
    let mut pairs: Vec<(usize, usize)> = if n <= EXHAUSTIVE_PAIR_LIMIT || total <= pair_sample {
        (0..n).flat_map(|x| (x + 1..n).map(move |y| (x, y))).collect()
    } else {
        let mut rng = rng_for(derive_seed(seed, "pairs", 0));
        sample_indices(&mut rng, total, pair_sample).into_iter().map(decode).collect()
    };
    pairs.sort_unstable();
    pairs.retain(|&(x, y)| m.dist(x, y) > 0.0);
    pairs
}

/// Edges `{u, v}` with positive weight, sampled when there are too many.
fn edge_pairs(g: &WeightedGraph, pair_sample: usize, seed: u64) -> Vec<(usize, usize, f64)> {
    let edges: Vec<_> = g
        .edges()
        .iter()
        .filter(|e| e.w > 0.0)
        .map(|e| (e.u.min(e.v), e.u.max(e.v), e.w))
        .collect();
    if edges.len() <= pair_sample {
        return edges;
    }
    let mut rng = rng_for(derive_seed(seed, "pairs", 0));
    let mut picked: Vec<usize> = sample_indices(&mut rng, edges.len(), pair_sample).into_vec();
    picked.sort_unstable();
    picked.into_iter().map(|i| edges[i]).collect()
}

/// Estimates `max_{x,y} E[d(f(x), f(y))] / d(x, y)` over sampled pairs.
///
/// Metric instances run the metric engine and use metric pairs. Graph
/// instances run the graphic engine (connected clusters) and use graph edges,
/// which suffices by the triangle inequality. Trial `i` draws its magnitudes
/// from `derive_seed(seed, "magnitudes", i)`; trials may run in parallel and
/// are merged in index order.
pub fn expected_stretch(instance: &Instance, config: &EngineConfig, options: &StretchOptions) -> Result<StretchReport> {
    if options.trials == 0 {
        return Err(Error::Config("at least one trial is required".into()));
    }
    config.magnitudes.validate()?;
    let seed = options.seed;
    let k = instance.terminals().len();
    let draw = |trial: usize| config.magnitudes.sample(k, derive_seed(seed, "magnitudes", trial as u64));

    // images[trial][pair] = d(f(x), f(y))
    let (pairs, images): (Vec<(usize, usize, f64)>, Vec<Vec<f64>>) = match instance {
        Instance::Metric { metric, terminals } => {
            let pi = config.ordering.order_metric(metric, terminals)?;
            let pairs: Vec<_> = metric_pairs(metric, options.pair_sample, seed)
                .into_iter()
                .map(|(x, y)| (x, y, metric.dist(x, y)))
                .collect();
            let images = (0..options.trials)
                .into_par_iter()
                .map(|trial| {
                    let f = metric_relaxed_voronoi(metric, &pi, &draw(trial)?)?;
                    Ok(image_distances(&f, &pairs, |a, b| metric.dist(a, b)))
                })
                .collect::<Result<Vec<_>>>()?;
            (pairs, images)
        }
        Instance::Graph { graph, terminals } => {
            let pi = config.ordering.order_graph(graph, terminals)?;
            let engine = GraphicEngine::new(graph, &pi)?;
            let pairs = edge_pairs(graph, options.pair_sample, seed);
            let images = (0..options.trials)
                .into_par_iter()
                .map(|trial| {
                    let p = engine.run(&pi, &draw(trial)?, Frontier::Fifo)?;
                    if options.validation.enabled() {
                        p.validate(graph, &pi)?;
                    }
                    let f = p.to_retraction(&pi);
                    Ok(image_distances(&f, &pairs, |a, b| engine.row(a)[b]))
                })
                .collect::<Result<Vec<_>>>()?;
            (pairs, images)
        }
    };

    let trials = options.trials as f64;
    let mut report = StretchReport {
        pairs: Vec::with_capacity(pairs.len()),
        max_mean_stretch: 0.0,
        argmax_pair: None,
        trials: options.trials,
        seed,
    };
    for (p, &(x, y, dist)) in pairs.iter().enumerate() {
        let sum: f64 = images.iter().map(|trial| trial[p]).sum();
        let mean_image_dist = sum / trials;
        let mean_stretch = mean_image_dist / dist;
        // shifted by the first trial so that constant samples give exactly 0
        let shift = images[0][p] / dist;
        let (s1, s2) = images.iter().fold((0.0, 0.0), |(s1, s2), trial| {
            let dev = trial[p] / dist - shift;
            (s1 + dev, s2 + dev * dev)
        });
        let stretch_variance = ((s2 - s1 * s1 / trials) / trials).max(0.0);
        if report.argmax_pair.is_none() || mean_stretch > report.max_mean_stretch {
            report.max_mean_stretch = mean_stretch;
            report.argmax_pair = Some((x, y));
        }
        report.pairs.push(PairStretch { x, y, dist, mean_image_dist, mean_stretch, stretch_variance });
    }
    Ok(report)
}

fn image_distances(f: &Retraction, pairs: &[(usize, usize, f64)], dist: impl Fn(usize, usize) -> f64) -> Vec<f64> {
    pairs
        .iter()
        .map(|&(x, y, _)| {
            let (a, b) = (f.image(x), f.image(y));
            if a == b {
                0.0
            } else {
                dist(a, b)
            }
        })
        .collect()
}

/// Writes the per-pair table as CSV.
pub fn write_stretch_csv<W: std::io::Write>(report: &StretchReport, out: W) -> std::result::Result<(), csv::Error> {
    let mut writer = csv::Writer::from_writer(out);
    for pair in &report.pairs {
        writer.serialize(pair)?;
    }
    writer.flush()?;
    Ok(())
}
