//! Brute-force oracles shared by the integration tests. Nothing here calls
//! into the library's algorithms; only its plain data types are used.

#![allow(dead_code)]

use std::collections::BTreeSet;

use relaxed_voronoi::{Edge, InducedMinor, WeightedGraph};

/// All-pairs shortest paths by repeated relaxation over the edge list.
pub fn apsp(g: &WeightedGraph) -> Vec<Vec<f64>> {
    let n = g.n();
    let mut d = vec![vec![f64::INFINITY; n]; n];
    for (v, row) in d.iter_mut().enumerate() {
        row[v] = 0.0;
    }
    for e in g.edges() {
        d[e.u][e.v] = d[e.u][e.v].min(e.w);
        d[e.v][e.u] = d[e.v][e.u].min(e.w);
    }
    for z in 0..n {
        for x in 0..n {
            for y in 0..n {
                let via = d[x][z] + d[z][y];
                if via < d[x][y] {
                    d[x][y] = via;
                }
            }
        }
    }
    d
}

/// Distances on a tree as sums along the unique path, found by DFS.
pub fn tree_path_sums(g: &WeightedGraph, source: usize) -> Vec<f64> {
    let mut d = vec![f64::NAN; g.n()];
    d[source] = 0.0;
    let mut stack = vec![source];
    while let Some(u) = stack.pop() {
        for e in g.edges() {
            let other = if e.u == u { e.v } else if e.v == u { e.u } else { continue };
            if d[other].is_nan() {
                d[other] = d[u] + e.w;
                stack.push(other);
            }
        }
    }
    d
}

fn nearest_terminal(dist: &[Vec<f64>], terminals: &[usize], x: usize) -> f64 {
    terminals.iter().map(|&t| dist[t][x]).fold(f64::INFINITY, f64::min)
}

/// Metric Relaxed-Voronoi written directly from its definition. Returns the
/// image of every point.
pub fn metric_oracle(dist: &[Vec<f64>], pi: &[usize], r: &[f64]) -> Vec<usize> {
    let n = dist.len();
    let mut image: Vec<Option<usize>> = vec![None; n];
    for (j, &t) in pi.iter().enumerate() {
        for x in 0..n {
            if image[x].is_none() && dist[t][x] <= r[j] * nearest_terminal(dist, pi, x) {
                image[x] = Some(t);
            }
        }
    }
    image.into_iter().map(|i| i.expect("every point is claimed")).collect()
}

/// Plain Voronoi: nearest terminal, ties to the earliest in `pi`.
pub fn voronoi_oracle(dist: &[Vec<f64>], pi: &[usize]) -> Vec<usize> {
    (0..dist.len())
        .map(|x| {
            let best = nearest_terminal(dist, pi, x);
            *pi.iter().find(|&&t| dist[t][x] == best).unwrap()
        })
        .collect()
}

/// One cluster grown with explicit sets `N` and `U`. The "arbitrary" pick
/// takes the largest id in `N`, unlike the library's queue.
pub fn create_cluster_oracle(
    g: &WeightedGraph,
    dist: &[Vec<f64>],
    unclustered: &BTreeSet<usize>,
    t: usize,
    r: f64,
    d_k: &[f64],
) -> BTreeSet<usize> {
    let neighbours = |v: usize| -> Vec<usize> {
        g.edges()
            .iter()
            .filter_map(|e| if e.u == v { Some(e.v) } else if e.v == v { Some(e.u) } else { None })
            .collect()
    };
    let mut cluster = BTreeSet::from([t]);
    let mut rejected = BTreeSet::new();
    let mut frontier: BTreeSet<usize> = neighbours(t).into_iter().filter(|v| unclustered.contains(v)).collect();
    while let Some(v) = frontier.pop_last() {
        if dist[v][t] <= r * d_k[v] {
            cluster.insert(v);
            for u in neighbours(v) {
                if unclustered.contains(&u) && !rejected.contains(&u) && !cluster.contains(&u) {
                    frontier.insert(u);
                }
            }
        } else {
            rejected.insert(v);
        }
    }
    cluster
}

/// Graphic Relaxed-Voronoi from the pseudocode. Returns the owner of every
/// vertex as a position in `pi`.
pub fn graphic_oracle(g: &WeightedGraph, pi: &[usize], r: &[f64]) -> Vec<usize> {
    let dist = apsp(g);
    let d_k: Vec<f64> = (0..g.n()).map(|x| nearest_terminal(&dist, pi, x)).collect();
    let mut unclustered: BTreeSet<usize> = (0..g.n()).filter(|v| !pi.contains(v)).collect();
    let mut owner = vec![usize::MAX; g.n()];
    for (j, &t) in pi.iter().enumerate() {
        let cluster = create_cluster_oracle(g, &dist, &unclustered, t, r[j], &d_k);
        for v in cluster {
            unclustered.remove(&v);
            owner[v] = j;
        }
    }
    owner
}

/// All-pairs distances of a minor, by relaxation over its edge list.
pub fn minor_apsp(minor: &InducedMinor) -> Vec<Vec<f64>> {
    let edges = minor.edges.iter().map(|&(i, j, w)| Edge::new(i, j, w)).collect();
    apsp(&WeightedGraph::new(minor.k, edges).unwrap())
}

/// Minor domination: `d_M(t_i, t_j) >= d_G(t_i, t_j) - 1e-9` for every pair.
/// `original[i][j]` holds `d_G` between the terminals at positions i and j.
pub fn assert_dominates(minor: &InducedMinor, original: &[Vec<f64>]) {
    let dm = minor_apsp(minor);
    for i in 0..minor.k {
        for j in 0..minor.k {
            assert!(
                dm[i][j] >= original[i][j] - 1e-9,
                "minor shrinks pair ({i}, {j}): {} < {}",
                dm[i][j],
                original[i][j]
            );
        }
    }
}

/// Worst ratio `d_M / d_G` over terminal pairs, computed from scratch.
pub fn distortion_oracle(g: &WeightedGraph, pi: &[usize], minor: &InducedMinor) -> f64 {
    let dg = apsp(g);
    let dm = minor_apsp(minor);
    let mut worst = 1.0f64;
    for i in 0..pi.len() {
        for j in i + 1..pi.len() {
            worst = worst.max(dm[i][j] / dg[pi[i]][pi[j]]);
        }
    }
    worst
}
