//! Constructors for the named graph families. All vertices carry standard
//! conditions and all potentials are zero.
//!
//! Vertex ids are `v1, v2, ...` and edge ids `e1, e2, ...` in construction order.

use super::{EdgeRecord, MetricGraph, VertexCondition, VertexIx, VertexRecord};

fn standard_vertices(n: usize) -> Vec<VertexRecord> {
    (1..=n)
        .map(|i| VertexRecord { id: format!("v{i}"), condition: VertexCondition::Standard })
        .collect()
}

fn edge(i: usize, from: usize, to: usize, length: f64) -> EdgeRecord {
    EdgeRecord {
        id: format!("e{}", i + 1),
        from: VertexIx(from),
        to: VertexIx(to),
        length,
        potential: 0.0,
    }
}

fn build(vertices: usize, edges: Vec<EdgeRecord>) -> MetricGraph {
    MetricGraph::new(standard_vertices(vertices), edges).expect("family lengths must be positive")
}

/// A single edge `v1 -- v2`.
pub fn interval(length: f64) -> MetricGraph {
    path(&[length])
}

/// Edges in sequence `v1 -- v2 -- ... -- v(m+1)`.
pub fn path(lengths: &[f64]) -> MetricGraph {
    let edges = lengths.iter().enumerate().map(|(i, &l)| edge(i, i, i + 1, l)).collect();
    build(lengths.len() + 1, edges)
}

/// One vertex with one loop edge.
pub fn loop_graph(length: f64) -> MetricGraph {
    flower(&[length])
}

/// Polygon `v1 -- v2 -- ... -- vm -- v1`.
pub fn cycle(lengths: &[f64]) -> MetricGraph {
    let m = lengths.len();
    let edges = lengths.iter().enumerate().map(|(i, &l)| edge(i, i, (i + 1) % m, l)).collect();
    build(m, edges)
}

/// Star with leaves `v1..vm` and centre `v(m+1)`; edge `ek` runs from `vk` to the centre.
pub fn star(lengths: &[f64]) -> MetricGraph {
    let m = lengths.len();
    let edges = lengths.iter().enumerate().map(|(i, &l)| edge(i, i, m, l)).collect();
    build(m + 1, edges)
}

pub fn three_star(l1: f64, l2: f64, l3: f64) -> MetricGraph {
    star(&[l1, l2, l3])
}

/// `m` edges of length `total / m` meeting at a centre.
pub fn equilateral_star(m: usize, total: f64) -> MetricGraph {
    star(&vec![total / m as f64; m])
}

/// One vertex carrying a loop of each given length.
pub fn flower(lengths: &[f64]) -> MetricGraph {
    let edges = lengths.iter().enumerate().map(|(i, &l)| edge(i, 0, 0, l)).collect();
    build(1, edges)
}

pub fn equilateral_flower(m: usize, total: f64) -> MetricGraph {
    flower(&vec![total / m as f64; m])
}

pub fn figure_eight(l1: f64, l2: f64) -> MetricGraph {
    flower(&[l1, l2])
}

/// Parallel edges between `v1` and `v2`.
pub fn pumpkin(lengths: &[f64]) -> MetricGraph {
    let edges = lengths.iter().enumerate().map(|(i, &l)| edge(i, 0, 1, l)).collect();
    build(2, edges)
}

/// Symmetric dumbbell of total length `total` whose two loops have length
/// `loops / 2` each, joined by a handle of length `total - loops`. The
/// endpoints degenerate to an interval (`loops == 0`) and a figure-8
/// (`loops == total`).
pub fn dumbbell(total: f64, loops: f64) -> MetricGraph {
    if loops <= 0.0 {
        return interval(total);
    }
    if loops >= total {
        return figure_eight(total / 2.0, total / 2.0);
    }
    let half = loops / 2.0;
    build(2, vec![edge(0, 0, 0, half), edge(1, 0, 1, total - loops), edge(2, 1, 1, half)])
}
