//! Seeded random graphs and surgeries for property sweeps.
//!
//! Instance `i` of a sweep with master seed `s` draws from
//! `ChaCha8Rng::seed_from_u64(s)` on stream `i`, so instances are independent
//! of each other and of the order in which they are generated.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::{EdgeRecord, GraphDoc, MetricGraph, VertexCondition, VertexIx, VertexRecord};
use crate::surgery::{IncidenceRef, SurgeryOp};

pub const DEFAULT_SEED: u64 = 1729;

pub fn instance_rng(master: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master);
    rng.set_stream(index);
    rng
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RandomGraphOptions {
    pub max_vertices: usize,
    pub max_edges: usize,
    pub min_length: f64,
    pub max_length: f64,
    pub allow_loops: bool,
}

impl Default for RandomGraphOptions {
    fn default() -> Self {
        Self { max_vertices: 6, max_edges: 9, min_length: 0.2, max_length: 2.0, allow_loops: true }
    }
}

/// Log-uniform in `[lo, hi]`.
pub fn log_uniform(rng: &mut impl Rng, lo: f64, hi: f64) -> f64 {
    (rng.gen_range(lo.ln()..=hi.ln())).exp()
}

fn assemble(n: usize, pairs: &[(usize, usize)], rng: &mut impl Rng, opts: &RandomGraphOptions) -> MetricGraph {
    let vertices = (1..=n).map(|i| VertexRecord { id: format!("v{i}"), condition: VertexCondition::Standard }).collect();
    let edges = pairs
        .iter()
        .enumerate()
        .map(|(i, &(a, b))| EdgeRecord {
            id: format!("e{}", i + 1),
            from: VertexIx(a),
            to: VertexIx(b),
            length: log_uniform(rng, opts.min_length, opts.max_length),
            potential: 0.0,
        })
        .collect();
    MetricGraph::new(vertices, edges).expect("random lengths are positive")
}

fn spanning_tree(n: usize, rng: &mut impl Rng) -> Vec<(usize, usize)> {
    (1..n).map(|i| (rng.gen_range(0..i), i)).collect()
}

/// A connected graph with standard conditions. Loops and parallel edges may occur.
pub fn random_graph(rng: &mut impl Rng, opts: &RandomGraphOptions) -> MetricGraph {
    let n = rng.gen_range(1..=opts.max_vertices);
    let min_edges = (n - 1).max(1);
    let m = rng.gen_range(min_edges..=opts.max_edges.max(min_edges));
    let mut pairs = spanning_tree(n, rng);
    while pairs.len() < m {
        let a = rng.gen_range(0..n);
        let b = rng.gen_range(0..n);
        if a == b && !opts.allow_loops {
            if n == 1 {
                break;
            }
            continue;
        }
        pairs.push((a, b));
    }
    if pairs.is_empty() {
        // One vertex and no loops allowed: fall back to an interval.
        return assemble(2, &[(0, 1)], rng, opts);
    }
    assemble(n, &pairs, rng, opts)
}

/// A random tree with at least one edge.
pub fn random_tree(rng: &mut impl Rng, opts: &RandomGraphOptions) -> MetricGraph {
    let n = rng.gen_range(2..=opts.max_vertices.max(2));
    let pairs = spanning_tree(n, rng);
    assemble(n, &pairs, rng, opts)
}

/// A cut of a random vertex of degree at least 2 into `2..=deg` nonempty groups.
pub fn random_cut(g: &MetricGraph, rng: &mut impl Rng) -> Option<SurgeryOp> {
    let candidates: Vec<VertexIx> = g.vertex_ixs().filter(|&v| g.degree(v) >= 2).collect();
    let &v = candidates.choose(rng)?;
    let mut incs = g.incidences(v);
    incs.shuffle(rng);
    let p = rng.gen_range(2..=incs.len());
    let mut groups: Vec<Vec<IncidenceRef>> = vec![Vec::new(); p];
    for (i, inc) in incs.iter().enumerate() {
        // The first p incidences seed the groups, the rest go anywhere.
        let gi = if i < p { i } else { rng.gen_range(0..p) };
        groups[gi].push(IncidenceRef { edge: g.edge(inc.edge).id.clone(), end: inc.end });
    }
    Some(SurgeryOp::CutVertex { vertex: g.vertex(v).id.clone(), groups })
}

/// Attaches a small random tree or loop at a random vertex.
pub fn random_pendant_attachment(g: &MetricGraph, rng: &mut impl Rng, opts: &RandomGraphOptions) -> SurgeryOp {
    let host = g.vertices()[rng.gen_range(0..g.vertex_count())].id.clone();
    let small = RandomGraphOptions { max_vertices: 3, max_edges: 3, ..*opts };
    let pendant = if rng.gen_bool(0.25) { random_graph(rng, &small) } else { random_tree(rng, &small) };
    let attach = pendant.vertices()[rng.gen_range(0..pendant.vertex_count())].id.clone();
    SurgeryOp::AttachPendant { host, pendant: GraphDoc::from_graph(&pendant), attach }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surgery::apply;

    #[test]
    fn deterministic_per_instance() {
        let opts = RandomGraphOptions::default();
        let a = random_graph(&mut instance_rng(7, 3), &opts);
        let b = random_graph(&mut instance_rng(7, 3), &opts);
        assert_eq!(a.to_json(), b.to_json());
        assert_ne!(a.to_json(), random_graph(&mut instance_rng(7, 4), &opts).to_json());
    }

    #[test]
    fn generated_graphs_respect_limits() {
        let opts = RandomGraphOptions::default();
        for i in 0..200 {
            let mut rng = instance_rng(1, i);
            let g = random_graph(&mut rng, &opts);
            assert!(g.is_connected() && g.vertex_count() <= 6 && g.edge_count() <= 9);
            assert!(g.edges().iter().all(|e| (0.2..=2.0).contains(&e.length)));
            let t = random_tree(&mut rng, &opts);
            assert!(t.is_tree());
            if let Some(op) = random_cut(&g, &mut rng) {
                apply(&g, &op).unwrap();
            }
            let op = random_pendant_attachment(&g, &mut rng, &opts);
            let (big, _) = apply(&g, &op).unwrap();
            assert!(big.is_connected());
        }
    }
}
