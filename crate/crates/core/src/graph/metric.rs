//! Shortest-path distance and diameter on the metric structure.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use super::{EdgeIx, MetricGraph, VertexIx};
use crate::error::{Error, Result};

/// A point `coordinate in [0, length]` on an edge. Coordinates `0` and
/// `length` identify with the edge's endpoint vertices.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GraphPoint {
    pub edge: EdgeIx,
    pub coordinate: f64,
}

impl GraphPoint {
    pub fn new(g: &MetricGraph, edge: EdgeIx, coordinate: f64) -> Result<Self> {
        let e = g.edges().get(edge.0).ok_or_else(|| Error::UnknownEdge(format!("#{}", edge.0)))?;
        if !(coordinate >= 0.0 && coordinate <= e.length) {
            return Err(Error::PointOutOfRange {
                edge: e.id.clone(),
                coordinate,
                length: e.length,
            });
        }
        Ok(Self { edge, coordinate })
    }

    /// The point sitting on vertex `v`, expressed through one of its incident edges.
    pub fn at_vertex(g: &MetricGraph, v: VertexIx) -> Result<Self> {
        let inc = g
            .incidences(v)
            .into_iter()
            .next()
            .ok_or_else(|| Error::IsolatedVertex(g.vertex(v).id.clone()))?;
        let coordinate = match inc.end {
            super::End::From => 0.0,
            super::End::To => g.edge(inc.edge).length,
        };
        Ok(Self { edge: inc.edge, coordinate })
    }
}

#[derive(PartialEq)]
struct HeapItem(f64, usize);

impl Eq for HeapItem {}

impl PartialOrd for HeapItem {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for HeapItem {
    fn cmp(&self, other: &Self) -> Ordering {
        other.0.partial_cmp(&self.0).unwrap_or(Ordering::Equal).then(other.1.cmp(&self.1))
    }
}

impl MetricGraph {
    /// Dijkstra over vertices from several weighted sources.
    fn vertex_distances_from(&self, sources: &[(VertexIx, f64)]) -> Vec<f64> {
        let n = self.vertex_count();
        let mut adjacency: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
        for e in self.edges() {
            if !e.is_loop() {
                adjacency[e.from.0].push((e.to.0, e.length));
                adjacency[e.to.0].push((e.from.0, e.length));
            }
        }
        let mut dist = vec![f64::INFINITY; n];
        let mut heap = BinaryHeap::new();
        for &(v, d) in sources {
            if d < dist[v.0] {
                dist[v.0] = d;
                heap.push(HeapItem(d, v.0));
            }
        }
        while let Some(HeapItem(d, u)) = heap.pop() {
            if d > dist[u] {
                continue;
            }
            for &(w, len) in &adjacency[u] {
                let nd = d + len;
                if nd < dist[w] {
                    dist[w] = nd;
                    heap.push(HeapItem(nd, w));
                }
            }
        }
        dist
    }

    /// All-pairs vertex distances.
    pub fn vertex_distance_matrix(&self) -> Vec<Vec<f64>> {
        self.vertex_ixs().map(|v| self.vertex_distances_from(&[(v, 0.0)])).collect()
    }

    /// Length of a shortest path between two points. Points in different
    /// components are at distance `f64::INFINITY`.
    pub fn distance(&self, x: GraphPoint, y: GraphPoint) -> f64 {
        let ex = self.edge(x.edge);
        let dist = self.vertex_distances_from(&[(ex.from, x.coordinate), (ex.to, ex.length - x.coordinate)]);
        let ey = self.edge(y.edge);
        let mut best = (dist[ey.from.0] + y.coordinate).min(dist[ey.to.0] + ey.length - y.coordinate);
        if x.edge == y.edge {
            let direct = (x.coordinate - y.coordinate).abs();
            best = best.min(direct);
            if ex.is_loop() {
                best = best.min(ex.length - direct);
            }
        }
        best
    }

    /// Maximum distance between any two points of a connected graph.
    ///
    /// For a fixed pair of edges the distance is a concave piecewise-affine
    /// function of the two coordinates, so its maximum sits at a vertex of the
    /// arrangement formed by the domain boundary and the breaklines between
    /// affine pieces. Enumerating those vertices gives the exact diameter,
    /// including edge-interior maximizers on cycles.
    pub fn diameter(&self) -> Result<f64> {
        self.require_connected()?;
        let dm = self.vertex_distance_matrix();
        let mut best: f64 = 0.0;
        for (i, e) in self.edges().iter().enumerate() {
            for (j, f) in self.edges().iter().enumerate().skip(i) {
                let (a, b) = (e.from.0, e.to.0);
                let (c, d) = (f.from.0, f.to.0);
                let (le, lf) = (e.length, f.length);
                // z <= k + p*s + q*t
                let mut pieces = vec![
                    Affine { p: 1.0, q: 1.0, k: dm[a][c] },
                    Affine { p: 1.0, q: -1.0, k: dm[a][d] + lf },
                    Affine { p: -1.0, q: 1.0, k: le + dm[b][c] },
                    Affine { p: -1.0, q: -1.0, k: le + dm[b][d] + lf },
                ];
                let mut region = vec![
                    HalfPlane { p: -1.0, q: 0.0, k: 0.0 },
                    HalfPlane { p: 1.0, q: 0.0, k: le },
                    HalfPlane { p: 0.0, q: -1.0, k: 0.0 },
                    HalfPlane { p: 0.0, q: 1.0, k: lf },
                ];
                if i == j {
                    pieces.push(Affine { p: -1.0, q: 1.0, k: 0.0 });
                    region.push(HalfPlane { p: 1.0, q: -1.0, k: 0.0 });
                }
                best = best.max(max_concave_pl(&pieces, &region));
            }
        }
        Ok(best)
    }
}

/// `k + p*s + q*t`
#[derive(Debug, Clone, Copy)]
struct Affine {
    p: f64,
    q: f64,
    k: f64,
}

/// `p*s + q*t <= k`
#[derive(Debug, Clone, Copy)]
struct HalfPlane {
    p: f64,
    q: f64,
    k: f64,
}

fn max_concave_pl(pieces: &[Affine], region: &[HalfPlane]) -> f64 {
    // Lines as (p, q, k) meaning p*s + q*t = k.
    let mut lines: Vec<(f64, f64, f64)> = region.iter().map(|h| (h.p, h.q, h.k)).collect();
    for (i, u) in pieces.iter().enumerate() {
        for w in &pieces[i + 1..] {
            let (p, q, k) = (u.p - w.p, u.q - w.q, w.k - u.k);
            if p != 0.0 || q != 0.0 {
                lines.push((p, q, k));
            }
        }
    }
    let scale = region.iter().map(|h| h.k.abs()).fold(1.0, f64::max);
    let eps = 1e-12 * scale;
    let mut best = f64::NEG_INFINITY;
    for (i, &(p1, q1, k1)) in lines.iter().enumerate() {
        for &(p2, q2, k2) in &lines[i + 1..] {
            let det = p1 * q2 - p2 * q1;
            if det.abs() < 1e-14 {
                continue;
            }
            let s = (k1 * q2 - k2 * q1) / det;
            let t = (p1 * k2 - p2 * k1) / det;
            if region.iter().all(|h| h.p * s + h.q * t <= h.k + eps) {
                let z = pieces.iter().map(|a| a.k + a.p * s + a.q * t).fold(f64::INFINITY, f64::min);
                best = best.max(z);
            }
        }
    }
    best
}

/// Brute-force diameter over `samples + 1` equally spaced points per edge
/// (endpoints included). Converges to [`MetricGraph::diameter`] from below.
pub fn diameter_sampled(g: &MetricGraph, samples: usize) -> Result<f64> {
    g.require_connected()?;
    let samples = samples.max(1);
    let points: Vec<GraphPoint> = g
        .edge_ixs()
        .flat_map(|e| {
            let len = g.edge(e).length;
            (0..=samples).map(move |j| GraphPoint { edge: e, coordinate: len * j as f64 / samples as f64 })
        })
        .collect();
    let mut best: f64 = 0.0;
    for (i, &x) in points.iter().enumerate() {
        for &y in &points[i + 1..] {
            best = best.max(g.distance(x, y));
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{cycle, dumbbell, interval, loop_graph, pumpkin, three_star};

    fn pt(g: &MetricGraph, e: &str, s: f64) -> GraphPoint {
        GraphPoint::new(g, g.edge_ix(e).unwrap(), s).unwrap()
    }

    #[test]
    fn distance_examples() {
        let star = three_star(1.0, 1.0, 1.0);
        let x = pt(&star, "e1", 0.3);
        assert_eq!(star.distance(x, x), 0.0);
        let leaf1 = pt(&star, "e1", 0.0);
        let leaf2 = pt(&star, "e2", 0.0);
        assert!((star.distance(leaf1, leaf2) - 2.0).abs() < 1e-15);

        let lp = loop_graph(1.0);
        assert!((lp.distance(pt(&lp, "e1", 0.0), pt(&lp, "e1", 0.5)) - 0.5).abs() < 1e-15);
        assert!((lp.distance(pt(&lp, "e1", 0.1), pt(&lp, "e1", 0.9)) - 0.2).abs() < 1e-15);
    }

    #[test]
    fn distance_across_components_is_infinite() {
        let g = MetricGraph::from_json(
            r#"{"vertices":[{"id":"a","condition":"standard"},{"id":"b","condition":"standard"},
                            {"id":"c","condition":"standard"},{"id":"d","condition":"standard"}],
                "edges":[{"id":"e1","from":"a","to":"b","length":1},{"id":"e2","from":"c","to":"d","length":1}]}"#,
        )
        .unwrap();
        assert!(g.distance(pt(&g, "e1", 0.5), pt(&g, "e2", 0.5)).is_infinite());
    }

    #[test]
    fn point_out_of_range() {
        let g = interval(1.0);
        assert!(GraphPoint::new(&g, EdgeIx(0), 1.5).is_err());
    }

    #[test]
    fn diameter_examples() {
        assert!((interval(2.5).diameter().unwrap() - 2.5).abs() < 1e-14);
        assert!((three_star(1.0, 1.0, 1.0).diameter().unwrap() - 2.0).abs() < 1e-14);
        assert!((loop_graph(1.0).diameter().unwrap() - 0.5).abs() < 1e-14);
    }

    #[test]
    fn loop_diameter_matches_brute_force() {
        // Fine sampling oracle; the loop's maximizer is antipodal.
        let sampled = diameter_sampled(&loop_graph(1.0), 200).unwrap();
        assert!((sampled - 0.5).abs() < 1e-12);
    }

    #[test]
    fn interior_maximizers_found() {
        // Triangle with unequal sides and a pumpkin: maximizers are interior.
        for g in [cycle(&[0.3, 0.7, 1.1]), pumpkin(&[0.4, 1.3, 0.9]), dumbbell(2.0, 1.2)] {
            let exact = g.diameter().unwrap();
            let sampled = diameter_sampled(&g, 400).unwrap();
            assert!(sampled <= exact + 1e-12, "{sampled} > {exact}");
            assert!(exact - sampled < 1e-2, "{exact} vs {sampled}");
        }
        // A cycle of length L has diameter L/2.
        assert!((cycle(&[0.3, 0.7, 1.1]).diameter().unwrap() - 1.05).abs() < 1e-12);
    }
}
