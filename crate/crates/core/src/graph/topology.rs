//! Structural operations: dummy vertices, bridges, Eulerian cycles, doubling.

use std::collections::BTreeSet;

use super::{EdgeIx, EdgeRecord, MetricGraph, VertexCondition, VertexIx, VertexRecord};
use crate::error::{Error, Result};

/// The union of all non-bridge edges.
#[derive(Debug, Clone, PartialEq)]
pub struct DoublyConnectedPart {
    pub edges: BTreeSet<EdgeIx>,
    pub length: f64,
}

/// One directed pass along an edge of a walk.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Traversal {
    pub edge: EdgeIx,
    /// True when the edge is walked from its `from` end to its `to` end.
    pub forward: bool,
}

impl MetricGraph {
    /// Splits edge `e` at coordinate `s` by a new degree-2 standard vertex.
    /// The first half keeps the edge id; both halves keep the potential.
    pub fn insert_dummy_vertex(&self, e: EdgeIx, s: f64) -> Result<MetricGraph> {
        let old = self.edges().get(e.0).ok_or_else(|| Error::UnknownEdge(format!("#{}", e.0)))?;
        if !(s > 0.0 && s < old.length) {
            return Err(Error::SplitOutOfRange { edge: old.id.clone(), s, length: old.length });
        }
        let mut vertices = self.vertices().to_vec();
        let mid = VertexIx(vertices.len());
        vertices.push(VertexRecord {
            id: self.fresh_vertex_id(&format!("{}.mid", old.id)),
            condition: VertexCondition::Standard,
        });
        let first = EdgeRecord { to: mid, length: s, ..old.clone() };
        let second = EdgeRecord {
            id: self.fresh_edge_id(&format!("{}.b", old.id)),
            from: mid,
            length: old.length - s,
            ..old.clone()
        };
        let mut edges = self.edges().to_vec();
        edges[e.0] = first;
        edges.insert(e.0 + 1, second);
        MetricGraph::new(vertices, edges)
    }

    /// Repeatedly merges the two edges at every standard degree-2 vertex whose
    /// two distinct incident edges carry the same potential. Idempotent.
    pub fn remove_dummy_vertices(&self) -> MetricGraph {
        let mut g = self.clone();
        while let Some(next) = g.remove_one_dummy() {
            g = next;
        }
        g
    }

    fn remove_one_dummy(&self) -> Option<MetricGraph> {
        let deg = self.degrees();
        for v in self.vertex_ixs() {
            if deg[v.0] != 2 || !self.vertex(v).condition.is_standard() {
                continue;
            }
            let inc = self.incidences(v);
            let (i1, i2) = (inc[0], inc[1]);
            if i1.edge == i2.edge {
                continue;
            }
            let (e1, e2) = (self.edge(i1.edge), self.edge(i2.edge));
            if e1.potential != e2.potential {
                continue;
            }
            // Orient the merged edge: far end of e1 -> v -> far end of e2.
            let start = e1.other(v);
            let end = e2.other(v);
            let merged = EdgeRecord {
                id: e1.id.clone(),
                from: start,
                to: end,
                length: e1.length + e2.length,
                potential: e1.potential,
            };
            let mut edges: Vec<EdgeRecord> = Vec::with_capacity(self.edge_count() - 1);
            for (i, e) in self.edges().iter().enumerate() {
                if i == i1.edge.0 {
                    edges.push(merged.clone());
                } else if i != i2.edge.0 {
                    edges.push(e.clone());
                }
            }
            return Some(self.without_vertex(v, edges));
        }
        None
    }

    /// Removes vertex `v` (which must not be referenced by `edges`) and
    /// reindexes the edge endpoints.
    pub(crate) fn without_vertex(&self, v: VertexIx, edges: Vec<EdgeRecord>) -> MetricGraph {
        let remap = |u: VertexIx| if u.0 > v.0 { VertexIx(u.0 - 1) } else { u };
        let vertices: Vec<VertexRecord> = self
            .vertices()
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != v.0)
            .map(|(_, r)| r.clone())
            .collect();
        let edges = edges
            .into_iter()
            .map(|e| {
                debug_assert!(e.from != v && e.to != v);
                EdgeRecord { from: remap(e.from), to: remap(e.to), ..e }
            })
            .collect();
        MetricGraph::new(vertices, edges).expect("vertex removal keeps graph valid")
    }

    /// Bridges: non-loop edges whose removal disconnects their component.
    pub fn bridges(&self) -> BTreeSet<EdgeIx> {
        let n = self.vertex_count();
        let mut adjacency: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
        for (i, e) in self.edges().iter().enumerate() {
            if !e.is_loop() {
                adjacency[e.from.0].push((e.to.0, i));
                adjacency[e.to.0].push((e.from.0, i));
            }
        }
        let mut order = vec![usize::MAX; n];
        let mut low = vec![0; n];
        let mut bridges = BTreeSet::new();
        let mut counter = 0;
        for root in 0..n {
            if order[root] != usize::MAX {
                continue;
            }
            // Iterative DFS: (vertex, parent edge, next adjacency slot).
            let mut stack = vec![(root, usize::MAX, 0usize)];
            order[root] = counter;
            low[root] = counter;
            counter += 1;
            while let Some(&mut (u, parent_edge, ref mut slot)) = stack.last_mut() {
                if *slot < adjacency[u].len() {
                    let (w, eid) = adjacency[u][*slot];
                    *slot += 1;
                    if eid == parent_edge {
                        continue;
                    }
                    if order[w] == usize::MAX {
                        order[w] = counter;
                        low[w] = counter;
                        counter += 1;
                        stack.push((w, eid, 0));
                    } else {
                        low[u] = low[u].min(order[w]);
                    }
                } else {
                    stack.pop();
                    if let Some(&(p, _, _)) = stack.last() {
                        low[p] = low[p].min(low[u]);
                        if low[u] > order[p] {
                            bridges.insert(EdgeIx(parent_edge));
                        }
                    }
                }
            }
        }
        bridges
    }

    /// Edges lying on some cycle, with their total length.
    pub fn doubly_connected_part(&self) -> DoublyConnectedPart {
        let bridges = self.bridges();
        let edges: BTreeSet<EdgeIx> = self.edge_ixs().filter(|e| !bridges.contains(e)).collect();
        let length = edges.iter().map(|e| self.edge(*e).length).fold(0.0, |a, l| a + l);
        DoublyConnectedPart { edges, length }
    }

    /// Closed walk using every edge exactly once (Hierholzer).
    pub fn eulerian_cycle(&self) -> Result<Vec<Traversal>> {
        self.require_connected()?;
        let deg = self.degrees();
        if let Some(v) = self.vertex_ixs().find(|v| deg[v.0] % 2 == 1) {
            return Err(Error::OddDegree { vertex: self.vertex(v).id.clone(), degree: deg[v.0] });
        }
        let Some(start) = self.vertex_ixs().find(|v| deg[v.0] > 0) else {
            return Ok(Vec::new());
        };
        let incidences: Vec<Vec<EdgeIx>> =
            self.vertex_ixs().map(|v| self.incidences(v).into_iter().map(|i| i.edge).collect()).collect();
        let mut cursor = vec![0usize; self.vertex_count()];
        let mut used = vec![false; self.edge_count()];
        let mut stack: Vec<(VertexIx, Option<Traversal>)> = vec![(start, None)];
        let mut circuit = Vec::with_capacity(self.edge_count());
        while let Some(&(v, via)) = stack.last() {
            let list = &incidences[v.0];
            while cursor[v.0] < list.len() && used[list[cursor[v.0]].0] {
                cursor[v.0] += 1;
            }
            if cursor[v.0] < list.len() {
                let e = list[cursor[v.0]];
                used[e.0] = true;
                let rec = self.edge(e);
                let forward = rec.from == v;
                let next = if forward { rec.to } else { rec.from };
                stack.push((next, Some(Traversal { edge: e, forward })));
            } else {
                stack.pop();
                if let Some(t) = via {
                    circuit.push(t);
                }
            }
        }
        circuit.reverse();
        Ok(circuit)
    }

    /// Replaces every edge by two identical parallel copies.
    pub fn doubled(&self) -> MetricGraph {
        let mut edges = Vec::with_capacity(2 * self.edge_count());
        for e in self.edges() {
            edges.push(e.clone());
        }
        let taken: BTreeSet<String> = self.edges().iter().map(|e| e.id.clone()).collect();
        let mut used = taken.clone();
        for e in self.edges() {
            let mut id = format!("{}'", e.id);
            while used.contains(&id) {
                id.push('\'');
            }
            used.insert(id.clone());
            edges.push(EdgeRecord { id, ..e.clone() });
        }
        MetricGraph::new(self.vertices().to_vec(), edges).expect("doubling keeps graph valid")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{dumbbell, figure_eight, interval, loop_graph, path, star, three_star};

    #[test]
    fn dummy_split_interval() {
        let g = interval(1.0).insert_dummy_vertex(EdgeIx(0), 0.5).unwrap();
        assert_eq!(g.vertex_count(), 3);
        let lengths: Vec<f64> = g.edges().iter().map(|e| e.length).collect();
        assert_eq!(lengths, vec![0.5, 0.5]);
        assert!(interval(1.0).insert_dummy_vertex(EdgeIx(0), 1.0).is_err());
        assert!(interval(1.0).insert_dummy_vertex(EdgeIx(0), 0.0).is_err());
    }

    #[test]
    fn dummy_split_loop() {
        let g = loop_graph(1.0).insert_dummy_vertex(EdgeIx(0), 0.3).unwrap();
        assert_eq!(g.vertex_count(), 2);
        assert_eq!(g.edge_count(), 2);
        assert!((g.total_length() - 1.0).abs() < 1e-15);
        let back = g.remove_dummy_vertices();
        assert_eq!(back.edge_count(), 1);
        assert!(back.edge(EdgeIx(0)).is_loop());
    }

    #[test]
    fn remove_dummy_examples() {
        let p = path(&[0.5, 0.5]).remove_dummy_vertices();
        assert_eq!(p.edge_count(), 1);
        assert!((p.total_length() - 1.0).abs() < 1e-15);

        let guarded = path(&[0.5, 0.5]).with_conditions(|v, r| {
            if v.0 == 1 {
                VertexCondition::Dirichlet
            } else {
                r.condition
            }
        });
        assert_eq!(guarded.remove_dummy_vertices(), guarded);

        let star = three_star(1.0, 2.0, 3.0);
        assert_eq!(star.remove_dummy_vertices(), star);

        let unequal = path(&[0.5, 0.5]).with_potentials(|e, _| e.0 as f64).unwrap();
        assert_eq!(unequal.remove_dummy_vertices().edge_count(), 2);
    }

    #[test]
    fn remove_dummy_idempotent_on_cycle() {
        let g = crate::graph::cycle(&[0.2, 0.3, 0.5]).remove_dummy_vertices();
        assert_eq!(g.edge_count(), 1);
        assert_eq!(g.vertex_count(), 1);
        assert_eq!(g.remove_dummy_vertices(), g);
    }

    #[test]
    fn doubly_connected_examples() {
        assert!(three_star(1.0, 1.0, 1.0).doubly_connected_part().edges.is_empty());
        let d = dumbbell(1.0, 0.5);
        let part = d.doubly_connected_part();
        let handle = d.edge_ix("e2").unwrap();
        assert_eq!(part.edges.len(), 2);
        assert!(!part.edges.contains(&handle));
        assert!((part.length - 0.5).abs() < 1e-15);
        let lp = loop_graph(2.0).doubly_connected_part();
        assert_eq!(lp.edges.len(), 1);
        assert_eq!(lp.length, 2.0);
    }

    #[test]
    fn parallel_edges_are_not_bridges() {
        let g = crate::graph::pumpkin(&[1.0, 2.0]);
        assert!(g.bridges().is_empty());
    }

    #[test]
    fn euler_examples() {
        let lp = loop_graph(1.0).eulerian_cycle().unwrap();
        assert_eq!(lp.len(), 1);

        let doubled = three_star(1.0, 1.0, 1.0).doubled();
        assert!(doubled.degrees().iter().all(|d| d % 2 == 0));
        let walk = doubled.eulerian_cycle().unwrap();
        assert_eq!(walk.len(), 6);
        let len: f64 = walk.iter().map(|t| doubled.edge(t.edge).length).sum();
        assert!((len - 6.0).abs() < 1e-15);

        match three_star(1.0, 1.0, 1.0).eulerian_cycle() {
            Err(Error::OddDegree { vertex, .. }) => assert_eq!(vertex, "v1"),
            other => panic!("expected odd-degree refusal, got {other:?}"),
        }
    }

    fn assert_closed_walk(g: &MetricGraph, walk: &[Traversal]) {
        assert_eq!(walk.len(), g.edge_count());
        let mut seen = vec![false; g.edge_count()];
        let end = |t: &Traversal| {
            let e = g.edge(t.edge);
            if t.forward {
                (e.from, e.to)
            } else {
                (e.to, e.from)
            }
        };
        for w in walk.windows(2) {
            assert_eq!(end(&w[0]).1, end(&w[1]).0);
        }
        assert_eq!(end(walk.last().unwrap()).1, end(&walk[0]).0);
        for t in walk {
            assert!(!seen[t.edge.0]);
            seen[t.edge.0] = true;
        }
    }

    #[test]
    fn euler_walks_are_closed() {
        for g in [star(&[1.0, 2.0, 0.5, 0.3]).doubled(), figure_eight(1.0, 2.0), dumbbell(3.0, 1.0).doubled()] {
            let walk = g.eulerian_cycle().unwrap();
            assert_closed_walk(&g, &walk);
        }
    }
}
