//! Compact metric graphs.
//!
//! A [`MetricGraph`] is a finite multigraph (loops and parallel edges allowed)
//! whose edges are intervals `[0, length]` glued at their endpoint vertices.
//! Each vertex carries exactly one [`VertexCondition`] and each edge carries a
//! constant potential value. Graphs are immutable once validated; every
//! transformation returns a new graph.

mod families;
mod metric;
mod schema;
mod topology;

pub use families::*;
pub use metric::{diameter_sampled, GraphPoint};
pub use schema::{ConditionDoc, EdgeDoc, GraphDoc, VertexDoc};
pub use topology::{DoublyConnectedPart, Traversal};

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::union_find::UnionFind;

/// Index of a vertex inside its graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexIx(pub usize);

/// Index of an edge inside its graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeIx(pub usize);

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum VertexCondition {
    /// Continuity plus Kirchhoff (vanishing sum of inward derivatives).
    Standard,
    Dirichlet,
    /// Continuity plus a delta coupling; the form gains `alpha * f(v) * g(v)`.
    Robin(f64),
}

impl VertexCondition {
    pub fn is_standard(&self) -> bool {
        matches!(self, VertexCondition::Standard)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VertexRecord {
    pub id: String,
    pub condition: VertexCondition,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EdgeRecord {
    pub id: String,
    /// Vertex at local coordinate 0.
    pub from: VertexIx,
    /// Vertex at local coordinate `length`.
    pub to: VertexIx,
    pub length: f64,
    pub potential: f64,
}

impl EdgeRecord {
    pub fn is_loop(&self) -> bool {
        self.from == self.to
    }

    /// The endpoint opposite to `v`; for a loop this is `v` itself.
    pub fn other(&self, v: VertexIx) -> VertexIx {
        if self.from == v {
            self.to
        } else {
            self.from
        }
    }
}

/// Which end of an edge an incidence refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum End {
    From,
    To,
}

/// One edge-endpoint incidence at a vertex. A loop contributes two.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Incidence {
    pub edge: EdgeIx,
    pub end: End,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MetricGraph {
    vertices: Vec<VertexRecord>,
    edges: Vec<EdgeRecord>,
    vertex_lookup: HashMap<String, VertexIx>,
    edge_lookup: HashMap<String, EdgeIx>,
}

impl MetricGraph {
    /// Validates and builds a graph from vertex and edge records.
    pub fn new(vertices: Vec<VertexRecord>, edges: Vec<EdgeRecord>) -> Result<Self> {
        let mut vertex_lookup = HashMap::with_capacity(vertices.len());
        for (i, v) in vertices.iter().enumerate() {
            if v.id.is_empty() {
                return Err(Error::InvalidId("vertex ids must be nonempty".into()));
            }
            if let VertexCondition::Robin(alpha) = v.condition {
                if !alpha.is_finite() {
                    return Err(Error::MalformedCondition {
                        vertex: v.id.clone(),
                        reason: format!("Robin coefficient {alpha} is not finite"),
                    });
                }
            }
            if vertex_lookup.insert(v.id.clone(), VertexIx(i)).is_some() {
                return Err(Error::DuplicateId { kind: "vertex", id: v.id.clone() });
            }
        }
        let mut edge_lookup = HashMap::with_capacity(edges.len());
        for (i, e) in edges.iter().enumerate() {
            if e.id.is_empty() {
                return Err(Error::InvalidId("edge ids must be nonempty".into()));
            }
            if !(e.length.is_finite() && e.length > 0.0) {
                return Err(Error::NonPositiveLength { edge: e.id.clone(), length: e.length });
            }
            if !e.potential.is_finite() {
                return Err(Error::InvalidPotential { edge: e.id.clone(), potential: e.potential });
            }
            for end in [e.from, e.to] {
                if end.0 >= vertices.len() {
                    return Err(Error::DanglingEndpoint {
                        edge: e.id.clone(),
                        vertex: format!("#{}", end.0),
                    });
                }
            }
            if edge_lookup.insert(e.id.clone(), EdgeIx(i)).is_some() {
                return Err(Error::DuplicateId { kind: "edge", id: e.id.clone() });
            }
        }
        Ok(Self { vertices, edges, vertex_lookup, edge_lookup })
    }

    /// Parses and validates a JSON graph description.
    pub fn from_json(text: &str) -> Result<Self> {
        let doc: GraphDoc = serde_json::from_str(text)?;
        doc.build()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&GraphDoc::from_graph(self)).expect("graph serializes")
    }

    pub fn vertices(&self) -> &[VertexRecord] {
        &self.vertices
    }

    pub fn edges(&self) -> &[EdgeRecord] {
        &self.edges
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertex(&self, v: VertexIx) -> &VertexRecord {
        &self.vertices[v.0]
    }

    pub fn edge(&self, e: EdgeIx) -> &EdgeRecord {
        &self.edges[e.0]
    }

    pub fn vertex_ix(&self, id: &str) -> Result<VertexIx> {
        self.vertex_lookup
            .get(id)
            .copied()
            .ok_or_else(|| Error::UnknownVertex(id.to_string()))
    }

    pub fn edge_ix(&self, id: &str) -> Result<EdgeIx> {
        self.edge_lookup
            .get(id)
            .copied()
            .ok_or_else(|| Error::UnknownEdge(id.to_string()))
    }

    pub fn vertex_ixs(&self) -> impl Iterator<Item = VertexIx> {
        (0..self.vertices.len()).map(VertexIx)
    }

    pub fn edge_ixs(&self) -> impl Iterator<Item = EdgeIx> {
        (0..self.edges.len()).map(EdgeIx)
    }

    /// Number of edge-endpoint incidences at `v`; a loop counts twice.
    pub fn degree(&self, v: VertexIx) -> usize {
        self.edges
            .iter()
            .map(|e| usize::from(e.from == v) + usize::from(e.to == v))
            .sum()
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.vertices.len()];
        for e in &self.edges {
            deg[e.from.0] += 1;
            deg[e.to.0] += 1;
        }
        deg
    }

    pub fn incidences(&self, v: VertexIx) -> Vec<Incidence> {
        let mut out = Vec::new();
        for (i, e) in self.edges.iter().enumerate() {
            if e.from == v {
                out.push(Incidence { edge: EdgeIx(i), end: End::From });
            }
            if e.to == v {
                out.push(Incidence { edge: EdgeIx(i), end: End::To });
            }
        }
        out
    }

    /// Sum of all edge lengths.
    pub fn total_length(&self) -> f64 {
        self.edges.iter().map(|e| e.length).sum()
    }

    /// A graph without edges has no metric content.
    pub fn is_degenerate(&self) -> bool {
        self.edges.is_empty()
    }

    /// Connected component label of every vertex, plus the component count.
    pub fn components(&self) -> (Vec<usize>, usize) {
        let mut uf = UnionFind::new(self.vertices.len());
        for e in &self.edges {
            uf.union(e.from.0, e.to.0);
        }
        uf.labels()
    }

    pub fn component_count(&self) -> usize {
        self.components().1
    }

    pub fn is_connected(&self) -> bool {
        !self.vertices.is_empty() && self.component_count() == 1
    }

    pub fn require_connected(&self) -> Result<()> {
        if self.vertices.is_empty() {
            return Err(Error::EmptyGraph);
        }
        match self.component_count() {
            1 => Ok(()),
            components => Err(Error::Disconnected { components }),
        }
    }

    /// First Betti number `#E - #V + 1` of a connected graph.
    pub fn betti_number(&self) -> Result<usize> {
        self.require_connected()?;
        Ok(self.edges.len() + 1 - self.vertices.len())
    }

    pub fn is_tree(&self) -> bool {
        matches!(self.betti_number(), Ok(0))
    }

    pub fn all_standard(&self) -> bool {
        self.vertices.iter().all(|v| v.condition.is_standard())
    }

    pub fn zero_potential(&self) -> bool {
        self.edges.iter().all(|e| e.potential == 0.0)
    }

    pub fn has_dirichlet(&self) -> bool {
        self.vertices.iter().any(|v| v.condition == VertexCondition::Dirichlet)
    }

    /// Degree-one vertices.
    pub fn leaves(&self) -> Vec<VertexIx> {
        let deg = self.degrees();
        self.vertex_ixs().filter(|v| deg[v.0] == 1).collect()
    }

    /// An edge id not used in this graph, derived from `base`.
    pub fn fresh_edge_id(&self, base: &str) -> String {
        fresh_id(base, |s| self.edge_lookup.contains_key(s))
    }

    /// A vertex id not used in this graph, derived from `base`.
    pub fn fresh_vertex_id(&self, base: &str) -> String {
        fresh_id(base, |s| self.vertex_lookup.contains_key(s))
    }

    /// Same structure with every vertex condition replaced.
    pub fn with_conditions(&self, f: impl Fn(VertexIx, &VertexRecord) -> VertexCondition) -> Self {
        let vertices = self
            .vertices
            .iter()
            .enumerate()
            .map(|(i, v)| VertexRecord { id: v.id.clone(), condition: f(VertexIx(i), v) })
            .collect();
        Self::new(vertices, self.edges.clone()).expect("conditions stay valid")
    }

    /// Same structure with every edge potential replaced.
    pub fn with_potentials(&self, f: impl Fn(EdgeIx, &EdgeRecord) -> f64) -> Result<Self> {
        let edges = self
            .edges
            .iter()
            .enumerate()
            .map(|(i, e)| EdgeRecord { potential: f(EdgeIx(i), e), ..e.clone() })
            .collect();
        Self::new(self.vertices.clone(), edges)
    }

    /// Same structure with every edge length multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        let edges = self
            .edges
            .iter()
            .map(|e| EdgeRecord { length: e.length * factor, ..e.clone() })
            .collect();
        Self::new(self.vertices.clone(), edges)
    }

    /// Splits the graph into its connected components, each as its own graph.
    /// Isolated vertices become single-vertex components.
    pub fn split_components(&self) -> Vec<MetricGraph> {
        let (labels, count) = self.components();
        let mut parts: Vec<(Vec<VertexRecord>, Vec<EdgeRecord>, HashMap<usize, usize>)> =
            (0..count).map(|_| (Vec::new(), Vec::new(), HashMap::new())).collect();
        for (i, v) in self.vertices.iter().enumerate() {
            let part = &mut parts[labels[i]];
            part.2.insert(i, part.0.len());
            part.0.push(v.clone());
        }
        for e in &self.edges {
            let part = &mut parts[labels[e.from.0]];
            let from = VertexIx(part.2[&e.from.0]);
            let to = VertexIx(part.2[&e.to.0]);
            part.1.push(EdgeRecord { from, to, ..e.clone() });
        }
        parts
            .into_iter()
            .map(|(v, e, _)| MetricGraph::new(v, e).expect("component of a valid graph"))
            .collect()
    }

    /// Canonical description independent of record order, used to compare
    /// graphs up to relabeling of records: sorted `(edge id, endpoint ids, length)`.
    pub fn canonical_edges(&self) -> Vec<(String, String, String, f64)> {
        let mut out: Vec<_> = self
            .edges
            .iter()
            .map(|e| {
                let mut a = self.vertices[e.from.0].id.clone();
                let mut b = self.vertices[e.to.0].id.clone();
                if b < a {
                    std::mem::swap(&mut a, &mut b);
                }
                (e.id.clone(), a, b, e.length)
            })
            .collect();
        out.sort_by(|x, y| x.partial_cmp(y).expect("finite lengths"));
        out
    }
}

fn fresh_id(base: &str, taken: impl Fn(&str) -> bool) -> String {
    if !taken(base) {
        return base.to_string();
    }
    (1..)
        .map(|i| format!("{base}.{i}"))
        .find(|s| !taken(s))
        .expect("unbounded suffix search")
}
