//! Piecewise-linear assembly of the form
//! `a(f, g) = ∫ f'g' + q f g dx + Σ_{Robin v} α f(v) g(v)` against the
//! `L²` mass form on `H¹(Γ)`, with Dirichlet vertices eliminated.
//!
//! Degrees of freedom are numbered vertices first, then the interior mesh
//! nodes of each edge as one contiguous block per edge. The solver relies on
//! this layout: interior nodes of an edge couple only to each other and to the
//! (at most two) endpoint vertex dofs.

use std::ops::Range;

use super::sparse::CsrMatrix;
use crate::error::{Error, Result};
use crate::graph::{EdgeIx, MetricGraph, VertexCondition};

/// Every edge receives at least this many elements.
pub const MIN_ELEMENTS_PER_EDGE: usize = 2;

const MAX_TOTAL_ELEMENTS: f64 = 2.0e7;

#[derive(Debug, Clone, PartialEq)]
pub struct EdgeMesh {
    pub edge: EdgeIx,
    pub edge_id: String,
    pub length: f64,
    pub elements: usize,
    /// Global dof of every mesh node `0..=elements`; `None` at Dirichlet vertices.
    pub node_dofs: Vec<Option<usize>>,
    /// Global dofs of the interior nodes `1..elements`.
    pub interior: Range<usize>,
}

impl EdgeMesh {
    pub fn element_length(&self) -> f64 {
        self.length / self.elements as f64
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DofMap {
    /// Global dof shared by all mesh nodes at each vertex; `None` when Dirichlet.
    pub vertex_dofs: Vec<Option<usize>>,
    pub free_vertex_dofs: usize,
    pub edges: Vec<EdgeMesh>,
    pub dof_count: usize,
}

impl DofMap {
    pub fn dof_of(&self, edge: EdgeIx, node: usize) -> Option<usize> {
        self.edges[edge.0].node_dofs[node]
    }
}

#[derive(Debug, Clone)]
pub struct DiscreteSystem {
    pub dof_map: DofMap,
    pub stiffness: CsrMatrix,
    pub mass: CsrMatrix,
    /// Largest element length.
    pub mesh_size: f64,
    pub all_standard: bool,
    pub zero_potential: bool,
    pub total_length: f64,
    pub min_potential: f64,
}

impl DiscreteSystem {
    pub fn dof_count(&self) -> usize {
        self.dof_map.dof_count
    }
}

/// `min(1e-3 * L, min edge length / 8)`.
pub fn default_mesh_size(g: &MetricGraph) -> f64 {
    let min_edge = g.edges().iter().map(|e| e.length).fold(f64::INFINITY, f64::min);
    (1e-3 * g.total_length()).min(min_edge / 8.0)
}

/// `ceil(length / h_max)` elements per edge, at least [`MIN_ELEMENTS_PER_EDGE`].
pub fn element_counts(g: &MetricGraph, h_max: f64) -> Result<Vec<usize>> {
    if !(h_max.is_finite() && h_max > 0.0) {
        return Err(Error::InvalidMeshSize(h_max));
    }
    let mut total = 0.0;
    g.edges()
        .iter()
        .map(|e| {
            let raw = e.length / h_max;
            // Guard against ceil(2.0000000000000004) = 3 from rounding.
            let count = (raw * (1.0 - 1e-12)).ceil();
            total += count;
            if !count.is_finite() || count > MAX_TOTAL_ELEMENTS || total > MAX_TOTAL_ELEMENTS {
                return Err(Error::MeshTooFine { edge: e.id.clone(), elements: count });
            }
            let elements = (count as usize).max(MIN_ELEMENTS_PER_EDGE);
            if e.length / elements as f64 <= f64::EPSILON * e.length {
                return Err(Error::MeshTooFine { edge: e.id.clone(), elements: count });
            }
            Ok(elements)
        })
        .collect()
}

/// Meshes every edge uniformly with `ceil(length / h_max)` elements and assembles.
pub fn discretize(g: &MetricGraph, h_max: f64) -> Result<DiscreteSystem> {
    let counts = element_counts(g, h_max)?;
    discretize_with_counts(g, &counts)
}

/// Assembles with an explicit element count per edge.
pub fn discretize_with_counts(g: &MetricGraph, counts: &[usize]) -> Result<DiscreteSystem> {
    g.require_connected()?;
    if counts.len() != g.edge_count() {
        return Err(Error::ShapeMismatch(format!(
            "{} element counts for {} edges",
            counts.len(),
            g.edge_count()
        )));
    }
    if g.is_degenerate() {
        return Err(Error::InvalidParameter("graph has no edges to mesh".into()));
    }
    let mut vertex_dofs = Vec::with_capacity(g.vertex_count());
    let mut next = 0;
    for v in g.vertices() {
        if v.condition == VertexCondition::Dirichlet {
            vertex_dofs.push(None);
        } else {
            vertex_dofs.push(Some(next));
            next += 1;
        }
    }
    let free_vertex_dofs = next;
    let mut edges = Vec::with_capacity(g.edge_count());
    for (i, (e, &elements)) in g.edges().iter().zip(counts).enumerate() {
        if elements < MIN_ELEMENTS_PER_EDGE {
            return Err(Error::InvalidParameter(format!(
                "edge `{}` needs at least {MIN_ELEMENTS_PER_EDGE} elements",
                e.id
            )));
        }
        let interior = next..next + elements - 1;
        next += elements - 1;
        let mut node_dofs = Vec::with_capacity(elements + 1);
        node_dofs.push(vertex_dofs[e.from.0]);
        node_dofs.extend(interior.clone().map(Some));
        node_dofs.push(vertex_dofs[e.to.0]);
        edges.push(EdgeMesh {
            edge: EdgeIx(i),
            edge_id: e.id.clone(),
            length: e.length,
            elements,
            node_dofs,
            interior,
        });
    }
    let n = next;

    // Both matrices get an entry at every element coupling so they share a pattern.
    let mut k_trip = Vec::with_capacity(4 * n + 8);
    let mut m_trip = Vec::with_capacity(4 * n + 8);
    let mut mesh_size: f64 = 0.0;
    for (mesh, e) in edges.iter().zip(g.edges()) {
        let h = mesh.element_length();
        mesh_size = mesh_size.max(h);
        let stiff = 1.0 / h;
        let mass_diag = h / 3.0;
        let mass_off = h / 6.0;
        for el in 0..mesh.elements {
            let (a, b) = (mesh.node_dofs[el], mesh.node_dofs[el + 1]);
            for (p, q, s, m) in [
                (a, a, stiff, mass_diag),
                (b, b, stiff, mass_diag),
                (a, b, -stiff, mass_off),
                (b, a, -stiff, mass_off),
            ] {
                if let (Some(p), Some(q)) = (p, q) {
                    k_trip.push((p, q, s + e.potential * m));
                    m_trip.push((p, q, m));
                }
            }
        }
    }
    for (v, dof) in g.vertices().iter().zip(&vertex_dofs) {
        if let (VertexCondition::Robin(alpha), Some(d)) = (v.condition, dof) {
            k_trip.push((*d, *d, alpha));
            m_trip.push((*d, *d, 0.0));
        }
    }
    let stiffness = CsrMatrix::from_triplets(n, k_trip);
    let mass = CsrMatrix::from_triplets(n, m_trip);
    Ok(DiscreteSystem {
        dof_map: DofMap { vertex_dofs, free_vertex_dofs, edges, dof_count: n },
        stiffness,
        mass,
        mesh_size,
        all_standard: g.all_standard(),
        zero_potential: g.zero_potential(),
        total_length: g.total_length(),
        min_potential: g.edges().iter().map(|e| e.potential).fold(f64::INFINITY, f64::min),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{interval, loop_graph, three_star};

    #[test]
    fn interval_two_elements() {
        let sys = discretize(&interval(1.0), 0.5).unwrap();
        assert_eq!(sys.dof_count(), 3);
        assert_eq!(sys.dof_map.edges[0].elements, 2);
        // Vertex dofs 0, 1; interior node 2. Stiffness 1/h = 2.
        let k = sys.stiffness.to_dense();
        assert_eq!(k[(0, 0)], 2.0);
        assert_eq!(k[(1, 1)], 2.0);
        assert_eq!(k[(2, 2)], 4.0);
        assert_eq!(k[(0, 2)], -2.0);
        assert_eq!(k[(1, 2)], -2.0);
        assert_eq!(k[(0, 1)], 0.0);
        assert!(sys.stiffness.is_symmetric(0.0) && sys.mass.is_symmetric(0.0));
    }

    #[test]
    fn dirichlet_ends_eliminated() {
        let g = interval(1.0).with_conditions(|_, _| VertexCondition::Dirichlet);
        let sys = discretize(&g, 0.5).unwrap();
        assert_eq!(sys.dof_count(), 1);
        assert_eq!(sys.stiffness.get(0, 0), 4.0);
    }

    #[test]
    fn loop_identifies_endpoints() {
        let sys = discretize(&loop_graph(1.0), 0.25).unwrap();
        assert_eq!(sys.dof_map.edges[0].elements, 4);
        assert_eq!(sys.dof_count(), 4);
        let mesh = &sys.dof_map.edges[0];
        assert_eq!(mesh.node_dofs[0], mesh.node_dofs[4]);
    }

    #[test]
    fn minimum_two_elements_and_errors() {
        let sys = discretize(&three_star(1.0, 1.0, 1.0), 10.0).unwrap();
        assert!(sys.dof_map.edges.iter().all(|m| m.elements == 2));
        assert!(matches!(discretize(&interval(1.0), 0.0), Err(Error::InvalidMeshSize(_))));
        assert!(matches!(discretize(&interval(1.0), -1.0), Err(Error::InvalidMeshSize(_))));
        assert!(matches!(discretize(&interval(1.0), 1e-12), Err(Error::MeshTooFine { .. })));
    }

    #[test]
    fn constant_in_kernel_and_mass_integrates_length() {
        let g = three_star(0.7, 1.1, 1.6);
        let sys = discretize(&g, 0.05).unwrap();
        let ones = vec![1.0; sys.dof_count()];
        let mut y = vec![0.0; sys.dof_count()];
        sys.stiffness.mul_vec(&ones, &mut y);
        assert!(y.iter().all(|v| v.abs() < 1e-12));
        assert!((sys.mass.quadratic_form(&ones) - g.total_length()).abs() < 1e-12);
    }

    #[test]
    fn robin_and_potential_terms() {
        let g = interval(1.0)
            .with_conditions(|v, _| if v.0 == 0 { VertexCondition::Robin(3.0) } else { VertexCondition::Standard })
            .with_potentials(|_, _| 2.0)
            .unwrap();
        let sys = discretize(&g, 0.5).unwrap();
        let ones = vec![1.0; sys.dof_count()];
        // a(1, 1) = ∫ q + α = 2 + 3.
        assert!((sys.stiffness.quadratic_form(&ones) - 5.0).abs() < 1e-12);
    }
}
