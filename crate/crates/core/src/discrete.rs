//! The combinatorial graph under a metric graph and its Laplacian `L = D - A`.
//!
//! A loop adds 2 to its vertex's degree and nothing off the diagonal of `A`,
//! so `L` stays positive semidefinite. Parallel edges accumulate in `A`.

use nalgebra::{DMatrix, SymmetricEigen};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::MetricGraph;
use crate::report::fmt12;

/// Residual tolerance for `Lu = 0`.
pub const MEAN_VALUE_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiscreteGraph {
    pub vertex_ids: Vec<String>,
    /// Row-major `n × n` adjacency counts.
    pub adjacency: Vec<Vec<u32>>,
    pub degrees: Vec<u32>,
}

impl DiscreteGraph {
    pub fn from_metric(g: &MetricGraph) -> Self {
        let n = g.vertex_count();
        let mut adjacency = vec![vec![0u32; n]; n];
        let mut degrees = vec![0u32; n];
        for e in g.edges() {
            let (a, b) = (e.from.0, e.to.0);
            degrees[a] += 1;
            degrees[b] += 1;
            if a != b {
                adjacency[a][b] += 1;
                adjacency[b][a] += 1;
            }
        }
        Self { vertex_ids: g.vertices().iter().map(|v| v.id.clone()).collect(), adjacency, degrees }
    }

    pub fn len(&self) -> usize {
        self.degrees.len()
    }

    pub fn is_empty(&self) -> bool {
        self.degrees.is_empty()
    }

    pub fn laplacian(&self) -> DMatrix<f64> {
        let n = self.len();
        DMatrix::from_fn(n, n, |i, j| {
            let d = if i == j { self.degrees[i] as f64 } else { 0.0 };
            d - self.adjacency[i][j] as f64
        })
    }

    /// Writes `Lu` into the returned vector.
    pub fn apply_laplacian(&self, u: &[f64]) -> Vec<f64> {
        (0..self.len())
            .map(|i| self.degrees[i] as f64 * u[i] - self.adjacency[i].iter().zip(u).map(|(&a, x)| a as f64 * x).sum::<f64>())
            .collect()
    }

    fn matrix_csv(&self, entry: impl Fn(usize, usize) -> f64) -> String {
        let n = self.len();
        let mut s = format!("n,{n}\n");
        for i in 0..n {
            let row: Vec<String> = (0..n).map(|j| fmt12(entry(i, j))).collect();
            s.push_str(&row.join(","));
            s.push('\n');
        }
        s
    }

    pub fn adjacency_csv(&self) -> String {
        self.matrix_csv(|i, j| self.adjacency[i][j] as f64)
    }

    pub fn laplacian_csv(&self) -> String {
        let l = self.laplacian();
        self.matrix_csv(|i, j| l[(i, j)])
    }
}

/// Eigenvalues of `D - A`, ascending.
pub fn discrete_spectrum(dg: &DiscreteGraph) -> Vec<f64> {
    if dg.is_empty() {
        return Vec::new();
    }
    let mut ev: Vec<f64> = SymmetricEigen::new(dg.laplacian()).eigenvalues.iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev
}

pub fn spectrum_csv(values: &[f64]) -> String {
    let mut s = String::from("index,eigenvalue\n");
    for (i, v) in values.iter().enumerate() {
        s.push_str(&format!("{},{}\n", i + 1, fmt12(*v)));
    }
    s
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MeanValueVertex {
    pub vertex_id: String,
    /// `(Lu)_i`.
    pub laplacian_residual: f64,
    /// `u_i - (1/deg) Σ_{j ∼ i, j ≠ i} u_j`.
    pub mean_value_residual: f64,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MeanValueCheck {
    /// `Lu = 0` within [`MEAN_VALUE_TOLERANCE`].
    pub harmonic: bool,
    /// The mean value property at every vertex, checked independently.
    pub mean_value: bool,
    pub vertices: Vec<MeanValueVertex>,
}

/// Checks `Lu = 0` and the mean value property vertex by vertex.
///
/// The neighbour sum skips self-terms but the divisor is the full degree
/// (loops counted twice), which makes the two conditions equivalent.
pub fn mean_value_check(dg: &DiscreteGraph, u: &[f64]) -> Result<MeanValueCheck> {
    let n = dg.len();
    if u.len() != n {
        return Err(Error::ShapeMismatch(format!("vector of length {} for {n} vertices", u.len())));
    }
    if let Some(i) = dg.degrees.iter().position(|&d| d == 0) {
        return Err(Error::IsolatedVertex(dg.vertex_ids[i].clone()));
    }
    let scale = u.iter().fold(0.0_f64, |m, x| m.max(x.abs())).max(1.0);
    let lu = dg.apply_laplacian(u);
    let mut vertices = Vec::with_capacity(n);
    for i in 0..n {
        let deg = dg.degrees[i] as f64;
        let mean_residual = u[i] - dg.adjacency[i].iter().zip(u).map(|(&a, x)| a as f64 * x).sum::<f64>() / deg;
        let tol = MEAN_VALUE_TOLERANCE * scale;
        vertices.push(MeanValueVertex {
            vertex_id: dg.vertex_ids[i].clone(),
            laplacian_residual: lu[i],
            mean_value_residual: mean_residual,
            holds: lu[i].abs() <= tol * dg.degrees[i] as f64 && mean_residual.abs() <= tol,
        });
    }
    let tol = MEAN_VALUE_TOLERANCE * scale;
    Ok(MeanValueCheck {
        harmonic: vertices.iter().zip(&dg.degrees).all(|(v, &d)| v.laplacian_residual.abs() <= tol * d as f64),
        mean_value: vertices.iter().all(|v| v.mean_value_residual.abs() <= tol),
        vertices,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{interval, loop_graph, three_star};

    #[test]
    fn three_star_matrix_and_spectrum() {
        let dg = DiscreteGraph::from_metric(&three_star(1.0, 2.0, 3.0));
        assert_eq!(dg.adjacency[3], vec![1, 1, 1, 0]);
        assert_eq!(dg.degrees, vec![1, 1, 1, 3]);
        let ev = discrete_spectrum(&dg);
        for (a, b) in ev.iter().zip([0.0, 1.0, 1.0, 4.0]) {
            assert!((a - b).abs() < 1e-10);
        }
    }

    #[test]
    fn small_cases() {
        let k2 = discrete_spectrum(&DiscreteGraph::from_metric(&interval(1.0)));
        assert!((k2[0]).abs() < 1e-12 && (k2[1] - 2.0).abs() < 1e-12);
        let lp = DiscreteGraph::from_metric(&loop_graph(1.0));
        assert_eq!((lp.adjacency.clone(), lp.degrees.clone()), (vec![vec![0]], vec![2]));
        let doubled = DiscreteGraph::from_metric(&three_star(1.0, 1.0, 1.0).doubled());
        assert_eq!(doubled.adjacency[3], vec![2, 2, 2, 0]);
    }

    #[test]
    fn mean_value_examples() {
        let dg = DiscreteGraph::from_metric(&three_star(1.0, 1.0, 1.0));
        let c = mean_value_check(&dg, &[2.5; 4]).unwrap();
        assert!(c.harmonic && c.mean_value);
        let c = mean_value_check(&dg, &[1.0, 0.0, 0.0, 1.0 / 3.0]).unwrap();
        assert!(!c.harmonic && !c.mean_value);
        assert!(c.vertices[3].holds);
        assert!(!c.vertices[0].holds);
        assert!(mean_value_check(&dg, &[1.0]).is_err());
    }

    #[test]
    fn csv_layout() {
        let dg = DiscreteGraph::from_metric(&interval(1.0));
        assert_eq!(dg.adjacency_csv(), "n,2\n0.00000000000e0,1.00000000000e0\n1.00000000000e0,0.00000000000e0\n");
    }
}
