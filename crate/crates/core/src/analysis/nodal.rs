//! Nodal domains of computed eigenfunctions.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fem::{Spectrum, CLUSTER_TOLERANCE};
use crate::graph::MetricGraph;
use crate::union_find::UnionFind;

/// `|ψ(v)| ≤ VANISHING_THRESHOLD · ‖ψ‖_∞` at an essential vertex raises a flag.
pub const VANISHING_THRESHOLD: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NodalPoint {
    pub edge_id: String,
    pub arclength: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VanishingVertex {
    pub vertex_id: String,
    pub relative_value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NodalReport {
    /// One-based eigenvalue index.
    pub k: usize,
    pub eigenvalue: f64,
    pub nodal_domains: usize,
    pub betti_number: usize,
    /// Essential (degree ≠ 2) vertices where the eigenfunction numerically vanishes.
    pub vanishing_vertices: Vec<VanishingVertex>,
    /// False when `μ_k` belongs to a cluster of several eigenvalues, so `ψ_k` is not unique.
    pub simple: bool,
    /// Interior zero crossings, located by linear interpolation.
    pub nodal_points: Vec<NodalPoint>,
    /// `k - β ≤ ν ≤ k`.
    pub bound_holds: bool,
    /// The bound is only asserted for simple eigenvalues whose eigenfunction
    /// does not vanish at any essential vertex.
    pub conclusive: bool,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Sign {
    Pos,
    Neg,
    Zero,
}

fn sign(x: f64, zero: f64) -> Sign {
    if x.abs() <= zero {
        Sign::Zero
    } else if x > 0.0 {
        Sign::Pos
    } else {
        Sign::Neg
    }
}

/// Counts the nodal domains of `ψ_k` (one-based `k`).
///
/// Each edge is split into maximal runs of mesh nodes of one strict sign;
/// runs touching a vertex of the same sign are merged through that vertex.
/// A vertex flagged as vanishing separates the runs meeting there.
pub fn nodal_domains(g: &MetricGraph, spec: &Spectrum, k: usize) -> Result<NodalReport> {
    if k == 0 || k > spec.len() {
        return Err(Error::InsufficientEigenvalues { needed: k.max(1), have: spec.len() });
    }
    if !g.all_standard() {
        return Err(Error::UnsupportedConditions("nodal counts are stated for standard conditions".into()));
    }
    if spec.dof_map.edges.len() != g.edge_count() {
        return Err(Error::ShapeMismatch("spectrum was computed on a different graph".into()));
    }
    let f = spec.eigenfunction(k - 1);
    let sup = f.sup_norm();
    if sup == 0.0 {
        return Err(Error::ZeroFunction);
    }
    let vertex_zero = VANISHING_THRESHOLD * sup;
    let deg = g.degrees();
    let values = f.vertex_values(g)?;

    let mut vanishing = Vec::new();
    let vertex_sign: Vec<Sign> = g
        .vertex_ixs()
        .map(|v| {
            let s = sign(values[v.0], vertex_zero);
            if s == Sign::Zero && deg[v.0] != 2 {
                vanishing.push(VanishingVertex { vertex_id: g.vertex(v).id.clone(), relative_value: values[v.0].abs() / sup });
            }
            s
        })
        .collect();

    // Items: vertices first, then edge runs as they are discovered.
    let nv = g.vertex_count();
    let mut uf = UnionFind::new(nv + f.edges.iter().map(|e| e.values.len()).sum::<usize>());
    let mut used = vec![false; uf.len()];
    let mut next = nv;
    let mut nodal_points = Vec::new();
    for (ei, samples) in f.edges.iter().enumerate() {
        let rec = &g.edges()[ei];
        let vals = &samples.values;
        let n = vals.len();
        let interior_zero = vals.iter().all(|x| x.abs() <= vertex_zero);
        if interior_zero {
            return Err(Error::AmbiguousNodalDomain { k, edge: rec.id.clone() });
        }
        let mut run: Option<usize> = None;
        let mut run_sign = Sign::Zero;
        for j in 0..n {
            let s = if j == 0 {
                vertex_sign[rec.from.0]
            } else if j == n - 1 {
                vertex_sign[rec.to.0]
            } else {
                sign(vals[j], 0.0)
            };
            if j > 0 {
                let (a, b) = (vals[j - 1], vals[j]);
                let prev = run_sign;
                if prev != Sign::Zero && s != Sign::Zero && prev != s {
                    let t = a / (a - b);
                    nodal_points.push(NodalPoint { edge_id: rec.id.clone(), arclength: samples.arclength(j - 1) + t * (samples.arclength(j) - samples.arclength(j - 1)) });
                }
            }
            if s == Sign::Zero {
                if j != 0 && j != n - 1 {
                    nodal_points.push(NodalPoint { edge_id: rec.id.clone(), arclength: samples.arclength(j) });
                }
                run = None;
                run_sign = Sign::Zero;
                continue;
            }
            if run.is_none() || run_sign != s {
                run = Some(next);
                used[next] = true;
                next += 1;
                run_sign = s;
            }
            let r = run.expect("run open");
            if j == 0 {
                uf.union(r, rec.from.0);
                used[rec.from.0] = true;
            }
            if j == n - 1 {
                uf.union(r, rec.to.0);
                used[rec.to.0] = true;
            }
        }
    }
    let mut roots = std::collections::BTreeSet::new();
    for i in 0..next {
        if used[i] {
            roots.insert(uf.find(i));
        }
    }
    let nu = roots.len();
    let betti = g.betti_number()?;
    let mu = spec.eigenvalues[k - 1];
    let close = |j: usize| (spec.eigenvalues[j] - mu).abs() <= CLUSTER_TOLERANCE * (1.0 + mu.abs());
    let simple = !(k >= 2 && close(k - 2)) && !(k < spec.len() && close(k));
    let bound_holds = k.saturating_sub(betti) <= nu && nu <= k;
    Ok(NodalReport {
        k,
        eigenvalue: mu,
        nodal_domains: nu,
        betti_number: betti,
        conclusive: vanishing.is_empty() && simple,
        vanishing_vertices: vanishing,
        simple,
        nodal_points,
        bound_holds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fem::{compute_spectrum, SpectrumOptions};
    use crate::graph::{interval, three_star};

    #[test]
    fn interval_examples() {
        let g = interval(1.0);
        let s = compute_spectrum(&g, &SpectrumOptions::with_k(4)).unwrap();
        let r1 = nodal_domains(&g, &s, 1).unwrap();
        assert_eq!(r1.nodal_domains, 1);
        assert!(r1.nodal_points.is_empty());
        let r2 = nodal_domains(&g, &s, 2).unwrap();
        assert_eq!(r2.nodal_domains, 2);
        assert_eq!(r2.nodal_points.len(), 1);
        assert!((r2.nodal_points[0].arclength - 0.5).abs() <= s.mesh_size);
        assert!(r2.bound_holds && r2.conclusive);
        assert_eq!(nodal_domains(&g, &s, 4).unwrap().nodal_domains, 4);
        assert!(nodal_domains(&g, &s, 5).is_err());
    }

    #[test]
    fn equilateral_star_flags_centre() {
        let g = three_star(1.0, 1.0, 1.0);
        let s = compute_spectrum(&g, &SpectrumOptions::with_k(4)).unwrap();
        match nodal_domains(&g, &s, 2) {
            Ok(r) => {
                assert!(!r.conclusive);
                assert!(!r.simple);
                assert_eq!(r.vanishing_vertices.len(), 1);
                assert_eq!(r.vanishing_vertices[0].vertex_id, "v4");
                assert!((2..=3).contains(&r.nodal_domains));
            }
            // A cluster eigenvector may vanish on one whole leg.
            Err(Error::AmbiguousNodalDomain { k: 2, .. }) => {}
            Err(e) => panic!("{e}"),
        }
    }
}
