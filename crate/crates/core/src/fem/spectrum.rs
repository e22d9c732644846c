use std::f64::consts::PI;

use super::assembly::{discretize, discretize_with_counts, element_counts, default_mesh_size, DiscreteSystem, DofMap};
use super::eigen::{solve, SolverOptions, DEFAULT_EIGENVALUE_COUNT};
use crate::error::{Error, Result};
use crate::graph::{End, MetricGraph, VertexCondition};
use crate::report::{csv_field, fmt12};

/// Eigenvalues closer than `CLUSTER_TOLERANCE * (1 + |μ|)` form one cluster.
pub const CLUSTER_TOLERANCE: f64 = 1e-6;

/// Eigenvalues are trusted while `h * sqrt(μ) <= π / 10`.
pub const TRUST_FACTOR: f64 = PI / 10.0;

/// Sampled values of one function on one edge.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeSamples {
    pub edge_id: String,
    pub length: f64,
    /// Values at `length * j / (len - 1)`, `j = 0..len`.
    pub values: Vec<f64>,
}

impl EdgeSamples {
    pub fn arclength(&self, j: usize) -> f64 {
        self.length * j as f64 / (self.values.len() - 1) as f64
    }

    /// Piecewise-linear interpolation at arclength `x`.
    pub fn eval(&self, x: f64) -> f64 {
        let m = self.values.len() - 1;
        let s = (x / self.length).clamp(0.0, 1.0) * m as f64;
        let j = (s.floor() as usize).min(m - 1);
        let t = s - j as f64;
        self.values[j] * (1.0 - t) + self.values[j + 1] * t
    }
}

/// A function on the graph given by uniform samples on every edge, in edge order.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeFunction {
    pub edges: Vec<EdgeSamples>,
}

impl EdgeFunction {
    /// Samples `f(edge index, arclength)` at `samples + 1` points per edge.
    pub fn from_fn(g: &MetricGraph, samples: usize, f: impl Fn(usize, f64) -> f64) -> Self {
        let samples = samples.max(1);
        let edges = g
            .edges()
            .iter()
            .enumerate()
            .map(|(i, e)| EdgeSamples {
                edge_id: e.id.clone(),
                length: e.length,
                values: (0..=samples).map(|j| f(i, e.length * j as f64 / samples as f64)).collect(),
            })
            .collect();
        Self { edges }
    }

    pub fn sup_norm(&self) -> f64 {
        self.edges.iter().flat_map(|e| e.values.iter()).fold(0.0, |m, v| m.max(v.abs()))
    }

    fn check_shape(&self, g: &MetricGraph) -> Result<()> {
        if self.edges.len() != g.edge_count() {
            return Err(Error::ShapeMismatch(format!("function has {} edges, graph {}", self.edges.len(), g.edge_count())));
        }
        for (s, e) in self.edges.iter().zip(g.edges()) {
            if s.values.len() < 2 {
                return Err(Error::ShapeMismatch(format!("edge `{}` needs at least two samples", e.id)));
            }
            if s.edge_id != e.id || (s.length - e.length).abs() > 1e-12 * e.length {
                return Err(Error::ShapeMismatch(format!("samples for `{}` do not match edge `{}`", s.edge_id, e.id)));
            }
        }
        Ok(())
    }

    /// Vertex values, checking continuity (and vanishing at Dirichlet vertices).
    pub fn vertex_values(&self, g: &MetricGraph) -> Result<Vec<f64>> {
        self.check_shape(g)?;
        let tol = 1e-8 * self.sup_norm() + 1e-14;
        let mut out = Vec::with_capacity(g.vertex_count());
        for v in g.vertex_ixs() {
            let vals: Vec<f64> = g
                .incidences(v)
                .into_iter()
                .map(|inc| {
                    let s = &self.edges[inc.edge.0].values;
                    match inc.end {
                        End::From => s[0],
                        End::To => s[s.len() - 1],
                    }
                })
                .collect();
            let id = &g.vertex(v).id;
            let (lo, hi) = vals.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &x| (a.min(x), b.max(x)));
            if vals.len() > 1 && hi - lo > tol {
                return Err(Error::ContinuityViolation { vertex: id.clone(), jump: hi - lo });
            }
            let value = if vals.is_empty() { 0.0 } else { vals.iter().sum::<f64>() / vals.len() as f64 };
            if g.vertex(v).condition == VertexCondition::Dirichlet && value.abs() > tol {
                return Err(Error::DirichletViolation { vertex: id.clone(), value });
            }
            out.push(value);
        }
        Ok(out)
    }
}

/// `∫ f g` for two piecewise-linear functions sampled on the same uniform edge meshes.
fn p1_inner(a: &[f64], b: &[f64], h: f64) -> f64 {
    a.windows(2)
        .zip(b.windows(2))
        .map(|(x, y)| h / 6.0 * (2.0 * x[0] * y[0] + x[0] * y[1] + x[1] * y[0] + 2.0 * x[1] * y[1]))
        .sum()
}

/// Rayleigh quotient `(∫ |f'|² + q|f|² + Σ α|f(v)|²) / ∫ |f|²` of the
/// piecewise-linear interpolant of `f`, integrated exactly.
pub fn rayleigh_quotient(g: &MetricGraph, f: &EdgeFunction) -> Result<f64> {
    let vertex = f.vertex_values(g)?;
    let mut num = 0.0;
    let mut den = 0.0;
    for (s, e) in f.edges.iter().zip(g.edges()) {
        let h = e.length / (s.values.len() - 1) as f64;
        let mass = p1_inner(&s.values, &s.values, h);
        let grad: f64 = s.values.windows(2).map(|w| (w[1] - w[0]).powi(2) / h).sum();
        num += grad + e.potential * mass;
        den += mass;
    }
    for (v, val) in g.vertices().iter().zip(&vertex) {
        if let VertexCondition::Robin(alpha) = v.condition {
            num += alpha * val * val;
        }
    }
    if den <= 0.0 {
        return Err(Error::ZeroFunction);
    }
    Ok(num / den)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cluster {
    /// Zero-based index of the first eigenvalue in the cluster.
    pub first: usize,
    pub size: usize,
    pub value: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeatDecay {
    /// `‖e^{-tA} f - mean(f)‖₂`, with unresolved modes decaying at the largest computed rate.
    pub deviation: f64,
    /// `e^{-μ₂ t} ‖f - mean(f)‖₂`.
    pub bound: f64,
    pub initial_deviation: f64,
}

/// Eigenvalues and M-orthonormal eigenfunctions of a discretized graph.
#[derive(Debug, Clone)]
pub struct Spectrum {
    /// Best available eigenvalue estimates (Richardson-extrapolated when
    /// `error_estimates` is present).
    pub eigenvalues: Vec<f64>,
    /// Eigenvalues of the discrete system that `eigenvectors` belong to.
    pub discrete_eigenvalues: Vec<f64>,
    pub eigenvectors: Vec<Vec<f64>>,
    pub residuals: Vec<f64>,
    pub dof_map: DofMap,
    pub mesh_size: f64,
    pub total_length: f64,
    pub all_standard: bool,
    pub zero_potential: bool,
    pub error_estimates: Option<Vec<f64>>,
}

impl Spectrum {
    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    /// Estimated discretization error of eigenvalue `i` (zero-based). Uses the
    /// Richardson estimate when available, else the leading P1 term `μ² h² / 12`.
    pub fn error_estimate(&self, i: usize) -> f64 {
        match &self.error_estimates {
            Some(e) => e[i],
            None => {
                let mu = self.eigenvalues[i];
                mu * mu * self.mesh_size * self.mesh_size / 12.0
            }
        }
    }

    /// Largest eigenvalue level resolved by the mesh.
    pub fn trust_ceiling(&self) -> f64 {
        let mesh = (TRUST_FACTOR / self.mesh_size).powi(2);
        let top = self.eigenvalues.last().copied().unwrap_or(f64::NEG_INFINITY);
        mesh.min(top)
    }

    pub fn trusted_count(&self) -> usize {
        let c = self.trust_ceiling();
        self.eigenvalues.iter().take_while(|&&m| m <= c).count()
    }

    pub fn clusters(&self) -> Vec<Cluster> {
        let mut out: Vec<Cluster> = Vec::new();
        for (i, &mu) in self.eigenvalues.iter().enumerate() {
            match out.last_mut() {
                Some(c) if (mu - self.eigenvalues[c.first + c.size - 1]).abs() <= CLUSTER_TOLERANCE * (1.0 + mu.abs()) => {
                    c.value = (c.value * c.size as f64 + mu) / (c.size + 1) as f64;
                    c.size += 1;
                }
                _ => out.push(Cluster { first: i, size: 1, value: mu }),
            }
        }
        out
    }

    /// Nodal values of eigenfunction `i` (zero-based) on every edge; zero at Dirichlet vertices.
    pub fn eigenfunction(&self, i: usize) -> EdgeFunction {
        let u = &self.eigenvectors[i];
        EdgeFunction {
            edges: self
                .dof_map
                .edges
                .iter()
                .map(|m| EdgeSamples {
                    edge_id: m.edge_id.clone(),
                    length: m.length,
                    values: m.node_dofs.iter().map(|d| d.map_or(0.0, |d| u[d])).collect(),
                })
                .collect(),
        }
    }

    /// Interpolates `f` onto this spectrum's mesh as a dof vector.
    fn project_nodes(&self, g: &MetricGraph, f: &EdgeFunction) -> Result<Vec<f64>> {
        let vertex = f.vertex_values(g)?;
        let mut out = vec![0.0; self.dof_map.dof_count];
        for (v, d) in self.dof_map.vertex_dofs.iter().enumerate() {
            if let Some(d) = d {
                out[*d] = vertex[v];
            }
        }
        for (m, s) in self.dof_map.edges.iter().zip(&f.edges) {
            for (j, d) in m.interior.clone().enumerate() {
                out[d] = s.eval(m.length * (j + 1) as f64 / m.elements as f64);
            }
        }
        Ok(out)
    }

    fn mass_inner(&self, a: &[f64], b: &[f64]) -> f64 {
        self.dof_map
            .edges
            .iter()
            .map(|m| {
                let pick = |u: &[f64]| m.node_dofs.iter().map(|d| d.map_or(0.0, |d| u[d])).collect::<Vec<_>>();
                p1_inner(&pick(a), &pick(b), m.element_length())
            })
            .sum()
    }

    /// Heat-semigroup deviation from equilibrium versus the `e^{-μ₂ t}` rate.
    pub fn heat_decay(&self, g: &MetricGraph, f: &EdgeFunction, t: f64) -> Result<HeatDecay> {
        if !(self.all_standard && self.zero_potential) || !g.all_standard() || !g.zero_potential() {
            return Err(Error::UnsupportedConditions("heat decay needs standard conditions and q = 0".into()));
        }
        if !(t >= 0.0 && t.is_finite()) {
            return Err(Error::InvalidParameter(format!("time must be nonnegative, got {t}")));
        }
        if self.len() < 2 {
            return Err(Error::InsufficientEigenvalues { needed: 2, have: self.len() });
        }
        let u = self.project_nodes(g, f)?;
        let ones = vec![1.0; u.len()];
        let total = self.mass_inner(&ones, &ones);
        let integral = self.mass_inner(&u, &ones);
        let mean = integral / total;
        let centred: Vec<f64> = u.iter().map(|x| x - mean).collect();
        let initial_sq = self.mass_inner(&centred, &centred);
        let mut resolved = 0.0;
        let mut captured = 0.0;
        let kmax = self.len();
        for i in 1..kmax {
            let c = self.mass_inner(&centred, &self.eigenvectors[i]);
            captured += c * c;
            resolved += (-2.0 * self.discrete_eigenvalues[i] * t).exp() * c * c;
        }
        let remainder = (initial_sq - captured).max(0.0);
        let top = self.discrete_eigenvalues[kmax - 1];
        let deviation = (resolved + (-2.0 * top * t).exp() * remainder).sqrt();
        let initial = initial_sq.sqrt();
        Ok(HeatDecay { deviation, bound: (-self.discrete_eigenvalues[1] * t).exp() * initial, initial_deviation: initial })
    }

    /// `index,eigenvalue` with one-based indices.
    pub fn eigenvalue_csv(&self) -> String {
        let mut s = String::from("index,eigenvalue\n");
        for (i, mu) in self.eigenvalues.iter().enumerate() {
            s.push_str(&format!("{},{}\n", i + 1, fmt12(*mu)));
        }
        s
    }

    /// `edge_id,arclength,value` for eigenfunction `i` (zero-based).
    pub fn eigenfunction_csv(&self, i: usize) -> String {
        let mut s = String::from("edge_id,arclength,value\n");
        for e in self.eigenfunction(i).edges {
            let id = csv_field(&e.edge_id);
            for (j, v) in e.values.iter().enumerate() {
                s.push_str(&format!("{id},{},{}\n", fmt12(e.arclength(j)), fmt12(*v)));
            }
        }
        s
    }
}

/// Solves for the `k` lowest eigenpairs of an assembled system.
pub fn solve_spectrum(sys: &DiscreteSystem, k: usize) -> Result<Spectrum> {
    solve_spectrum_with(sys, k, &SolverOptions::default())
}

pub fn solve_spectrum_with(sys: &DiscreteSystem, k: usize, opts: &SolverOptions) -> Result<Spectrum> {
    let pairs = solve(sys, k, opts)?;
    Ok(Spectrum {
        eigenvalues: pairs.values.clone(),
        discrete_eigenvalues: pairs.values,
        eigenvectors: pairs.vectors,
        residuals: pairs.residuals,
        dof_map: sys.dof_map.clone(),
        mesh_size: sys.mesh_size,
        total_length: sys.total_length,
        all_standard: sys.all_standard,
        zero_potential: sys.zero_potential,
        error_estimates: None,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumOptions {
    pub k: usize,
    /// Maximum element length; defaults to [`default_mesh_size`].
    pub h: Option<f64>,
    /// Solve again with every element halved and extrapolate.
    pub richardson: bool,
    pub solver: SolverOptions,
}

impl Default for SpectrumOptions {
    fn default() -> Self {
        Self { k: DEFAULT_EIGENVALUE_COUNT, h: None, richardson: false, solver: SolverOptions::default() }
    }
}

impl SpectrumOptions {
    pub fn with_k(k: usize) -> Self {
        Self { k, ..Self::default() }
    }

    pub fn extrapolated(mut self) -> Self {
        self.richardson = true;
        self
    }

    pub fn mesh(mut self, h: f64) -> Self {
        self.h = Some(h);
        self
    }
}

/// Discretizes and solves a connected graph.
///
/// With `richardson`, the returned eigenvectors belong to the fine mesh (twice
/// the elements of the coarse one) and the eigenvalues are `(4μ_fine - μ_coarse)/3`.
pub fn compute_spectrum(g: &MetricGraph, opts: &SpectrumOptions) -> Result<Spectrum> {
    let h = opts.h.unwrap_or_else(|| default_mesh_size(g));
    if !opts.richardson {
        let sys = discretize(g, h)?;
        return solve_spectrum_with(&sys, opts.k, &opts.solver);
    }
    spectrum_with_counts(g, &element_counts(g, h)?, opts)
}

/// As [`compute_spectrum`] with explicit per-edge element counts; `opts.h` is ignored.
pub fn spectrum_with_counts(g: &MetricGraph, counts: &[usize], opts: &SpectrumOptions) -> Result<Spectrum> {
    let coarse = solve_spectrum_with(&discretize_with_counts(g, counts)?, opts.k, &opts.solver)?;
    if !opts.richardson {
        return Ok(coarse);
    }
    let fine_counts: Vec<usize> = counts.iter().map(|c| 2 * c).collect();
    let mut fine = solve_spectrum_with(&discretize_with_counts(g, &fine_counts)?, opts.k, &opts.solver)?;
    let (values, errors): (Vec<f64>, Vec<f64>) = fine
        .discrete_eigenvalues
        .iter()
        .zip(&coarse.discrete_eigenvalues)
        .map(|(f, c)| ((4.0 * f - c) / 3.0, (f - c).abs() / 3.0))
        .unzip();
    fine.eigenvalues = values;
    fine.error_estimates = Some(errors);
    Ok(fine)
}

/// Lowest `k` eigenvalues of a possibly disconnected graph: the union of the
/// component spectra, sorted. Components are meshed with the same `h`, so
/// element counts per edge match those of the connected graph.
pub fn component_eigenvalues(g: &MetricGraph, opts: &SpectrumOptions) -> Result<Vec<f64>> {
    if g.is_connected() {
        return Ok(compute_spectrum(g, opts)?.eigenvalues);
    }
    let h = opts.h.unwrap_or_else(|| default_mesh_size(g));
    let mut all = Vec::new();
    for comp in g.split_components() {
        if comp.is_degenerate() {
            continue;
        }
        let mut o = *opts;
        o.h = Some(h);
        o.k = o.k.min(discretize(&comp, h)?.dof_count());
        all.extend(compute_spectrum(&comp, &o)?.eigenvalues);
    }
    all.sort_by(f64::total_cmp);
    all.truncate(opts.k);
    Ok(all)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{interval, loop_graph, three_star};

    fn pi2() -> f64 {
        PI * PI
    }

    #[test]
    fn interval_eigenvalues() {
        let s = compute_spectrum(&interval(1.0), &SpectrumOptions::with_k(3).mesh(1e-3)).unwrap();
        assert!(s.eigenvalues[0].abs() < 1e-9);
        assert!((s.eigenvalues[1] / pi2() - 1.0).abs() < 1e-4);
        assert!((s.eigenvalues[2] / (4.0 * pi2()) - 1.0).abs() < 1e-4);
        // Constant ground state.
        let f = s.eigenfunction(0);
        let v0 = f.edges[0].values[0];
        assert!(f.edges[0].values.iter().all(|v| (v - v0).abs() < 1e-8));
    }

    #[test]
    fn mixed_interval() {
        let g = interval(1.0).with_conditions(|v, _| if v.0 == 0 { VertexCondition::Standard } else { VertexCondition::Dirichlet });
        let s = compute_spectrum(&g, &SpectrumOptions::with_k(1).mesh(1e-3)).unwrap();
        assert!((s.eigenvalues[0] / (pi2() / 4.0) - 1.0).abs() < 1e-4);
    }

    #[test]
    fn equilateral_star_cluster() {
        let s = compute_spectrum(&three_star(1.0, 1.0, 1.0), &SpectrumOptions::with_k(4)).unwrap();
        for (mu, want) in s.eigenvalues.iter().zip([0.0, pi2() / 4.0, pi2() / 4.0, pi2()]) {
            assert!((mu - want).abs() < 1e-4 * (1.0 + want));
        }
        let c = s.clusters();
        assert_eq!(c.len(), 3);
        assert_eq!(c[1].size, 2);
    }

    #[test]
    fn richardson_improves_accuracy() {
        let opts = SpectrumOptions::with_k(4).mesh(0.01);
        let plain = compute_spectrum(&loop_graph(1.0), &opts).unwrap();
        let rich = compute_spectrum(&loop_graph(1.0), &opts.extrapolated()).unwrap();
        let exact = 4.0 * pi2();
        assert!((rich.eigenvalues[1] - exact).abs() < 0.01 * (plain.eigenvalues[1] - exact).abs());
        let est = rich.error_estimates.as_ref().unwrap()[1];
        assert!(est > 0.0 && est < (plain.eigenvalues[1] - exact).abs());
    }

    #[test]
    fn rayleigh_examples() {
        let g = interval(1.0);
        let constant = EdgeFunction::from_fn(&g, 10, |_, _| 2.0);
        assert!(rayleigh_quotient(&g, &constant).unwrap().abs() < 1e-14);
        // f(x) = x: ∫f'² = 1, ∫f² = 1/3; the P1 interpolant of x is exact.
        let linear = EdgeFunction::from_fn(&g, 10, |_, x| x);
        assert!((rayleigh_quotient(&g, &linear).unwrap() - 3.0).abs() < 1e-12);
        let zero = EdgeFunction::from_fn(&g, 10, |_, _| 0.0);
        assert!(matches!(rayleigh_quotient(&g, &zero), Err(Error::ZeroFunction)));
    }

    #[test]
    fn rayleigh_of_eigenfunction_is_eigenvalue() {
        let g = three_star(0.6, 1.0, 1.3);
        let s = compute_spectrum(&g, &SpectrumOptions::with_k(3).mesh(0.01)).unwrap();
        let rq = rayleigh_quotient(&g, &s.eigenfunction(1)).unwrap();
        assert!((rq - s.discrete_eigenvalues[1]).abs() < 1e-9 * (1.0 + rq));
    }

    #[test]
    fn discontinuous_function_rejected() {
        let g = three_star(1.0, 1.0, 1.0);
        let f = EdgeFunction::from_fn(&g, 4, |e, x| if e == 0 { x + 1.0 } else { x });
        assert!(matches!(rayleigh_quotient(&g, &f), Err(Error::ContinuityViolation { .. })));
    }

    #[test]
    fn heat_examples() {
        let g = interval(1.0);
        let s = compute_spectrum(&g, &SpectrumOptions::with_k(6).mesh(1e-3)).unwrap();
        let c = EdgeFunction::from_fn(&g, 100, |_, _| 1.5);
        let hd = s.heat_decay(&g, &c, 0.3).unwrap();
        assert!(hd.deviation < 1e-10 && hd.bound < 1e-10, "{hd:?}");

        // Single cosine mode decays exactly at rate μ₂.
        let f = EdgeFunction::from_fn(&g, 2000, |_, x| (PI * x).cos());
        let hd = s.heat_decay(&g, &f, 0.1).unwrap();
        let norm = 0.5_f64.sqrt();
        assert!((hd.deviation - (-PI * PI * 0.1).exp() * norm).abs() < 1e-5);
        assert!(hd.deviation <= hd.bound + 1e-10);

        let hd0 = s.heat_decay(&g, &f, 0.0).unwrap();
        assert!((hd0.deviation - hd0.initial_deviation).abs() < 1e-12);
    }

    #[test]
    fn csv_layout() {
        let s = compute_spectrum(&interval(1.0), &SpectrumOptions::with_k(2).mesh(0.5)).unwrap();
        let csv = s.eigenvalue_csv();
        assert!(csv.starts_with("index,eigenvalue\n1,"));
        let f = s.eigenfunction_csv(1);
        assert_eq!(f.lines().count(), 4);
        assert!(f.lines().nth(1).unwrap().starts_with("e1,0.00000000000e0,"));
    }
}
