//! Lowest eigenpairs of `K u = λ M u`.
//!
//! Small systems go through a dense Cholesky reduction. Larger ones use
//! shift-invert subspace iteration with [`ShiftedFactor`], and the result is
//! certified by an inertia count: no eigenvalue below the largest returned one
//! can have been skipped.

use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::assembly::DiscreteSystem;
use super::factor::ShiftedFactor;
use super::sparse::CsrMatrix;
use crate::error::{Error, Result};

pub const DEFAULT_EIGENVALUE_COUNT: usize = 12;

/// Residual bound every returned eigenpair satisfies (relative to `‖Mu‖`),
/// unless rounding in `K` itself makes it unattainable; see [`roundoff_floor`].
pub const RESIDUAL_TOLERANCE: f64 = 1e-8;

const DENSE_LIMIT: usize = 400;
const TARGET_RESIDUAL: f64 = 1e-11;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    pub max_iterations: usize,
    pub seed: u64,
    /// Force the iterative path even for small systems (testing).
    pub force_iterative: bool,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self { max_iterations: 400, seed: 0x5eed_1e55, force_iterative: false }
    }
}

/// Raw eigenpairs in dof coordinates, M-orthonormal.
#[derive(Debug, Clone)]
pub struct EigenPairs {
    pub values: Vec<f64>,
    pub vectors: Vec<Vec<f64>>,
    pub residuals: Vec<f64>,
    pub iterations: usize,
}

pub fn solve(sys: &DiscreteSystem, k: usize, opts: &SolverOptions) -> Result<EigenPairs> {
    let n = sys.dof_count();
    if k == 0 {
        return Err(Error::InvalidParameter("eigenvalue count must be at least 1".into()));
    }
    if k > n {
        return Err(Error::TooManyEigenvalues { requested: k, available: n });
    }
    let p = block_size(n, k);
    let mut pairs = if !opts.force_iterative && (n <= DENSE_LIMIT || 2 * p >= n) {
        solve_dense(sys, k)?
    } else {
        subspace_iteration(sys, k, p, opts)?
    };
    for v in &mut pairs.vectors {
        normalize_sign(v);
    }
    Ok(pairs)
}

fn block_size(n: usize, k: usize) -> usize {
    n.min((2 * k).max(k + 10))
}

fn normalize_sign(v: &mut [f64]) {
    let pivot = v.iter().copied().fold(0.0_f64, |best, x| if x.abs() > best.abs() + 1e-12 * best.abs() { x } else { best });
    if pivot < 0.0 {
        v.iter_mut().for_each(|x| *x = -*x);
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// `ε (‖K‖∞ + |θ| ‖M‖∞) ‖x‖ / ‖Mx‖`: the relative residual that rounding in a
/// single sparse product already produces.
pub fn roundoff_floor(sys: &DiscreteSystem, theta: f64, x: &[f64]) -> f64 {
    let mut mx = vec![0.0; x.len()];
    sys.mass.mul_vec(x, &mut mx);
    let scale = sys.stiffness.norm_inf() + theta.abs() * sys.mass.norm_inf();
    f64::EPSILON * scale * norm(x) / norm(&mx).max(f64::MIN_POSITIVE)
}

/// `‖Kx - θMx‖ / ‖Mx‖`.
pub fn relative_residual(k: &CsrMatrix, m: &CsrMatrix, theta: f64, x: &[f64]) -> f64 {
    let n = x.len();
    let mut kx = vec![0.0; n];
    let mut mx = vec![0.0; n];
    k.mul_vec(x, &mut kx);
    m.mul_vec(x, &mut mx);
    let r: f64 = kx.iter().zip(&mx).map(|(a, b)| (a - theta * b).powi(2)).sum::<f64>().sqrt();
    r / norm(&mx).max(f64::MIN_POSITIVE)
}

fn solve_dense(sys: &DiscreteSystem, k: usize) -> Result<EigenPairs> {
    let kd = sys.stiffness.to_dense();
    let md = sys.mass.to_dense();
    let chol = md
        .clone()
        .cholesky()
        .ok_or_else(|| Error::Factorization("mass matrix is not positive definite".into()))?;
    let l = chol.l();
    let linv = l
        .clone()
        .try_inverse()
        .ok_or_else(|| Error::Factorization("mass Cholesky factor is singular".into()))?;
    let c = &linv * kd * linv.transpose();
    let c = (&c + c.transpose()) * 0.5;
    let eig = SymmetricEigen::new(c);
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let lt_inv = linv.transpose();
    let mut values = Vec::with_capacity(k);
    let mut vectors = Vec::with_capacity(k);
    let mut residuals = Vec::with_capacity(k);
    for &i in order.iter().take(k) {
        let y = eig.eigenvectors.column(i);
        let x = &lt_inv * y;
        let mut x: Vec<f64> = x.iter().copied().collect();
        let mn = sys.mass.quadratic_form(&x).sqrt();
        x.iter_mut().for_each(|v| *v /= mn);
        let theta = eig.eigenvalues[i];
        residuals.push(relative_residual(&sys.stiffness, &sys.mass, theta, &x));
        values.push(theta);
        vectors.push(x);
    }
    check_residuals(sys, &values, &vectors, &residuals, 1)?;
    Ok(EigenPairs { values, vectors, residuals, iterations: 1 })
}

fn check_residuals(sys: &DiscreteSystem, values: &[f64], vectors: &[Vec<f64>], residuals: &[f64], iterations: usize) -> Result<()> {
    let mut worst: f64 = 0.0;
    let mut failed = false;
    for ((theta, x), r) in values.iter().zip(vectors).zip(residuals) {
        let allowed = RESIDUAL_TOLERANCE.max(100.0 * roundoff_floor(sys, *theta, x));
        worst = worst.max(*r);
        if !(r <= &allowed) {
            failed = true;
        }
    }
    if failed {
        return Err(Error::NonConvergence { iterations, worst_residual: worst });
    }
    Ok(())
}

/// Finds a shift strictly below the smallest eigenvalue by inertia bisection.
fn lower_shift(sys: &DiscreteSystem) -> Result<f64> {
    let n = sys.dof_count();
    let ones = vec![1.0; n];
    let upper = sys.stiffness.quadratic_form(&ones) / sys.mass.quadratic_form(&ones);
    let unit = 1.0 + upper.abs();
    let count = |s: f64| -> Result<Option<usize>> {
        match ShiftedFactor::new(sys, s) {
            Ok(f) => Ok(Some(f.inertia())),
            Err(Error::Factorization(_)) => Ok(None),
            Err(e) => Err(e),
        }
    };
    // A shift landing exactly on an eigenvalue is treated as "not below".
    let mut lo = upper - unit;
    let mut step = unit;
    let mut guard = 0;
    loop {
        if let Some(0) = count(lo)? {
            break;
        }
        step *= 2.0;
        lo = upper - step;
        guard += 1;
        if guard > 200 {
            return Err(Error::Factorization("could not bracket the lowest eigenvalue".into()));
        }
    }
    let mut hi = upper + 1e-9 * unit;
    for _ in 0..60 {
        if hi - lo <= 1e-3 * (1.0 + lo.abs()) {
            break;
        }
        let mid = 0.5 * (lo + hi);
        match count(mid)? {
            Some(0) => lo = mid,
            _ => hi = mid,
        }
    }
    Ok(lo - 1e-2 * (1.0 + lo.abs()))
}

/// M-orthonormalizes the columns of `y` (CholQR twice, Gram-Schmidt fallback).
fn m_orthonormalize(m: &CsrMatrix, y: &mut [Vec<f64>]) {
    for _ in 0..2 {
        let p = y.len();
        let my: Vec<Vec<f64>> = y
            .iter()
            .map(|v| {
                let mut out = vec![0.0; v.len()];
                m.mul_vec(v, &mut out);
                out
            })
            .collect();
        let g = DMatrix::from_fn(p, p, |i, j| dot(&y[i], &my[j]));
        let g = (&g + g.transpose()) * 0.5;
        let ok = g.clone().cholesky().and_then(|c| {
            let r = c.l().transpose();
            let rinv = r.clone().try_inverse()?;
            let diag_ok = (0..p).all(|i| r[(i, i)] > 1e-7 * r[(0, 0)].abs().max(f64::MIN_POSITIVE));
            diag_ok.then_some(rinv)
        });
        match ok {
            Some(rinv) => {
                let n = y.first().map_or(0, |v| v.len());
                let old: Vec<Vec<f64>> = y.to_vec();
                for (j, col) in y.iter_mut().enumerate() {
                    for i in 0..n {
                        col[i] = (0..=j).map(|l| old[l][i] * rinv[(l, j)]).sum();
                    }
                }
            }
            None => gram_schmidt(m, y),
        }
    }
}

fn gram_schmidt(m: &CsrMatrix, y: &mut [Vec<f64>]) {
    let n = y.first().map_or(0, |v| v.len());
    let mut rng = ChaCha8Rng::seed_from_u64(0x6a09e667);
    for j in 0..y.len() {
        for _attempt in 0..3 {
            for _pass in 0..2 {
                for l in 0..j {
                    let mut ml = vec![0.0; n];
                    m.mul_vec(&y[l], &mut ml);
                    let c = dot(&y[j], &ml);
                    let (done, rest) = y.split_at_mut(j);
                    for (a, b) in rest[0].iter_mut().zip(&done[l]) {
                        *a -= c * b;
                    }
                }
            }
            let nm = m.quadratic_form(&y[j]).max(0.0).sqrt();
            if nm > 1e-300 {
                y[j].iter_mut().for_each(|v| *v /= nm);
                break;
            }
            y[j] = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        }
    }
}

fn subspace_iteration(sys: &DiscreteSystem, k: usize, p: usize, opts: &SolverOptions) -> Result<EigenPairs> {
    let n = sys.dof_count();
    let sigma = lower_shift(sys)?;
    let factor = ShiftedFactor::new(sys, sigma)?;
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut x: Vec<Vec<f64>> = (0..p).map(|_| (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect()).collect();
    m_orthonormalize(&sys.mass, &mut x);

    let mut theta = vec![0.0; p];
    let mut residuals = vec![f64::INFINITY; p];
    let mut iterations = 0;
    let mut history = Vec::new();
    while iterations < opts.max_iterations {
        iterations += 1;
        for col in x.iter_mut() {
            let mut rhs = vec![0.0; n];
            sys.mass.mul_vec(col, &mut rhs);
            factor.solve_in_place(&mut rhs);
            *col = rhs;
        }
        m_orthonormalize(&sys.mass, &mut x);
        let kx: Vec<Vec<f64>> = x
            .iter()
            .map(|v| {
                let mut out = vec![0.0; n];
                sys.stiffness.mul_vec(v, &mut out);
                out
            })
            .collect();
        let h = DMatrix::from_fn(p, p, |i, j| dot(&x[i], &kx[j]));
        let h = (&h + h.transpose()) * 0.5;
        let eig = SymmetricEigen::new(h);
        let mut order: Vec<usize> = (0..p).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let q = &eig.eigenvectors;
        let mut next = vec![vec![0.0; n]; p];
        for (slot, &c) in order.iter().enumerate() {
            theta[slot] = eig.eigenvalues[c];
            let out = &mut next[slot];
            for (l, xl) in x.iter().enumerate() {
                let w = q[(l, c)];
                for (o, v) in out.iter_mut().zip(xl) {
                    *o += w * v;
                }
            }
        }
        x = next;

        // Converge the wanted pairs plus any Ritz value tied with the k-th.
        let edge = theta[k - 1] + 1e-6 * (1.0 + theta[k - 1].abs());
        let wanted = (k..p).take_while(|&i| theta[i] <= edge).count() + k;
        let mut done = true;
        for i in 0..wanted.min(p) {
            residuals[i] = relative_residual(&sys.stiffness, &sys.mass, theta[i], &x[i]);
            let target = TARGET_RESIDUAL.max(4.0 * roundoff_floor(sys, theta[i], &x[i]));
            if residuals[i] > target {
                done = false;
            }
        }
        // Stop once rounding stalls progress.
        let worst = residuals[..wanted.min(p)].iter().copied().fold(0.0, f64::max);
        history.push(worst);
        let stalled = history.len() > 12 && worst > 0.5 * history[history.len() - 11] && worst < 1e-7;
        if done || stalled {
            break;
        }
    }
    let values = theta[..k].to_vec();
    let vectors = x[..k].to_vec();
    let res = residuals[..k].to_vec();
    check_residuals(sys, &values, &vectors, &res, iterations)?;

    // Completeness: the discrete problem has exactly as many eigenvalues below
    // the threshold as the Rayleigh-Ritz values found there.
    let threshold = theta[k - 1] + 1e-7 * (1.0 + theta[k - 1].abs());
    let counted = match ShiftedFactor::new(sys, threshold) {
        Ok(f) => f.inertia(),
        Err(_) => ShiftedFactor::new(sys, threshold + 1e-7 * (1.0 + threshold.abs()))?.inertia(),
    };
    let found = theta.iter().filter(|t| **t < threshold).count();
    if counted > found {
        return Err(Error::MissedEigenvalues { threshold, counted, found });
    }
    Ok(EigenPairs { values, vectors, residuals: res, iterations })
}
