//! Eigenvalue counting and the leading Weyl term `π²k²/L²`.

use std::f64::consts::PI;

use serde::Serialize;

use crate::closed_form::{interval_spectrum, EndCondition};
use crate::error::{Error, Result};
use crate::fem::{Spectrum, CLUSTER_TOLERANCE};
use crate::graph::MetricGraph;

/// Minimum number of trusted eigenvalues for [`weyl_fit`].
pub const MIN_WEYL_EIGENVALUES: usize = 20;

/// `N(λ) = #{k : μ_k ≤ λ}` over the computed eigenvalues.
///
/// Eigenvalues within the cluster tolerance of `λ` count as equal to it.
pub fn counting_function(spec: &Spectrum, lambda: f64) -> Result<usize> {
    let ceiling = spec.trust_ceiling();
    if !(lambda <= ceiling) {
        return Err(Error::AboveTrustCeiling { lambda, ceiling });
    }
    let cut = lambda + CLUSTER_TOLERANCE * (1.0 + lambda.abs());
    Ok(spec.eigenvalues.iter().filter(|&&m| m <= cut).count())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WeylFit {
    /// `|μ_k - π²k²/L²| / (kπ²/L²)` for `k = 1..=trusted`, index 0 is `k = 1`.
    pub deviations: Vec<f64>,
    pub max_deviation: f64,
    /// One-based index attaining `max_deviation`.
    pub worst_index: usize,
}

/// Normalized deviation from the leading Weyl term over the trusted eigenvalues.
/// The deviation stays bounded because the remainder is `O(k)`.
pub fn weyl_fit(spec: &Spectrum, g: &MetricGraph) -> Result<WeylFit> {
    let trusted = spec.trusted_count();
    if trusted < MIN_WEYL_EIGENVALUES {
        return Err(Error::InsufficientEigenvalues { needed: MIN_WEYL_EIGENVALUES, have: trusted });
    }
    let scale = PI * PI / g.total_length().powi(2);
    let deviations: Vec<f64> = spec.eigenvalues[..trusted]
        .iter()
        .enumerate()
        .map(|(i, mu)| {
            let k = (i + 1) as f64;
            (mu - scale * k * k).abs() / (k * scale)
        })
        .collect();
    let (worst, max) = deviations.iter().enumerate().fold((0, f64::NEG_INFINITY), |acc, (i, &d)| if d > acc.1 { (i, d) } else { acc });
    Ok(WeylFit { deviations, max_deviation: max, worst_index: worst + 1 })
}

/// Two-sided bracket from cutting every vertex apart: with `r = 2|E| - |V|`,
/// `μ_k(⊔ intervals) ≤ μ_k(Γ) ≤ μ_{k+r}(⊔ intervals)`.
/// Returns `(lower, upper)` for `k = 1..=count`.
pub fn interval_bracket(g: &MetricGraph, count: usize) -> Vec<(f64, f64)> {
    let r = (2 * g.edge_count()).saturating_sub(g.vertex_count());
    let need = count + r;
    let mut all: Vec<f64> = g
        .edges()
        .iter()
        .flat_map(|e| interval_spectrum(e.length, (EndCondition::Neumann, EndCondition::Neumann), need))
        .collect();
    all.sort_by(f64::total_cmp);
    (0..count).map(|i| (all[i], all[i + r])).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fem::{compute_spectrum, SpectrumOptions};
    use crate::graph::{interval, loop_graph};

    #[test]
    fn counting_examples() {
        let s = compute_spectrum(&interval(1.0), &SpectrumOptions::with_k(4)).unwrap();
        assert_eq!(counting_function(&s, 5.0).unwrap(), 1);
        assert_eq!(counting_function(&s, 10.0).unwrap(), 2);
        assert_eq!(counting_function(&s, -1.0).unwrap(), 0);
        assert!(matches!(counting_function(&s, 1e4), Err(Error::AboveTrustCeiling { .. })));
    }

    #[test]
    fn interval_and_loop_deviation_bounded() {
        for g in [interval(1.0), loop_graph(1.0)] {
            let s = compute_spectrum(&g, &SpectrumOptions::with_k(30)).unwrap();
            let fit = weyl_fit(&s, &g).unwrap();
            assert!(fit.max_deviation <= 2.0 + 1e-3, "{}", fit.max_deviation);
        }
        // Exact interval values: |(k-1)² - k²| / k = (2k - 1) / k < 2.
        let s = compute_spectrum(&interval(1.0), &SpectrumOptions::with_k(5)).unwrap();
        assert!(matches!(weyl_fit(&s, &interval(1.0)), Err(Error::InsufficientEigenvalues { needed: 20, have: 5 })));
    }

    #[test]
    fn bracket_contains_spectrum() {
        let g = crate::graph::three_star(0.4, 1.0, 1.7);
        let s = compute_spectrum(&g, &SpectrumOptions::with_k(10)).unwrap();
        for (mu, (lo, hi)) in s.eigenvalues.iter().zip(interval_bracket(&g, 10)) {
            assert!(lo - 1e-6 <= *mu && *mu <= hi + 1e-6, "{lo} {mu} {hi}");
        }
        // An interval is its own cut.
        let b = interval_bracket(&interval(1.0), 3);
        assert_eq!(b[2].0, b[2].1);
    }
}
