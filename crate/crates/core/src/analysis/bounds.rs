//! Geometric eigenvalue bounds evaluated against a computed spectrum.

use std::f64::consts::PI;

use serde::Serialize;

use super::weyl::weyl_fit;
use crate::closed_form::dumbbell_mu2;
use crate::error::{Error, Result};
use crate::fem::Spectrum;
use crate::graph::MetricGraph;

const PI2: f64 = PI * PI;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundKind {
    Lower,
    Upper,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Holds,
    /// Holds with `|margin| ≤ tolerance`: the graph is (numerically) extremal.
    Sharp,
    Violated,
    Inapplicable,
    /// Reported for information only; never counts as a failure.
    Informational,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundEntry {
    pub name: String,
    pub kind: BoundKind,
    pub applicable: bool,
    /// Why the hypothesis fails, or a note on how the entry is used.
    pub note: Option<String>,
    /// One-based eigenvalue index the bound is compared with.
    pub index: usize,
    pub bound: Option<f64>,
    pub eigenvalue: Option<f64>,
    /// Positive when the inequality holds.
    pub margin: Option<f64>,
    pub tolerance: Option<f64>,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub total_length: f64,
    pub betti_number: usize,
    pub doubly_connected_length: f64,
    pub essential_edges: usize,
    pub diameter: f64,
    pub entries: Vec<BoundEntry>,
}

impl BoundReport {
    pub fn violations(&self) -> impl Iterator<Item = &BoundEntry> {
        self.entries.iter().filter(|e| e.verdict == Verdict::Violated)
    }

    pub fn all_hold(&self) -> bool {
        self.violations().next().is_none()
    }

    /// True when every pass/fail entry was excluded by its hypothesis.
    pub fn vacuous(&self) -> bool {
        !self.entries.iter().any(|e| matches!(e.verdict, Verdict::Holds | Verdict::Sharp | Verdict::Violated))
    }

    pub fn find(&self, name: &str) -> Option<&BoundEntry> {
        self.entries.iter().find(|e| e.name == name)
    }
}

/// `max(1e-6, 5·err)` where `err` is the discretization error estimate of `μ`.
pub fn bound_tolerance(spec: &Spectrum, i: usize) -> f64 {
    (5.0 * spec.error_estimate(i)).max(1e-6)
}

fn evaluated(name: &str, kind: BoundKind, index: usize, bound: f64, mu: f64, tol: f64) -> BoundEntry {
    let margin = match kind {
        BoundKind::Lower => mu - bound,
        BoundKind::Upper => bound - mu,
    };
    let verdict = if margin < -tol {
        Verdict::Violated
    } else if margin.abs() <= tol {
        Verdict::Sharp
    } else {
        Verdict::Holds
    };
    BoundEntry {
        name: name.into(),
        kind,
        applicable: true,
        note: None,
        index,
        bound: Some(bound),
        eigenvalue: Some(mu),
        margin: Some(margin),
        tolerance: Some(tol),
        verdict,
    }
}

fn inapplicable(name: &str, kind: BoundKind, index: usize, why: impl Into<String>) -> BoundEntry {
    BoundEntry {
        name: name.into(),
        kind,
        applicable: false,
        note: Some(why.into()),
        index,
        bound: None,
        eigenvalue: None,
        margin: None,
        tolerance: None,
        verdict: Verdict::Inapplicable,
    }
}

fn informational(mut e: BoundEntry, note: impl Into<String>) -> BoundEntry {
    e.verdict = Verdict::Informational;
    e.note = Some(note.into());
    e
}

/// Evaluates every bound whose hypothesis holds for `g`.
///
/// `spec` must be the spectrum of `g` with at least two eigenvalues.
pub fn check_bounds(g: &MetricGraph, spec: &Spectrum) -> Result<BoundReport> {
    g.require_connected()?;
    if !g.all_standard() || !g.zero_potential() {
        return Err(Error::UnsupportedConditions("bounds are stated for the standard Laplacian with q = 0".into()));
    }
    if spec.len() < 2 {
        return Err(Error::InsufficientEigenvalues { needed: 2, have: spec.len() });
    }
    let l = g.total_length();
    let mu = &spec.eigenvalues;
    let mu2 = mu[1];
    let tol2 = bound_tolerance(spec, 1);
    let betti = g.betti_number()?;
    let dcp = g.doubly_connected_part();
    let essential = g.remove_dummy_vertices();
    let m = essential.edge_count();
    let diameter = g.diameter()?;
    let mut entries = Vec::new();

    entries.push(evaluated("nicaise", BoundKind::Lower, 2, PI2 / (l * l), mu2, tol2));

    if dcp.edges.len() == g.edge_count() {
        entries.push(evaluated("band_levy", BoundKind::Lower, 2, 4.0 * PI2 / (l * l), mu2, tol2));
    } else {
        entries.push(inapplicable("band_levy", BoundKind::Lower, 2, format!("{} bridge edge(s)", g.edge_count() - dcp.edges.len())));
    }

    let dumbbell = dumbbell_mu2(l, dcp.length)?;
    // The dumbbell value is itself extrapolated FEM; allow for its error too.
    entries.push(evaluated("dumbbell", BoundKind::Lower, 2, dumbbell, mu2, tol2 + 1e-7 * dumbbell));

    if m == 1 && essential.edges()[0].is_loop() {
        entries.push(inapplicable("flower", BoundKind::Upper, 2, "single loop: mu_2 = 4 pi^2 / L^2 exceeds the m = 1 value"));
    } else {
        entries.push(evaluated("flower", BoundKind::Upper, 2, PI2 * (m * m) as f64 / (l * l), mu2, tol2));
    }

    let trusted = spec.trusted_count();
    for k in 1..=trusted {
        let e = evaluated("rohleder", BoundKind::Upper, k, PI2 * (k * k) as f64 / (diameter * diameter), mu[k - 1], bound_tolerance(spec, k - 1));
        if betti == 0 {
            entries.push(e);
        } else {
            entries.push(informational(e, "exploratory: hypothesis requires a tree"));
        }
    }

    for k in 2..=trusted {
        let tol = bound_tolerance(spec, k - 1);
        entries.push(evaluated("friedlander_quarter_wave", BoundKind::Lower, k, PI2 * (k * k) as f64 / (4.0 * l * l), mu[k - 1], tol));
        let printed = evaluated("friedlander_printed", BoundKind::Lower, k, PI2 * ((k - 1) * (k - 1)) as f64 / (l * l), mu[k - 1], tol);
        entries.push(informational(printed, "pi^2 (k-1)^2 / L^2 form; disagrees with the equilateral star minimizer for k >= 3"));
    }

    match weyl_fit(spec, g) {
        Ok(fit) => {
            let k = fit.worst_index;
            let e = BoundEntry {
                name: "weyl".into(),
                kind: BoundKind::Upper,
                applicable: true,
                note: Some(format!("max normalized deviation over {} trusted eigenvalues", fit.deviations.len())),
                index: k,
                bound: Some(PI2 * (k * k) as f64 / (l * l)),
                eigenvalue: Some(mu[k - 1]),
                margin: Some(fit.max_deviation),
                tolerance: None,
                verdict: Verdict::Informational,
            };
            entries.push(e);
        }
        Err(Error::InsufficientEigenvalues { needed, have }) => {
            entries.push(inapplicable("weyl", BoundKind::Upper, 0, format!("needs {needed} trusted eigenvalues, have {have}")));
        }
        Err(e) => return Err(e),
    }

    Ok(BoundReport {
        total_length: l,
        betti_number: betti,
        doubly_connected_length: dcp.length,
        essential_edges: m,
        diameter,
        entries,
    })
}
