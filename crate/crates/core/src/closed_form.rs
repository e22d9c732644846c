//! Exact and semi-exact spectra of the named families.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::fem::{spectrum_with_counts, SpectrumOptions};
use crate::graph::dumbbell;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EndCondition {
    Neumann,
    Dirichlet,
}

#[derive(Debug, Clone, PartialEq)]
pub enum SecularProblem {
    Interval { length: f64, left: EndCondition, right: EndCondition },
    Loop { length: f64 },
    ThreeStar { lengths: [f64; 3] },
    EquilateralStar { edges: usize, total: f64 },
    EquilateralFlower { petals: usize, total: f64 },
    FigureEight { l1: f64, l2: f64 },
    /// Symmetric dumbbell of total length `total` whose loops add up to `loops`.
    Dumbbell { total: f64, loops: f64 },
}

fn positive(name: &str, x: f64) -> Result<()> {
    if x.is_finite() && x > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("{name} must be positive and finite, got {x}")))
    }
}

impl SecularProblem {
    pub fn validate(&self) -> Result<()> {
        match *self {
            SecularProblem::Interval { length, .. } | SecularProblem::Loop { length } => positive("length", length),
            SecularProblem::ThreeStar { lengths } => lengths.iter().try_for_each(|&l| positive("edge length", l)),
            SecularProblem::EquilateralStar { edges: m, total } | SecularProblem::EquilateralFlower { petals: m, total } => {
                if m == 0 {
                    return Err(Error::InvalidParameter("edge count must be at least 1".into()));
                }
                positive("total length", total)
            }
            SecularProblem::FigureEight { l1, l2 } => positive("l1", l1).and(positive("l2", l2)),
            SecularProblem::Dumbbell { total, loops } => {
                positive("total length", total)?;
                if !(0.0..=total).contains(&loops) {
                    return Err(Error::InvalidParameter(format!("loop length {loops} outside [0, {total}]")));
                }
                Ok(())
            }
        }
    }
}

/// The `k` lowest eigenvalues of `-d²/dx²` on `[0, L]`.
pub fn interval_spectrum(length: f64, bc: (EndCondition, EndCondition), k: usize) -> Vec<f64> {
    use EndCondition::*;
    let s = PI * PI / (length * length);
    (1..=k)
        .map(|k| {
            let k = k as f64;
            match bc {
                (Neumann, Neumann) => s * (k - 1.0).powi(2),
                (Dirichlet, Dirichlet) => s * k * k,
                _ => s * (2.0 * k - 1.0).powi(2) / 4.0,
            }
        })
        .collect()
}

/// `sin a cos b cos c + cos a sin b cos c + cos a cos b sin c` with
/// `(a, b, c) = √λ (ℓ₁, ℓ₂, ℓ₃)`: the pole-free form of `Σ tan(√λ ℓᵢ) = 0`.
pub fn three_star_secular(l1: f64, l2: f64, l3: f64, lambda: f64) -> f64 {
    let w = lambda.max(0.0).sqrt();
    secular(&[l1, l2, l3], w)
}

fn secular(l: &[f64; 3], w: f64) -> f64 {
    let (sa, ca) = (w * l[0]).sin_cos();
    let (sb, cb) = (w * l[1]).sin_cos();
    let (sc, cc) = (w * l[2]).sin_cos();
    sa * cb * cc + ca * sb * cc + ca * cb * sc
}

/// Points where some `cos(ω ℓᵢ)` vanishes, with the number of edges sharing each.
fn cosine_zeros(l: &[f64; 3], upto: f64) -> Vec<(f64, usize)> {
    let mut all: Vec<f64> = Vec::new();
    for &li in l {
        let mut j = 0.0;
        loop {
            let p = (2.0 * j + 1.0) * PI / (2.0 * li);
            if p > upto {
                break;
            }
            all.push(p);
            j += 1.0;
        }
    }
    all.sort_by(f64::total_cmp);
    let mut out: Vec<(f64, usize)> = Vec::new();
    for p in all {
        match out.last_mut() {
            Some((q, c)) if (p - *q).abs() <= 1e-12 * p => *c += 1,
            _ => out.push((p, 1)),
        }
    }
    out
}

fn bisect(l: &[f64; 3], mut a: f64, mut b: f64) -> f64 {
    let mut fa = secular(l, a);
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        let fm = secular(l, m);
        if fm == 0.0 {
            return m;
        }
        if (fm > 0.0) == (fa > 0.0) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

/// The `k` lowest standard-Laplacian eigenvalues of the star with edge lengths
/// `l1, l2, l3`, with multiplicity.
///
/// Between consecutive distinct cosine zeros `Σ tan` increases from `-∞` to
/// `+∞`, so each such gap holds exactly one root; a point where `j ≥ 2` cosines
/// vanish together is an eigenvalue of multiplicity `j - 1`. Roots come from
/// sign changes of the pole-free form on a uniform `√λ` grid, and the per-gap
/// count validates the grid.
pub fn three_star_spectrum(l1: f64, l2: f64, l3: f64, k: usize) -> Result<Vec<f64>> {
    three_star_spectrum_refined(l1, l2, l3, k, 40)
}

/// As [`three_star_spectrum`] with grid step `π / (refine · max ℓ)`.
pub fn three_star_spectrum_refined(l1: f64, l2: f64, l3: f64, k: usize, refine: usize) -> Result<Vec<f64>> {
    let l = [l1, l2, l3];
    SecularProblem::ThreeStar { lengths: l }.validate()?;
    if k == 0 {
        return Ok(Vec::new());
    }
    let lmax = l.iter().copied().fold(0.0, f64::max);
    let upto = (k as f64 + 2.0) * PI / lmax;
    let poles = cosine_zeros(&l, upto);
    let step = PI / (refine.max(1) as f64 * lmax);
    let near_coincidence = |w: f64| poles.iter().any(|&(p, c)| c >= 2 && (w - p).abs() <= 1e-9 * p);

    let mut roots = Vec::new();
    let mut a = 0.0;
    let mut fa = secular(&l, a);
    while a < upto {
        let b = (a + step).min(upto);
        let fb = secular(&l, b);
        if fb == 0.0 {
            roots.push(b);
        } else if fa != 0.0 && (fa > 0.0) != (fb > 0.0) {
            roots.push(bisect(&l, a, b));
        }
        a = b;
        fa = fb;
    }
    roots.retain(|&w| w > 0.0 && !near_coincidence(w));
    roots.dedup_by(|x, y| (*x - *y).abs() <= 1e-12 * *x);

    let mut omega = vec![0.0];
    let mut cursor = 0;
    for win in poles.windows(2) {
        let (p, c) = win[0];
        let q = win[1].0;
        for _ in 1..c {
            omega.push(p);
        }
        let inside: Vec<f64> = roots[cursor..].iter().copied().take_while(|&w| w < q).filter(|&w| w > p).collect();
        let skipped = roots[cursor..].iter().take_while(|&&w| w < q).count();
        cursor += skipped;
        if inside.len() != 1 {
            return Err(Error::GridTooCoarse(format!(
                "found {} roots between cosine zeros {p} and {q}, expected 1",
                inside.len()
            )));
        }
        omega.push(inside[0]);
        if omega.len() >= k {
            break;
        }
    }
    if omega.len() < k {
        return Err(Error::GridTooCoarse(format!("only {} eigenvalues bracketed", omega.len())));
    }
    omega.truncate(k);
    Ok(omega.into_iter().map(|w| w * w).collect())
}

/// `μ₂` of a named family.
pub fn named_mu2(problem: &SecularProblem) -> Result<f64> {
    problem.validate()?;
    let pi2 = PI * PI;
    Ok(match *problem {
        SecularProblem::Interval { length, left: EndCondition::Neumann, right: EndCondition::Neumann } => pi2 / (length * length),
        SecularProblem::Interval { .. } => {
            return Err(Error::UnsupportedFamily("μ₂ is defined for the interval with Neumann ends".into()))
        }
        SecularProblem::Loop { length } => 4.0 * pi2 / (length * length),
        SecularProblem::ThreeStar { lengths: [a, b, c] } => three_star_spectrum(a, b, c, 2)?[1],
        SecularProblem::EquilateralStar { edges: 1, total } => pi2 / (total * total),
        SecularProblem::EquilateralStar { edges: m, total } => pi2 * (m * m) as f64 / (4.0 * total * total),
        SecularProblem::EquilateralFlower { petals: 1, total } => 4.0 * pi2 / (total * total),
        SecularProblem::EquilateralFlower { petals: m, total } => pi2 * (m * m) as f64 / (total * total),
        SecularProblem::FigureEight { l1, l2 } => 4.0 * pi2 / (l1 + l2).powi(2),
        SecularProblem::Dumbbell { total, loops } => dumbbell_mu2(total, loops)?,
    })
}

/// Element length for the unit-length dumbbell computation.
const DUMBBELL_MESH: f64 = 1e-3;

/// `μ₂` of the symmetric dumbbell by finite elements with Richardson
/// extrapolation; there is no closed form in between the endpoint cases.
pub fn dumbbell_mu2(total: f64, loops: f64) -> Result<f64> {
    SecularProblem::Dumbbell { total, loops }.validate()?;
    // μ₂ depends continuously on V; collapse loops or handles too short to mesh.
    let v = match loops / total {
        v if v <= 1e-9 => 0.0,
        v if v >= 1.0 - 1e-9 => 1.0,
        v => v,
    };
    let g = dumbbell(1.0, v);
    let counts: Vec<usize> = g
        .edges()
        .iter()
        .map(|e| ((e.length / DUMBBELL_MESH).ceil() as usize).max(8))
        .collect();
    let s = spectrum_with_counts(&g, &counts, &SpectrumOptions::with_k(2).extrapolated())?;
    Ok(s.eigenvalues[1] / (total * total))
}
