//! Numerical checks of the extremal inequalities behind the optimality
//! results (Bernstein on the circle, Markov Brothers on the interval, the
//! alpha >= 1/2 lemma for imaginary-axis stability) plus a brute-force
//! grid oracle that rediscovers the degree-2/3 optima independently of
//! the closed forms.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::poly::RealPolynomial;
use crate::stability::{self, Axis, DEFAULT_EPS, DEFAULT_SAMPLES, DEFAULT_TOL};
use crate::{Error, Result};

/// Which extremal quantity the grid oracle maximizes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OracleTarget {
    NegativeReal,
    Imaginary,
    Disc,
}

/// Outcome of a grid search over free stability-polynomial coefficients.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct OracleResult {
    pub best_width: f64,
    pub best_coeffs: Vec<f64>,
    pub grid_step: f64,
    pub evaluations: usize,
}

/// max |p'| on the unit circle divided by m * max |p| there. At most 1 for
/// deg p <= m, with equality only for multiples of mu^m.
pub fn bernstein_ratio(p: &RealPolynomial, m: usize, samples: usize) -> Result<f64> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if m < 1 || p.degree() > m {
        return Err(Error::BadPolynomial(format!(
            "degree {} exceeds Bernstein index {}",
            p.degree(),
            m
        )));
    }
    let samples = samples.max(256);
    let d = p.derivative();
    // real coefficients: |p(e^{i theta})| is even in theta
    let circle_max = |q: &RealPolynomial| {
        stability::scan_max(
            |theta| q.abs2_at(Complex64::new(theta.cos(), theta.sin())),
            0.0,
            PI,
            samples,
        )
        .sqrt()
    };
    Ok(circle_max(&d) / (m as f64 * circle_max(p)))
}

/// max |p'| on [-1, 1] divided by m^2 * max |p| there. At most 1 for
/// deg p <= m, with equality only for multiples of T_m.
pub fn markov_ratio(p: &RealPolynomial, m: usize, samples: usize) -> Result<f64> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if m < 1 || p.degree() > m {
        return Err(Error::BadPolynomial(format!(
            "degree {} exceeds Markov index {}",
            p.degree(),
            m
        )));
    }
    let samples = samples.max(256);
    let d = p.derivative();
    let interval_max = |q: &RealPolynomial| {
        stability::scan_max(
            |x| {
                let v = q.eval_real(x);
                v * v
            },
            -1.0,
            1.0,
            samples,
        )
        .sqrt()
    };
    Ok(interval_max(&d) / ((m * m) as f64 * interval_max(p)))
}

/// The quadratic coefficient alpha in P(z) = 1 + z + alpha z^2 + ...
pub fn alpha_coefficient(p: &RealPolynomial) -> Result<f64> {
    if !stability::consistency_check(p) {
        return Err(Error::NotConsistent);
    }
    Ok(p.coeff(2))
}

/// A nonempty imaginary stability interval forces alpha >= 1/2.
pub fn lemma_holds(p: &RealPolynomial) -> Result<bool> {
    let alpha = alpha_coefficient(p)?;
    let width = stability::stability_width(p, Axis::Imaginary, DEFAULT_EPS, DEFAULT_TOL);
    Ok(width <= 0.0 || alpha >= 0.5 - 1e-12)
}

/// Q(y) = |P(i sqrt(y))|^2 as a real polynomial in y: with the even/odd
/// split P(iy) = R(y^2) + iy I(y^2), Q = R^2 + y I^2. Consistency gives
/// Q(0) = 1 and Q'(0) = 1 - 2 alpha.
pub fn q_expansion(p: &RealPolynomial) -> Result<RealPolynomial> {
    if !stability::consistency_check(p) {
        return Err(Error::NotConsistent);
    }
    let (r, i) = p.imaginary_parts();
    let y = RealPolynomial::new(vec![0.0, 1.0]);
    Ok(r.multiply(&r).add(&y.multiply(&i.multiply(&i))))
}

/// Exhaustive grid search over the free coefficients of a consistent
/// degree-m polynomial (a2, and a3 when m = 3), maximizing the target
/// axis width or, for the disc, reporting 2m on feasibility and 0
/// otherwise. Interior widths use loose tolerance for speed; the winner
/// is re-measured at the defaults. Ties keep the lexicographically
/// smallest coefficient vector.
pub fn oracle_search(
    m: usize,
    target: OracleTarget,
    coeff_box: &[(f64, f64)],
    step: f64,
) -> Result<OracleResult> {
    if m != 2 && m != 3 {
        return Err(Error::UnsupportedOracleDegree(m));
    }
    let free = m - 1;
    if coeff_box.len() != free {
        return Err(Error::DimensionMismatch(format!(
            "expected {free} coefficient ranges, got {}",
            coeff_box.len()
        )));
    }
    if !(step > 0.0) || coeff_box.iter().any(|&(lo, hi)| !(lo <= hi) || !lo.is_finite() || !hi.is_finite()) {
        return Err(Error::EmptyGrid);
    }
    let axes: Vec<Vec<f64>> = coeff_box
        .iter()
        .map(|&(lo, hi)| {
            let n = ((hi - lo) / step).floor() as usize;
            (0..=n).map(|k| lo + step * k as f64).collect()
        })
        .collect();
    if axes.iter().any(|a| a.is_empty()) {
        return Err(Error::EmptyGrid);
    }

    // loose interior measurement: coarse sampling, 1e-6 bisection
    let rough = |coeffs: &[f64]| -> f64 {
        let p = RealPolynomial::new(coeffs.to_vec());
        match target {
            OracleTarget::NegativeReal => {
                stability::stability_width_with(&p, Axis::NegativeReal, DEFAULT_EPS, 1e-6, 513)
            }
            OracleTarget::Imaginary => {
                stability::stability_width_with(&p, Axis::Imaginary, DEFAULT_EPS, 1e-6, 513)
            }
            OracleTarget::Disc => {
                if stability::disc_boundary_max(&p, m, 512) <= 1.0 + 1e-9 {
                    2.0 * m as f64
                } else {
                    0.0
                }
            }
        }
    };

    let mut evaluations = 0usize;
    let mut best_width = f64::NEG_INFINITY;
    let mut best: Vec<f64> = Vec::new();
    let mut candidate = vec![1.0, 1.0, 0.0, 0.0];
    candidate.truncate(2 + free);
    // ascending lexicographic order + strict improvement = smallest tie wins
    for &a2 in &axes[0] {
        candidate[2] = a2;
        if free == 2 {
            for &a3 in &axes[1] {
                candidate[3] = a3;
                let w = rough(&candidate);
                evaluations += 1;
                if w > best_width {
                    best_width = w;
                    best = candidate.clone();
                }
            }
        } else {
            let w = rough(&candidate);
            evaluations += 1;
            if w > best_width {
                best_width = w;
                best = candidate.clone();
            }
        }
    }

    let p = RealPolynomial::new(best.clone());
    let best_width = match target {
        OracleTarget::NegativeReal => {
            stability::stability_width(&p, Axis::NegativeReal, DEFAULT_EPS, DEFAULT_TOL)
        }
        OracleTarget::Imaginary => {
            stability::stability_width(&p, Axis::Imaginary, DEFAULT_EPS, DEFAULT_TOL)
        }
        OracleTarget::Disc => {
            if stability::disc_boundary_max(&p, m, DEFAULT_SAMPLES) <= 1.0 + 1e-9 {
                2.0 * m as f64
            } else {
                0.0
            }
        }
    };
    Ok(OracleResult { best_width, best_coeffs: best, grid_step: step, evaluations })
}
