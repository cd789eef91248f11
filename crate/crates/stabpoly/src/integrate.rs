//! Time steppers on linear method-of-lines test systems. The heat system
//! has a negative real spectrum, the advection system a purely imaginary
//! one, so runs at a fraction of the theoretical stability limit
//! demonstrate the widths operationally.

use std::io::{self, Write};

use serde::{Deserialize, Serialize};

use crate::optimal::SubstepSchedule;
use crate::poly::RealPolynomial;
use crate::stability::ButcherTableau;
use crate::{Error, Result};

/// Where the spectrum of the system lives.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpectralHint {
    RealNegative,
    Imaginary,
    General,
}

enum Kind {
    /// Dirichlet second difference on interior points, scaled by 1/dx^2.
    Heat { inv_dx2: f64 },
    /// Periodic central difference, scaled by c/(2 dx).
    Advection { coef: f64 },
    Dense(Vec<Vec<f64>>),
}

/// A fixed real linear operator x -> Ax with spectral metadata.
pub struct LinearSystem {
    dim: usize,
    hint: SpectralHint,
    lambda_extreme: f64,
    kind: Kind,
}

impl LinearSystem {
    pub fn dimension(&self) -> usize {
        self.dim
    }

    pub fn spectral_hint(&self) -> SpectralHint {
        self.hint
    }

    /// Magnitude of the spectrally dominant eigenvalue.
    pub fn lambda_extreme(&self) -> f64 {
        self.lambda_extreme
    }

    /// Wrap an explicit matrix. `lambda_extreme` is taken on trust.
    pub fn dense(rows: Vec<Vec<f64>>, hint: SpectralHint, lambda_extreme: f64) -> Result<Self> {
        let dim = rows.len();
        if dim == 0 || rows.iter().any(|r| r.len() != dim) {
            return Err(Error::DimensionMismatch("dense system must be square".into()));
        }
        Ok(Self { dim, hint, lambda_extreme, kind: Kind::Dense(rows) })
    }

    /// Ax.
    pub fn apply(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch(format!(
                "state has length {}, system has dimension {}",
                x.len(),
                self.dim
            )));
        }
        let n = self.dim;
        Ok(match &self.kind {
            Kind::Heat { inv_dx2 } => (0..n)
                .map(|j| {
                    let left = if j > 0 { x[j - 1] } else { 0.0 };
                    let right = if j + 1 < n { x[j + 1] } else { 0.0 };
                    (left - 2.0 * x[j] + right) * inv_dx2
                })
                .collect(),
            Kind::Advection { coef } => (0..n)
                .map(|j| {
                    let left = x[(j + n - 1) % n];
                    let right = x[(j + 1) % n];
                    -coef * (right - left)
                })
                .collect(),
            Kind::Dense(rows) => rows
                .iter()
                .map(|row| row.iter().zip(x).map(|(a, v)| a * v).sum())
                .collect(),
        })
    }
}

/// Second-difference Laplacian on n interior points of [0,1] with
/// homogeneous Dirichlet ends; eigenvalues -(4/dx^2) sin^2(j pi / (2(n+1))).
pub fn heat_system(n: usize) -> Result<LinearSystem> {
    if n < 2 {
        return Err(Error::DegreeTooSmall { min: 2, got: n });
    }
    let dx = 1.0 / (n + 1) as f64;
    let inv_dx2 = 1.0 / (dx * dx);
    let theta = n as f64 * std::f64::consts::PI / (2.0 * (n + 1) as f64);
    let s = theta.sin();
    Ok(LinearSystem {
        dim: n,
        hint: SpectralHint::RealNegative,
        lambda_extreme: 4.0 * inv_dx2 * s * s,
        kind: Kind::Heat { inv_dx2 },
    })
}

/// Periodic central-difference advection (Ax)_j = -c(x_{j+1}-x_{j-1})/(2 dx)
/// with dx = 1/n; skew-symmetric, eigenvalues i (c/dx) sin(2 pi j / n).
pub fn advection_system(n: usize, c: f64) -> Result<LinearSystem> {
    if n < 3 {
        return Err(Error::DegreeTooSmall { min: 3, got: n });
    }
    if !(c > 0.0) {
        return Err(Error::NonpositiveRoot(c));
    }
    let dx = 1.0 / n as f64;
    Ok(LinearSystem {
        dim: n,
        hint: SpectralHint::Imaginary,
        lambda_extreme: c / dx,
        kind: Kind::Advection { coef: c / (2.0 * dx) },
    })
}

/// Per-step 2-norm trace of a run. `aborted` is set when the overflow
/// guard (norm > 1e12 times the initial norm) stopped the run early.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RunRecord {
    pub steps_taken: usize,
    pub norm_history: Vec<f64>,
    pub aborted: bool,
}

fn norm(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

/// Drive `advance` for up to n_steps, recording norms and applying the
/// overflow guard.
fn run_loop(
    sys: &LinearSystem,
    n_steps: usize,
    x0: &[f64],
    mut advance: impl FnMut(&mut Vec<f64>) -> Result<()>,
) -> Result<RunRecord> {
    if x0.len() != sys.dim {
        return Err(Error::DimensionMismatch(format!(
            "initial state has length {}, system has dimension {}",
            x0.len(),
            sys.dim
        )));
    }
    let guard = 1e12 * norm(x0);
    let mut x = x0.to_vec();
    let mut norm_history = vec![norm(&x)];
    let mut aborted = false;
    for _ in 0..n_steps {
        advance(&mut x)?;
        let nx = norm(&x);
        norm_history.push(nx);
        if guard > 0.0 && nx > guard {
            aborted = true;
            break;
        }
    }
    Ok(RunRecord { steps_taken: norm_history.len() - 1, norm_history, aborted })
}

/// Macro-steps of m Euler substeps x <- x + (h/xi_i) Ax in schedule order;
/// realizes x_{n+1} = P(hA) x_n with P the schedule's product polynomial.
pub fn composed_euler_run(
    schedule: &SubstepSchedule,
    sys: &LinearSystem,
    h: f64,
    n_steps: usize,
    x0: &[f64],
) -> Result<RunRecord> {
    if !(h > 0.0) {
        return Err(Error::NonpositiveRoot(h));
    }
    run_loop(sys, n_steps, x0, |x| {
        for &xi in schedule.xi() {
            let ax = sys.apply(x)?;
            let s = h / xi;
            for (v, a) in x.iter_mut().zip(&ax) {
                *v += s * a;
            }
        }
        Ok(())
    })
}

/// Standard explicit Runge-Kutta stage loop.
pub fn rk_run(
    t: &ButcherTableau,
    sys: &LinearSystem,
    h: f64,
    n_steps: usize,
    x0: &[f64],
) -> Result<RunRecord> {
    if !(h > 0.0) {
        return Err(Error::NonpositiveRoot(h));
    }
    let s = t.stages();
    run_loop(sys, n_steps, x0, |x| {
        let mut k: Vec<Vec<f64>> = Vec::with_capacity(s);
        for i in 0..s {
            let mut stage = x.clone();
            for (j, kj) in k.iter().enumerate() {
                let w = h * t.a()[i][j];
                if w != 0.0 {
                    for (v, g) in stage.iter_mut().zip(kj) {
                        *v += w * g;
                    }
                }
            }
            k.push(sys.apply(&stage)?);
        }
        for (i, ki) in k.iter().enumerate() {
            let w = h * t.b()[i];
            for (v, g) in x.iter_mut().zip(ki) {
                *v += w * g;
            }
        }
        Ok(())
    })
}

/// One macro-step applies P(hA) by Horner with repeated matvecs:
/// y <- hA y + c_j x, from the leading coefficient down.
pub fn polynomial_run(
    p: &RealPolynomial,
    sys: &LinearSystem,
    h: f64,
    n_steps: usize,
    x0: &[f64],
) -> Result<RunRecord> {
    if !(h > 0.0) {
        return Err(Error::NonpositiveRoot(h));
    }
    let m = p.degree();
    run_loop(sys, n_steps, x0, |x| {
        let mut y: Vec<f64> = x.iter().map(|v| v * p.coeff(m)).collect();
        for j in (0..m).rev() {
            let ay = sys.apply(&y)?;
            let c = p.coeff(j);
            for ((v, a), xv) in y.iter_mut().zip(&ay).zip(x.iter()) {
                *v = h * a + c * xv;
            }
        }
        *x = y;
        Ok(())
    })
}

/// Final norm over initial norm.
pub fn growth_factor(r: &RunRecord) -> Result<f64> {
    let first = *r.norm_history.first().ok_or(Error::ZeroInitialState)?;
    if !(first > 0.0) {
        return Err(Error::ZeroInitialState);
    }
    Ok(r.norm_history.last().unwrap() / first)
}

/// CSV with header "step,norm"; appends "# aborted_at=<k>" if the guard fired.
pub fn write_run_csv<W: Write>(r: &RunRecord, mut w: W) -> io::Result<()> {
    writeln!(w, "step,norm")?;
    for (i, v) in r.norm_history.iter().enumerate() {
        writeln!(w, "{i},{v}")?;
    }
    if r.aborted {
        writeln!(w, "# aborted_at={}", r.steps_taken)?;
    }
    Ok(())
}
