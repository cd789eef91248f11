//! Stability polynomial extraction from explicit Runge-Kutta tableaus and
//! stability region measurement: axis interval widths, disc-boundary
//! maxima, and 2-D grid scans.

use std::f64::consts::PI;
use std::io::{self, Write};

use num_complex::Complex64;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize};

use crate::dd::Dd;
use crate::poly::RealPolynomial;
use crate::{Error, Result};

/// Membership slack for |P| <= 1 tests. Optimal polynomials attain
/// |P| = 1 at interior extrema, so a strict test fails under roundoff.
pub const DEFAULT_EPS: f64 = 1e-9;
/// Bisection width for interval measurement.
pub const DEFAULT_TOL: f64 = 1e-8;
/// Dense sampling count before local refinement.
pub const DEFAULT_SAMPLES: usize = 4096;

/// Which segment of the complex plane an interval is measured on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Axis {
    /// The segment [-a, 0] on the real axis.
    NegativeReal,
    /// The segment [-ia, ia] on the imaginary axis.
    Imaginary,
}

/// Explicit Runge-Kutta coefficients (A, b, c).
#[derive(Clone, Debug, Serialize)]
pub struct ButcherTableau {
    #[serde(rename = "A")]
    a: Vec<Vec<f64>>,
    b: Vec<f64>,
    c: Vec<f64>,
}

impl ButcherTableau {
    /// Validates explicitness (A strictly lower triangular), consistency
    /// (sum b = 1), and the row-sum convention c_i = sum_j A_ij.
    pub fn new(a: Vec<Vec<f64>>, b: Vec<f64>, c: Vec<f64>) -> Result<Self> {
        let s = b.len();
        if s == 0 {
            return Err(Error::BadTableau("tableau must have at least one stage".into()));
        }
        if a.len() != s || c.len() != s || a.iter().any(|row| row.len() != s) {
            return Err(Error::BadTableau("A, b, c dimensions disagree".into()));
        }
        for (i, row) in a.iter().enumerate() {
            if row[i..].iter().any(|&v| v != 0.0) {
                return Err(Error::NotExplicit);
            }
        }
        let sum_b: f64 = b.iter().sum();
        if (sum_b - 1.0).abs() > 1e-12 {
            return Err(Error::BadTableau(format!("sum of b is {sum_b}, expected 1")));
        }
        for (i, row) in a.iter().enumerate() {
            let rs: f64 = row.iter().sum();
            if (rs - c[i]).abs() > 1e-12 {
                return Err(Error::BadTableau(format!(
                    "row sum {rs} of stage {i} does not match c = {}",
                    c[i]
                )));
            }
        }
        Ok(Self { a, b, c })
    }

    pub fn stages(&self) -> usize {
        self.b.len()
    }

    pub fn a(&self) -> &[Vec<f64>] {
        &self.a
    }

    pub fn b(&self) -> &[f64] {
        &self.b
    }

    pub fn c(&self) -> &[f64] {
        &self.c
    }

    /// Explicit Euler.
    pub fn euler() -> Self {
        Self::new(vec![vec![0.0]], vec![1.0], vec![0.0]).unwrap()
    }

    /// The classical fourth-order method.
    pub fn rk4() -> Self {
        Self::new(
            vec![
                vec![0.0, 0.0, 0.0, 0.0],
                vec![0.5, 0.0, 0.0, 0.0],
                vec![0.0, 0.5, 0.0, 0.0],
                vec![0.0, 0.0, 1.0, 0.0],
            ],
            vec![1.0 / 6.0, 1.0 / 3.0, 1.0 / 3.0, 1.0 / 6.0],
            vec![0.0, 0.5, 0.5, 1.0],
        )
        .unwrap()
    }
}

impl<'de> Deserialize<'de> for ButcherTableau {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Repr {
            #[serde(rename = "A")]
            a: Vec<Vec<f64>>,
            b: Vec<f64>,
            c: Vec<f64>,
        }
        let r = Repr::deserialize(d)?;
        ButcherTableau::new(r.a, r.b, r.c).map_err(|e| D::Error::custom(e.to_string()))
    }
}

/// P(z) = 1 + sum_j z^{j+1} (b^T A^j 1). Finite because A is nilpotent.
pub fn stability_polynomial(t: &ButcherTableau) -> RealPolynomial {
    let s = t.stages();
    let mut v = vec![Dd::from_f64(1.0); s];
    let mut coeffs = vec![1.0];
    for _ in 0..s {
        let mut dot = Dd::ZERO;
        for i in 0..s {
            dot = dot.add(v[i].mul_f64(t.b[i]));
        }
        coeffs.push(dot.value());
        let mut next = vec![Dd::ZERO; s];
        for i in 0..s {
            for j in 0..i {
                next[i] = next[i].add(v[j].mul_f64(t.a[i][j]));
            }
        }
        v = next;
    }
    RealPolynomial::new(coeffs)
}

/// P(0) = P'(0) = 1 within 1e-12.
pub fn consistency_check(p: &RealPolynomial) -> bool {
    (p.coeff(0) - 1.0).abs() <= 1e-12 && (p.coeff(1) - 1.0).abs() <= 1e-12
}

/// Max of |P(z)|^2 over the axis segment of extent `a`, by dense sampling
/// plus golden-section refinement around every local maximum.
pub fn axis_max(p: &RealPolynomial, axis: Axis, a: f64, samples: usize) -> f64 {
    assert!(a > 0.0, "segment extent must be positive");
    assert!(samples >= 16, "need at least 16 samples");
    match axis {
        Axis::NegativeReal => scan_max(
            |x| {
                let v = p.eval_real(x);
                v * v
            },
            -a,
            0.0,
            samples,
        ),
        Axis::Imaginary => {
            // |P(iy)|^2 = R(y^2)^2 + y^2 I(y^2)^2, even in y
            let (r, i) = p.imaginary_parts();
            scan_max(
                |y| {
                    let w = y * y;
                    let rv = r.eval_real(w);
                    let iv = i.eval_real(w);
                    rv * rv + w * iv * iv
                },
                0.0,
                a,
                samples,
            )
        }
    }
}

/// sup{ a : |P| <= 1 + eps on the axis segment of extent a }, by geometric
/// bracketing then bisection. Widths explained entirely by the eps slack
/// (the quadratic escape of a tangent polynomial) read as zero.
pub fn stability_width(p: &RealPolynomial, axis: Axis, eps: f64, tol: f64) -> f64 {
    stability_width_with(p, axis, eps, tol, DEFAULT_SAMPLES)
}

/// As [`stability_width`] with an explicit sampling density.
pub fn stability_width_with(
    p: &RealPolynomial,
    axis: Axis,
    eps: f64,
    tol: f64,
    samples: usize,
) -> f64 {
    let bound = (1.0 + eps) * (1.0 + eps);
    let stable = |a: f64| axis_max(p, axis, a, samples) <= bound;
    if !stable(tol) {
        return 0.0;
    }
    let deg = p.degree().max(1) as f64;
    let cap = 8.0 * deg * deg;
    let mut lo = tol;
    let mut hi = 1.0_f64.min(cap);
    if stable(hi) {
        lo = hi;
        loop {
            if lo >= cap {
                return cap;
            }
            hi = (2.0 * lo).min(cap);
            if !stable(hi) {
                break;
            }
            lo = hi;
        }
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if stable(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let floor = 4.0 * (deg * eps.max(0.0)).sqrt();
    if lo <= floor {
        0.0
    } else {
        lo
    }
}

/// Max of |P(z)| over the disc boundary z = m(e^{i theta} - 1). The disc
/// D_m lies inside the stability domain iff this is <= 1 + eps.
pub fn disc_boundary_max(p: &RealPolynomial, m: usize, samples: usize) -> f64 {
    assert!(m >= 1, "disc index must be positive");
    assert!(samples >= 64, "need at least 64 samples");
    let mf = m as f64;
    // real coefficients make |P| symmetric under theta -> -theta
    let max2 = scan_max(
        |theta| p.abs2_at(Complex64::new(mf * (theta.cos() - 1.0), mf * theta.sin())),
        0.0,
        PI,
        samples,
    );
    max2.sqrt()
}

/// |P| sampled on a rectangular grid of cell centers.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RegionGrid {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
    pub nx: usize,
    pub ny: usize,
    /// Row-major: re varies fastest, im ascending across rows.
    pub values: Vec<f64>,
}

impl RegionGrid {
    pub fn value(&self, ix: usize, iy: usize) -> f64 {
        self.values[iy * self.nx + ix]
    }

    pub fn center(&self, ix: usize, iy: usize) -> Complex64 {
        let re = self.re_min + (ix as f64 + 0.5) * (self.re_max - self.re_min) / self.nx as f64;
        let im = self.im_min + (iy as f64 + 0.5) * (self.im_max - self.im_min) / self.ny as f64;
        Complex64::new(re, im)
    }

    /// CSV with header `re,im,absP`, one row per cell, row-major.
    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "re,im,absP")?;
        for iy in 0..self.ny {
            for ix in 0..self.nx {
                let z = self.center(ix, iy);
                writeln!(w, "{},{},{}", z.re, z.im, self.value(ix, iy))?;
            }
        }
        Ok(())
    }

    /// ASCII PGM (P2): |P| <= 1 maps to 0, |P| >= 2 to 255, linear ramp
    /// in between. Rows are emitted with im ascending, matching the CSV.
    pub fn write_pgm<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "P2")?;
        writeln!(w, "{} {}", self.nx, self.ny)?;
        writeln!(w, "255")?;
        for iy in 0..self.ny {
            let row: Vec<String> = (0..self.nx)
                .map(|ix| {
                    let v = self.value(ix, iy);
                    let g = ((v - 1.0) * 255.0).round().clamp(0.0, 255.0);
                    format!("{}", g as u32)
                })
                .collect();
            writeln!(w, "{}", row.join(" "))?;
        }
        Ok(())
    }
}

/// Sample |P| at the centers of an nx-by-ny grid over the given box.
pub fn region_scan(
    p: &RealPolynomial,
    re_min: f64,
    re_max: f64,
    im_min: f64,
    im_max: f64,
    nx: usize,
    ny: usize,
) -> Result<RegionGrid> {
    if !(re_min < re_max && im_min < im_max) || nx == 0 || ny == 0 {
        return Err(Error::DegenerateBox);
    }
    let cells = nx.checked_mul(ny).ok_or(Error::GridTooLarge(usize::MAX))?;
    if cells > 100_000_000 {
        return Err(Error::GridTooLarge(cells));
    }
    let mut grid = RegionGrid { re_min, re_max, im_min, im_max, nx, ny, values: Vec::with_capacity(cells) };
    for iy in 0..ny {
        for ix in 0..nx {
            let z = grid.center(ix, iy);
            grid.values.push(p.eval_complex(z).norm());
        }
    }
    Ok(grid)
}

/// Measured widths and disc maximum for one polynomial.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct StabilityReport {
    pub real_width: f64,
    pub imag_width: f64,
    pub disc_max: f64,
    pub tolerance: f64,
}

impl StabilityReport {
    pub fn measure(p: &RealPolynomial, m: usize) -> Self {
        Self {
            real_width: stability_width(p, Axis::NegativeReal, DEFAULT_EPS, DEFAULT_TOL),
            imag_width: stability_width(p, Axis::Imaginary, DEFAULT_EPS, DEFAULT_TOL),
            disc_max: disc_boundary_max(p, m.max(1), DEFAULT_SAMPLES),
            tolerance: DEFAULT_EPS,
        }
    }
}

/// Dense scan of `f` over [lo, hi] followed by golden-section refinement
/// around every local maximum (endpoint brackets included).
pub(crate) fn scan_max(f: impl Fn(f64) -> f64, lo: f64, hi: f64, n: usize) -> f64 {
    debug_assert!(n >= 3 && lo < hi);
    let step = (hi - lo) / (n - 1) as f64;
    let xs: Vec<f64> = (0..n)
        .map(|i| if i == n - 1 { hi } else { lo + step * i as f64 })
        .collect();
    let vs: Vec<f64> = xs.iter().map(|&x| f(x)).collect();
    let mut best = vs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    for i in 1..n - 1 {
        if vs[i] >= vs[i - 1] && vs[i] >= vs[i + 1] {
            best = best.max(golden_max(&f, xs[i - 1], xs[i + 1]));
        }
    }
    // the endpoints may hide a maximum inside the first/last cell
    best = best.max(golden_max(&f, xs[0], xs[1]));
    best = best.max(golden_max(&f, xs[n - 2], xs[n - 1]));
    best
}

fn golden_max(f: &impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let tol = 1e-10 * (1.0 + a.abs().max(b.abs()));
    let mut best = f(a).max(f(b));
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while b - a > tol {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
        best = best.max(fc.max(fd));
    }
    best
}
