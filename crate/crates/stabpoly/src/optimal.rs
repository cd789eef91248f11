//! Closed-form constructors for the optimal stability polynomials: the
//! disc family (1 + z/m)^m, the negative-real-axis family T_m(1 + z/m^2)
//! with its Euler substep factorization, the second-order variant
//! T_m(1 - z/(2m^2)), and the imaginary-axis family built from Chebyshev
//! polynomials of both kinds.

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::dd::Dd;
use crate::poly::RealPolynomial;
use crate::{Error, Result};

/// Euler substep divisors: macro-step h is realized as substeps h/xi_i.
/// Consistency requires sum 1/xi_i = 1.
#[derive(Clone, Debug, PartialEq)]
pub struct SubstepSchedule {
    xi: Vec<f64>,
}

impl SubstepSchedule {
    pub fn new(xi: Vec<f64>) -> Result<Self> {
        if xi.is_empty() {
            return Err(Error::DegreeTooSmall { min: 1, got: 0 });
        }
        for &x in &xi {
            if !(x > 0.0) {
                return Err(Error::NonpositiveRoot(x));
            }
        }
        let inv_sum: f64 = xi.iter().map(|x| 1.0 / x).sum();
        if (inv_sum - 1.0).abs() > 1e-10 {
            return Err(Error::InconsistentSchedule(inv_sum));
        }
        Ok(Self { xi })
    }

    pub fn xi(&self) -> &[f64] {
        &self.xi
    }

    pub fn len(&self) -> usize {
        self.xi.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xi.is_empty()
    }

    /// The induced stability polynomial prod_i (1 + z/xi_i).
    pub fn polynomial(&self) -> RealPolynomial {
        RealPolynomial::from_real_roots(&self.xi).expect("divisors validated positive")
    }

    /// Reorder the substeps. The polynomial is order-independent; internal
    /// roundoff amplification of a run is not.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        let n = self.xi.len();
        let mut seen = vec![false; n];
        if perm.len() != n {
            return Err(Error::BadPermutation);
        }
        for &i in perm {
            if i >= n || seen[i] {
                return Err(Error::BadPermutation);
            }
            seen[i] = true;
        }
        Ok(Self { xi: perm.iter().map(|&i| self.xi[i]).collect() })
    }

    fn is_ascending(&self) -> bool {
        self.xi.windows(2).all(|w| w[0] <= w[1])
    }
}

#[derive(Serialize, Deserialize)]
struct ScheduleRepr {
    m: usize,
    xi: Vec<f64>,
    order: String,
}

impl Serialize for SubstepSchedule {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ScheduleRepr {
            m: self.xi.len(),
            xi: self.xi.clone(),
            order: if self.is_ascending() { "ascending".into() } else { "custom".into() },
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for SubstepSchedule {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = ScheduleRepr::deserialize(d)?;
        if r.m != r.xi.len() {
            return Err(D::Error::custom("m does not match xi length"));
        }
        SubstepSchedule::new(r.xi).map_err(|e| D::Error::custom(e.to_string()))
    }
}

/// (1 + z/m)^m: the unique degree-m consistent polynomial whose stability
/// domain contains the disc |1 + z/m| <= 1.
pub fn disc_optimal(m: usize) -> Result<RealPolynomial> {
    if m < 1 {
        return Err(Error::DegreeTooSmall { min: 1, got: m });
    }
    RealPolynomial::from_real_roots(&vec![m as f64; m])
}

/// T_m(1 + z/m^2): maximal negative real-axis interval, width 2m^2.
pub fn parabolic_optimal(m: usize) -> Result<RealPolynomial> {
    if m < 1 {
        return Err(Error::DegreeTooSmall { min: 1, got: m });
    }
    let mf = m as f64;
    Ok(RealPolynomial::chebyshev_t(m).affine_compose_dd(Dd::from_f64(1.0), Dd::recip(mf * mf)))
}

/// Euler substep divisors xi_i = m^2 (1 - cos(pi (2i-1) / 2m)), ascending.
/// Their product form reproduces `parabolic_optimal(m)`.
pub fn parabolic_substeps(m: usize) -> Result<SubstepSchedule> {
    if m < 1 {
        return Err(Error::DegreeTooSmall { min: 1, got: m });
    }
    let mf = m as f64;
    let xi = (1..=m)
        .map(|i| {
            // 1 - cos t = 2 sin^2(t/2), stable for small angles
            let half = std::f64::consts::PI * (2 * i - 1) as f64 / (4.0 * mf);
            let s = half.sin();
            mf * mf * 2.0 * s * s
        })
        .collect();
    Ok(SubstepSchedule { xi })
}

/// T_m(1 - z/(2m^2)) in z = (h w)^2: the second-order analog with
/// |P| <= 1 on [0, 4m^2], i.e. stability up to h w = 2m.
pub fn second_order_optimal(m: usize) -> Result<RealPolynomial> {
    if m < 1 {
        return Err(Error::DegreeTooSmall { min: 1, got: m });
    }
    let mf = m as f64;
    Ok(RealPolynomial::chebyshev_t(m)
        .affine_compose_dd(Dd::from_f64(1.0), Dd::recip(-2.0 * mf * mf)))
}

/// The imaginary-axis optimum of degree m >= 2, stability interval
/// [-i(m-1), i(m-1)]. Dispatches on parity; debug builds cross-check the
/// combined T/U form.
pub fn hyperbolic_optimal(m: usize) -> Result<RealPolynomial> {
    if m < 2 {
        return Err(Error::DegreeTooSmall { min: 2, got: m });
    }
    let p = if m % 2 == 1 {
        hyperbolic_optimal_odd(m / 2)?
    } else {
        hyperbolic_optimal_even(m / 2)?
    };
    #[cfg(debug_assertions)]
    {
        let g = hyperbolic_general_form(m).expect("m >= 2 checked");
        for j in 0..=m {
            debug_assert!(
                (p.coeff(j) - g.coeff(j)).abs() <= 1e-12,
                "parity form disagrees with combined form at m={m}, j={j}"
            );
        }
    }
    Ok(p)
}

/// Odd case m = 2k+1:
/// P(z) = T_k(1 + z^2/(2k^2)) + (z/k)(1 + z^2/(4k^2)) U_{k-1}(1 + z^2/(2k^2)).
pub fn hyperbolic_optimal_odd(k: usize) -> Result<RealPolynomial> {
    if k < 1 {
        return Err(Error::DegreeTooSmall { min: 1, got: k });
    }
    let kf = k as f64;
    let shift = Dd::recip(2.0 * kf * kf);
    let t = RealPolynomial::chebyshev_t(k).affine_compose_dd(Dd::from_f64(1.0), shift);
    let u = RealPolynomial::chebyshev_u(k - 1).affine_compose_dd(Dd::from_f64(1.0), shift);
    // (z/k)(1 + z^2/(4k^2)) = z/k + z^3/(4k^3); 4k^3 is an exact f64
    let factor = RealPolynomial::from_dd(vec![
        Dd::ZERO,
        Dd::recip(kf),
        Dd::ZERO,
        Dd::recip(4.0 * kf * kf * kf),
    ]);
    Ok(inflate_even(&t).add(&factor.multiply(&inflate_even(&u))))
}

/// Even case m = 2k:
/// P(z) = (-1)^{k-1} [ (1 + z^2/(2k-1)^2) U_{2k-2}(z/(i(2k-1)))
///                     + i T_{2k-1}(z/(i(2k-1))) ].
pub fn hyperbolic_optimal_even(k: usize) -> Result<RealPolynomial> {
    if k < 1 {
        return Err(Error::DegreeTooSmall { min: 1, got: k });
    }
    let s = (2 * k - 1) as f64;
    // U_{2k-2} is even, so its composition is real with unit exponent 0;
    // T_{2k-1} is odd, contributing 1/i = i^3, cancelled by the explicit i
    let (eu, uq) = compose_over_imag(&RealPolynomial::chebyshev_u(2 * k - 2), s);
    let (et, tq) = compose_over_imag(&RealPolynomial::chebyshev_t(2 * k - 1), s);
    debug_assert_eq!((eu, et), (0, 3));
    let body = one_plus_z2(s).multiply(&uq).add(&tq);
    Ok(if k % 2 == 1 { body } else { body.scale(-1.0) })
}

/// The combined first/second-kind form valid for both parities:
/// P(z) = i^{m-1} T_{m-1}(z/(i(m-1)))
///        + i^{m-2} (1 + z^2/(m-1)^2) U_{m-2}(z/(i(m-1))).
pub fn hyperbolic_general_form(m: usize) -> Result<RealPolynomial> {
    if m < 2 {
        return Err(Error::DegreeTooSmall { min: 2, got: m });
    }
    let s = (m - 1) as f64;
    let (et, tq) = compose_over_imag(&RealPolynomial::chebyshev_t(m - 1), s);
    let (eu, uq) = compose_over_imag(&RealPolynomial::chebyshev_u(m - 2), s);
    let t_term = tq.scale(unit_sign(m - 1 + et));
    let u_term = one_plus_z2(s).multiply(&uq).scale(unit_sign(m - 2 + eu));
    Ok(t_term.add(&u_term))
}

/// 1 + z^2/s^2 with the reciprocal kept in double-double.
fn one_plus_z2(s: f64) -> RealPolynomial {
    RealPolynomial::from_dd(vec![Dd::from_f64(1.0), Dd::ZERO, Dd::recip(s * s)])
}

/// i raised to an (asserted even) power, as a real sign.
fn unit_sign(e: usize) -> f64 {
    assert!(e % 2 == 0, "unit power i^{e} is not real");
    if e % 4 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// p(z/(i s)) for a polynomial of pure parity: returns (e, q) with
/// p(z/(is)) = i^e q(z) and q real. Even p gives e = 0 directly; odd p
/// factors as x * (even in x), picking up 1/i = i^3.
fn compose_over_imag(p: &RealPolynomial, s: f64) -> (usize, RealPolynomial) {
    let deg = p.degree();
    let odd = deg % 2 == 1;
    for j in 0..=deg {
        debug_assert!(
            j % 2 == deg % 2 || p.coeff(j) == 0.0,
            "composition requires pure parity"
        );
    }
    // part(w) collects the coefficients of matching parity: for even p,
    // p(x) = part(x^2); for odd p, p(x) = x * part(x^2)
    let part: Vec<Dd> = (0..=deg)
        .filter(|j| j % 2 == deg % 2)
        .map(|j| p.dd(j))
        .collect();
    // (z/(is))^2 = -z^2/s^2
    let core = RealPolynomial::from_dd(part)
        .affine_compose_dd(Dd::ZERO, Dd::recip(-(s * s)));
    let inflated = inflate_even(&core);
    if odd {
        // leftover factor z/(is) = i^3 * (z/s)
        let mut shifted = vec![Dd::ZERO];
        let rs = Dd::recip(s);
        shifted.extend((0..=inflated.degree()).map(|j| inflated.dd(j).mul(rs)));
        (3, RealPolynomial::from_dd(shifted))
    } else {
        (0, inflated)
    }
}

/// Reinterpret p(w) as p(z^2) by interleaving zero odd coefficients.
fn inflate_even(p: &RealPolynomial) -> RealPolynomial {
    let mut out = vec![Dd::ZERO; 2 * p.degree() + 1];
    for j in 0..=p.degree() {
        out[2 * j] = p.dd(j);
    }
    RealPolynomial::from_dd(out)
}
