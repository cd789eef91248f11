//! Real-coefficient polynomial arithmetic with complex-point evaluation
//! and Chebyshev constructors.
//!
//! Coefficients are stored densely in ascending powers; `coeffs[j]`
//! multiplies `z^j`. Trailing coefficients that are exactly zero are
//! stripped on construction, so the degree is always meaningful. All
//! arithmetic that expands or evaluates coefficients accumulates in
//! double-double precision internally; the power basis at the degrees and
//! argument magnitudes used here is too ill-conditioned for plain f64.

use num_complex::Complex64;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::dd::Dd;
use crate::{Error, Result};

/// A real polynomial in canonical dense form.
///
/// Construction keeps a double-double correction term per coefficient so
/// that expanded forms like T_m(1 + z/m^2) evaluate accurately near the
/// far end of their stability interval, where a single f64 rounding of a
/// coefficient already costs many orders of magnitude. Only the rounded
/// `coeffs` are observable through the public API and serialization.
#[derive(Clone, Debug, PartialEq)]
pub struct RealPolynomial {
    coeffs: Vec<f64>,
    lo: Vec<f64>,
}

impl RealPolynomial {
    /// Build a polynomial from ascending coefficients, stripping trailing
    /// exact zeros. An empty input yields the zero polynomial.
    pub fn new(coeffs: Vec<f64>) -> Self {
        Self::from_dd(coeffs.into_iter().map(Dd::from_f64).collect())
    }

    pub(crate) fn from_dd(mut coeffs: Vec<Dd>) -> Self {
        while coeffs.len() > 1 && coeffs.last().map_or(false, |c| c.hi == 0.0 && c.lo == 0.0) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(Dd::ZERO);
        }
        Self { coeffs: coeffs.iter().map(|c| c.hi).collect(), lo: coeffs.iter().map(|c| c.lo).collect() }
    }

    pub(crate) fn dd(&self, j: usize) -> Dd {
        Dd { hi: self.coeff(j), lo: self.lo.get(j).copied().unwrap_or(0.0) }
    }

    pub fn zero() -> Self {
        Self { coeffs: vec![0.0], lo: vec![0.0] }
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Coefficient of `z^j`, zero beyond the degree.
    pub fn coeff(&self, j: usize) -> f64 {
        self.coeffs.get(j).copied().unwrap_or(0.0)
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0] == 0.0
    }

    /// Horner evaluation at a real point.
    pub fn eval_real(&self, x: f64) -> f64 {
        let mut acc = Dd::ZERO;
        for j in (0..self.coeffs.len()).rev() {
            acc = acc.mul_f64(x).add(self.dd(j));
        }
        acc.value()
    }

    /// Horner evaluation at a complex point.
    pub fn eval_complex(&self, z: Complex64) -> Complex64 {
        let mut re = Dd::ZERO;
        let mut im = Dd::ZERO;
        for j in (0..self.coeffs.len()).rev() {
            let nre = re.mul_f64(z.re).sub(im.mul_f64(z.im)).add(self.dd(j));
            let nim = re.mul_f64(z.im).add(im.mul_f64(z.re));
            re = nre;
            im = nim;
        }
        Complex64::new(re.value(), im.value())
    }

    /// Squared modulus |P(z)|^2 at a complex point.
    pub fn abs2_at(&self, z: Complex64) -> f64 {
        self.eval_complex(z).norm_sqr()
    }

    /// Term-by-term derivative; the derivative of a constant is zero.
    pub fn derivative(&self) -> Self {
        if self.coeffs.len() == 1 {
            return Self::zero();
        }
        Self::from_dd((1..self.coeffs.len()).map(|j| self.dd(j).mul_f64(j as f64)).collect())
    }

    /// Coefficient convolution. The zero polynomial is absorbing.
    pub fn multiply(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let a: Vec<Dd> = (0..self.coeffs.len()).map(|j| self.dd(j)).collect();
        let b: Vec<Dd> = (0..other.coeffs.len()).map(|j| other.dd(j)).collect();
        Self::from_dd(convolve(&a, &b))
    }

    /// Coefficient-wise sum.
    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::from_dd((0..n).map(|j| self.dd(j).add(other.dd(j))).collect())
    }

    pub fn scale(&self, s: f64) -> Self {
        Self::from_dd((0..self.coeffs.len()).map(|j| self.dd(j).mul_f64(s)).collect())
    }

    /// q(z) = p(a + b z), expanded exactly by Horner in polynomial form.
    pub fn affine_compose(&self, a: f64, b: f64) -> Self {
        self.affine_compose_dd(Dd::from_f64(a), Dd::from_f64(b))
    }

    /// As [`affine_compose`] with double-double shift and scale, so exact
    /// rationals like 1/(2k^2) survive the expansion unrounded.
    pub(crate) fn affine_compose_dd(&self, a: Dd, b: Dd) -> Self {
        // acc <- acc * (a + b z) + c_j, descending j
        let mut acc: Vec<Dd> = vec![];
        for i in (0..self.coeffs.len()).rev() {
            let mut next = vec![Dd::ZERO; acc.len() + 1];
            for (j, &r) in acc.iter().enumerate() {
                next[j] = next[j].add(r.mul(a));
                next[j + 1] = next[j + 1].add(r.mul(b));
            }
            if next.is_empty() {
                next.push(Dd::ZERO);
            }
            next[0] = next[0].add(self.dd(i));
            acc = next;
        }
        Self::from_dd(acc)
    }

    /// Product of Euler factors: prod_i (1 + z/xi_i). P(0) = 1 by
    /// construction. Every xi must be strictly positive.
    pub fn from_real_roots(negated_roots: &[f64]) -> Result<Self> {
        for &xi in negated_roots {
            if !(xi > 0.0) {
                return Err(Error::NonpositiveRoot(xi));
            }
        }
        let mut acc = vec![Dd::from_f64(1.0)];
        for &xi in negated_roots {
            let factor = [Dd::from_f64(1.0), Dd::recip(xi)];
            acc = convolve(&acc, &factor);
        }
        Ok(Self::from_dd(acc))
    }

    /// Chebyshev polynomial of the first kind, power-basis coefficients.
    ///
    /// The recurrence coefficients carry large power-of-two factors and
    /// stay exactly representable in f64 well past k = 60.
    pub fn chebyshev_t(k: usize) -> Self {
        chebyshev(k, &[1.0], &[0.0, 1.0])
    }

    /// Chebyshev polynomial of the second kind.
    pub fn chebyshev_u(k: usize) -> Self {
        chebyshev(k, &[1.0], &[0.0, 2.0])
    }

    /// Split for the imaginary axis: P(iy) = R(y^2) + i y I(y^2).
    pub fn imaginary_parts(&self) -> (Self, Self) {
        let mut even = vec![];
        let mut odd = vec![];
        for j in 0..self.coeffs.len() {
            let signed = if (j / 2) % 2 == 0 { self.dd(j) } else { self.dd(j).neg() };
            if j % 2 == 0 {
                even.push(signed);
            } else {
                odd.push(signed);
            }
        }
        (Self::from_dd(even), Self::from_dd(odd))
    }
}

fn chebyshev(k: usize, p0: &[f64], p1: &[f64]) -> RealPolynomial {
    if k == 0 {
        return RealPolynomial::new(p0.to_vec());
    }
    let mut prev = p0.to_vec();
    let mut curr = p1.to_vec();
    for _ in 1..k {
        let mut next = vec![0.0; curr.len() + 1];
        for (j, &c) in curr.iter().enumerate() {
            next[j + 1] += 2.0 * c;
        }
        for (j, &c) in prev.iter().enumerate() {
            next[j] -= c;
        }
        prev = curr;
        curr = next;
    }
    RealPolynomial::new(curr)
}

fn convolve(a: &[Dd], b: &[Dd]) -> Vec<Dd> {
    let mut out = vec![Dd::ZERO; a.len() + b.len() - 1];
    for (i, &ai) in a.iter().enumerate() {
        for (j, &bj) in b.iter().enumerate() {
            out[i + j] = out[i + j].add(ai.mul(bj));
        }
    }
    out
}

// --- JSON form shared by all modules and the CLI ---

#[derive(Serialize, Deserialize)]
struct PolyRepr {
    degree: usize,
    coeffs: Vec<f64>,
}

impl Serialize for RealPolynomial {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PolyRepr { degree: self.degree(), coeffs: self.coeffs.clone() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for RealPolynomial {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = PolyRepr::deserialize(d)?;
        if repr.coeffs.is_empty() {
            return Err(D::Error::custom("coeffs must be nonempty"));
        }
        if repr.coeffs.iter().any(|c| !c.is_finite()) {
            return Err(D::Error::custom("coeffs must be finite"));
        }
        if repr.degree != repr.coeffs.len() - 1 {
            return Err(D::Error::custom(format!(
                "degree {} does not match {} coefficients",
                repr.degree,
                repr.coeffs.len()
            )));
        }
        Ok(RealPolynomial::new(repr.coeffs))
    }
}

impl TryFrom<&str> for RealPolynomial {
    type Error = Error;

    fn try_from(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::BadPolynomial(e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
    }

    #[test]
    fn euler_at_left_disc_edge() {
        let p = RealPolynomial::new(vec![1.0, 1.0]);
        let v = p.eval_complex(Complex64::new(-2.0, 0.0));
        assert_eq!(v, Complex64::new(-1.0, 0.0));
    }

    #[test]
    fn euler_unstable_on_imaginary_axis() {
        let p = RealPolynomial::new(vec![1.0, 1.0]);
        let v = p.eval_complex(Complex64::new(0.0, 1.0));
        assert_eq!(v, Complex64::new(1.0, 1.0));
        assert!(v.norm() > 1.0);
    }

    #[test]
    fn quadratic_at_i_has_unit_modulus() {
        let p = RealPolynomial::new(vec![1.0, 1.0, 1.0]);
        let v = p.eval_complex(Complex64::new(0.0, 1.0));
        assert_eq!(v, Complex64::new(0.0, 1.0));
    }

    #[test]
    fn derivative_of_shifted_chebyshev() {
        let p = RealPolynomial::new(vec![1.0, 1.0, 0.125]);
        assert_eq!(p.derivative().coeffs(), &[1.0, 0.25]);
    }

    #[test]
    fn derivative_of_constant_is_zero() {
        let p = RealPolynomial::new(vec![42.0]);
        assert!(p.derivative().is_zero());
    }

    #[test]
    fn t3_derivative_attains_m_squared_at_one() {
        let t3 = RealPolynomial::chebyshev_t(3);
        assert_eq!(t3.coeffs(), &[0.0, -3.0, 0.0, 4.0]);
        let d = t3.derivative();
        assert_eq!(d.coeffs(), &[-3.0, 0.0, 12.0]);
        assert_eq!(d.eval_real(1.0), 9.0);
    }

    #[test]
    fn multiply_examples() {
        let a = RealPolynomial::new(vec![1.0, 1.0]);
        let b = RealPolynomial::new(vec![1.0, -1.0]);
        assert_eq!(a.multiply(&b).coeffs(), &[1.0, 0.0, -1.0]);
        let x = RealPolynomial::new(vec![0.0, 1.0]);
        assert_eq!(x.multiply(&x).coeffs(), &[0.0, 0.0, 1.0]);
    }

    #[test]
    fn product_to_sum_identity() {
        let t1 = RealPolynomial::chebyshev_t(1);
        let lhs = t1.multiply(&t1);
        let rhs = RealPolynomial::chebyshev_t(0)
            .add(&RealPolynomial::chebyshev_t(2))
            .scale(0.5);
        assert_eq!(lhs.coeffs(), rhs.coeffs());
    }

    #[test]
    fn zero_polynomial_is_absorbing() {
        let p = RealPolynomial::new(vec![1.0, 2.0, 3.0]);
        assert!(p.multiply(&RealPolynomial::zero()).is_zero());
    }

    #[test]
    fn affine_compose_t2() {
        let t2 = RealPolynomial::chebyshev_t(2);
        assert_eq!(t2.coeffs(), &[-1.0, 0.0, 2.0]);
        let p = t2.affine_compose(1.0, 0.25);
        assert!(close(p.coeffs(), &[1.0, 1.0, 0.125], 1e-15), "{:?}", p);
        let q = t2.affine_compose(1.0, -1.0 / 8.0);
        assert!(close(q.coeffs(), &[1.0, -0.5, 1.0 / 32.0], 1e-15), "{:?}", q);
    }

    #[test]
    fn affine_identity() {
        let p = RealPolynomial::new(vec![3.0, -2.0, 0.5, 7.0]);
        assert_eq!(p.affine_compose(0.0, 1.0).coeffs(), p.coeffs());
    }

    #[test]
    fn affine_compose_constant_scale() {
        // b = 0 collapses to the constant p(a)
        let p = RealPolynomial::new(vec![1.0, 1.0, 1.0]);
        let q = p.affine_compose(2.0, 0.0);
        assert_eq!(q.coeffs(), &[7.0]);
    }

    #[test]
    fn from_real_roots_examples() {
        let p = RealPolynomial::from_real_roots(&[4.0]).unwrap();
        assert_eq!(p.coeffs(), &[1.0, 0.25]);
        let q = RealPolynomial::from_real_roots(&[1.0, 1.0]).unwrap();
        assert_eq!(q.coeffs(), &[1.0, 2.0, 1.0]);
        let s = 2.0_f64.sqrt();
        let r = RealPolynomial::from_real_roots(&[4.0 - 2.0 * s, 4.0 + 2.0 * s]).unwrap();
        assert!(close(r.coeffs(), &[1.0, 1.0, 0.125], 1e-14), "{:?}", r);
    }

    #[test]
    fn from_real_roots_rejects_nonpositive() {
        assert!(RealPolynomial::from_real_roots(&[1.0, 0.0]).is_err());
        assert!(RealPolynomial::from_real_roots(&[-2.0]).is_err());
    }

    #[test]
    fn chebyshev_bases() {
        assert_eq!(RealPolynomial::chebyshev_t(0).coeffs(), &[1.0]);
        assert_eq!(RealPolynomial::chebyshev_t(1).coeffs(), &[0.0, 1.0]);
        assert_eq!(RealPolynomial::chebyshev_t(2).coeffs(), &[-1.0, 0.0, 2.0]);
        assert_eq!(RealPolynomial::chebyshev_u(0).coeffs(), &[1.0]);
        assert_eq!(RealPolynomial::chebyshev_u(1).coeffs(), &[0.0, 2.0]);
        assert_eq!(RealPolynomial::chebyshev_u(2).coeffs(), &[-1.0, 0.0, 4.0]);
    }

    #[test]
    fn t3_vanishes_at_cos_pi_over_6() {
        let t3 = RealPolynomial::chebyshev_t(3);
        let x = (std::f64::consts::PI / 6.0).cos();
        assert!(t3.eval_real(x).abs() < 1e-15);
    }

    #[test]
    fn derivative_identity_is_exact_up_to_60() {
        // T'_k = k U_{k-1}, coefficient-wise bitwise
        for k in 1..=60usize {
            let d = RealPolynomial::chebyshev_t(k).derivative();
            let u = RealPolynomial::chebyshev_u(k - 1).scale(k as f64);
            assert_eq!(d.coeffs(), u.coeffs(), "k = {k}");
        }
    }

    #[test]
    fn chebyshev_trig_identities_up_to_60() {
        for k in 1..=60usize {
            let t = RealPolynomial::chebyshev_t(k);
            let u = RealPolynomial::chebyshev_u(k - 1);
            for i in 0..1000 {
                let theta = std::f64::consts::PI * i as f64 / 999.0;
                let x = theta.cos();
                let kt = k as f64 * theta;
                assert!(
                    (t.eval_real(x) - kt.cos()).abs() <= 1e-9,
                    "T_{k} at theta={theta}"
                );
                assert!(
                    (u.eval_real(x) * theta.sin() - kt.sin()).abs() <= 1e-9,
                    "U_{} at theta={theta}",
                    k - 1
                );
            }
        }
    }

    #[test]
    fn json_round_trip() {
        let p = RealPolynomial::new(vec![1.0, 1.0, 4.0 / 27.0, 4.0 / 729.0]);
        let s = serde_json::to_string(&p).unwrap();
        let q: RealPolynomial = serde_json::from_str(&s).unwrap();
        assert_eq!(p, q);
    }

    #[test]
    fn json_rejects_bad_degree() {
        let r: std::result::Result<RealPolynomial, _> =
            serde_json::from_str(r#"{"degree": 3, "coeffs": [1.0, 1.0]}"#);
        assert!(r.is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn coeffs() -> impl Strategy<Value = Vec<f64>> {
            proptest::collection::vec(-10.0f64..10.0, 1..8)
        }

        proptest! {
            #[test]
            fn multiply_commutes(a in coeffs(), b in coeffs()) {
                let p = RealPolynomial::new(a);
                let q = RealPolynomial::new(b);
                let pq = p.multiply(&q);
                let qp = q.multiply(&p);
                prop_assert_eq!(pq.coeffs(), qp.coeffs());
            }

            #[test]
            fn multiply_distributes_exactly_on_integers(
                a in proptest::collection::vec(-9i32..10, 1..6),
                b in proptest::collection::vec(-9i32..10, 1..6),
                c in proptest::collection::vec(-9i32..10, 1..6),
            ) {
                let f = |v: &[i32]| RealPolynomial::new(v.iter().map(|&x| x as f64).collect());
                let (p, q, r) = (f(&a), f(&b), f(&c));
                let lhs = p.multiply(&q.add(&r));
                let rhs = p.multiply(&q).add(&p.multiply(&r));
                prop_assert_eq!(lhs.coeffs(), rhs.coeffs());
            }

            #[test]
            fn affine_round_trip(a in coeffs(), sh in -2.0f64..2.0, sc in 0.25f64..4.0) {
                let p = RealPolynomial::new(a);
                let q = p.affine_compose(sh, sc).affine_compose(-sh / sc, 1.0 / sc);
                let scale = 1.0 + p.coeffs().iter().fold(0.0f64, |m, c| m.max(c.abs()));
                prop_assert_eq!(q.degree(), p.degree());
                for j in 0..=p.degree() {
                    prop_assert!((q.coeff(j) - p.coeff(j)).abs() <= 1e-12 * scale);
                }
            }
        }
    }
}
