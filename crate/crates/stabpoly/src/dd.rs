//! Double-double scalars used internally for coefficient expansion and
//! Horner evaluation. The power basis is badly conditioned at the degrees
//! and magnitudes this crate works with (|z| up to 2m^2 with m up to ~30),
//! so plain f64 accumulation cannot meet the advertised tolerances.

/// An unevaluated sum hi + lo with |lo| <= ulp(hi)/2.
#[derive(Clone, Copy, Debug, Default)]
pub(crate) struct Dd {
    pub hi: f64,
    pub lo: f64,
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> Dd {
    // requires |a| >= |b| or a == 0
    let s = a + b;
    Dd { hi: s, lo: b - (s - a) }
}

#[inline]
fn two_sum(a: f64, b: f64) -> Dd {
    let s = a + b;
    let v = s - a;
    Dd { hi: s, lo: (a - (s - v)) + (b - v) }
}

#[inline]
fn two_prod(a: f64, b: f64) -> Dd {
    let p = a * b;
    Dd { hi: p, lo: a.mul_add(b, -p) }
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };

    #[inline]
    pub fn from_f64(x: f64) -> Dd {
        Dd { hi: x, lo: 0.0 }
    }

    /// Reciprocal of an f64, accurate to double-double precision.
    #[inline]
    pub fn recip(x: f64) -> Dd {
        let hi = 1.0 / x;
        let r = hi.mul_add(x, -1.0);
        Dd { hi, lo: -r / x }
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.hi + self.lo
    }

    #[inline]
    pub fn add(self, o: Dd) -> Dd {
        let s = two_sum(self.hi, o.hi);
        let t = two_sum(self.lo, o.lo);
        let r = quick_two_sum(s.hi, s.lo + t.hi);
        quick_two_sum(r.hi, r.lo + t.lo)
    }

    #[inline]
    pub fn neg(self) -> Dd {
        Dd { hi: -self.hi, lo: -self.lo }
    }

    #[inline]
    pub fn sub(self, o: Dd) -> Dd {
        self.add(o.neg())
    }

    #[inline]
    pub fn mul(self, o: Dd) -> Dd {
        let p = two_prod(self.hi, o.hi);
        quick_two_sum(p.hi, p.lo + (self.hi * o.lo + self.lo * o.hi))
    }

    #[inline]
    pub fn mul_f64(self, o: f64) -> Dd {
        let p = two_prod(self.hi, o);
        quick_two_sum(p.hi, p.lo + self.lo * o)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sum_recovers_cancelled_bits() {
        let a = Dd::from_f64(1.0).add(Dd::from_f64(1e-20));
        let b = a.add(Dd::from_f64(-1.0));
        assert_eq!(b.value(), 1e-20);
    }

    #[test]
    fn product_keeps_low_bits() {
        // (1e8+1)^2 = 10000000200000001 needs 54 bits; lo carries the 1
        let x = 1.0e8 + 1.0;
        let p = Dd::from_f64(x).mul_f64(x);
        assert_eq!(p.hi, 1.0000000200000000e16);
        assert_eq!(p.lo, 1.0);
    }
}
