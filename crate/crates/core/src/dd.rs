//! Minimal double-double arithmetic, used where `t * ln(n)` has to keep more
//! digits than an `f64` can hold.

use std::f64::consts::LN_2;

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

const LN2_LO: f64 = 2.319_046_813_846_299_6e-17;
pub const TWO_PI: Dd = Dd {
    hi: std::f64::consts::TAU,
    lo: 2.449_293_598_294_706_4e-16,
};

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

// named methods keep call sites explicit about double-double arithmetic
#[allow(clippy::should_implement_trait)]
impl Dd {
    pub const fn new(hi: f64) -> Self {
        Dd { hi, lo: 0.0 }
    }

    pub fn add(self, o: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, o.hi);
        let (t, f) = two_sum(self.lo, o.lo);
        let (s, e) = quick_two_sum(s, e + t);
        let (hi, lo) = quick_two_sum(s, e + f);
        Dd { hi, lo }
    }

    pub fn neg(self) -> Dd {
        Dd { hi: -self.hi, lo: -self.lo }
    }

    pub fn sub(self, o: Dd) -> Dd {
        self.add(o.neg())
    }

    pub fn mul(self, o: Dd) -> Dd {
        let (p, e) = two_prod(self.hi, o.hi);
        let e = e + (self.hi * o.lo + self.lo * o.hi);
        let (hi, lo) = quick_two_sum(p, e);
        Dd { hi, lo }
    }

    pub fn mul_f64(self, b: f64) -> Dd {
        let (p, e) = two_prod(self.hi, b);
        let (hi, lo) = quick_two_sum(p, e + self.lo * b);
        Dd { hi, lo }
    }

    pub fn div(self, o: Dd) -> Dd {
        let q1 = self.hi / o.hi;
        let r = self.sub(o.mul_f64(q1));
        let q2 = r.hi / o.hi;
        let r = r.sub(o.mul_f64(q2));
        let q3 = r.hi / o.hi;
        let (hi, lo) = quick_two_sum(q1, q2);
        Dd { hi, lo }.add(Dd::new(q3))
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    /// Reduces modulo 2π into [-π, π).
    pub fn rem_two_pi(self) -> f64 {
        let q = (self.hi / TWO_PI.hi).round();
        let r = self.sub(TWO_PI.mul_f64(q)).to_f64();
        if r >= std::f64::consts::PI {
            r - TWO_PI.hi
        } else if r < -std::f64::consts::PI {
            r + TWO_PI.hi
        } else {
            r
        }
    }
}

/// Natural log of a positive integer to about 32 digits.
pub fn ln_int(n: u64) -> Dd {
    assert!(n > 0);
    if n == 1 {
        return Dd::default();
    }
    let x = n as f64;
    // n = 2^e * m with m in [1/sqrt2, sqrt2)
    let mut e = x.log2().floor() as i32;
    let mut m = x / 2f64.powi(e);
    if m > std::f64::consts::SQRT_2 {
        m /= 2.0;
        e += 1;
    }
    // m is exact since it is a power-of-two rescaling of an exact integer
    let num = Dd::new(m).sub(Dd::new(1.0));
    let den = Dd::new(m).add(Dd::new(1.0));
    let y = num.div(den);
    let y2 = y.mul(y);
    let mut term = y;
    let mut sum = y;
    let mut k = 1.0;
    loop {
        term = term.mul(y2);
        k += 2.0;
        let inc = term.div(Dd::new(k));
        sum = sum.add(inc);
        if inc.hi.abs() < 1e-34 {
            break;
        }
    }
    let ln2 = Dd { hi: LN_2, lo: LN2_LO };
    ln2.mul_f64(e as f64).add(sum.mul_f64(2.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ln_matches_f64() {
        for n in [2u64, 3, 10, 1000, 65_537, 123_456_789] {
            let d = ln_int(n);
            assert!((d.to_f64() - (n as f64).ln()).abs() < 4e-16 * (n as f64).ln());
        }
    }

    #[test]
    fn ln_products_are_consistent() {
        // ln 6 = ln 2 + ln 3 with the residual well below f64 resolution
        let r = ln_int(6).sub(ln_int(2).add(ln_int(3)));
        assert!(r.to_f64().abs() < 1e-30);
        let r = ln_int(1024).sub(ln_int(2).mul_f64(10.0));
        assert!(r.to_f64().abs() < 1e-30);
    }

    #[test]
    fn reduction_keeps_digits() {
        let t = Dd::new(1e5);
        let p = ln_int(7919).mul(t);
        let r = p.rem_two_pi();
        assert!((-std::f64::consts::PI..std::f64::consts::PI).contains(&r));
        // reduction of an exact multiple of 2π lands at zero
        let z = TWO_PI.mul_f64(12345.0).rem_two_pi();
        assert!(z.abs() < 1e-20);
    }
}
