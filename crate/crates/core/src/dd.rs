//! Double-double arithmetic (~31 significant digits).
//!
//! The 2^n-term expansions add and subtract terms whose magnitudes grow like
//! (q / Δq)^n when the rates are nearly equal; at n = 8 with 1% gaps the
//! condition number max|term| / |sum| already exceeds 1e12, which wipes out
//! most of an f64. All transform-side products and sums therefore run on
//! `Dd` values and are rounded once at the end.
//!
//! Algorithms follow the error-free transformation literature (two-sum /
//! two-product with FMA, Newton refinement for sqrt/ln, argument reduction
//! plus Taylor for exp).

use std::ops::{Add, Div, Mul, Neg, Sub};

/// Unevaluated sum hi + lo with |lo| <= ulp(hi)/2.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    // requires |a| >= |b|
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, f64::mul_add(a, b, -p))
}

// the two-word split of ln 2
#[allow(clippy::approx_constant)]
pub const LN2: Dd = Dd {
    hi: 0.693_147_180_559_945_3,
    lo: 2.319_046_813_846_299_6e-17,
};

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };
    pub const ONE: Dd = Dd { hi: 1.0, lo: 0.0 };

    #[inline]
    pub fn from_f64(x: f64) -> Self {
        Dd { hi: x, lo: 0.0 }
    }

    #[inline]
    pub fn new(hi: f64, lo: f64) -> Self {
        let (s, e) = two_sum(hi, lo);
        Dd { hi: s, lo: e }
    }

    #[inline]
    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    #[inline]
    pub fn abs(self) -> Self {
        if self.hi < 0.0 || (self.hi == 0.0 && self.lo < 0.0) {
            -self
        } else {
            self
        }
    }

    #[inline]
    pub fn recip(self) -> Self {
        Dd::ONE / self
    }

    pub fn sqrt(self) -> Self {
        if self.hi == 0.0 {
            return Dd::ZERO;
        }
        debug_assert!(self.hi > 0.0);
        // one Newton step on y = sqrt(a) from the f64 seed
        let y = Dd::from_f64(self.hi.sqrt());
        (y + self / y) * 0.5
    }

    /// exp(self); underflows to 0 / overflows to infinity like f64.
    pub fn exp(self) -> Self {
        if self.hi > 709.0 {
            return Dd::from_f64(f64::INFINITY);
        }
        if self.hi < -709.0 {
            return Dd::ZERO;
        }
        let m = (self.hi / std::f64::consts::LN_2).round();
        // r = (self - m ln2) / 512, |r| <= ln2/1024
        let r = (self - LN2 * m) * (1.0 / 512.0);
        // expm1(r) by Taylor; |r| <= 6.8e-4 so 12 terms reach ~1e-40
        let mut term = r;
        let mut sum = r;
        for k in 2..=12 {
            term = term * r / Dd::from_f64(k as f64);
            sum = sum + term;
        }
        // undo the /512 scaling: (1+s)^(2^9), via s <- 2s + s^2
        let mut s = sum;
        for _ in 0..9 {
            s = s * 2.0 + s * s;
        }
        let e = s + 1.0;
        // scale by 2^m exactly
        let scale = f64::powi(2.0, m as i32);
        Dd {
            hi: e.hi * scale,
            lo: e.lo * scale,
        }
    }

    /// Natural log for strictly positive values.
    pub fn ln(self) -> Self {
        debug_assert!(self.hi > 0.0);
        // Newton: y <- y + x e^{-y} - 1, from the f64 seed
        let mut y = Dd::from_f64(self.hi.ln());
        for _ in 0..2 {
            y = y + self * (-y).exp() - Dd::ONE;
        }
        y
    }

    /// ln(1 + self), self > -1.
    pub fn ln1p(self) -> Self {
        (self + 1.0).ln()
    }
}

impl Neg for Dd {
    type Output = Dd;
    #[inline]
    fn neg(self) -> Dd {
        Dd {
            hi: -self.hi,
            lo: -self.lo,
        }
    }
}

impl Add for Dd {
    type Output = Dd;
    #[inline]
    fn add(self, rhs: Dd) -> Dd {
        let (s1, s2) = two_sum(self.hi, rhs.hi);
        let (t1, t2) = two_sum(self.lo, rhs.lo);
        let (s1, s2) = quick_two_sum(s1, s2 + t1);
        let (s1, s2) = quick_two_sum(s1, s2 + t2);
        Dd { hi: s1, lo: s2 }
    }
}

impl Add<f64> for Dd {
    type Output = Dd;
    #[inline]
    fn add(self, rhs: f64) -> Dd {
        let (s1, s2) = two_sum(self.hi, rhs);
        let (s1, s2) = quick_two_sum(s1, s2 + self.lo);
        Dd { hi: s1, lo: s2 }
    }
}

impl Sub for Dd {
    type Output = Dd;
    #[inline]
    fn sub(self, rhs: Dd) -> Dd {
        self + (-rhs)
    }
}

impl Sub<f64> for Dd {
    type Output = Dd;
    #[inline]
    fn sub(self, rhs: f64) -> Dd {
        self + (-rhs)
    }
}

impl Mul for Dd {
    type Output = Dd;
    #[inline]
    fn mul(self, rhs: Dd) -> Dd {
        let (p1, p2) = two_prod(self.hi, rhs.hi);
        let p2 = p2 + self.hi * rhs.lo + self.lo * rhs.hi;
        let (s1, s2) = quick_two_sum(p1, p2);
        Dd { hi: s1, lo: s2 }
    }
}

impl Mul<f64> for Dd {
    type Output = Dd;
    #[inline]
    fn mul(self, rhs: f64) -> Dd {
        let (p1, p2) = two_prod(self.hi, rhs);
        let p2 = p2 + self.lo * rhs;
        let (s1, s2) = quick_two_sum(p1, p2);
        Dd { hi: s1, lo: s2 }
    }
}

impl Div for Dd {
    type Output = Dd;
    #[inline]
    fn div(self, rhs: Dd) -> Dd {
        let q1 = self.hi / rhs.hi;
        let r = self - rhs * q1;
        let q2 = r.hi / rhs.hi;
        let r = r - rhs * q2;
        let q3 = r.hi / rhs.hi;
        let (s1, s2) = quick_two_sum(q1, q2);
        Dd { hi: s1, lo: s2 } + q3
    }
}

#[cfg(test)]
#[allow(clippy::approx_constant, clippy::excessive_precision)]
mod tests {
    use super::*;

    fn assert_dd(v: Dd, hi: f64, lo: f64) {
        // compare against a reference split to ~1e-29 relative
        let err = (v - Dd::new(hi, lo)).abs().to_f64();
        let scale = hi.abs().max(1e-300);
        assert!(
            err / scale < 1e-29,
            "dd mismatch: got {:?} want ({hi}, {lo}), rel {}",
            v,
            err / scale
        );
    }

    #[test]
    fn mul_div_roundtrip() {
        let a = Dd::new(1.0 / 3.0, 0.0_f64);
        let b = Dd::from_f64(7.0);
        let c = a * b / b;
        assert_dd(c, a.hi, a.lo);
    }

    #[test]
    fn exp_reference_values() {
        assert_dd(
            Dd::from_f64(0.5).exp(),
            1.6487212707001282,
            -4.731568479435833e-17,
        );
        assert_dd(
            Dd::from_f64(-3.25).exp(),
            0.03877420783172201,
            1.1433418851841824e-18,
        );
        assert_dd(
            Dd::from_f64(20.0).exp(),
            485165195.4097903,
            4.880277289790406e-10,
        );
        assert_dd(
            Dd::from_f64(-0.0009765625).exp(),
            0.9990239141819757,
            -7.400282329795416e-18,
        );
        assert_eq!(Dd::from_f64(0.0).exp().to_f64(), 1.0);
    }

    #[test]
    fn ln_reference_values() {
        assert_dd(
            Dd::from_f64(2.0).ln(),
            0.6931471805599453,
            2.3190468138462996e-17,
        );
        assert_dd(
            Dd::from_f64(10.0).ln(),
            2.302585092994046,
            -2.1707562233822494e-16,
        );
        assert_dd(
            Dd::from_f64(0.125).ln(),
            -2.0794415416798357,
            -1.8059370687790465e-16,
        );
    }

    #[test]
    fn sqrt_reference() {
        assert_dd(
            Dd::from_f64(2.0).sqrt(),
            1.4142135623730951,
            -9.667293313452913e-17,
        );
    }

    #[test]
    fn exp_ln_roundtrip() {
        for &x in &[0.017, 1.9, 33.0, 712.4] {
            let v = Dd::from_f64(x);
            let r = v.ln().exp();
            let rel = (r - v).abs().to_f64() / x;
            assert!(rel < 1e-29, "roundtrip {x}: rel {rel}");
        }
    }
}
