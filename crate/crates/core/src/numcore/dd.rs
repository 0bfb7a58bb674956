//! Double-double arithmetic: an unevaluated sum `hi + lo` of two binary64
//! numbers with `|lo| <= ulp(hi)/2`, giving roughly 106 bits of precision.
//!
//! Only what the closed forms need is provided: the four field operations,
//! integer powers, `exp`/`expm1` and `ln`. The algorithms follow the classic
//! error-free transformations (Dekker, Knuth) used by the QD library.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_traits::{FromPrimitive, Signed, ToPrimitive, Zero};

#[derive(Clone, Copy, Default, PartialEq)]
pub struct Dd {
    hi: f64,
    lo: f64,
}

const LN2: Dd = Dd {
    hi: std::f64::consts::LN_2,
    lo: 2.319_046_813_846_299_6e-17,
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

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };
    pub const ONE: Dd = Dd { hi: 1.0, lo: 0.0 };

    pub fn new(hi: f64, lo: f64) -> Self {
        let (hi, lo) = two_sum(hi, lo);
        Dd { hi, lo }
    }

    #[inline]
    pub fn hi(self) -> f64 {
        self.hi
    }

    #[inline]
    pub fn lo(self) -> f64 {
        self.lo
    }

    /// Nearest binary64 value.
    #[inline]
    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    pub fn is_finite(self) -> bool {
        self.hi.is_finite() && self.lo.is_finite()
    }

    pub fn abs(self) -> Self {
        if self.hi < 0.0 || (self.hi == 0.0 && self.lo < 0.0) {
            -self
        } else {
            self
        }
    }

    /// Exact multiplication by a power of two.
    fn ldexp(self, e: i32) -> Self {
        let s = 2f64.powi(e);
        Dd {
            hi: self.hi * s,
            lo: self.lo * s,
        }
    }

    pub fn recip(self) -> Self {
        Dd::ONE / self
    }

    pub fn powi(self, n: i32) -> Self {
        if n == 0 {
            return Dd::ONE;
        }
        let mut base = self;
        let mut e = n.unsigned_abs();
        let mut acc = Dd::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc *= base;
            }
            base = base * base;
            e >>= 1;
        }
        if n < 0 {
            acc.recip()
        } else {
            acc
        }
    }

    /// `exp(x) - 1` evaluated without cancellation for small `|x|`.
    pub fn expm1(self) -> Self {
        if self.hi.abs() > 0.5 {
            return self.exp() - Dd::ONE;
        }
        expm1_reduced(self)
    }

    pub fn exp(self) -> Self {
        if self.hi > 709.0 {
            return Dd::from(f64::INFINITY);
        }
        if self.hi < -745.0 {
            return Dd::ZERO;
        }
        if self.hi == 0.0 && self.lo == 0.0 {
            return Dd::ONE;
        }
        let k = (self.hi / LN2.hi).round();
        let r = self - LN2 * k;
        (expm1_reduced(r) + Dd::ONE).ldexp(k as i32)
    }

    /// Natural logarithm by Newton iteration on `exp`; the argument must be positive.
    pub fn ln(self) -> Self {
        if self.hi <= 0.0 {
            return Dd::from(f64::NAN);
        }
        if self.hi == 1.0 && self.lo == 0.0 {
            return Dd::ZERO;
        }
        let mut y = Dd::from(self.hi.ln());
        for _ in 0..2 {
            y = y + self * (-y).exp() - Dd::ONE;
        }
        y
    }

    /// Exact (to double-double rounding) conversion of a large integer.
    pub fn from_bigint(v: &BigInt) -> Self {
        let hi = v.to_f64().unwrap_or(f64::NAN);
        if !hi.is_finite() {
            return Dd::from(hi);
        }
        let rem = v - BigInt::from_f64(hi).unwrap_or_else(BigInt::zero);
        Dd::new(hi, rem.to_f64().unwrap_or(0.0))
    }
}

/// `expm1` for `|x| <= ~0.5`: scale down by 2^10, Taylor series, then undo the
/// scaling with `e(2r) = 2e(r) + e(r)^2` where `e = expm1`.
fn expm1_reduced(x: Dd) -> Dd {
    const SQUARINGS: i32 = 10;
    let r = x.ldexp(-SQUARINGS);
    let mut s = r;
    let mut term = r;
    let mut i = 2.0;
    loop {
        term = term * r / i;
        s += term;
        if term.hi.abs() <= 1e-36 * s.hi.abs().max(f64::MIN_POSITIVE) {
            break;
        }
        i += 1.0;
    }
    for _ in 0..SQUARINGS {
        s = s.ldexp(1) + s * s;
    }
    s
}

impl From<f64> for Dd {
    fn from(v: f64) -> Self {
        Dd { hi: v, lo: 0.0 }
    }
}

impl From<i64> for Dd {
    fn from(v: i64) -> Self {
        Dd::from(v as i128)
    }
}

impl From<u32> for Dd {
    fn from(v: u32) -> Self {
        Dd::from(v as f64)
    }
}

impl From<i32> for Dd {
    fn from(v: i32) -> Self {
        Dd::from(v as f64)
    }
}

impl From<i128> for Dd {
    fn from(v: i128) -> Self {
        let hi = v as f64;
        // hi is integral and within range, so the difference is exact in i128
        let rem = v - hi as i128;
        Dd::new(hi, rem as f64)
    }
}

impl From<u128> for Dd {
    fn from(v: u128) -> Self {
        let hi = v as f64;
        let rem = v as i128 - hi as i128;
        Dd::new(hi, rem as f64)
    }
}

impl From<&BigInt> for Dd {
    fn from(v: &BigInt) -> Self {
        if v.abs() < BigInt::from(i128::MAX) {
            Dd::from(v.to_i128().unwrap())
        } else {
            Dd::from_bigint(v)
        }
    }
}

impl Neg for Dd {
    type Output = Dd;
    fn neg(self) -> Dd {
        Dd {
            hi: -self.hi,
            lo: -self.lo,
        }
    }
}

impl Add for Dd {
    type Output = Dd;
    fn add(self, b: Dd) -> Dd {
        let (s1, s2) = two_sum(self.hi, b.hi);
        let (t1, t2) = two_sum(self.lo, b.lo);
        let (s1, s2) = quick_two_sum(s1, s2 + t1);
        let (hi, lo) = quick_two_sum(s1, s2 + t2);
        Dd { hi, lo }
    }
}

impl Sub for Dd {
    type Output = Dd;
    fn sub(self, b: Dd) -> Dd {
        self + (-b)
    }
}

impl Mul for Dd {
    type Output = Dd;
    fn mul(self, b: Dd) -> Dd {
        let (p1, p2) = two_prod(self.hi, b.hi);
        let p2 = p2 + (self.hi * b.lo + self.lo * b.hi);
        let (hi, lo) = quick_two_sum(p1, p2);
        Dd { hi, lo }
    }
}

impl Div for Dd {
    type Output = Dd;
    fn div(self, b: Dd) -> Dd {
        let q1 = self.hi / b.hi;
        let r = self - b * q1;
        let q2 = r.hi / b.hi;
        let r = r - b * q2;
        let q3 = r.hi / b.hi;
        let (hi, lo) = quick_two_sum(q1, q2);
        Dd { hi, lo } + Dd::from(q3)
    }
}

macro_rules! mixed_ops {
    ($($tr:ident $f:ident),*) => {$(
        impl $tr<f64> for Dd {
            type Output = Dd;
            fn $f(self, b: f64) -> Dd { $tr::$f(self, Dd::from(b)) }
        }
        impl $tr<Dd> for f64 {
            type Output = Dd;
            fn $f(self, b: Dd) -> Dd { $tr::$f(Dd::from(self), b) }
        }
    )*};
}
mixed_ops!(Add add, Sub sub, Mul mul, Div div);

impl AddAssign for Dd {
    fn add_assign(&mut self, b: Dd) {
        *self = *self + b;
    }
}

impl SubAssign for Dd {
    fn sub_assign(&mut self, b: Dd) {
        *self = *self - b;
    }
}

impl MulAssign for Dd {
    fn mul_assign(&mut self, b: Dd) {
        *self = *self * b;
    }
}

impl PartialOrd for Dd {
    fn partial_cmp(&self, other: &Dd) -> Option<Ordering> {
        match self.hi.partial_cmp(&other.hi) {
            Some(Ordering::Equal) => self.lo.partial_cmp(&other.lo),
            ord => ord,
        }
    }
}

impl fmt::Debug for Dd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Dd({:e} + {:e})", self.hi, self.lo)
    }
}

impl fmt::Display for Dd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.to_f64(), f)
    }
}

impl std::iter::Sum for Dd {
    fn sum<I: Iterator<Item = Dd>>(iter: I) -> Dd {
        iter.fold(Dd::ZERO, |a, b| a + b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    // Reference values from a 40-digit evaluation; each given as hi + lo.
    fn close(a: Dd, hi: f64, lo: f64, tol: f64) -> bool {
        let d = (a - Dd::new(hi, lo)).to_f64().abs();
        d <= tol * hi.abs()
    }

    #[test]
    fn ln_of_point_nine() {
        // ln(1 - 0.1) with 0.1 as the binary64 value 0.1000000000000000055511...
        let y = Dd::ONE - Dd::from(0.1);
        let l = y.ln();
        assert!(close(l, -0.105_360_515_657_826_31, 0.0, 1e-16));
        // self-consistency far below binary64 resolution
        let back = l.exp();
        assert!((back - y).to_f64().abs() < 1e-31);
    }

    #[test]
    fn exp_ln_round_trip() {
        for v in [1e-8, 0.001, 0.37, 1.0, 2.5, 17.25, -3.75] {
            let x = Dd::from(v);
            let r = x.exp().ln();
            assert!((r - x).to_f64().abs() <= 1e-30 * v.abs().max(1.0), "{v}");
        }
    }

    #[test]
    fn expm1_small_argument_keeps_relative_accuracy() {
        let x = Dd::from(1e-12);
        let e = x.expm1();
        // expm1(t) = t + t^2/2 + t^3/6 + ...
        let series = x + x * x / 2.0 + x * x * x / 6.0;
        assert!(((e - series) / series).to_f64().abs() < 1e-28);
    }

    #[test]
    fn division_and_powers() {
        let third = Dd::ONE / 3.0;
        assert!(((third * 3.0) - Dd::ONE).to_f64().abs() < 1e-31);
        let p = Dd::from(1.5).powi(-4) * Dd::from(1.5).powi(4);
        assert!((p - Dd::ONE).to_f64().abs() < 1e-30);
    }

    #[test]
    fn wide_integer_conversion_is_exact() {
        let v: u128 = (1u128 << 100) + 12345;
        let d = Dd::from(v);
        assert_eq!(d.hi(), 2f64.powi(100));
        assert_eq!(d.lo(), 12345.0);
        let big = BigInt::from(v) * BigInt::from(3);
        let d = Dd::from(&big);
        assert!(((d / 3.0) - Dd::from(v)).to_f64().abs() < 1.0);
    }
}
