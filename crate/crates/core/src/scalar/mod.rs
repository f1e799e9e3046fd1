//! Real scalar abstraction shared by the numeric engines.
//!
//! Engines are written once against [`Real`] and instantiated with `f64`
//! (53-bit), `f32` (smoke tests only) or [`Dd`] (106-bit double-double).

pub mod cplx;
pub mod dd;

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, NumAssign, NumCast, Signed, ToPrimitive};

pub use dd::Dd;

pub trait Real:
    num_traits::Num
    + NumAssign
    + Copy
    + PartialOrd
    + Debug
    + Display
    + Send
    + Sync
    + Sum
    + std::ops::Neg<Output = Self>
    + FromPrimitive
    + ToPrimitive
    + 'static
{
    /// Significand bits of the format.
    const BITS: u32;

    fn of(x: f64) -> Self;
    fn to_f64_lossy(self) -> f64;
    fn sqrt(self) -> Self;
    fn exp(self) -> Self;
    fn ln(self) -> Self;
    fn sin_cos(self) -> (Self, Self);
    fn atan2(self, x: Self) -> Self;
    fn pi() -> Self;
    fn ln2() -> Self;
    /// Unit roundoff of the format.
    fn eps() -> f64;

    fn abs(self) -> Self {
        if self < Self::zero() {
            -self
        } else {
            self
        }
    }

    fn of_int(n: i64) -> Self {
        Self::from_i64(n).expect("integer conversion")
    }

    fn powi(self, n: i32) -> Self {
        let mut base = self;
        let mut e = n.unsigned_abs();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc *= base;
            }
            base = base * base;
            e >>= 1;
        }
        if n < 0 {
            Self::one() / acc
        } else {
            acc
        }
    }

    fn sinh(self) -> Self {
        if self.abs() < Self::of(0.25) {
            let x2 = self * self;
            let mut term = self;
            let mut sum = self;
            let mut k = 1.0;
            while term.abs().to_f64_lossy() > 1e-36 * sum.abs().to_f64_lossy() && k < 60.0 {
                term = term * x2 / Self::of((k + 1.0) * (k + 2.0));
                sum += term;
                k += 2.0;
            }
            return sum;
        }
        let e = self.exp();
        (e - Self::one() / e) / Self::of(2.0)
    }

    fn cosh(self) -> Self {
        let e = self.exp();
        (e + Self::one() / e) / Self::of(2.0)
    }

    fn tanh(self) -> Self {
        let two = Self::of(2.0);
        if self.abs() < Self::of(0.5) {
            self.sinh() / self.cosh()
        } else {
            let e = (-two * self.abs()).exp();
            let t = (Self::one() - e) / (Self::one() + e);
            if self < Self::zero() {
                -t
            } else {
                t
            }
        }
    }

    fn asinh(self) -> Self {
        let a = self.abs();
        let r = (a + (a * a + Self::one()).sqrt()).ln();
        if self < Self::zero() {
            -r
        } else {
            r
        }
    }

    fn max_of(self, o: Self) -> Self {
        if self > o {
            self
        } else {
            o
        }
    }

    /// Nearest representable value of an exact rational.
    fn from_rational(q: &BigRational) -> Self {
        let n = big_to_real::<Self>(q.numer());
        let d = big_to_real::<Self>(q.denom());
        n / d
    }
}

fn big_to_real<R: Real>(b: &BigInt) -> R {
    let neg = b.is_negative();
    let mut m = b.abs();
    let bits = m.bits();
    let mut scale = 0i32;
    if bits > 104 {
        let shift = bits - 104;
        m >>= shift as usize;
        scale = shift as i32;
    }
    let low_mask = (BigInt::from(1) << 52usize) - 1;
    let lo = (&m & &low_mask).to_i64().unwrap_or(0) as f64;
    let hi = (&m >> 52usize).to_i64().unwrap_or(0) as f64;
    let two52 = R::of(4503599627370496.0);
    let mut v = R::of(hi) * two52 + R::of(lo);
    if scale > 0 {
        v *= R::of(2.0).powi(scale);
    }
    if neg {
        -v
    } else {
        v
    }
}

impl Real for f64 {
    const BITS: u32 = 53;
    fn of(x: f64) -> f64 {
        x
    }
    fn to_f64_lossy(self) -> f64 {
        self
    }
    fn sqrt(self) -> f64 {
        f64::sqrt(self)
    }
    fn exp(self) -> f64 {
        f64::exp(self)
    }
    fn ln(self) -> f64 {
        f64::ln(self)
    }
    fn sin_cos(self) -> (f64, f64) {
        f64::sin_cos(self)
    }
    fn atan2(self, x: f64) -> f64 {
        f64::atan2(self, x)
    }
    fn pi() -> f64 {
        std::f64::consts::PI
    }
    fn ln2() -> f64 {
        std::f64::consts::LN_2
    }
    fn eps() -> f64 {
        f64::EPSILON / 2.0
    }
    fn abs(self) -> f64 {
        f64::abs(self)
    }
    fn powi(self, n: i32) -> f64 {
        f64::powi(self, n)
    }
}

impl Real for f32 {
    const BITS: u32 = 24;
    fn of(x: f64) -> f32 {
        x as f32
    }
    fn to_f64_lossy(self) -> f64 {
        self as f64
    }
    fn sqrt(self) -> f32 {
        f32::sqrt(self)
    }
    fn exp(self) -> f32 {
        f32::exp(self)
    }
    fn ln(self) -> f32 {
        f32::ln(self)
    }
    fn sin_cos(self) -> (f32, f32) {
        f32::sin_cos(self)
    }
    fn atan2(self, x: f32) -> f32 {
        f32::atan2(self, x)
    }
    fn pi() -> f32 {
        std::f32::consts::PI
    }
    fn ln2() -> f32 {
        std::f32::consts::LN_2
    }
    fn eps() -> f64 {
        f32::EPSILON as f64 / 2.0
    }
}

impl Real for Dd {
    const BITS: u32 = 106;
    fn of(x: f64) -> Dd {
        Dd::from_f64(x)
    }
    fn to_f64_lossy(self) -> f64 {
        self.to_f64()
    }
    fn sqrt(self) -> Dd {
        Dd::sqrt(self)
    }
    fn exp(self) -> Dd {
        Dd::exp(self)
    }
    fn ln(self) -> Dd {
        Dd::ln(self)
    }
    fn sin_cos(self) -> (Dd, Dd) {
        Dd::sin_cos(self)
    }
    fn atan2(self, x: Dd) -> Dd {
        Dd::atan2(self, x)
    }
    fn pi() -> Dd {
        dd::DD_PI
    }
    fn ln2() -> Dd {
        dd::DD_LN2
    }
    fn eps() -> f64 {
        Dd::epsilon()
    }
    fn abs(self) -> Dd {
        Dd::abs(self)
    }
    fn powi(self, n: i32) -> Dd {
        Dd::powi(self, n)
    }
}

impl NumCast for Dd {
    fn from<T: ToPrimitive>(n: T) -> Option<Dd> {
        n.to_f64().map(Dd::from_f64)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    #[test]
    fn rational_conversion_keeps_double_double_bits() {
        let q = BigRational::new(BigInt::from(1), BigInt::from(3));
        let x: Dd = Real::from_rational(&q);
        assert!((x * Dd::from_f64(3.0) - Dd::ONE).abs().hi < 1e-31);
        let big = BigRational::new(BigInt::from(10).pow(40), BigInt::from(3));
        let y: Dd = Real::from_rational(&big);
        let back = y * Dd::from_f64(3.0) / Dd::from_f64(10.0).powi(40);
        assert!((back - Dd::ONE).abs().hi < 1e-30);
    }

    #[test]
    fn hyperbolic_helpers() {
        let x = 0.8f64;
        assert!((Real::tanh(x) - x.tanh()).abs() < 1e-15);
        assert!((Real::asinh(1.0f64) - 0.881373587019543).abs() < 1e-14);
        let d = <Dd as Real>::asinh(Dd::ONE);
        assert!((d.to_f64() - 1f64.asinh()).abs() < 1e-16);
    }
}
