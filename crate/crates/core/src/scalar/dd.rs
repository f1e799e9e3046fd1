use std::cmp::Ordering;
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Rem, RemAssign, Sub, SubAssign};

use num_traits::{FromPrimitive, Num, One, ToPrimitive, Zero};

/// Double-double real: the unevaluated sum `hi + lo` with `|lo| <= ulp(hi)/2`,
/// giving about 106 bits of significand.
#[derive(Clone, Copy, Default, PartialEq)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let e = (a - (s - bb)) + (b - bb);
    (s, e)
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

pub const DD_PI: Dd = Dd { hi: 3.141592653589793, lo: 1.2246467991473532e-16 };
pub const DD_LN2: Dd = Dd { hi: 0.6931471805599453, lo: 2.3190468138462996e-17 };
const DD_EPS: f64 = 4.930380657631324e-32;

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };
    pub const ONE: Dd = Dd { hi: 1.0, lo: 0.0 };

    #[inline]
    pub const fn from_f64(x: f64) -> Dd {
        Dd { hi: x, lo: 0.0 }
    }

    #[inline]
    pub fn new(hi: f64, lo: f64) -> Dd {
        let (h, l) = two_sum(hi, lo);
        Dd { hi: h, lo: l }
    }

    #[inline]
    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    pub fn is_finite(self) -> bool {
        self.hi.is_finite()
    }

    pub fn abs(self) -> Dd {
        if self.hi < 0.0 {
            -self
        } else {
            self
        }
    }

    pub fn sqr(self) -> Dd {
        self * self
    }

    pub fn mul_f64(self, b: f64) -> Dd {
        let (p, e) = two_prod(self.hi, b);
        let e = e + self.lo * b;
        let (h, l) = quick_two_sum(p, e);
        Dd { hi: h, lo: l }
    }

    pub fn ldexp(self, k: i32) -> Dd {
        let f = 2f64.powi(k);
        Dd { hi: self.hi * f, lo: self.lo * f }
    }

    pub fn floor(self) -> Dd {
        let h = self.hi.floor();
        if h == self.hi {
            Dd::new(h, self.lo.floor())
        } else {
            Dd { hi: h, lo: 0.0 }
        }
    }

    pub fn round(self) -> Dd {
        (self + Dd::from_f64(0.5)).floor()
    }

    pub fn sqrt(self) -> Dd {
        if self.hi <= 0.0 {
            if self.hi == 0.0 {
                return Dd::ZERO;
            }
            return Dd { hi: f64::NAN, lo: f64::NAN };
        }
        let x = 1.0 / self.hi.sqrt();
        let ax = self.hi * x;
        let diff = self - Dd::from_f64(ax).sqr();
        let (h, l) = two_sum(ax, diff.hi * (x * 0.5));
        Dd { hi: h, lo: l }
    }

    pub fn exp(self) -> Dd {
        if self.hi > 709.0 {
            return Dd { hi: f64::INFINITY, lo: 0.0 };
        }
        if self.hi < -745.0 {
            return Dd::ZERO;
        }
        let k = (self.hi / DD_LN2.hi).round();
        let r = self - DD_LN2.mul_f64(k);
        // exp(r) = (exp(r / 2^10))^(2^10)
        let r = r.ldexp(-10);
        let mut term = r;
        let mut sum = r;
        let mut n = 1.0;
        loop {
            n += 1.0;
            term = term * r / Dd::from_f64(n);
            sum += term;
            if term.hi.abs() < 1e-34 * sum.hi.abs().max(1e-300) || n > 40.0 {
                break;
            }
        }
        // sum = exp(r) - 1; square up using (1+s)^2 - 1 = 2s + s^2
        for _ in 0..10 {
            sum = sum.ldexp(1) + sum.sqr();
        }
        (sum + Dd::ONE).ldexp(k as i32)
    }

    pub fn ln(self) -> Dd {
        if self.hi <= 0.0 {
            return Dd { hi: f64::NAN, lo: f64::NAN };
        }
        let mut y = Dd::from_f64(self.hi.ln());
        for _ in 0..2 {
            y = y + self * (-y).exp() - Dd::ONE;
        }
        y
    }

    /// sin and cos together, with reduction modulo pi/2.
    pub fn sin_cos(self) -> (Dd, Dd) {
        if self.hi == 0.0 {
            return (Dd::ZERO, Dd::ONE);
        }
        let half_pi = DD_PI.ldexp(-1);
        let q = (self / half_pi).round();
        let r = self - half_pi * q;
        let qi = (q.hi as i64).rem_euclid(4);
        // Taylor on r / 2^5 then double the angle five times.
        let t = r.ldexp(-5);
        let t2 = t.sqr();
        let mut s = t;
        let mut term = t;
        let mut n = 1.0;
        loop {
            term = -term * t2 / Dd::from_f64((n + 1.0) * (n + 2.0));
            n += 2.0;
            s += term;
            if term.hi.abs() < 1e-34 || n > 40.0 {
                break;
            }
        }
        let mut c = (Dd::ONE - s.sqr()).sqrt();
        for _ in 0..5 {
            let s2 = (s * c).ldexp(1);
            let c2 = Dd::ONE - s.sqr().ldexp(1);
            s = s2;
            c = c2;
        }
        match qi {
            0 => (s, c),
            1 => (c, -s),
            2 => (-s, -c),
            _ => (-c, s),
        }
    }

    pub fn atan2(self, x: Dd) -> Dd {
        let y = self;
        if x.hi == 0.0 && y.hi == 0.0 {
            return Dd::ZERO;
        }
        let mut a = Dd::from_f64(y.hi.atan2(x.hi));
        let r = (x.sqr() + y.sqr()).sqrt();
        let (xn, yn) = (x / r, y / r);
        for _ in 0..2 {
            let (s, c) = a.sin_cos();
            // Newton on the angle: a += (yn cos a - xn sin a) / (xn cos a + yn sin a)
            let num = yn * c - xn * s;
            let den = xn * c + yn * s;
            a += num / den;
        }
        a
    }

    pub fn powi(self, n: i32) -> Dd {
        if n == 0 {
            return Dd::ONE;
        }
        let mut base = self;
        let mut e = n.unsigned_abs();
        let mut acc = Dd::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base.sqr();
            e >>= 1;
        }
        if n < 0 {
            Dd::ONE / acc
        } else {
            acc
        }
    }

    pub const fn epsilon() -> f64 {
        DD_EPS
    }
}

impl fmt::Debug for Dd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Dd({:e} + {:e})", self.hi, self.lo)
    }
}

impl fmt::Display for Dd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&to_decimal_string(*self, f.precision().unwrap_or(32)))
    }
}

/// Scientific-notation rendering with `digits` significant digits.
pub fn to_decimal_string(x: Dd, digits: usize) -> String {
    if !x.hi.is_finite() {
        return format!("{}", x.hi);
    }
    if x.hi == 0.0 {
        return "0".to_string();
    }
    let neg = x.hi < 0.0;
    let mut v = x.abs();
    let mut e10 = v.hi.log10().floor() as i32;
    v = v * Dd::from_f64(10.0).powi(-e10);
    if v.hi >= 10.0 {
        v = v / Dd::from_f64(10.0);
        e10 += 1;
    } else if v.hi < 1.0 {
        v = v * Dd::from_f64(10.0);
        e10 -= 1;
    }
    let mut ds = Vec::with_capacity(digits + 1);
    for _ in 0..=digits {
        let d = v.floor().hi.clamp(0.0, 9.0);
        ds.push(d as u8);
        v = (v - Dd::from_f64(d)) * Dd::from_f64(10.0);
    }
    // round on the extra digit
    if ds[digits] >= 5 {
        let mut i = digits;
        loop {
            if i == 0 {
                ds.insert(0, 1);
                e10 += 1;
                break;
            }
            i -= 1;
            if ds[i] == 9 {
                ds[i] = 0;
            } else {
                ds[i] += 1;
                break;
            }
        }
    }
    ds.truncate(digits);
    let mut s = String::new();
    if neg {
        s.push('-');
    }
    s.push((b'0' + ds[0]) as char);
    if digits > 1 {
        s.push('.');
        for d in &ds[1..] {
            s.push((b'0' + d) as char);
        }
    }
    s.push_str(&format!("e{}", e10));
    s
}

impl PartialOrd for Dd {
    fn partial_cmp(&self, other: &Dd) -> Option<Ordering> {
        match self.hi.partial_cmp(&other.hi) {
            Some(Ordering::Equal) => self.lo.partial_cmp(&other.lo),
            o => o,
        }
    }
}

impl Neg for Dd {
    type Output = Dd;
    #[inline]
    fn neg(self) -> Dd {
        Dd { hi: -self.hi, lo: -self.lo }
    }
}

impl Add for Dd {
    type Output = Dd;
    #[inline]
    fn add(self, b: Dd) -> Dd {
        let (s1, s2) = two_sum(self.hi, b.hi);
        let (t1, t2) = two_sum(self.lo, b.lo);
        let s2 = s2 + t1;
        let (s1, s2) = quick_two_sum(s1, s2);
        let s2 = s2 + t2;
        let (h, l) = quick_two_sum(s1, s2);
        Dd { hi: h, lo: l }
    }
}

impl Sub for Dd {
    type Output = Dd;
    #[inline]
    fn sub(self, b: Dd) -> Dd {
        self + (-b)
    }
}

impl Mul for Dd {
    type Output = Dd;
    #[inline]
    fn mul(self, b: Dd) -> Dd {
        let (p, e) = two_prod(self.hi, b.hi);
        let e = e + (self.hi * b.lo + self.lo * b.hi);
        let (h, l) = quick_two_sum(p, e);
        Dd { hi: h, lo: l }
    }
}

impl Div for Dd {
    type Output = Dd;
    #[inline]
    fn div(self, b: Dd) -> Dd {
        let q1 = self.hi / b.hi;
        let r = self - b.mul_f64(q1);
        let q2 = r.hi / b.hi;
        let r = r - b.mul_f64(q2);
        let q3 = r.hi / b.hi;
        let (h, l) = quick_two_sum(q1, q2);
        Dd { hi: h, lo: l } + Dd::from_f64(q3)
    }
}

impl Rem for Dd {
    type Output = Dd;
    fn rem(self, b: Dd) -> Dd {
        let q = self / b;
        let q = if q.hi >= 0.0 { q.floor() } else { -(-q).floor() };
        self - q * b
    }
}

macro_rules! assign_ops {
    ($($tr:ident $m:ident $op:tt),*) => {$(
        impl $tr for Dd {
            #[inline]
            fn $m(&mut self, b: Dd) { *self = *self $op b; }
        }
    )*};
}
assign_ops!(AddAssign add_assign +, SubAssign sub_assign -, MulAssign mul_assign *, DivAssign div_assign /, RemAssign rem_assign %);

impl Sum for Dd {
    fn sum<I: Iterator<Item = Dd>>(iter: I) -> Dd {
        iter.fold(Dd::ZERO, |a, b| a + b)
    }
}

impl Zero for Dd {
    fn zero() -> Dd {
        Dd::ZERO
    }
    fn is_zero(&self) -> bool {
        self.hi == 0.0
    }
}

impl One for Dd {
    fn one() -> Dd {
        Dd::ONE
    }
}

impl Num for Dd {
    type FromStrRadixErr = std::num::ParseFloatError;
    fn from_str_radix(s: &str, radix: u32) -> Result<Dd, Self::FromStrRadixErr> {
        if radix != 10 {
            // only decimal input is meaningful here
            return "x".parse::<f64>().map(Dd::from_f64);
        }
        parse_decimal(s)
    }
}

/// Decimal parser that keeps all significant digits (up to double-double accuracy).
pub fn parse_decimal(s: &str) -> Result<Dd, std::num::ParseFloatError> {
    // validate with the f64 parser first so the error type is meaningful
    let approx: f64 = s.trim().parse()?;
    if !approx.is_finite() || approx == 0.0 {
        return Ok(Dd::from_f64(approx));
    }
    let t = s.trim();
    let (neg, t) = match t.strip_prefix('-') {
        Some(r) => (true, r),
        None => (false, t.strip_prefix('+').unwrap_or(t)),
    };
    let (mant, exp) = match t.find(['e', 'E']) {
        Some(i) => (&t[..i], t[i + 1..].parse::<i32>().unwrap_or(0)),
        None => (t, 0),
    };
    let mut acc = Dd::ZERO;
    let mut e = exp;
    let mut seen_dot = false;
    for ch in mant.chars() {
        if ch == '.' {
            seen_dot = true;
            continue;
        }
        let d = ch.to_digit(10).unwrap_or(0) as f64;
        acc = acc.mul_f64(10.0) + Dd::from_f64(d);
        if seen_dot {
            e -= 1;
        }
    }
    let v = if e >= 0 {
        acc * Dd::from_f64(10.0).powi(e)
    } else {
        acc / Dd::from_f64(10.0).powi(-e)
    };
    Ok(if neg { -v } else { v })
}

impl ToPrimitive for Dd {
    fn to_i64(&self) -> Option<i64> {
        (self.hi + self.lo).to_i64()
    }
    fn to_u64(&self) -> Option<u64> {
        (self.hi + self.lo).to_u64()
    }
    fn to_f64(&self) -> Option<f64> {
        Some(self.hi + self.lo)
    }
}

impl FromPrimitive for Dd {
    fn from_i64(n: i64) -> Option<Dd> {
        let hi = n as f64;
        let lo = (n - hi as i64) as f64;
        Some(Dd::new(hi, lo))
    }
    fn from_u64(n: u64) -> Option<Dd> {
        let hi = n as f64;
        let lo = (n as i128 - hi as i128) as f64;
        Some(Dd::new(hi, lo))
    }
    fn from_f64(x: f64) -> Option<Dd> {
        Some(Dd::from_f64(x))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: Dd, b: Dd, tol: f64) -> bool {
        (a - b).abs().hi <= tol
    }

    #[test]
    fn arithmetic_exceeds_f64_precision() {
        let third = Dd::ONE / Dd::from_f64(3.0);
        let back = third * Dd::from_f64(3.0);
        assert!(close(back, Dd::ONE, 1e-31));
        assert!(third.lo != 0.0);
    }

    #[test]
    fn sqrt_two_squares_back() {
        let r = Dd::from_f64(2.0).sqrt();
        assert!(close(r.sqr(), Dd::from_f64(2.0), 1e-31));
    }

    #[test]
    fn exp_ln_roundtrip() {
        for &x in &[0.001, 0.5, 1.0, 3.7, 20.0, -12.5] {
            let v = Dd::from_f64(x);
            assert!(close(v.exp().ln(), v, 1e-30 * x.abs().max(1.0)), "x = {x}");
        }
        assert!(close(DD_LN2.exp(), Dd::from_f64(2.0), 1e-31));
    }

    #[test]
    fn trig_identities() {
        let (s, c) = (DD_PI / Dd::from_f64(4.0)).sin_cos();
        let h = Dd::from_f64(0.5).sqrt();
        assert!(close(s, h, 1e-31) && close(c, h, 1e-31));
        for &x in &[0.1, 1.3, 2.9, -4.4, 10.0] {
            let (s, c) = Dd::from_f64(x).sin_cos();
            assert!(close(s.sqr() + c.sqr(), Dd::ONE, 1e-30));
            assert!((s.hi - x.sin()).abs() < 1e-15);
        }
    }

    #[test]
    fn atan2_inverts_sin_cos() {
        for &a in &[0.3, 1.2, 2.8, -0.7, -2.5] {
            let (s, c) = Dd::from_f64(a).sin_cos();
            assert!(close(s.atan2(c), Dd::from_f64(a), 1e-30));
        }
    }

    #[test]
    fn decimal_roundtrip() {
        let x = parse_decimal("0.5346431875726234123456789012345").unwrap();
        let s = to_decimal_string(x, 25);
        assert_eq!(s, "5.346431875726234123456789e-1");
    }
}
