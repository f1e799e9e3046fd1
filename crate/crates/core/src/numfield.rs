//! Exact arithmetic in the cyclotomic field Q(mu), mu = e^{i pi/4}.
//!
//! Elements are stored on the power basis {1, mu, mu^2, mu^3} with the
//! reduction rule mu^4 = -1.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_complex::Complex;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::scalar::cplx::C;
use crate::scalar::Real;

/// Reduced big rational; `num_rational` keeps every value normalized.
pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> Rational {
    BigRational::from_integer(BigInt::from(n))
}

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct CycloQ8 {
    c: [Rational; 4],
}

impl CycloQ8 {
    pub fn new(c0: Rational, c1: Rational, c2: Rational, c3: Rational) -> Self {
        CycloQ8 { c: [c0, c1, c2, c3] }
    }

    pub fn zero() -> Self {
        CycloQ8::default()
    }

    pub fn one() -> Self {
        Self::from_rational(Rational::one())
    }

    pub fn from_rational(r: Rational) -> Self {
        CycloQ8::new(r, Rational::zero(), Rational::zero(), Rational::zero())
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(rat_int(n))
    }

    pub fn from_frac(n: i64, d: i64) -> Self {
        Self::from_rational(rat(n, d))
    }

    /// `mu^e` for any integer exponent.
    pub fn mu_pow(e: i64) -> Self {
        let m = e.rem_euclid(8) as usize;
        let mut c: [Rational; 4] = Default::default();
        c[m % 4] = if m >= 4 { -Rational::one() } else { Rational::one() };
        CycloQ8 { c }
    }

    pub fn mu() -> Self {
        Self::mu_pow(1)
    }

    pub fn i() -> Self {
        Self::mu_pow(2)
    }

    /// sqrt(2) = mu - mu^3.
    pub fn sqrt2() -> Self {
        Self::mu() - Self::mu_pow(3)
    }

    pub fn coeffs(&self) -> &[Rational; 4] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self == &Self::one()
    }

    /// `Some(r)` when the element is the rational `r`.
    pub fn as_rational(&self) -> Option<&Rational> {
        if self.c[1..].iter().all(Zero::is_zero) {
            Some(&self.c[0])
        } else {
            None
        }
    }

    pub fn scale(&self, r: &Rational) -> Self {
        CycloQ8 { c: [&self.c[0] * r, &self.c[1] * r, &self.c[2] * r, &self.c[3] * r] }
    }

    /// Galois automorphism mu -> mu^k, k odd.
    pub fn galois(&self, k: i64) -> Self {
        assert!(k.is_odd(), "Galois exponent must be odd");
        let mut out = CycloQ8::zero();
        for (j, cj) in self.c.iter().enumerate() {
            if cj.is_zero() {
                continue;
            }
            out += Self::mu_pow(k * j as i64).scale(cj);
        }
        out
    }

    /// Complex conjugation, mu -> mu^{-1} = -mu^3.
    pub fn conj(&self) -> Self {
        self.galois(7)
    }

    pub fn is_real(&self) -> bool {
        &self.conj() == self
    }

    /// Field norm down to Q: product of the four Galois conjugates.
    pub fn norm(&self) -> Rational {
        let p = self * &self.galois(3) * self.galois(5) * self.galois(7);
        p.as_rational().cloned().expect("norm lies in Q")
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let cofactor = self.galois(3) * self.galois(5) * self.galois(7);
        let n = (self * &cofactor).as_rational().cloned().expect("norm lies in Q");
        Some(cofactor.scale(&n.recip()))
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Numeric value at the scalar's native precision.
    pub fn embed<R: Real>(&self) -> C<R> {
        let h = R::of(0.5).sqrt();
        let basis = [
            Complex::new(R::one(), R::zero()),
            Complex::new(h, h),
            Complex::new(R::zero(), R::one()),
            Complex::new(-h, h),
        ];
        let mut z = Complex::new(R::zero(), R::zero());
        for (cj, b) in self.c.iter().zip(basis) {
            if !cj.is_zero() {
                let v = R::from_rational(cj);
                z = z + Complex::new(b.re * v, b.im * v);
            }
        }
        z
    }

    /// If the element is a root of unity `mu^e`, return `e` in 0..8.
    pub fn root_exponent(&self) -> Option<i64> {
        (0..8).find(|&e| self == &Self::mu_pow(e))
    }
}

/// Ring product reduced by mu^4 = -1.
pub fn cyclo_mul(a: &CycloQ8, b: &CycloQ8) -> CycloQ8 {
    let mut acc: [Rational; 8] = Default::default();
    for i in 0..4 {
        if a.c[i].is_zero() {
            continue;
        }
        for j in 0..4 {
            if b.c[j].is_zero() {
                continue;
            }
            acc[i + j] += &a.c[i] * &b.c[j];
        }
    }
    let [a0, a1, a2, a3, a4, a5, a6, _] = acc;
    CycloQ8::new(a0 - a4, a1 - a5, a2 - a6, a3)
}

/// Embedding into C at the precision of `R` (53 bits for f64, 106 for `Dd`).
pub fn cyclo_embed<R: Real>(a: &CycloQ8) -> C<R> {
    debug_assert!(R::BITS >= 53 || cfg!(test));
    a.embed()
}

pub fn cyclo_conj(a: &CycloQ8) -> CycloQ8 {
    a.conj()
}

fn fmt_rat(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for CycloQ8 {
    /// Full form "a + b*mu + c*mu^2 + d*mu^3".
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = &self.c;
        write!(
            f,
            "{} + {}*mu + {}*mu^2 + {}*mu^3",
            fmt_rat(a),
            fmt_rat(b),
            fmt_rat(c),
            fmt_rat(d)
        )
    }
}

impl fmt::Debug for CycloQ8 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.compact())
    }
}

impl CycloQ8 {
    /// Short rendering that drops zero terms, e.g. "1/2*mu - mu^3".
    pub fn compact(&self) -> String {
        let names = ["", "mu", "mu^2", "mu^3"];
        let mut out = String::new();
        for (j, cj) in self.c.iter().enumerate() {
            if cj.is_zero() {
                continue;
            }
            let neg = cj.is_negative();
            let mag = cj.abs();
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            if j == 0 {
                out.push_str(&fmt_rat(&mag));
            } else if mag.is_one() {
                out.push_str(names[j]);
            } else {
                out.push_str(&format!("{}*{}", fmt_rat(&mag), names[j]));
            }
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }
}

impl Add for &CycloQ8 {
    type Output = CycloQ8;
    fn add(self, b: &CycloQ8) -> CycloQ8 {
        CycloQ8 {
            c: [&self.c[0] + &b.c[0], &self.c[1] + &b.c[1], &self.c[2] + &b.c[2], &self.c[3] + &b.c[3]],
        }
    }
}

impl Sub for &CycloQ8 {
    type Output = CycloQ8;
    fn sub(self, b: &CycloQ8) -> CycloQ8 {
        CycloQ8 {
            c: [&self.c[0] - &b.c[0], &self.c[1] - &b.c[1], &self.c[2] - &b.c[2], &self.c[3] - &b.c[3]],
        }
    }
}

impl Mul for &CycloQ8 {
    type Output = CycloQ8;
    fn mul(self, b: &CycloQ8) -> CycloQ8 {
        cyclo_mul(self, b)
    }
}

impl Neg for &CycloQ8 {
    type Output = CycloQ8;
    fn neg(self) -> CycloQ8 {
        CycloQ8 { c: [-&self.c[0], -&self.c[1], -&self.c[2], -&self.c[3]] }
    }
}

macro_rules! owned_ops {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for CycloQ8 {
            type Output = CycloQ8;
            fn $m(self, b: CycloQ8) -> CycloQ8 { (&self).$m(&b) }
        }
        impl $tr<&CycloQ8> for CycloQ8 {
            type Output = CycloQ8;
            fn $m(self, b: &CycloQ8) -> CycloQ8 { (&self).$m(b) }
        }
        impl $tr<CycloQ8> for &CycloQ8 {
            type Output = CycloQ8;
            fn $m(self, b: CycloQ8) -> CycloQ8 { self.$m(&b) }
        }
    )*};
}
owned_ops!(Add add, Sub sub, Mul mul);

impl Neg for CycloQ8 {
    type Output = CycloQ8;
    fn neg(self) -> CycloQ8 {
        -&self
    }
}

impl Div for &CycloQ8 {
    type Output = CycloQ8;
    fn div(self, b: &CycloQ8) -> CycloQ8 {
        self * &b.inv().expect("division by zero in Q(mu)")
    }
}

impl AddAssign<CycloQ8> for CycloQ8 {
    fn add_assign(&mut self, b: CycloQ8) {
        *self = &*self + &b;
    }
}

impl AddAssign<&CycloQ8> for CycloQ8 {
    fn add_assign(&mut self, b: &CycloQ8) {
        *self = &*self + b;
    }
}

impl SubAssign<&CycloQ8> for CycloQ8 {
    fn sub_assign(&mut self, b: &CycloQ8) {
        *self = &*self - b;
    }
}
