//! Closed-form constants, computed once in double-double and cached.

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::mpl::polylog;
use super::{EvalError, EvalResult, Engine};
use crate::scalar::cplx::{self, C};
use crate::scalar::{Dd, Real};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ConstName {
    Pi,
    Log2,
    LogNu,
    Zeta3,
    Catalan,
    Li2NuInv,
    Li3NuInv,
    Li3InvSqrt2,
    L3Chi8,
    ImLi3HalfOnePlusI,
}

impl ConstName {
    pub const ALL: [ConstName; 10] = [
        ConstName::Pi,
        ConstName::Log2,
        ConstName::LogNu,
        ConstName::Zeta3,
        ConstName::Catalan,
        ConstName::Li2NuInv,
        ConstName::Li3NuInv,
        ConstName::Li3InvSqrt2,
        ConstName::L3Chi8,
        ConstName::ImLi3HalfOnePlusI,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ConstName::Pi => "PI",
            ConstName::Log2 => "LOG2",
            ConstName::LogNu => "LOG_NU",
            ConstName::Zeta3 => "ZETA3",
            ConstName::Catalan => "CATALAN",
            ConstName::Li2NuInv => "LI2_NU_INV",
            ConstName::Li3NuInv => "LI3_NU_INV",
            ConstName::Li3InvSqrt2 => "LI3_INV_SQRT2",
            ConstName::L3Chi8 => "L3_CHI8",
            ConstName::ImLi3HalfOnePlusI => "IM_LI3_HALF_1_PLUS_I",
        }
    }

    pub fn from_name(s: &str) -> Option<ConstName> {
        Self::ALL.into_iter().find(|c| c.name() == s)
    }

    fn slot(self) -> usize {
        Self::ALL.iter().position(|&c| c == self).expect("listed")
    }
}

/// `B_0 .. B_n` from `sum_{k<=m} C(m+1, k) B_k = 0`.
pub fn bernoulli_numbers(n: usize) -> Vec<BigRational> {
    let mut b: Vec<BigRational> = vec![BigRational::one()];
    for m in 1..=n {
        let mut s = BigRational::zero();
        let mut binom = BigInt::one();
        for (k, bk) in b.iter().enumerate() {
            s += bk * BigRational::from_integer(binom.clone());
            binom = binom * BigInt::from(m + 1 - k) / BigInt::from(k + 1);
        }
        b.push(-s / BigRational::from_integer(BigInt::from(m + 1)));
    }
    b
}

/// Hurwitz zeta `sum_{k>=0} (k+a)^{-s}` for integer `s >= 2` and `a > 0`,
/// by Euler-Maclaurin after shifting the argument past 30.
pub fn hurwitz_zeta<R: Real>(s: u32, a: R) -> R {
    const SHIFT: i64 = 30;
    const TERMS: usize = 18;
    static COEFFS: OnceLock<Vec<BigRational>> = OnceLock::new();
    // B_{2j} / (2j)!
    let coeffs = COEFFS.get_or_init(|| {
        let b = bernoulli_numbers(2 * TERMS);
        let mut fact = BigInt::one();
        let mut out = Vec::with_capacity(TERMS);
        for j in 1..=2 * TERMS {
            fact *= j;
            if j % 2 == 0 {
                out.push(&b[j] / BigRational::from_integer(fact.clone()));
            }
        }
        out
    });
    let mut sum = R::zero();
    for k in 0..SHIFT {
        sum += (a + R::of_int(k)).powi(-(s as i32));
    }
    let big = a + R::of_int(SHIFT);
    let sr = R::of_int(s as i64);
    sum += big.powi(1 - s as i32) / (sr - R::one());
    sum += big.powi(-(s as i32)) / R::of(2.0);
    // rising factorial s (s+1) ... (s+2j-2)
    let mut rising = sr;
    let inv2 = R::one() / (big * big);
    let mut p = big.powi(-(s as i32) - 1);
    for (j, c) in coeffs.iter().enumerate() {
        if j > 0 {
            let k = R::of_int((s as usize + 2 * j - 1) as i64);
            rising = rising * k * (k + R::one());
            p *= inv2;
        }
        sum += R::from_rational(c) * rising * p;
    }
    sum
}

/// `L(s, chi_8)` for the real character with `chi(1) = chi(7) = 1`.
pub fn l_chi8<R: Real>(s: u32) -> R {
    let e = R::of(8.0);
    let h = |k: f64| hurwitz_zeta::<R>(s, R::of(k) / e);
    (h(1.0) - h(3.0) - h(5.0) + h(7.0)) / e.powi(s as i32)
}

fn compute_all() -> [Dd; 10] {
    let two = Dd::from_f64(2.0);
    let sqrt2 = two.sqrt();
    let nu_inv = sqrt2 - Dd::ONE;
    let re = |z: Dd| cplx::re(z);
    let mut v = [Dd::ZERO; 10];
    v[ConstName::Pi.slot()] = Dd::pi();
    v[ConstName::Log2.slot()] = Dd::ln2();
    v[ConstName::LogNu.slot()] = (sqrt2 + Dd::ONE).ln();
    v[ConstName::Zeta3.slot()] = hurwitz_zeta(3, Dd::ONE);
    v[ConstName::Catalan.slot()] =
        (hurwitz_zeta(2, Dd::from_f64(0.25)) - hurwitz_zeta(2, Dd::from_f64(0.75))) / Dd::from_f64(16.0);
    v[ConstName::Li2NuInv.slot()] = polylog(2, re(nu_inv)).re;
    v[ConstName::Li3NuInv.slot()] = polylog(3, re(nu_inv)).re;
    v[ConstName::Li3InvSqrt2.slot()] = polylog(3, re(Dd::ONE / sqrt2)).re;
    v[ConstName::L3Chi8.slot()] = l_chi8(3);
    let half = Dd::from_f64(0.5);
    v[ConstName::ImLi3HalfOnePlusI.slot()] = polylog(3, C::new(half, half)).im;
    v
}

static TABLE: OnceLock<[Dd; 10]> = OnceLock::new();

/// Value of a library constant at the precision of `R`.
pub fn constant<R: Real>(c: ConstName) -> EvalResult<R> {
    let d = TABLE.get_or_init(compute_all)[c.slot()];
    let v = R::of(d.hi) + R::of(d.lo);
    let err = 8.0 * R::eps() * d.hi.abs().max(1e-300);
    EvalResult { value: cplx::re(v), abs_error_estimate: err, engine: Engine::Constant }
}

pub fn constant_by_name<R: Real>(name: &str) -> Result<EvalResult<R>, EvalError> {
    ConstName::from_name(name).map(constant).ok_or_else(|| EvalError::UnknownConstant(name.to_string()))
}
