//! Algebraic densities `t^a (1-t^2)^{b/2} (1+t^2)^{c/2} dt`.
//!
//! Every 1-form produced by the recursions is a rational multiple of one of
//! these, so they double as the letter type of unresolved integrals.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use num_traits::Zero;

use crate::scalar::Real;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Mono {
    pub a: i32,
    pub b: i32,
    pub c: i32,
}

/// A point of [0, 1] carried with its complement, so factors like `1 - t`
/// keep full relative accuracy near the upper end.
#[derive(Clone, Copy, Debug)]
pub struct UnitPoint<R> {
    pub t: R,
    pub one_minus_t: R,
}

impl<R: Real> UnitPoint<R> {
    pub fn new(t: R) -> Self {
        UnitPoint { t, one_minus_t: R::one() - t }
    }

    pub fn one_minus_t2(&self) -> R {
        self.one_minus_t * (R::one() + self.t)
    }

    pub fn one_plus_t2(&self) -> R {
        R::one() + self.t * self.t
    }
}

/// `r^e` where `r2 = r^2 > 0`, for a signed integer `e`.
fn half_pow<R: Real>(r2: R, e: i32) -> R {
    let whole = r2.powi(e.div_euclid(2));
    if e.rem_euclid(2) == 1 {
        whole * r2.sqrt()
    } else {
        whole
    }
}

/// `(1+v)^{e/2} - 1` without cancellation for small `v`.
pub fn half_pow_minus_one<R: Real>(v: R, e: i32) -> R {
    if e == 0 {
        return R::zero();
    }
    let one = R::one();
    let r = (one + v).sqrt();
    let r_minus_1 = v / (one + r);
    let k = e.unsigned_abs();
    // r^k - 1 = (r - 1)(1 + r + ... + r^{k-1})
    let mut geo = R::zero();
    let mut p = one;
    for _ in 0..k {
        geo += p;
        p *= r;
    }
    let pos = r_minus_1 * geo;
    if e > 0 {
        pos
    } else {
        -pos / (one + pos)
    }
}

impl Mono {
    pub const ONE: Mono = Mono { a: 0, b: 0, c: 0 };

    pub const fn new(a: i32, b: i32, c: i32) -> Self {
        Mono { a, b, c }
    }

    pub fn mul(self, o: Mono) -> Mono {
        Mono::new(self.a + o.a, self.b + o.b, self.c + o.c)
    }

    /// `(1 - s t^2)^{e/2}` as a monomial.
    pub fn sqrt_factor(s: i32, e: i32) -> Mono {
        if s > 0 {
            Mono::new(0, e, 0)
        } else {
            Mono::new(0, 0, e)
        }
    }

    pub fn t_pow(a: i32) -> Mono {
        Mono::new(a, 0, 0)
    }

    pub fn eval<R: Real>(self, p: UnitPoint<R>) -> R {
        let mut v = if self.a == 0 { R::one() } else { p.t.powi(self.a) };
        if self.b != 0 {
            v *= half_pow(p.one_minus_t2(), self.b);
        }
        if self.c != 0 {
            v *= half_pow(p.one_plus_t2(), self.c);
        }
        v
    }

    /// `density - 1/t` for a form with a simple pole at the origin, evaluated
    /// without cancellation.
    pub fn eval_minus_pole<R: Real>(self, p: UnitPoint<R>) -> R {
        debug_assert_eq!(self.a, -1);
        if p.t > R::of(0.5) {
            // no cancellation away from the origin, and 1 - t^2 stays exact
            return self.eval(p) - R::one() / p.t;
        }
        let t2 = p.t * p.t;
        let gb = half_pow_minus_one(-t2, self.b);
        let gc = half_pow_minus_one(t2, self.c);
        (gb + gc + gb * gc) / p.t
    }

    /// Log-divergent at 0 when integrated from there.
    pub fn pole_at_zero(self) -> bool {
        self.a <= -1
    }

    /// Antiderivative vanishing at 0 when it is itself a short sum of monomials:
    /// `t (1 -+ t^2)^{k/2}` with `k != -2`.
    pub fn primitive(self) -> Option<Vec<(num_rational::BigRational, Mono)>> {
        use num_rational::BigRational;
        let r = |n: i64, d: i64| BigRational::new(n.into(), d.into());
        if self.a != 1 {
            return None;
        }
        match (self.b, self.c) {
            (0, 0) => Some(vec![(r(1, 2), Mono::new(2, 0, 0))]),
            (b, 0) if b != -2 => {
                let k = (b + 2) as i64;
                Some(vec![(r(1, k), Mono::ONE), (r(-1, k), Mono::new(0, b + 2, 0))])
            }
            (0, c) if c != -2 => {
                let k = (c + 2) as i64;
                Some(vec![(r(-1, k), Mono::ONE), (r(1, k), Mono::new(0, 0, c + 2))])
            }
            _ => None,
        }
    }
}

/// Exponents of `t^a (1-t^2)^{b/2} (1+t^2)^{c/2}` split into a square-root
/// class `(a, b, c) mod 2` and integer powers of `u = t^2`, `1-u`, `1+u`.
fn split_class(m: Mono) -> ([i32; 3], [i32; 3]) {
    let cls = [m.a.rem_euclid(2), m.b.rem_euclid(2), m.c.rem_euclid(2)];
    (cls, [(m.a - cls[0]) / 2, (m.b - cls[1]) / 2, (m.c - cls[2]) / 2])
}

/// Partial fractions of `u^m (1-u)^p (1+u)^q` over the basis `u^k` (any k),
/// `(1-u)^k` and `(1+u)^k` (k < 0).
fn partial_fractions(e: [i32; 3], out: &mut BTreeMap<[i32; 3], BigRational>, k: BigRational) {
    let [m, p, q] = e;
    let half = || BigRational::new(1.into(), 2.into());
    if p > 0 || q > 0 {
        let (n, sign) = if p > 0 { (p, -1) } else { (q, 1) };
        let mut binom = BigRational::from_integer(1.into());
        for i in 0..=n {
            let mut next = e;
            next[0] = m + i;
            if p > 0 {
                next[1] = 0;
            } else {
                next[2] = 0;
            }
            let s = if sign < 0 && i % 2 == 1 { -binom.clone() } else { binom.clone() };
            partial_fractions(next, out, k.clone() * s);
            binom = binom * BigRational::from_integer((n - i).into()) / BigRational::from_integer((i + 1).into());
        }
        return;
    }
    let nonzero = e.iter().filter(|&&v| v != 0).count();
    if nonzero <= 1 {
        let entry = out.entry(e).or_insert_with(BigRational::zero);
        *entry += k;
        return;
    }
    let neg = -k.clone();
    match (m.signum(), p < 0, q < 0) {
        // 1 = (1-u) + u
        (-1, true, _) => {
            partial_fractions([m, p + 1, q], out, k.clone());
            partial_fractions([m + 1, p, q], out, k);
        }
        // u = 1 - (1-u)
        (1, true, _) => {
            partial_fractions([m - 1, p, q], out, k);
            partial_fractions([m - 1, p + 1, q], out, neg);
        }
        // 1 = (1+u) - u
        (-1, false, true) => {
            partial_fractions([m, p, q + 1], out, k);
            partial_fractions([m + 1, p, q], out, neg);
        }
        // u = (1+u) - 1
        (1, false, true) => {
            partial_fractions([m - 1, p, q + 1], out, k);
            partial_fractions([m - 1, p, q], out, neg);
        }
        // 2 = (1-u) + (1+u)
        _ => {
            let k = k * half();
            partial_fractions([m, p + 1, q], out, k.clone());
            partial_fractions([m, p, q + 1], out, k);
        }
    }
}

impl Mono {
    /// Unique expansion over monomials whose rational part is a single
    /// partial-fraction basis element. Distinct canonical monomials are
    /// linearly independent functions.
    pub fn canonical(self) -> Vec<(BigRational, Mono)> {
        let (cls, e) = split_class(self);
        let mut out = BTreeMap::new();
        partial_fractions(e, &mut out, BigRational::from_integer(1.into()));
        out.into_iter()
            .filter(|(_, k)| !k.is_zero())
            .map(|(e, k)| (k, Mono::new(cls[0] + 2 * e[0], cls[1] + 2 * e[1], cls[2] + 2 * e[2])))
            .collect()
    }

    pub fn is_canonical(self) -> bool {
        let (_, e) = split_class(self);
        e[1] <= 0 && e[2] <= 0 && e.iter().filter(|&&v| v != 0).count() <= 1
    }

    /// Algebraic antiderivative vanishing at 0, when the substitutions
    /// `v = 1 -+ t^2` (odd powers of t) or the two `-3/2` powers give one.
    pub fn primitive_general(self) -> Option<Vec<(BigRational, Mono)>> {
        let r = |n: i64, d: i64| BigRational::new(n.into(), d.into());
        match (self.a, self.b, self.c) {
            (a, 0, 0) if a >= 0 => return Some(vec![(r(1, a as i64 + 1), Mono::new(a + 1, 0, 0))]),
            (0, -3, 0) => return Some(vec![(r(1, 1), Mono::new(1, -1, 0))]),
            (0, 0, -3) => return Some(vec![(r(1, 1), Mono::new(1, 0, -1))]),
            _ => {}
        }
        if self.a < 1 || self.a % 2 == 0 || (self.b != 0 && self.c != 0) {
            return None;
        }
        // t^{2k+1} (1 -+ t^2)^{e/2} dt = -+ (1/2) (+-(1 - v))^k v^{e/2} dv
        let k = (self.a - 1) / 2;
        let (e, minus) = if self.b != 0 { (self.b, true) } else { (self.c, false) };
        let mut out = Vec::new();
        let mut at_zero = BigRational::zero();
        let mut binom = 1i64;
        for i in 0..=k {
            let den = 2 * i + e + 2;
            if den == 0 {
                return None;
            }
            // binom(k, i) (-1)^i for 1-t^2, binom(k, i) (-1)^{k-i} for 1+t^2
            let parity = if minus { i } else { k - i };
            let mut q = r(binom, den as i64);
            if parity % 2 == 1 {
                q = -q;
            }
            if minus {
                q = -q;
            }
            at_zero += &q;
            out.push((q, if minus { Mono::new(0, den, 0) } else { Mono::new(0, 0, den) }));
            binom = binom * (k - i) as i64 / (i + 1) as i64;
        }
        out.push((-at_zero, Mono::ONE));
        Some(out)
    }
}

impl fmt::Display for Mono {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(l) = crate::words::OmegaLetter::from_mono(*self) {
            return write!(f, "{l}");
        }
        let mut parts = Vec::new();
        match self.a {
            0 => {}
            1 => parts.push("t".to_string()),
            a => parts.push(format!("t^{a}")),
        }
        if self.b != 0 {
            parts.push(format!("(1-t^2)^({}/2)", self.b));
        }
        if self.c != 0 {
            parts.push(format!("(1+t^2)^({}/2)", self.c));
        }
        if parts.is_empty() {
            parts.push("1".into());
        }
        write!(f, "[{} dt]", parts.join(" "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Dd;
    use crate::words::OmegaLetter;

    #[test]
    fn omega_twenty_is_zero_plus_two() {
        for &t in &[0.1, 0.37, 0.8, 0.99] {
            let p = UnitPoint::new(t);
            for (w20, w2) in [(OmegaLetter::W20, OmegaLetter::W2), (OmegaLetter::Wm20, OmegaLetter::Wm2)] {
                let sign = if w20 == OmegaLetter::W20 { 1.0 } else { -1.0 };
                let lhs = w20.mono().eval(p);
                let rhs = 1.0 / t + sign * w2.mono().eval(p);
                assert!((lhs - rhs).abs() < 1e-13 * lhs.abs());
            }
        }
    }

    #[test]
    fn densities_match_definitions() {
        let t = 0.43f64;
        let p = UnitPoint::new(t);
        let cases = [
            (OmegaLetter::W1, 1.0 / (1.0 - t * t).sqrt()),
            (OmegaLetter::Wm3, 1.0 / (t * (1.0 + t * t).sqrt())),
            (OmegaLetter::W4, t / (1.0 - t.powi(4)).sqrt()),
            (OmegaLetter::W6, 1.0 / (t * (1.0 - t.powi(4)).sqrt())),
            (OmegaLetter::Wm5, t / (1.0 + t * t).sqrt()),
        ];
        for (l, v) in cases {
            assert!((l.mono().eval(p) - v).abs() < 1e-14, "{l}");
        }
    }

    #[test]
    fn pole_removal_is_accurate_near_zero() {
        let t = Dd::from_f64(1e-9);
        let p = UnitPoint::new(t);
        // 1/(t sqrt(1+t^2)) - 1/t = -t/2 + 3t^3/8 ...
        let v = OmegaLetter::Wm3.mono().eval_minus_pole(p);
        let expect = -t / Dd::from_f64(2.0);
        assert!(((v - expect) / expect).abs().to_f64() < 1e-17);
        let w = OmegaLetter::W6.mono().eval_minus_pole(UnitPoint::new(0.5f64));
        let direct = 1.0 / (0.5 * (1.0f64 - 0.0625).sqrt()) - 2.0;
        assert!((w - direct).abs() < 1e-14);
    }

    #[test]
    fn half_pow_minus_one_matches_direct() {
        for e in -5..=5 {
            for &v in &[0.3f64, -0.2, 1e-3] {
                let direct = (1.0 + v).powf(e as f64 / 2.0) - 1.0;
                assert!((half_pow_minus_one(v, e) - direct).abs() < 1e-14, "e={e} v={v}");
            }
        }
    }

    #[test]
    fn primitive_table_differentiates_back() {
        for m in [Mono::new(1, 0, -3), Mono::new(1, -3, 0), Mono::new(1, 1, 0), Mono::new(1, 0, 0)] {
            let prim = m.primitive().unwrap();
            let f = |t: f64| -> f64 {
                prim.iter()
                    .map(|(q, mm)| {
                        use num_traits::ToPrimitive;
                        q.to_f64().unwrap() * mm.eval(UnitPoint::new(t))
                    })
                    .sum()
            };
            assert!(f(0.0).abs() < 1e-15);
            let (t, h) = (0.4, 1e-5);
            let d = (f(t + h) - f(t - h)) / (2.0 * h);
            assert!((d - m.eval(UnitPoint::new(t))).abs() < 1e-8, "{m:?}");
        }
    }

    fn eval_sum(terms: &[(BigRational, Mono)], t: f64) -> f64 {
        use num_traits::ToPrimitive;
        terms.iter().map(|(q, m)| q.to_f64().unwrap() * m.eval(UnitPoint::new(t))).sum()
    }

    #[test]
    fn canonical_expansion_is_pointwise_exact() {
        for a in -4..=4 {
            for b in -5..=3 {
                for c in -5..=3 {
                    let m = Mono::new(a, b, c);
                    let can = m.canonical();
                    assert!(can.iter().all(|(_, x)| x.is_canonical()), "{m:?}");
                    for &t in &[0.17, 0.5, 0.83] {
                        let direct = m.eval(UnitPoint::new(t));
                        let v = eval_sum(&can, t);
                        assert!((v - direct).abs() < 1e-11 * direct.abs().max(1.0), "{m:?} at {t}: {v} vs {direct}");
                    }
                }
            }
        }
        // 1/(t sqrt(1-t^4)) splits into three classes-(1,1,1) pieces
        assert_eq!(Mono::new(-1, -1, -1).canonical().len(), 3);
        assert_eq!(Mono::new(1, -1, -1).canonical().len(), 2);
    }

    #[test]
    fn general_primitives_differentiate_back() {
        for a in 0..=5 {
            for b in -5..=3 {
                for (bb, cc) in [(b, 0), (0, b)] {
                    let m = Mono::new(a, bb, cc);
                    let Some(prim) = m.primitive_general() else { continue };
                    assert!(eval_sum(&prim, 0.0).abs() < 1e-14, "{m:?}");
                    let (t, h) = (0.45, 1e-5);
                    let d = (eval_sum(&prim, t + h) - eval_sum(&prim, t - h)) / (2.0 * h);
                    assert!((d - m.eval(UnitPoint::new(t))).abs() < 1e-7, "{m:?}");
                }
            }
        }
        assert!(Mono::new(1, -2, 0).primitive_general().is_none());
        assert!(Mono::new(0, -1, 0).primitive_general().is_none());
    }
}
