//! Divergent iterated integrals over the X-alphabet: classification,
//! Chen splitting of arcs through the origin, rescaling to [0, 1], and
//! shuffle regularisation as polynomials in the cutoff variable `T`.
//!
//! `T = -log eps` for cutoffs at distance `eps` from either endpoint, so
//! `int_0^1 x_0` and `int_0^1 x_1` both regularise to `T`.

use std::collections::{BTreeMap, HashMap};

use num_complex::Complex;
use num_traits::Zero;

use thiserror::Error;

use crate::evaluator::{
    eval_forms_regularized, eval_pole_words, eval_xword, EvalConfig, EvalError, EvalResult, Pole, Segment,
};
pub use crate::evaluator::PathSpec;
use crate::numfield::{rat, CycloQ8};
use crate::scalar::cplx::C;
use crate::scalar::Real;
use crate::words::{reverse_path, LinComb, OmegaLetter, Word, XLetter, XWord};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RegError {
    #[error("endpoint {0} is not an 8th root of unity")]
    EndpointNotRoot(String),
    #[error("pole {0} lies on the arc interior")]
    PoleOnArc(String),
    #[error("residual divergence: T^{degree} coefficient {size:e} does not cancel")]
    ResidualDivergence { degree: u32, size: f64 },
    #[error(transparent)]
    Eval(#[from] EvalError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Convergence {
    Convergent,
    DivUpper,
    DivLower,
    DivBoth,
}

/// Endpoint behaviour of `int_0^z w`.
pub fn classify(w: &XWord, z: &CycloQ8) -> Convergence {
    let upper = w.letters.first().is_some_and(|l| &l.pole() == z);
    let lower = w.letters.last() == Some(&XLetter::Zero);
    match (upper, lower) {
        (false, false) => Convergence::Convergent,
        (true, false) => Convergence::DivUpper,
        (false, true) => Convergence::DivLower,
        (true, true) => Convergence::DivBoth,
    }
}

/// One product of Chen's formula for a path through the origin:
/// `int_0^z upper * int_1^0 lower`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitTerm {
    pub upper: XWord,
    pub lower: XWord,
}

/// All `k + 1` ways of cutting `w` into an outer part (run on 0 -> z) and
/// an inner part (run on 1 -> 0).
pub fn chen_split(w: &XWord) -> Vec<SplitTerm> {
    (0..=w.len())
        .map(|l| SplitTerm { upper: Word::new(w.letters[..l].to_vec()), lower: Word::new(w.letters[l..].to_vec()) })
        .collect()
}

/// Substitute `t = z s`: each pole `alpha` becomes `alpha / z`.
pub fn rescale_to_unit(w: &XWord, z: &CycloQ8) -> Result<XWord, RegError> {
    let e = z.root_exponent().ok_or_else(|| RegError::EndpointNotRoot(z.compact()))?;
    Ok(Word::new(
        w.letters
            .iter()
            .map(|l| match l {
                XLetter::Zero => XLetter::Zero,
                XLetter::Root(a) => XLetter::root(*a as i64 - e),
            })
            .collect(),
    ))
}

/// `sum_k T^k c_k` with each `c_k` a combination of words convergent on [0, 1].
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RegPolynomial {
    pub coeffs: BTreeMap<u32, LinComb<XWord>>,
}

impl RegPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn convergent(w: XWord) -> Self {
        let mut p = Self::zero();
        p.coeffs.insert(0, LinComb::unit(w));
        p
    }

    /// `T^k / k!`.
    pub fn t_power(k: u32) -> Self {
        let fact: i64 = (1..=k as i64).product();
        let mut p = Self::zero();
        p.coeffs.insert(k, LinComb::single(Word::empty(), CycloQ8::from_frac(1, fact)));
        p
    }

    pub fn degree(&self) -> u32 {
        self.coeffs.keys().next_back().copied().unwrap_or(0)
    }

    /// The regularised value, as a convergent combination.
    pub fn at_t_zero(&self) -> LinComb<XWord> {
        self.coeffs.get(&0).cloned().unwrap_or_default()
    }

    pub fn add_scaled(&mut self, o: &RegPolynomial, k: &CycloQ8) {
        for (d, c) in &o.coeffs {
            self.coeffs.entry(*d).or_default().add_scaled(c, k);
        }
        self.coeffs.retain(|_, c| !c.is_empty());
    }

    /// Multiply by `T`.
    pub fn times_t(&self) -> Self {
        RegPolynomial { coeffs: self.coeffs.iter().map(|(d, c)| (d + 1, c.clone())).collect() }
    }

    /// Product of polynomials; coefficients multiply by shuffle.
    pub fn mul(&self, o: &RegPolynomial) -> RegPolynomial {
        let mut out = RegPolynomial::zero();
        for (d1, c1) in &self.coeffs {
            for (d2, c2) in &o.coeffs {
                out.coeffs.entry(d1 + d2).or_default().add_assign(&c1.shuffle_with(c2));
            }
        }
        out.coeffs.retain(|_, c| !c.is_empty());
        out
    }
}

const UPPER: XLetter = XLetter::Root(0);
const LOWER: XLetter = XLetter::Zero;

/// Regularise a word on 0 -> 1 by peeling divergent boundary letters:
/// `x_1 sh v = m * (x_1 v) + ...` at the top and `v sh x_0` at the bottom.
pub fn shuffle_regularize(w: &XWord) -> RegPolynomial {
    let mut memo = HashMap::new();
    reg_rec(w, &mut memo)
}

pub fn shuffle_regularize_lincomb(lc: &LinComb<XWord>) -> RegPolynomial {
    let mut memo = HashMap::new();
    let mut out = RegPolynomial::zero();
    for (w, c) in lc.iter() {
        out.add_scaled(&reg_rec(w, &mut memo), c);
    }
    out
}

fn reg_rec(w: &XWord, memo: &mut HashMap<XWord, RegPolynomial>) -> RegPolynomial {
    if let Some(p) = memo.get(w) {
        return p.clone();
    }
    let n = w.len();
    let lead = w.letters.iter().take_while(|&&l| l == UPPER).count();
    let trail = w.letters.iter().rev().take_while(|&&l| l == LOWER).count();
    let out = if lead == n && n > 0 {
        RegPolynomial::t_power(n as u32)
    } else if lead > 0 {
        let v = Word::new(w.letters[1..].to_vec());
        let mut acc = reg_rec(&v, memo).times_t();
        for p in lead..=v.len() {
            let mut o = v.letters.clone();
            o.insert(p, UPPER);
            let r = reg_rec(&Word::new(o), memo);
            acc.add_scaled(&r, &CycloQ8::from_int(-1));
        }
        let mut scaled = RegPolynomial::zero();
        scaled.add_scaled(&acc, &CycloQ8::from_frac(1, lead as i64));
        scaled
    } else if trail == n && n > 0 {
        RegPolynomial::t_power(n as u32)
    } else if trail > 0 {
        let v = Word::new(w.letters[..n - 1].to_vec());
        let mut acc = reg_rec(&v, memo).times_t();
        for p in 0..n - trail {
            let mut o = v.letters.clone();
            o.insert(p, LOWER);
            let r = reg_rec(&Word::new(o), memo);
            acc.add_scaled(&r, &CycloQ8::from_int(-1));
        }
        let mut scaled = RegPolynomial::zero();
        scaled.add_scaled(&acc, &CycloQ8::from_frac(1, trail as i64));
        scaled
    } else {
        RegPolynomial::convergent(w.clone())
    };
    memo.insert(w.clone(), out.clone());
    out
}

/// One product after splitting, rescaling and reversing: the factor
/// `coeff * (i theta)^arc_power / arc_power! * Reg(upper) * Reg(lower)` with
/// both words on 0 -> 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArcTerm {
    pub coeff: CycloQ8,
    pub arc_power: u32,
    pub upper: XWord,
    pub lower: XWord,
}

/// Split `int` along the unit arc from 1 to `mu^e` (counter-clockwise) into
/// products of integrals over [0, 1]. The path through the origin turns by
/// `theta = e pi / 4` on a small circle there; only `x_0` letters see it.
pub fn split_arc(lc: &LinComb<XWord>, e: i64) -> Result<Vec<ArcTerm>, RegError> {
    let e = e.rem_euclid(8);
    if e == 0 {
        return Err(RegError::EndpointNotRoot("arc of zero length".into()));
    }
    let z = CycloQ8::mu_pow(e);
    let mut out = Vec::new();
    for (w, c) in lc.iter() {
        for l in &w.letters {
            if let XLetter::Root(a) = l {
                if (*a as i64) > 0 && (*a as i64) < e {
                    return Err(RegError::PoleOnArc(l.to_string()));
                }
            }
        }
        for st in chen_split(w) {
            let (sign, lower) = reverse_path(&st.lower);
            let coeff = c.scale(&rat(sign as i64, 1));
            let trailing = st.upper.letters.iter().rev().take_while(|&&l| l == XLetter::Zero).count();
            for j in 0..=trailing {
                let head = Word::new(st.upper.letters[..st.upper.len() - j].to_vec());
                out.push(ArcTerm {
                    coeff: coeff.clone(),
                    arc_power: j as u32,
                    upper: rescale_to_unit(&head, &z)?,
                    lower: lower.clone(),
                });
            }
        }
    }
    Ok(out)
}

/// Numeric outcome of a split evaluation.
#[derive(Clone, Debug)]
pub struct SplitValue<R> {
    pub value: C<R>,
    pub abs_error_estimate: f64,
    /// Sizes of the T^k coefficients (k >= 1) of the assembled polynomial;
    /// they vanish when the input converges.
    pub residual: Vec<f64>,
    /// Distinct convergent words evaluated on [0, 1].
    pub pieces: usize,
}

struct WordCache<'a, R: Real> {
    cfg: &'a EvalConfig,
    vals: HashMap<XWord, (C<R>, f64)>,
}

impl<R: Real> WordCache<'_, R> {
    fn value(&mut self, w: &XWord) -> Result<(C<R>, f64), RegError> {
        if w.is_empty() {
            return Ok((C::new(R::one(), R::zero()), 0.0));
        }
        if let Some(v) = self.vals.get(w) {
            return Ok(*v);
        }
        let path = PathSpec::from_zero(C::new(R::one(), R::zero()));
        let r = eval_xword(w, &path, self.cfg)?;
        let v = (r.value, r.abs_error_estimate);
        self.vals.insert(w.clone(), v);
        Ok(v)
    }

    /// Numeric T-polynomial; the error is accumulated alongside.
    fn poly(&mut self, p: &RegPolynomial) -> Result<(Vec<C<R>>, f64), RegError> {
        let mut out = vec![C::zero(); p.degree() as usize + 1];
        let mut err = 0.0;
        for (d, lc) in &p.coeffs {
            for (w, c) in lc.iter() {
                let (v, e) = self.value(w)?;
                let ce = c.embed::<R>();
                out[*d as usize] += ce * v;
                err += e * crate::scalar::cplx::abs(ce).to_f64_lossy();
            }
        }
        Ok((out, err))
    }
}

/// Value of a combination convergent at both ends of the arc from 1 to
/// `mu^e`, assembled from regularised pieces on [0, 1]. Fails when the
/// T-dependence does not cancel.
pub fn epsilon_split_eval<R: Real>(lc: &LinComb<XWord>, e: i64, cfg: &EvalConfig) -> Result<SplitValue<R>, RegError> {
    let terms = split_arc(lc, e)?;
    let theta = R::pi() * R::of_int(e.rem_euclid(8)) / R::of(4.0);
    let mut cache = WordCache::<R> { cfg, vals: HashMap::new() };
    let mut reg_memo = HashMap::new();
    let mut total: Vec<C<R>> = Vec::new();
    let mut err = 0.0;
    let mut mag = 0.0f64;
    for t in &terms {
        let pu = reg_rec(&t.upper, &mut reg_memo);
        let pl = reg_rec(&t.lower, &mut reg_memo);
        let (nu, eu) = cache.poly(&pu)?;
        let (nl, el) = cache.poly(&pl)?;
        // (i theta)^j / j!
        let mut arc = C::new(R::one(), R::zero());
        for k in 1..=t.arc_power {
            arc = arc * Complex::new(R::zero(), theta) / R::of_int(k as i64);
        }
        let k = t.coeff.embed::<R>() * arc;
        let kabs = crate::scalar::cplx::abs(k).to_f64_lossy();
        if total.len() < nu.len() + nl.len() - 1 {
            total.resize(nu.len() + nl.len() - 1, C::zero());
        }
        for (i, a) in nu.iter().enumerate() {
            for (j, b) in nl.iter().enumerate() {
                let p = k * *a * *b;
                mag = mag.max(crate::scalar::cplx::abs(p).to_f64_lossy());
                total[i + j] += p;
            }
        }
        let (a0, b0) = (nu[0], nl[0]);
        err += kabs
            * (eu * crate::scalar::cplx::abs(b0).to_f64_lossy() + el * crate::scalar::cplx::abs(a0).to_f64_lossy());
    }
    if total.is_empty() {
        total.push(C::zero());
    }
    let residual: Vec<f64> = total[1..].iter().map(|c| crate::scalar::cplx::abs(*c).to_f64_lossy()).collect();
    let tol = (1e3 * err).max(64.0 * R::eps() * mag.max(1.0)).max(cfg.target_abs_error);
    for (d, r) in residual.iter().enumerate() {
        if *r > tol {
            return Err(RegError::ResidualDivergence { degree: d as u32 + 1, size: *r });
        }
    }
    Ok(SplitValue {
        value: total[0],
        abs_error_estimate: err.max(64.0 * R::eps() * mag),
        residual,
        pieces: cache.vals.len(),
    })
}

/// Direct quadrature along the unit arc from 1 to `mu^e` for a combination
/// whose words converge individually.
pub fn arc_quadrature<R: Real>(lc: &LinComb<XWord>, e: i64, cfg: &EvalConfig) -> Result<EvalResult<R>, EvalError> {
    let path = PathSpec::unit_arc(R::zero(), R::pi() * R::of_int(e) / R::of(4.0));
    crate::evaluator::eval_x_lincomb(lc, &path, cfg)
}

/// `int_0^1 (w_{-3} - w_6)`, whose two halves diverge at 0, by two routes:
/// cutoff regularisation of each half on [0, 1] using
/// `int_eps^1 w_6 = (1/2) int_{eps^2}^1 w_3`, and the cutoff limit of the
/// substituted forms `int_{lambda(eps)}^{mu} d_{-1,1} - (1/2) int_{u(eps^2)}^0 d_{-1,1}`.
pub fn omega_six_difference<R: Real>(cfg: &EvalConfig) -> Result<(R, R), RegError> {
    let one = R::one();
    let reg = |l: OmegaLetter| -> Result<R, EvalError> {
        Ok(eval_forms_regularized(&[(one, vec![l.mono()])], one, cfg)?.re())
    };
    let direct = reg(OmegaLetter::Wm3)? - reg(OmegaLetter::W3)? / R::of(2.0);

    // d_{-1,1} = x_{-1} - x_1 along explicit cutoff paths, then Richardson in eps
    let dterm: Vec<(C<R>, Vec<Pole<R>>)> = vec![
        (C::new(one, R::zero()), vec![Pole::Root(4)]),
        (C::new(-one, R::zero()), vec![Pole::Root(0)]),
    ];
    let at = |eps: R| -> Result<R, EvalError> {
        let arc = PathSpec { segments: vec![Segment::Arc { from: eps.atan2(one), to: R::pi() / R::of(4.0) }] };
        let a = eval_pole_words(&dterm, &arc, cfg)?.value;
        // t = (1 - u^2)/(1 + u^2) at t = eps^2
        let t = eps * eps;
        let u0 = ((one - t) / (one + t)).sqrt();
        let seg = PathSpec::line(C::new(u0, R::zero()), C::zero());
        let b = eval_pole_words(&dterm, &seg, cfg)?.value;
        Ok((a - b / R::of(2.0)).re)
    };
    let h = R::of(1e-3);
    let (f1, f2, f3) = (at(h)?, at(h / R::of(2.0))?, at(h / R::of(4.0))?);
    // error is a power series in eps starting at eps^1
    let r1 = f2 + f2 - f1;
    let r2 = f3 + f3 - f2;
    let substituted = (R::of(4.0) * r2 - r1) / R::of(3.0);
    Ok((direct, substituted))
}

/// `sum_k c_k T^k` evaluated at a numeric `T`.
pub fn eval_t_poly<R: Real>(coeffs: &[C<R>], t: R) -> C<R> {
    let mut acc = C::zero();
    for c in coeffs.iter().rev() {
        acc = acc * t + *c;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::shuffle;
    use crate::evaluator::{constant, eval_omega_lincomb, ConstName};
    use crate::scalar::Dd;
    use crate::transforms::{cayley_d, cayley_e, cayley_y, cayley_c, rewrite_lincomb, RewriteTable};
    use proptest::prelude::*;
    use XLetter::*;

    fn xw(v: &[XLetter]) -> XWord {
        Word::new(v.to_vec())
    }

    fn k(c: ConstName) -> f64 {
        constant::<f64>(c).re()
    }

    #[test]
    fn classification() {
        let one = CycloQ8::one();
        assert_eq!(classify(&xw(&[Root(3), Root(1)]), &one), Convergence::Convergent);
        assert_eq!(classify(&xw(&[Root(0), Root(1)]), &one), Convergence::DivUpper);
        assert_eq!(classify(&xw(&[Root(2), Zero]), &CycloQ8::mu()), Convergence::DivLower);
        assert_eq!(classify(&xw(&[Root(1), Zero]), &CycloQ8::mu()), Convergence::DivBoth);
        assert_eq!(classify(&Word::empty(), &one), Convergence::Convergent);
    }

    #[test]
    fn chen_split_shapes() {
        let w = xw(&[Root(2), Root(4)]);
        let s = chen_split(&w);
        assert_eq!(s.len(), 3);
        assert_eq!(s[0], SplitTerm { upper: Word::empty(), lower: w.clone() });
        assert_eq!(s[1], SplitTerm { upper: xw(&[Root(2)]), lower: xw(&[Root(4)]) });
        assert_eq!(s[2], SplitTerm { upper: w.clone(), lower: Word::empty() });
        assert_eq!(chen_split(&Word::empty()), vec![SplitTerm { upper: Word::empty(), lower: Word::empty() }]);
    }

    #[test]
    fn rescaling_preserves_values() {
        let mu = CycloQ8::mu();
        assert_eq!(rescale_to_unit(&xw(&[Root(1)]), &mu).unwrap(), xw(&[Root(0)]));
        assert_eq!(rescale_to_unit(&xw(&[Zero]), &mu).unwrap(), xw(&[Zero]));
        let w = xw(&[Root(4), Root(2)]);
        let r = rescale_to_unit(&w, &mu).unwrap();
        assert_eq!(r, xw(&[Root(3), Root(1)]));
        let cfg = EvalConfig::default();
        let a = eval_xword::<f64>(&w, &PathSpec::from_zero(mu.embed()), &cfg).unwrap().value;
        let b = eval_xword::<f64>(&r, &PathSpec::from_zero(C::new(1.0, 0.0)), &cfg).unwrap().value;
        assert!((a - b).norm() < 1e-12);
        assert!(rescale_to_unit(&w, &CycloQ8::from_int(2)).is_err());
    }

    #[test]
    fn small_regularisations() {
        assert_eq!(shuffle_regularize(&xw(&[Zero])), RegPolynomial::t_power(1));
        assert_eq!(shuffle_regularize(&xw(&[Root(0)])), RegPolynomial::t_power(1));
        let conv = xw(&[Root(3), Root(1)]);
        assert_eq!(shuffle_regularize(&conv), RegPolynomial::convergent(conv.clone()));
        // x1 x_mu = T x_mu - x_mu x1
        let p = shuffle_regularize(&xw(&[Root(0), Root(1)]));
        let mut expect = RegPolynomial::zero();
        expect.coeffs.insert(1, LinComb::unit(xw(&[Root(1)])));
        expect.coeffs.insert(0, LinComb::single(xw(&[Root(1), Root(0)]), CycloQ8::from_int(-1)));
        assert_eq!(p, expect);
        // x1 x0 = T^2 - x0 x1
        let p = shuffle_regularize(&xw(&[Root(0), Zero]));
        assert_eq!(p.degree(), 2);
        assert_eq!(p.at_t_zero(), LinComb::single(xw(&[Zero, Root(0)]), CycloQ8::from_int(-1)));
    }

    fn letter() -> impl Strategy<Value = XLetter> {
        prop_oneof![Just(Zero), Just(Root(0)), Just(Root(4)), Just(Root(2)), Just(Root(1))]
    }

    fn word(max: usize) -> impl Strategy<Value = XWord> {
        prop::collection::vec(letter(), 0..=max).prop_map(Word::new)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn regularisation_is_a_shuffle_homomorphism(u in word(3), v in word(3)) {
            let lhs = shuffle_regularize_lincomb(&shuffle(&u, &v));
            let rhs = shuffle_regularize(&u).mul(&shuffle_regularize(&v));
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn coefficients_are_convergent(w in word(4)) {
            let one = CycloQ8::one();
            for lc in shuffle_regularize(&w).coeffs.values() {
                for (u, _) in lc.iter() {
                    prop_assert_eq!(classify(u, &one), Convergence::Convergent);
                }
            }
        }
    }

    /// Constant term of `int_eps^{1-eps} w` as a polynomial in log eps, with
    /// the O(eps) corrections fitted alongside.
    fn cutoff_limit(w: &XWord) -> f64 {
        let cfg = EvalConfig { singular_margin: 1e-14, ..EvalConfig::default() };
        let eps: Vec<Dd> = (5..=10).map(|k| Dd::from_f64(10f64.powi(-k))).collect();
        let vals: Vec<Dd> = eps
            .iter()
            .map(|&e| {
                let path = PathSpec::line(C::new(e, Dd::ZERO), C::new(Dd::ONE - e, Dd::ZERO));
                eval_xword(w, &path, &cfg).unwrap().value.re
            })
            .collect();
        // unknowns: L^j and eps L^j for j = 0..2
        let n = 6;
        let mut a = vec![vec![Dd::ZERO; n + 1]; n];
        for (r, (&e, &v)) in eps.iter().zip(&vals).enumerate() {
            let l = e.ln();
            let basis = [Dd::ONE, l, l * l, e, e * l, e * l * l];
            a[r][..n].copy_from_slice(&basis);
            a[r][n] = v;
        }
        // Gaussian elimination with partial pivoting
        for c in 0..n {
            let p = (c..n).max_by(|&i, &j| a[i][c].abs().partial_cmp(&a[j][c].abs()).unwrap()).unwrap();
            a.swap(c, p);
            for r in 0..n {
                if r != c {
                    let f = a[r][c] / a[c][c];
                    for k in c..=n {
                        let t = a[c][k];
                        a[r][k] -= f * t;
                    }
                }
            }
        }
        (a[0][n] / a[0][0]).to_f64()
    }

    #[test]
    fn t_zero_matches_cutoff_limits() {
        let cfg = EvalConfig::default();
        for w in [xw(&[Root(0), Root(1)]), xw(&[Root(2), Zero]), xw(&[Root(0), Zero]), xw(&[Zero, Zero]), xw(&[Root(0)])] {
            let p = shuffle_regularize(&w);
            let mut v = 0.0;
            for (u, c) in p.at_t_zero().iter() {
                let val = if u.is_empty() {
                    1.0
                } else {
                    eval_xword::<f64>(u, &PathSpec::from_zero(C::new(1.0, 0.0)), &cfg).unwrap().value.re
                };
                v += c.embed::<f64>().re * val;
            }
            let lim = cutoff_limit(&w);
            assert!((v - lim).abs() < 1e-6, "{w}: {v} vs {lim}");
        }
    }

    #[test]
    fn split_matches_arc_quadrature() {
        let cfg = EvalConfig::default();
        let words = [
            xw(&[Root(2), Root(4)]),
            xw(&[Root(0), Root(6), Root(3)]),
            xw(&[Zero, Root(2)]),
            xw(&[Root(4), Zero, Root(6)]),
            xw(&[Root(5), Root(0), Root(2)]),
        ];
        for w in words {
            let lc = LinComb::unit(w.clone());
            let s = epsilon_split_eval::<f64>(&lc, 1, &cfg).unwrap();
            let a = arc_quadrature::<f64>(&lc, 1, &cfg).unwrap();
            assert!((s.value - a.value).norm() < 1e-9, "{w}: {} vs {}", s.value, a.value);
        }
    }

    #[test]
    fn example_four_three_by_splitting() {
        let cfg = EvalConfig::default();
        // s = 2: int_1^mu y c
        let lc = cayley_y().concat(&cayley_c());
        let v = epsilon_split_eval::<Dd>(&lc, 1, &cfg).unwrap();
        let expect = crate::scalar::dd::parse_decimal("-0.107491733902034243").unwrap();
        assert!((v.value.re - expect).abs().to_f64() < 1e-15, "{}", v.value.re);
        assert!(v.value.im.abs().to_f64() < 1e-15);
    }

    #[test]
    fn example_four_five_by_splitting() {
        let cfg = EvalConfig::default();
        // d_{-i,i} e on 1 -> mu
        let lc = cayley_d(6, 2).concat(&cayley_e());
        let v = epsilon_split_eval::<f64>(&lc, 1, &cfg).unwrap();
        let pi = k(ConstName::Pi);
        let closed = 5.0 * pi * pi / 48.0 - k(ConstName::Log2) * k(ConstName::LogNu) - k(ConstName::Li2NuInv);
        assert!((v.value.re - closed).abs() < 1e-11, "{} vs {closed}", v.value.re);
        assert!((closed + 0.0503718221).abs() < 5e-11);
        // the same integral straight from the Omega side
        let mut om = LinComb::new();
        om.add_term(Word::new(vec![OmegaLetter::Wm1, OmegaLetter::Wm20]), CycloQ8::one());
        om.add_term(Word::new(vec![OmegaLetter::Wm1, OmegaLetter::Wm3]), CycloQ8::from_int(-1));
        let direct = eval_omega_lincomb::<f64>(&om, 1.0, &cfg).unwrap().re();
        assert!((direct - closed).abs() < 1e-11);
        assert_eq!(rewrite_lincomb(&RewriteTable::cayley(), &om).unwrap(), lc);
    }

    #[test]
    fn example_five_six_assembly() {
        let cfg = EvalConfig::default();
        let cy = RewriteTable::cayley();
        let l8 = RewriteTable::level8();
        let w1 = Word::new(vec![OmegaLetter::Wm3, OmegaLetter::Wm2, OmegaLetter::Wm1]);
        let w2 = Word::new(vec![OmegaLetter::Wm2, OmegaLetter::Wm1]);
        let first = epsilon_split_eval::<Dd>(&rewrite_lincomb(&cy, &LinComb::unit(w1)).unwrap(), 1, &cfg).unwrap();
        let img2 = rewrite_lincomb(&l8, &LinComb::unit(w2)).unwrap();
        let second = crate::evaluator::eval_x_lincomb(&img2, &PathSpec::from_zero(C::new(Dd::ONE, Dd::ZERO)), &cfg)
            .unwrap()
            .value;
        let total = first.value.re + second.re / Dd::from_f64(2.0).sqrt();
        let expect = crate::scalar::dd::parse_decimal("0.205690964480674749487471079005").unwrap();
        assert!((total - expect).abs().to_f64() < 1e-14, "{total}");
    }

    #[test]
    fn residual_divergence_is_reported() {
        let cfg = EvalConfig::default();
        // innermost x_1 diverges where the arc starts
        let lc = LinComb::unit(xw(&[Root(2), Root(0)]));
        match epsilon_split_eval::<f64>(&lc, 1, &cfg) {
            Err(RegError::ResidualDivergence { degree, .. }) => assert_eq!(degree, 1),
            other => panic!("expected residual divergence, got {other:?}"),
        }
    }

    #[test]
    fn omega_six_routes_agree() {
        let cfg = EvalConfig::default();
        let (direct, subst) = omega_six_difference::<Dd>(&cfg).unwrap();
        let expect = Dd::ln2() / Dd::from_f64(2.0) - (Dd::from_f64(2.0).sqrt() + Dd::ONE).ln();
        assert!((direct - expect).abs().to_f64() < 1e-24, "{direct} {:e}", (direct - expect).to_f64());
        assert!((subst - expect).abs().to_f64() < 1e-10, "{subst}");
    }
}
