//! Hyperbolic-form words for series at imaginary arguments `i sh y`.

use std::fmt;

use num_traits::Zero;

use super::omega::{add_term, FormSum};
use super::rules::central_binomial;
use super::BuildError;
use crate::evaluator::{eval_forms_regularized, EvalConfig, EvalResult};
use crate::forms::Mono;
use crate::numfield::{CycloQ8, Rational};
use crate::scalar::cplx::C;
use crate::scalar::Real;
use crate::words::{LinComb, OmegaLetter, OmegaWord, Word};

/// `f(t) dt` for the six hyperbolic densities.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum HypLetter {
    Dt,
    Th,
    Cth,
    Csch,
    /// `2 csch 2t dt`
    Csch2,
    Sh,
}

pub type HypWord = Word<HypLetter>;

impl HypLetter {
    pub fn density<R: Real>(self, y: R) -> R {
        match self {
            HypLetter::Dt => R::one(),
            HypLetter::Th => y.tanh(),
            HypLetter::Cth => R::one() / y.tanh(),
            HypLetter::Csch => R::one() / y.sinh(),
            HypLetter::Csch2 => R::one() / (y.sinh() * y.cosh()),
            HypLetter::Sh => y.sinh(),
        }
    }

    /// Image under `u = sh t`.
    pub fn to_omega(self) -> OmegaLetter {
        match self {
            HypLetter::Dt => OmegaLetter::Wm1,
            HypLetter::Th => OmegaLetter::Wm2,
            HypLetter::Cth => OmegaLetter::W0,
            HypLetter::Csch => OmegaLetter::Wm3,
            HypLetter::Csch2 => OmegaLetter::Wm20,
            HypLetter::Sh => OmegaLetter::Wm5,
        }
    }
}

impl fmt::Display for HypLetter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            HypLetter::Dt => "dt",
            HypLetter::Th => "th",
            HypLetter::Cth => "cth",
            HypLetter::Csch => "csch",
            HypLetter::Csch2 => "2csch2t",
            HypLetter::Sh => "sh",
        })
    }
}

/// The three families of imaginary-argument series:
/// `G`: `sum_{n_1 > ... > n_d > 0} b_{n_1} / prod (2n_j)^{s_j}`,
/// `H`: `sum_{n_1 >= ... >= n_d >= 0} b_{n_1} / prod (2n_j+1)^{s_j}`,
/// `K`: `sum_{n_1 > ... > n_d > 0} b_{n_1} / prod (2n_j-1)^{s_j}`,
/// all at `x = i sh y`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HypKind {
    GTilde,
    HTilde,
    KTilde,
}

impl HypKind {
    pub fn kernel(self) -> super::Kernel {
        match self {
            HypKind::GTilde => super::Kernel::Even,
            HypKind::HTilde => super::Kernel::OddPlus,
            HypKind::KTilde => super::Kernel::OddMinus,
        }
    }

    fn sign(self, depth: usize) -> i64 {
        match self {
            HypKind::HTilde => 1,
            _ if depth % 2 == 1 => -1,
            _ => 1,
        }
    }
}

fn unit(letters: Vec<HypLetter>) -> LinComb<HypWord> {
    LinComb::unit(Word::new(letters))
}

fn block(kind: HypKind, s: u32) -> LinComb<HypWord> {
    use HypLetter::*;
    let cths = |k: u32| vec![Cth; k as usize];
    match (kind, s) {
        (HypKind::GTilde, 1) => unit(vec![Th]),
        (HypKind::GTilde, s) => unit([vec![Dt], cths(s - 2), vec![Dt]].concat()),
        (HypKind::HTilde, 1) => unit(vec![Csch2]),
        (HypKind::HTilde, s) => unit([vec![Csch], cths(s - 2), vec![Csch]].concat()),
        (HypKind::KTilde, 1) => {
            let mut lc = unit(vec![Sh, Csch]);
            lc.add_term(Word::new(vec![Th]), CycloQ8::one());
            lc.scaled(&CycloQ8::from_int(-1))
        }
        (HypKind::KTilde, s) => {
            // -sh (cth + 1) cth^{s-2} csch
            let mut lc = unit([vec![Sh, Cth], cths(s - 2), vec![Csch]].concat());
            lc.add_term(Word::new([vec![Sh], cths(s - 2), vec![Csch]].concat()), CycloQ8::one());
            lc.scaled(&CycloQ8::from_int(-1))
        }
    }
}

/// Concatenated blocks for the composition `s`, without the final `dt`.
pub fn hyperbolic_word(kind: HypKind, s: &[u32]) -> Result<LinComb<HypWord>, BuildError> {
    if s.is_empty() || s.contains(&0) {
        return Err(BuildError::InvalidSpec("composition must be nonempty with positive entries".into()));
    }
    let mut out = LinComb::unit(Word::empty());
    for &sj in s {
        out = out.concat(&block(kind, sj));
    }
    Ok(out)
}

/// Letter-wise substitution `u = sh t`; the endpoint becomes `sh y`.
pub fn hyp_to_omega(w: &LinComb<HypWord>) -> LinComb<OmegaWord> {
    w.map_words(|hw| Word::new(hw.letters.iter().map(|l| l.to_omega()).collect()))
}

/// `sign * d/dy int_0^y (word) b_n(i sh t) dt`: the first form is evaluated
/// at `y`, the rest integrated over `[0, sh y]` after substitution. The
/// value is even in `y`.
pub fn eval_hyperbolic<R: Real>(
    kind: HypKind,
    s: &[u32],
    tail_n: u64,
    y: R,
    cfg: &EvalConfig,
) -> Result<EvalResult<R>, BuildError> {
    let word = hyperbolic_word(kind, s)?;
    let y = y.abs();
    let sign = kind.sign(s.len());
    // b_n(i sh t) dt = (-1)^n 4^n/C(2n,n) u^{2n} w[-1]
    let n = tail_n;
    let mut q = Rational::from_integer(num_bigint::BigInt::from(4).pow(n as u32)) / central_binomial(n);
    if n % 2 == 1 {
        q = -q;
    }
    let last = Mono::t_pow(2 * n as i32).mul(OmegaLetter::Wm1.mono());
    let mut by_first: std::collections::BTreeMap<HypLetter, FormSum> = Default::default();
    for (w, c) in word.iter() {
        let c = c.as_rational().expect("hyperbolic blocks have rational coefficients") * &q * Rational::from_integer(sign.into());
        let mut rest: Vec<Mono> = w.letters[1..].iter().map(|l| l.to_omega().mono()).collect();
        rest.push(last);
        add_term(by_first.entry(w.letters[0]).or_default(), Mono::ONE, rest, c);
    }
    let u = y.sinh();
    if u > R::one() {
        return Err(BuildError::Eval(crate::evaluator::EvalError::OutOfRange(format!("sh y = {u} exceeds 1"))));
    }
    if y.is_zero() {
        return Err(BuildError::Eval(crate::evaluator::EvalError::OutOfRange("y = 0".into())));
    }
    let mut total = R::zero();
    let mut err = 0.0;
    for (first, sum) in by_first {
        let terms: Vec<(R, Vec<Mono>)> = sum.iter().filter(|(_, q)| !q.is_zero()).map(|((_, w), q)| (R::from_rational(q), w.clone())).collect();
        let r = eval_forms_regularized(&terms, u, cfg)?;
        let k = first.density(y);
        total += k * r.value.re;
        err += k.abs().to_f64_lossy() * r.abs_error_estimate;
    }
    Ok(EvalResult { value: C::new(total, R::zero()), abs_error_estimate: err, engine: crate::evaluator::Engine::OdeCascade })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::UnitPoint;

    #[test]
    fn substitution_densities() {
        // f(t) dt with u = sh t equals omega(u) du, i.e. f(t) = omega(sh t) ch t
        for k in 1..=20 {
            let t = 0.85 * k as f64 / 20.0;
            let u = t.sinh();
            for l in [HypLetter::Dt, HypLetter::Th, HypLetter::Cth, HypLetter::Csch, HypLetter::Csch2, HypLetter::Sh] {
                let lhs = l.density(t);
                let rhs = l.to_omega().mono().eval(UnitPoint::new(u)) * t.cosh();
                assert!((lhs - rhs).abs() < 1e-12 * lhs.abs().max(1.0), "{l} at {t}");
            }
        }
    }

    #[test]
    fn block_shapes() {
        let h = hyperbolic_word(HypKind::HTilde, &[2]).unwrap();
        assert_eq!(h, LinComb::unit(Word::new(vec![HypLetter::Csch, HypLetter::Csch])));
        let k = hyperbolic_word(HypKind::KTilde, &[1]).unwrap();
        assert_eq!(k.len(), 2);
        let g = hyperbolic_word(HypKind::GTilde, &[1, 2, 2]).unwrap();
        assert_eq!(g.iter().next().unwrap().0.len(), 5);
        assert!(hyperbolic_word(HypKind::GTilde, &[]).is_err());
    }

    #[test]
    fn corollary_closed_forms() {
        let cfg = EvalConfig::default();
        for p in 0..=3usize {
            for &y in &[0.3f64, -0.7] {
                let mut s = vec![1u32];
                s.extend(std::iter::repeat(2).take(p));
                let v = eval_hyperbolic(HypKind::GTilde, &s, 0, y, &cfg).unwrap().re();
                let fact: f64 = (1..=(2 * p + 1)).map(|k| k as f64).product();
                let ya = y.abs();
                let expect = (-1f64).powi(p as i32 + 1) * ya.powi(2 * p as i32 + 1) * ya.tanh() / fact;
                assert!((v - expect).abs() < 1e-12, "p={p} y={y}: {v} vs {expect}");
                if p > 0 {
                    let v = eval_hyperbolic(HypKind::GTilde, &vec![2; p], 0, y, &cfg).unwrap().re();
                    let fact: f64 = (1..=(2 * p)).map(|k| k as f64).product();
                    let expect = (-1f64).powi(p as i32) * ya.powi(2 * p as i32) / fact;
                    assert!((v - expect).abs() < 1e-12, "p={p} y={y}");
                }
            }
        }
    }
}
