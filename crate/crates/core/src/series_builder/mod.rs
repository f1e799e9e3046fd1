//! Nested-integral representations of binomial and inverse-binomial series.
//!
//! A [`SeriesSpec`] is first reduced to naturally bounded series
//! ([`normalize`]), each of which unfolds level by level into words of
//! monomial forms ([`rules`]). The result is simplified exactly and, when
//! possible, rewritten over the Omega alphabet ([`omega`]).

pub mod hyperbolic;
pub mod normalize;
pub mod omega;
pub mod rules;
pub mod spec;

use std::collections::BTreeMap;
use std::fmt;


use thiserror::Error;

use crate::evaluator::endpoint::eval_forms_at_one;
use crate::evaluator::{eval_forms_regularized, forms_converge_at_one, EvalConfig, EvalError, EvalResult};
use crate::forms::{Mono, UnitPoint};
use crate::numfield::{CycloQ8, Rational};
use crate::scalar::cplx::C;
use crate::scalar::Real;
use crate::words::{LinComb, OmegaLetter, OmegaWord};

pub use hyperbolic::{eval_hyperbolic, hyp_to_omega, hyperbolic_word, HypKind, HypLetter, HypWord};
pub use normalize::{normalize, Level, NatSeries};
pub use omega::{resolve_composition, FormSum};
pub use rules::{binomial_expand_step, Step, TailKind};
pub use spec::{Family, Kernel, SeriesSpec, Signs, Strictness, XArg};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BuildError {
    #[error("invalid series: {0}")]
    InvalidSpec(String),
    #[error("divergent series: {0}")]
    Divergent(String),
    #[error("unsupported series: {0}")]
    Unsupported(String),
    /// The representation would need `dt/(t sqrt(1-t^4))` outside the one
    /// configuration handled by regularised splitting.
    #[error("series produces the form w[6]: {0}")]
    OmegaSix(String),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

/// `coeff * prefactor(x) * int_0^x word`.
#[derive(Clone, Debug, PartialEq)]
pub struct FormTerm {
    pub coeff: Rational,
    pub prefactor: Mono,
    pub word: Vec<Mono>,
}

/// `prefactor(x) * int_0^x terms`.
#[derive(Clone, Debug, PartialEq)]
pub struct OmegaTerm {
    pub prefactor: Mono,
    pub terms: LinComb<OmegaWord>,
}

/// `overall_scalar * sum_i prefactor_i(x) int_0^x (words)_i` at a real
/// endpoint `0 < x <= 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct IntegralExpr {
    pub endpoint: XArg,
    pub overall_scalar: CycloQ8,
    /// Exact representation over monomial forms; always present.
    pub forms: Vec<FormTerm>,
    /// The same value over Omega words, when every slot lies in their span.
    pub omega: Option<Vec<OmegaTerm>>,
    /// Why `omega` is missing.
    pub omega_gap: Option<String>,
}

fn forms_from_sum(sum: &FormSum) -> Vec<FormTerm> {
    sum.iter().map(|((pf, w), q)| FormTerm { coeff: q.clone(), prefactor: *pf, word: w.clone() }).collect()
}

fn sum_from_forms(forms: &[FormTerm]) -> FormSum {
    let mut s = FormSum::new();
    for f in forms {
        omega::add_term(&mut s, f.prefactor, f.word.clone(), f.coeff.clone());
    }
    omega::prune(&mut s);
    s
}

impl IntegralExpr {
    fn from_sum(endpoint: XArg, overall_scalar: CycloQ8, sum: FormSum) -> Self {
        let sum = omega::simplify(sum);
        let (omega, omega_gap) = match omega::to_omega(&sum) {
            Ok(v) => (Some(v.into_iter().map(|(prefactor, terms)| OmegaTerm { prefactor, terms }).collect()), None),
            Err(e) => (None, Some(e)),
        };
        IntegralExpr { endpoint, overall_scalar, forms: forms_from_sum(&sum), omega, omega_gap }
    }

    pub fn uses_letter(&self, l: OmegaLetter) -> bool {
        self.omega.iter().flatten().any(|t| t.terms.iter().any(|(w, _)| w.letters.contains(&l)))
    }

    fn scalar<R: Real>(&self) -> Result<R, BuildError> {
        self.overall_scalar
            .as_rational()
            .map(R::from_rational)
            .ok_or_else(|| BuildError::Unsupported(format!("non-real scalar {}", self.overall_scalar)))
    }

    /// Numeric value through the monomial-form representation.
    pub fn eval<R: Real>(&self, cfg: &EvalConfig) -> Result<EvalResult<R>, BuildError> {
        let sum = sum_from_forms(&self.forms);
        match eval_sum::<R>(&sum, &self.endpoint, cfg) {
            // words diverging at 1 may only cancel after canonical expansion
            Err(BuildError::Eval(EvalError::Divergent(_))) => eval_sum(&omega::canonicalize(&sum), &self.endpoint, cfg),
            r => r,
        }
        .and_then(|r| {
            let k = self.scalar::<R>()?;
            Ok(EvalResult { value: C::new(r.value.re * k, r.value.im * k), abs_error_estimate: r.abs_error_estimate * k.abs().to_f64_lossy(), engine: r.engine })
        })
    }

    /// Numeric value through the Omega words, if present.
    pub fn eval_omega<R: Real>(&self, cfg: &EvalConfig) -> Result<Option<EvalResult<R>>, BuildError> {
        let Some(om) = &self.omega else { return Ok(None) };
        let mut sum = FormSum::new();
        for t in om {
            for (w, c) in t.terms.iter() {
                let q = c.as_rational().ok_or_else(|| BuildError::Unsupported(format!("non-real coefficient {c}")))?;
                omega::add_term(&mut sum, t.prefactor, w.letters.iter().map(|l| l.mono()).collect(), q.clone());
            }
        }
        let r = eval_sum::<R>(&sum, &self.endpoint, cfg)?;
        let k = self.scalar::<R>()?;
        Ok(Some(EvalResult { value: C::new(r.value.re * k, r.value.im * k), abs_error_estimate: r.abs_error_estimate, engine: r.engine }))
    }
}

fn eval_sum<R: Real>(sum: &FormSum, endpoint: &XArg, cfg: &EvalConfig) -> Result<EvalResult<R>, BuildError> {
    let x: R = endpoint.value::<R>().abs();
    if x.is_zero() {
        return Err(BuildError::Eval(EvalError::OutOfRange("the representation needs x != 0".into())));
    }
    let at_one = endpoint.abs_is_one();
    if at_one && sum.keys().any(|(pf, w)| pf.b < 0 || !forms_converge_at_one(w)) {
        let terms: Vec<(R, Mono, Vec<Mono>)> = sum.iter().map(|((pf, w), q)| (R::from_rational(q), *pf, w.clone())).collect();
        return Ok(eval_forms_at_one(&terms, cfg)?);
    }
    let mut by_pf: BTreeMap<Mono, Vec<(R, Vec<Mono>)>> = BTreeMap::new();
    for ((pf, w), q) in sum {
        by_pf.entry(*pf).or_default().push((R::from_rational(q), w.clone()));
    }
    let p = if at_one { UnitPoint { t: R::one(), one_minus_t: R::zero() } } else { UnitPoint::new(x) };
    let xx = if at_one { R::one() } else { x };
    let mut total = R::zero();
    let mut err = 0.0;
    let mut engine = crate::evaluator::Engine::OdeCascade;
    for (pf, terms) in by_pf {
        let k = pf.eval(p);
        let r = eval_forms_regularized(&terms, xx, cfg)?;
        total += k * r.value.re;
        err += k.abs().to_f64_lossy() * r.abs_error_estimate;
        engine = r.engine;
    }
    Ok(EvalResult { value: C::new(total, R::zero()), abs_error_estimate: err, engine })
}

fn is_example_four_seven(spec: &SeriesSpec) -> bool {
    spec.family == Family::BinomialA
        && spec.s == [1, 1]
        && spec.kernels == [Kernel::OddMinus, Kernel::Even]
        && spec.effective_etas() == [-1, -1]
}

/// Which configurations the representation theorems cover; everything else
/// is refused before any construction.
pub fn check_supported(spec: &SeriesSpec) -> Result<(), BuildError> {
    spec.check_shape()?;
    let etas = spec.effective_etas();
    let per_index = etas[1..].iter().any(|&e| e == -1);
    if !per_index {
        return Ok(());
    }
    match spec.family {
        Family::InverseBinomialB => {
            if spec.kernels.contains(&Kernel::OddMinus) {
                return Err(BuildError::Unsupported("kernel 2n-1 with signs on inner indices".into()));
            }
            for (j, &k) in spec.kernels.iter().enumerate() {
                if k != Kernel::OddPlus {
                    continue;
                }
                let want = if j == 0 { -1 } else { 1 };
                if j > 0 && etas[j] == -1 {
                    return Err(BuildError::OmegaSix(format!("kernel 2n+1 at index {} carries the sign -1", j + 1)));
                }
                if spec.s[j] != 1 || etas[j] != want {
                    return Err(BuildError::InvalidSpec(format!(
                        "kernel 2n+1 at index {} needs weight 1 and sign {want:+} when inner indices carry signs",
                        j + 1
                    )));
                }
            }
            Ok(())
        }
        Family::BinomialA => {
            if is_example_four_seven(spec) {
                Ok(())
            } else {
                Err(BuildError::Unsupported("central binomial series with signs on inner indices".into()))
            }
        }
    }
}

/// Exact nested-integral representation of a series.
pub fn build_series_integral(spec: &SeriesSpec) -> Result<IntegralExpr, BuildError> {
    check_supported(spec)?;
    let real = spec.to_real_argument();
    let mut sum = FormSum::new();
    for (q, ns) in normalize(&real) {
        match ns {
            None => omega::add_term(&mut sum, Mono::ONE, Vec::new(), q),
            Some(ns) => {
                for p in rules::build_parts(&ns)? {
                    omega::add_term(&mut sum, p.prefactor, p.word, &q * p.coeff);
                }
            }
        }
    }
    omega::prune(&mut sum);
    let expr = IntegralExpr::from_sum(real.x.clone(), CycloQ8::one(), sum);
    if expr.uses_letter(OmegaLetter::W6) && !is_example_four_seven(spec) {
        return Err(BuildError::OmegaSix(format!("{spec}")));
    }
    Ok(expr)
}

fn omega_k(k: i32) -> Mono {
    match k {
        0 => Mono::t_pow(-1),
        1 | -1 => Mono::sqrt_factor(k, -1),
        2 | -2 => Mono::t_pow(1).mul(Mono::sqrt_factor(k / 2, -2)),
        4 | -4 => OmegaLetter::W4.mono(),
        _ => unreachable!("block subscripts are 0, +-1, +-2, +-4"),
    }
}

/// Block `w_{3b-a}` for weight 1, else `w_a w_0^{s-2} w_b`.
fn gamma_block(s: u32, a: i32, b: i32) -> Vec<Mono> {
    if s == 1 {
        return vec![omega_k(3 * b - a)];
    }
    let mut v = vec![omega_k(a)];
    v.extend(std::iter::repeat(omega_k(0)).take(s as usize - 2));
    v.push(omega_k(b));
    v
}

/// Closed-form word for `sum_{n_1 > ... > n_d > tail} b_{n_1}(x) prod eta_j^{n_j} / (2n_j)^{s_j}`
/// built from blocks indexed by the partial sign products; the derivative
/// in front is realised by moving the first form into the prefactor.
pub fn inverse_binomial_word(s: &[u32], eta: &[i8], tail_n: u64, x: XArg) -> Result<IntegralExpr, BuildError> {
    let spec = SeriesSpec { tail_n, ..SeriesSpec::sigma(s, eta, x.clone()) };
    spec.check_shape()?;
    let bars: Vec<i32> = eta
        .iter()
        .scan(1i32, |acc, &e| {
            *acc *= e as i32;
            Some(*acc)
        })
        .collect();
    let sign: i32 = bars.iter().product();
    let mut word = Vec::new();
    for j in 0..s.len() {
        let a = if j == 0 { bars[0] } else { bars[j - 1] };
        word.extend(gamma_block(s[j], a, bars[j]));
    }
    // b_n^{+-}(t) w_{bar eta_d}
    let last = *bars.last().unwrap();
    let n = tail_n;
    let four_n = Rational::from_integer(num_bigint::BigInt::from(4).pow(n as u32));
    let mut q = four_n / rules::central_binomial(n);
    if last < 0 && n % 2 == 1 {
        q = -q;
    }
    word.push(Mono::t_pow(2 * n as i32).mul(omega_k(last)));
    let first = word.remove(0);
    let prefactor = Mono::sqrt_factor(eta[0] as i32, 1).mul(first);
    let mut sum = FormSum::new();
    omega::add_term(&mut sum, prefactor, word, q);
    let xr = match x {
        XArg::Exact { p, q, radicand } => XArg::Exact { p: p.abs(), q, radicand },
        XArg::Float(v) => XArg::Float(v.abs()),
    };
    Ok(IntegralExpr::from_sum(xr, CycloQ8::from_int(sign as i64), sum))
}

impl fmt::Display for IntegralExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let scalar = if self.overall_scalar.is_one() { String::new() } else { format!("({}) * ", self.overall_scalar.compact()) };
        match &self.omega {
            Some(terms) => {
                let mut parts = Vec::new();
                for t in terms {
                    let body: Vec<String> = t
                        .terms
                        .iter()
                        .map(|(w, c)| {
                            let letters: Vec<String> = w.letters.iter().map(|l| l.to_string()).collect();
                            let word = if letters.is_empty() { "1".to_string() } else { format!("I({})", letters.join(" ")) };
                            format!("({}) {word}", c.compact())
                        })
                        .collect();
                    parts.push(format!("{} * [{}]", prefactor_name(t.prefactor), body.join(" + ")));
                }
                write!(f, "{scalar}{} at x = {}", parts.join(" + "), self.endpoint)
            }
            None => {
                let parts: Vec<String> = self
                    .forms
                    .iter()
                    .map(|t| {
                        let letters: Vec<String> = t.word.iter().map(|m| m.to_string()).collect();
                        format!("({}) {} * I({})", t.coeff, prefactor_name(t.prefactor), letters.join(" "))
                    })
                    .collect();
                write!(f, "{scalar}{} at x = {}", parts.join(" + "), self.endpoint)
            }
        }
    }
}

/// `x^a (1-x^2)^{b/2} (1+x^2)^{c/2}` spelled out.
pub fn prefactor_name(m: Mono) -> String {
    let mut parts = Vec::new();
    match m.a {
        0 => {}
        1 => parts.push("x".to_string()),
        a => parts.push(format!("x^{a}")),
    }
    for (e, base) in [(m.b, "1-x^2"), (m.c, "1+x^2")] {
        match e {
            0 => {}
            1 => parts.push(format!("sqrt({base})")),
            -1 => parts.push(format!("1/sqrt({base})")),
            e => parts.push(format!("({base})^({e}/2)")),
        }
    }
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}
