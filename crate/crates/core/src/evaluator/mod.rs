//! Numeric evaluation of iterated integrals, multiple polylogarithms and the
//! constant library.

pub mod cascade;
pub mod constants;
pub mod endpoint;
pub mod mpl;

use std::collections::BTreeMap;

use num_complex::Complex;
use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

use crate::forms::{Mono, UnitPoint};
use crate::numfield::CycloQ8;
use crate::scalar::cplx::{self, C};
use crate::scalar::Real;
use crate::words::{shuffle, LinComb, OmegaWord, Word, XLetter, XWord};
use cascade::{Collocation, Field, Stage, Trie};

pub use constants::{constant, constant_by_name, ConstName};
pub use mpl::{mpl_series, word_to_mpl, ExactMplTerm, MplTerm};

#[derive(Clone, Debug, PartialEq)]
pub struct EvalConfig {
    pub target_abs_error: f64,
    pub working_precision: u32,
    /// Upper bound on collocation panels per segment, and on series terms
    /// in units of a thousand.
    pub max_steps: usize,
    /// Poles closer than this to a path are treated as lying on it.
    pub singular_margin: f64,
}

impl Default for EvalConfig {
    fn default() -> Self {
        EvalConfig { target_abs_error: 1e-12, working_precision: 106, max_steps: 4096, singular_margin: 1e-8 }
    }
}

pub const PRECISION_ENV: &str = "APERY_PRECISION_BITS";

impl EvalConfig {
    pub fn validate(&self) -> Result<(), EvalError> {
        if !(self.working_precision == 53 || self.working_precision == 106) {
            return Err(EvalError::BadConfig(format!(
                "working precision {} bits is not available (use 53 or 106)",
                self.working_precision
            )));
        }
        let floor = 2f64.powi(4 - self.working_precision as i32);
        if !(self.target_abs_error >= floor) {
            return Err(EvalError::BadConfig(format!(
                "target error {:e} is below 2^(4-{}) = {:e}",
                self.target_abs_error, self.working_precision, floor
            )));
        }
        if self.max_steps < 32 {
            return Err(EvalError::BadConfig("max_steps must be at least 32".into()));
        }
        Ok(())
    }

    /// Defaults, with the precision taken from `APERY_PRECISION_BITS` if set.
    pub fn from_env() -> Result<Self, EvalError> {
        let mut cfg = EvalConfig::default();
        if let Ok(v) = std::env::var(PRECISION_ENV) {
            cfg.working_precision = v
                .trim()
                .parse()
                .map_err(|_| EvalError::BadConfig(format!("{PRECISION_ENV}={v} is not an integer")))?;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Engine {
    OdeCascade,
    MplSeries,
    Constant,
    DirectSum,
}

#[derive(Clone, Copy, Debug)]
pub struct EvalResult<R> {
    pub value: C<R>,
    pub abs_error_estimate: f64,
    pub engine: Engine,
}

impl<R: Real> EvalResult<R> {
    pub fn re(&self) -> R {
        self.value.re
    }

    pub fn to_c64(&self) -> Complex<f64> {
        cplx::to_c64(self.value)
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EvalError {
    #[error("divergent integral: {0}")]
    Divergent(String),
    #[error("argument out of range: {0}")]
    OutOfRange(String),
    #[error("pole on the integration path: {0}")]
    PoleOnPath(String),
    #[error("no convergence: estimated error {estimate:e} after {work} steps")]
    NotConverged { estimate: f64, work: usize },
    #[error("inadmissible polylogarithm: {0}")]
    Inadmissible(String),
    #[error("unknown constant {0}")]
    UnknownConstant(String),
    #[error("bad configuration: {0}")]
    BadConfig(String),
}

/// Step doubling on the panel count until two successive results agree.
fn converge<R: Real, V: Field<R>>(
    cfg: &EvalConfig,
    scale: impl Fn(V) -> f64,
    mut eval: impl FnMut(usize) -> V,
) -> Result<(V, f64), EvalError> {
    let mut panels = 8;
    let mut prev = eval(panels);
    loop {
        if panels * 2 > cfg.max_steps {
            let cur = eval(panels);
            return Err(EvalError::NotConverged { estimate: (cur - prev).mag(), work: panels });
        }
        panels *= 2;
        let cur = eval(panels);
        let err = (cur - prev).mag();
        let floor = 64.0 * R::eps() * scale(cur).max(1e-300);
        if err <= cfg.target_abs_error || err <= floor {
            return Ok((cur, err.max(floor)));
        }
        prev = cur;
    }
}

// ---------------------------------------------------------------------------
// Real integrals of algebraic forms on [0, x]

/// Letter of a real cascade: a monomial density, or one with its `1/t`
/// pole removed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FormLetter {
    Plain(Mono),
    MinusPole(Mono),
}

impl FormLetter {
    fn density<R: Real>(self, p: UnitPoint<R>) -> R {
        match self {
            FormLetter::Plain(m) => m.eval(p),
            FormLetter::MinusPole(m) => m.eval_minus_pole(p),
        }
    }

    /// Exponent `a` of the leading power at the origin.
    fn order_at_zero(self) -> i32 {
        match self {
            FormLetter::Plain(m) => m.a,
            FormLetter::MinusPole(_) => 1,
        }
    }

    fn b(self) -> i32 {
        match self {
            FormLetter::Plain(m) | FormLetter::MinusPole(m) => m.b,
        }
    }
}

const LOG_FORM: Mono = Mono { a: -1, b: 0, c: 0 };

/// Whether `int_0^x` of the word (outermost first) converges at 0.
pub fn forms_converge_at_zero(word: &[Mono]) -> bool {
    letters_converge_at_zero(&word.iter().map(|&m| FormLetter::Plain(m)).collect::<Vec<_>>())
}

fn letters_converge_at_zero(word: &[FormLetter]) -> bool {
    let mut ord = 0;
    for l in word.iter().rev() {
        ord += l.order_at_zero() + 1;
        if ord <= 0 {
            return false;
        }
    }
    true
}

/// Whether `int_0^1` of the word converges at the upper end.
pub fn forms_converge_at_one(word: &[Mono]) -> bool {
    letters_converge_at_one(&word.iter().map(|&m| FormLetter::Plain(m)).collect::<Vec<_>>())
}

fn letters_converge_at_one(word: &[FormLetter]) -> bool {
    // doubled exponent of (1 - t) in the running integral
    let mut e = 0;
    for l in word.iter().rev() {
        e = e.min(0) + l.b() + 2;
    }
    word.is_empty() || e > 0
}

fn check_unit_arg<R: Real>(x: R) -> Result<(), EvalError> {
    if x < R::zero() || x > R::one() {
        return Err(EvalError::OutOfRange(format!("endpoint {x} outside [0, 1]")));
    }
    Ok(())
}

fn run_forms<R: Real>(terms: &[(R, Vec<FormLetter>)], x: R, cfg: &EvalConfig) -> Result<EvalResult<R>, EvalError> {
    let mut letters: Vec<FormLetter> = Vec::new();
    let mut ids: BTreeMap<FormLetter, usize> = BTreeMap::new();
    let mut trie = Trie::new();
    let mut nodes = Vec::with_capacity(terms.len());
    for (c, w) in terms {
        let idx: Vec<usize> = w
            .iter()
            .map(|l| {
                *ids.entry(*l).or_insert_with(|| {
                    letters.push(*l);
                    letters.len() - 1
                })
            })
            .collect();
        nodes.push((*c, trie.insert(&idx)));
    }
    let rule = Collocation::<R>::for_precision();
    let one_minus_x = R::one() - x;
    let dens = |_: usize, l: usize, st: &Stage<R>| -> R {
        let p = UnitPoint { t: x * st.s, one_minus_t: one_minus_x + x * st.one_minus_s };
        letters[l].density(p) * x
    };
    let combine = |g: &[R]| -> (R, f64) {
        let mut v = R::zero();
        let mut mag = 0.0;
        for (c, n) in &nodes {
            let t = match n {
                Some(n) => *c * g[*n],
                None => *c,
            };
            mag += t.abs().to_f64_lossy();
            v += t;
        }
        (v, mag)
    };
    let mags = std::cell::Cell::new(0.0f64);
    let (v, err) = converge::<R, R>(
        cfg,
        |v| mags.get().max(v.mag()),
        |panels| {
            let g = cascade::run::<R, R, _>(&trie, letters.len(), 1, dens, &rule, panels);
            let (v, m) = combine(&g);
            mags.set(mags.get().max(m));
            v
        },
    )?;
    let floor = 64.0 * R::eps() * mags.get();
    Ok(EvalResult { value: cplx::re(v), abs_error_estimate: err.max(floor), engine: Engine::OdeCascade })
}

/// `sum c * int_0^x word` for convergent words of monomial forms.
pub fn eval_forms<R: Real>(terms: &[(R, Vec<Mono>)], x: R, cfg: &EvalConfig) -> Result<EvalResult<R>, EvalError> {
    check_unit_arg(x)?;
    let mut lt = Vec::with_capacity(terms.len());
    for (c, w) in terms {
        if !forms_converge_at_zero(w) {
            return Err(EvalError::Divergent(format!("{} diverges at 0", show_forms(w))));
        }
        if x == R::one() && !forms_converge_at_one(w) {
            return Err(EvalError::Divergent(format!("{} diverges at 1", show_forms(w))));
        }
        lt.push((*c, w.iter().map(|&m| FormLetter::Plain(m)).collect()));
    }
    run_forms(&lt, x, cfg)
}

fn show_forms(w: &[Mono]) -> String {
    w.iter().map(|m| m.to_string()).collect::<Vec<_>>().join(" ")
}

/// Shuffle-regularised value at the origin: `int_0^x` of the log form is
/// `log x`, i.e. the constant term in `log eps` of the cutoff integral.
/// Sums whose divergences cancel get their true value.
pub fn eval_forms_regularized<R: Real>(
    terms: &[(R, Vec<Mono>)],
    x: R,
    cfg: &EvalConfig,
) -> Result<EvalResult<R>, EvalError> {
    check_unit_arg(x)?;
    if x.is_zero() {
        return Ok(EvalResult { value: C::zero(), abs_error_estimate: 0.0, engine: Engine::OdeCascade });
    }
    let logx = x.ln();
    let mut expanded: BTreeMap<Vec<FormLetter>, R> = BTreeMap::new();
    for (c, w) in terms {
        let letters: Vec<FormLetter> = w.iter().map(|&m| FormLetter::Plain(m)).collect();
        for (k, word) in reg_expand(&letters) {
            *expanded.entry(word).or_insert_with(R::zero) += *c * k.eval(logx);
        }
    }
    let mut lt = Vec::new();
    for (w, c) in expanded {
        if c.is_zero() {
            continue;
        }
        if !letters_converge_at_zero(&w) {
            return Err(EvalError::Divergent("regularisation left a divergent word".into()));
        }
        if x == R::one() && !letters_converge_at_one(&w) {
            return Err(EvalError::Divergent("word diverges at 1".into()));
        }
        lt.push((c, w));
    }
    run_forms(&lt, x, cfg)
}

/// `sum_j q_j T^j` with exact rational `q_j`.
#[derive(Clone, Debug, Default)]
struct TPoly(BTreeMap<u32, num_rational::BigRational>);

impl TPoly {
    fn eval<R: Real>(&self, t: R) -> R {
        self.0.iter().map(|(j, q)| R::from_rational(q) * t.powi(*j as i32)).sum()
    }
}

/// Rewrite a word as `sum T^j * (word convergent at 0)`, splitting each
/// pole form `f = dt/t + (f - dt/t)` as needed.
fn reg_expand(word: &[FormLetter]) -> Vec<(TPoly, Vec<FormLetter>)> {
    use num_rational::BigRational;
    let k = word.iter().rev().take_while(|&&l| l == FormLetter::Plain(LOG_FORM)).count();
    let n = word.len();
    if k == n {
        // int_0^x (dt/t)^k = T^k / k!
        let mut p = TPoly::default();
        let fact: num_bigint::BigInt = (1..=k as u64).product::<u64>().into();
        p.0.insert(k as u32, BigRational::new(1.into(), fact));
        return vec![(p, Vec::new())];
    }
    let b = word[n - k - 1];
    if let FormLetter::Plain(m) = b {
        if m.a == -1 {
            let mut a = word.to_vec();
            a[n - k - 1] = FormLetter::Plain(LOG_FORM);
            let mut r = word.to_vec();
            r[n - k - 1] = FormLetter::MinusPole(m);
            let mut out = reg_expand(&a);
            out.extend(reg_expand(&r));
            return out;
        }
    }
    if k == 0 {
        let mut p = TPoly::default();
        p.0.insert(0, BigRational::from_integer(1.into()));
        return vec![(p, word.to_vec())];
    }
    // v b a^k = sum_j (-1)^{k-j} T^j/j! ((v sh a^{k-j}) b)
    let v = Word::new(word[..n - k - 1].to_vec());
    let mut out = Vec::new();
    let mut fact = num_bigint::BigInt::from(1);
    for j in 0..=k {
        if j > 0 {
            fact *= j;
        }
        let sign = if (k - j) % 2 == 0 { 1 } else { -1 };
        let ak = Word::new(vec![FormLetter::Plain(LOG_FORM); k - j]);
        for (w, c) in shuffle(&v, &ak).iter() {
            let mut letters = w.letters.clone();
            letters.push(b);
            let c = c.as_rational().expect("shuffle coefficients are integers").clone();
            let mut p = TPoly::default();
            p.0.insert(j as u32, c * BigRational::new(sign.into(), fact.clone()));
            out.push((p, letters));
        }
    }
    out
}

fn omega_terms<R: Real>(lc: &LinComb<OmegaWord>) -> Result<Vec<(R, Vec<Mono>)>, EvalError> {
    lc.iter()
        .map(|(w, c)| {
            let r = c
                .as_rational()
                .ok_or_else(|| EvalError::OutOfRange(format!("non-rational coefficient {c} on a real integral")))?;
            Ok((R::from_rational(r), w.letters.iter().map(|l| l.mono()).collect()))
        })
        .collect()
}

/// `int_0^x w` for a convergent Omega-word, `0 <= x <= 1`.
pub fn eval_omega_word<R: Real>(w: &OmegaWord, x: R, cfg: &EvalConfig) -> Result<EvalResult<R>, EvalError> {
    eval_forms(&[(R::one(), w.letters.iter().map(|l| l.mono()).collect())], x, cfg)
        .map_err(|e| match e {
            EvalError::Divergent(_) => EvalError::Divergent(format!("{w} on [0, {x}]")),
            e => e,
        })
}

/// A rational combination of Omega-words; divergences at 0 may cancel
/// between words.
pub fn eval_omega_lincomb<R: Real>(lc: &LinComb<OmegaWord>, x: R, cfg: &EvalConfig) -> Result<EvalResult<R>, EvalError> {
    eval_forms_regularized(&omega_terms(lc)?, x, cfg)
}

// ---------------------------------------------------------------------------
// Complex paths and X-words

#[derive(Clone, Debug, PartialEq)]
pub enum Segment<R> {
    Line { from: C<R>, to: C<R> },
    /// Arc of the unit circle between two angles.
    Arc { from: R, to: R },
}

impl<R: Real> Segment<R> {
    pub fn start(&self) -> C<R> {
        match self {
            Segment::Line { from, .. } => *from,
            Segment::Arc { from, .. } => cplx::cis(*from),
        }
    }

    pub fn end(&self) -> C<R> {
        match self {
            Segment::Line { to, .. } => *to,
            Segment::Arc { to, .. } => cplx::cis(*to),
        }
    }
}

/// Concatenated segments; iterated integrals over it compose by Chen's rule.
#[derive(Clone, Debug, PartialEq)]
pub struct PathSpec<R> {
    pub segments: Vec<Segment<R>>,
}

/// Angle of `mu^e`.
pub fn root_angle<R: Real>(e: i64) -> R {
    R::pi() * R::of_int(e) / R::of(4.0)
}

impl<R: Real> PathSpec<R> {
    pub fn line(from: C<R>, to: C<R>) -> Self {
        PathSpec { segments: vec![Segment::Line { from, to }] }
    }

    pub fn from_zero(to: C<R>) -> Self {
        Self::line(C::zero(), to)
    }

    pub fn exact_line(from: &CycloQ8, to: &CycloQ8) -> Self {
        Self::line(from.embed(), to.embed())
    }

    pub fn unit_arc(from: R, to: R) -> Self {
        PathSpec { segments: vec![Segment::Arc { from, to }] }
    }

    pub fn then(mut self, seg: Segment<R>) -> Self {
        self.segments.push(seg);
        self
    }

    pub fn start(&self) -> C<R> {
        self.segments.first().map(|s| s.start()).unwrap_or_else(C::zero)
    }

    pub fn end(&self) -> C<R> {
        self.segments.last().map(|s| s.end()).unwrap_or_else(C::zero)
    }
}

/// Numeric X-letter: `dt/t`, `dt/(mu^e - t)`, or `dt/(xi - t)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Pole<R> {
    Zero,
    Root(i64),
    At(C<R>),
}

impl<R: Real> Pole<R> {
    pub fn value(&self) -> C<R> {
        match self {
            Pole::Zero => C::zero(),
            Pole::Root(e) => CycloQ8::mu_pow(*e).embed(),
            Pole::At(z) => *z,
        }
    }
}

impl<R: Real> From<XLetter> for Pole<R> {
    fn from(l: XLetter) -> Self {
        match l {
            XLetter::Zero => Pole::Zero,
            XLetter::Root(e) => Pole::Root(e as i64),
        }
    }
}

enum Geo<R> {
    Line { delta: C<R>, d0: C<R>, d1: C<R>, sign: R },
    ArcZero { dtheta: R },
    ArcUnit { dtheta: R, a0: R, a1: R },
    ArcOff { theta0: R, dtheta: R, xi: C<R> },
}

impl<R: Real> Geo<R> {
    fn new(seg: &Segment<R>, pole: &Pole<R>) -> Self {
        match seg {
            Segment::Line { from, to } => {
                let xi = pole.value();
                let sign = if matches!(pole, Pole::Zero) { -R::one() } else { R::one() };
                Geo::Line { delta: *to - *from, d0: xi - *from, d1: xi - *to, sign }
            }
            Segment::Arc { from, to } => {
                let dtheta = *to - *from;
                match pole {
                    Pole::Zero => Geo::ArcZero { dtheta },
                    Pole::Root(e) => {
                        let mid = (*from + *to) * R::of(0.5);
                        let two_pi = R::pi() + R::pi();
                        let mut alpha = root_angle::<R>(*e);
                        while alpha > mid + R::pi() {
                            alpha -= two_pi;
                        }
                        while alpha <= mid - R::pi() {
                            alpha += two_pi;
                        }
                        Geo::ArcUnit { dtheta, a0: alpha - *from, a1: alpha - *to }
                    }
                    Pole::At(xi) => Geo::ArcOff { theta0: *from, dtheta, xi: *xi },
                }
            }
        }
    }

    fn density(&self, st: &Stage<R>) -> C<R> {
        let half = R::of(0.5);
        match self {
            Geo::Line { delta, d0, d1, sign } => {
                let diff = if st.s < half { *d0 - *delta * st.s } else { *d1 + *delta * st.one_minus_s };
                *delta * *sign / diff
            }
            Geo::ArcZero { dtheta } => Complex::new(R::zero(), *dtheta),
            Geo::ArcUnit { dtheta, a0, a1 } => {
                // i dtheta e^{i theta} / (e^{i alpha} - e^{i theta}) with delta = alpha - theta
                let d = if st.s < half { *a0 - *dtheta * st.s } else { *a1 + *dtheta * st.one_minus_s };
                // reduces to dtheta e^{-i delta/2} / (2 sin(delta/2))
                let (sn, cs) = (d * half).sin_cos();
                Complex::new(cs, -sn) * (*dtheta / (R::of(2.0) * sn))
            }
            Geo::ArcOff { theta0, dtheta, xi } => {
                let z = cplx::cis(*theta0 + *dtheta * st.s);
                Complex::new(R::zero(), *dtheta) * z / (*xi - z)
            }
        }
    }
}

fn pole_on_segment<R: Real>(seg: &Segment<R>, xi: C<R>, margin: f64) -> Option<f64> {
    // returns the curve parameter of the closest approach when within margin
    match seg {
        Segment::Line { from, to } => {
            let d = *to - *from;
            let len2 = d.norm_sqr();
            if len2.is_zero() {
                return None;
            }
            let rel = xi - *from;
            let s = (rel.re * d.re + rel.im * d.im) / len2;
            let s = s.max_of(R::zero());
            let s = if s > R::one() { R::one() } else { s };
            let dist = cplx::abs(rel - d * s).to_f64_lossy();
            (dist < margin).then(|| s.to_f64_lossy())
        }
        Segment::Arc { from, to } => {
            let r = cplx::abs(xi).to_f64_lossy();
            if (r - 1.0).abs() >= margin {
                return None;
            }
            let ang = cplx::arg(xi).to_f64_lossy();
            let (a, b) = (from.to_f64_lossy(), to.to_f64_lossy());
            let tau = std::f64::consts::TAU;
            let mut best: Option<f64> = None;
            for k in -2..=2 {
                let t = (ang + k as f64 * tau - a) / (b - a);
                let tc = t.clamp(0.0, 1.0);
                let gap = (t - tc).abs() * (b - a).abs();
                if gap < margin {
                    best = Some(tc);
                }
            }
            best
        }
    }
}

fn check_x_path<R: Real>(poles: &[Pole<R>], path: &PathSpec<R>, cfg: &EvalConfig) -> Result<(), EvalError> {
    let nseg = path.segments.len();
    let tol = 1e-12;
    for (i, p) in poles.iter().enumerate() {
        let xi = p.value();
        for (k, seg) in path.segments.iter().enumerate() {
            let Some(s) = pole_on_segment(seg, xi, cfg.singular_margin) else { continue };
            let at_start = s < tol && k == 0;
            let at_end = s > 1.0 - tol && k == nseg - 1;
            if at_start && i + 1 == poles.len() {
                return Err(EvalError::Divergent(format!("innermost pole {xi} at the path start")));
            }
            if at_end && i == 0 {
                return Err(EvalError::Divergent(format!("outermost pole {xi} at the path end")));
            }
            if !(at_start || at_end) {
                return Err(EvalError::PoleOnPath(format!("{xi} on segment {k}")));
            }
        }
    }
    Ok(())
}

/// `sum c * int_path word` for numeric X-words.
pub fn eval_pole_words<R: Real>(
    terms: &[(C<R>, Vec<Pole<R>>)],
    path: &PathSpec<R>,
    cfg: &EvalConfig,
) -> Result<EvalResult<R>, EvalError> {
    let mut letters: Vec<Pole<R>> = Vec::new();
    let mut trie = Trie::new();
    let mut nodes = Vec::with_capacity(terms.len());
    for (c, w) in terms {
        check_x_path(w, path, cfg)?;
        let idx: Vec<usize> = w
            .iter()
            .map(|p| match letters.iter().position(|q| q == p) {
                Some(i) => i,
                None => {
                    letters.push(*p);
                    letters.len() - 1
                }
            })
            .collect();
        nodes.push((*c, trie.insert(&idx)));
    }
    let nl = letters.len();
    let geos: Vec<Geo<R>> = path
        .segments
        .iter()
        .flat_map(|seg| letters.iter().map(move |p| Geo::new(seg, p)))
        .collect();
    let rule = Collocation::<R>::for_precision();
    let dens = |seg: usize, l: usize, st: &Stage<R>| geos[seg * nl + l].density(st);
    let mags = std::cell::Cell::new(0.0f64);
    let (v, err) = converge::<R, C<R>>(
        cfg,
        |v| mags.get().max(v.mag()),
        |panels| {
            let g = cascade::run::<R, C<R>, _>(&trie, nl, path.segments.len(), dens, &rule, panels);
            let mut v = C::zero();
            for (c, n) in &nodes {
                let t = match n {
                    Some(n) => *c * g[*n],
                    None => *c,
                };
                mags.set(mags.get().max(t.mag()));
                v += t;
            }
            v
        },
    )?;
    let floor = 64.0 * R::eps() * mags.get();
    Ok(EvalResult { value: v, abs_error_estimate: err.max(floor), engine: Engine::OdeCascade })
}

/// `int_path w` for a convergent X-word.
pub fn eval_xword<R: Real>(w: &XWord, path: &PathSpec<R>, cfg: &EvalConfig) -> Result<EvalResult<R>, EvalError> {
    let poles: Vec<Pole<R>> = w.letters.iter().map(|&l| l.into()).collect();
    eval_pole_words(&[(C::new(R::one(), R::zero()), poles)], path, cfg)
}

/// Exact-coefficient combination of X-words along one path.
pub fn eval_x_lincomb<R: Real>(lc: &LinComb<XWord>, path: &PathSpec<R>, cfg: &EvalConfig) -> Result<EvalResult<R>, EvalError> {
    let terms: Vec<(C<R>, Vec<Pole<R>>)> =
        lc.iter().map(|(w, c)| (c.embed(), w.letters.iter().map(|&l| l.into()).collect())).collect();
    eval_pole_words(&terms, path, cfg)
}

/// Nearest `f64` of an exact rational, for reporting.
pub fn rational_to_f64(q: &num_rational::BigRational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}
