//! Multiple polylogarithms
//! `Li_{s_1..s_d}(z_1..z_d) = sum_{n_1 > .. > n_d > 0} prod z_j^{n_j} / n_j^{s_j}`
//! by nested series. Arguments on the unit circle are handled through the
//! Hoelder convolution at 1/2, which turns the integral into a finite sum of
//! products of geometrically convergent series.

use num_complex::Complex;
use num_traits::{One, Zero};

use super::{EvalConfig, EvalError, EvalResult, Engine, Pole};
use crate::numfield::CycloQ8;
use crate::scalar::cplx::{self, C};
use crate::scalar::Real;
use crate::words::{XLetter, XWord};

#[derive(Clone, Debug, PartialEq)]
pub struct MplTerm<R> {
    pub s: Vec<u32>,
    pub z: Vec<C<R>>,
}

/// An MPL with exact level-8 arguments.
#[derive(Clone, Debug, PartialEq)]
pub struct ExactMplTerm {
    pub s: Vec<u32>,
    pub z: Vec<CycloQ8>,
}

impl ExactMplTerm {
    pub fn embed<R: Real>(&self) -> MplTerm<R> {
        MplTerm { s: self.s.clone(), z: self.z.iter().map(|z| z.embed()).collect() }
    }
}

impl std::fmt::Display for ExactMplTerm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s: Vec<String> = self.s.iter().map(|v| v.to_string()).collect();
        let z: Vec<String> = self.z.iter().map(|v| v.compact()).collect();
        write!(f, "Li_{{{}}}({})", s.join(","), z.join(", "))
    }
}

/// Split a word `x0^{s1-1} x_{g1} ... x0^{sd-1} x_{gd}` into indices and
/// poles. The last letter must carry a pole.
fn runs<P: Copy>(letters: &[P], is_zero: impl Fn(&P) -> bool) -> Option<(Vec<u32>, Vec<P>)> {
    let mut s = Vec::new();
    let mut g = Vec::new();
    let mut run = 1;
    for l in letters {
        if is_zero(l) {
            run += 1;
        } else {
            s.push(run);
            g.push(*l);
            run = 1;
        }
    }
    (run == 1 && !letters.is_empty()).then_some((s, g))
}

/// `int_0^z w = Li_s(z/g_1, g_1/g_2, ..., g_{d-1}/g_d)` with coefficient 1.
pub fn word_to_mpl(w: &XWord, endpoint: &CycloQ8) -> Result<Vec<(CycloQ8, ExactMplTerm)>, EvalError> {
    if w.is_empty() {
        return Ok(Vec::new());
    }
    let (s, g) = runs(&w.letters, |l| *l == XLetter::Zero)
        .ok_or_else(|| EvalError::Divergent(format!("{w} ends in x[0]")))?;
    let poles: Vec<CycloQ8> = g.iter().map(|l| l.pole()).collect();
    if &poles[0] == endpoint && s[0] == 1 {
        return Err(EvalError::Divergent(format!("{w} has its first pole at the endpoint")));
    }
    let mut z = Vec::with_capacity(s.len());
    let mut prev = endpoint.clone();
    for p in &poles {
        z.push(&prev / p);
        prev = p.clone();
    }
    Ok(vec![(CycloQ8::one(), ExactMplTerm { s, z })])
}

/// Numeric counterpart for arbitrary poles.
pub fn poles_to_mpl<R: Real>(letters: &[Pole<R>], endpoint: C<R>) -> Option<MplTerm<R>> {
    let (s, g) = runs(letters, |p| matches!(p, Pole::Zero))?;
    let mut z = Vec::with_capacity(s.len());
    let mut prev = endpoint;
    for p in &g {
        let v = p.value();
        z.push(prev / v);
        prev = v;
    }
    Some(MplTerm { s, z })
}

fn partial_products<R: Real>(z: &[C<R>]) -> Vec<C<R>> {
    let mut out = Vec::with_capacity(z.len());
    let mut p = C::one();
    for v in z {
        p = p * *v;
        out.push(p);
    }
    out
}

/// Direct nested summation; requires every partial product of the
/// arguments inside the unit disk. Returns value and tail estimate.
fn nested_series<R: Real>(t: &MplTerm<R>, tol: f64, max_terms: usize) -> Result<(C<R>, f64), EvalError> {
    let d = t.s.len();
    if d == 0 {
        return Ok((C::one(), 0.0));
    }
    let r = partial_products(&t.z).iter().map(|p| cplx::abs(*p).to_f64_lossy()).fold(0.0, f64::max);
    if r >= 1.0 {
        return Err(EvalError::Inadmissible("partial products must lie inside the unit disk".into()));
    }
    // acc[j] = sum over n_j < n of the j-th level sum; acc[d] = 1
    let mut acc = vec![C::<R>::zero(); d + 1];
    acc[d] = C::one();
    let mut zpow = vec![C::<R>::one(); d];
    let mut c = vec![C::<R>::zero(); d];
    let mut recent = [f64::INFINITY; 4];
    for n in 1..=max_terms {
        let nn = R::of_int(n as i64);
        for j in 0..d {
            zpow[j] = zpow[j] * t.z[j];
            c[j] = zpow[j] * acc[j + 1] / nn.powi(t.s[j] as i32);
        }
        for j in 0..d {
            acc[j] += c[j];
        }
        recent[n % 4] = cplx::abs(c[0]).to_f64_lossy();
        let last = recent.iter().cloned().fold(0.0, f64::max);
        // geometric tail with a polynomial prefactor allowance
        let tail = last * r / (1.0 - r) * (1.0 + d as f64);
        if n > 8 && tail < tol {
            return Ok((acc[0], tail + R::eps() * cplx::abs(acc[0]).to_f64_lossy() * n as f64));
        }
    }
    Err(EvalError::NotConverged { estimate: f64::NAN, work: max_terms })
}

/// `int_0^{1/2}` of a numeric word.
fn half_integral<R: Real>(letters: &[Pole<R>], tol: f64, max_terms: usize) -> Result<(C<R>, f64), EvalError> {
    if letters.is_empty() {
        return Ok((C::one(), 0.0));
    }
    let t = poles_to_mpl(letters, cplx::re(R::of(0.5)))
        .ok_or_else(|| EvalError::Divergent("Hoelder piece ends in x[0]".into()))?;
    nested_series(&t, tol, max_terms)
}

/// Poles `g_j = 1 / (z_1 ... z_j)` of the integral form on [0, 1].
fn integral_form<R: Real>(t: &MplTerm<R>) -> Vec<Pole<R>> {
    let mut letters = Vec::new();
    for (s, p) in t.s.iter().zip(partial_products(&t.z)) {
        for _ in 1..*s {
            letters.push(Pole::Zero);
        }
        letters.push(Pole::At(C::<R>::one() / p));
    }
    letters
}

/// `int_0^1 w = sum_k (int_{1/2}^1 w_1..w_k)(int_0^{1/2} w_{k+1}..w_n)`;
/// the first factor is mapped to [0, 1/2] by t -> 1 - t.
fn hoelder<R: Real>(t: &MplTerm<R>, tol: f64, max_terms: usize) -> Result<(C<R>, f64), EvalError> {
    let w = integral_form(t);
    let tiny = 16.0 * R::eps();
    let mut mapped: Vec<(R, Pole<R>)> = Vec::with_capacity(w.len());
    for p in &w {
        mapped.push(match p {
            Pole::Zero => (-R::one(), Pole::At(C::one())),
            other => {
                let q = C::<R>::one() - other.value();
                let m = cplx::abs(q).to_f64_lossy();
                if m < tiny {
                    // dt/(1-t) becomes -dt/t
                    (-R::one(), Pole::Zero)
                } else if m < 0.55 {
                    return Err(EvalError::NotConverged { estimate: f64::NAN, work: 0 });
                } else {
                    (R::one(), Pole::At(q))
                }
            }
        });
    }
    let n = w.len();
    let mut total = C::<R>::zero();
    let mut err = 0.0;
    for k in 0..=n {
        let mut sign = if k % 2 == 0 { R::one() } else { -R::one() };
        let mut rev: Vec<Pole<R>> = Vec::with_capacity(k);
        for (sg, p) in mapped[..k].iter().rev() {
            sign *= *sg;
            rev.push(*p);
        }
        let (a, ea) = half_integral(&rev, tol / (n as f64 + 1.0), max_terms)?;
        let (b, eb) = half_integral(&w[k..], tol / (n as f64 + 1.0), max_terms)?;
        total += a * b * sign;
        err += ea * cplx::abs(b).to_f64_lossy() + eb * cplx::abs(a).to_f64_lossy() + ea * eb;
    }
    Ok((total, err))
}

/// Evaluate an admissible MPL with all `|z_i| <= 1`.
pub fn mpl_series<R: Real>(term: &MplTerm<R>, cfg: &EvalConfig) -> Result<EvalResult<R>, EvalError> {
    if term.s.len() != term.z.len() || term.s.iter().any(|&s| s == 0) {
        return Err(EvalError::Inadmissible("indices must be positive, one per argument".into()));
    }
    let slack = 1.0 + 64.0 * R::eps();
    if term.z.iter().any(|z| cplx::abs(*z).to_f64_lossy() > slack) {
        return Err(EvalError::Inadmissible("argument outside the unit disk".into()));
    }
    if let (Some(&s1), Some(z1)) = (term.s.first(), term.z.first()) {
        if s1 == 1 && cplx::abs(*z1 - C::one()).to_f64_lossy() < 64.0 * R::eps() {
            return Err(EvalError::Inadmissible("(s1, z1) = (1, 1) diverges".into()));
        }
    }
    let max_terms = cfg.max_steps * 1000;
    let tol = cfg.target_abs_error * 0.1;
    let r = partial_products(&term.z).iter().map(|p| cplx::abs(*p).to_f64_lossy()).fold(0.0, f64::max);
    let (value, err) = if r <= 0.8 {
        nested_series(term, tol, max_terms)?
    } else {
        match hoelder(term, tol, max_terms) {
            Ok(v) => v,
            Err(_) if r < 1.0 => nested_series(term, tol, max_terms)?,
            Err(e) => return Err(e),
        }
    };
    Ok(EvalResult { value, abs_error_estimate: err.max(R::eps()), engine: Engine::MplSeries })
}

/// `Li_n(z)` for `|z| < 1` as a plain power series.
pub fn polylog<R: Real>(n: u32, z: C<R>) -> C<R> {
    let t = MplTerm { s: vec![n], z: vec![z] };
    nested_series(&t, R::eps() * 1e-3, 1_000_000).map(|v| v.0).unwrap_or_else(|_| Complex::new(R::zero(), R::zero()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::evaluator::{eval_xword, PathSpec};
    use crate::scalar::Dd;
    use crate::words::Word;

    fn cfg() -> EvalConfig {
        EvalConfig { target_abs_error: 1e-26, ..EvalConfig::default() }
    }

    #[test]
    fn dilog_at_one_half() {
        let v = mpl_series(&MplTerm { s: vec![2], z: vec![cplx::re(Dd::from_f64(0.5))] }, &cfg()).unwrap();
        let l2 = Dd::ln2();
        let expect = Dd::pi() * Dd::pi() / Dd::from_f64(12.0) - l2 * l2 / Dd::from_f64(2.0);
        assert!((v.re() - expect).abs().to_f64() < 1e-26, "{}", v.re() - expect);
    }

    #[test]
    fn dilog_at_silver_ratio_inverse() {
        let z = Dd::from_f64(2.0).sqrt() - Dd::ONE;
        let v = polylog(2, cplx::re(z));
        let expect = crate::scalar::dd::parse_decimal("0.467533997023004617626964799435048").unwrap();
        assert!((v.re - expect).abs().to_f64() < 1e-30);
    }

    #[test]
    fn zeta_values_on_the_boundary() {
        let z2 = mpl_series(&MplTerm { s: vec![2], z: vec![C::<Dd>::one()] }, &cfg()).unwrap();
        let pi = Dd::pi();
        assert!((z2.re() - pi * pi / Dd::from_f64(6.0)).abs().to_f64() < 1e-26, "{}", z2.re() - pi * pi / Dd::from_f64(6.0));
        // zeta(2,1) = zeta(3)
        let z21 = mpl_series(&MplTerm { s: vec![2, 1], z: vec![C::<Dd>::one(), C::one()] }, &cfg()).unwrap();
        let z3 = crate::scalar::dd::parse_decimal("1.20205690315959428539973816151145").unwrap();
        assert!((z21.re() - z3).abs().to_f64() < 1e-26, "{}", z21.re() - z3);
    }

    #[test]
    fn word_conversion_examples() {
        // x0 x0 x1 on 0 -> 1 is zeta(3)
        let w = Word::new(vec![XLetter::Zero, XLetter::Zero, XLetter::root(0)]);
        let t = word_to_mpl(&w, &CycloQ8::one()).unwrap();
        assert_eq!(t[0].1.s, vec![3]);
        assert_eq!(t[0].1.z, vec![CycloQ8::one()]);
        // x_mu x_mu3 -> Li_{1,1}(mu^-1, mu/mu^3)
        let w = Word::new(vec![XLetter::root(1), XLetter::root(3)]);
        let t = word_to_mpl(&w, &CycloQ8::one()).unwrap();
        assert_eq!(t[0].1.z, vec![CycloQ8::mu_pow(7), CycloQ8::mu_pow(-2)]);
        assert!(word_to_mpl(&Word::new(vec![XLetter::root(1), XLetter::Zero]), &CycloQ8::one()).is_err());
    }

    #[test]
    fn series_and_cascade_agree_on_level8_pair() {
        let w = Word::new(vec![XLetter::root(1), XLetter::root(3)]);
        let t = word_to_mpl(&w, &CycloQ8::one()).unwrap();
        let a = mpl_series(&t[0].1.embed::<Dd>(), &cfg()).unwrap();
        let b = eval_xword(&w, &PathSpec::from_zero(C::<Dd>::one()), &cfg()).unwrap();
        assert!(cplx::abs(a.value - b.value).to_f64() < 1e-25);
    }

    #[test]
    fn inadmissible_terms_are_rejected() {
        let bad = MplTerm { s: vec![1], z: vec![C::<f64>::one()] };
        assert!(matches!(mpl_series(&bad, &EvalConfig::default()), Err(EvalError::Inadmissible(_))));
        let big = MplTerm { s: vec![2], z: vec![cplx::re(1.5f64)] };
        assert!(mpl_series(&big, &EvalConfig::default()).is_err());
    }
}
