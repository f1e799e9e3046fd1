//! Values at `x = 1` of sums whose individual terms blow up there.
//!
//! Near `t = 1` every monomial form is `sigma^{b+1}` times a power series in
//! `sigma^2`, where `sigma = sqrt(1 - t)`. Splitting each word at `t = 1/2`
//! (Chen), the part on `[1/2, x]` is expanded in `sigma` and `log sigma`
//! exactly, the part on `[0, 1/2]` is evaluated numerically, and the
//! finite part as `sigma -> 0` is kept. When the sum has a limit, the
//! finite parts add up to it.

use std::collections::BTreeMap;

use super::{eval_forms_regularized, EvalConfig, EvalError, EvalResult};
use crate::forms::Mono;
use crate::scalar::cplx::C;
use crate::scalar::Real;

/// Highest power of `sigma` kept; `sigma_0^2 = 1/2` makes the dropped
/// terms of order `2^{-JMAX/2}`.
const JMAX: i32 = 250;

/// `sum_{k, j} c[k][j - lo] sigma^j log^k sigma`.
#[derive(Clone, Debug)]
struct LogSeries<R> {
    lo: i32,
    c: Vec<Vec<R>>,
}

impl<R: Real> LogSeries<R> {
    fn one() -> Self {
        LogSeries { lo: 0, c: vec![vec![R::one()]] }
    }

    fn get(&self, k: usize, j: i32) -> R {
        if j < self.lo {
            return R::zero();
        }
        self.c.get(k).and_then(|row| row.get((j - self.lo) as usize)).copied().unwrap_or_else(R::zero)
    }

    /// Product with a log-free Laurent series `sigma^lo sum p_i sigma^i`.
    fn times(&self, p_lo: i32, p: &[R]) -> Self {
        let lo = self.lo + p_lo;
        let len = (JMAX - lo + 1).max(0) as usize;
        let c = self
            .c
            .iter()
            .map(|row| {
                let mut out = vec![R::zero(); len];
                for (i, &a) in row.iter().enumerate() {
                    if a.is_zero() {
                        continue;
                    }
                    for (m, &b) in p.iter().enumerate() {
                        let idx = i + m;
                        if idx >= len {
                            break;
                        }
                        out[idx] += a * b;
                    }
                }
                out
            })
            .collect();
        LogSeries { lo, c }
    }

    fn eval(&self, sigma: R) -> R {
        let l = sigma.ln();
        let mut total = R::zero();
        let mut lk = R::one();
        for row in &self.c {
            let mut s = R::zero();
            let mut p = sigma.powi(self.lo);
            for &a in row {
                s += a * p;
                p *= sigma;
            }
            total += s * lk;
            lk *= l;
        }
        total
    }

    /// `int_{sigma_0}^{sigma}` termwise.
    fn integrate_from(&self, sigma0: R) -> Self {
        let kmax = self.c.len();
        // keep a slot for sigma^0, where the constant of integration goes
        let lo = (self.lo + 1).min(0);
        let len = (JMAX - lo + 1) as usize;
        let mut c = vec![vec![R::zero(); len]; kmax + 1];
        for k in 0..kmax {
            for (i, &a) in self.c[k].iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                let j = self.lo + i as i32;
                let idx = (j + 1 - lo) as usize;
                if idx >= len {
                    continue;
                }
                if j == -1 {
                    c[k + 1][idx] += a / R::of_int(k as i64 + 1);
                } else {
                    // int v^j log^k = v^{j+1} sum_m (-1)^{k-m} k!/m! / (j+1)^{k-m+1} log^m
                    let jp = R::of_int(j as i64 + 1);
                    let mut coef = a / jp;
                    for m in (0..=k).rev() {
                        c[m][idx] += coef;
                        if m > 0 {
                            coef = -coef * R::of_int(m as i64) / jp;
                        }
                    }
                }
            }
        }
        let mut out = LogSeries { lo, c };
        let at0 = out.eval(sigma0);
        let zero_idx = (0 - lo) as usize;
        out.c[0][zero_idx] -= at0;
        out
    }

    /// Coefficient of `sigma^0 log^0` in the product with `sigma^lo p`.
    fn finite_part_times(&self, p_lo: i32, p: &[R]) -> R {
        let mut s = R::zero();
        for (m, &b) in p.iter().enumerate() {
            s += b * self.get(0, -(p_lo + m as i32));
        }
        s
    }
}

/// `g^alpha` for a polynomial `g` with `g(0) = 1`, to `n` terms.
fn series_pow<R: Real>(g: &[R], alpha: R, n: usize) -> Vec<R> {
    let mut h = vec![R::zero(); n];
    h[0] = R::one();
    for m in 1..n {
        let mut s = R::zero();
        for (i, &gi) in g.iter().enumerate().skip(1) {
            if i > m {
                break;
            }
            s += gi * h[m - i] * (alpha * R::of_int(i as i64) - R::of_int((m - i) as i64));
        }
        h[m] = s / R::of_int(m as i64);
    }
    h
}

fn mul_trunc<R: Real>(a: &[R], b: &[R], n: usize) -> Vec<R> {
    let mut out = vec![R::zero(); n];
    for (i, &x) in a.iter().enumerate().take(n) {
        for (j, &y) in b.iter().enumerate() {
            if i + j >= n {
                break;
            }
            out[i + j] += x * y;
        }
    }
    out
}

/// `t^a (1-t^2)^{b/2} (1+t^2)^{c/2}` at `t = 1 - sigma^2` as
/// `sigma^b sum_i e_i sigma^i`.
fn mono_series<R: Real>(m: Mono) -> (i32, Vec<R>) {
    let nu = (JMAX as usize) / 2 + 4;
    let half = R::of(0.5);
    let one = R::one();
    // (1-u)^a (1-u/2)^{b/2} (1-u+u^2/2)^{c/2} 2^{(b+c)/2}, u = sigma^2
    let f1 = series_pow(&[one, -one], R::of_int(m.a as i64), nu);
    let f2 = series_pow(&[one, -half], R::of_int(m.b as i64) * half, nu);
    let f3 = series_pow(&[one, -one, half], R::of_int(m.c as i64) * half, nu);
    let mut e = mul_trunc(&mul_trunc(&f1, &f2, nu), &f3, nu);
    let scale = R::of(2.0).sqrt().powi(m.b + m.c);
    let mut out = vec![R::zero(); 2 * nu];
    for (i, v) in e.drain(..).enumerate() {
        out[2 * i] = v * scale;
    }
    (m.b, out)
}

/// `m(t) dt` in terms of `d sigma`: `-2 sigma^{b+1} (...)`.
fn letter_series<R: Real>(m: Mono) -> (i32, Vec<R>) {
    let (lo, mut p) = mono_series::<R>(m);
    for v in &mut p {
        *v = -(*v + *v);
    }
    (lo + 1, p)
}

/// `lim_{x -> 1} sum_i q_i P_i(x) int_0^x w_i`, assuming the limit exists.
pub fn eval_forms_at_one<R: Real>(terms: &[(R, Mono, Vec<Mono>)], cfg: &EvalConfig) -> Result<EvalResult<R>, EvalError> {
    let sigma0 = R::of(0.5).sqrt();
    let x0 = R::of(0.5);
    let mut letters: BTreeMap<Mono, (i32, Vec<R>)> = BTreeMap::new();
    let mut prefs: BTreeMap<Mono, (i32, Vec<R>)> = BTreeMap::new();
    // G for each word prefix, integrated from t = 1/2
    let mut prefix_cache: BTreeMap<Vec<Mono>, LogSeries<R>> = BTreeMap::new();
    prefix_cache.insert(Vec::new(), LogSeries::one());
    let mut suffix_terms: BTreeMap<Vec<Mono>, R> = BTreeMap::new();
    for (q, pf, w) in terms {
        let (p_lo, p) = prefs.entry(*pf).or_insert_with(|| mono_series(*pf)).clone();
        for k in 0..=w.len() {
            let g = prefix_series(&w[..k], &mut prefix_cache, &mut letters, sigma0);
            let fp = g.finite_part_times(p_lo, &p);
            if fp.is_zero() {
                continue;
            }
            *suffix_terms.entry(w[k..].to_vec()).or_insert_with(R::zero) += *q * fp;
        }
    }
    let list: Vec<(R, Vec<Mono>)> = suffix_terms.into_iter().filter(|(_, c)| !c.is_zero()).map(|(w, c)| (c, w)).collect();
    let r = eval_forms_regularized(&list, x0, cfg)?;
    let trunc = 64.0 * R::eps() * list.iter().map(|(c, _)| c.abs().to_f64_lossy()).fold(0.0, f64::max);
    Ok(EvalResult { value: C::new(r.value.re, R::zero()), abs_error_estimate: r.abs_error_estimate + trunc, engine: r.engine })
}

fn prefix_series<R: Real>(
    w: &[Mono],
    cache: &mut BTreeMap<Vec<Mono>, LogSeries<R>>,
    letters: &mut BTreeMap<Mono, (i32, Vec<R>)>,
    sigma0: R,
) -> LogSeries<R> {
    if let Some(s) = cache.get(w) {
        return s.clone();
    }
    // int_{1/2}^{t} w_0(t_1) [int_{1/2}^{t_1} w_1 ... ]
    let inner = prefix_series(&w[1..], cache, letters, sigma0);
    let (lo, p) = letters.entry(w[0]).or_insert_with(|| letter_series(w[0])).clone();
    let s = inner.times(lo, &p).integrate_from(sigma0);
    cache.insert(w.to_vec(), s.clone());
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Dd;
    use num_traits::One;

    #[test]
    fn convergent_words_match_direct_evaluation() {
        let cfg = EvalConfig::default();
        let words = [
            vec![Mono::new(0, -1, 0)],
            vec![Mono::new(-1, 0, 0), Mono::new(1, -1, 0)],
            vec![Mono::new(0, -1, -1), Mono::new(0, 0, -2), Mono::new(1, 0, 0)],
        ];
        for w in &words {
            let direct = super::super::eval_forms::<Dd>(&[(Dd::one(), w.clone())], Dd::one(), &cfg).unwrap().re();
            let fp = eval_forms_at_one::<Dd>(&[(Dd::one(), Mono::ONE, w.clone())], &cfg).unwrap().re();
            assert!((direct - fp).abs().to_f64_lossy() < 1e-20, "{w:?}: {direct} vs {fp}");
        }
    }

    #[test]
    fn cancelling_divergences() {
        let cfg = EvalConfig::default();
        // int_0^x t dt/(1-t^2) = -log(sigma) - log(2 - sigma^2)/2
        let terms = vec![(Dd::one(), Mono::ONE, vec![Mono::new(1, -2, 0)])];
        let v = eval_forms_at_one::<Dd>(&terms, &cfg).unwrap().re();
        let expect = -(Dd::of(2.0).ln()) / Dd::of(2.0);
        assert!((v - expect).abs().to_f64_lossy() < 1e-25, "{v} vs {expect}");
        // (1-x^2)^{-1/2} (1 - sqrt(1-x^2) - x^2) = sqrt(1-x^2) - 1 -> -1
        let terms = vec![
            (Dd::one(), Mono::new(0, -1, 0), vec![Mono::new(1, -1, 0)]),
            (Dd::of(-2.0), Mono::new(0, -1, 0), vec![Mono::new(1, 0, 0)]),
        ];
        let v = eval_forms_at_one::<Dd>(&terms, &cfg).unwrap().re();
        assert!((v + Dd::one()).abs().to_f64_lossy() < 1e-25, "{v}");
    }
}
