//! Ground truth by direct summation: nested sums with running tails,
//! exact multiple harmonic and t-sums, and the Leshchiner identities.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::evaluator::constants::hurwitz_zeta;
use crate::evaluator::{Engine, EvalConfig, EvalResult};
use crate::numfield::Rational;
use crate::scalar::cplx::C;
use crate::scalar::Real;
use crate::series_builder::{Family, Kernel, SeriesSpec, Strictness};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OracleError {
    #[error("invalid series: {0}")]
    Invalid(String),
    #[error("divergent series: {0}")]
    Divergent(String),
    #[error("tail bound not reached: estimate {estimate:e} after {terms} terms")]
    TailNotReached { estimate: f64, terms: u64 },
}

/// Grid for the extrapolated sums on `|x| = 1`: partial sums at
/// `BASE_TERMS * 2^i`, `i = 0..=DOUBLINGS`.
const BASE_TERMS: usize = 256;
const DOUBLINGS: u32 = 9;

/// `c_n(x)` for `n = 0..=n_max`, given `x^2` (negative for imaginary `x`).
fn coefficients<R: Real>(family: Family, x2: R, n_max: usize) -> Vec<R> {
    let mut c = Vec::with_capacity(n_max + 1);
    c.push(R::one());
    for n in 1..=n_max {
        let (num, den) = match family {
            Family::InverseBinomialB => (2 * n, 2 * n - 1),
            Family::BinomialA => (2 * n - 1, 2 * n),
        };
        let prev = c[n - 1];
        c.push(prev * x2 * R::of_int(num as i64) / R::of_int(den as i64));
    }
    c
}

fn signed_power<R: Real>(eta: i8, n: usize) -> R {
    if eta < 0 && n % 2 == 1 {
        -R::one()
    } else {
        R::one()
    }
}

/// Richardson extrapolation of partial sums on a doubling grid whose error
/// is `sum_k c_k N^{(h - 2k)/2}`.
fn richardson<R: Real>(partials: &[R], h0: i32) -> (R, f64) {
    let sqrt2 = R::of(2.0).sqrt();
    let mut row: Vec<R> = partials.to_vec();
    let mut prev_best = row[row.len() - 1];
    let mut best = prev_best;
    for k in 0..partials.len() - 1 {
        let f = sqrt2.powi(h0 - 2 * k as i32);
        row = row.windows(2).map(|w| (w[1] - f * w[0]) / (R::one() - f)).collect();
        prev_best = best;
        best = row[row.len() - 1];
    }
    (best, (best - prev_best).abs().to_f64_lossy())
}

/// Value of the series by running tails, extrapolated on `|x| = 1`.
pub fn sum_series<R: Real>(spec: &SeriesSpec, cfg: &EvalConfig) -> Result<EvalResult<R>, OracleError> {
    spec.check_shape().map_err(|e| match e {
        crate::series_builder::BuildError::Divergent(m) => OracleError::Divergent(m),
        other => OracleError::Invalid(other.to_string()),
    })?;
    let d = spec.depth();
    let etas = spec.etas();
    let lbs = spec.lower_bounds();
    let x: R = spec.x.value();
    let x2 = if spec.imaginary { -(x * x) } else { x * x };
    let r = x2.abs().to_f64_lossy();
    let on_circle = spec.x.abs_is_one() || (1.0 - r).abs() < 1e-15;
    let max_terms = cfg.max_steps as u64 * 1000;

    let n_max = if on_circle {
        BASE_TERMS << DOUBLINGS
    } else if r == 0.0 {
        lbs[0] as usize + 1
    } else {
        // r^N N^3 below 1e-34 relative to the leading terms
        let mut n = 64.0f64;
        for _ in 0..4 {
            n = (78.3 + 3.0 * n.ln()) / -r.ln();
        }
        let n = n.ceil() as u64 + lbs[0] + 8;
        if n > max_terms {
            return Err(OracleError::TailNotReached { estimate: r.powf(max_terms as f64), terms: max_terms });
        }
        n as usize
    };
    let grid: Vec<usize> = (0..=DOUBLINGS).map(|i| BASE_TERMS << i).collect();
    let c = coefficients(spec.family, x2, n_max);

    // asymptotic shape of the level's terms on the circle: alternating or
    // not, times n^{h/2} (1 + O(1/n))
    let mut alternating = x2 < R::zero();
    let mut h: i32 = match spec.family {
        Family::InverseBinomialB => 1,
        Family::BinomialA => -1,
    };

    let mut tails: Vec<R> = Vec::new();
    let mut err = 0.0f64;
    let mut abs_sum = 0.0f64;
    for j in 0..d {
        let lb = lbs[j] as usize;
        let kernel = spec.kernels[j];
        let s = spec.s[j] as i32;
        let mut prefix = vec![R::zero(); n_max + 1];
        let mut acc = R::zero();
        let mut last_term = R::zero();
        for n in lb..=n_max {
            let inner = if j == 0 { c[n] } else { tails[n] };
            let term = inner * signed_power::<R>(etas[j], n) / R::of_int(kernel.at(n as i64)).powi(s);
            acc += term;
            abs_sum += term.abs().to_f64_lossy();
            prefix[n] = acc;
            last_term = term;
        }
        let total = if on_circle {
            alternating ^= etas[j] < 0;
            h -= 2 * s;
            if !alternating && h + 2 >= 0 {
                return Err(OracleError::Divergent(format!("level {} decays like n^{}", j + 1, h as f64 / 2.0)));
            }
            let partials: Vec<R> = grid.iter().map(|&n| prefix[n]).collect();
            let (v, e) = richardson(&partials, if alternating { h } else { h + 2 });
            if !alternating {
                h += 2;
            }
            err += e;
            v
        } else {
            err += last_term.abs().to_f64_lossy() / (1.0 - r).max(1e-300);
            acc
        };
        // tail_j(n) = sum over m related to n by the j-th boundary
        let below = |n: usize| if n == 0 { R::zero() } else { prefix[n - 1] };
        let strict = spec.strictness[j] == Strictness::Gt;
        tails = (0..=n_max).map(|n| if strict { total - prefix[n] } else { total - below(n) }).collect();
    }
    let value = tails[spec.tail_n as usize];
    let rounding = abs_sum * R::eps() * 4.0;
    let estimate = err + rounding;
    let floor = (cfg.target_abs_error * 1e3).max(1e-8);
    if !estimate.is_finite() || estimate > floor {
        return Err(OracleError::TailNotReached { estimate, terms: n_max as u64 });
    }
    Ok(EvalResult { value: C::new(value, R::zero()), abs_error_estimate: estimate, engine: Engine::DirectSum })
}

/// Every term of a spec's series with `n_1 <= n_max`, as
/// `(n_1, ..., n_d; term)`, ordered lexicographically with `n_1` outermost.
pub struct TermStream<R> {
    spec: SeriesSpec,
    etas: Vec<i8>,
    lbs: Vec<u64>,
    c: Vec<R>,
    n_max: u64,
    idx: Option<Vec<u64>>,
}

impl<R: Real> TermStream<R> {
    pub fn new(spec: &SeriesSpec, n_max: u64) -> Self {
        let x: R = spec.x.value();
        let x2 = if spec.imaginary { -(x * x) } else { x * x };
        let lbs = spec.lower_bounds();
        let idx = if lbs[0] <= n_max { Some(lbs.clone()) } else { None };
        TermStream { spec: spec.clone(), etas: spec.etas(), c: coefficients(spec.family, x2, n_max as usize), lbs, n_max, idx }
    }

    /// `|c_{n_1}(x)| / |l_1(n_1)|^{s_1}`, which bounds every term with this
    /// outer index since the inner denominators have modulus at least 1.
    pub fn magnitude_bound(&self, n1: u64) -> R {
        let l = R::of_int(self.spec.kernels[0].at(n1 as i64)).abs();
        self.c[n1 as usize].abs() / l.powi(self.spec.s[0] as i32)
    }

    fn term(&self, idx: &[u64]) -> R {
        let mut t = self.c[idx[0] as usize];
        for (j, &n) in idx.iter().enumerate() {
            t = t * signed_power::<R>(self.etas[j], n as usize) / R::of_int(self.spec.kernels[j].at(n as i64)).powi(self.spec.s[j] as i32);
        }
        t
    }

    fn upper(&self, idx: &[u64], j: usize) -> Option<u64> {
        if j == 0 {
            return Some(self.n_max);
        }
        let strict = self.spec.strictness[j - 1] == Strictness::Gt;
        idx[j - 1].checked_sub(strict as u64)
    }

    fn advance(&self, mut idx: Vec<u64>) -> Option<Vec<u64>> {
        let d = idx.len();
        let mut j = d;
        while j > 0 {
            j -= 1;
            if Some(idx[j]) < self.upper(&idx, j) {
                idx[j] += 1;
                for k in j + 1..d {
                    idx[k] = self.lbs[k];
                }
                return Some(idx);
            }
        }
        None
    }
}

impl<R: Real> Iterator for TermStream<R> {
    type Item = (Vec<u64>, R);

    fn next(&mut self) -> Option<Self::Item> {
        let idx = self.idx.take()?;
        let t = self.term(&idx);
        self.idx = self.advance(idx.clone());
        Some((idx, t))
    }
}

/// Nested sum over `n >= n_1 > ... > n_d >= 1` (all `>=` when starred)
/// of `prod 1/den(n_j)^{s_j}`.
fn nested_harmonic(s: &[u32], n: u64, star: bool, den: impl Fn(u64) -> i64) -> Rational {
    // inner[m] = sum over the levels below with their outer index <= m
    let mut inner: Vec<Rational> = vec![Rational::one(); n as usize + 1];
    for &sj in s.iter().rev() {
        let mut acc = Rational::zero();
        let mut next = vec![Rational::zero(); n as usize + 1];
        for m in 1..=n {
            let below = if star { &inner[m as usize] } else { &inner[m as usize - 1] };
            let p = Rational::from_integer(BigInt::from(den(m)).pow(sj));
            acc += below / p;
            next[m as usize] = acc.clone();
        }
        // the empty composition contributes 1 at every m, including 0
        inner = next;
    }
    inner[n as usize].clone()
}

/// `zeta_n(s)`, or `zeta*_n(s)` when `star`.
pub fn mhs(s: &[u32], n: u64, star: bool) -> Rational {
    if s.is_empty() {
        return Rational::one();
    }
    nested_harmonic(s, n, star, |m| m as i64)
}

/// `t_n(s)`, or `t*_n(s)` when `star`: the odd-denominator analogue.
pub fn tsum(s: &[u32], n: u64, star: bool) -> Rational {
    if s.is_empty() {
        return Rational::one();
    }
    nested_harmonic(s, n, star, |m| 2 * m as i64 - 1)
}

#[derive(Clone, Copy, Debug)]
pub struct LeshchinerCheck<R> {
    pub lhs: R,
    pub rhs: R,
    pub delta: f64,
    /// Geometric estimate of the omitted terms, already added to `rhs`.
    pub tail_estimate: f64,
}

pub fn zeta<R: Real>(s: u32) -> R {
    hurwitz_zeta(s, R::one())
}

/// `sum_{n >= 0} (-1)^n / (2n+1)^s`.
pub fn dirichlet_beta<R: Real>(s: u32) -> R {
    if s == 1 {
        return R::pi() / R::of(4.0);
    }
    let q = R::of(4.0).powi(-(s as i32));
    q * (hurwitz_zeta(s, R::of(0.25)) - hurwitz_zeta(s, R::of(0.75)))
}

/// Both sides of the `k`-th Leshchiner identity of the given variant,
/// the right side truncated at `n_terms` plus a geometric tail estimate.
///
/// Variant 1 compares against `-zeta(2k bar) = (1 - 2^{1-2k}) zeta(2k)`;
/// variant 3 against `beta(2k-1)`; variant 4 against `(1 - 4^{-k}) zeta(2k)`.
pub fn leshchiner_check<R: Real>(k: u32, variant: u8, n_terms: u64) -> Result<LeshchinerCheck<R>, OracleError> {
    if k == 0 || !(1..=4).contains(&variant) {
        return Err(OracleError::Invalid(format!("k = {k}, variant = {variant}")));
    }
    let k = k as usize;
    let a = |j: usize| if j == 1 { R::of(0.75) } else { R::one() };
    let b = |j: usize| if j == 1 { R::of(1.25) } else { R::one() };
    // h[p] = zeta_{n-1}(2_p) for variants 1-2, t_n(2_p) for 3-4
    let mut h = vec![R::zero(); k];
    h[0] = R::one();
    let odd = variant >= 3;
    let start = if odd { 0 } else { 1 };
    // central binomial weight: 1/C(2n,n) or C(2n,n)/16^n
    let mut w = R::one();
    let mut rhs = R::zero();
    let mut last = [R::zero(), R::zero()];
    for n in start..=n_terms {
        if odd && n > 0 {
            let l = R::of_int(2 * n as i64 - 1);
            let l2 = l * l;
            for p in (1..k).rev() {
                let add = h[p - 1] / l2;
                h[p] += add;
            }
            w = w * R::of_int((2 * n - 1) as i64) / R::of_int(8 * n as i64);
        }
        if !odd {
            w = w * R::of_int(n as i64) / R::of_int(2 * (2 * n as i64 - 1));
        }
        let nn = R::of_int(n as i64);
        let mut inner = R::zero();
        for j in 1..=k {
            let sign = if (k - j) % 2 == 0 { R::one() } else { -R::one() };
            let hj = h[k - j];
            inner += match variant {
                1 => a(j) * sign * hj / nn.powi(2 * j as i32 - 2),
                2 => b(j) * sign * hj / nn.powi(2 * j as i32 - 2),
                3 => a(j) * sign * hj / R::of_int(2 * n as i64 + 1).powi(2 * j as i32 - 1),
                _ => b(j) * sign * hj / R::of_int(2 * n as i64 + 1).powi(2 * j as i32),
            };
        }
        let alt = if n % 2 == 1 { -R::one() } else { R::one() };
        let term = match variant {
            1 => R::of(2.0) * w / (nn * nn) * inner,
            2 => -R::of(2.0) * alt * w / (nn * nn * nn) * inner,
            3 => w * inner,
            _ => alt * w * inner,
        };
        rhs += term;
        last = [last[1], term];
        if !odd {
            // zeta_n(2_p) for the next n
            let n2 = nn * nn;
            for p in (1..k).rev() {
                let add = h[p - 1] / n2;
                h[p] += add;
            }
        }
    }
    let tail = if last[0].is_zero() {
        R::zero()
    } else {
        let rho = last[1] / last[0];
        if rho.abs() < R::one() {
            last[1] * rho / (R::one() - rho)
        } else {
            R::zero()
        }
    };
    rhs += tail;
    let two_k = 2 * k as u32;
    let lhs = match variant {
        1 => (R::one() - R::of(2.0).powi(1 - two_k as i32)) * zeta::<R>(two_k),
        2 => zeta::<R>(two_k + 1),
        3 => dirichlet_beta::<R>(two_k - 1),
        _ => (R::one() - R::of(4.0).powi(-(k as i32))) * zeta::<R>(two_k),
    };
    Ok(LeshchinerCheck { lhs, rhs, delta: (lhs - rhs).abs().to_f64_lossy(), tail_estimate: tail.abs().to_f64_lossy() })
}

/// `zeta(n bar)` by extrapolated direct alternating summation, and the
/// closed form `(2^{1-n} - 1) zeta(n)`.
pub fn alternating_zeta_check<R: Real>(n: u32) -> (R, R) {
    let n_max = BASE_TERMS << DOUBLINGS;
    let mut acc = R::zero();
    let mut partials = Vec::new();
    let mut next = BASE_TERMS;
    for m in 1..=n_max {
        let t = R::of_int(m as i64).powi(-(n as i32));
        acc += if m % 2 == 1 { -t } else { t };
        if m == next {
            partials.push(acc);
            next *= 2;
        }
    }
    let (direct, _) = richardson(&partials, -2 * n as i32);
    let closed = (R::of(2.0).powi(1 - n as i32) - R::one()) * zeta::<R>(n);
    (direct, closed)
}

/// Relative error of the recurrence values of `b_50(1)` and `a_50(1)`
/// against exact rationals.
pub fn central_binomial_spot_check<R: Real>() -> (f64, f64) {
    let n = 50usize;
    let b = coefficients::<R>(Family::InverseBinomialB, R::one(), n)[n];
    let a = coefficients::<R>(Family::BinomialA, R::one(), n)[n];
    let mut binom = BigInt::one();
    for k in 0..n {
        binom = binom * BigInt::from(2 * n - k) / BigInt::from(k + 1);
    }
    let four = BigInt::from(4).pow(n as u32);
    let b_exact = R::from_rational(&Rational::new(four.clone(), binom.clone()));
    let a_exact = R::from_rational(&Rational::new(binom, four));
    let rel = |v: R, e: R| ((v - e) / e).abs().to_f64_lossy();
    (rel(b, b_exact), rel(a, a_exact))
}

/// `sum_{n > tail} c_n(x) eta^n / l(n)^s` for a single level, by the oracle.
pub fn depth_one<R: Real>(family: Family, s: u32, eta: i8, kernel: Kernel, x: crate::series_builder::XArg) -> Result<R, OracleError> {
    let spec = SeriesSpec::with_kernels(family, &[s], crate::series_builder::Signs::PerIndex(vec![eta]), &[kernel], x);
    Ok(sum_series::<R>(&spec, &EvalConfig::default())?.re())
}
