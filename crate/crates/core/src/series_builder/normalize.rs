//! Reduction of arbitrary boundaries to the ones the recursions close under.

use num_traits::{One, Zero};

use super::spec::{Family, Kernel, SeriesSpec, Strictness};
use crate::numfield::{rat_int, Rational};

/// One summation level after normalisation; its boundary with the next
/// index is the kernel's natural one.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Level {
    pub kernel: Kernel,
    pub s: u32,
    pub eta: i8,
}

/// `sum_{n_1 > ... > n_d > L} c_{n_1}(x) prod eta_j^{n_j} / l_j(n_j)^{s_j}`,
/// each relation being the natural one for the level's kernel and the last
/// one `n_d > L` (or `n_d >= L` for `2n+1`).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct NatSeries {
    pub family: Family,
    pub levels: Vec<Level>,
    pub inner: u64,
}

/// `sum_i q_i * series_i`, where `None` stands for the constant 1.
pub type NatSum = Vec<(Rational, Option<NatSeries>)>;

#[derive(Clone, Debug)]
struct Work {
    levels: Vec<Level>,
    strict: Vec<Strictness>,
    tail: u64,
}

/// Rewrite a spec at a real argument (signs already effective) as a
/// combination of naturally bounded series.
pub fn normalize(spec: &SeriesSpec) -> NatSum {
    let etas = spec.effective_etas();
    let levels = (0..spec.depth()).map(|j| Level { kernel: spec.kernels[j], s: spec.s[j], eta: etas[j] }).collect();
    let mut out = NatSum::new();
    expand(spec.family, Work { levels, strict: spec.strictness.clone(), tail: spec.tail_n }, Rational::one(), &mut out);
    let mut merged: std::collections::BTreeMap<Option<NatSeries>, Rational> = Default::default();
    for (q, s) in out {
        *merged.entry(s).or_insert_with(Rational::zero) += q;
    }
    merged.into_iter().filter(|(_, q)| !q.is_zero()).map(|(s, q)| (q, s)).collect()
}

fn expand(family: Family, w: Work, k: Rational, out: &mut NatSum) {
    if w.levels.is_empty() {
        out.push((k, None));
        return;
    }
    let d = w.levels.len();
    // first mid boundary whose relation is not the natural one
    if let Some(j) = (0..d - 1).find(|&j| w.strict[j] != w.levels[j].kernel.natural()) {
        let mut natural = w.clone();
        natural.strict[j] = w.levels[j].kernel.natural();
        expand(family, natural, k.clone(), out);
        // >= is > plus the diagonal, > is >= minus it
        let sign = if w.strict[j] == Strictness::Ge { rat_int(1) } else { rat_int(-1) };
        for (q, lvl) in merge_levels(w.levels[j], w.levels[j + 1]) {
            let mut levels = w.levels.clone();
            levels.splice(j..j + 2, [lvl]);
            let mut strict = w.strict.clone();
            strict.remove(j);
            expand(family, Work { levels, strict, tail: w.tail }, k.clone() * &sign * q, out);
        }
        return;
    }
    let last = w.levels[d - 1];
    let lb = w.tail + w.strict[d - 1].is_strict() as u64;
    let inner = if last.kernel.natural() == Strictness::Ge {
        lb
    } else if lb > 0 {
        lb - 1
    } else {
        // only 2n-1 reaches here: split off n_d = 0, where l(0)^s = (-1)^s
        let sign = if last.s % 2 == 0 { rat_int(1) } else { rat_int(-1) };
        let outer = Work { levels: w.levels[..d - 1].to_vec(), strict: w.strict[..d - 1].to_vec(), tail: 0 };
        expand(family, outer, k.clone() * sign, out);
        0
    };
    out.push((k, Some(NatSeries { family, levels: w.levels, inner })));
}

/// `eta_1^n / (l_1(n)^{s_1} l_2(n)^{s_2})` as a combination of single
/// levels, by partial fractions when the kernels differ.
pub fn merge_levels(a: Level, b: Level) -> Vec<(Rational, Level)> {
    let eta = a.eta * b.eta;
    if a.kernel == b.kernel {
        return vec![(Rational::one(), Level { kernel: a.kernel, s: a.s + b.s, eta })];
    }
    let mut acc: std::collections::BTreeMap<Level, Rational> = Default::default();
    split(a.kernel, a.s, b.kernel, b.s, Rational::one(), eta, &mut acc);
    acc.into_iter().filter(|(_, q)| !q.is_zero()).map(|(l, q)| (q, l)).collect()
}

/// 1/(A^p B^q) = (1/delta) (1/(A^p B^{q-1}) - 1/(A^{p-1} B^q)), B - A = delta.
fn split(ka: Kernel, p: u32, kb: Kernel, q: u32, k: Rational, eta: i8, acc: &mut std::collections::BTreeMap<Level, Rational>) {
    if p == 0 || q == 0 {
        let (kernel, s) = if p == 0 { (kb, q) } else { (ka, p) };
        *acc.entry(Level { kernel, s, eta }).or_insert_with(Rational::zero) += k;
        return;
    }
    let delta = rat_int(kb.offset() - ka.offset());
    split(ka, p, kb, q - 1, k.clone() / &delta, eta, acc);
    split(ka, p - 1, kb, q, -k / delta, eta, acc);
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series_builder::spec::{Signs, XArg};
    use num_traits::ToPrimitive;

    /// Brute-force truncated sum with the summand's x-dependence dropped:
    /// only the index structure is being tested.
    fn brute(levels: &[(Kernel, u32, i8)], strict: &[Strictness], tail: i64, weight: impl Fn(i64) -> f64, n_max: i64) -> f64 {
        fn rec(
            j: usize,
            below: i64,
            levels: &[(Kernel, u32, i8)],
            strict: &[Strictness],
            n_max: i64,
            acc: f64,
            weight: &dyn Fn(i64) -> f64,
        ) -> f64 {
            // levels are walked innermost first
            let d = levels.len();
            if j == d {
                return acc;
            }
            let idx = d - 1 - j;
            let (k, s, eta) = levels[idx];
            let lo = below + strict[idx].is_strict() as i64;
            let mut total = 0.0;
            for n in lo..=n_max {
                let mut term = acc * (eta as f64).powi(n as i32) / (k.at(n) as f64).powi(s as i32);
                if idx == 0 {
                    term *= weight(n);
                }
                total += rec(j + 1, n, levels, strict, n_max, term, weight);
            }
            total
        }
        rec(0, tail, levels, strict, n_max, 1.0, &weight)
    }

    fn nat_brute(ns: &NatSeries, weight: &dyn Fn(i64) -> f64, n_max: i64) -> f64 {
        let levels: Vec<_> = ns.levels.iter().map(|l| (l.kernel, l.s, l.eta)).collect();
        let strict: Vec<_> = ns.levels.iter().map(|l| l.kernel.natural()).collect();
        brute(&levels, &strict, ns.inner as i64, weight, n_max)
    }

    #[test]
    fn normalisation_preserves_truncated_sums() {
        use Kernel::*;
        use Strictness::*;
        let weight = |n: i64| 0.7f64.powi(n as i32);
        let kernels = [Even, OddPlus, OddMinus];
        let stricts = [Gt, Ge];
        for &k1 in &kernels {
            for &k2 in &kernels {
                for &st1 in &stricts {
                    for &st2 in &stricts {
                        for tail in 0..2u64 {
                            let spec = SeriesSpec {
                                family: Family::InverseBinomialB,
                                s: vec![2, 1],
                                signs: Signs::PerIndex(vec![-1, 1]),
                                kernels: vec![k1, k2],
                                strictness: vec![st1, st2],
                                x: XArg::Float(0.5),
                                imaginary: false,
                                tail_n: tail,
                            };
                            if spec.check_shape().is_err() {
                                continue;
                            }
                            let direct = brute(&[(k1, 2, -1), (k2, 1, 1)], &[st1, st2], tail as i64, weight, 60);
                            let mut via = 0.0;
                            for (q, s) in normalize(&spec) {
                                let v = match &s {
                                    None => 1.0,
                                    Some(ns) => nat_brute(ns, &weight, 60),
                                };
                                via += q.to_f64().unwrap() * v;
                            }
                            assert!((direct - via).abs() < 1e-12, "{spec}: {direct} vs {via}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn merges_by_partial_fractions() {
        let a = Level { kernel: Kernel::OddPlus, s: 2, eta: -1 };
        let b = Level { kernel: Kernel::Even, s: 1, eta: -1 };
        let parts = merge_levels(a, b);
        for n in 1..6i64 {
            let lhs = 1.0 / ((2 * n + 1) as f64).powi(2) / (2 * n) as f64;
            let rhs: f64 = parts.iter().map(|(q, l)| q.to_f64().unwrap() / (l.kernel.at(n) as f64).powi(l.s as i32)).sum();
            assert!((lhs - rhs).abs() < 1e-15);
        }
        assert!(parts.iter().all(|(_, l)| l.eta == 1));
    }
}
