//! One-level recursions and their composition into nested integrals of
//! monomial forms.

use num_traits::{One, Zero};

use super::normalize::{Level, NatSeries};
use super::spec::{Family, Kernel};
use super::BuildError;
use crate::forms::Mono;
use crate::numfield::{rat_int, Rational};

/// Family of the inner coefficient together with the running sign, i.e.
/// which of `a_n^+-`, `b_n^+-` the remaining sum carries.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TailKind {
    APlus,
    AMinus,
    BPlus,
    BMinus,
}

impl TailKind {
    pub fn new(family: Family, sign: i8) -> Self {
        match (family, sign > 0) {
            (Family::BinomialA, true) => TailKind::APlus,
            (Family::BinomialA, false) => TailKind::AMinus,
            (Family::InverseBinomialB, true) => TailKind::BPlus,
            (Family::InverseBinomialB, false) => TailKind::BMinus,
        }
    }

    pub fn sign(self) -> i32 {
        match self {
            TailKind::APlus | TailKind::BPlus => 1,
            TailKind::AMinus | TailKind::BMinus => -1,
        }
    }

    pub fn family(self) -> Family {
        match self {
            TailKind::APlus | TailKind::AMinus => Family::BinomialA,
            TailKind::BPlus | TailKind::BMinus => Family::InverseBinomialB,
        }
    }
}

/// `sum_{n > m} c_n(x) sign^n / l(n)^s = coeff * prefactor(x) *
/// int_0^x prefix o (kernel * c_m(t) sign^m dt)`, summed over the steps.
#[derive(Clone, Debug, PartialEq)]
pub struct Step {
    pub coeff: Rational,
    pub prefactor: Mono,
    pub prefix: Vec<Mono>,
    pub kernel: Mono,
}

const W0: Mono = Mono::new(-1, 0, 0);

fn w0_pow(k: u32) -> Vec<Mono> {
    vec![W0; k as usize]
}

fn cat(mut a: Vec<Mono>, b: &[Mono]) -> Vec<Mono> {
    a.extend_from_slice(b);
    a
}

/// One level of the recursion for `tail` with the given kernel and weight.
/// The boundary with the next index is the kernel's natural one.
pub fn binomial_expand_step(tail: TailKind, kernel: Kernel, s: u32) -> Result<Vec<Step>, BuildError> {
    if s == 0 {
        return Err(BuildError::InvalidSpec("weights start at 1".into()));
    }
    let g = tail.sign();
    let sq = |e: i32| Mono::sqrt_factor(g, e);
    let t = |a: i32| Mono::t_pow(a);
    let w_g = sq(-1);
    let w_3g = t(-1).mul(sq(-1));
    let c = rat_int(g as i64);
    let one = Rational::one();
    let step = |coeff: &Rational, prefactor: Mono, prefix: Vec<Mono>, kernel: Mono| Step { coeff: coeff.clone(), prefactor, prefix, kernel };
    let steps = match (tail.family(), kernel, s) {
        (Family::InverseBinomialB, Kernel::Even, 1) => vec![step(&c, t(1).mul(sq(-1)), vec![], w_g)],
        (Family::InverseBinomialB, Kernel::Even, s) => vec![step(&c, Mono::ONE, cat(w0_pow(s - 2), &[w_g]), w_g)],
        (Family::InverseBinomialB, Kernel::OddPlus, 1) => vec![step(&one, t(-1).mul(sq(-1)), vec![], w_g)],
        (Family::InverseBinomialB, Kernel::OddPlus, s) => vec![step(&one, t(-1), cat(w0_pow(s - 2), &[w_3g]), w_g)],
        (Family::InverseBinomialB, Kernel::OddMinus, 1) => {
            vec![step(&c, t(1), vec![w_3g], w_g), step(&c, t(1).mul(sq(-1)), vec![], w_g)]
        }
        (Family::InverseBinomialB, Kernel::OddMinus, s) => vec![
            step(&c, t(1), cat(cat(vec![W0], &w0_pow(s - 2)), &[w_3g]), w_g),
            step(&c, t(1), cat(w0_pow(s - 2), &[w_3g]), w_g),
        ],
        (Family::BinomialA, Kernel::Even, s) => vec![
            step(&c, Mono::ONE, w0_pow(s - 1), t(1).mul(sq(-2))),
            step(&-c.clone(), Mono::ONE, cat(w0_pow(s - 1), &[w_3g]), t(1).mul(sq(-3))),
        ],
        (Family::BinomialA, Kernel::OddPlus, s) => vec![
            step(&one, t(-1), w0_pow(s - 1), sq(-2)),
            step(&-c.clone(), t(-1), cat(w0_pow(s - 1), &[w_g]), t(1).mul(sq(-3))),
        ],
        (Family::BinomialA, Kernel::OddMinus, 1) => vec![step(&c, sq(1), vec![], t(1).mul(sq(-3)))],
        (Family::BinomialA, Kernel::OddMinus, s) => {
            vec![step(&c, t(1), cat(w0_pow(s - 2), &[t(-2).mul(sq(1))]), t(1).mul(sq(-3)))]
        }
    };
    Ok(steps)
}

/// `coeff * prefactor(x) * int_0^x word`.
#[derive(Clone, Debug, PartialEq)]
pub struct Part {
    pub coeff: Rational,
    pub prefactor: Mono,
    pub word: Vec<Mono>,
}

/// `binom(2L, L)`.
pub fn central_binomial(l: u64) -> Rational {
    let mut b = Rational::one();
    for k in 0..l {
        b = b * rat_int((2 * l - k) as i64) / rat_int((k + 1) as i64);
    }
    b
}

/// Fold the steps over all levels of a naturally bounded series.
pub fn build_parts(ns: &NatSeries) -> Result<Vec<Part>, BuildError> {
    let mut sign = 1i8;
    let mut per_level = Vec::with_capacity(ns.levels.len());
    for &Level { kernel, s, eta } in &ns.levels {
        sign *= eta;
        per_level.push((binomial_expand_step(TailKind::new(ns.family, sign), kernel, s)?, sign));
    }
    // c_L(t) sign^L = q t^{2L}
    let l = ns.inner;
    let four_l = Rational::from_integer(num_bigint::BigInt::from(4).pow(l as u32));
    let mut q = match ns.family {
        Family::InverseBinomialB => four_l / central_binomial(l),
        Family::BinomialA => central_binomial(l) / four_l,
    };
    if sign < 0 && l % 2 == 1 {
        q = -q;
    }
    let innermost = Mono::t_pow(2 * l as i32);

    // partial parts: coefficient, outer prefactor, word so far, kernel awaiting the inner prefactor
    let mut acc: Vec<(Rational, Mono, Vec<Mono>, Mono)> = Vec::new();
    for (j, (steps, _)) in per_level.iter().enumerate() {
        if j == 0 {
            for st in steps {
                acc.push((st.coeff.clone(), st.prefactor, st.prefix.clone(), st.kernel));
            }
            continue;
        }
        let mut next = Vec::with_capacity(acc.len() * steps.len());
        for (c, pf, word, pending) in &acc {
            for st in steps {
                let mut w = word.clone();
                w.push(pending.mul(st.prefactor));
                w.extend_from_slice(&st.prefix);
                next.push((c * &st.coeff, *pf, w, st.kernel));
            }
        }
        acc = next;
    }
    Ok(acc
        .into_iter()
        .filter(|(c, ..)| !c.is_zero())
        .map(|(c, pf, mut w, pending)| {
            w.push(pending.mul(innermost));
            Part { coeff: c * &q, prefactor: pf, word: w }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::evaluator::{eval_forms, EvalConfig};
    use crate::numfield::rat;
    use num_traits::ToPrimitive;

    fn c_n(family: Family, n: u64, x: f64) -> f64 {
        let mut c = 1.0;
        for k in 1..=n {
            let r = (2 * k) as f64 / (2 * k - 1) as f64;
            c *= match family {
                Family::InverseBinomialB => r,
                Family::BinomialA => 1.0 / r,
            } * x
                * x;
        }
        c
    }

    /// Depth-one tail sum `sum_{n > m} c_n(x) g^n / l(n)^s` (`>=` for 2n+1).
    fn direct(family: Family, g: i8, kernel: Kernel, s: u32, m: u64, x: f64) -> f64 {
        let lo = if kernel == Kernel::OddPlus { m } else { m + 1 };
        (lo..4000).map(|n| c_n(family, n, x) * (g as f64).powi(n as i32) / (kernel.at(n as i64) as f64).powi(s as i32)).sum()
    }

    #[test]
    fn every_step_matches_a_direct_sum() {
        let cfg = EvalConfig::default();
        let x = 0.6f64;
        for family in [Family::InverseBinomialB, Family::BinomialA] {
            for g in [1i8, -1] {
                for kernel in [Kernel::Even, Kernel::OddPlus, Kernel::OddMinus] {
                    for s in 1..=3u32 {
                        for m in 0..=2u64 {
                            let ns = NatSeries { family, levels: vec![Level { kernel, s, eta: g }], inner: m };
                            let parts = build_parts(&ns).unwrap();
                            let mut v = 0.0;
                            for p in &parts {
                                let r = eval_forms(&[(1.0, p.word.clone())], x, &cfg).unwrap().re();
                                v += p.coeff.to_f64().unwrap() * p.prefactor.eval(crate::forms::UnitPoint::new(x)) * r;
                            }
                            let d = direct(family, g, kernel, s, m, x);
                            assert!((v - d).abs() < 1e-11, "{family:?} {g} {kernel:?} s={s} m={m}: {v} vs {d}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn innermost_coefficient() {
        assert_eq!(central_binomial(3), rat(20, 1));
        let ns = NatSeries { family: Family::InverseBinomialB, levels: vec![Level { kernel: Kernel::Even, s: 2, eta: -1 }], inner: 1 };
        let parts = build_parts(&ns).unwrap();
        // b_1 = 2 with sign (-1)^1
        assert_eq!(parts[0].coeff, rat(2, 1));
        assert_eq!(parts[0].word.last().unwrap(), &Mono::new(2, 0, -1));
    }
}
