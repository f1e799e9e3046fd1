//! Exact rewriting of sums of monomial-form words into the Omega alphabet.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use super::BuildError;
use crate::forms::Mono;
use crate::numfield::{CycloQ8, Rational};
use crate::words::{LinComb, OmegaLetter, OmegaWord, Word};

/// `sum coeff * prefactor(x) * int_0^x word`, keyed by `(prefactor, word)`.
pub type FormSum = BTreeMap<(Mono, Vec<Mono>), Rational>;

/// Letters used as the target basis. `w[20]` and `w[-20]` are omitted:
/// they equal `w[0] + w[2]` and `w[0] - w[-2]`.
pub const OMEGA_BASIS: [OmegaLetter; 11] = [
    OmegaLetter::W0,
    OmegaLetter::W1,
    OmegaLetter::Wm1,
    OmegaLetter::W2,
    OmegaLetter::Wm2,
    OmegaLetter::W3,
    OmegaLetter::Wm3,
    OmegaLetter::W4,
    OmegaLetter::W5,
    OmegaLetter::Wm5,
    OmegaLetter::W6,
];

/// Accumulate a term; zero totals are left for [`prune`].
pub fn add_term(sum: &mut FormSum, prefactor: Mono, word: Vec<Mono>, q: Rational) {
    if !q.is_zero() {
        *sum.entry((prefactor, word)).or_insert_with(Rational::zero) += q;
    }
}

pub fn prune(sum: &mut FormSum) {
    sum.retain(|_, q| !q.is_zero());
}

fn canonical_vector(m: Mono) -> BTreeMap<Mono, Rational> {
    m.canonical().into_iter().map(|(q, c)| (c, q)).collect()
}

/// Coordinates of a combination of canonical monomials in the basis letters.
pub fn express(v: &BTreeMap<Mono, Rational>) -> Option<Vec<(OmegaLetter, Rational)>> {
    if v.is_empty() {
        return Some(Vec::new());
    }
    let images: Vec<BTreeMap<Mono, Rational>> = OMEGA_BASIS.iter().map(|l| canonical_vector(l.mono())).collect();
    let mut rows: Vec<Mono> = v.keys().copied().collect();
    for img in &images {
        rows.extend(img.keys().copied());
    }
    rows.sort();
    rows.dedup();
    let ncol = OMEGA_BASIS.len();
    // augmented matrix, one row per canonical monomial
    let mut a: Vec<Vec<Rational>> = rows
        .iter()
        .map(|r| {
            let mut row: Vec<Rational> = images.iter().map(|img| img.get(r).cloned().unwrap_or_else(Rational::zero)).collect();
            row.push(v.get(r).cloned().unwrap_or_else(Rational::zero));
            row
        })
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncol {
        let Some(p) = (r..a.len()).find(|&i| !a[i][c].is_zero()) else { continue };
        a.swap(r, p);
        let inv = Rational::one() / &a[r][c];
        for x in a[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..a.len() {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for k in c..=ncol {
                    let d = &a[r][k] * &f;
                    a[i][k] -= d;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    if a[r..].iter().any(|row| !row[ncol].is_zero()) {
        return None;
    }
    Some(
        pivots
            .iter()
            .enumerate()
            .filter(|(i, _)| !a[*i][ncol].is_zero())
            .map(|(i, &c)| (OMEGA_BASIS[c], a[i][ncol].clone()))
            .collect(),
    )
}

pub fn in_omega_span(m: Mono) -> bool {
    OmegaLetter::from_mono(m).is_some() || express(&canonical_vector(m)).is_some()
}

/// `outer o inner`, where `inner` is integrated from 0 against nothing else,
/// collapsed to single letters through the antiderivative of `inner`.
pub fn resolve_composition(outer: OmegaLetter, inner: Mono) -> Result<LinComb<OmegaWord>, BuildError> {
    let prim = inner
        .primitive_general()
        .ok_or_else(|| BuildError::Unsupported(format!("no algebraic antiderivative for {inner}")))?;
    let mut v: BTreeMap<Mono, Rational> = BTreeMap::new();
    for (q, m) in prim {
        for (k, c) in outer.mono().mul(m).canonical() {
            *v.entry(c).or_insert_with(Rational::zero) += q.clone() * k;
        }
    }
    v.retain(|_, q| !q.is_zero());
    let coords = express(&v).ok_or_else(|| BuildError::Unsupported(format!("{outer} o {inner} leaves the Omega span")))?;
    let mut out = LinComb::new();
    for (l, q) in coords {
        out.add_term(Word::new(vec![l]), CycloQ8::from_rational(q));
    }
    Ok(out)
}

/// Divergences at 0 are at worst logarithmic, which shuffle
/// regularisation removes; power poles must be integrable as nested.
fn regularizable(w: &[Mono]) -> bool {
    let mut ord = 0;
    for m in w.iter().rev() {
        ord = ord.max(0) + m.a + 1;
        if m.a <= -2 && ord <= 0 {
            return false;
        }
    }
    true
}

/// Collapse letters with algebraic antiderivatives that are not Omega forms:
/// innermost ones into their neighbour (or the prefactor), outermost ones
/// by parts.
pub fn simplify(sum: FormSum) -> FormSum {
    let mut cur = sum;
    let mut span_cache: BTreeMap<Mono, bool> = BTreeMap::new();
    let mut in_span = |m: Mono| *span_cache.entry(m).or_insert_with(|| in_omega_span(m));
    loop {
        let mut next = FormSum::new();
        let mut changed = false;
        for ((pf, w), q) in cur {
            if w.is_empty() {
                add_term(&mut next, pf, w, q);
                continue;
            }
            let last = *w.last().unwrap();
            if !in_span(last) {
                if let Some(prim) = last.primitive_general() {
                    let n = w.len();
                    let folded: Vec<(Rational, Mono, Vec<Mono>)> = prim
                        .into_iter()
                        .map(|(c, m)| {
                            if n == 1 {
                                (c, pf.mul(m), Vec::new())
                            } else {
                                let mut nw = w[..n - 1].to_vec();
                                nw[n - 2] = nw[n - 2].mul(m);
                                (c, pf, nw)
                            }
                        })
                        .collect();
                    // splitting a convergent integrand into pieces with power poles at 0 is not progress
                    if folded.iter().all(|(_, _, nw)| regularizable(nw)) {
                        changed = true;
                        for (c, p, nw) in folded {
                            add_term(&mut next, p, nw, &q * c);
                        }
                        continue;
                    }
                }
            }
            let first = w[0];
            if w.len() >= 2 && !in_span(first) {
                if let Some(prim) = first.primitive_general() {
                    // int_0^x D F = P(x) F(x) - int_0^x P G_1 (rest)
                    let ok = prim.iter().all(|(_, m)| {
                        let mut nw = w[1..].to_vec();
                        nw[0] = nw[0].mul(*m);
                        regularizable(&nw)
                    });
                    if ok {
                        changed = true;
                        for (c, m) in prim {
                            add_term(&mut next, pf.mul(m), w[1..].to_vec(), &q * &c);
                            let mut nw = w[1..].to_vec();
                            nw[0] = nw[0].mul(m);
                            add_term(&mut next, pf, nw, -(&q * c));
                        }
                        continue;
                    }
                }
            }
            add_term(&mut next, pf, w, q);
        }
        prune(&mut next);
        cur = next;
        if !changed {
            return cur;
        }
    }
}

/// Expand every letter over canonical monomials; equal functions then have
/// equal keys, so cancellations are exact.
pub fn canonicalize(sum: &FormSum) -> FormSum {
    let mut cache: BTreeMap<Mono, Vec<(Rational, Mono)>> = BTreeMap::new();
    let mut out = FormSum::new();
    for ((pf, w), q) in sum {
        let mut partial: Vec<(Rational, Vec<Mono>)> = vec![(q.clone(), Vec::with_capacity(w.len()))];
        for &l in w {
            let can = cache.entry(l).or_insert_with(|| l.canonical()).clone();
            let mut grown = Vec::with_capacity(partial.len() * can.len());
            for (c, word) in &partial {
                for (k, m) in &can {
                    let mut nw = word.clone();
                    nw.push(*m);
                    grown.push((c * k, nw));
                }
            }
            partial = grown;
        }
        for (c, word) in partial {
            add_term(&mut out, *pf, word, c);
        }
    }
    prune(&mut out);
    out
}

/// Slot-by-slot change of basis from canonical monomials to Omega letters.
/// Fails with the first slot content outside the span.
pub fn to_omega(sum: &FormSum) -> Result<Vec<(Mono, LinComb<OmegaWord>)>, String> {
    let can = canonicalize(sum);
    let mut by_pf: BTreeMap<Mono, BTreeMap<Vec<Mono>, Rational>> = BTreeMap::new();
    for ((pf, w), q) in can {
        by_pf.entry(pf).or_default().insert(w, q);
    }
    let mut out = Vec::new();
    for (pf, words) in by_pf {
        let solved = solve(words)?;
        let mut lc = LinComb::new();
        for (w, q) in solved {
            if !q.is_zero() {
                lc.add_term(Word::new(w), CycloQ8::from_rational(q));
            }
        }
        if !lc.is_empty() {
            out.push((pf, lc));
        }
    }
    Ok(out)
}

fn solve(words: BTreeMap<Vec<Mono>, Rational>) -> Result<BTreeMap<Vec<OmegaLetter>, Rational>, String> {
    let mut out: BTreeMap<Vec<OmegaLetter>, Rational> = BTreeMap::new();
    let mut by_rest: BTreeMap<Vec<Mono>, BTreeMap<Mono, Rational>> = BTreeMap::new();
    for (w, q) in words {
        if w.is_empty() {
            *out.entry(Vec::new()).or_insert_with(Rational::zero) += q;
            continue;
        }
        *by_rest.entry(w[1..].to_vec()).or_default().entry(w[0]).or_insert_with(Rational::zero) += q;
    }
    let mut by_letter: BTreeMap<OmegaLetter, BTreeMap<Vec<Mono>, Rational>> = BTreeMap::new();
    for (rest, v) in by_rest {
        let v: BTreeMap<Mono, Rational> = v.into_iter().filter(|(_, q)| !q.is_zero()).collect();
        let coords = express(&v).ok_or_else(|| {
            let shown: Vec<String> = v.iter().map(|(m, q)| format!("{q}*{m}")).collect();
            format!("letter combination {} is not in the Omega span", shown.join(" + "))
        })?;
        for (l, q) in coords {
            *by_letter.entry(l).or_default().entry(rest.clone()).or_insert_with(Rational::zero) += q;
        }
    }
    for (l, rests) in by_letter {
        for (w, q) in solve(rests)? {
            let mut full = vec![l];
            full.extend(w);
            *out.entry(full).or_insert_with(Rational::zero) += q;
        }
    }
    out.retain(|_, q| !q.is_zero());
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numfield::rat;

    #[test]
    fn omega_letters_are_independent() {
        for l in OMEGA_BASIS {
            let coords = express(&canonical_vector(l.mono())).unwrap();
            assert_eq!(coords, vec![(l, Rational::one())]);
        }
        let w20 = express(&canonical_vector(OmegaLetter::Wm20.mono())).unwrap();
        assert_eq!(w20, vec![(OmegaLetter::W0, rat(1, 1)), (OmegaLetter::Wm2, rat(-1, 1))]);
        // dt/(1+t^2) is an arctangent form
        assert!(!in_omega_span(Mono::new(0, 0, -2)));
    }

    #[test]
    fn resolve_composition_examples() {
        // w[-3] o t dt/(1+t^2)^{3/2} = w[-3] - w[-20] = w[-3] - w[0] + w[-2]
        let r = resolve_composition(OmegaLetter::Wm3, Mono::new(1, 0, -3)).unwrap();
        let mut expect = LinComb::new();
        expect.add_term(Word::new(vec![OmegaLetter::Wm3]), CycloQ8::from_int(1));
        expect.add_term(Word::new(vec![OmegaLetter::W0]), CycloQ8::from_int(-1));
        expect.add_term(Word::new(vec![OmegaLetter::Wm2]), CycloQ8::from_int(1));
        assert_eq!(r, expect);
        // w[-1] o t dt/(1+t^2)^{3/2} = w[-1] - dt/(1+t^2), which is not an Omega combination
        assert!(resolve_composition(OmegaLetter::Wm1, Mono::new(1, 0, -3)).is_err());
        assert!(resolve_composition(OmegaLetter::W1, Mono::new(0, -1, 0)).is_err());
    }

    #[test]
    fn pointwise_composition_check() {
        use crate::forms::UnitPoint;
        // outer(t) * int_0^t inner against the resolved letters, 20 points
        let inner = Mono::new(1, 0, -3);
        let resolved = resolve_composition(OmegaLetter::Wm3, inner).unwrap();
        for k in 1..=20 {
            let t = 0.9 * k as f64 / 20.0;
            // int_0^t u/(1+u^2)^{3/2} by Simpson
            let n = 400;
            let h = t / n as f64;
            let f = |u: f64| u / (1.0 + u * u).powf(1.5);
            let mut s = f(0.0) + f(t);
            for i in 1..n {
                s += if i % 2 == 1 { 4.0 } else { 2.0 } * f(i as f64 * h);
            }
            let inner_int = s * h / 3.0;
            let lhs = OmegaLetter::Wm3.mono().eval(UnitPoint::new(t)) * inner_int;
            let rhs: f64 = resolved
                .iter()
                .map(|(w, c)| crate::evaluator::rational_to_f64(c.as_rational().unwrap()) * w.letters[0].mono().eval(UnitPoint::new(t)))
                .sum();
            assert!((lhs - rhs).abs() < 1e-10, "t={t}");
        }
    }

    #[test]
    fn simplify_collapses_example_four_three() {
        // int w0 w[-2] (-1) + int w0 w[-3] (t dt/(1+t^2)^{3/2})
        let mut s = FormSum::new();
        add_term(&mut s, Mono::ONE, vec![Mono::new(-1, 0, 0), Mono::new(1, 0, -2)], rat(-1, 1));
        add_term(&mut s, Mono::ONE, vec![Mono::new(-1, 0, 0), Mono::new(-1, 0, -1), Mono::new(1, 0, -3)], rat(1, 1));
        let om = to_omega(&simplify(s)).unwrap();
        assert_eq!(om.len(), 1);
        let lc = &om[0].1;
        assert_eq!(lc.len(), 2);
        assert_eq!(lc.get(&Word::new(vec![OmegaLetter::W0, OmegaLetter::Wm3])), CycloQ8::from_int(1));
        assert_eq!(lc.get(&Word::new(vec![OmegaLetter::W0, OmegaLetter::W0])), CycloQ8::from_int(-1));
    }
}
