//! Letter-rewrite tables taking Omega-words to X-words over the 8th roots of
//! unity, with the matching endpoint maps.
//!
//! `Level8` is the substitution `t -> sqrt2 u / sqrt(1 + u^4)` (a path from 0
//! to `t(x)`); `Cayley` is `t -> i (1 - u^2)/(1 + u^2)`, which carries the
//! segment [0, x] onto the unit-circle arc from 1 to `lambda(x)`.

use std::fmt;

use num_complex::Complex;
use thiserror::Error;

use crate::evaluator::{PathSpec, Segment};
use crate::numfield::CycloQ8;
use crate::scalar::cplx::{self, C};
use crate::scalar::Real;
use crate::words::{LinComb, OmegaLetter, OmegaWord, Word, XLetter, XWord};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum TableName {
    Level8,
    Cayley,
}

impl fmt::Display for TableName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TableName::Level8 => "LEVEL8",
            TableName::Cayley => "CAYLEY",
        })
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TransformError {
    #[error("letter {letter} has no image under the {table} substitution")]
    OutsideDomain { table: TableName, letter: OmegaLetter },
    #[error("endpoint {0} outside [0, 1]")]
    EndpointRange(f64),
}

/// Image of one letter: a combination of single X-letters.
pub type LetterImage = LinComb<XWord>;

/// A rewrite table: letter images plus the endpoint map.
#[derive(Clone, Debug)]
pub struct RewriteTable {
    pub name: TableName,
    entries: Vec<(OmegaLetter, LetterImage)>,
}

fn xl(l: XLetter) -> XWord {
    Word::new(vec![l])
}

fn q(n: i64, d: i64) -> CycloQ8 {
    CycloQ8::from_frac(n, d)
}

/// The four primitive 8th roots `mu_j = mu^{2j-1}` as exponents.
const MU_J: [i64; 4] = [1, 3, 5, 7];

fn level8_entries() -> Vec<(OmegaLetter, LetterImage)> {
    use OmegaLetter::*;
    let sum_mu = |coef: &dyn Fn(i64) -> CycloQ8| {
        let mut lc = LinComb::new();
        for e in MU_J {
            lc.add_term(xl(XLetter::root(e)), coef(e));
        }
        lc
    };
    let quarter_sqrt2 = CycloQ8::sqrt2().scale(&crate::numfield::rat(1, 4));
    let half = |_: i64| q(1, 2);
    let mut w0 = sum_mu(&half);
    w0.add_term(xl(XLetter::Zero), CycloQ8::one());
    let w1 = sum_mu(&|e| &quarter_sqrt2 * &(CycloQ8::mu_pow(e) + CycloQ8::mu_pow(3 * e)));
    let wm1 = sum_mu(&|e| &quarter_sqrt2 * &(CycloQ8::mu_pow(e) - CycloQ8::mu_pow(3 * e)));
    let mut w2 = sum_mu(&|_| q(-1, 2));
    w2.add_term(xl(XLetter::root(0)), CycloQ8::one());
    w2.add_term(xl(XLetter::root(4)), CycloQ8::one());
    let mut wm2 = sum_mu(&half);
    wm2.add_term(xl(XLetter::root(2)), q(-1, 1));
    wm2.add_term(xl(XLetter::root(6)), q(-1, 1));
    let w4 = sum_mu(&|e| CycloQ8::mu_pow(2 * e).scale(&crate::numfield::rat(1, 2)));
    // w(+-20) = w0 +- w(+-2)
    let mut w20 = w0.clone();
    w20.add_assign(&w2);
    let mut wm20 = w0.clone();
    wm20.add_scaled(&wm2, &q(-1, 1));
    vec![(W0, w0), (W1, w1), (Wm1, wm1), (W2, w2), (Wm2, wm2), (W4, w4), (W20, w20), (Wm20, wm20)]
}

/// `y = x_{-i} + x_i - x_{-1} - x_1`.
pub fn cayley_y() -> LetterImage {
    let mut lc = LinComb::new();
    lc.add_term(xl(XLetter::root(6)), CycloQ8::one());
    lc.add_term(xl(XLetter::root(2)), CycloQ8::one());
    lc.add_term(xl(XLetter::root(4)), q(-1, 1));
    lc.add_term(xl(XLetter::root(0)), q(-1, 1));
    lc
}

/// `z = -a - x_{-i} - x_i`.
pub fn cayley_z() -> LetterImage {
    let mut lc = LinComb::new();
    lc.add_term(xl(XLetter::Zero), q(-1, 1));
    lc.add_term(xl(XLetter::root(6)), q(-1, 1));
    lc.add_term(xl(XLetter::root(2)), q(-1, 1));
    lc
}

/// `d_{xi, xi'} = x_xi - x_xi'` for root exponents.
pub fn cayley_d(e: i64, f: i64) -> LetterImage {
    let mut lc = LinComb::new();
    lc.add_term(xl(XLetter::root(e)), CycloQ8::one());
    lc.add_term(xl(XLetter::root(f)), q(-1, 1));
    lc
}

/// `c = 2 x_{-1} - x_i - x_{-i}`.
pub fn cayley_c() -> LetterImage {
    let mut lc = LinComb::new();
    lc.add_term(xl(XLetter::root(4)), q(2, 1));
    lc.add_term(xl(XLetter::root(2)), q(-1, 1));
    lc.add_term(xl(XLetter::root(6)), q(-1, 1));
    lc
}

/// `e = x_0 + 2 x_{-1}`.
pub fn cayley_e() -> LetterImage {
    let mut lc = LinComb::new();
    lc.add_term(xl(XLetter::Zero), CycloQ8::one());
    lc.add_term(xl(XLetter::root(4)), q(2, 1));
    lc
}

fn cayley_entries() -> Vec<(OmegaLetter, LetterImage)> {
    use OmegaLetter::*;
    let y = cayley_y();
    let z = cayley_z();
    let mut y_plus_z = y.clone();
    y_plus_z.add_assign(&z);
    vec![
        (W0, y),
        (Wm1, cayley_d(2, 6)),
        (Wm2, z.scaled(&q(-1, 1))),
        (Wm3, cayley_d(4, 0)),
        (Wm20, y_plus_z),
    ]
}

impl RewriteTable {
    pub fn new(name: TableName) -> Self {
        let entries = match name {
            TableName::Level8 => level8_entries(),
            TableName::Cayley => cayley_entries(),
        };
        RewriteTable { name, entries }
    }

    pub fn level8() -> Self {
        Self::new(TableName::Level8)
    }

    pub fn cayley() -> Self {
        Self::new(TableName::Cayley)
    }

    pub fn domain(&self) -> impl Iterator<Item = OmegaLetter> + '_ {
        self.entries.iter().map(|(l, _)| *l)
    }

    pub fn image(&self, l: OmegaLetter) -> Result<&LetterImage, TransformError> {
        self.entries
            .iter()
            .find(|(k, _)| *k == l)
            .map(|(_, v)| v)
            .ok_or(TransformError::OutsideDomain { table: self.name, letter: l })
    }

    /// Exact start point of the image path (0 or 1).
    pub fn start(&self) -> CycloQ8 {
        match self.name {
            TableName::Level8 => CycloQ8::zero(),
            TableName::Cayley => CycloQ8::one(),
        }
    }

    /// Image of the endpoint `x`.
    pub fn endpoint<R: Real>(&self, x: R) -> Result<C<R>, TransformError> {
        match self.name {
            TableName::Level8 => endpoint_level8(x).map(cplx::re),
            TableName::Cayley => endpoint_cayley(x),
        }
    }

    /// Exact endpoint when `x = 1`.
    pub fn endpoint_at_one(&self) -> CycloQ8 {
        match self.name {
            TableName::Level8 => CycloQ8::one(),
            TableName::Cayley => CycloQ8::mu(),
        }
    }

    /// The image of the segment [0, x]: a chord from 0 or an arc from 1.
    pub fn path<R: Real>(&self, x: R) -> Result<PathSpec<R>, TransformError> {
        check_range(x)?;
        Ok(match self.name {
            TableName::Level8 => PathSpec::from_zero(cplx::re(endpoint_level8(x)?)),
            TableName::Cayley => PathSpec { segments: vec![Segment::Arc { from: R::zero(), to: x.atan2(R::one()) }] },
        })
    }

    /// Density identity at a point of the image path: returns
    /// `(omega(t(u)) t'(u), image density at u)`.
    pub fn pullback_densities(&self, l: OmegaLetter, u: Complex<f64>) -> Result<(Complex<f64>, Complex<f64>), TransformError> {
        let img = self.image(l)?;
        let (t, dt) = match self.name {
            TableName::Level8 => {
                let r = (1.0 + u.powi(4)).sqrt();
                let t = u * 2f64.sqrt() / r;
                // d/du sqrt2 u (1+u^4)^{-1/2} = sqrt2 (1 - u^4) / (1+u^4)^{3/2}
                (t, (1.0 - u.powi(4)) * 2f64.sqrt() / (r * r * r))
            }
            TableName::Cayley => {
                let i = Complex::new(0.0, 1.0);
                let d = 1.0 + u * u;
                (i * (1.0 - u * u) / d, -i * 4.0 * u / (d * d))
            }
        };
        let m = l.mono();
        let one = Complex::new(1.0, 0.0);
        let lhs = t.powi(m.a) * (one - t * t).powf(m.b as f64 / 2.0) * (one + t * t).powf(m.c as f64 / 2.0) * dt;
        let mut rhs = Complex::new(0.0, 0.0);
        for (w, c) in img.iter() {
            let pole = w.letters[0];
            let dens = match pole {
                XLetter::Zero => one / u,
                XLetter::Root(e) => one / (CycloQ8::mu_pow(e as i64).embed::<f64>() - u),
            };
            rhs += c.embed::<f64>() * dens;
        }
        Ok((lhs, rhs))
    }
}

fn check_range<R: Real>(x: R) -> Result<(), TransformError> {
    if x < R::zero() || x > R::one() {
        return Err(TransformError::EndpointRange(x.to_f64_lossy()));
    }
    Ok(())
}

/// The `t` in [0, 1] with `sqrt2 t / sqrt(1 + t^4) = x`.
pub fn endpoint_level8<R: Real>(x: R) -> Result<R, TransformError> {
    check_range(x)?;
    if x.is_zero() {
        return Ok(R::zero());
    }
    // t^2 = (1 - sqrt(1 - x^4))/x^2 = x^2 / (1 + sqrt(1 - x^4)); the second
    // form has no cancellation anywhere on [0, 1]
    let x2 = x * x;
    let one_minus_x4 = (R::one() - x2) * (R::one() + x2);
    Ok((x2 / (R::one() + one_minus_x4.sqrt())).sqrt())
}

/// `lambda(x) = sqrt((1 + i x)/(1 - i x)) = exp(i atan x)`.
pub fn endpoint_cayley<R: Real>(x: R) -> Result<C<R>, TransformError> {
    check_range(x)?;
    Ok(cplx::cis(x.atan2(R::one())))
}

/// Rewrite one word letter by letter; returns the X-combination and the
/// mapped endpoint.
pub fn rewrite_word<R: Real>(
    table: &RewriteTable,
    w: &OmegaWord,
    x: R,
) -> Result<(LinComb<XWord>, C<R>), TransformError> {
    let end = table.endpoint(x)?;
    Ok((rewrite_letters(table, w)?, end))
}

/// Multilinear expansion of the letter images.
pub fn rewrite_letters(table: &RewriteTable, w: &OmegaWord) -> Result<LinComb<XWord>, TransformError> {
    let mut acc: LinComb<XWord> = LinComb::unit(Word::empty());
    for &l in &w.letters {
        acc = acc.concat(table.image(l)?);
    }
    Ok(acc)
}

pub fn rewrite_lincomb(table: &RewriteTable, lc: &LinComb<OmegaWord>) -> Result<LinComb<XWord>, TransformError> {
    let mut out = LinComb::new();
    for (w, c) in lc.iter() {
        out.add_scaled(&rewrite_letters(table, w)?, c);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::evaluator::{eval_omega_word, eval_x_lincomb, EvalConfig};
    use crate::numfield::rat;
    use crate::scalar::Dd;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use OmegaLetter::*;

    #[test]
    fn level8_density_identities() {
        let tab = RewriteTable::level8();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for l in tab.domain().collect::<Vec<_>>() {
            for _ in 0..20 {
                let u = Complex::new(rng.gen_range(0.05..0.95), 0.0);
                let (a, b) = tab.pullback_densities(l, u).unwrap();
                assert!((a - b).norm() < 1e-12 * (1.0 + a.norm()), "{l}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn cayley_density_identities_on_the_circle() {
        let tab = RewriteTable::cayley();
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for l in tab.domain().collect::<Vec<_>>() {
            for _ in 0..20 {
                let th: f64 = rng.gen_range(0.02..0.78);
                let u = Complex::new(th.cos(), th.sin());
                let (a, b) = tab.pullback_densities(l, u).unwrap();
                assert!((a - b).norm() < 1e-12 * (1.0 + a.norm()), "{l}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn level8_integrals_match_over_zero_x() {
        let tab = RewriteTable::level8();
        let cfg = EvalConfig::default();
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for l in [W1, Wm1, W2, Wm2, W4] {
            for _ in 0..20 {
                let x: f64 = rng.gen_range(0.05..0.95);
                let w = Word::new(vec![l]);
                let lhs = eval_omega_word(&w, x, &cfg).unwrap().re();
                let (img, _) = rewrite_word(&tab, &w, x).unwrap();
                let rhs = eval_x_lincomb(&img, &tab.path(x).unwrap(), &cfg).unwrap().value;
                assert!((lhs - rhs.re).abs() < 1e-10 && rhs.im.abs() < 1e-10, "{l} x={x}");
            }
        }
    }

    #[test]
    fn length_two_words_both_tables() {
        let cfg = EvalConfig::default();
        let x = Dd::from_f64(0.7);
        let l8 = RewriteTable::level8();
        for pair in [[W4, W1], [Wm1, Wm2], [W2, Wm1], [W0, W4]] {
            let w = Word::new(pair.to_vec());
            let lhs = eval_omega_word(&w, x, &cfg).unwrap().re();
            let (img, _) = rewrite_word(&l8, &w, x).unwrap();
            let rhs = eval_x_lincomb(&img, &l8.path(x).unwrap(), &cfg).unwrap().value;
            assert!((lhs - rhs.re).abs().to_f64() < 1e-9, "{w}");
        }
        let cy = RewriteTable::cayley();
        for pair in [[Wm1, Wm2], [Wm2, Wm1], [W0, Wm1], [Wm3, Wm2], [Wm20, Wm1]] {
            let w = Word::new(pair.to_vec());
            let lhs = eval_omega_word(&w, x, &cfg).unwrap().re();
            let (img, _) = rewrite_word(&cy, &w, x).unwrap();
            let rhs = eval_x_lincomb(&img, &cy.path(x).unwrap(), &cfg).unwrap().value;
            assert!((lhs - rhs.re).abs().to_f64() < 1e-9 && rhs.im.abs().to_f64() < 1e-9, "{w}");
        }
    }

    #[test]
    fn level8_coefficients_are_exact() {
        let tab = RewriteTable::level8();
        for l in [W0, W2, Wm2] {
            assert!(tab.image(l).unwrap().iter().all(|(_, c)| c.as_rational().is_some()));
        }
        // (sqrt2/4) Z[mu] and (1/2) Z[mu]
        let integral = |c: &CycloQ8| c.coeffs().iter().all(|r| r.is_integer());
        let inv = CycloQ8::sqrt2().scale(&rat(1, 4)).inv().unwrap();
        for l in [W1, Wm1] {
            assert!(tab.image(l).unwrap().iter().all(|(_, c)| integral(&(c * &inv))));
        }
        assert!(tab.image(W4).unwrap().iter().all(|(_, c)| integral(&c.scale(&rat(2, 1)))));
    }

    #[test]
    fn omega4_omega1_expansion_shape() {
        let tab = RewriteTable::level8();
        let (img, end) = rewrite_word(&tab, &Word::new(vec![W4, W1]), 1.0f64).unwrap();
        assert!((end.re - 1.0).abs() < 1e-15);
        assert_eq!(img.len(), 16);
        let quarter_sqrt2 = CycloQ8::sqrt2().scale(&rat(1, 4));
        for j in MU_J {
            for k in MU_J {
                let w = Word::new(vec![XLetter::root(j), XLetter::root(k)]);
                let expect = CycloQ8::mu_pow(2 * j).scale(&rat(1, 2))
                    * (&quarter_sqrt2 * &(CycloQ8::mu_pow(k) + CycloQ8::mu_pow(3 * k)));
                assert_eq!(img.get(&w), expect);
            }
        }
    }

    #[test]
    fn cayley_example_word_becomes_y_power_c() {
        let tab = RewriteTable::cayley();
        let mut lc = LinComb::new();
        lc.add_term(Word::new(vec![W0, Wm3]), CycloQ8::one());
        lc.add_term(Word::new(vec![W0, W0]), q(-1, 1));
        let img = rewrite_lincomb(&tab, &lc).unwrap();
        // d_{-1,1} - y = 2 x_{-1} - x_i - x_{-i} = c
        let expect = cayley_y().concat(&cayley_c());
        assert_eq!(img, expect);
        let end = endpoint_cayley(1.0f64).unwrap();
        assert!((end - CycloQ8::mu().embed::<f64>()).norm() < 1e-15);
    }

    #[test]
    fn domain_violations_name_the_letter() {
        for tab in [RewriteTable::level8(), RewriteTable::cayley()] {
            for l in [Wm5, W6] {
                let e = rewrite_word(&tab, &Word::new(vec![W0, l]), 0.5f64).unwrap_err();
                assert_eq!(e, TransformError::OutsideDomain { table: tab.name, letter: l });
            }
        }
        let (img, end) = rewrite_word(&RewriteTable::cayley(), &Word::empty(), 0.0f64).unwrap();
        assert_eq!(img, LinComb::unit(Word::empty()));
        assert!((end.re - 1.0).abs() < 1e-16);
    }

    #[test]
    fn endpoints() {
        assert_eq!(endpoint_level8(1.0f64).unwrap(), 1.0);
        assert_eq!(endpoint_level8(0.0f64).unwrap(), 0.0);
        let x = Dd::from_f64(3.0).sqrt() / Dd::from_f64(2.0);
        let t = endpoint_level8(x).unwrap();
        let c3 = ((Dd::from_f64(4.0) - Dd::from_f64(7.0).sqrt()) / Dd::from_f64(3.0)).sqrt();
        assert!((t - c3).abs().to_f64() < 1e-30);
        // the defining relation
        let back = Dd::from_f64(2.0).sqrt() * t / (Dd::ONE + t.powi(4)).sqrt();
        assert!((back - x).abs().to_f64() < 1e-30);
        let lam = endpoint_cayley(0.5f64).unwrap();
        assert!((lam.norm() - 1.0).abs() < 1e-15);
        let sq = lam * lam;
        let expect = Complex::new(1.0, 0.5) / Complex::new(1.0, -0.5);
        assert!((sq - expect).norm() < 1e-15);
        assert!((lam.arg() - 0.5 * (4.0f64 / 3.0).atan()).abs() < 1e-15);
        assert!(endpoint_cayley(1.5f64).is_err());
    }
}
