//! Word algebra over the Omega- and X-alphabets: shuffle product, expansion
//! of letters carrying an added constant, and path reversal.
//!
//! Words are read left to right from the outermost 1-form (integrated up to
//! the upper endpoint) to the innermost one (next to the lower endpoint).

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::forms::Mono;
use crate::numfield::CycloQ8;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WordError {
    #[error("the last letter of an extended word cannot carry an added constant")]
    TrailingConstant,
}

/// Algebraic 1-forms on [0, 1].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum OmegaLetter {
    W0,
    W1,
    Wm1,
    W2,
    Wm2,
    W3,
    Wm3,
    W4,
    W5,
    Wm5,
    W6,
    W20,
    Wm20,
}

impl OmegaLetter {
    pub const ALL: [OmegaLetter; 13] = [
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
        OmegaLetter::W20,
        OmegaLetter::Wm20,
    ];

    /// Signed subscript, e.g. `Wm20 -> -20`.
    pub fn index(self) -> i32 {
        use OmegaLetter::*;
        match self {
            W0 => 0,
            W1 => 1,
            Wm1 => -1,
            W2 => 2,
            Wm2 => -2,
            W3 => 3,
            Wm3 => -3,
            W4 => 4,
            W5 => 5,
            Wm5 => -5,
            W6 => 6,
            W20 => 20,
            Wm20 => -20,
        }
    }

    /// Letter for a signed subscript; `-4` and `-6` name the self-paired forms.
    pub fn from_index(k: i32) -> Option<OmegaLetter> {
        use OmegaLetter::*;
        Some(match k {
            0 => W0,
            1 => W1,
            -1 => Wm1,
            2 => W2,
            -2 => Wm2,
            3 => W3,
            -3 => Wm3,
            4 | -4 => W4,
            5 => W5,
            -5 => Wm5,
            6 | -6 => W6,
            20 => W20,
            -20 => Wm20,
            _ => return None,
        })
    }

    /// Density as t^a (1-t^2)^{b/2} (1+t^2)^{c/2}.
    pub fn mono(self) -> Mono {
        use OmegaLetter::*;
        let (a, b, c) = match self {
            W0 => (-1, 0, 0),
            W1 => (0, -1, 0),
            Wm1 => (0, 0, -1),
            W2 => (1, -2, 0),
            Wm2 => (1, 0, -2),
            W3 => (-1, -1, 0),
            Wm3 => (-1, 0, -1),
            W4 => (1, -1, -1),
            W5 => (1, -1, 0),
            Wm5 => (1, 0, -1),
            W6 => (-1, -1, -1),
            W20 => (-1, -2, 0),
            Wm20 => (-1, 0, -2),
        };
        Mono::new(a, b, c)
    }

    pub fn from_mono(m: Mono) -> Option<OmegaLetter> {
        OmegaLetter::ALL.iter().copied().find(|l| l.mono() == m)
    }

    /// Density behaves like 1/t at the origin.
    pub fn diverges_at_zero(self) -> bool {
        self.mono().a == -1
    }

    /// Density has a non-integrable singularity at t = 1.
    pub fn diverges_at_one(self) -> bool {
        self.mono().b <= -2
    }
}

impl fmt::Display for OmegaLetter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "w[{}]", self.index())
    }
}

/// `dt/t` (pole zero) or `dt/(xi - t)` with xi = mu^e.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum XLetter {
    Zero,
    Root(u8),
}

impl XLetter {
    pub fn root(e: i64) -> XLetter {
        XLetter::Root(e.rem_euclid(8) as u8)
    }

    /// The pole as an exact field element (0 for `Zero`).
    pub fn pole(self) -> CycloQ8 {
        match self {
            XLetter::Zero => CycloQ8::zero(),
            XLetter::Root(e) => CycloQ8::mu_pow(e as i64),
        }
    }

    pub fn exponent(self) -> Option<i64> {
        match self {
            XLetter::Zero => None,
            XLetter::Root(e) => Some(e as i64),
        }
    }
}

impl fmt::Display for XLetter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            XLetter::Zero => "0",
            XLetter::Root(0) => "1",
            XLetter::Root(1) => "mu",
            XLetter::Root(2) => "i",
            XLetter::Root(3) => "mu^3",
            XLetter::Root(4) => "-1",
            XLetter::Root(5) => "mu^5",
            XLetter::Root(6) => "-i",
            XLetter::Root(_) => "mu^7",
        };
        write!(f, "x[{name}]")
    }
}

/// A form plus a constant: the extended letter `(f dt + c)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MixedLetter {
    pub form: OmegaLetter,
    pub added_constant: CycloQ8Ord,
}

impl MixedLetter {
    pub fn plain(form: OmegaLetter) -> Self {
        MixedLetter { form, added_constant: CycloQ8Ord(CycloQ8::zero()) }
    }

    pub fn with_constant(form: OmegaLetter, c: CycloQ8) -> Self {
        MixedLetter { form, added_constant: CycloQ8Ord(c) }
    }
}

/// Total order on field elements (lexicographic on coefficients) so they can
/// sit inside ordered containers.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CycloQ8Ord(pub CycloQ8);

impl PartialOrd for CycloQ8Ord {
    fn partial_cmp(&self, o: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(o))
    }
}

impl Ord for CycloQ8Ord {
    fn cmp(&self, o: &Self) -> std::cmp::Ordering {
        self.0.coeffs().cmp(o.0.coeffs())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word<L> {
    pub letters: Vec<L>,
}

pub type OmegaWord = Word<OmegaLetter>;
pub type XWord = Word<XLetter>;
pub type MixedWord = Word<MixedLetter>;

impl<L> Word<L> {
    pub fn new(letters: Vec<L>) -> Self {
        Word { letters }
    }

    pub fn empty() -> Self {
        Word { letters: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }
}

impl<L: Clone> Word<L> {
    pub fn concat(&self, other: &Word<L>) -> Word<L> {
        let mut v = self.letters.clone();
        v.extend(other.letters.iter().cloned());
        Word { letters: v }
    }

    pub fn prefixed(&self, l: L) -> Word<L> {
        let mut v = Vec::with_capacity(self.len() + 1);
        v.push(l);
        v.extend(self.letters.iter().cloned());
        Word { letters: v }
    }

    pub fn suffixed(&self, l: L) -> Word<L> {
        let mut v = self.letters.clone();
        v.push(l);
        Word { letters: v }
    }
}

impl<L: fmt::Display> fmt::Display for Word<L> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return f.write_str("1");
        }
        for (i, l) in self.letters.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

/// Finitely supported formal combination with coefficients in Q(mu).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinComb<W: Ord> {
    terms: BTreeMap<W, CycloQ8>,
}

impl<W: Ord> Default for LinComb<W> {
    fn default() -> Self {
        LinComb { terms: BTreeMap::new() }
    }
}

impl<W: Ord + Clone> LinComb<W> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn single(w: W, c: CycloQ8) -> Self {
        let mut l = Self::new();
        l.add_term(w, c);
        l
    }

    pub fn unit(w: W) -> Self {
        Self::single(w, CycloQ8::one())
    }

    pub fn add_term(&mut self, w: W, c: CycloQ8) {
        if c.is_zero() {
            return;
        }
        let remove = {
            let e = self.terms.entry(w.clone()).or_default();
            *e += &c;
            e.is_zero()
        };
        if remove {
            self.terms.remove(&w);
        }
    }

    pub fn add_assign(&mut self, other: &LinComb<W>) {
        for (w, c) in &other.terms {
            self.add_term(w.clone(), c.clone());
        }
    }

    pub fn add_scaled(&mut self, other: &LinComb<W>, k: &CycloQ8) {
        for (w, c) in &other.terms {
            self.add_term(w.clone(), c * k);
        }
    }

    pub fn scaled(&self, k: &CycloQ8) -> LinComb<W> {
        let mut out = LinComb::new();
        out.add_scaled(self, k);
        out
    }

    pub fn get(&self, w: &W) -> CycloQ8 {
        self.terms.get(w).cloned().unwrap_or_default()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&W, &CycloQ8)> {
        self.terms.iter()
    }

    pub fn map_words<V: Ord + Clone>(&self, f: impl Fn(&W) -> V) -> LinComb<V> {
        let mut out = LinComb::new();
        for (w, c) in &self.terms {
            out.add_term(f(w), c.clone());
        }
        out
    }
}

impl<L: Ord + Clone> LinComb<Word<L>> {
    /// Concatenation product extended bilinearly.
    pub fn concat(&self, other: &LinComb<Word<L>>) -> LinComb<Word<L>> {
        let mut out = LinComb::new();
        for (u, a) in self.iter() {
            for (v, b) in other.iter() {
                out.add_term(u.concat(v), a * b);
            }
        }
        out
    }

    pub fn shuffle_with(&self, other: &LinComb<Word<L>>) -> LinComb<Word<L>> {
        let mut out = LinComb::new();
        for (u, a) in self.iter() {
            for (v, b) in other.iter() {
                out.add_scaled(&shuffle(u, v), &(a * b));
            }
        }
        out
    }

    pub fn max_len(&self) -> usize {
        self.iter().map(|(w, _)| w.len()).max().unwrap_or(0)
    }
}

impl<W: Ord + fmt::Display> fmt::Display for LinComb<W> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (w, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str("\n")?;
            }
            write!(f, "({}) {}", c.compact(), w)?;
        }
        Ok(())
    }
}

/// Sum over all interleavings of `w1` and `w2` that keep each word's order.
pub fn shuffle<L: Ord + Clone>(w1: &Word<L>, w2: &Word<L>) -> LinComb<Word<L>> {
    let mut memo: BTreeMap<(usize, usize), LinComb<Word<L>>> = BTreeMap::new();
    shuffle_rec(&w1.letters, &w2.letters, 0, 0, &mut memo)
}

fn shuffle_rec<L: Ord + Clone>(
    a: &[L],
    b: &[L],
    i: usize,
    j: usize,
    memo: &mut BTreeMap<(usize, usize), LinComb<Word<L>>>,
) -> LinComb<Word<L>> {
    if let Some(r) = memo.get(&(i, j)) {
        return r.clone();
    }
    let r = if i == a.len() {
        LinComb::unit(Word::new(b[j..].to_vec()))
    } else if j == b.len() {
        LinComb::unit(Word::new(a[i..].to_vec()))
    } else {
        let mut out = LinComb::new();
        for (w, c) in shuffle_rec(a, b, i + 1, j, memo).iter() {
            out.add_term(w.prefixed(a[i].clone()), c.clone());
        }
        for (w, c) in shuffle_rec(a, b, i, j + 1, memo).iter() {
            out.add_term(w.prefixed(b[j].clone()), c.clone());
        }
        out
    };
    memo.insert((i, j), r.clone());
    r
}

/// Expand `(f + c) o rest = f o rest + c * rest` until only plain letters remain.
pub fn expand_mixed(w: &MixedWord) -> Result<LinComb<OmegaWord>, WordError> {
    let n = w.len();
    if n == 0 {
        return Ok(LinComb::unit(Word::empty()));
    }
    if !w.letters[n - 1].added_constant.0.is_zero() {
        return Err(WordError::TrailingConstant);
    }
    let mut acc: LinComb<OmegaWord> = LinComb::unit(Word::new(vec![w.letters[n - 1].form]));
    for l in w.letters[..n - 1].iter().rev() {
        let mut next = LinComb::new();
        for (u, c) in acc.iter() {
            next.add_term(u.prefixed(l.form), c.clone());
        }
        if !l.added_constant.0.is_zero() {
            next.add_scaled(&acc, &l.added_constant.0);
        }
        acc = next;
    }
    Ok(acc)
}

/// Integral over the reversed path: `int_p^q w = sign * int_q^p reversed(w)`.
pub fn reverse_path<L: Clone>(w: &Word<L>) -> (i32, Word<L>) {
    let sign = if w.len() % 2 == 0 { 1 } else { -1 };
    let mut v = w.letters.clone();
    v.reverse();
    (sign, Word::new(v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn wd(s: &str) -> Word<char> {
        Word::new(s.chars().collect())
    }

    fn int(n: i64) -> CycloQ8 {
        CycloQ8::from_int(n)
    }

    #[test]
    fn shuffle_examples() {
        let s = shuffle(&wd("ab"), &wd("c"));
        assert_eq!(s.len(), 3);
        for w in ["abc", "acb", "cab"] {
            assert_eq!(s.get(&wd(w)), int(1));
        }
        let t = shuffle(&wd("a"), &wd("a"));
        assert_eq!(t.len(), 1);
        assert_eq!(t.get(&wd("aa")), int(2));
    }

    #[test]
    fn shuffle_with_empty_word() {
        let s = shuffle(&wd(""), &wd("xy"));
        assert_eq!(s, LinComb::unit(wd("xy")));
    }

    #[test]
    fn expand_mixed_examples() {
        use OmegaLetter::*;
        let w = Word::new(vec![MixedLetter::with_constant(W0, int(1)), MixedLetter::plain(Wm3)]);
        let e = expand_mixed(&w).unwrap();
        assert_eq!(e.len(), 2);
        assert_eq!(e.get(&Word::new(vec![W0, Wm3])), int(1));
        assert_eq!(e.get(&Word::new(vec![Wm3])), int(1));

        let plain = Word::new(vec![MixedLetter::plain(W1), MixedLetter::plain(W4)]);
        assert_eq!(expand_mixed(&plain).unwrap(), LinComb::unit(Word::new(vec![W1, W4])));

        // (f+1)(g+1)h -> fgh + fh + gh + h
        let w = Word::new(vec![
            MixedLetter::with_constant(W1, int(1)),
            MixedLetter::with_constant(W2, int(1)),
            MixedLetter::plain(W4),
        ]);
        let e = expand_mixed(&w).unwrap();
        assert_eq!(e.len(), 4);
        for v in [vec![W1, W2, W4], vec![W1, W4], vec![W2, W4], vec![W4]] {
            assert_eq!(e.get(&Word::new(v)), int(1));
        }
    }

    #[test]
    fn expand_mixed_rejects_trailing_constant() {
        let w = Word::new(vec![MixedLetter::with_constant(OmegaLetter::W1, int(2))]);
        assert_eq!(expand_mixed(&w), Err(WordError::TrailingConstant));
    }

    #[test]
    fn reverse_path_examples() {
        let w = Word::new(vec![XLetter::root(4), XLetter::root(0)]);
        let (s, r) = reverse_path(&w);
        assert_eq!(s, 1);
        assert_eq!(r.letters, vec![XLetter::root(0), XLetter::root(4)]);
        let (s1, r1) = reverse_path(&Word::new(vec![XLetter::Zero]));
        assert_eq!((s1, r1.letters), (-1, vec![XLetter::Zero]));
    }

    #[test]
    fn rendering() {
        use OmegaLetter::*;
        assert_eq!(Word::new(vec![Wm2, W4, W1]).to_string(), "w[-2] w[4] w[1]");
        assert_eq!(Word::new(vec![XLetter::root(3), XLetter::Zero]).to_string(), "x[mu^3] x[0]");
    }

    #[test]
    fn omega_index_roundtrip_and_pairing() {
        for l in OmegaLetter::ALL {
            assert_eq!(OmegaLetter::from_index(l.index()), Some(l));
            assert_eq!(OmegaLetter::from_mono(l.mono()), Some(l));
        }
        assert_eq!(OmegaLetter::from_index(-4), Some(OmegaLetter::W4));
        assert_eq!(OmegaLetter::from_index(-6), Some(OmegaLetter::W6));
    }

    fn arb_word() -> impl Strategy<Value = Word<u8>> {
        prop::collection::vec(0u8..4, 0..=6).prop_map(Word::new)
    }

    fn arb_short_word() -> impl Strategy<Value = Word<u8>> {
        prop::collection::vec(0u8..4, 0..=3).prop_map(Word::new)
    }

    fn binom(n: usize, k: usize) -> i64 {
        (0..k).fold(1i64, |acc, i| acc * (n - i) as i64 / (i as i64 + 1))
    }

    proptest! {
        #[test]
        fn shuffle_commutative(u in arb_word(), v in arb_word()) {
            prop_assert_eq!(shuffle(&u, &v), shuffle(&v, &u));
        }

        #[test]
        fn shuffle_associative(u in arb_short_word(), v in arb_short_word(), w in arb_short_word()) {
            let l = LinComb::unit(u.clone()).shuffle_with(&LinComb::unit(v.clone())).shuffle_with(&LinComb::unit(w.clone()));
            let r = LinComb::unit(u).shuffle_with(&LinComb::unit(v).shuffle_with(&LinComb::unit(w)));
            prop_assert_eq!(l, r);
        }

        #[test]
        fn shuffle_term_count(u in arb_word(), v in arb_word()) {
            let s = shuffle(&u, &v);
            let total = s.iter().fold(CycloQ8::zero(), |acc, (_, c)| acc + c);
            prop_assert_eq!(total, int(binom(u.len() + v.len(), u.len())));
        }

        #[test]
        fn reverse_path_involution(u in arb_word()) {
            let (s1, r1) = reverse_path(&u);
            let (s2, r2) = reverse_path(&r1);
            prop_assert_eq!(s1 * s2, 1);
            prop_assert_eq!(r2, u);
        }
    }
}
