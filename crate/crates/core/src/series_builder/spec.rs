//! Series descriptions and their command-line syntax.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::BuildError;
use crate::scalar::Real;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Family {
    /// `b_n(x) = 4^n x^{2n} / C(2n, n)`.
    InverseBinomialB,
    /// `a_n(x) = C(2n, n) x^{2n} / 4^n`.
    BinomialA,
}

/// Denominator `l(n)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Kernel {
    #[serde(rename = "2n")]
    Even,
    #[serde(rename = "2n+1")]
    OddPlus,
    #[serde(rename = "2n-1")]
    OddMinus,
}

impl Kernel {
    pub fn offset(self) -> i64 {
        match self {
            Kernel::Even => 0,
            Kernel::OddPlus => 1,
            Kernel::OddMinus => -1,
        }
    }

    pub fn at(self, n: i64) -> i64 {
        2 * n + self.offset()
    }

    /// Boundary under which the recursion for this kernel closes.
    pub fn natural(self) -> Strictness {
        match self {
            Kernel::OddPlus => Strictness::Ge,
            _ => Strictness::Gt,
        }
    }

    fn label(self) -> &'static str {
        match self {
            Kernel::Even => "2n",
            Kernel::OddPlus => "2n+1",
            Kernel::OddMinus => "2n-1",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Strictness {
    #[serde(rename = ">")]
    Gt,
    #[serde(rename = ">=")]
    Ge,
}

impl Strictness {
    pub fn is_strict(self) -> bool {
        self == Strictness::Gt
    }
}

/// Per-index signs `eta_j^{n_j}`, or a single `eta^{n_1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Signs {
    PerIndex(Vec<i8>),
    Global(i8),
}

/// Real argument: `(p/q) sqrt(radicand)` exactly, or a float.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum XArg {
    Exact { p: i64, q: i64, radicand: i64 },
    Float(f64),
}

impl XArg {
    pub fn one() -> Self {
        XArg::Exact { p: 1, q: 1, radicand: 1 }
    }

    pub fn value<R: Real>(&self) -> R {
        match *self {
            XArg::Exact { p, q, radicand } => R::of_int(p) * R::of_int(radicand).sqrt() / R::of_int(q),
            XArg::Float(v) => R::of(v),
        }
    }

    pub fn abs_is_one(&self) -> bool {
        match *self {
            XArg::Exact { p, q, radicand } => (p as i128) * (p as i128) * radicand as i128 == (q as i128) * (q as i128),
            XArg::Float(v) => v.abs() == 1.0,
        }
    }

    pub fn abs_le_one(&self) -> bool {
        match *self {
            XArg::Exact { p, q, radicand } => (p as i128) * (p as i128) * radicand as i128 <= (q as i128) * (q as i128),
            XArg::Float(v) => v.abs() <= 1.0,
        }
    }

    pub fn is_zero(&self) -> bool {
        match *self {
            XArg::Exact { p, .. } => p == 0,
            XArg::Float(v) => v == 0.0,
        }
    }
}

impl fmt::Display for XArg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            XArg::Float(v) => write!(f, "{v:?}"),
            XArg::Exact { p, q, radicand } => {
                let num = match (p, radicand) {
                    (p, 1) => p.to_string(),
                    (1, r) => format!("sqrt({r})"),
                    (p, r) => format!("{p}*sqrt({r})"),
                };
                if q == 1 {
                    write!(f, "{num}")
                } else {
                    write!(f, "{num}/{q}")
                }
            }
        }
    }
}

impl FromStr for XArg {
    type Err = String;

    /// `1`, `0.5`, `3/4`, `sqrt(2)/2`, `2*sqrt(3)/5`, or the template
    /// `sqrt(j)/2:j=3`.
    fn from_str(s: &str) -> Result<Self, String> {
        let s = s.trim();
        let s = match s.split_once(':') {
            Some((body, binding)) => {
                let (name, val) = binding.split_once('=').ok_or_else(|| format!("bad binding `{binding}`"))?;
                body.replace(name.trim(), val.trim())
            }
            None => s.to_string(),
        };
        let (num, q) = match s.rsplit_once('/') {
            Some((a, b)) if !b.contains(')') => (a.to_string(), b.trim().parse::<i64>().map_err(|e| format!("denominator: {e}"))?),
            _ => (s.clone(), 1),
        };
        if q <= 0 {
            return Err("denominator must be positive".into());
        }
        let num = num.trim();
        let (p, rad) = if let Some(idx) = num.find("sqrt(") {
            let inner = num[idx + 5..].strip_suffix(')').ok_or("unclosed sqrt(")?;
            let rad = inner.trim().parse::<i64>().map_err(|e| format!("radicand: {e}"))?;
            let coef = num[..idx].trim().trim_end_matches('*').trim();
            let p = match coef {
                "" => 1,
                "-" => -1,
                c => c.parse::<i64>().map_err(|e| format!("coefficient: {e}"))?,
            };
            (p, rad)
        } else if let Ok(p) = num.parse::<i64>() {
            (p, 1)
        } else if q == 1 {
            return num.parse::<f64>().map(XArg::Float).map_err(|e| format!("x: {e}"));
        } else {
            return Err(format!("cannot parse `{s}`"));
        };
        if rad <= 0 {
            return Err("radicand must be positive".into());
        }
        Ok(XArg::Exact { p, q, radicand: rad })
    }
}

/// `sum_{n_1 > n_2 > ... > n_d > tail} c_{n_1}(x) prod eta_j^{n_j} / l_j(n_j)^{s_j}`
/// with each `>` replaceable by `>=` and `c` from the family.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeriesSpec {
    pub family: Family,
    pub s: Vec<u32>,
    pub signs: Signs,
    pub kernels: Vec<Kernel>,
    /// `strictness[j]` relates `n_{j+1}` to the next index (or the tail).
    pub strictness: Vec<Strictness>,
    pub x: XArg,
    /// Evaluate at `i x` instead of `x`.
    #[serde(default)]
    pub imaginary: bool,
    #[serde(default)]
    pub tail_n: u64,
}

impl SeriesSpec {
    /// Inverse-binomial series with kernels `2n`, strict boundaries and
    /// per-index signs: the `sigma(s; eta; x)` family.
    pub fn sigma(s: &[u32], eta: &[i8], x: XArg) -> Self {
        let d = s.len();
        SeriesSpec {
            family: Family::InverseBinomialB,
            s: s.to_vec(),
            signs: Signs::PerIndex(eta.to_vec()),
            kernels: vec![Kernel::Even; d],
            strictness: vec![Strictness::Gt; d],
            x,
            imaginary: false,
            tail_n: 0,
        }
        .normalized()
    }

    /// Natural boundaries for the given kernels.
    pub fn with_kernels(family: Family, s: &[u32], signs: Signs, kernels: &[Kernel], x: XArg) -> Self {
        SeriesSpec {
            family,
            s: s.to_vec(),
            signs,
            kernels: kernels.to_vec(),
            strictness: kernels.iter().map(|k| k.natural()).collect(),
            x,
            imaginary: false,
            tail_n: 0,
        }
        .normalized()
    }

    /// Depth one makes global and per-index signs coincide; store per-index.
    pub fn normalized(mut self) -> Self {
        if self.s.len() == 1 {
            if let Signs::Global(e) = self.signs {
                self.signs = Signs::PerIndex(vec![e]);
            }
        }
        self
    }

    pub fn depth(&self) -> usize {
        self.s.len()
    }

    pub fn weight(&self) -> u32 {
        self.s.iter().sum()
    }

    /// Signs as written, one per index.
    pub fn etas(&self) -> Vec<i8> {
        match &self.signs {
            Signs::PerIndex(v) => v.clone(),
            Signs::Global(e) => {
                let mut v = vec![1; self.depth()];
                if let Some(first) = v.first_mut() {
                    *first = *e;
                }
                v
            }
        }
    }

    /// Signs of the equivalent series at the real argument `|x|`:
    /// `c_n(i x) = (-1)^n c_n(x)` flips the first.
    pub fn effective_etas(&self) -> Vec<i8> {
        let mut v = self.etas();
        if self.imaginary {
            v[0] = -v[0];
        }
        v
    }

    /// Only the outermost index carries a sign.
    pub fn has_global_signs(&self) -> bool {
        self.etas().iter().skip(1).all(|&e| e == 1)
    }

    /// Smallest admissible value of each index.
    pub fn lower_bounds(&self) -> Vec<u64> {
        let d = self.depth();
        let mut out = vec![0; d];
        let mut below = self.tail_n;
        for j in (0..d).rev() {
            let lb = below + self.strictness[j].is_strict() as u64;
            out[j] = lb;
            below = lb;
        }
        out
    }

    /// The series at the real argument `|x|` with the first sign adjusted.
    pub fn to_real_argument(&self) -> SeriesSpec {
        let mut out = self.clone();
        if self.imaginary {
            out.imaginary = false;
            out.signs = match &self.signs {
                Signs::PerIndex(v) => {
                    let mut v = v.clone();
                    v[0] = -v[0];
                    Signs::PerIndex(v)
                }
                Signs::Global(e) => Signs::Global(-e),
            };
        }
        if let XArg::Exact { p, q, radicand } = out.x {
            out.x = XArg::Exact { p: p.abs(), q, radicand };
        } else if let XArg::Float(v) = out.x {
            out.x = XArg::Float(v.abs());
        }
        out
    }

    /// Shape checks that do not depend on which representation is used.
    pub fn check_shape(&self) -> Result<(), BuildError> {
        let d = self.depth();
        let bad = |m: String| Err(BuildError::InvalidSpec(m));
        if d == 0 {
            return bad("empty composition".into());
        }
        if self.kernels.len() != d || self.strictness.len() != d {
            return bad(format!("composition has {d} entries but {} kernels and {} boundaries", self.kernels.len(), self.strictness.len()));
        }
        if let Some(j) = self.s.iter().position(|&s| s == 0) {
            return bad(format!("s[{}] must be positive", j + 1));
        }
        match &self.signs {
            Signs::PerIndex(v) if v.len() != d => return bad(format!("{} signs for depth {d}", v.len())),
            Signs::PerIndex(v) => {
                if let Some(j) = v.iter().position(|&e| e != 1 && e != -1) {
                    return bad(format!("sign {} at position {} is not +-1", v[j], j + 1));
                }
            }
            Signs::Global(e) if *e != 1 && *e != -1 => return bad(format!("global sign {e} is not +-1")),
            Signs::Global(_) => {}
        }
        if let XArg::Exact { q, radicand, .. } = self.x {
            if q <= 0 || radicand <= 0 {
                return bad("x needs a positive denominator and radicand".into());
            }
        }
        if let XArg::Float(v) = self.x {
            if !v.is_finite() {
                return bad("x is not finite".into());
            }
        }
        if !self.x.abs_le_one() {
            return bad(format!("|x| = |{}| exceeds 1", self.x));
        }
        for (j, (&k, lb)) in self.kernels.iter().zip(self.lower_bounds()).enumerate() {
            if k == Kernel::Even && lb == 0 {
                return bad(format!("index {} can be 0 where the kernel 2n vanishes", j + 1));
            }
        }
        if self.family == Family::InverseBinomialB && self.x.abs_is_one() && self.s[0] == 1 && self.effective_etas()[0] == 1 {
            return Err(BuildError::Divergent("leading pair (s1, eta1) = (1, 1) at |x| = 1".into()));
        }
        Ok(())
    }

    /// Command-line flags reproducing this spec.
    pub fn to_flags(&self) -> String {
        let join = |v: Vec<String>| v.join(",");
        let fam = match self.family {
            Family::InverseBinomialB => "b",
            Family::BinomialA => "a",
        };
        let eta = match &self.signs {
            Signs::PerIndex(v) => join(v.iter().map(|e| format!("{e:+}")).collect()),
            Signs::Global(e) => format!("{e:+}"),
        };
        let mut out = format!(
            "--family {fam} --s {} --eta {eta} --kernels {} --strict {} --x {}",
            join(self.s.iter().map(|s| s.to_string()).collect()),
            join(self.kernels.iter().map(|k| k.label().to_string()).collect()),
            join(self.strictness.iter().map(|s| if s.is_strict() { ">".to_string() } else { ">=".to_string() }).collect()),
            self.x
        );
        if self.tail_n != 0 {
            out.push_str(&format!(" --tail {}", self.tail_n));
        }
        if self.imaginary {
            out.push_str(" --imag");
        }
        out
    }

    /// Parse the flag syntax of [`SeriesSpec::to_flags`]. `--bars 1,0`
    /// marks negative signs the way a bar does in `(2b, 1)`; `--s 2b,1`
    /// carries the bars inline.
    pub fn from_flags(args: &[String]) -> Result<Self, String> {
        let mut family = Family::InverseBinomialB;
        let mut s: Option<Vec<u32>> = None;
        let mut inline_bars: Option<Vec<i8>> = None;
        let mut signs: Option<Signs> = None;
        let mut kernels: Option<Vec<Kernel>> = None;
        let mut strict: Option<Vec<Strictness>> = None;
        let mut x = XArg::one();
        let mut tail = 0u64;
        let mut imaginary = false;
        let mut i = 0;
        while i < args.len() {
            let flag = args[i].as_str();
            if flag == "--imag" {
                imaginary = true;
                i += 1;
                continue;
            }
            let val = args.get(i + 1).ok_or_else(|| format!("argument {}: `{flag}` needs a value", i + 1))?.as_str();
            let at = |what: &str, pos: usize, msg: String| format!("{what}, entry {pos}: {msg}");
            match flag {
                "--family" => {
                    family = match val.to_ascii_lowercase().as_str() {
                        "a" | "binomial_a" => Family::BinomialA,
                        "b" | "inverse_binomial_b" => Family::InverseBinomialB,
                        other => return Err(format!("--family: unknown family `{other}`")),
                    }
                }
                "--s" => {
                    let mut comp = Vec::new();
                    let mut bars = Vec::new();
                    for (k, part) in val.split(',').enumerate() {
                        let part = part.trim();
                        let (num, bar) = match part.strip_suffix('b') {
                            Some(n) => (n, true),
                            None => (part, false),
                        };
                        let v: u32 = num.parse().map_err(|e| at("--s", k + 1, format!("`{part}`: {e}")))?;
                        if v == 0 {
                            return Err(at("--s", k + 1, "must be positive".into()));
                        }
                        comp.push(v);
                        bars.push(if bar { -1 } else { 1 });
                    }
                    if bars.contains(&-1) {
                        inline_bars = Some(bars);
                    }
                    s = Some(comp);
                }
                "--bars" => {
                    let mut v = Vec::new();
                    for (k, part) in val.split(',').enumerate() {
                        v.push(match part.trim() {
                            "1" => -1,
                            "0" => 1,
                            other => return Err(at("--bars", k + 1, format!("expected 0 or 1, got `{other}`"))),
                        });
                    }
                    signs = Some(Signs::PerIndex(v));
                }
                "--eta" => {
                    let mut v = Vec::new();
                    for (k, part) in val.split(',').enumerate() {
                        v.push(match part.trim() {
                            "1" | "+1" | "+" => 1,
                            "-1" | "-" => -1,
                            other => return Err(at("--eta", k + 1, format!("expected +1 or -1, got `{other}`"))),
                        });
                    }
                    signs = Some(if v.len() == 1 { Signs::Global(v[0]) } else { Signs::PerIndex(v) });
                }
                "--kernels" => {
                    let mut v = Vec::new();
                    for (k, part) in val.split(',').enumerate() {
                        v.push(match part.trim() {
                            "2n" => Kernel::Even,
                            "2n+1" => Kernel::OddPlus,
                            "2n-1" => Kernel::OddMinus,
                            other => return Err(at("--kernels", k + 1, format!("unknown kernel `{other}`"))),
                        });
                    }
                    kernels = Some(v);
                }
                "--strict" => {
                    let mut v = Vec::new();
                    for (k, part) in val.split(',').enumerate() {
                        v.push(match part.trim() {
                            ">" => Strictness::Gt,
                            ">=" => Strictness::Ge,
                            other => return Err(at("--strict", k + 1, format!("expected > or >=, got `{other}`"))),
                        });
                    }
                    strict = Some(v);
                }
                "--x" => x = val.parse().map_err(|e| format!("--x: {e}"))?,
                "--tail" => tail = val.parse().map_err(|e| format!("--tail: {e}"))?,
                other => return Err(format!("argument {}: unknown flag `{other}`", i + 1)),
            }
            i += 2;
        }
        let s = s.ok_or("--s is required")?;
        let d = s.len();
        let signs = match (signs, inline_bars) {
            (Some(_), Some(_)) => return Err("give signs either inline in --s or via --bars/--eta".into()),
            (Some(sg), None) => sg,
            (None, Some(b)) => Signs::PerIndex(b),
            (None, None) => Signs::PerIndex(vec![1; d]),
        };
        let kernels = kernels.unwrap_or_else(|| vec![Kernel::Even; d]);
        if kernels.len() != d {
            return Err(format!("--kernels has {} entries, --s has {d}", kernels.len()));
        }
        let strictness = strict.unwrap_or_else(|| kernels.iter().map(|k| k.natural()).collect());
        if strictness.len() != d {
            return Err(format!("--strict has {} entries, --s has {d}", strictness.len()));
        }
        if let Signs::PerIndex(v) = &signs {
            if v.len() != d {
                return Err(format!("{} signs for {d} entries of --s", v.len()));
            }
        }
        Ok(SeriesSpec { family, s, signs, kernels, strictness, x, imaginary, tail_n: tail }.normalized())
    }
}

impl fmt::Display for SeriesSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_flags())
    }
}

impl FromStr for SeriesSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let args: Vec<String> = s.split_whitespace().map(str::to_string).collect();
        SeriesSpec::from_flags(&args)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parses_documented_forms() {
        let a: SeriesSpec = "--family b --s 1,1 --bars 1,1 --x 1".parse().unwrap();
        assert_eq!(a, SeriesSpec::sigma(&[1, 1], &[-1, -1], XArg::one()));
        let b: SeriesSpec = "--family a --s 1,1 --eta -1 --kernels 2n-1,2n".parse().unwrap();
        assert_eq!(b.signs, Signs::Global(-1));
        assert_eq!(b.strictness, vec![Strictness::Gt, Strictness::Gt]);
        let c: SeriesSpec = "--s 2,1 --bars 1,0".parse().unwrap();
        assert_eq!(c.etas(), vec![-1, 1]);
        let d: SeriesSpec = "--s 2b,1".parse().unwrap();
        assert_eq!(d, c);
    }

    #[test]
    fn x_syntax() {
        assert_eq!("sqrt(2)/2".parse::<XArg>().unwrap(), XArg::Exact { p: 1, q: 2, radicand: 2 });
        assert_eq!("sqrt(j)/2:j=3".parse::<XArg>().unwrap(), XArg::Exact { p: 1, q: 2, radicand: 3 });
        assert_eq!("1/2".parse::<XArg>().unwrap(), XArg::Exact { p: 1, q: 2, radicand: 1 });
        assert_eq!("0.25".parse::<XArg>().unwrap(), XArg::Float(0.25));
        assert_eq!("2*sqrt(3)/5".parse::<XArg>().unwrap(), XArg::Exact { p: 2, q: 5, radicand: 3 });
        assert!("sqrt(2".parse::<XArg>().is_err());
        let v: f64 = XArg::Exact { p: 1, q: 2, radicand: 3 }.value();
        assert!((v - 3f64.sqrt() / 2.0).abs() < 1e-16);
    }

    #[test]
    fn malformed_input_names_the_position() {
        let e = "--s 2,x".parse::<SeriesSpec>().unwrap_err();
        assert!(e.contains("entry 2"), "{e}");
        let e = "--s 1,1 --eta +1,0".parse::<SeriesSpec>().unwrap_err();
        assert!(e.contains("--eta, entry 2"), "{e}");
        assert!("--s 1 --bogus 3".parse::<SeriesSpec>().is_err());
        assert!("--s 1,1 --kernels 2n".parse::<SeriesSpec>().is_err());
    }

    #[test]
    fn lower_bounds_accumulate() {
        let mut s = SeriesSpec::with_kernels(
            Family::InverseBinomialB,
            &[1, 1, 1],
            Signs::Global(-1),
            &[Kernel::Even, Kernel::OddPlus, Kernel::Even],
            XArg::one(),
        );
        // n > m >= k > 0
        assert_eq!(s.lower_bounds(), vec![2, 1, 1]);
        s.tail_n = 2;
        assert_eq!(s.lower_bounds(), vec![4, 3, 3]);
    }

    #[test]
    fn shape_errors() {
        let mut s = SeriesSpec::sigma(&[1], &[1], XArg::one());
        assert!(matches!(s.check_shape(), Err(BuildError::Divergent(_))));
        s.x = XArg::Float(0.5);
        assert!(s.check_shape().is_ok());
        s.strictness = vec![Strictness::Ge];
        assert!(matches!(s.check_shape(), Err(BuildError::InvalidSpec(_))));
        let mut t = SeriesSpec::sigma(&[2], &[1], XArg::Float(1.5));
        assert!(t.check_shape().is_err());
        t.x = XArg::one();
        t.imaginary = true;
        assert_eq!(t.effective_etas(), vec![-1]);
    }

    fn arb_spec() -> impl Strategy<Value = SeriesSpec> {
        let kernel = prop_oneof![Just(Kernel::Even), Just(Kernel::OddPlus), Just(Kernel::OddMinus)];
        let strict = prop_oneof![Just(Strictness::Gt), Just(Strictness::Ge)];
        let x = prop_oneof![
            (1i64..5, 1i64..9, 1i64..8).prop_map(|(p, q, r)| XArg::Exact { p, q, radicand: r }),
            (-1.0f64..1.0).prop_map(XArg::Float),
        ];
        (1usize..4)
            .prop_flat_map(move |d| {
                (
                    prop::bool::ANY,
                    prop::collection::vec(1u32..4, d),
                    prop_oneof![
                        prop::collection::vec(prop_oneof![Just(1i8), Just(-1i8)], d).prop_map(Signs::PerIndex),
                        prop_oneof![Just(1i8), Just(-1i8)].prop_map(Signs::Global)
                    ],
                    prop::collection::vec(kernel.clone(), d),
                    prop::collection::vec(strict.clone(), d),
                    x.clone(),
                    prop::bool::ANY,
                    0u64..4,
                )
            })
            .prop_map(|(fa, s, signs, kernels, strictness, x, imaginary, tail_n)| {
                SeriesSpec {
                    family: if fa { Family::BinomialA } else { Family::InverseBinomialB },
                    s,
                    signs,
                    kernels,
                    strictness,
                    x,
                    imaginary,
                    tail_n,
                }
                .normalized()
            })
    }

    proptest! {
        #[test]
        fn flags_round_trip(spec in arb_spec()) {
            let back: SeriesSpec = spec.to_flags().parse().unwrap();
            prop_assert_eq!(&back, &spec);
            let json = serde_json::to_string(&spec).unwrap();
            let back: SeriesSpec = serde_json::from_str(&json).unwrap();
            prop_assert_eq!(back, spec);
        }
    }
}
