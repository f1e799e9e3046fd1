//! Iterated integrals as cascades of linear ODEs.
//!
//! Every suffix of every requested word is a node of a trie; node `n` with
//! letter `f` and parent `p` satisfies `G_n' = f * G_p`. Nodes are created
//! after their parents, so a single forward sweep per panel integrates the
//! whole system. Each panel uses Gauss-Legendre collocation, and the path
//! parameter is reparametrised by a double-exponential map so integrable
//! endpoint singularities decay faster than any power.

use std::collections::HashMap;
use std::ops::{Add, AddAssign, Mul, Sub};

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::scalar::Real;

/// The value type carried by the cascade: a real or a complex scalar.
pub trait Field<R: Real>:
    Copy
    + Send
    + Sync
    + std::fmt::Debug
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Mul<R, Output = Self>
    + AddAssign
{
    fn mag(self) -> f64;
}

impl<R: Real> Field<R> for R {
    fn mag(self) -> f64 {
        self.abs().to_f64_lossy()
    }
}

impl<R: Real> Field<R> for Complex<R> {
    fn mag(self) -> f64 {
        crate::scalar::cplx::abs(self).to_f64_lossy()
    }
}

/// Gauss-Legendre nodes and weights on [-1, 1].
pub fn gauss_legendre<R: Real>(m: usize) -> (Vec<R>, Vec<R>) {
    let mut xs = Vec::with_capacity(m);
    let mut ws = Vec::with_capacity(m);
    let legendre = |x: R| -> (R, R) {
        let (mut p0, mut p1) = (R::one(), x);
        for k in 1..m {
            let kk = R::of_int(k as i64);
            let p2 = ((kk + kk + R::one()) * x * p1 - kk * p0) / (kk + R::one());
            p0 = p1;
            p1 = p2;
        }
        let dp = R::of_int(m as i64) * (x * p1 - p0) / (x * x - R::one());
        (p1, dp)
    };
    for k in 1..=m {
        let guess = (std::f64::consts::PI * (k as f64 - 0.25) / (m as f64 + 0.5)).cos();
        let mut x = R::of(guess);
        for _ in 0..10 {
            let (p, dp) = legendre(x);
            x -= p / dp;
        }
        let (_, dp) = legendre(x);
        xs.push(x);
        ws.push(R::of(2.0) / ((R::one() - x * x) * dp * dp));
    }
    (xs, ws)
}

/// Collocation tableau on [0, 1]: nodes `c`, weights `b`, and
/// `a[i][j] = int_0^{c_i} l_j`, where `l_j` is the Lagrange basis.
pub struct Collocation<R> {
    pub c: Vec<R>,
    pub b: Vec<R>,
    pub a: Vec<Vec<R>>,
}

impl<R: Real> Collocation<R> {
    pub fn new(m: usize) -> Self {
        let (x, w) = gauss_legendre::<R>(m);
        let half = R::of(0.5);
        let c: Vec<R> = x.iter().map(|&xi| (xi + R::one()) * half).collect();
        let b: Vec<R> = w.iter().map(|&wi| wi * half).collect();
        let lagrange = |j: usize, tau: R| -> R {
            let mut p = R::one();
            for k in 0..m {
                if k != j {
                    p *= (tau - c[k]) / (c[j] - c[k]);
                }
            }
            p
        };
        // l_j has degree m-1, so the m-point rule integrates it exactly.
        let a = (0..m)
            .map(|i| {
                (0..m)
                    .map(|j| {
                        let mut s = R::zero();
                        for k in 0..m {
                            s += b[k] * lagrange(j, c[i] * c[k]);
                        }
                        s * c[i]
                    })
                    .collect()
            })
            .collect();
        Collocation { c, b, a }
    }

    pub fn for_precision() -> Self {
        Self::new(if R::BITS > 60 { 16 } else { 10 })
    }
}

/// A point of the reparametrised unit interval.
#[derive(Clone, Copy, Debug)]
pub struct Stage<R> {
    pub s: R,
    pub one_minus_s: R,
    pub dsdu: R,
}

/// `s = 1 / (1 + exp(-pi sinh u))`, so `1 - s` is the same map at `-u`.
pub fn de_point<R: Real>(u: R) -> Stage<R> {
    let pi = R::pi();
    let e = (-(pi * u.sinh())).exp();
    let s = R::one() / (R::one() + e);
    let one_minus_s = e / (R::one() + e);
    Stage { s, one_minus_s, dsdu: pi * u.cosh() * s * one_minus_s }
}

/// Half-width of the `u` interval: the neglected ends are far below the
/// format's resolution even for square-root endpoint singularities.
pub fn de_half_width<R: Real>() -> R {
    R::of(2.5 * R::BITS as f64 * std::f64::consts::LN_2 / std::f64::consts::PI).asinh()
}

/// Suffix trie over letter indices. Node 0.. are created parent-first.
#[derive(Default, Debug, Clone)]
pub struct Trie {
    parent: Vec<Option<usize>>,
    letter: Vec<usize>,
    index: HashMap<(Option<usize>, usize), usize>,
}

impl Trie {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    /// Insert a word given outermost letter first; returns its node, or
    /// `None` for the empty word.
    pub fn insert(&mut self, word: &[usize]) -> Option<usize> {
        let mut cur = None;
        for &l in word.iter().rev() {
            let key = (cur, l);
            let node = match self.index.get(&key) {
                Some(&n) => n,
                None => {
                    let n = self.parent.len();
                    self.parent.push(cur);
                    self.letter.push(l);
                    self.index.insert(key, n);
                    n
                }
            };
            cur = Some(node);
        }
        cur
    }
}

/// Integrate all trie nodes along `nseg` consecutive segments, each split
/// into `panels` collocation panels. `dens(seg, letter, stage)` returns the
/// letter's density times `dz/ds` at the stage point.
pub fn run<R, V, F>(
    trie: &Trie,
    nletters: usize,
    nseg: usize,
    dens: F,
    rule: &Collocation<R>,
    panels: usize,
) -> Vec<V>
where
    R: Real,
    V: Field<R>,
    F: Fn(usize, usize, &Stage<R>) -> V,
{
    let n = trie.len();
    let m = rule.c.len();
    let umax = de_half_width::<R>();
    let h = (umax + umax) / R::of_int(panels as i64);
    let mut g = vec![V::zero(); n];
    let mut stages = vec![V::zero(); n * m];
    let mut dbuf = vec![V::zero(); nletters * m];
    let mut fbuf = vec![V::zero(); m];
    let mut used = vec![false; nletters];
    for &l in &trie.letter {
        used[l] = true;
    }
    for seg in 0..nseg {
        for p in 0..panels {
            let u0 = -umax + h * R::of_int(p as i64);
            for i in 0..m {
                let st = de_point(u0 + h * rule.c[i]);
                let scale = st.dsdu * h;
                for (l, &u) in used.iter().enumerate() {
                    if u {
                        dbuf[l * m + i] = dens(seg, l, &st) * scale;
                    }
                }
            }
            for node in 0..n {
                let l = trie.letter[node];
                match trie.parent[node] {
                    None => fbuf.copy_from_slice(&dbuf[l * m..(l + 1) * m]),
                    Some(par) => {
                        for j in 0..m {
                            fbuf[j] = dbuf[l * m + j] * stages[par * m + j];
                        }
                    }
                }
                let g0 = g[node];
                for i in 0..m {
                    let mut acc = g0;
                    for j in 0..m {
                        acc += fbuf[j] * rule.a[i][j];
                    }
                    stages[node * m + i] = acc;
                }
                let mut end = g0;
                for j in 0..m {
                    end += fbuf[j] * rule.b[j];
                }
                g[node] = end;
            }
        }
    }
    g
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Dd;

    #[test]
    fn gauss_rule_integrates_polynomials() {
        let (x, w) = gauss_legendre::<Dd>(8);
        // degree 14 is exact for 8 nodes
        let s: Dd = x.iter().zip(&w).map(|(&xi, &wi)| wi * xi.powi(14)).sum();
        assert!((s - Dd::from_f64(2.0) / Dd::from_f64(15.0)).abs().to_f64() < 1e-30);
    }

    #[test]
    fn collocation_matrix_integrates_basis() {
        let r = Collocation::<f64>::new(6);
        // sum_j a_ij c_j^k = c_i^{k+1}/(k+1) for k < 6
        for i in 0..6 {
            for k in 0..6 {
                let lhs: f64 = (0..6).map(|j| r.a[i][j] * r.c[j].powi(k)).sum();
                let rhs = r.c[i].powi(k + 1) / (k + 1) as f64;
                assert!((lhs - rhs).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn de_map_is_symmetric() {
        let a = de_point(0.7f64);
        let b = de_point(-0.7f64);
        assert!((a.s - b.one_minus_s).abs() < 1e-16);
        assert!((a.s + a.one_minus_s - 1.0).abs() < 1e-16);
    }

    #[test]
    fn cascade_reproduces_power_integrals() {
        // int_0^1 dt int_0^t dt' = 1/2 and int_0^1 2t dt int.. with letters 1 and t
        let mut trie = Trie::new();
        let w = trie.insert(&[0, 0]).unwrap();
        let v = trie.insert(&[1, 0]).unwrap();
        let rule = Collocation::<f64>::new(10);
        let g: Vec<f64> = run(&trie, 2, 1, |_, l, st| if l == 0 { 1.0 } else { st.s }, &rule, 16);
        assert!((g[w] - 0.5).abs() < 1e-14);
        // int_0^1 t * t dt = 1/3
        assert!((g[v] - 1.0 / 3.0).abs() < 1e-14);
    }
}
