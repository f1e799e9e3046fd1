//! Elementary functions on `Complex<R>` for any [`Real`] scalar.

use num_complex::Complex;

use super::Real;

pub type C<R> = Complex<R>;

pub fn re<R: Real>(x: R) -> C<R> {
    Complex::new(x, R::zero())
}

pub fn abs<R: Real>(z: C<R>) -> R {
    let (a, b) = (z.re.abs(), z.im.abs());
    if a.is_zero() && b.is_zero() {
        return R::zero();
    }
    let (big, small) = if a > b { (a, b) } else { (b, a) };
    let r = small / big;
    big * (R::one() + r * r).sqrt()
}

pub fn arg<R: Real>(z: C<R>) -> R {
    z.im.atan2(z.re)
}

/// Principal logarithm, branch cut on the negative real axis.
pub fn ln<R: Real>(z: C<R>) -> C<R> {
    Complex::new(abs(z).ln(), arg(z))
}

pub fn exp<R: Real>(z: C<R>) -> C<R> {
    let m = z.re.exp();
    let (s, c) = z.im.sin_cos();
    Complex::new(m * c, m * s)
}

/// Principal square root.
pub fn sqrt<R: Real>(z: C<R>) -> C<R> {
    let two = R::of(2.0);
    let r = abs(z);
    if r.is_zero() {
        return Complex::new(R::zero(), R::zero());
    }
    if z.re >= R::zero() {
        let t = ((r + z.re) / two).sqrt();
        Complex::new(t, z.im / (two * t))
    } else {
        let t = ((r - z.re) / two).sqrt();
        let t = if z.im < R::zero() { -t } else { t };
        Complex::new(z.im / (two * t), t)
    }
}

/// `e^{i theta}`.
pub fn cis<R: Real>(theta: R) -> C<R> {
    let (s, c) = theta.sin_cos();
    Complex::new(c, s)
}

pub fn powi<R: Real>(z: C<R>, n: u32) -> C<R> {
    let mut acc = Complex::new(R::one(), R::zero());
    let mut base = z;
    let mut e = n;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base;
        }
        base = base * base;
        e >>= 1;
    }
    acc
}

pub fn to_c64<R: Real>(z: C<R>) -> Complex<f64> {
    Complex::new(z.re.to_f64_lossy(), z.im.to_f64_lossy())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Dd;

    #[test]
    fn log_exp_inverse() {
        let z = Complex::new(Dd::from_f64(-0.3), Dd::from_f64(1.7));
        let w = exp(ln(z));
        assert!(abs(w - z).to_f64() < 1e-30);
    }

    #[test]
    fn sqrt_principal_branch() {
        let z = Complex::new(-4.0f64, -1e-300);
        let s = sqrt(z);
        assert!((s.im + 2.0).abs() < 1e-15 && s.re.abs() < 1e-100);
        let w = Complex::new(Dd::from_f64(0.2), Dd::from_f64(-0.9));
        let r = sqrt(w);
        assert!(abs(r * r - w).to_f64() < 1e-31);
        assert!(r.re.hi > 0.0);
    }
}
