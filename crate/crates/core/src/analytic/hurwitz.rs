//! Euler–Maclaurin evaluation of the Hurwitz zeta function.
//!
//! ζ(s, a) = Σ_{n=0}^{M−1} (n+a)^{−s} + (M+a)^{1−s}/(s−1) + (M+a)^{−s}/2
//!           + Σ_{j=1}^{r} B_{2j}/(2j)! · (s)_{2j−1} · (M+a)^{−s−2j+1} + R,
//!
//! with cutoff M = max(50, ⌈|t|/2⌉ + 20) and correction order 2r = 16 by
//! default. The cutoff doubles (up to the budget's term cap) until the
//! magnitude of the last correction term is at or below the requested
//! absolute error. For non-principal character sums the simple pole at
//! s = 1 cancels; the pole-subtracted variant computes ζ(s, a) − 1/(s−1)
//! stably through (z^{1−s} − 1)/(s−1) = −ln z · φ((1−s)·ln z) with
//! φ(w) = (e^w − 1)/w, so Dirichlet L-values are regular at s = 1.

use num_complex::Complex;
use num_traits::{One, Zero};

use super::{EvalBudget, Scalar};
use crate::error::{Error, Result};

/// B_{2j} for j = 1..=15, as exact numerator/denominator pairs.
const BERNOULLI_EVEN: [(f64, f64); 15] = [
    (1.0, 6.0),
    (-1.0, 30.0),
    (1.0, 42.0),
    (-1.0, 30.0),
    (5.0, 66.0),
    (-691.0, 2730.0),
    (7.0, 6.0),
    (-3617.0, 510.0),
    (43867.0, 798.0),
    (-174611.0, 330.0),
    (854513.0, 138.0),
    (-236364091.0, 2730.0),
    (8553103.0, 6.0),
    (-23749461029.0, 870.0),
    (8615841276005.0, 14322.0),
];

fn fr<T: Scalar>(x: f64) -> T {
    T::from_f64(x).expect("f64 constant representable in scalar type")
}

/// x^w for real x > 0.
pub fn real_pow<T: Scalar>(x: T, w: Complex<T>) -> Complex<T> {
    let l = x.ln();
    Complex::from_polar((w.re * l).exp(), w.im * l)
}

/// φ(w) = (e^w − 1)/w, stable near w = 0.
fn phi<T: Scalar>(w: Complex<T>) -> Complex<T> {
    let one = Complex::<T>::one();
    if w.norm() < fr::<T>(1e-4) {
        // 1 + w/2 + w²/6 + w³/24 + w⁴/120; next term < 1e-22
        let w2 = w * w;
        one + w * fr::<T>(0.5)
            + w2 * fr::<T>(1.0 / 6.0)
            + w2 * w * fr::<T>(1.0 / 24.0)
            + w2 * w2 * fr::<T>(1.0 / 120.0)
    } else {
        (w.exp() - one) / w
    }
}

fn initial_cutoff<T: Scalar>(t_abs: T) -> usize {
    let by_t = (t_abs.to_f64().unwrap_or(0.0) / 2.0).ceil() as usize + 20;
    by_t.max(50)
}

/// One Euler–Maclaurin pass at a fixed cutoff. Returns the value and the
/// magnitude of the last Bernoulli correction term, which serves as the
/// convergence indicator for the asymptotic part.
fn em_pass<T: Scalar>(
    s: Complex<T>,
    a: T,
    cutoff: usize,
    order: usize,
    subtract_pole: bool,
) -> (Complex<T>, T) {
    let one = Complex::<T>::one();
    let mut direct = Complex::<T>::zero();
    for n in 0..cutoff {
        direct += real_pow(T::from_usize(n).unwrap() + a, -s);
    }
    let z = T::from_usize(cutoff).unwrap() + a;
    let lz = z.ln();

    let integral = if subtract_pole {
        // (z^{1−s} − 1)/(s − 1) = −lz·φ((1−s)·lz)
        -(phi((one - s) * lz) * lz)
    } else {
        real_pow(z, one - s) / (s - one)
    };

    let z_pow_minus_s = real_pow(z, -s);
    let mut value = direct + integral + z_pow_minus_s * fr::<T>(0.5);

    let mut poch = s; // (s)_1
    let mut zpow = z_pow_minus_s / z; // z^{−s−1}
    let z2 = z * z;
    let mut factorial = fr::<T>(2.0); // (2j)! at j = 1
    let mut last = T::zero();
    for j in 1..=order / 2 {
        let (num, den) = BERNOULLI_EVEN[j - 1];
        let coeff = fr::<T>(num) / (fr::<T>(den) * factorial);
        let term = poch * zpow * coeff;
        value += term;
        last = term.norm();
        let two_j = fr::<T>(2.0 * j as f64);
        poch = poch * (s + (two_j - T::one())) * (s + two_j);
        zpow /= z2;
        factorial = factorial * (two_j + T::one()) * (two_j + fr::<T>(2.0));
    }
    (value, last)
}

/// Driver: doubles the cutoff until the last correction term meets the
/// budget's absolute-error target, refusing once `max_terms` is reached.
pub(super) fn hurwitz_em<T: Scalar>(
    s: Complex<T>,
    a: T,
    budget: &EvalBudget<T>,
    subtract_pole: bool,
) -> Result<Complex<T>> {
    let mut cutoff = initial_cutoff(s.im.abs()).min(budget.max_terms);
    loop {
        let (value, last) = em_pass(s, a, cutoff, budget.bernoulli_order, subtract_pole);
        if last <= budget.target_abs_error {
            return Ok(value);
        }
        if cutoff >= budget.max_terms {
            return Err(Error::Region(format!(
                "Euler–Maclaurin tail estimate {:.3e} above target {:.3e} at the \
                 max_terms cap {}; raise max_terms or loosen target_abs_error",
                last.to_f64().unwrap_or(f64::NAN),
                budget.target_abs_error.to_f64().unwrap_or(f64::NAN),
                budget.max_terms
            )));
        }
        cutoff = (cutoff * 2).min(budget.max_terms);
    }
}
