//! Complex-analytic engine: ζ(s, a), ζ(s), L(s, χ), the finite Euler
//! product P(s) over primes dividing q, closed forms of the generating
//! series of f, tail functions, and vertical-line quadrature.
//!
//! Everything is generic over the scalar type through [`Scalar`]; the
//! crate root pins `f64` aliases for the experiment layer. The engine
//! declares its supported region explicitly and refuses to evaluate
//! outside it rather than silently degrade:
//!
//! * Hurwitz/Riemann zeta: σ ≥ −1, |t| ≤ budget.max_t, s away from 1;
//! * Dirichlet L: σ ≥ 0.4, |t| ≤ budget.max_t (s = 1 is regular since
//!   the character is non-principal);
//! * the default budget meets ~1e−9 absolute error for σ ≥ 0.4 and
//!   |t| ≤ 10³, which is validated against an independent
//!   alternating-series oracle in the tests.

mod hurwitz;
pub mod quadrature;

use std::fmt;

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};

use crate::character::QuadraticCharacter;
use crate::coeff::{h_coefficients, htilde_coefficients, CoefficientSequence, QCoreSet};
use crate::error::{Error, Result};
use crate::sieve::KFreeParams;

pub use hurwitz::real_pow;
pub use quadrature::{
    vertical_line_integral, vertical_line_integral_conjugate_symmetric, LineIntegral, StepControl,
};

/// Scalar type of the analytic engine (f64 in production; f32 works at
/// correspondingly loose budgets).
pub trait Scalar:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + NumAssign
    + fmt::Debug
    + fmt::Display
    + Send
    + Sync
    + 'static
{
}

impl<T> Scalar for T where
    T: Float
        + FloatConst
        + FromPrimitive
        + ToPrimitive
        + NumAssign
        + fmt::Debug
        + fmt::Display
        + Send
        + Sync
        + 'static
{
}

/// Lower edge of the supported σ range for the zeta evaluations.
pub const ZETA_MIN_SIGMA: f64 = -1.0;

/// Lower edge of the validated σ range for Dirichlet L evaluation.
pub const L_MIN_SIGMA: f64 = 0.4;

/// Absolute guard distance around poles.
pub const POLE_GUARD: f64 = 1e-6;

/// Tail functions are evaluated for σ ≥ 1/k + this margin, which keeps
/// ℜ(ks) ≥ 1 + k·margin comfortably inside the closed forms' region.
pub const TAIL_SIGMA_MARGIN: f64 = 0.05;

/// Accuracy/effort knobs for the series evaluations.
#[derive(Debug, Clone, Copy)]
pub struct EvalBudget<T> {
    /// Requested absolute error of a single evaluation (≥ 1e−12).
    pub target_abs_error: T,
    /// Cap on the Euler–Maclaurin cutoff; reaching it is a region error.
    pub max_terms: usize,
    /// Even order of the Bernoulli correction (≤ 30).
    pub bernoulli_order: usize,
    /// Largest |t| the engine will accept.
    pub max_t: T,
}

impl<T: Scalar> Default for EvalBudget<T> {
    fn default() -> Self {
        EvalBudget {
            target_abs_error: fr(1e-9),
            max_terms: 200_000,
            bernoulli_order: 16,
            max_t: fr(1e3),
        }
    }
}

impl<T: Scalar> EvalBudget<T> {
    pub fn validate(&self) -> Result<()> {
        if !self.target_abs_error.is_finite() || self.target_abs_error < fr(1e-12) {
            return Err(Error::InvalidArgument(
                "target_abs_error must be finite and ≥ 1e-12".into(),
            ));
        }
        if !self.bernoulli_order.is_multiple_of(2)
            || self.bernoulli_order < 2
            || self.bernoulli_order > 30
        {
            return Err(Error::InvalidArgument(
                "bernoulli_order must be even and in 2..=30".into(),
            ));
        }
        if self.max_terms < 64 {
            return Err(Error::InvalidArgument("max_terms must be ≥ 64".into()));
        }
        if !(self.max_t > T::zero()) || !self.max_t.is_finite() {
            return Err(Error::InvalidArgument("max_t must be positive".into()));
        }
        Ok(())
    }

    pub fn with_max_t(mut self, max_t: T) -> Self {
        self.max_t = max_t;
        self
    }

    pub fn with_target_abs_error(mut self, target: T) -> Self {
        self.target_abs_error = target;
        self
    }
}

fn fr<T: Scalar>(x: f64) -> T {
    T::from_f64(x).expect("constant representable")
}

fn ensure_finite<T: Scalar>(s: Complex<T>) -> Result<()> {
    if s.re.is_finite() && s.im.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(
            "complex argument must have finite components".into(),
        ))
    }
}

/// ζ(s, a) for a ∈ (0, 1], σ ≥ −1, |t| ≤ budget.max_t, s away from 1.
pub fn hurwitz_zeta<T: Scalar>(s: Complex<T>, a: T, budget: &EvalBudget<T>) -> Result<Complex<T>> {
    budget.validate()?;
    ensure_finite(s)?;
    if !(a > T::zero() && a <= T::one()) {
        return Err(Error::InvalidArgument(format!("a = {a} outside (0, 1]")));
    }
    if (s - Complex::new(T::one(), T::zero())).norm() < fr(POLE_GUARD) {
        return Err(Error::PoleProximity(format!(
            "s = {s} within {POLE_GUARD:e} of the pole at s = 1"
        )));
    }
    check_zeta_region(s, budget)?;
    hurwitz::hurwitz_em(s, a, budget, false)
}

/// ζ(s) = ζ(s, 1).
pub fn riemann_zeta<T: Scalar>(s: Complex<T>, budget: &EvalBudget<T>) -> Result<Complex<T>> {
    hurwitz_zeta(s, T::one(), budget)
}

fn check_zeta_region<T: Scalar>(s: Complex<T>, budget: &EvalBudget<T>) -> Result<()> {
    if s.re < fr(ZETA_MIN_SIGMA) {
        return Err(Error::Region(format!(
            "σ = {} below the supported σ ≥ {ZETA_MIN_SIGMA}",
            s.re
        )));
    }
    if s.im.abs() > budget.max_t {
        return Err(Error::Region(format!(
            "|t| = {} above the budget's max_t = {}",
            s.im.abs(),
            budget.max_t
        )));
    }
    Ok(())
}

/// L(s, χ) = q^{−s} Σ_{a=1}^{q} χ(a) ζ(s, a/q), using the pole-subtracted
/// Hurwitz form: Σ_a χ(a) = 0 for a non-principal character, so the
/// subtraction changes nothing while making s = 1 a regular point.
pub fn dirichlet_l<T: Scalar>(
    s: Complex<T>,
    chi: &QuadraticCharacter,
    budget: &EvalBudget<T>,
) -> Result<Complex<T>> {
    budget.validate()?;
    ensure_finite(s)?;
    if s.re < fr(L_MIN_SIGMA) {
        return Err(Error::Region(format!(
            "σ = {} below the validated σ ≥ {L_MIN_SIGMA} for L(s, χ)",
            s.re
        )));
    }
    if s.im.abs() > budget.max_t {
        return Err(Error::Region(format!(
            "|t| = {} above the budget's max_t = {}",
            s.im.abs(),
            budget.max_t
        )));
    }
    let q = chi.modulus();
    let qt: T = T::from_u64(q).unwrap();
    let mut sum = Complex::new(T::zero(), T::zero());
    for a in 1..q {
        let c = chi.eval(a);
        if c == 0 {
            continue;
        }
        let frac = T::from_u64(a).unwrap() / qt;
        let z = hurwitz::hurwitz_em(s, frac, budget, true)?;
        sum += z * fr::<T>(f64::from(c));
    }
    Ok(real_pow(qt, -s) * sum)
}

/// P(s) = Π_{p|q} (1 − p^{−s})^{−1}, for σ > 0 away from the poles at
/// s = 0 and s = 2πim/log p.
pub fn p_function<T: Scalar>(s: Complex<T>, q: u64) -> Result<Complex<T>> {
    ensure_finite(s)?;
    if q == 0 {
        return Err(Error::InvalidArgument("q must be ≥ 1".into()));
    }
    if !(s.re > T::zero()) {
        return Err(Error::Region(format!(
            "P(s) evaluated only for σ > 0, got σ = {}",
            s.re
        )));
    }
    if s.norm() < fr(POLE_GUARD) {
        return Err(Error::PoleProximity(
            "s within 1e-6 of the pole of P at s = 0".into(),
        ));
    }
    let mut product = Complex::new(T::one(), T::zero());
    let mut m = q;
    let mut p = 2u64;
    while p * p <= m {
        if m.is_multiple_of(p) {
            product *= euler_factor_inv(s, p)?;
            while m.is_multiple_of(p) {
                m /= p;
            }
        }
        p += 1;
    }
    if m > 1 {
        product *= euler_factor_inv(s, m)?;
    }
    Ok(product)
}

fn euler_factor_inv<T: Scalar>(s: Complex<T>, p: u64) -> Result<Complex<T>> {
    let lp = T::from_u64(p).unwrap().ln();
    let nearest = (s.im * lp / T::TAU()).round();
    if nearest != T::zero() {
        let pole_t = nearest * T::TAU() / lp;
        let dist = (s - Complex::new(T::zero(), pole_t)).norm();
        if dist < fr(POLE_GUARD) {
            return Err(Error::PoleProximity(format!(
                "s within {POLE_GUARD:e} of the pole 2πi·{}/log {p} of P(s)",
                nearest.to_f64().unwrap_or(f64::NAN)
            )));
        }
    }
    let one = Complex::new(T::one(), T::zero());
    Ok(one / (one - real_pow(T::from_u64(p).unwrap(), -s)))
}

/// Closed form of the Dirichlet series F(s) = Σ f(n) n^{−s} of
/// f = μ^(k)·g: L(s,χ)·P(s)/ζ(ks) for even k, and
/// L(s,χ)/L(ks,χ) · P(s)/P(ks) for odd k. Valid for σ > 1/k; encodes the
/// +1 convention at primes dividing q.
pub fn f_series<T: Scalar>(
    s: Complex<T>,
    k: KFreeParams,
    chi: &QuadraticCharacter,
    budget: &EvalBudget<T>,
) -> Result<Complex<T>> {
    ensure_finite(s)?;
    let kt: T = T::from_u32(k.k()).unwrap();
    if !(s.re * kt > T::one()) {
        return Err(Error::Region(format!(
            "closed form needs σ > 1/k = {}, got σ = {}",
            (T::one() / kt),
            s.re
        )));
    }
    let ks = s * kt;
    let l = dirichlet_l(s, chi, budget)?;
    let p = p_function(s, chi.modulus())?;
    if k.is_even() {
        let zk = riemann_zeta(ks, budget)?;
        Ok(l * p / zk)
    } else {
        let lk = dirichlet_l(ks, chi, budget)?;
        let pk = p_function(ks, chi.modulus())?;
        Ok(l * p / (lk * pk))
    }
}

/// Truncatable Dirichlet series behind the tail functions: h (even k,
/// series P(s)/ζ(ks)) or h̃ (odd k, series P(s)/(L(ks,χ)P(ks))), with the
/// sparse coefficients materialized once up to `y_max`.
#[derive(Debug, Clone)]
pub struct TailSeries {
    k: KFreeParams,
    chi: QuadraticCharacter,
    coeffs: CoefficientSequence,
}

impl TailSeries {
    pub fn build(k: KFreeParams, chi: &QuadraticCharacter, y_max: u64) -> Result<Self> {
        let core = QCoreSet::new(chi.modulus(), y_max)?;
        let coeffs = if k.is_even() {
            h_coefficients(k, &core, y_max)?
        } else {
            htilde_coefficients(k, chi, &core, y_max)?
        };
        Ok(TailSeries {
            k,
            chi: chi.clone(),
            coeffs,
        })
    }

    pub fn k(&self) -> KFreeParams {
        self.k
    }

    pub fn y_max(&self) -> u64 {
        self.coeffs.limit()
    }

    /// The materialized coefficients (h or h̃).
    pub fn coefficients(&self) -> &CoefficientSequence {
        &self.coeffs
    }

    /// The closed form the partial sums converge to: P(s)/ζ(ks) for even
    /// k, P(s)/(L(ks,χ)P(ks)) for odd k. Requires σ ≥ 1/k + margin.
    pub fn closed_form<T: Scalar>(
        &self,
        s: Complex<T>,
        budget: &EvalBudget<T>,
    ) -> Result<Complex<T>> {
        ensure_finite(s)?;
        self.check_region(s)?;
        let kt: T = T::from_u32(self.k.k()).unwrap();
        let ks = s * kt;
        let p = p_function(s, self.chi.modulus())?;
        if self.k.is_even() {
            Ok(p / riemann_zeta(ks, budget)?)
        } else {
            let lk = dirichlet_l(ks, &self.chi, budget)?;
            let pk = p_function(ks, self.chi.modulus())?;
            Ok(p / (lk * pk))
        }
    }

    /// Σ_{n≤y} a(n) n^{−s} over the sparse support.
    pub fn truncated_sum<T: Scalar>(&self, y: u64, s: Complex<T>) -> Result<Complex<T>> {
        ensure_finite(s)?;
        if y > self.y_max() {
            return Err(Error::Capacity {
                what: "tail truncation point",
                requested: y,
                bound: self.y_max(),
            });
        }
        let mut sum = Complex::new(T::zero(), T::zero());
        for (n, v) in self.coeffs.iter_nonzero() {
            if n > y {
                break;
            }
            sum += real_pow(T::from_u64(n).unwrap(), -s) * fr::<T>(v as f64);
        }
        Ok(sum)
    }

    /// H_y(s) (even k) or H̃_y(s) (odd k): closed form minus the exact
    /// truncated sum.
    pub fn eval<T: Scalar>(
        &self,
        y: u64,
        s: Complex<T>,
        budget: &EvalBudget<T>,
    ) -> Result<Complex<T>> {
        if y < 1 {
            return Err(Error::InvalidArgument("y must be ≥ 1".into()));
        }
        Ok(self.closed_form(s, budget)? - self.truncated_sum(y, s)?)
    }

    fn check_region<T: Scalar>(&self, s: Complex<T>) -> Result<()> {
        let min_sigma = T::one() / T::from_u32(self.k.k()).unwrap() + fr(TAIL_SIGMA_MARGIN);
        if s.re < min_sigma {
            return Err(Error::Region(format!(
                "tail functions need σ ≥ 1/k + {TAIL_SIGMA_MARGIN} = {min_sigma}, got σ = {}",
                s.re
            )));
        }
        Ok(())
    }
}

/// One-shot H_y(s)/H̃_y(s) evaluation; builds the coefficients up to y.
pub fn tail_function<T: Scalar>(
    k: KFreeParams,
    chi: &QuadraticCharacter,
    y: u64,
    s: Complex<T>,
    budget: &EvalBudget<T>,
) -> Result<Complex<T>> {
    TailSeries::build(k, chi, y)?.eval(y, s, budget)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::character::QuadraticCharacter;
    use crate::character::{f_values, ModifiedCharacter};
    use crate::sieve::SieveTable;
    use num_complex::Complex64;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn budget() -> EvalBudget<f64> {
        EvalBudget::default()
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn kp(k: u32) -> KFreeParams {
        KFreeParams::new(k).unwrap()
    }

    /// Independent ζ oracle: the alternating series
    /// η(s) = Σ (−1)^{n−1} n^{−s} with an Euler-transformed tail, and
    /// ζ(s) = η(s)/(1 − 2^{1−s}).
    fn zeta_eta_oracle(s: Complex64) -> Complex64 {
        let n0 = 60usize;
        let a = |m: usize| c(m as f64, 0.0).powc(-s);
        let mut eta = Complex64::new(0.0, 0.0);
        for n in 1..n0 {
            let term = a(n);
            eta += if n % 2 == 1 { term } else { -term };
        }
        // tail from n0: (−1)^{n0−1} Σ_k (−1)^k Δ^k a(n0) / 2^{k+1}
        let mut tail = Complex64::new(0.0, 0.0);
        for k in 0..45usize {
            let mut diff = Complex64::new(0.0, 0.0);
            let mut binom = 1f64;
            for i in 0..=k {
                let sign = if (k - i) % 2 == 0 { 1.0 } else { -1.0 };
                diff += a(n0 + i) * binom * sign;
                binom = binom * (k as f64 - i as f64) / (i as f64 + 1.0);
            }
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            tail += diff * sign / 2f64.powi(k as i32 + 1);
        }
        if n0.is_multiple_of(2) {
            eta -= tail;
        } else {
            eta += tail;
        }
        eta / (Complex64::new(1.0, 0.0) - c(2.0, 0.0).powc(Complex64::new(1.0, 0.0) - s))
    }

    #[test]
    fn classical_zeta_values() {
        let b = budget();
        let z2 = riemann_zeta(c(2.0, 0.0), &b).unwrap();
        assert!((z2.re - PI * PI / 6.0).abs() < 1e-10);
        assert!(z2.im.abs() < 1e-12);
        let z4 = riemann_zeta(c(4.0, 0.0), &b).unwrap();
        assert!((z4.re - PI.powi(4) / 90.0).abs() < 1e-10);
        let zm1 = riemann_zeta(c(-1.0, 0.0), &b).unwrap();
        assert!(
            (zm1.re - (-1.0 / 12.0)).abs() < 1e-10,
            "ζ(−1) via the Bernoulli branch"
        );
    }

    #[test]
    fn hurwitz_half_identity() {
        let b = budget();
        // ζ(s, 1/2) = (2^s − 1) ζ(s)
        let z = hurwitz_zeta(c(2.0, 0.0), 0.5, &b).unwrap();
        assert!((z.re - PI * PI / 2.0).abs() < 1e-10);
        for s in [c(2.0, 0.0), c(1.7, 3.0), c(3.5, -20.0), c(0.6, 100.0)] {
            let lhs = hurwitz_zeta(s, 0.5, &b).unwrap();
            let rhs = (c(2.0, 0.0).powc(s) - 1.0) * riemann_zeta(s, &b).unwrap();
            assert!(
                (lhs - rhs).norm() < 1e-8,
                "ζ(s, 1/2) identity failed at s = {s}: {:.3e}",
                (lhs - rhs).norm()
            );
        }
    }

    #[test]
    fn zeta_matches_alternating_series_oracle() {
        let b = budget();
        for s in [
            c(0.6, 10.0),
            c(0.5, 30.0),
            c(1.2, -14.0),
            c(2.0, 100.0),
            c(0.9, 0.0),
        ] {
            let via_em = riemann_zeta(s, &b).unwrap();
            let via_eta = zeta_eta_oracle(s);
            assert!(
                (via_em - via_eta).norm() < 1e-8,
                "ζ({s}): EM {via_em} vs eta oracle {via_eta}"
            );
        }
    }

    #[test]
    fn region_and_pole_guards() {
        let b = budget();
        assert!(matches!(
            riemann_zeta(c(1.0 + 1e-9, 0.0), &b),
            Err(Error::PoleProximity(_))
        ));
        assert!(matches!(
            riemann_zeta(c(-1.5, 0.0), &b),
            Err(Error::Region(_))
        ));
        assert!(matches!(
            riemann_zeta(c(2.0, 2e3), &b),
            Err(Error::Region(_))
        ));
        assert!(hurwitz_zeta(c(2.0, 0.0), 0.0, &b).is_err());
        assert!(hurwitz_zeta(c(2.0, 0.0), 1.5, &b).is_err());
        assert!(riemann_zeta(c(f64::NAN, 0.0), &b).is_err());
        let chi = QuadraticCharacter::from_discriminant(-3).unwrap();
        assert!(matches!(
            dirichlet_l(c(0.3, 0.0), &chi, &b),
            Err(Error::Region(_))
        ));
    }

    #[test]
    fn dirichlet_l_special_values() {
        let b = budget();
        let chi4 = QuadraticCharacter::from_discriminant(-4).unwrap();
        let l1 = dirichlet_l(c(1.0, 0.0), &chi4, &b).unwrap();
        assert!((l1.re - PI / 4.0).abs() < 1e-9, "L(1, χ₋₄) = π/4");
        assert!(l1.im.abs() < 1e-12);
        let catalan = 0.915_965_594_177_219;
        let l2 = dirichlet_l(c(2.0, 0.0), &chi4, &b).unwrap();
        assert!((l2.re - catalan).abs() < 1e-9, "L(2, χ₋₄) = Catalan");
        let chi3 = QuadraticCharacter::from_discriminant(-3).unwrap();
        let l13 = dirichlet_l(c(1.0, 0.0), &chi3, &b).unwrap();
        assert!(
            (l13.re - PI / (3.0 * 3f64.sqrt())).abs() < 1e-9,
            "L(1, χ₋₃)"
        );
    }

    #[test]
    fn dirichlet_l_matches_direct_sum_at_sigma_two() {
        let b = budget();
        for d in [-3i64, -4, 5] {
            let chi = QuadraticCharacter::from_discriminant(d).unwrap();
            for s in [c(2.0, 0.0), c(2.0, 7.5)] {
                let via_engine = dirichlet_l(s, &chi, &b).unwrap();
                let mut direct = Complex64::new(0.0, 0.0);
                for n in 1..=100_000u64 {
                    let v = chi.eval(n);
                    if v != 0 {
                        direct += c(n as f64, 0.0).powc(-s) * f64::from(v);
                    }
                }
                assert!(
                    (via_engine - direct).norm() < 1e-6,
                    "L direct-sum check failed for d = {d}, s = {s}"
                );
            }
        }
    }

    #[test]
    fn p_function_values() {
        assert!((p_function(c(2.0, 0.0), 3).unwrap() - c(9.0 / 8.0, 0.0)).norm() < 1e-12);
        assert!((p_function(c(1.0, 0.0), 4).unwrap() - c(2.0, 0.0)).norm() < 1e-12);
        assert!((p_function(c(2.0, 0.0), 12).unwrap() - c(3.0 / 2.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn p_function_times_reciprocal_is_one() {
        for (q, s) in [
            (3u64, c(0.7, 11.0)),
            (12, c(2.0, -300.0)),
            (8, c(0.01, 0.5)),
        ] {
            let p = p_function(s, q).unwrap();
            let mut recip = Complex64::new(1.0, 0.0);
            let mut m = q;
            let mut d = 2u64;
            while d * d <= m {
                if m % d == 0 {
                    recip *= Complex64::new(1.0, 0.0) - c(d as f64, 0.0).powc(-s);
                    while m % d == 0 {
                        m /= d;
                    }
                }
                d += 1;
            }
            if m > 1 {
                recip *= Complex64::new(1.0, 0.0) - c(m as f64, 0.0).powc(-s);
            }
            assert!((p * recip - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn p_function_pole_guards() {
        assert!(matches!(p_function(c(-0.5, 3.0), 6), Err(Error::Region(_))));
        assert!(matches!(
            p_function(c(1e-9, 1e-9), 6),
            Err(Error::PoleProximity(_))
        ));
        // first nonzero pole of the p = 2 factor: t = 2π/ln 2
        let t = std::f64::consts::TAU / 2f64.ln();
        let err = p_function(c(1e-8, t), 4).unwrap_err();
        match err {
            Error::PoleProximity(msg) => assert!(msg.contains("log 2"), "{msg}"),
            other => panic!("expected pole error, got {other:?}"),
        }
    }

    #[test]
    fn closed_form_matches_truncated_series() {
        let b = budget();
        let table = SieveTable::build(10_000).unwrap();
        let cases = [
            (2u32, -3i64, c(2.0, 0.0), 1e-3),
            (3, -3, c(2.0, 0.0), 1e-3),
            (2, -4, c(3.0, 0.0), 1e-6),
        ];
        for (k, d, s, tol) in cases {
            let chi = QuadraticCharacter::from_discriminant(d).unwrap();
            let g = ModifiedCharacter::with_default_sign(chi.clone());
            let f = f_values(kp(k), &g, &table, 10_000).unwrap();
            let mut truncated = Complex64::new(0.0, 0.0);
            for n in 1..=10_000u64 {
                let v = f.get(n);
                if v != 0 {
                    truncated += c(n as f64, 0.0).powc(-s) * v as f64;
                }
            }
            let closed = f_series(s, kp(k), &chi, &b).unwrap();
            assert!(
                (closed - truncated).norm() < tol,
                "closed form vs truncated series: k={k}, d={d}, s={s}, diff {:.3e}",
                (closed - truncated).norm()
            );
        }
    }

    #[test]
    fn tail_at_y_one_is_closed_form_minus_one() {
        let b = budget();
        let chi = QuadraticCharacter::from_discriminant(-3).unwrap();
        let tail = TailSeries::build(kp(2), &chi, 10).unwrap();
        let s = c(2.0, 0.0);
        let h1 = tail.eval(1, s, &b).unwrap();
        let expect = tail.closed_form(s, &b).unwrap() - Complex64::new(1.0, 0.0);
        assert!((h1 - expect).norm() < 1e-14, "only h(1) = 1 is subtracted");
    }

    #[test]
    fn tail_vanishes_as_y_grows() {
        let b = budget();
        let chi = QuadraticCharacter::from_discriminant(-3).unwrap();
        let tail = TailSeries::build(kp(2), &chi, 1_000_000).unwrap();
        let h = tail.eval(1_000_000, c(2.0, 0.0), &b).unwrap();
        assert!(
            h.norm() <= 1e-5,
            "|H_y(2)| = {:.3e} at y = 10^6 should be ≤ 1e-5",
            h.norm()
        );
    }

    #[test]
    fn tail_decreasing_trend_at_complex_s() {
        let b = budget();
        let chi = QuadraticCharacter::from_discriminant(-3).unwrap();
        let tail = TailSeries::build(kp(2), &chi, 100_000).unwrap();
        let s = c(0.6, 10.0);
        let mags: Vec<f64> = [100u64, 1_000, 10_000, 100_000]
            .iter()
            .map(|&y| tail.eval(y, s, &b).unwrap().norm())
            .collect();
        assert!(
            mags.last().unwrap() < mags.first().unwrap(),
            "|H_y| should shrink across the grid: {mags:?}"
        );
        let increases = mags.windows(2).filter(|w| w[1] >= w[0]).count();
        assert!(increases <= 1, "no sustained growth in |H_y|: {mags:?}");
    }

    #[test]
    fn tail_bounded_by_support_majorant_at_sigma_two() {
        let b = budget();
        let chi = QuadraticCharacter::from_discriminant(-3).unwrap();
        let tail = TailSeries::build(kp(2), &chi, 1_000_000).unwrap();
        let y = 1_000u64;
        let h_y = tail.eval(y, c(2.0, 0.0), &b).unwrap().norm();
        let mut majorant = 0.0;
        for (n, v) in tail.coefficients().iter_nonzero() {
            if n > y {
                majorant += v.unsigned_abs() as f64 / (n as f64 * n as f64);
            }
        }
        // beyond the materialized support the remainder is |H_{y_max}| ≤ 1e-5
        assert!(
            h_y <= majorant + 1.1e-5,
            "|H_y(2)| = {h_y:.3e} exceeds its support majorant {majorant:.3e}"
        );
    }

    #[test]
    fn tail_region_is_enforced() {
        let b = budget();
        let chi = QuadraticCharacter::from_discriminant(-3).unwrap();
        let tail = TailSeries::build(kp(2), &chi, 100).unwrap();
        assert!(matches!(
            tail.eval(10, c(0.52, 1.0), &b),
            Err(Error::Region(_))
        ));
        assert!(tail.eval(10, c(0.56, 1.0), &b).is_ok());
    }

    #[test]
    fn engine_is_generic_over_the_scalar() {
        // f32 instantiation with a budget matched to its precision
        let b = EvalBudget::<f32> {
            target_abs_error: 1e-4,
            max_terms: 10_000,
            bernoulli_order: 8,
            max_t: 100.0,
        };
        let z2 = riemann_zeta(num_complex::Complex::new(2.0f32, 0.0), &b).unwrap();
        assert!((z2.re - std::f32::consts::PI.powi(2) / 6.0).abs() < 1e-4);
        let chi4 = QuadraticCharacter::from_discriminant(-4).unwrap();
        let l1 = dirichlet_l(num_complex::Complex::new(1.0f32, 0.0), &chi4, &b).unwrap();
        assert!((l1.re - std::f32::consts::FRAC_PI_4).abs() < 1e-4);
    }

    #[test]
    fn budget_validation() {
        let mut b = budget();
        b.target_abs_error = 1e-13;
        assert!(b.validate().is_err());
        let mut b = budget();
        b.bernoulli_order = 15;
        assert!(b.validate().is_err());
        let mut b = budget();
        b.bernoulli_order = 32;
        assert!(b.validate().is_err());
        let mut b = budget();
        b.max_t = -1.0;
        assert!(b.validate().is_err());
        assert!(budget().validate().is_ok());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn zeta_conjugate_symmetry(re in 0.4f64..3.0, im in 0.1f64..900.0) {
            let b = budget();
            let s = c(re, im);
            let plain = riemann_zeta(s, &b).unwrap();
            let conj = riemann_zeta(s.conj(), &b).unwrap();
            prop_assert!((plain.conj() - conj).norm() < 2e-9);
        }

        #[test]
        fn l_conjugate_symmetry(re in 0.4f64..3.0, im in 0.1f64..900.0) {
            let b = budget();
            let chi = QuadraticCharacter::from_discriminant(5).unwrap();
            let s = c(re, im);
            let plain = dirichlet_l(s, &chi, &b).unwrap();
            let conj = dirichlet_l(s.conj(), &chi, &b).unwrap();
            prop_assert!((plain.conj() - conj).norm() < 2e-8);
        }
    }
}
