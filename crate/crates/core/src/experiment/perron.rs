//! Perron-formula residual check: the vertical-line integral of
//! F(s)·x^s/s against the exact partial sum Σ_{n≤x} f(n).
//!
//! x is required to be a half-integer so the boundary term at n = x in
//! the truncation error is vacuous. The error bound reported alongside
//! the residual is the truncated-Perron bound evaluated numerically with
//! implied constant 1:
//!
//!   Σ_{x/2<n<2x} |f(n)|·min{1, x/(T|x−n|)}
//!     + (x^{σ₀} + 4^{σ₀})/T · Σ_{n≥1} |f(n)|/n^{σ₀},
//!
//! where the final sum is computed exactly to 2x and bounded by an
//! integral beyond.

use num_complex::Complex;

use crate::analytic::{
    f_series, real_pow, vertical_line_integral_conjugate_symmetric, EvalBudget, StepControl,
};
use crate::character::{FValueStream, ModifiedCharacter, QuadraticCharacter};
use crate::error::{Error, Result};
use crate::sieve::KFreeParams;
use crate::{Real, C64};

#[derive(Debug, Clone, Copy)]
pub struct PerronCheckResult {
    pub x: Real,
    pub t_max: Real,
    pub sigma0: Real,
    /// Σ_{n≤x} f(n), exact.
    pub direct_sum: i64,
    /// (1/2πi)∫ F(s)·x^s/s ds on the fine grid.
    pub integral: C64,
    /// |direct_sum − integral|.
    pub residual: Real,
    /// Truncation bound evaluated numerically (implied constant 1).
    pub r_bound: Real,
    /// Quadrature discretization estimate.
    pub quadrature_estimate: Real,
    pub evaluations: usize,
    /// residual ≤ r_bound + quadrature_estimate.
    pub pass: bool,
}

/// `budget` supplies target accuracy and correction order; its max_t is
/// raised when the requested T needs more (the T argument is the intent).
pub fn perron_check(
    k: KFreeParams,
    chi: &QuadraticCharacter,
    x: Real,
    t_max: Real,
    sigma0: Option<Real>,
    budget: &EvalBudget<Real>,
) -> Result<PerronCheckResult> {
    if !x.is_finite() || x < 2.5 || x.fract() != 0.5 {
        return Err(Error::InvalidArgument(format!(
            "x must be a half-integer ≥ 2.5 (n = x stays vacuous), got {x}"
        )));
    }
    if !t_max.is_finite() || t_max < 10.0 {
        return Err(Error::InvalidArgument(format!(
            "T must be ≥ 10, got {t_max}"
        )));
    }
    let sigma0 = sigma0.unwrap_or(1.0 + 1.0 / x.ln());
    if !sigma0.is_finite() || sigma0 <= 1.0 {
        return Err(Error::InvalidArgument(format!(
            "sigma0 must be > 1 for absolute convergence, got {sigma0}"
        )));
    }

    let g = ModifiedCharacter::with_default_sign(chi.clone());
    let floor_x = x.floor() as u64;
    let two_x = (2.0 * x).ceil() as u64;
    let f_to_2x: Vec<i64> = FValueStream::new(k, &g, two_x)?.collect();
    let direct_sum: i64 = f_to_2x[..floor_x as usize].iter().sum();

    let needed_t = Real::from(k.k()) * t_max + 16.0;
    let budget = budget.with_max_t(budget.max_t.max(needed_t));
    let ctrl = StepControl::resolving_oscillation(x)?;
    // f is real-valued, so the integrand pairs ±t as conjugates
    let integrand =
        |s: C64| -> Result<C64> { Ok(f_series(s, k, chi, &budget)? * real_pow(x, s) / s) };
    let line = vertical_line_integral_conjugate_symmetric(&integrand, sigma0, t_max, &ctrl)?;

    let r_bound = perron_error_bound(&f_to_2x, x, t_max, sigma0);
    let residual = (line.value - Complex::new(direct_sum as Real, 0.0)).norm();
    Ok(PerronCheckResult {
        x,
        t_max,
        sigma0,
        direct_sum,
        integral: line.value,
        residual,
        r_bound,
        quadrature_estimate: line.discretization_estimate,
        evaluations: line.evaluations,
        pass: residual <= r_bound + line.discretization_estimate,
    })
}

fn perron_error_bound(f_to_2x: &[i64], x: Real, t_max: Real, sigma0: Real) -> Real {
    let two_x = f_to_2x.len() as u64;
    // near range x/2 < n < 2x (n = x impossible: x is a half-integer)
    let mut near = 0.0;
    let lo = (x / 2.0).floor() as u64 + 1;
    for n in lo..=two_x {
        let nf = n as Real;
        if nf <= x / 2.0 || nf >= 2.0 * x {
            continue;
        }
        let a = f_to_2x[(n - 1) as usize].unsigned_abs() as Real;
        if a == 0.0 {
            continue;
        }
        near += a * (x / (t_max * (x - nf).abs())).min(1.0);
    }
    // Σ |f(n)|/n^{σ₀}: exact to 2x, integral bound past it (|f| ≤ 1)
    let mut dirichlet_mass = 0.0;
    for (i, v) in f_to_2x.iter().enumerate() {
        if *v != 0 {
            dirichlet_mass += ((i + 1) as Real).powf(-sigma0);
        }
    }
    dirichlet_mass += (two_x as Real).powf(1.0 - sigma0) / (sigma0 - 1.0);
    near + (x.powf(sigma0) + 4f64.powf(sigma0)) / t_max * dirichlet_mass
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::{riemann_zeta, vertical_line_integral};

    fn chi3() -> QuadraticCharacter {
        QuadraticCharacter::from_discriminant(-3).unwrap()
    }

    fn kp(k: u32) -> KFreeParams {
        KFreeParams::new(k).unwrap()
    }

    #[test]
    fn classical_perron_for_the_constant_function() {
        // (1/2πi)∫_{2−iT}^{2+iT} ζ(s)·x^s/s ds ≈ Σ_{n≤x} 1 = ⌊x⌋
        let x = 10.5f64;
        let t_max = 1e4;
        let budget = EvalBudget::<f64>::default().with_max_t(t_max + 16.0);
        let ctrl = StepControl::resolving_oscillation(x).unwrap();
        let integrand =
            |s: C64| -> Result<C64> { Ok(riemann_zeta(s, &budget)? * real_pow(x, s) / s) };
        let line = vertical_line_integral(&integrand, 2.0, t_max, &ctrl).unwrap();
        let err = (line.value - Complex::new(10.0, 0.0)).norm();
        assert!(err <= 0.05, "classical Perron error {err:.4} > 0.05");
    }

    #[test]
    fn rejects_non_half_integer_x() {
        assert!(perron_check(kp(2), &chi3(), 100.0, 1e3, None, &EvalBudget::default()).is_err());
        assert!(perron_check(kp(2), &chi3(), 2.0, 1e3, None, &EvalBudget::default()).is_err());
        assert!(perron_check(kp(2), &chi3(), f64::NAN, 1e3, None, &EvalBudget::default()).is_err());
    }

    #[test]
    fn small_perron_residual_within_bound() {
        let out = perron_check(kp(2), &chi3(), 10.5, 1e4, None, &EvalBudget::default()).unwrap();
        assert!(
            out.pass,
            "residual {} vs bound {}",
            out.residual, out.r_bound
        );
        assert!(
            out.residual <= 0.05,
            "residual {} above the 0.05 scale for x=10.5, T=1e4",
            out.residual
        );
        assert!((out.sigma0 - (1.0 + 1.0 / 10.5f64.ln())).abs() < 1e-15);
    }

    #[test]
    fn doubling_t_does_not_worsen_the_residual() {
        let at_t = perron_check(kp(2), &chi3(), 10.5, 1e3, None, &EvalBudget::default()).unwrap();
        let at_2t = perron_check(kp(2), &chi3(), 10.5, 2e3, None, &EvalBudget::default()).unwrap();
        let noise = at_t.quadrature_estimate + at_2t.quadrature_estimate + 1e-6;
        assert!(
            at_2t.residual <= at_t.residual + noise,
            "residual grew past quadrature noise: {} → {}",
            at_t.residual,
            at_2t.residual
        );
    }
}
