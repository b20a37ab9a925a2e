//! Moment integrals of L(σ+it, χ) on vertical segments, with the ratios
//! to their expected growth envelopes: ∫|L|² dt against T·log T and
//! ∫|L|/|s| dt against (log T)^{3/2}. Logarithms are natural.

use rayon::prelude::*;

use crate::analytic::quadrature::pairwise_sum_real;
use crate::analytic::{dirichlet_l, EvalBudget};
use crate::character::QuadraticCharacter;
use crate::error::{Error, Result};
use crate::{Real, C64};

/// Default trapezoid step for moment integrals: fine enough to resolve
/// |L(1/2+it)| features (zero spacing ~2π/log T) with dozens of points.
pub const DEFAULT_MOMENT_STEP: Real = 0.05;

#[derive(Debug, Clone, Copy)]
pub struct MomentPoint {
    pub t_max: Real,
    pub integral: Real,
    pub ratio: Real,
}

/// ∫_{−T}^{T} |L(σ+it, χ)|² dt and its ratio to T·log T. The budget's
/// max_t is raised when the requested T needs more.
pub fn second_moment_l(
    chi: &QuadraticCharacter,
    sigma: Real,
    t_max: Real,
    step: Real,
    budget: &EvalBudget<Real>,
) -> Result<MomentPoint> {
    let integral = l_line_integral(chi, sigma, t_max, step, budget, |l, _s| l.norm_sqr())?;
    Ok(MomentPoint {
        t_max,
        integral,
        ratio: integral / (t_max * t_max.ln()),
    })
}

/// ∫_{−T}^{T} |L(σ+it, χ)|/|σ+it| dt and its ratio to (log T)^{3/2}.
pub fn l_over_s_integral(
    chi: &QuadraticCharacter,
    sigma: Real,
    t_max: Real,
    step: Real,
    budget: &EvalBudget<Real>,
) -> Result<MomentPoint> {
    let integral = l_line_integral(chi, sigma, t_max, step, budget, |l, s| l.norm() / s.norm())?;
    Ok(MomentPoint {
        t_max,
        integral,
        ratio: integral / t_max.ln().powf(1.5),
    })
}

fn l_line_integral(
    chi: &QuadraticCharacter,
    sigma: Real,
    t_max: Real,
    step: Real,
    budget: &EvalBudget<Real>,
    weight: impl Fn(C64, C64) -> Real + Sync,
) -> Result<Real> {
    if !(sigma >= 0.5) {
        return Err(Error::InvalidArgument(format!(
            "moment integrals take σ ≥ 1/2, got {sigma}"
        )));
    }
    if !t_max.is_finite() || t_max < 2.0 {
        return Err(Error::InvalidArgument("T must be ≥ 2".into()));
    }
    if !(step > 0.0) || step > 1.0 {
        return Err(Error::InvalidArgument("step must be in (0, 1]".into()));
    }
    let budget = budget.with_max_t(budget.max_t.max(t_max + 16.0));
    let n = ((2.0 * t_max / step).ceil() as usize).max(2);
    let h = 2.0 * t_max / n as Real;
    let values: Vec<Real> = (0..=n)
        .into_par_iter()
        .map(|i| {
            let s = C64::new(sigma, i as Real * h - t_max);
            Ok(weight(dirichlet_l(s, chi, &budget)?, s))
        })
        .collect::<Result<Vec<_>>>()?;
    let trapezoid = pairwise_sum_real(&values) - 0.5 * (values[0] + values[n]);
    Ok(trapezoid * h)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chi3() -> QuadraticCharacter {
        QuadraticCharacter::from_discriminant(-3).unwrap()
    }

    #[test]
    fn second_moment_at_large_sigma_is_near_2t() {
        // |L(2+it)| → 1 as the series is dominated by its first term, so
        // ∫|L|² over [−T, T] lands within a factor 2 of 2T.
        let point = second_moment_l(
            &chi3(),
            2.0,
            50.0,
            DEFAULT_MOMENT_STEP,
            &EvalBudget::default(),
        )
        .unwrap();
        let lower = 0.5 * (2.0 * 50.0);
        let upper = 2.0 * (2.0 * 50.0);
        assert!(
            point.integral > lower && point.integral < upper,
            "∫|L(2+it)|² = {} outside [{lower}, {upper}]",
            point.integral
        );
    }

    #[test]
    fn l_over_s_at_large_sigma_is_log_bounded() {
        let point = l_over_s_integral(
            &chi3(),
            2.0,
            200.0,
            DEFAULT_MOMENT_STEP,
            &EvalBudget::default(),
        )
        .unwrap();
        // |L(2+it)| ≤ ζ(2), so the integral is at most 2ζ(2)·(1 + ln T)
        let zeta2 = std::f64::consts::PI * std::f64::consts::PI / 6.0;
        let coarse = 2.0 * zeta2 * (1.0 + 200f64.ln());
        assert!(point.integral < coarse, "{} vs {coarse}", point.integral);
        assert!(point.integral > 0.0);
    }

    #[test]
    fn half_step_agrees_within_one_percent() {
        let coarse = l_over_s_integral(
            &chi3(),
            0.5,
            50.0,
            DEFAULT_MOMENT_STEP,
            &EvalBudget::default(),
        )
        .unwrap();
        let fine = l_over_s_integral(
            &chi3(),
            0.5,
            50.0,
            DEFAULT_MOMENT_STEP / 2.0,
            &EvalBudget::default(),
        )
        .unwrap();
        let rel = (coarse.integral - fine.integral).abs() / fine.integral;
        assert!(rel < 0.01, "half-step relative change {rel:.5}");
    }

    #[test]
    fn critical_line_baseline_is_pinned() {
        // First-run regression value for T = 50, σ = 1/2, q = 3 at the
        // default step; a drift means the quadrature or L path changed.
        let point = second_moment_l(
            &chi3(),
            0.5,
            50.0,
            DEFAULT_MOMENT_STEP,
            &EvalBudget::default(),
        )
        .unwrap();
        assert!(
            (point.ratio - 1.589605286408).abs() < 1e-6,
            "baseline ratio drifted: {:.12}",
            point.ratio
        );
    }

    #[test]
    fn rejects_sigma_below_half_and_bad_steps() {
        assert!(second_moment_l(&chi3(), 0.4, 50.0, 0.05, &EvalBudget::default()).is_err());
        assert!(second_moment_l(&chi3(), 0.5, 50.0, 0.0, &EvalBudget::default()).is_err());
        assert!(second_moment_l(&chi3(), 0.5, 1.0, 0.05, &EvalBudget::default()).is_err());
    }
}
