//! Decay of the tail functions H_y / H̃_y in the truncation point y.
//!
//! For each requested s the experiment tabulates |H_y(s)| over the y
//! grid and fits the slope of log|H_y| against log y, to be compared
//! with the predicted exponent 1/(2k) − σ.

use super::fit::linear_fit;
use crate::analytic::{EvalBudget, TailSeries};
use crate::character::QuadraticCharacter;
use crate::error::{Error, Result};
use crate::sieve::KFreeParams;
use crate::{Real, C64};

#[derive(Debug, Clone, Copy)]
pub struct TailDecayPoint {
    pub y: u64,
    pub abs_value: Real,
    pub re: Real,
    pub im: Real,
}

#[derive(Debug, Clone)]
pub struct TailDecaySeries {
    pub s: C64,
    /// Least-squares slope of log|H_y| against log y.
    pub fitted_slope: Real,
    /// 1/(2k) − σ, the decay exponent the tail bound predicts.
    pub predicted_slope: Real,
    pub points: Vec<TailDecayPoint>,
}

/// The budget's max_t is raised when the requested s values need more.
pub fn tail_decay_experiment(
    k: KFreeParams,
    chi: &QuadraticCharacter,
    s_list: &[C64],
    y_list: &[u64],
    budget: &EvalBudget<Real>,
) -> Result<Vec<TailDecaySeries>> {
    if s_list.is_empty() {
        return Err(Error::InvalidArgument("need at least one s".into()));
    }
    if y_list.len() < 2 {
        return Err(Error::InvalidArgument(
            "need at least two y values for a slope".into(),
        ));
    }
    for w in y_list.windows(2) {
        if w[1] <= w[0] {
            return Err(Error::InvalidArgument("y values must be ascending".into()));
        }
    }
    if y_list[0] < 1 {
        return Err(Error::InvalidArgument("y must be ≥ 1".into()));
    }

    let y_max = *y_list.last().expect("non-empty");
    let tail = TailSeries::build(k, chi, y_max)?;
    let widest_t = s_list.iter().map(|s| s.im.abs()).fold(0.0, Real::max);
    let budget = budget.with_max_t(budget.max_t.max(Real::from(k.k()) * widest_t + 16.0));

    let mut out = Vec::with_capacity(s_list.len());
    for &s in s_list {
        let mut points = Vec::with_capacity(y_list.len());
        for &y in y_list {
            let h = tail.eval(y, s, &budget)?;
            points.push(TailDecayPoint {
                y,
                abs_value: h.norm(),
                re: h.re,
                im: h.im,
            });
        }
        let xs: Vec<Real> = points.iter().map(|p| (p.y as Real).ln()).collect();
        let ys: Vec<Real> = points.iter().map(|p| p.abs_value.ln()).collect();
        let (fitted_slope, _, _) = linear_fit(&xs, &ys);
        out.push(TailDecaySeries {
            s,
            fitted_slope,
            predicted_slope: 1.0 / (2.0 * Real::from(k.k())) - s.re,
            points,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decay_slope_for_squarefree_case() {
        let chi = QuadraticCharacter::from_discriminant(-3).unwrap();
        let k = KFreeParams::new(2).unwrap();
        let s = C64::new(0.6, 10.0);
        let ys = [100u64, 1_000, 10_000, 100_000];
        let series = tail_decay_experiment(k, &chi, &[s], &ys, &EvalBudget::default()).unwrap();
        let run = &series[0];
        assert!((run.predicted_slope - (-0.35)).abs() < 1e-12);
        assert!(
            run.fitted_slope <= run.predicted_slope + 0.1,
            "fitted slope {} above predicted {} + 0.1",
            run.fitted_slope,
            run.predicted_slope
        );
        // this configuration is deterministic and lands at ~−0.32
        assert!(
            run.fitted_slope <= -0.3,
            "fitted slope {} above −0.3",
            run.fitted_slope
        );
    }

    #[test]
    fn region_violations_surface() {
        let chi = QuadraticCharacter::from_discriminant(-3).unwrap();
        let k = KFreeParams::new(2).unwrap();
        let err = tail_decay_experiment(
            k,
            &chi,
            &[C64::new(0.4, 5.0)],
            &[10, 100],
            &EvalBudget::default(),
        );
        assert!(err.is_err(), "σ = 0.4 < 1/2 + margin must be refused");
    }

    #[test]
    fn input_validation() {
        let chi = QuadraticCharacter::from_discriminant(-3).unwrap();
        let k = KFreeParams::new(2).unwrap();
        let s = [C64::new(2.0, 0.0)];
        assert!(tail_decay_experiment(k, &chi, &[], &[10, 100], &EvalBudget::default()).is_err());
        assert!(tail_decay_experiment(k, &chi, &s, &[10], &EvalBudget::default()).is_err());
        assert!(tail_decay_experiment(k, &chi, &s, &[100, 10], &EvalBudget::default()).is_err());
    }
}
