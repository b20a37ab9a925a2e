//! Trapezoid quadrature on vertical line segments σ₀ ± iT.
//!
//! The rule is composite trapezoid with a fixed step tied to the
//! integrand's oscillation scale; the step must not exceed the caller's
//! oscillation bound (for Perron integrands x^s that bound is
//! 2π/(20·log x), twenty points per period of x^{it}). Every integral is
//! computed on a fine grid of half the requested step and reported with a
//! discretization estimate: the difference between the fine result and
//! the result on the requested (coarse) grid. Integrand evaluations run
//! in parallel; summation is a fixed pairwise tree, so results are
//! deterministic for a given configuration.

use num_complex::Complex;
use num_traits::Zero;
use rayon::prelude::*;

use super::Scalar;
use crate::error::{Error, Result};

/// Requested step and the oscillation bound it must respect.
#[derive(Debug, Clone, Copy)]
pub struct StepControl<T> {
    pub step: T,
    pub max_step: T,
}

impl<T: Scalar> StepControl<T> {
    /// Step control resolving the oscillation of x^{it}: twenty points
    /// per period, step = 2π/(20·log x). Requires x > 1.
    pub fn resolving_oscillation(x: T) -> Result<Self> {
        if !(x > T::one()) {
            return Err(Error::InvalidArgument(
                "oscillation bound needs x > 1".into(),
            ));
        }
        let bound = T::TAU() / (T::from_f64(20.0).unwrap() * x.ln());
        Ok(StepControl {
            step: bound,
            max_step: bound,
        })
    }

    pub fn with_step(mut self, step: T) -> Self {
        self.step = step;
        self
    }
}

/// Result of a vertical-line integration.
#[derive(Debug, Clone, Copy)]
pub struct LineIntegral<T> {
    /// (1/2πi) ∫ on the fine grid (half the requested step).
    pub value: Complex<T>,
    /// Same integral on the requested step.
    pub coarse_value: Complex<T>,
    /// |value − coarse_value|: the reported discretization estimate.
    pub discretization_estimate: T,
    /// Fine grid spacing actually used.
    pub fine_step: T,
    /// Number of integrand evaluations.
    pub evaluations: usize,
}

/// (1/2πi) ∫_{σ₀−iT}^{σ₀+iT} f(s) ds by composite trapezoid.
pub fn vertical_line_integral<T, F>(
    integrand: &F,
    sigma0: T,
    t_max: T,
    ctrl: &StepControl<T>,
) -> Result<LineIntegral<T>>
where
    T: Scalar,
    F: Fn(Complex<T>) -> Result<Complex<T>> + Sync,
{
    if !sigma0.is_finite() || !t_max.is_finite() {
        return Err(Error::InvalidArgument("sigma0 and T must be finite".into()));
    }
    if !(t_max > T::zero()) {
        return Err(Error::InvalidArgument("T must be positive".into()));
    }
    if !(ctrl.step > T::zero()) || !ctrl.step.is_finite() {
        return Err(Error::InvalidArgument("step must be positive".into()));
    }
    if ctrl.step > ctrl.max_step {
        return Err(Error::StepTooLarge {
            step: ctrl.step.to_f64().unwrap_or(f64::NAN),
            max_step: ctrl.max_step.to_f64().unwrap_or(f64::NAN),
        });
    }

    let two_t = t_max + t_max;
    let n_coarse = (two_t / ctrl.step)
        .ceil()
        .to_usize()
        .ok_or_else(|| Error::InvalidArgument("step too small for the range".into()))?
        .max(2);
    let n_fine = 2 * n_coarse;
    let h = two_t / T::from_usize(n_fine).unwrap();

    let values: Vec<Complex<T>> = (0..=n_fine)
        .into_par_iter()
        .map(|i| {
            let t = T::from_usize(i).unwrap() * h - t_max;
            integrand(Complex::new(sigma0, t))
        })
        .collect::<Result<Vec<_>>>()?;

    let half = T::from_f64(0.5).unwrap();
    let fine_sum = pairwise_sum(&values) - (values[0] + values[n_fine]) * half;
    let coarse: Vec<Complex<T>> = values.iter().step_by(2).copied().collect();
    let coarse_sum = pairwise_sum(&coarse) - (coarse[0] + coarse[coarse.len() - 1]) * half;

    // ds = i dt cancels the i in 1/(2πi): (1/2π) ∫ f(σ₀+it) dt
    let scale = h / T::TAU();
    let value = fine_sum * scale;
    let coarse_value = coarse_sum * (scale + scale);
    Ok(LineIntegral {
        value,
        coarse_value,
        discretization_estimate: (value - coarse_value).norm(),
        fine_step: h,
        evaluations: n_fine + 1,
    })
}

/// Same integral for integrands satisfying g(conj s) = conj g(s) — any
/// Dirichlet series with real coefficients times x^s/s does. The ±t
/// contributions pair into 2·Re, so only t ∈ [0, T] is evaluated and the
/// result is exactly real.
pub fn vertical_line_integral_conjugate_symmetric<T, F>(
    integrand: &F,
    sigma0: T,
    t_max: T,
    ctrl: &StepControl<T>,
) -> Result<LineIntegral<T>>
where
    T: Scalar,
    F: Fn(Complex<T>) -> Result<Complex<T>> + Sync,
{
    if !sigma0.is_finite() || !t_max.is_finite() {
        return Err(Error::InvalidArgument("sigma0 and T must be finite".into()));
    }
    if !(t_max > T::zero()) {
        return Err(Error::InvalidArgument("T must be positive".into()));
    }
    if !(ctrl.step > T::zero()) || !ctrl.step.is_finite() {
        return Err(Error::InvalidArgument("step must be positive".into()));
    }
    if ctrl.step > ctrl.max_step {
        return Err(Error::StepTooLarge {
            step: ctrl.step.to_f64().unwrap_or(f64::NAN),
            max_step: ctrl.max_step.to_f64().unwrap_or(f64::NAN),
        });
    }

    let two_t = t_max + t_max;
    let mut n_coarse = (two_t / ctrl.step)
        .ceil()
        .to_usize()
        .ok_or_else(|| Error::InvalidArgument("step too small for the range".into()))?
        .max(2);
    // an even interval count keeps t = 0 on both nested grids
    if n_coarse % 2 == 1 {
        n_coarse += 1;
    }
    let n_fine = 2 * n_coarse;
    let h = two_t / T::from_usize(n_fine).unwrap();

    // Re g at t = j·h for j = 0..=n_coarse (the full fine grid's upper half)
    let re_vals: Vec<T> = (0..=n_coarse)
        .into_par_iter()
        .map(|j| Ok(integrand(Complex::new(sigma0, T::from_usize(j).unwrap() * h))?.re))
        .collect::<Result<Vec<_>>>()?;

    let two = T::from_f64(2.0).unwrap();
    // full-range trapezoid folded onto [0, T]:
    //   Re g(0) + 2 Σ_{0<j<n} Re g(jh) + Re g(T)
    let interior = pairwise_sum_real(&re_vals[1..n_coarse]);
    let fine_total = re_vals[0] + two * interior + re_vals[n_coarse];
    let coarse_strided: Vec<T> = re_vals.iter().step_by(2).copied().collect();
    let coarse_interior = pairwise_sum_real(&coarse_strided[1..coarse_strided.len() - 1]);
    let coarse_total =
        coarse_strided[0] + two * coarse_interior + coarse_strided[coarse_strided.len() - 1];

    let scale = h / T::TAU();
    let value = Complex::new(fine_total * scale, T::zero());
    let coarse_value = Complex::new(coarse_total * scale * two, T::zero());
    Ok(LineIntegral {
        value,
        coarse_value,
        discretization_estimate: (value - coarse_value).norm(),
        fine_step: h,
        evaluations: n_coarse + 1,
    })
}

/// Deterministic pairwise (tree) summation.
pub(crate) fn pairwise_sum<T: Scalar>(v: &[Complex<T>]) -> Complex<T> {
    if v.len() <= 32 {
        let mut acc = Complex::<T>::zero();
        for x in v {
            acc += *x;
        }
        acc
    } else {
        let mid = v.len() / 2;
        pairwise_sum(&v[..mid]) + pairwise_sum(&v[mid..])
    }
}

/// Deterministic pairwise summation of real values.
pub(crate) fn pairwise_sum_real<T: Scalar>(v: &[T]) -> T {
    if v.len() <= 32 {
        let mut acc = T::zero();
        for x in v {
            acc += *x;
        }
        acc
    } else {
        let mid = v.len() / 2;
        pairwise_sum_real(&v[..mid]) + pairwise_sum_real(&v[mid..])
    }
}
