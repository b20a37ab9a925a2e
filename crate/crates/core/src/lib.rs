//! Character sums over k-free integers.
//!
//! The library has two halves that meet in the experiment layer:
//!
//! * an exact half — segmented sieves, real Dirichlet characters and
//!   their modified companions, and integer Dirichlet-convolution algebra
//!   for the coefficient sequences h and h̃ whose generating series
//!   factor the sums of interest;
//! * an analytic half — Hurwitz/Riemann zeta and Dirichlet L evaluation
//!   by Euler–Maclaurin summation, the finite Euler product P(s) over
//!   primes dividing the modulus, closed forms for the generating series,
//!   tail functions, and vertical-line quadrature for Perron-style
//!   checks.
//!
//! The analytic half is generic over the scalar type through
//! [`analytic::Scalar`]; the experiment layer pins everything to `f64`
//! via the [`Real`] and [`C64`] aliases below.

// `!(x > y)` guards are deliberate: they reject NaN together with the
// out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analytic;
pub mod character;
pub mod coeff;
pub mod error;
pub mod experiment;
pub mod sieve;

pub use error::{Error, ErrorCategory, Result};

/// Concrete scalar used by the experiment layer.
pub type Real = f64;

/// Complex values over [`Real`].
pub type C64 = num_complex::Complex<Real>;
