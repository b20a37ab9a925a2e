//! The A/B decomposition of Σ_{n≤x} f(n) = Σ_{ab≤x} h(a)χ(b).
//!
//! A collects the pairs with a ≤ y, B those with a > y. Both sums are
//! exact integers: the inner character sum Σ_{b≤m} χ(b) costs O(1) via
//! one period of prefix sums, because full periods of a non-principal
//! character cancel.

use crate::character::QuadraticCharacter;
use crate::coeff::CoefficientSequence;
use crate::error::{Error, Result};
use crate::sieve::KFreeParams;

/// Parameter bundle for the split: the truncation y defaults to
/// x^{2kβ/(2kβ+1)} and the Perron height T to x², the choices under
/// which the split is analyzed.
#[derive(Debug, Clone, Copy)]
pub struct ProofSplitConfig {
    pub k: KFreeParams,
    pub x: u64,
    pub beta: f64,
    pub epsilon_slack: f64,
    pub y: Option<u64>,
    pub t_cap: Option<f64>,
}

impl ProofSplitConfig {
    pub fn new(k: KFreeParams, x: u64, beta: f64, epsilon_slack: f64) -> Self {
        ProofSplitConfig {
            k,
            x,
            beta,
            epsilon_slack,
            y: None,
            t_cap: None,
        }
    }

    pub fn with_y(mut self, y: u64) -> Self {
        self.y = Some(y);
        self
    }

    /// The default truncation x^{2kβ/(2kβ+1)}, strictly below x.
    pub fn default_y(&self) -> u64 {
        let k = f64::from(self.k.k());
        let exponent = 2.0 * k * self.beta / (2.0 * k * self.beta + 1.0);
        (self.x as f64).powf(exponent).floor() as u64
    }

    pub fn resolved_y(&self) -> u64 {
        self.y.unwrap_or_else(|| self.default_y())
    }

    /// The default Perron height T = x².
    pub fn resolved_t(&self) -> f64 {
        self.t_cap.unwrap_or((self.x as f64) * (self.x as f64))
    }

    pub fn validate(&self) -> Result<()> {
        if self.x < 2 {
            return Err(Error::InvalidArgument("x must be ≥ 2".into()));
        }
        if !(self.epsilon_slack > 0.0) || !self.epsilon_slack.is_finite() {
            return Err(Error::InvalidArgument(
                "epsilon_slack must be positive".into(),
            ));
        }
        if !(self.beta >= 0.5 + self.epsilon_slack) {
            return Err(Error::InvalidArgument(format!(
                "beta = {} must be ≥ 1/2 + epsilon_slack = {}",
                self.beta,
                0.5 + self.epsilon_slack
            )));
        }
        let y = self.resolved_y();
        if y < 1 || y >= self.x {
            return Err(Error::InvalidArgument(format!(
                "truncation y = {y} must satisfy 1 ≤ y < x = {}",
                self.x
            )));
        }
        Ok(())
    }
}

/// The two halves of the split; A + B equals the full partial sum.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AbSplit {
    pub a: i64,
    pub b: i64,
    pub y: u64,
}

impl AbSplit {
    pub fn total(&self) -> i64 {
        self.a + self.b
    }
}

/// Compute A = Σ_{ab≤x, a≤y} h(a)χ(b) and B = Σ_{ab≤x, a>y} h(a)χ(b)
/// from the sparse support of h (or h̃ for odd k).
pub fn ab_split_sums(
    cfg: &ProofSplitConfig,
    coeffs: &CoefficientSequence,
    chi: &QuadraticCharacter,
) -> Result<AbSplit> {
    cfg.validate()?;
    if coeffs.limit() < cfg.x {
        return Err(Error::Capacity {
            what: "ab_split coefficients",
            requested: cfg.x,
            bound: coeffs.limit(),
        });
    }
    let y = cfg.resolved_y();
    let q = chi.modulus();
    let prefix = chi.period_prefix_sums();
    let mut a_sum = 0i64;
    let mut b_sum = 0i64;
    for (a, v) in coeffs.iter_nonzero() {
        if a > cfg.x {
            break;
        }
        let m = cfg.x / a;
        let inner = prefix[(m % q) as usize];
        let contribution = v * inner;
        if a <= y {
            a_sum += contribution;
        } else {
            b_sum += contribution;
        }
    }
    Ok(AbSplit {
        a: a_sum,
        b: b_sum,
        y,
    })
}
