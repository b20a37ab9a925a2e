//! Runnable experiments: partial-sum growth with exponent fits, the A/B
//! decomposition, Perron residual checks, L-function moment integrals,
//! and tail-decay measurements. Every experiment is deterministic for a
//! given configuration: fixed quadrature steps, fixed summation order.

mod ab_split;
mod checkpoint;
mod fit;
mod moments;
mod perron;
mod tail_decay;

pub use ab_split::{ab_split_sums, AbSplit, ProofSplitConfig};
pub use checkpoint::{
    geometric_checkpoints, partial_sum_series, partial_sum_series_of, CheckpointSeries,
};
pub use fit::{
    envelope_non_increasing_final_decade, envelope_ratios, fit_exponent, ExponentFit,
    MIN_FIT_POINTS,
};
pub use moments::{l_over_s_integral, second_moment_l, MomentPoint, DEFAULT_MOMENT_STEP};
pub use perron::{perron_check, PerronCheckResult};
pub use tail_decay::{tail_decay_experiment, TailDecayPoint, TailDecaySeries};

use crate::character::{FValueStream, ModifiedCharacter};
use crate::error::Result;
use crate::sieve::KFreeParams;

/// Checkpointed partial sums of f = μ^(k)·g via the segmented stream,
/// so x_max well past the in-memory sieve bound stays cheap.
pub fn f_partial_sum_series(
    k: KFreeParams,
    g: &ModifiedCharacter,
    x_max: u64,
) -> Result<CheckpointSeries> {
    partial_sum_series(FValueStream::new(k, g, x_max)?, x_max)
}
