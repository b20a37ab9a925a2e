//! Partial-sum accumulation on a geometric checkpoint grid.
//!
//! The grid has ratio 1.1 starting at 10 and always ends at x_max. The
//! running maximum max_{m≤x} |S(m)| is tracked at every integer, not just
//! at checkpoints, because the growth statements bound the supremum.

use crate::coeff::CoefficientSequence;
use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct CheckpointSeries {
    checkpoints: Vec<u64>,
    partial_sum: Vec<i64>,
    running_max: Vec<u64>,
}

impl CheckpointSeries {
    /// Rebuild a series from stored rows, revalidating the invariants.
    pub fn from_parts(
        checkpoints: Vec<u64>,
        partial_sum: Vec<i64>,
        running_max: Vec<u64>,
    ) -> Result<Self> {
        if checkpoints.len() != partial_sum.len() || checkpoints.len() != running_max.len() {
            return Err(Error::InvalidArgument(
                "checkpoint columns must have equal length".into(),
            ));
        }
        for i in 0..checkpoints.len() {
            if i > 0 {
                if checkpoints[i] <= checkpoints[i - 1] {
                    return Err(Error::InvalidArgument(
                        "checkpoints must be strictly ascending".into(),
                    ));
                }
                if running_max[i] < running_max[i - 1] {
                    return Err(Error::InvalidArgument(
                        "running maximum must be non-decreasing".into(),
                    ));
                }
            }
            if partial_sum[i].unsigned_abs() > running_max[i] {
                return Err(Error::InvalidArgument(format!(
                    "|S({})| exceeds its running maximum",
                    checkpoints[i]
                )));
            }
        }
        Ok(CheckpointSeries {
            checkpoints,
            partial_sum,
            running_max,
        })
    }

    pub fn len(&self) -> usize {
        self.checkpoints.len()
    }

    pub fn is_empty(&self) -> bool {
        self.checkpoints.is_empty()
    }

    pub fn checkpoints(&self) -> &[u64] {
        &self.checkpoints
    }

    pub fn partial_sums(&self) -> &[i64] {
        &self.partial_sum
    }

    pub fn running_max(&self) -> &[u64] {
        &self.running_max
    }

    /// (x, S(x), running_max(x)) rows.
    pub fn rows(&self) -> impl Iterator<Item = (u64, i64, u64)> + '_ {
        (0..self.len()).map(|i| {
            (
                self.checkpoints[i],
                self.partial_sum[i],
                self.running_max[i],
            )
        })
    }

    pub fn final_partial_sum(&self) -> i64 {
        *self.partial_sum.last().expect("non-empty series")
    }

    pub fn final_running_max(&self) -> u64 {
        *self.running_max.last().expect("non-empty series")
    }
}

/// The grid 10·1.1^j, rounded and deduplicated, with x_max appended.
pub fn geometric_checkpoints(x_max: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut c = 10f64;
    loop {
        let x = c.round() as u64;
        if x >= x_max {
            break;
        }
        if out.last() != Some(&x) {
            out.push(x);
        }
        c *= 1.1;
    }
    if out.last() != Some(&x_max) {
        out.push(x_max);
    }
    out
}

/// Exact streaming accumulation of S(x) = Σ_{n≤x} a(n) over a value
/// stream a(1), a(2), …, recording at the geometric checkpoints.
pub fn partial_sum_series<I>(values: I, x_max: u64) -> Result<CheckpointSeries>
where
    I: IntoIterator<Item = i64>,
{
    if x_max < 100 {
        return Err(Error::InvalidArgument(format!(
            "partial-sum series needs x_max ≥ 100, got {x_max}"
        )));
    }
    let checkpoints = geometric_checkpoints(x_max);
    let mut partial_sum = Vec::with_capacity(checkpoints.len());
    let mut running_max = Vec::with_capacity(checkpoints.len());
    let mut iter = values.into_iter();
    let mut s: i64 = 0;
    let mut rmax: u64 = 0;
    let mut ci = 0usize;
    for n in 1..=x_max {
        let v = iter.next().ok_or_else(|| {
            Error::InvalidArgument(format!(
                "value stream ended at n = {n}, need x_max = {x_max}"
            ))
        })?;
        s += v;
        rmax = rmax.max(s.unsigned_abs());
        if checkpoints[ci] == n {
            partial_sum.push(s);
            running_max.push(rmax);
            ci += 1;
        }
    }
    debug_assert_eq!(ci, checkpoints.len());
    CheckpointSeries::from_parts(checkpoints, partial_sum, running_max)
}

/// Partial sums of a materialized sequence.
pub fn partial_sum_series_of(seq: &CoefficientSequence, x_max: u64) -> Result<CheckpointSeries> {
    if x_max > seq.limit() {
        return Err(Error::Capacity {
            what: "partial_sum_series",
            requested: x_max,
            bound: seq.limit(),
        });
    }
    partial_sum_series((1..=x_max).map(|n| seq.get(n)), x_max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::character::QuadraticCharacter;

    #[test]
    fn grid_shape() {
        let g = geometric_checkpoints(1000);
        assert_eq!(g[0], 10);
        assert_eq!(*g.last().unwrap(), 1000);
        for w in g.windows(2) {
            assert!(w[1] > w[0]);
            // ratio stays near 1.1 once rounding stops dominating
            if w[0] > 100 {
                let r = w[1] as f64 / w[0] as f64;
                assert!(r < 1.12, "ratio {r} too large");
            }
        }
    }

    #[test]
    fn constant_sequence_sums_to_floor_x() {
        let series = partial_sum_series(std::iter::repeat(1), 5_000).unwrap();
        for (x, s, m) in series.rows() {
            assert_eq!(s, x as i64);
            assert_eq!(m, x);
        }
    }

    #[test]
    fn periodic_character_running_max_is_bounded() {
        let chi = QuadraticCharacter::from_discriminant(-3).unwrap();
        let series = partial_sum_series(
            (1..=1_000_000u64).map(|n| i64::from(chi.eval(n))),
            1_000_000,
        )
        .unwrap();
        assert!(
            series.final_running_max() <= 3,
            "periodicity bounds |Σχ| by q"
        );
    }

    #[test]
    fn running_max_tracks_between_checkpoints() {
        // +1 up to n = 150, −1 back down to zero, flat after: the peak
        // at n = 150 falls between grid points but must be recorded.
        let vals = (1..=1_000i64).map(|n| match n {
            1..=150 => 1,
            151..=300 => -1,
            _ => 0,
        });
        let series = partial_sum_series(vals, 1_000).unwrap();
        assert!(!series.checkpoints().contains(&150), "peak is off-grid");
        assert_eq!(series.final_running_max(), 150);
        assert_eq!(series.final_partial_sum(), 0);
    }

    #[test]
    fn short_stream_is_an_error() {
        assert!(partial_sum_series((1..=99).map(|_| 1i64), 100).is_err());
        assert!(partial_sum_series(std::iter::repeat(1), 99).is_err());
    }

    #[test]
    fn from_parts_validates() {
        assert!(CheckpointSeries::from_parts(vec![10, 20], vec![1, 2], vec![1, 2]).is_ok());
        assert!(CheckpointSeries::from_parts(vec![10, 10], vec![1, 2], vec![1, 2]).is_err());
        assert!(CheckpointSeries::from_parts(vec![10, 20], vec![1, 2], vec![2, 1]).is_err());
        assert!(CheckpointSeries::from_parts(vec![10], vec![5], vec![4]).is_err());
    }
}
