//! Smallest-prime-factor sieve and elementary arithmetic functions.
//!
//! [`SieveTable`] stores the smallest prime factor of every integer up to
//! its limit. That choice makes completely multiplicative extensions (the
//! character module) and the k-free indicator computable in one linear
//! pass. Streaming work beyond the in-memory table runs in fixed-width
//! segments (see [`SEGMENT_WIDTH`] and the character module's value
//! stream).

use crate::coeff::CoefficientSequence;
use crate::error::{Error, Result};

/// Hard cap on the in-memory table. One `u32` per integer, so the cap
/// corresponds to ~8.6 GiB of table; the practical target is 10^8
/// (~400 MB).
pub const MAX_SIEVE_LIMIT: u64 = 1 << 31;

/// Default width of the segments used by streaming computations.
pub const SEGMENT_WIDTH: u64 = 1 << 22;

/// The k of "k-free integer". Values below 2 are rejected.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KFreeParams {
    k: u32,
}

impl KFreeParams {
    pub fn new(k: u32) -> Result<Self> {
        if k < 2 {
            return Err(Error::InvalidArgument(format!("k must be ≥ 2, got {k}")));
        }
        Ok(KFreeParams { k })
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn is_even(&self) -> bool {
        self.k.is_multiple_of(2)
    }
}

/// Immutable smallest-prime-factor table for 2..=limit plus the ascending
/// list of primes ≤ limit. Safe to share across threads.
#[derive(Debug, Clone)]
pub struct SieveTable {
    limit: u64,
    spf: Vec<u32>,
    primes: Vec<u64>,
}

impl SieveTable {
    /// Linear sieve. Deterministic; O(limit) time and 4(limit+1) bytes.
    pub fn build(limit: u64) -> Result<Self> {
        if limit == 0 || limit > MAX_SIEVE_LIMIT {
            return Err(Error::Capacity {
                what: "sieve table",
                requested: limit,
                bound: MAX_SIEVE_LIMIT,
            });
        }
        let n = limit as usize;
        let mut spf = vec![0u32; n + 1];
        let mut primes: Vec<u64> = Vec::new();
        for i in 2..=n {
            if spf[i] == 0 {
                spf[i] = i as u32;
                primes.push(i as u64);
            }
            for &p in &primes {
                let p = p as usize;
                if p > spf[i] as usize || i * p > n {
                    break;
                }
                spf[i * p] = p as u32;
            }
        }
        Ok(SieveTable { limit, spf, primes })
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    /// Ascending primes ≤ limit.
    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    /// π(limit).
    pub fn prime_count(&self) -> usize {
        self.primes.len()
    }

    /// π(x) for x ≤ limit.
    pub fn prime_count_up_to(&self, x: u64) -> usize {
        self.primes.partition_point(|&p| p <= x)
    }

    /// Smallest prime factor of n, for 2 ≤ n ≤ limit. Panics outside.
    pub fn smallest_prime_factor(&self, n: u64) -> u64 {
        assert!(n >= 2 && n <= self.limit, "spf index {n} out of range");
        self.spf[n as usize] as u64
    }

    pub fn is_prime(&self, n: u64) -> bool {
        n >= 2 && n <= self.limit && self.spf[n as usize] as u64 == n
    }

    /// (prime, exponent) factorization via repeated spf lookups.
    pub fn factorize(&self, n: u64) -> Vec<(u64, u32)> {
        assert!(
            n >= 1 && n <= self.limit,
            "factorize index {n} out of range"
        );
        let mut out = Vec::new();
        let mut m = n;
        while m > 1 {
            let p = self.spf[m as usize] as u64;
            let mut e = 0;
            while m.is_multiple_of(p) {
                m /= p;
                e += 1;
            }
            out.push((p, e));
        }
        out
    }

    /// ω(n): number of distinct prime factors. ω(1) = 0 by convention.
    pub fn omega(&self, n: u64) -> Result<u32> {
        if n == 0 {
            return Err(Error::InvalidArgument("ω(0) is undefined".into()));
        }
        if n > self.limit {
            return Err(Error::Capacity {
                what: "omega",
                requested: n,
                bound: self.limit,
            });
        }
        Ok(self.factorize(n).len() as u32)
    }
}

/// μ(n) on 1..=limit, dense. μ(1) = 1.
pub fn mobius_values(table: &SieveTable, limit: u64) -> Result<CoefficientSequence> {
    check_limit("mobius_values", table, limit)?;
    let n = limit as usize;
    let mut mu = vec![0i64; n + 1];
    if n >= 1 {
        mu[1] = 1;
    }
    for i in 2..=n {
        let p = table.spf[i] as usize;
        let m = i / p;
        mu[i] = if m.is_multiple_of(p) { 0 } else { -mu[m] };
    }
    Ok(CoefficientSequence::from_dense_values("mu", mu))
}

/// μ^(k)(n) ∈ {0,1} on 1..=limit: 1 iff no p^k divides n. μ^(k)(1) = 1.
pub fn kfree_indicator(
    table: &SieveTable,
    k: KFreeParams,
    limit: u64,
) -> Result<CoefficientSequence> {
    check_limit("kfree_indicator", table, limit)?;
    let n = limit as usize;
    let k = k.k();
    let mut ind = vec![0i64; n + 1];
    if n >= 1 {
        ind[1] = 1;
    }
    for i in 2..=n {
        let p = table.spf[i] as usize;
        let mut m = i;
        let mut e = 0u32;
        while m % p == 0 {
            m /= p;
            e += 1;
        }
        ind[i] = if e >= k { 0 } else { ind[m] };
    }
    Ok(CoefficientSequence::from_dense_values(
        format!("kfree{k}"),
        ind,
    ))
}

fn check_limit(what: &'static str, table: &SieveTable, limit: u64) -> Result<()> {
    if limit == 0 {
        return Err(Error::InvalidArgument(format!("{what}: limit must be ≥ 1")));
    }
    if limit > table.limit {
        return Err(Error::Capacity {
            what,
            requested: limit,
            bound: table.limit,
        });
    }
    Ok(())
}

/// Ψ(x, y): the number of n ≤ x whose prime factors are all ≤ y, counted
/// exactly by depth-first enumeration over prime powers. 1 is counted.
pub fn psi_smooth_count(x: u64, y: u64) -> Result<u64> {
    if x < 1 {
        return Err(Error::InvalidArgument("Ψ(x, y) needs x ≥ 1".into()));
    }
    if y < 2 {
        return Err(Error::InvalidArgument("Ψ(x, y) needs y ≥ 2".into()));
    }
    let bound = y.min(x);
    if bound < 2 {
        return Ok(1); // x = 1: only n = 1
    }
    let table = SieveTable::build(bound)?;

    fn count(primes: &[u64], x: u64) -> u64 {
        match primes.split_first() {
            None => 1,
            Some((&p, rest)) => {
                let mut total = 0;
                let mut m = x;
                loop {
                    total += count(rest, m);
                    if m < p {
                        break;
                    }
                    m /= p;
                }
                total
            }
        }
    }
    Ok(count(table.primes(), x))
}

/// Largest r with r^k ≤ n.
pub fn integer_kth_root(n: u64, k: u32) -> u64 {
    if n == 0 {
        return 0;
    }
    if k == 1 {
        return n;
    }
    let mut r = (n as f64).powf(1.0 / k as f64).round() as u64;
    while r > 0 && pow_u64(r, k).is_none_or(|p| p > n) {
        r -= 1;
    }
    while pow_u64(r + 1, k).is_some_and(|p| p <= n) {
        r += 1;
    }
    r
}

/// base^exp without overflow; None if it does not fit in u64.
pub fn pow_u64(base: u64, exp: u32) -> Option<u64> {
    let mut acc: u64 = 1;
    for _ in 0..exp {
        acc = acc.checked_mul(base)?;
    }
    Some(acc)
}

pub(crate) fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = b;
        b = a % b;
        a = t;
    }
    a
}
