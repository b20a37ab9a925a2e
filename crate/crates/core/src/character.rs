//! Real non-principal Dirichlet characters and their modified companions.
//!
//! Primitive real characters come from fundamental discriminants through
//! the Kronecker symbol; arbitrary real characters can be supplied as a
//! table of period values, which is verified against the character axioms
//! at construction. The modified character g agrees with χ at primes not
//! dividing the modulus and takes a fixed sign (±1, default +1) at primes
//! that do, making it completely multiplicative with |g| = 1.

use crate::coeff::CoefficientSequence;
use crate::error::{Error, Result};
use crate::sieve::{self, KFreeParams, SieveTable, SEGMENT_WIDTH};

/// Kronecker symbol (a|n), extended to all integer pairs by the standard
/// reciprocity algorithm with the 2-adic rule (a|2) determined by a mod 8.
pub fn kronecker(a: i64, n: i64) -> i32 {
    if n == 0 {
        return if a == 1 || a == -1 { 1 } else { 0 };
    }
    let mut a = a;
    let mut n = n;
    let mut result = 1i32;
    if n < 0 {
        n = -n;
        if a < 0 {
            result = -result;
        }
    }
    let twos = n.trailing_zeros();
    if twos > 0 {
        if a % 2 == 0 {
            return 0;
        }
        // (a|2) = −1 exactly when a ≡ ±3 (mod 8)
        let m8 = a.rem_euclid(8);
        if (m8 == 3 || m8 == 5) && twos % 2 == 1 {
            result = -result;
        }
        n >>= twos;
    }
    // Jacobi symbol (a|n) for odd n ≥ 1.
    a = a.rem_euclid(n);
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            let m8 = n % 8;
            if m8 == 3 || m8 == 5 {
                result = -result;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            result = -result;
        }
        a %= n;
    }
    if n == 1 {
        result
    } else {
        0
    }
}

fn is_squarefree_abs(v: i64) -> bool {
    let mut m = v.unsigned_abs();
    let mut d = 2u64;
    while d * d <= m {
        if m.is_multiple_of(d) {
            m /= d;
            if m.is_multiple_of(d) {
                return false;
            }
        }
        d += 1;
    }
    true
}

/// d ≡ 1 (mod 4) squarefree, or d = 4m with m ≡ 2, 3 (mod 4) squarefree,
/// and d ≠ 1.
pub fn is_fundamental_discriminant(d: i64) -> bool {
    fundamental_discriminant_failure(d).is_none()
}

fn fundamental_discriminant_failure(d: i64) -> Option<String> {
    if d == 0 {
        return Some("zero is not a discriminant".into());
    }
    if d == 1 {
        return Some("1 indexes the trivial character".into());
    }
    match d.rem_euclid(4) {
        1 => {
            if is_squarefree_abs(d) {
                None
            } else {
                Some("d ≡ 1 (mod 4) but d is not squarefree".into())
            }
        }
        0 => {
            let m = d / 4;
            let r = m.rem_euclid(4);
            if r != 2 && r != 3 {
                Some(format!("d = 4m with m ≡ {r} (mod 4); need m ≡ 2 or 3"))
            } else if !is_squarefree_abs(m) {
                Some("d = 4m but m is not squarefree".into())
            } else {
                None
            }
        }
        r => Some(format!("d ≡ {r} (mod 4); need 0 or 1")),
    }
}

/// A real non-principal Dirichlet character mod q, held as its period
/// values χ(0..q−1) ∈ {−1, 0, 1}. All axioms are verified at construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadraticCharacter {
    modulus: u64,
    discriminant: Option<i64>,
    values: Vec<i8>,
}

impl QuadraticCharacter {
    /// The character n ↦ (d|n) for a fundamental discriminant d, of
    /// modulus q = |d|.
    pub fn from_discriminant(d: i64) -> Result<Self> {
        if let Some(reason) = fundamental_discriminant_failure(d) {
            return Err(Error::NotFundamental { d, reason });
        }
        let q = d.unsigned_abs();
        let values: Vec<i8> = (0..q).map(|n| kronecker(d, n as i64) as i8).collect();
        verify_character_table(q, &values)?;
        Ok(QuadraticCharacter {
            modulus: q,
            discriminant: Some(d),
            values,
        })
    }

    /// A character from explicit period values χ(0..q−1). Accepts exactly
    /// those tables satisfying every axiom (so imprimitive real characters
    /// are admissible too). Verification is exhaustive and O(q²).
    pub fn from_values(q: u64, values: Vec<i8>) -> Result<Self> {
        if values.len() as u64 != q {
            return Err(Error::CharacterInvariant {
                q,
                reason: format!("table has {} entries, expected {q}", values.len()),
            });
        }
        verify_character_table(q, &values)?;
        Ok(QuadraticCharacter {
            modulus: q,
            discriminant: None,
            values,
        })
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// The discriminant this character was built from, when applicable.
    pub fn discriminant(&self) -> Option<i64> {
        self.discriminant
    }

    /// χ(0..q−1).
    pub fn period_values(&self) -> &[i8] {
        &self.values
    }

    /// χ(n) = χ(n mod q).
    pub fn eval(&self, n: u64) -> i32 {
        i32::from(self.values[(n % self.modulus) as usize])
    }

    /// Prefix sums over one period: out[r] = Σ_{b=1..r} χ(b) for r < q.
    /// Because the character is non-principal, Σ_{b≤m} χ(b) = out[m mod q].
    pub fn period_prefix_sums(&self) -> Vec<i64> {
        let mut out = vec![0i64; self.modulus as usize];
        for r in 1..self.modulus as usize {
            out[r] = out[r - 1] + i64::from(self.values[r]);
        }
        out
    }
}

fn verify_character_table(q: u64, values: &[i8]) -> Result<()> {
    let fail = |reason: String| Error::CharacterInvariant { q, reason };
    if q < 3 {
        return Err(fail("modulus must be ≥ 3".into()));
    }
    for (n, &v) in values.iter().enumerate() {
        if !(-1..=1).contains(&v) {
            return Err(fail(format!("χ({n}) = {v} is outside {{−1, 0, 1}}")));
        }
        let coprime = sieve::gcd_u64(n as u64, q) == 1;
        if coprime && v == 0 {
            return Err(fail(format!("χ({n}) = 0 but gcd({n}, q) = 1")));
        }
        if !coprime && v != 0 {
            return Err(fail(format!("χ({n}) ≠ 0 but gcd({n}, q) > 1")));
        }
    }
    for a in 0..q {
        for b in a..q {
            let lhs = values[((a * b) % q) as usize];
            let rhs = values[a as usize] * values[b as usize];
            if lhs != rhs {
                return Err(fail(format!(
                    "not completely multiplicative at (a, b) = ({a}, {b}): χ(ab) = {lhs}, χ(a)χ(b) = {rhs}"
                )));
            }
        }
    }
    let total: i64 = values.iter().map(|&v| i64::from(v)).sum();
    if total != 0 {
        return Err(fail(format!(
            "period sum is {total}; non-principal needs 0"
        )));
    }
    if !values.contains(&-1) {
        return Err(fail("no value equals −1; character is principal".into()));
    }
    Ok(())
}

/// χ as the q-periodic dense sequence χ(n mod q) on 1..=limit.
pub fn periodic_values(chi: &QuadraticCharacter, limit: u64) -> CoefficientSequence {
    let mut v = vec![0i64; limit as usize + 1];
    for (n, slot) in v.iter_mut().enumerate().skip(1) {
        *slot = i64::from(chi.eval(n as u64));
    }
    CoefficientSequence::from_dense_values(format!("chi{}", chi.modulus()), v)
}

/// The completely multiplicative function with g(p) = χ(p) for p ∤ q and
/// g(p) = ±1 (a fixed sign) for p | q. |g(n)| = 1 for every n.
#[derive(Debug, Clone)]
pub struct ModifiedCharacter {
    base: QuadraticCharacter,
    bad_prime_sign: i8,
}

impl ModifiedCharacter {
    pub fn new(base: QuadraticCharacter, bad_prime_sign: i8) -> Result<Self> {
        if bad_prime_sign != 1 && bad_prime_sign != -1 {
            return Err(Error::InvalidArgument(format!(
                "sign at primes dividing q must be ±1, got {bad_prime_sign}"
            )));
        }
        Ok(ModifiedCharacter {
            base,
            bad_prime_sign,
        })
    }

    /// The conventional choice: +1 at primes dividing q.
    pub fn with_default_sign(base: QuadraticCharacter) -> Self {
        ModifiedCharacter {
            base,
            bad_prime_sign: 1,
        }
    }

    pub fn base(&self) -> &QuadraticCharacter {
        &self.base
    }

    pub fn modulus(&self) -> u64 {
        self.base.modulus
    }

    pub fn bad_prime_sign(&self) -> i8 {
        self.bad_prime_sign
    }

    /// g at a prime: χ(p) when p ∤ q, the fixed sign when p | q.
    pub fn eval_prime(&self, p: u64) -> i32 {
        if self.base.modulus.is_multiple_of(p) {
            i32::from(self.bad_prime_sign)
        } else {
            self.base.eval(p)
        }
    }
}

/// g(n) on 1..=limit via the smallest-prime-factor recursion
/// g(n) = g(p)·g(n/p). Every value is ±1.
pub fn modified_values(
    g: &ModifiedCharacter,
    table: &SieveTable,
    limit: u64,
) -> Result<CoefficientSequence> {
    if limit == 0 {
        return Err(Error::InvalidArgument("limit must be ≥ 1".into()));
    }
    if limit > table.limit() {
        return Err(Error::Capacity {
            what: "modified_values",
            requested: limit,
            bound: table.limit(),
        });
    }
    let n = limit as usize;
    let mut vals = vec![0i64; n + 1];
    vals[1] = 1;
    for i in 2..=n {
        let p = table.smallest_prime_factor(i as u64);
        vals[i] = i64::from(g.eval_prime(p)) * vals[i / p as usize];
    }
    Ok(CoefficientSequence::from_dense_values(
        format!("g{}", g.modulus()),
        vals,
    ))
}

/// f = μ^(k)·g: ±1 on k-free integers, 0 elsewhere.
pub fn f_values(
    k: KFreeParams,
    g: &ModifiedCharacter,
    table: &SieveTable,
    limit: u64,
) -> Result<CoefficientSequence> {
    let gv = modified_values(g, table, limit)?;
    let ind = sieve::kfree_indicator(table, k, limit)?;
    let mut vals = vec![0i64; limit as usize + 1];
    for (i, slot) in vals.iter_mut().enumerate().skip(1) {
        *slot = gv.get(i as u64) * ind.get(i as u64);
    }
    Ok(CoefficientSequence::from_dense_values(
        format!("f{}q{}", k.k(), g.modulus()),
        vals,
    ))
}

/// Streaming producer of f(1), f(2), … up to x_max in fixed-width
/// segments, so partial sums run in memory bounded by the segment width
/// plus the primes below √x_max.
pub struct FValueStream {
    k: u32,
    g: ModifiedCharacter,
    x_max: u64,
    segment_width: u64,
    primes: Vec<u64>,
    // current segment state
    seg_lo: u64,
    buffer: Vec<i64>,
    pos: usize,
}

impl FValueStream {
    pub fn new(k: KFreeParams, g: &ModifiedCharacter, x_max: u64) -> Result<Self> {
        Self::with_segment_width(k, g, x_max, SEGMENT_WIDTH)
    }

    pub fn with_segment_width(
        k: KFreeParams,
        g: &ModifiedCharacter,
        x_max: u64,
        segment_width: u64,
    ) -> Result<Self> {
        if x_max == 0 {
            return Err(Error::InvalidArgument("x_max must be ≥ 1".into()));
        }
        if segment_width == 0 {
            return Err(Error::InvalidArgument("segment width must be ≥ 1".into()));
        }
        let root = sieve::integer_kth_root(x_max, 2);
        let primes = if root >= 2 {
            SieveTable::build(root)?.primes().to_vec()
        } else {
            Vec::new()
        };
        Ok(FValueStream {
            k: k.k(),
            g: g.clone(),
            x_max,
            segment_width,
            primes,
            seg_lo: 1,
            buffer: Vec::new(),
            pos: 0,
        })
    }

    fn fill_segment(&mut self) {
        let lo = self.seg_lo;
        let hi = (lo + self.segment_width - 1).min(self.x_max);
        let len = (hi - lo + 1) as usize;
        let mut residual: Vec<u64> = (lo..=hi).collect();
        let mut value = vec![1i64; len];
        for &p in &self.primes {
            if p > hi {
                break;
            }
            let gp = i64::from(self.g.eval_prime(p));
            let mut m = lo.div_ceil(p) * p;
            while m <= hi {
                let i = (m - lo) as usize;
                if value[i] != 0 {
                    let mut e = 0u32;
                    while residual[i].is_multiple_of(p) {
                        residual[i] /= p;
                        e += 1;
                    }
                    if e >= self.k {
                        value[i] = 0;
                    } else if e % 2 == 1 && gp == -1 {
                        value[i] = -value[i];
                    }
                }
                m += p;
            }
        }
        // Whatever remains after removing primes ≤ √hi is 1 or a single
        // prime with exponent 1 < k.
        for i in 0..len {
            if value[i] != 0 && residual[i] > 1 {
                value[i] *= i64::from(self.g.eval_prime(residual[i]));
            }
        }
        self.buffer = value;
        self.pos = 0;
        self.seg_lo = hi + 1;
    }
}

impl Iterator for FValueStream {
    type Item = i64;

    fn next(&mut self) -> Option<i64> {
        if self.pos >= self.buffer.len() {
            if self.seg_lo > self.x_max {
                return None;
            }
            self.fill_segment();
        }
        let v = self.buffer[self.pos];
        self.pos += 1;
        Some(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chi(d: i64) -> QuadraticCharacter {
        QuadraticCharacter::from_discriminant(d).unwrap()
    }

    #[test]
    fn kronecker_small_characters() {
        let c3 = chi(-3);
        assert_eq!(c3.modulus(), 3);
        assert_eq!(c3.eval(0), 0);
        assert_eq!(c3.eval(1), 1);
        assert_eq!(c3.eval(2), -1);

        let c4 = chi(-4);
        assert_eq!(c4.modulus(), 4);
        assert_eq!(c4.eval(1), 1);
        assert_eq!(c4.eval(2), 0);
        assert_eq!(c4.eval(3), -1);

        let c5 = chi(5);
        // quadratic residues mod 5 are {1, 4}
        for n in 0..5u64 {
            let is_residue = (1..5u64).any(|r| (r * r) % 5 == n);
            let expect = if n == 0 {
                0
            } else if is_residue {
                1
            } else {
                -1
            };
            assert_eq!(c5.eval(n), expect, "χ₅({n})");
        }
        assert_eq!(c5.eval(2), -1);
        assert_eq!(c5.eval(4), 1);
    }

    #[test]
    fn euler_criterion_for_prime_moduli() {
        // χ(n) ≡ n^((q−1)/2) (mod q) for the Kronecker character of prime
        // conductor q ∈ {3, 5, 7}.
        for (d, q) in [(-3i64, 3u64), (5, 5), (-7, 7)] {
            let c = chi(d);
            assert_eq!(c.modulus(), q);
            for n in 1..q {
                let mut pow = 1u64;
                for _ in 0..(q - 1) / 2 {
                    pow = pow * n % q;
                }
                let expect = if pow == 1 { 1 } else { -1 };
                assert_eq!(c.eval(n), expect, "Euler criterion at q={q}, n={n}");
            }
        }
    }

    #[test]
    fn rejects_non_fundamental_discriminants() {
        for d in [0i64, 1, 9, -9, 2, 3, -6, 45, 8 * 4] {
            assert!(
                QuadraticCharacter::from_discriminant(d).is_err(),
                "d = {d} must be rejected"
            );
        }
        for d in [-3i64, -4, 5, 8, -8, -7, 12, 13, -11] {
            assert!(
                QuadraticCharacter::from_discriminant(d).is_ok(),
                "d = {d} must be accepted"
            );
        }
    }

    #[test]
    fn table_constructor_accepts_and_rejects() {
        assert!(QuadraticCharacter::from_values(3, vec![0, 1, -1]).is_ok());
        assert!(QuadraticCharacter::from_values(4, vec![0, 1, 0, -1]).is_ok());
        // principal character mod 3
        let err = QuadraticCharacter::from_values(3, vec![0, 1, 1]).unwrap_err();
        assert!(matches!(err, Error::CharacterInvariant { q: 3, .. }));
        // wrong length
        assert!(QuadraticCharacter::from_values(4, vec![0, 1, -1]).is_err());
        // zero at a coprime residue
        assert!(QuadraticCharacter::from_values(3, vec![0, 1, 0]).is_err());
    }

    #[test]
    fn multiplicativity_witness_is_reported() {
        // χ(2)·χ(2) = 1 but the table claims χ(4) = −1.
        let err = QuadraticCharacter::from_values(5, vec![0, 1, 1, -1, -1]).unwrap_err();
        match err {
            Error::CharacterInvariant { reason, .. } => {
                assert!(
                    reason.contains("(2, 2)") || reason.contains("(2, 3)"),
                    "{reason}"
                );
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn modified_character_at_primes() {
        let g = ModifiedCharacter::with_default_sign(chi(-3));
        assert_eq!(g.eval_prime(3), 1);
        assert_eq!(g.eval_prime(2), -1);
        let g_neg = ModifiedCharacter::new(chi(-3), -1).unwrap();
        assert_eq!(g_neg.eval_prime(3), -1);
        assert!(ModifiedCharacter::new(chi(-3), 0).is_err());
    }

    #[test]
    fn modified_values_small() {
        let table = SieveTable::build(100).unwrap();
        let g = ModifiedCharacter::with_default_sign(chi(-3));
        let gv = modified_values(&g, &table, 100).unwrap();
        assert_eq!(gv.get(3), 1, "g(3) = +1 at the bad prime");
        assert_eq!(gv.get(6), -1, "g(6) = g(2)g(3) = (−1)(+1)");
        assert_eq!(gv.get(9), 1, "g(9) = g(3)²");
        for n in 1..=100 {
            assert_eq!(gv.get(n).abs(), 1, "|g({n})| = 1");
        }
    }

    #[test]
    fn modified_values_completely_multiplicative() {
        let limit = 10_000;
        let table = SieveTable::build(limit).unwrap();
        let g = ModifiedCharacter::with_default_sign(chi(-4));
        let gv = modified_values(&g, &table, limit).unwrap();
        for m in 1..=limit {
            for n in 1..=limit / m {
                assert_eq!(
                    gv.get(m * n),
                    gv.get(m) * gv.get(n),
                    "g({m}·{n}) ≠ g({m})g({n})"
                );
            }
        }
    }

    #[test]
    fn f_values_examples() {
        let table = SieveTable::build(100).unwrap();
        let g3 = ModifiedCharacter::with_default_sign(chi(-3));
        let f2 = f_values(KFreeParams::new(2).unwrap(), &g3, &table, 100).unwrap();
        assert_eq!(f2.get(9), 0, "9 is not squarefree");
        assert_eq!(f2.get(6), -1, "μ²(6)g(6)");
        let f3 = f_values(KFreeParams::new(3).unwrap(), &g3, &table, 100).unwrap();
        assert_eq!(f3.get(9), 1, "9 is cubefree, so f(9) = g(9)");
    }

    #[test]
    fn f_zero_exactly_off_kfree_support() {
        let limit = 5_000;
        let table = SieveTable::build(limit).unwrap();
        let g = ModifiedCharacter::with_default_sign(chi(5));
        for k in [2u32, 3] {
            let kp = KFreeParams::new(k).unwrap();
            let f = f_values(kp, &g, &table, limit).unwrap();
            let ind = sieve::kfree_indicator(&table, kp, limit).unwrap();
            for n in 1..=limit {
                if ind.get(n) == 1 {
                    assert_eq!(f.get(n).abs(), 1);
                } else {
                    assert_eq!(f.get(n), 0);
                }
            }
        }
    }

    #[test]
    fn character_partial_sums_bounded_by_modulus() {
        for d in [-3i64, -4, 5, 8] {
            let c = chi(d);
            let q = c.modulus();
            let mut s = 0i64;
            for n in 1..=100_000u64 {
                s += i64::from(c.eval(n));
                assert!(
                    s.unsigned_abs() <= q,
                    "|Σχ| exceeded q at n = {n} for d = {d}"
                );
            }
        }
    }

    #[test]
    fn period_prefix_sums_close_at_zero() {
        let c = chi(-7);
        let prefix = c.period_prefix_sums();
        assert_eq!(prefix[0], 0);
        let q = c.modulus() as usize;
        assert_eq!(
            prefix[q - 1] + i64::from(c.eval(0)),
            0,
            "period sums to zero"
        );
    }

    #[test]
    fn stream_matches_table_path() {
        let limit = 100_000;
        let table = SieveTable::build(limit).unwrap();
        for (k, d, sign) in [(2u32, -3i64, 1i8), (3, -4, 1), (2, 5, -1)] {
            let kp = KFreeParams::new(k).unwrap();
            let g = ModifiedCharacter::new(chi(d), sign).unwrap();
            let dense = f_values(kp, &g, &table, limit).unwrap();
            // deliberately small segments to cross many boundaries
            let stream = FValueStream::with_segment_width(kp, &g, limit, 1_000).unwrap();
            for (i, v) in stream.enumerate() {
                let n = i as u64 + 1;
                assert_eq!(v, dense.get(n), "stream f({n}) for k={k}, d={d}");
            }
        }
    }

    #[test]
    fn stream_counts_out_to_x_max() {
        let g = ModifiedCharacter::with_default_sign(chi(-3));
        let kp = KFreeParams::new(2).unwrap();
        let n = FValueStream::new(kp, &g, 12_345).unwrap().count();
        assert_eq!(n, 12_345);
    }
}
