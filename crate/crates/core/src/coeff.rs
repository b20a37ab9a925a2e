//! Exact integer coefficient sequences and Dirichlet-convolution algebra.
//!
//! Everything here is exact: values are `i64`, no floating point. The
//! sequences of interest are sparse (supported on k-th powers times
//! q-core integers) or dense (indicator-like), and the convolution picks
//! its strategy from the storage of its inputs.

use std::collections::HashMap;

use crate::character::{periodic_values, ModifiedCharacter, QuadraticCharacter};
use crate::error::{Error, Result};
use crate::sieve::{self, KFreeParams, SieveTable};

/// Backing storage of a [`CoefficientSequence`].
#[derive(Debug, Clone)]
pub enum Storage {
    /// `values[n]` is a(n); index 0 is unused and fixed to 0.
    Dense(Vec<i64>),
    /// Ascending `(n, value)` pairs with nonzero values; absent means 0.
    Sparse(Vec<(u64, i64)>),
}

/// An integer-valued arithmetic function materialized on `1..=limit`.
#[derive(Debug, Clone)]
pub struct CoefficientSequence {
    name: String,
    limit: u64,
    storage: Storage,
}

impl CoefficientSequence {
    /// Build a dense sequence from `values`, where `values[n]` is a(n).
    /// `values[0]` is ignored. The limit is `values.len() - 1`.
    pub fn from_dense_values(name: impl Into<String>, mut values: Vec<i64>) -> Self {
        assert!(values.len() >= 2, "dense sequence needs at least n = 1");
        values[0] = 0;
        CoefficientSequence {
            name: name.into(),
            limit: (values.len() - 1) as u64,
            storage: Storage::Dense(values),
        }
    }

    /// Build a sparse sequence from `(n, value)` pairs. Pairs must be
    /// strictly ascending in `n` and inside `1..=limit`; zero values are
    /// dropped.
    pub fn from_sparse_entries(
        name: impl Into<String>,
        limit: u64,
        entries: Vec<(u64, i64)>,
    ) -> Result<Self> {
        if limit == 0 {
            return Err(Error::InvalidArgument("sequence limit must be ≥ 1".into()));
        }
        let mut last = 0u64;
        for &(n, _) in &entries {
            if n == 0 || n > limit {
                return Err(Error::InvalidArgument(format!(
                    "sparse entry n = {n} outside 1..={limit}"
                )));
            }
            if n <= last {
                return Err(Error::InvalidArgument(format!(
                    "sparse entries must be strictly ascending at n = {n}"
                )));
            }
            last = n;
        }
        let entries = entries.into_iter().filter(|&(_, v)| v != 0).collect();
        Ok(CoefficientSequence {
            name: name.into(),
            limit,
            storage: Storage::Sparse(entries),
        })
    }

    /// The convolution identity δ₁ (1 at n = 1, else 0).
    pub fn delta_one(limit: u64) -> Self {
        CoefficientSequence {
            name: "delta1".into(),
            limit,
            storage: Storage::Sparse(vec![(1, 1)]),
        }
    }

    /// The constant sequence 𝟙 (1 at every n).
    pub fn all_ones(limit: u64) -> Self {
        CoefficientSequence {
            name: "one".into(),
            limit,
            storage: Storage::Dense(vec![1; limit as usize + 1]),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn is_sparse(&self) -> bool {
        matches!(self.storage, Storage::Sparse(_))
    }

    /// a(n) for 1 ≤ n ≤ limit. Panics outside that range.
    pub fn get(&self, n: u64) -> i64 {
        assert!(
            n >= 1 && n <= self.limit,
            "index {n} outside 1..={}",
            self.limit
        );
        match &self.storage {
            Storage::Dense(v) => v[n as usize],
            Storage::Sparse(entries) => entries
                .binary_search_by_key(&n, |&(m, _)| m)
                .map(|i| entries[i].1)
                .unwrap_or(0),
        }
    }

    /// Nonzero entries in ascending order of n.
    pub fn iter_nonzero(&self) -> Box<dyn Iterator<Item = (u64, i64)> + '_> {
        match &self.storage {
            Storage::Dense(v) => Box::new(
                v.iter()
                    .enumerate()
                    .skip(1)
                    .filter(|(_, &x)| x != 0)
                    .map(|(n, &x)| (n as u64, x)),
            ),
            Storage::Sparse(entries) => Box::new(entries.iter().copied()),
        }
    }

    /// Number of nonzero entries.
    pub fn support_len(&self) -> usize {
        match &self.storage {
            Storage::Dense(v) => v.iter().filter(|&&x| x != 0).count(),
            Storage::Sparse(entries) => entries.len(),
        }
    }

    /// Σ_{n≤x} |a(n)|, exactly.
    pub fn sum_abs(&self, x: u64) -> Result<u64> {
        if x > self.limit {
            return Err(Error::Capacity {
                what: "sum_abs",
                requested: x,
                bound: self.limit,
            });
        }
        Ok(self
            .iter_nonzero()
            .take_while(|&(n, _)| n <= x)
            .map(|(_, v)| v.unsigned_abs())
            .sum())
    }

    /// Σ_{n≤x} |a(n)| at each of the ascending checkpoints `xs`.
    pub fn abs_partial_sums(&self, xs: &[u64]) -> Result<Vec<u64>> {
        if let Some(&largest) = xs.last() {
            if largest > self.limit {
                return Err(Error::Capacity {
                    what: "abs_partial_sums",
                    requested: largest,
                    bound: self.limit,
                });
            }
        }
        let mut out = Vec::with_capacity(xs.len());
        let mut acc = 0u64;
        let mut it = self.iter_nonzero().peekable();
        for &x in xs {
            while let Some(&(n, v)) = it.peek() {
                if n > x {
                    break;
                }
                acc += v.unsigned_abs();
                it.next();
            }
            out.push(acc);
        }
        Ok(out)
    }
}

/// Dirichlet convolution: (a∗b)(n) = Σ_{de=n} a(d)·b(e), exact on 1..=N.
///
/// Sparse×dense iterates multiples of the sparse support; sparse×sparse
/// produces a sparse result.
pub fn dirichlet_convolve(
    a: &CoefficientSequence,
    b: &CoefficientSequence,
) -> Result<CoefficientSequence> {
    if a.limit != b.limit {
        return Err(Error::MismatchedLimits {
            left: a.limit,
            right: b.limit,
        });
    }
    let limit = a.limit;
    let name = format!("{}*{}", a.name, b.name);
    let out = match (&a.storage, &b.storage) {
        (Storage::Sparse(sa), Storage::Sparse(sb)) => {
            let mut acc: HashMap<u64, i64> = HashMap::new();
            for &(n1, v1) in sa {
                if n1 > limit {
                    break;
                }
                for &(n2, v2) in sb {
                    let n = match n1.checked_mul(n2) {
                        Some(n) if n <= limit => n,
                        _ => break,
                    };
                    *acc.entry(n).or_insert(0) += v1 * v2;
                }
            }
            let mut entries: Vec<(u64, i64)> = acc.into_iter().filter(|&(_, v)| v != 0).collect();
            entries.sort_unstable();
            CoefficientSequence {
                name,
                limit,
                storage: Storage::Sparse(entries),
            }
        }
        (Storage::Sparse(sa), _) => convolve_sparse_dense(name, limit, sa, b),
        (_, Storage::Sparse(sb)) => convolve_sparse_dense(name, limit, sb, a),
        (Storage::Dense(da), Storage::Dense(db)) => {
            let n = limit as usize;
            let mut out = vec![0i64; n + 1];
            for d in 1..=n {
                let vd = da[d];
                if vd == 0 {
                    continue;
                }
                for m in 1..=n / d {
                    out[d * m] += vd * db[m];
                }
            }
            CoefficientSequence {
                name,
                limit,
                storage: Storage::Dense(out),
            }
        }
    };
    Ok(out)
}

fn convolve_sparse_dense(
    name: String,
    limit: u64,
    sparse: &[(u64, i64)],
    dense: &CoefficientSequence,
) -> CoefficientSequence {
    let n = limit as usize;
    let mut out = vec![0i64; n + 1];
    for &(d, vd) in sparse {
        if d > limit {
            break;
        }
        let d = d as usize;
        for m in 1..=n / d {
            let vb = dense.get(m as u64);
            if vb != 0 {
                out[d * m] += vd * vb;
            }
        }
    }
    CoefficientSequence {
        name,
        limit,
        storage: Storage::Dense(out),
    }
}

/// The q-core integers 𝒩 = {n : p|n ⇒ p|q}, materialized up to a limit.
#[derive(Debug, Clone)]
pub struct QCoreSet {
    q: u64,
    limit: u64,
    prime_divisors: Vec<u64>,
    members: Vec<u64>,
}

impl QCoreSet {
    pub fn new(q: u64, limit: u64) -> Result<Self> {
        if q == 0 {
            return Err(Error::InvalidArgument("q must be ≥ 1".into()));
        }
        if limit == 0 {
            return Err(Error::InvalidArgument("limit must be ≥ 1".into()));
        }
        let prime_divisors = prime_divisors_of(q);
        let mut members = vec![1u64];
        fn extend(primes: &[u64], idx: usize, cur: u64, limit: u64, out: &mut Vec<u64>) {
            for i in idx..primes.len() {
                let mut v = cur;
                loop {
                    v = match v.checked_mul(primes[i]) {
                        Some(v) if v <= limit => v,
                        _ => break,
                    };
                    out.push(v);
                    extend(primes, i + 1, v, limit, out);
                }
            }
        }
        extend(&prime_divisors, 0, 1, limit, &mut members);
        members.sort_unstable();
        Ok(QCoreSet {
            q,
            limit,
            prime_divisors,
            members,
        })
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    /// Ascending members of 𝒩 ∩ [1, limit]; always contains 1.
    pub fn members(&self) -> &[u64] {
        &self.members
    }

    pub fn prime_divisors(&self) -> &[u64] {
        &self.prime_divisors
    }

    /// Membership by repeated division: strip gcd(n, q) factors until the
    /// remainder is coprime to q; n ∈ 𝒩 iff the remainder is 1.
    pub fn contains(&self, n: u64) -> bool {
        if n == 0 {
            return false;
        }
        let mut n = n;
        loop {
            let g = sieve::gcd_u64(n, self.q);
            if g == 1 {
                return n == 1;
            }
            n /= g;
        }
    }

    /// 𝟙_𝒩 as a sparse sequence on 1..=limit.
    pub fn indicator(&self) -> CoefficientSequence {
        CoefficientSequence {
            name: format!("core{}", self.q),
            limit: self.limit,
            storage: Storage::Sparse(self.members.iter().map(|&m| (m, 1)).collect()),
        }
    }
}

fn prime_divisors_of(q: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut m = q;
    let mut p = 2u64;
    while p * p <= m {
        if m.is_multiple_of(p) {
            out.push(p);
            while m.is_multiple_of(p) {
                m /= p;
            }
        }
        p += 1;
    }
    if m > 1 {
        out.push(m);
    }
    out
}

/// ν: value μ(d) at n = d^k, zero elsewhere. Sparse on k-th powers.
pub fn nu_values(k: KFreeParams, limit: u64) -> Result<CoefficientSequence> {
    let root = sieve::integer_kth_root(limit, k.k());
    let table = SieveTable::build(root.max(1))?;
    let mu = sieve::mobius_values(&table, root.max(1))?;
    let mut entries = Vec::new();
    for d in 1..=root {
        let v = mu.get(d);
        if v != 0 {
            entries.push((sieve::pow_u64(d, k.k()).expect("d^k ≤ limit"), v));
        }
    }
    CoefficientSequence::from_sparse_entries(format!("nu{}", k.k()), limit, entries)
}

/// ψ: value μ(d)·χ(d) at n = d^k, zero elsewhere.
pub fn psi_values(
    k: KFreeParams,
    chi: &QuadraticCharacter,
    limit: u64,
) -> Result<CoefficientSequence> {
    let root = sieve::integer_kth_root(limit, k.k());
    let table = SieveTable::build(root.max(1))?;
    let mu = sieve::mobius_values(&table, root.max(1))?;
    let mut entries = Vec::new();
    for d in 1..=root {
        let v = mu.get(d) * i64::from(chi.eval(d));
        if v != 0 {
            entries.push((sieve::pow_u64(d, k.k()).expect("d^k ≤ limit"), v));
        }
    }
    CoefficientSequence::from_sparse_entries(format!("psi{}", k.k()), limit, entries)
}

/// h = ν ∗ 𝟙_𝒩: the coefficients of the Dirichlet series P(s)/ζ(ks).
/// h(n) = Σ_{d^k·m = n, m ∈ 𝒩} μ(d); support is contained in {d^k·m}.
pub fn h_coefficients(k: KFreeParams, core: &QCoreSet, limit: u64) -> Result<CoefficientSequence> {
    if core.limit() < limit {
        return Err(Error::Capacity {
            what: "h_coefficients (q-core set too short)",
            requested: limit,
            bound: core.limit(),
        });
    }
    let root = sieve::integer_kth_root(limit, k.k());
    let table = SieveTable::build(root.max(1))?;
    let mu = sieve::mobius_values(&table, root.max(1))?;
    let mut acc: HashMap<u64, i64> = HashMap::new();
    for d in 1..=root {
        let v = mu.get(d);
        if v == 0 {
            continue;
        }
        let dk = sieve::pow_u64(d, k.k()).expect("d^k ≤ limit");
        for &m in core.members() {
            let n = match dk.checked_mul(m) {
                Some(n) if n <= limit => n,
                _ => break,
            };
            *acc.entry(n).or_insert(0) += v;
        }
    }
    let mut entries: Vec<(u64, i64)> = acc.into_iter().filter(|&(_, v)| v != 0).collect();
    entries.sort_unstable();
    Ok(CoefficientSequence {
        name: format!("h{}q{}", k.k(), core.q()),
        limit,
        storage: Storage::Sparse(entries),
    })
}

/// h̃ = ψ ∗ ν𝟙_𝒩 ∗ 𝟙_𝒩: the coefficients of P(s)/(L(ks,χ)·P(ks)).
/// ν𝟙_𝒩 is the pointwise product: value μ(d) at d^k for d ∈ 𝒩.
pub fn htilde_coefficients(
    k: KFreeParams,
    chi: &QuadraticCharacter,
    core: &QCoreSet,
    limit: u64,
) -> Result<CoefficientSequence> {
    if core.limit() < limit {
        return Err(Error::Capacity {
            what: "htilde_coefficients (q-core set too short)",
            requested: limit,
            bound: core.limit(),
        });
    }
    if core.q() != chi.modulus() {
        return Err(Error::InvalidArgument(format!(
            "q-core set is for q = {}, character has modulus {}",
            core.q(),
            chi.modulus()
        )));
    }
    let psi = psi_values(k, chi, limit)?;

    // ν𝟙_𝒩: squarefree d ∈ 𝒩 are exactly the products of distinct primes
    // dividing q, so iterate members and keep the squarefree ones.
    let mut nu_core = Vec::new();
    for &m in core.members() {
        if let Some(mk) = sieve::pow_u64(m, k.k()).filter(|&mk| mk <= limit) {
            if let Some(mu) = mobius_of_core_member(m, core.prime_divisors()) {
                nu_core.push((mk, mu));
            }
        }
    }
    nu_core.sort_unstable();
    let nu_core =
        CoefficientSequence::from_sparse_entries(format!("nu{}core", k.k()), limit, nu_core)?;

    let inner = dirichlet_convolve(&nu_core, &core.indicator())?;
    let mut out = dirichlet_convolve(&psi, &inner)?;
    out.name = format!("htilde{}q{}", k.k(), core.q());
    Ok(out)
}

/// μ(m) for m a q-core member, or None when m is not squarefree.
fn mobius_of_core_member(m: u64, primes: &[u64]) -> Option<i64> {
    if m == 1 {
        return Some(1);
    }
    let mut rest = m;
    let mut count = 0u32;
    for &p in primes {
        if rest.is_multiple_of(p) {
            rest /= p;
            count += 1;
            if rest.is_multiple_of(p) {
                return None;
            }
        }
    }
    debug_assert_eq!(rest, 1, "core member has a factor outside q's primes");
    Some(if count.is_multiple_of(2) { 1 } else { -1 })
}

/// One failed index of a factorization identity check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FactorizationMismatch {
    pub n: u64,
    pub lhs: i64,
    pub rhs: i64,
}

/// Result of checking f = χ∗h (k even) or f = χ∗h̃ (k odd) coefficientwise.
#[derive(Debug, Clone)]
pub struct FactorizationReport {
    pub k: u32,
    pub q: u64,
    pub limit: u64,
    pub mismatch: Option<FactorizationMismatch>,
}

impl FactorizationReport {
    pub fn holds(&self) -> bool {
        self.mismatch.is_none()
    }
}

/// Check the Euler-product factorization at the coefficient level, exactly,
/// for all n ≤ limit: f = χ∗h when k is even, f = χ∗h̃ when k is odd, where
/// χ denotes the q-periodic sequence χ(n mod q).
///
/// The identity encodes the +1 convention at primes dividing q, so the
/// modified character must carry that sign. A mismatch means an
/// implementation bug, never numerical noise: everything here is integer
/// arithmetic.
pub fn verify_factorization(
    k: KFreeParams,
    g: &ModifiedCharacter,
    limit: u64,
) -> Result<FactorizationReport> {
    if g.bad_prime_sign() != 1 {
        return Err(Error::InvalidArgument(
            "factorization identities require the +1 sign at primes dividing q".into(),
        ));
    }
    let chi = g.base();
    let q = chi.modulus();
    let table = SieveTable::build(limit)?;
    let f = crate::character::f_values(k, g, &table, limit)?;
    let core = QCoreSet::new(q, limit)?;
    let coeffs = if k.is_even() {
        h_coefficients(k, &core, limit)?
    } else {
        htilde_coefficients(k, chi, &core, limit)?
    };
    let chi_seq = periodic_values(chi, limit);
    let rhs = dirichlet_convolve(&coeffs, &chi_seq)?;
    let mut mismatch = None;
    for n in 1..=limit {
        let l = f.get(n);
        let r = rhs.get(n);
        if l != r {
            mismatch = Some(FactorizationMismatch { n, lhs: l, rhs: r });
            break;
        }
    }
    Ok(FactorizationReport {
        k: k.k(),
        q,
        limit,
        mismatch,
    })
}
