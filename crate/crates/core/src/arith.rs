//! Prime-exponent arithmetic.
//!
//! Every natural `n` is stored as its sparse exponent vector `α(n)` over the
//! primes, and every positive rational `q` as `α(q) ∈ ℤ^(∞)`. The multiplicative
//! group `ℚ₊` then becomes componentwise addition of finitely supported integer
//! vectors, which is what the multiplicative Toeplitz entries `ĉ(j/k)` index.

use std::cmp::Ordering;
use std::fmt;
use std::sync::OnceLock;

use crate::error::{domain, Result};

/// Number of primes in the trial-division table.
pub const PRIME_TABLE_LEN: usize = 1024;

/// Largest natural accepted by [`factor`].
pub const MAX_NATURAL: u64 = i64::MAX as u64;

fn prime_table() -> &'static [u64] {
    static TABLE: OnceLock<Vec<u64>> = OnceLock::new();
    TABLE.get_or_init(|| {
        // the 1024th prime is 8161
        let limit = 8200usize;
        let mut composite = vec![false; limit + 1];
        let mut primes = Vec::with_capacity(PRIME_TABLE_LEN);
        for i in 2..=limit {
            if composite[i] {
                continue;
            }
            primes.push(i as u64);
            let mut j = i * i;
            while j <= limit {
                composite[j] = true;
                j += i;
            }
        }
        primes.truncate(PRIME_TABLE_LEN);
        primes
    })
}

/// The first [`PRIME_TABLE_LEN`] primes, ascending.
pub fn primes() -> &'static [u64] {
    prime_table()
}

/// The `i`-th prime, zero-based (`nth_prime(0) == 2`), if it lies in the table.
pub fn nth_prime(i: usize) -> Option<u64> {
    prime_table().get(i).copied()
}

/// Zero-based position of `p` in the prime table.
pub fn prime_index(p: u64) -> Option<usize> {
    prime_table().binary_search(&p).ok()
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller–Rabin for 64-bit inputs.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

// Pollard–Brent; only reached for composites with every factor above the table.
fn pollard_brent(n: u64) -> u64 {
    let mut c = 1u64;
    loop {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut x, mut y, mut d) = (2u64, 2u64, 1u64);
        while d == 1 {
            x = f(x);
            y = f(f(y));
            d = gcd(x.abs_diff(y), n);
        }
        if d != n {
            return d;
        }
        c += 1;
    }
}

fn push_large_factors(n: u64, out: &mut Vec<u64>) {
    if n == 1 {
        return;
    }
    if is_prime(n) {
        out.push(n);
        return;
    }
    let d = pollard_brent(n);
    push_large_factors(d, out);
    push_large_factors(n / d, out);
}

/// A natural number as its sorted list of `(prime, exponent)` pairs.
///
/// Pairs are keyed by the prime itself rather than its index so that primes
/// beyond the table need no index; ordering by prime and by index agree.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct FactoredNatural {
    factors: Vec<(u64, u32)>,
}

impl FactoredNatural {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn factors(&self) -> &[(u64, u32)] {
        &self.factors
    }

    /// `Π p^α`, or `None` when the product overflows `u64`.
    pub fn reconstruct(&self) -> Option<u64> {
        self.factors.iter().try_fold(1u64, |acc, &(p, e)| {
            p.checked_pow(e).and_then(|pe| acc.checked_mul(pe))
        })
    }

    pub fn to_rational(&self) -> FactoredRational {
        FactoredRational {
            factors: self.factors.iter().map(|&(p, e)| (p, e as i32)).collect(),
        }
    }
}

/// Factor `1 ≤ n ≤ 2^63 − 1`.
pub fn factor(n: u64) -> Result<FactoredNatural> {
    if n == 0 {
        return domain("cannot factor 0");
    }
    if n > MAX_NATURAL {
        return domain(format!("{n} exceeds 2^63 - 1"));
    }
    let mut factors = Vec::new();
    let mut rest = n;
    for &p in prime_table() {
        if p * p > rest {
            break;
        }
        if rest.is_multiple_of(p) {
            let mut e = 0;
            while rest.is_multiple_of(p) {
                rest /= p;
                e += 1;
            }
            factors.push((p, e));
        }
    }
    if rest > 1 {
        let mut large = Vec::new();
        push_large_factors(rest, &mut large);
        large.sort_unstable();
        for p in large {
            match factors.last_mut() {
                Some((q, e)) if *q == p => *e += 1,
                _ => factors.push((p, 1)),
            }
        }
    }
    Ok(FactoredNatural { factors })
}

/// A positive rational `p^α` with `α ∈ ℤ^(∞)` stored sparsely.
///
/// Canonical form: primes strictly increasing, no zero exponents. The derived
/// ordering is lexicographic on the pair list; it is a total order used only
/// for canonical iteration, not the numeric order on `ℚ₊`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct FactoredRational {
    factors: Vec<(u64, i32)>,
}

impl FactoredRational {
    pub fn unit() -> Self {
        Self::default()
    }

    /// Build from arbitrary `(prime, exponent)` pairs; repeated primes are merged.
    ///
    /// The caller guarantees that every key is prime.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (u64, i32)>) -> Self {
        let mut v: Vec<(u64, i32)> = pairs.into_iter().collect();
        v.sort_unstable_by_key(|&(p, _)| p);
        let mut factors: Vec<(u64, i32)> = Vec::with_capacity(v.len());
        for (p, e) in v {
            match factors.last_mut() {
                Some((q, f)) if *q == p => *f += e,
                _ => factors.push((p, e)),
            }
        }
        factors.retain(|&(_, e)| e != 0);
        Self { factors }
    }

    pub fn from_natural(n: u64) -> Result<Self> {
        Ok(factor(n)?.to_rational())
    }

    /// `a / b` for naturals `a, b ≥ 1`.
    pub fn from_ratio(a: u64, b: u64) -> Result<Self> {
        ratio(a, b)
    }

    pub fn factors(&self) -> &[(u64, i32)] {
        &self.factors
    }

    pub fn is_unit(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn is_natural(&self) -> bool {
        self.factors.iter().all(|&(_, e)| e >= 0)
    }

    fn part(&self, positive: bool) -> Option<u64> {
        self.factors
            .iter()
            .filter(|&&(_, e)| (e > 0) == positive)
            .try_fold(1u64, |acc, &(p, e)| {
                p.checked_pow(e.unsigned_abs())
                    .and_then(|pe| acc.checked_mul(pe))
            })
    }

    /// Numerator in lowest terms, `None` on overflow.
    pub fn numerator(&self) -> Option<u64> {
        self.part(true)
    }

    /// Denominator in lowest terms, `None` on overflow.
    pub fn denominator(&self) -> Option<u64> {
        self.part(false)
    }

    pub fn inv(&self) -> Self {
        Self {
            factors: self.factors.iter().map(|&(p, e)| (p, -e)).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let (a, b) = (&self.factors, &other.factors);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    let e = a[i].1 + b[j].1;
                    if e != 0 {
                        out.push((a[i].0, e));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Self { factors: out }
    }

    pub fn div(&self, other: &Self) -> Self {
        self.mul(&other.inv())
    }

    /// Integer power `q^k`.
    pub fn pow(&self, k: i32) -> Self {
        Self {
            factors: if k == 0 {
                Vec::new()
            } else {
                self.factors.iter().map(|&(p, e)| (p, e * k)).collect()
            },
        }
    }

    /// Exponent of `p` in `q`.
    pub fn exponent(&self, p: u64) -> i32 {
        self.factors
            .binary_search_by_key(&p, |&(q, _)| q)
            .map(|i| self.factors[i].1)
            .unwrap_or(0)
    }

    /// `ln q = Σ α_j ln p_j`.
    pub fn ln(&self) -> f64 {
        self.factors
            .iter()
            .map(|&(p, e)| e as f64 * (p as f64).ln())
            .sum()
    }

    pub fn to_f64(&self) -> f64 {
        self.factors
            .iter()
            .map(|&(p, e)| (p as f64).powi(e))
            .product()
    }

    /// Largest prime in the support, `None` for the unit.
    pub fn max_prime(&self) -> Option<u64> {
        self.factors.last().map(|&(p, _)| p)
    }
}

impl fmt::Display for FactoredRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.numerator(), self.denominator()) {
            (Some(a), Some(1)) => write!(f, "{a}"),
            (Some(a), Some(b)) => write!(f, "{a}/{b}"),
            _ => {
                let parts: Vec<String> = self
                    .factors
                    .iter()
                    .map(|(p, e)| format!("{p}^{e}"))
                    .collect();
                write!(f, "{}", parts.join("*"))
            }
        }
    }
}

/// `α(q)` of `q = j / k`.
pub fn ratio(j: u64, k: u64) -> Result<FactoredRational> {
    if j == 0 || k == 0 {
        return domain("ratio of zero");
    }
    let g = gcd(j, k);
    Ok(factor(j / g)?.to_rational().div(&factor(k / g)?.to_rational()))
}

pub fn rational_mul(a: &FactoredRational, b: &FactoredRational) -> FactoredRational {
    a.mul(b)
}

pub fn rational_inv(a: &FactoredRational) -> FactoredRational {
    a.inv()
}

/// Table of `d_m(n)` for `0 ≤ n ≤ n_max` (entry 0 unused and zero).
///
/// `d_1 ≡ 1` and `d_{m+1} = d_m ∗ 1`, one harmonic sieve pass per order.
pub fn divisor_function(m: u32, n_max: usize) -> Result<Vec<u64>> {
    if m == 0 {
        return domain("divisor function order must be >= 1");
    }
    let mut d = vec![1u64; n_max + 1];
    d[0] = 0;
    for _ in 1..m {
        let mut next = vec![0u64; n_max + 1];
        for a in 1..=n_max {
            let da = d[a];
            let mut b = a;
            while b <= n_max {
                next[b] += da;
                b += a;
            }
        }
        d = next;
    }
    Ok(d)
}
