//! Integer substrate: base-p digit sums, the floor criterion, prime tables,
//! radicals, falling factorials, and squarefree products kept as prime lists.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Default upper bound on [`PrimeSieve`] limits (about 100 MB of sieve state).
pub const DEFAULT_SIEVE_BUDGET: u64 = 200_000_000;

/// Sum of the base-`p` digits of `n`.
pub fn digit_sum(n: u64, p: u64) -> Result<u64> {
    if p < 2 {
        return Err(Error::InvalidBase(p));
    }
    Ok(digit_sum_unchecked(n, p))
}

#[inline]
pub(crate) fn digit_sum_unchecked(mut n: u64, p: u64) -> u64 {
    debug_assert!(p >= 2);
    let mut s = 0;
    while n > 0 {
        s += n % p;
        n /= p;
    }
    s
}

/// `s_p(n) >= p`.
#[inline]
pub(crate) fn digit_condition(n: u64, p: u64) -> bool {
    // s_p(n) <= n, so p > n never qualifies; skip the division loop.
    p <= n && digit_sum_unchecked(n, p) >= p
}

/// `floor((n-1)/(p-1)) > floor(n/p)`.
///
/// For primes `p > sqrt(n)` this is equivalent to `s_p(n) >= p`.
pub fn floor_condition(n: u64, p: u64) -> bool {
    assert!(n >= 1 && p >= 2, "floor_condition requires n >= 1 and p >= 2");
    (n - 1) / (p - 1) > n / p
}

/// Largest prime candidate that can satisfy `s_p(n) >= p`.
///
/// Every prime `p > (n+1)/λ` has `s_p(n) < p`, with λ = 2 for odd `n` and
/// λ = 3 for even `n`; the floor makes the bound inclusive.
pub fn lambda_prime_bound(n: u64) -> u64 {
    assert!(n >= 1, "lambda_prime_bound requires n >= 1");
    let lambda = if n % 2 == 1 { 2 } else { 3 };
    (n + 1) / lambda
}

/// `n (n-1) ... (n-k+1)`, with the empty product for `k = 0`.
pub fn falling_factorial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    (0..k).fold(BigUint::one(), |acc, i| acc * (n - i))
}

/// `true` iff the prime `p` divides `(n)_k`.
pub(crate) fn divides_falling_factorial(p: u64, n: u64, k: u64) -> bool {
    if k == 0 {
        return false;
    }
    if k > n {
        // The product contains the factor 0.
        return true;
    }
    if k >= p {
        return true;
    }
    // Among n, n-1, ..., n-k+1 one is divisible by p iff n mod p < k.
    n % p < k
}

/// Squarefree kernel of `n`: the product of its distinct prime divisors.
pub fn radical(n: u64) -> SquarefreeProduct {
    assert!(n >= 1, "radical requires n >= 1");
    let mut m = n;
    let mut primes = Vec::new();
    if m.is_multiple_of(2) {
        primes.push(2);
        while m.is_multiple_of(2) {
            m /= 2;
        }
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= m {
        if m.is_multiple_of(d) {
            primes.push(d);
            while m.is_multiple_of(d) {
                m /= d;
            }
        }
        d += 2;
    }
    if m > 1 {
        primes.push(m);
    }
    SquarefreeProduct::from_sorted_unchecked(primes)
}

/// Deterministic trial-division primality test.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n.is_multiple_of(2) || n.is_multiple_of(3) {
        return false;
    }
    let mut d = 5u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) || n.is_multiple_of(d + 2) {
            return false;
        }
        d += 6;
    }
    true
}

/// All primes up to a fixed limit, in increasing order. Immutable once built.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimeSieve {
    limit: u64,
    primes: Vec<u64>,
}

impl PrimeSieve {
    pub fn new(limit: u64) -> Result<Self> {
        Self::with_budget(limit, DEFAULT_SIEVE_BUDGET)
    }

    pub fn with_budget(limit: u64, budget: u64) -> Result<Self> {
        if limit == 0 {
            return Err(Error::InvalidArgument("sieve limit must be at least 1".into()));
        }
        if limit > budget {
            return Err(Error::SieveBudget {
                requested: limit,
                budget,
            });
        }
        Ok(Self {
            limit,
            primes: odd_sieve(limit),
        })
    }

    /// A sieve large enough for every per-index computation up to `n`
    /// (all prime supports lie at or below `(n+1)/2`).
    pub fn for_index(n: u64) -> Result<Self> {
        Self::new(required_limit(n))
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    /// Primes `<= bound`. Panics if the sieve does not reach `bound`.
    pub fn up_to(&self, bound: u64) -> &[u64] {
        self.check_covers(bound)
            .unwrap_or_else(|e| panic!("{e}"));
        let end = self.primes.partition_point(|&p| p <= bound);
        &self.primes[..end]
    }

    pub fn check_covers(&self, bound: u64) -> Result<()> {
        if bound > self.limit {
            Err(Error::InsufficientSieve {
                have: self.limit,
                need: bound,
            })
        } else {
            Ok(())
        }
    }

    pub fn contains(&self, p: u64) -> bool {
        self.primes.binary_search(&p).is_ok()
    }

    pub fn len(&self) -> usize {
        self.primes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }
}

/// Sieve limit needed to evaluate every denominator family at index `n`,
/// including the `n+1` shift used by `db`.
pub fn required_limit(n: u64) -> u64 {
    ((n + 2) / 2).max(1)
}

fn odd_sieve(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    // Index i stands for 2i+1.
    let half = ((limit - 1) / 2 + 1) as usize;
    let mut composite = vec![false; half];
    composite[0] = true;
    let mut i = 1usize;
    while (2 * i + 1) * (2 * i + 1) < 2 * half + 1 {
        if !composite[i] {
            let p = 2 * i + 1;
            let mut j = (p * p - 1) / 2;
            while j < half {
                composite[j] = true;
                j += p;
            }
        }
        i += 1;
    }
    let mut primes = Vec::with_capacity(estimate_pi(limit));
    primes.push(2);
    primes.extend(
        composite
            .iter()
            .enumerate()
            .filter(|(_, &c)| !c)
            .map(|(i, _)| 2 * i as u64 + 1)
            .filter(|&p| p <= limit),
    );
    primes
}

fn estimate_pi(limit: u64) -> usize {
    let x = limit as f64;
    if x < 17.0 {
        return 8;
    }
    (1.26 * x / x.ln()) as usize
}

/// A squarefree positive integer held both as its sorted prime support and
/// as its exact value.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SquarefreeProduct {
    primes: Vec<u64>,
    value: BigUint,
}

impl SquarefreeProduct {
    pub fn one() -> Self {
        Self {
            primes: Vec::new(),
            value: BigUint::one(),
        }
    }

    /// Builds a product from a strictly increasing list of primes.
    pub fn from_primes(primes: Vec<u64>) -> Result<Self> {
        if let Some(w) = primes.windows(2).find(|w| w[0] >= w[1]) {
            return Err(Error::NotSquarefree(format!(
                "prime list not strictly increasing at {} >= {}",
                w[0], w[1]
            )));
        }
        if let Some(&p) = primes.iter().find(|&&p| !is_prime(p)) {
            return Err(Error::NotSquarefree(format!("{p} is not prime")));
        }
        Ok(Self::from_sorted_unchecked(primes))
    }

    pub(crate) fn from_sorted_unchecked(primes: Vec<u64>) -> Self {
        debug_assert!(primes.windows(2).all(|w| w[0] < w[1]));
        let value = product_of(&primes);
        Self { primes, value }
    }

    /// Recovers the prime support of `value` by trial division over `sieve`.
    pub fn from_value(value: &BigUint, sieve: &PrimeSieve) -> Result<Self> {
        if value.is_zero() {
            return Err(Error::NotSquarefree("0".into()));
        }
        let mut rest = value.clone();
        let mut primes = Vec::new();
        for &p in sieve.primes() {
            if rest.is_one() {
                break;
            }
            let bp = BigUint::from(p);
            if (&rest % &bp).is_zero() {
                rest /= &bp;
                if (&rest % &bp).is_zero() {
                    return Err(Error::NotSquarefree(format!("{value} is divisible by {p}^2")));
                }
                primes.push(p);
            }
        }
        if !rest.is_one() {
            return Err(Error::NotSquarefree(format!(
                "{value} has a cofactor {rest} not covered by the sieve"
            )));
        }
        Ok(Self {
            primes,
            value: value.clone(),
        })
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    pub fn value(&self) -> &BigUint {
        &self.value
    }

    /// Number of distinct prime factors.
    pub fn omega(&self) -> usize {
        self.primes.len()
    }

    pub fn is_one(&self) -> bool {
        self.primes.is_empty()
    }

    pub fn is_even(&self) -> bool {
        self.primes.first() == Some(&2)
    }

    pub fn contains(&self, p: u64) -> bool {
        self.primes.binary_search(&p).is_ok()
    }

    /// `self | other`.
    pub fn divides(&self, other: &Self) -> bool {
        self.primes.iter().all(|&p| other.contains(p))
    }

    pub fn gcd(&self, other: &Self) -> Self {
        self.merge(other, |a, b| a && b)
    }

    pub fn lcm(&self, other: &Self) -> Self {
        self.merge(other, |a, b| a || b)
    }

    /// `self / gcd(self, other)`.
    pub fn without(&self, other: &Self) -> Self {
        self.merge(other, |a, b| a && !b)
    }

    /// Product of two coprime factors.
    pub fn product(&self, other: &Self) -> Result<Self> {
        if !self.gcd(other).is_one() {
            return Err(Error::NotSquarefree(format!(
                "{} and {} share a prime factor",
                self, other
            )));
        }
        Ok(self.lcm(other))
    }

    /// `self / other`, requiring `other | self`.
    pub fn quotient(&self, other: &Self) -> Result<Self> {
        if !other.divides(self) {
            return Err(Error::InvalidArgument(format!("{other} does not divide {self}")));
        }
        Ok(self.without(other))
    }

    /// Keeps the primes for which `keep` holds.
    pub fn filter(&self, mut keep: impl FnMut(u64) -> bool) -> Self {
        Self::from_sorted_unchecked(self.primes.iter().copied().filter(|&p| keep(p)).collect())
    }

    fn merge(&self, other: &Self, rule: impl Fn(bool, bool) -> bool) -> Self {
        let (a, b) = (&self.primes, &other.primes);
        let (mut i, mut j) = (0, 0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        while i < a.len() || j < b.len() {
            let ord = match (a.get(i), b.get(j)) {
                (Some(x), Some(y)) => x.cmp(y),
                (Some(_), None) => Ordering::Less,
                _ => Ordering::Greater,
            };
            let (p, in_a, in_b) = match ord {
                Ordering::Less => {
                    i += 1;
                    (a[i - 1], true, false)
                }
                Ordering::Greater => {
                    j += 1;
                    (b[j - 1], false, true)
                }
                Ordering::Equal => {
                    i += 1;
                    j += 1;
                    (a[i - 1], true, true)
                }
            };
            if rule(in_a, in_b) {
                out.push(p);
            }
        }
        Self::from_sorted_unchecked(out)
    }
}

impl Default for SquarefreeProduct {
    fn default() -> Self {
        Self::one()
    }
}

impl fmt::Display for SquarefreeProduct {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl PartialEq<u64> for SquarefreeProduct {
    fn eq(&self, other: &u64) -> bool {
        self.value == BigUint::from(*other)
    }
}

fn product_of(primes: &[u64]) -> BigUint {
    let mut acc = BigUint::one();
    let mut word: u64 = 1;
    for &p in primes {
        match word.checked_mul(p) {
            Some(w) => word = w,
            None => {
                acc *= word;
                word = p;
            }
        }
    }
    acc * word
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn digit_sum_examples() {
        assert_eq!(digit_sum(0, 7).unwrap(), 0);
        assert_eq!(digit_sum(10, 3).unwrap(), 2);
        for p in [11, 13, 101] {
            assert_eq!(digit_sum(10, p).unwrap(), 10);
        }
        assert!(matches!(digit_sum(5, 1), Err(Error::InvalidBase(1))));
        assert!(matches!(digit_sum(5, 0), Err(Error::InvalidBase(0))));
    }

    #[test]
    fn floor_condition_examples() {
        assert!(floor_condition(7, 3));
        assert!(!floor_condition(4, 3));
        assert!(floor_condition(9, 5));
    }

    #[test]
    fn lambda_bound_examples() {
        assert_eq!(lambda_prime_bound(7), 4);
        assert_eq!(lambda_prime_bound(8), 3);
        assert_eq!(lambda_prime_bound(1), 1);
    }

    #[test]
    fn radical_examples() {
        assert_eq!(radical(12), 6);
        assert_eq!(radical(1), 1);
        assert_eq!(radical(10), 10);
        assert_eq!(radical(1 << 20).primes(), &[2]);
        assert_eq!(radical(999_983 * 2).primes(), &[2, 999_983]);
    }

    #[test]
    fn falling_factorial_examples() {
        assert_eq!(falling_factorial(5, 2), BigUint::from(20u32));
        assert_eq!(falling_factorial(9, 0), BigUint::one());
        assert_eq!(falling_factorial(0, 0), BigUint::one());
        assert_eq!(falling_factorial(3, 5), BigUint::zero());
    }

    #[test]
    fn divisibility_of_falling_factorial_matches_bigint() {
        let sieve = PrimeSieve::new(60).unwrap();
        for n in 0..40u64 {
            for k in 0..8u64 {
                let ff = falling_factorial(n, k);
                for &p in sieve.primes() {
                    let expect = (&ff % p).is_zero();
                    assert_eq!(divides_falling_factorial(p, n, k), expect, "p={p} n={n} k={k}");
                }
            }
        }
    }

    #[test]
    fn sieve_examples() {
        assert_eq!(PrimeSieve::new(10).unwrap().primes(), &[2, 3, 5, 7]);
        assert!(PrimeSieve::new(1).unwrap().is_empty());
        let s = PrimeSieve::new(30).unwrap();
        assert_eq!(s.len(), 10);
        assert_eq!(*s.primes().last().unwrap(), 29);
        assert_eq!(PrimeSieve::new(2).unwrap().primes(), &[2]);
        assert_eq!(PrimeSieve::new(3).unwrap().primes(), &[2, 3]);
    }

    #[test]
    fn sieve_rejects_oversized_limit() {
        assert!(matches!(
            PrimeSieve::with_budget(1_000, 100),
            Err(Error::SieveBudget { requested: 1000, budget: 100 })
        ));
        assert!(PrimeSieve::new(0).is_err());
    }

    #[test]
    fn sieve_agrees_with_trial_division() {
        let s = PrimeSieve::new(20_000).unwrap();
        let expect: Vec<u64> = (1..=20_000).filter(|&n| is_prime(n)).collect();
        assert_eq!(s.primes(), expect.as_slice());
        assert_eq!(s.len(), 2262);
    }

    #[test]
    fn squarefree_set_operations() {
        let a = SquarefreeProduct::from_primes(vec![2, 3, 7]).unwrap();
        let b = SquarefreeProduct::from_primes(vec![3, 5]).unwrap();
        assert_eq!(a, 42);
        assert_eq!(a.gcd(&b), 3);
        assert_eq!(a.lcm(&b), 210);
        assert_eq!(a.without(&b), 14);
        assert!(a.product(&b).is_err());
        assert_eq!(a.without(&b).product(&b).unwrap(), 210);
        assert!(SquarefreeProduct::from_primes(vec![3, 3]).is_err());
        assert!(SquarefreeProduct::from_primes(vec![4]).is_err());
        assert!(SquarefreeProduct::one().divides(&a));
        assert!(a.quotient(&b).is_err());
    }

    #[test]
    fn from_value_rejects_squares() {
        let sieve = PrimeSieve::new(50).unwrap();
        assert!(SquarefreeProduct::from_value(&BigUint::from(12u32), &sieve).is_err());
        assert!(SquarefreeProduct::from_value(&BigUint::from(53u32), &sieve).is_err());
        assert_eq!(
            SquarefreeProduct::from_value(&BigUint::from(30u32), &sieve)
                .unwrap()
                .primes(),
            &[2, 3, 5]
        );
    }
}
