//! Denominator families of Bernoulli polynomials, evaluated from prime and
//! digit-sum conditions alone.
//!
//! Every function here takes a shared [`PrimeSieve`]. A sieve built with
//! [`PrimeSieve::for_index`]`(n)` covers every call at index `n` or below;
//! calls beyond the sieve's reach panic.
//!
//! Notation used in the docs below:
//!
//! * `D(n)` is `denom(B_n(x) - B_n)`, the product of primes `p` with `s_p(n) >= p`.
//! * `D-(n)` and `D+(n)` split `D(n)` into primes below and above `sqrt(n)`.
//! * `shared(n)`, `coprime(n)` split `D(n)` by `p | n` versus `p ∤ n`;
//!   `complement(n)` collects the `p | n` with `s_p(n) < p`, so that
//!   `shared(n) * complement(n) = rad(n)`.
//! * `db(n)` is `denom(B_n(x))` and `db_k(n, k)` the denominator of its
//!   `k`-th derivative.

use num_bigint::BigUint;

use crate::arith::{
    digit_condition, divides_falling_factorial, floor_condition, is_prime, lambda_prime_bound,
    radical, PrimeSieve, SquarefreeProduct,
};

/// Every denominator quantity attached to one index `n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DenomProfile {
    pub n: u64,
    pub dd: SquarefreeProduct,
    pub dd_minus: SquarefreeProduct,
    pub dd_plus: SquarefreeProduct,
    pub dd_shared: SquarefreeProduct,
    pub dd_coprime: SquarefreeProduct,
    pub dd_complement: SquarefreeProduct,
    pub dn: SquarefreeProduct,
    pub db: SquarefreeProduct,
    pub ds: BigUint,
    pub rad_n: SquarefreeProduct,
    pub rad_n1: SquarefreeProduct,
    pub omega_plus: usize,
}

impl DenomProfile {
    /// `D(n) = rad(n+1)`.
    pub fn in_rad_set(&self) -> bool {
        self.dd == self.rad_n1
    }

    /// Checks the decomposition identities tying the fields together.
    pub fn check_invariants(&self) -> Result<(), String> {
        let fail = |what: &str| Err(format!("n={}: {what}", self.n));
        if self.dd_minus.product(&self.dd_plus).ok().as_ref() != Some(&self.dd) {
            return fail("D != D- * D+");
        }
        if self.dd_shared.product(&self.dd_coprime).ok().as_ref() != Some(&self.dd) {
            return fail("D != shared * coprime");
        }
        if self.dd_shared.product(&self.dd_complement).ok().as_ref() != Some(&self.rad_n) {
            return fail("rad(n) != shared * complement");
        }
        if self.omega_plus != self.dd_plus.omega() {
            return fail("omega_plus != omega(D+)");
        }
        if (self.omega_plus as u128).pow(2) >= self.n as u128 {
            return fail("omega(D+) >= sqrt(n)");
        }
        if self.db != self.dd.lcm(&self.dn) {
            return fail("db != lcm(D, dn)");
        }
        Ok(())
    }
}

/// The split of `D(n)` and `rad(n)` by divisibility of `n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DivisibilitySplit {
    pub shared: SquarefreeProduct,
    pub coprime: SquarefreeProduct,
    pub complement: SquarefreeProduct,
}

fn qualifying_primes(n: u64, sieve: &PrimeSieve) -> impl Iterator<Item = u64> + '_ {
    sieve
        .up_to(lambda_prime_bound(n))
        .iter()
        .copied()
        .filter(move |&p| digit_condition(n, p))
}

/// `D(n)`: product of the primes `p` with `s_p(n) >= p`.
pub fn dd(n: u64, sieve: &PrimeSieve) -> SquarefreeProduct {
    assert!(n >= 1, "dd requires n >= 1");
    SquarefreeProduct::from_sorted_unchecked(qualifying_primes(n, sieve).collect())
}

/// `(D-(n), D+(n))`. A prime with `p^2 = n` has `s_p(n) = 1` and never
/// appears, so the two parts multiply back to `D(n)`.
pub fn dd_split_sqrt(n: u64, sieve: &PrimeSieve) -> (SquarefreeProduct, SquarefreeProduct) {
    assert!(n >= 1, "dd_split_sqrt requires n >= 1");
    let (minus, plus): (Vec<u64>, Vec<u64>) =
        qualifying_primes(n, sieve).partition(|&p| (p as u128) * (p as u128) < n as u128);
    (
        SquarefreeProduct::from_sorted_unchecked(minus),
        SquarefreeProduct::from_sorted_unchecked(plus),
    )
}

/// `D+(n)`.
pub fn dd_plus(n: u64, sieve: &PrimeSieve) -> SquarefreeProduct {
    dd_split_sqrt(n, sieve).1
}

/// Splits `D(n)` and `rad(n)` into `shared(n)`, `coprime(n)` and `complement(n)`.
pub fn dd_split_divisibility(n: u64, sieve: &PrimeSieve) -> DivisibilitySplit {
    assert!(n >= 1, "dd_split_divisibility requires n >= 1");
    let (shared, coprime): (Vec<u64>, Vec<u64>) =
        qualifying_primes(n, sieve).partition(|&p| n.is_multiple_of(p));
    let complement = radical(n).filter(|p| !digit_condition(n, p));
    DivisibilitySplit {
        shared: SquarefreeProduct::from_sorted_unchecked(shared),
        coprime: SquarefreeProduct::from_sorted_unchecked(coprime),
        complement,
    }
}

/// `coprime(n)`: the primes `p ∤ n` with `s_p(n) >= p`.
pub fn dd_coprime(n: u64, sieve: &PrimeSieve) -> SquarefreeProduct {
    assert!(n >= 1, "dd_coprime requires n >= 1");
    SquarefreeProduct::from_sorted_unchecked(
        qualifying_primes(n, sieve).filter(|&p| !n.is_multiple_of(p)).collect(),
    )
}

/// `denom(B_n)`.
///
/// For even `n` this is the product of the primes `p` with `(p - 1) | n`.
/// `B_1 = -1/2` gives 2, and `B_n = 0` for odd `n >= 3` gives 1.
pub fn dn(n: u64) -> SquarefreeProduct {
    assert!(n >= 1, "dn requires n >= 1");
    if n == 1 {
        return SquarefreeProduct::from_sorted_unchecked(vec![2]);
    }
    if n % 2 == 1 {
        return SquarefreeProduct::one();
    }
    let mut primes: Vec<u64> = divisors(n)
        .into_iter()
        .map(|d| d + 1)
        .filter(|&p| is_prime(p))
        .collect();
    primes.sort_unstable();
    SquarefreeProduct::from_sorted_unchecked(primes)
}

fn divisors(n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            if d * d != n {
                out.push(n / d);
            }
        }
        d += 1;
    }
    out
}

/// `denom(B_n(x))`, computed as `coprime(n+1) * rad(n+1)`; `db(0) = 1`.
pub fn db(n: u64, sieve: &PrimeSieve) -> SquarefreeProduct {
    if n == 0 {
        return SquarefreeProduct::one();
    }
    dd_coprime(n + 1, sieve).lcm(&radical(n + 1))
}

/// The five expressions for `denom(B_n(x))`, `n >= 1`:
/// `coprime(n+1) * rad(n+1)`, `coprime(n+1) * shared(n+1) * complement(n+1)`,
/// `D(n+1) * complement(n+1)`, `lcm(D(n+1), rad(n+1))` and `lcm(D(n), dn(n))`.
pub fn db_forms(n: u64, sieve: &PrimeSieve) -> [SquarefreeProduct; 5] {
    assert!(n >= 1, "db_forms requires n >= 1");
    let m = n + 1;
    let split = dd_split_divisibility(m, sieve);
    let rad = radical(m);
    let d_next = dd(m, sieve);
    let triple = split
        .coprime
        .product(&split.shared)
        .and_then(|x| x.product(&split.complement))
        .expect("triple product factors are pairwise coprime");
    let via_complement = d_next
        .product(&split.complement)
        .expect("complement(n+1) is coprime to D(n+1)");
    [
        split.coprime.product(&rad).expect("coprime(n+1) is coprime to n+1"),
        triple,
        via_complement,
        d_next.lcm(&rad),
        dd(n, sieve).lcm(&dn(n)),
    ]
}

/// `denom(S_n(x)) = (n + 1) * D(n + 1)`, not squarefree in general.
pub fn ds(n: u64, sieve: &PrimeSieve) -> BigUint {
    dd(n + 1, sieve).value() * BigUint::from(n + 1)
}

/// Denominator of the `k`-th derivative of `B_n(x)`.
///
/// Equal to 1 for `n <= k`; otherwise `coprime(m) / gcd(coprime(m), (n)_{k-1})`
/// with `m = n - k + 1`.
pub fn db_k(n: u64, k: u64, sieve: &PrimeSieve) -> SquarefreeProduct {
    assert!(n >= 1 && k >= 1, "db_k requires n, k >= 1");
    if n <= k {
        return SquarefreeProduct::one();
    }
    let m = n - k + 1;
    dd_coprime(m, sieve).filter(|p| !divides_falling_factorial(p, n, k - 1))
}

/// The three expressions for `db_k(n, k)` with `n > k`:
/// `coprime(m) / gcd(coprime(m), (n)_{k-1})`, `db(n-k) / gcd(db(n-k), (n)_k)`
/// and the product of primes `p ∤ (n)_k` with `s_p(m) >= p`.
pub fn db_k_forms(n: u64, k: u64, sieve: &PrimeSieve) -> [SquarefreeProduct; 3] {
    assert!(n > k && k >= 1, "db_k_forms requires n > k >= 1");
    let m = n - k + 1;
    let direct = qualifying_primes(m, sieve)
        .filter(|&p| !divides_falling_factorial(p, n, k))
        .collect();
    [
        db_k(n, k, sieve),
        db(n - k, sieve).filter(|p| !divides_falling_factorial(p, n, k)),
        SquarefreeProduct::from_sorted_unchecked(direct),
    ]
}

/// `omega(D+(n))`, counted with the floor criterion over primes `p > sqrt(n)`.
pub fn omega_dd_plus(n: u64, sieve: &PrimeSieve) -> usize {
    assert!(n >= 1, "omega_dd_plus requires n >= 1");
    sieve
        .up_to(lambda_prime_bound(n))
        .iter()
        .filter(|&&p| (p as u128) * (p as u128) > n as u128 && floor_condition(n, p))
        .count()
}

/// All denominator quantities for index `n`.
pub fn profile(n: u64, sieve: &PrimeSieve) -> DenomProfile {
    assert!(n >= 1, "profile requires n >= 1");
    let dd_full = dd(n, sieve);
    let (dd_minus, dd_plus) = dd_split_sqrt(n, sieve);
    let split = dd_split_divisibility(n, sieve);
    DenomProfile {
        n,
        dn: dn(n),
        db: db(n, sieve),
        ds: ds(n, sieve),
        rad_n: radical(n),
        rad_n1: radical(n + 1),
        omega_plus: omega_dd_plus(n, sieve),
        dd: dd_full,
        dd_minus,
        dd_plus,
        dd_shared: split.shared,
        dd_coprime: split.coprime,
        dd_complement: split.complement,
    }
}
