use berndenom::arith::{
    digit_sum, floor_condition, is_prime, lambda_prime_bound, radical, PrimeSieve,
    SquarefreeProduct,
};
use berndenom::{denom, scanner};
use num_bigint::BigUint;
use proptest::prelude::*;

/// Base-`p` digits of `n`, least significant first.
fn digits(n: u64, p: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut m = n;
    while m > 0 {
        out.push(m % p);
        m /= p;
    }
    out
}

#[test]
fn floor_criterion_matches_digit_test_exhaustively() {
    let sieve = PrimeSieve::new(10_000).unwrap();
    for n in 1..=10_000u64 {
        for &p in sieve.up_to(n) {
            if p * p > n {
                assert_eq!(digit_sum(n, p).unwrap() >= p, floor_condition(n, p), "n={n} p={p}");
            }
        }
    }
}

#[test]
fn primes_beyond_lambda_bound_never_qualify() {
    let sieve = PrimeSieve::new(100_000).unwrap();
    let primes = sieve.primes();
    for n in 1..=100_000u64 {
        let bound = lambda_prime_bound(n);
        let start = primes.partition_point(|&p| p <= bound);
        let stop = primes.partition_point(|&p| p <= n);
        for &p in &primes[start..stop] {
            assert!(digit_sum(n, p).unwrap() < p, "n={n} p={p}");
        }
    }
}

#[test]
fn exceptional_scan_up_to_one_thousand() {
    let sieve = PrimeSieve::new(500).unwrap();
    let c = scanner::scan_omega_plus(1, 1000, &sieve).unwrap();
    assert_eq!(c.exceptional.iter().max(), Some(&192));
    assert!(c.exceptional.iter().all(|&n| n <= 192));
}

#[test]
fn nesting_of_derivative_sets() {
    let sieve = PrimeSieve::for_index(1000).unwrap();
    let sets: Vec<_> = (1..=3)
        .map(|k| scanner::find_sets(k, 1000, &sieve).unwrap().members)
        .collect();
    for w in sets.windows(2) {
        assert!(w[0].iter().all(|n| w[1].contains(n)));
    }
    for &n in &sets[0] {
        assert!(is_prime(n + 1), "{n}");
    }
}

proptest! {
    #[test]
    fn digit_sum_matches_expansion(n in 0u64..u64::MAX / 2, p in 2u64..1000) {
        prop_assert_eq!(digit_sum(n, p).unwrap(), digits(n, p).iter().sum::<u64>());
    }

    #[test]
    fn digit_sum_congruent_mod_p_minus_one(n in 0u64..1_000_000_000, p in 3u64..10_000) {
        prop_assert_eq!(digit_sum(n, p).unwrap() % (p - 1), n % (p - 1));
    }

    #[test]
    fn squarefree_value_round_trip(mask in any::<u32>()) {
        let sieve = PrimeSieve::new(200).unwrap();
        let primes: Vec<u64> = sieve.primes().iter().take(32).enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, &p)| p)
            .collect();
        let product = SquarefreeProduct::from_primes(primes.clone()).unwrap();
        let expect: BigUint = primes.iter().map(|&p| BigUint::from(p)).product();
        prop_assert_eq!(product.value(), &expect);
        let back = SquarefreeProduct::from_value(product.value(), &sieve).unwrap();
        prop_assert_eq!(back.primes(), primes.as_slice());
    }

    #[test]
    fn gcd_lcm_product_identity(a in any::<u16>(), b in any::<u16>()) {
        let sieve = PrimeSieve::new(60).unwrap();
        let pick = |m: u16| SquarefreeProduct::from_primes(
            sieve.primes().iter().take(16).enumerate()
                .filter(|(i, _)| m >> i & 1 == 1).map(|(_, &p)| p).collect()).unwrap();
        let (x, y) = (pick(a), pick(b));
        prop_assert_eq!(x.gcd(&y).value() * x.lcm(&y).value(), x.value() * y.value());
        prop_assert!(x.gcd(&y).divides(&x) && x.divides(&x.lcm(&y)));
    }

    #[test]
    fn radical_is_squarefree_kernel(n in 1u64..10_000_000) {
        let r = radical(n);
        let mut m = n;
        for &p in r.primes() {
            prop_assert!(is_prime(p));
            prop_assert_eq!(m % p, 0);
            while m % p == 0 { m /= p; }
        }
        prop_assert_eq!(m, 1);
    }

    #[test]
    fn profile_invariants_hold(n in 1u64..200_000) {
        let sieve = PrimeSieve::for_index(n).unwrap();
        let p = denom::profile(n, &sieve);
        prop_assert!(p.check_invariants().is_ok());
        let forms = denom::db_forms(n, &sieve);
        prop_assert!(forms.iter().all(|f| *f == forms[0]));
        prop_assert_eq!(&p.dd_plus, &denom::dd_plus(n, &sieve));
        prop_assert!(p.dd_plus.divides(&p.dd_coprime));
    }

    #[test]
    fn chunk_partition_does_not_change_summary(hi in 2u64..20_000, cut in 1u64..20_000) {
        let cut = cut.min(hi - 1);
        let sieve = PrimeSieve::new(10_001).unwrap();
        let whole = scanner::scan_omega_plus(1, hi, &sieve).unwrap().summary();
        let left = scanner::scan_omega_plus(1, cut, &sieve).unwrap().summary();
        let right = scanner::scan_omega_plus(cut + 1, hi, &sieve).unwrap().summary();
        prop_assert_eq!(whole, left.merge(&right).unwrap());
    }

    #[test]
    fn high_derivative_has_no_small_prime(n in 1u64..3000, k in 1u64..60) {
        let sieve = PrimeSieve::for_index(3000).unwrap();
        let d = denom::db_k(n, k, &sieve);
        prop_assert!(d.primes().iter().all(|&p| p > k));
        if n > k {
            let forms = denom::db_k_forms(n, k, &sieve);
            prop_assert!(forms.iter().all(|f| *f == forms[0]));
        }
    }
}
