//! Invariant suites over index windows, reporting the first counterexample
//! of each family.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{
    digit_sum_unchecked, floor_condition, is_prime, lambda_prime_bound, radical, PrimeSieve,
    SquarefreeProduct,
};
use crate::denom;
use crate::error::{Error, Result};
use crate::oracle;
use crate::scanner;

/// Largest accepted oracle window.
pub const MAX_ORACLE_LIMIT: u64 = 1000;

#[derive(Clone, Debug)]
pub struct VerifyConfig {
    pub limit: u64,
    pub oracle_limit: u64,
    /// Test hook: the named family sees its first observation inverted.
    pub inject_fault: Option<String>,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            limit: 10_000,
            oracle_limit: 300,
            inject_fault: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FamilyResult {
    pub family: &'static str,
    pub passed: bool,
    pub checked: u64,
    pub witness: Option<u64>,
    pub detail: Option<String>,
}

struct Counterexample {
    n: u64,
    detail: String,
}

type Outcome = std::result::Result<u64, Counterexample>;

struct Ctx<'a> {
    limit: u64,
    oracle_limit: u64,
    sieve: &'a PrimeSieve,
    faulty: bool,
}

impl Ctx<'_> {
    /// Checks `ok` for each index in order, stopping at the first failure.
    fn each(&self, ns: impl IntoIterator<Item = u64>, check: impl Fn(u64) -> std::result::Result<(), String>) -> Outcome {
        let mut count = 0;
        for n in ns {
            let mut res = check(n);
            if self.faulty && count == 0 {
                res = match res {
                    Ok(()) => Err("injected fault".into()),
                    Err(e) => Err(e),
                };
            }
            if let Err(detail) = res {
                return Err(Counterexample { n, detail });
            }
            count += 1;
        }
        Ok(count)
    }

    /// Parallel variant of [`Ctx::each`]; the reported witness is the least failing index.
    fn each_par(&self, lo: u64, hi: u64, check: impl Fn(u64) -> std::result::Result<(), String> + Sync) -> Outcome {
        let first = (lo..=hi)
            .into_par_iter()
            .filter_map(|n| {
                let res = if self.faulty && n == lo { Err("injected fault".to_string()) } else { check(n) };
                res.err().map(|detail| Counterexample { n, detail })
            })
            .min_by_key(|c| c.n);
        match first {
            Some(c) => Err(c),
            None => Ok(hi.saturating_sub(lo) + u64::from(hi >= lo)),
        }
    }
}

fn expect(cond: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

type Family = (&'static str, fn(&Ctx) -> Outcome);

/// All invariant families, in run order.
const FAMILIES: &[Family] = &[
    ("digit_sum_congruence", digit_sum_congruence),
    ("floor_criterion", floor_criterion),
    ("lambda_bound", lambda_bound),
    ("decomposition", decomposition),
    ("triple_product", triple_product),
    ("dd_odd_iff_power_of_two", dd_odd),
    ("dd_divides_radical", dd_radical),
    ("dd_odd_lcm", dd_lcm),
    ("dd_plus_divides_coprime", dd_plus_divides_coprime),
    ("radical_of_ds", radical_of_ds),
    ("db_even", db_even),
    ("coprime_parity", coprime_parity),
    ("first_derivative", first_derivative),
    ("higher_derivatives", higher_derivatives),
    ("db_k_forms", db_k_forms),
    ("set_nesting", set_nesting),
    ("rad_set_structure", rad_set_structure),
    ("omega_bound", omega_bound),
    ("scanner_consistency", scanner_consistency),
    ("oracle_equivalence", oracle_equivalence),
    ("power_sums", power_sums),
    ("reflection", reflection),
];

pub fn family_names() -> impl Iterator<Item = &'static str> {
    FAMILIES.iter().map(|(name, _)| *name)
}

/// Runs every family. Failures are reported in the results, not as errors.
pub fn run(config: &VerifyConfig) -> Result<Vec<FamilyResult>> {
    if config.limit == 0 {
        return Err(Error::InvalidArgument("limit must be positive".into()));
    }
    if config.oracle_limit == 0 || config.oracle_limit > MAX_ORACLE_LIMIT {
        return Err(Error::InvalidArgument(format!(
            "oracle limit must lie in [1, {MAX_ORACLE_LIMIT}]"
        )));
    }
    if let Some(name) = &config.inject_fault {
        if !family_names().any(|f| f == name) {
            return Err(Error::InvalidArgument(format!("unknown family {name}")));
        }
    }
    let bound = config.limit.max(config.oracle_limit).max(50);
    let sieve = PrimeSieve::new(bound + 1)?;
    Ok(FAMILIES
        .iter()
        .map(|&(family, f)| {
            let ctx = Ctx {
                limit: config.limit,
                oracle_limit: config.oracle_limit,
                sieve: &sieve,
                faulty: config.inject_fault.as_deref() == Some(family),
            };
            match f(&ctx) {
                Ok(checked) => FamilyResult {
                    family,
                    passed: true,
                    checked,
                    witness: None,
                    detail: None,
                },
                Err(c) => FamilyResult {
                    family,
                    passed: false,
                    checked: 0,
                    witness: Some(c.n),
                    detail: Some(c.detail),
                },
            }
        })
        .collect())
}

fn digit_sum_congruence(ctx: &Ctx) -> Outcome {
    let primes = ctx.sieve.up_to(50);
    ctx.each_par(1, ctx.limit, |n| {
        for &p in primes {
            let s = digit_sum_unchecked(n, p);
            expect(s % (p - 1) == n % (p - 1), || format!("s_{p}(n)={s} not congruent mod {}", p - 1))?;
        }
        Ok(())
    })
}

fn floor_criterion(ctx: &Ctx) -> Outcome {
    ctx.each_par(1, ctx.limit, |n| {
        for &p in ctx.sieve.up_to(n) {
            if p * p <= n {
                continue;
            }
            let by_digits = digit_sum_unchecked(n, p) >= p;
            expect(by_digits == floor_condition(n, p), || format!("p={p}: digit test {by_digits}"))?;
        }
        Ok(())
    })
}

fn lambda_bound(ctx: &Ctx) -> Outcome {
    ctx.each_par(1, ctx.limit, |n| {
        let start = lambda_prime_bound(n);
        for &p in ctx.sieve.up_to(n) {
            if p > start {
                let s = digit_sum_unchecked(n, p);
                expect(s < p, || format!("p={p} above bound {start} has s_p(n)={s}"))?;
            }
        }
        Ok(())
    })
}

fn decomposition(ctx: &Ctx) -> Outcome {
    ctx.each_par(1, ctx.limit, |n| denom::profile(n, ctx.sieve).check_invariants())
}

fn triple_product(ctx: &Ctx) -> Outcome {
    ctx.each_par(1, ctx.limit, |n| {
        let forms = denom::db_forms(n, ctx.sieve);
        expect(forms.iter().all(|f| *f == forms[0]), || {
            let values: Vec<String> = forms.iter().map(ToString::to_string).collect();
            format!("forms disagree: {}", values.join(" "))
        })
    })
}

fn dd_odd(ctx: &Ctx) -> Outcome {
    ctx.each_par(1, ctx.limit, |n| {
        let odd = !denom::dd(n, ctx.sieve).is_even();
        expect(odd == n.is_power_of_two(), || format!("D(n) odd = {odd}"))
    })
}

fn dd_radical(ctx: &Ctx) -> Outcome {
    ctx.each_par(1, ctx.limit, |n| {
        if is_prime(n + 1) {
            return Ok(());
        }
        let rad = radical(n + 1);
        expect(rad.divides(&denom::dd(n, ctx.sieve)), || format!("rad(n+1)={rad} does not divide D(n)"))?;
        expect(rad.divides(&denom::dd_coprime(n, ctx.sieve)), || {
            format!("rad(n+1)={rad} does not divide coprime(n)")
        })
    })
}

fn dd_lcm(ctx: &Ctx) -> Outcome {
    ctx.each_par(1, ctx.limit, |n| {
        if n < 3 || n % 2 == 0 {
            return Ok(());
        }
        let lhs = denom::dd(n, ctx.sieve);
        let rhs = denom::dd(n + 1, ctx.sieve).lcm(&radical(n + 1));
        expect(lhs == rhs, || format!("D(n)={lhs} but lcm(D(n+1), rad(n+1))={rhs}"))
    })
}

fn dd_plus_divides_coprime(ctx: &Ctx) -> Outcome {
    ctx.each_par(1, ctx.limit, |n| {
        let plus = denom::dd_plus(n, ctx.sieve);
        expect(plus.divides(&denom::dd_coprime(n, ctx.sieve)), || format!("D+(n)={plus} does not divide coprime(n)"))
    })
}

fn radical_of_ds(ctx: &Ctx) -> Outcome {
    ctx.each_par(1, ctx.limit, |n| {
        let ds = denom::ds(n, ctx.sieve);
        let rad = radical_of_big(&ds, ctx.sieve);
        let db = denom::db(n, ctx.sieve);
        expect(rad.as_ref() == Some(db.value()), || format!("rad(ds)={rad:?} but db={db}"))
    })
}

fn radical_of_big(v: &BigUint, sieve: &PrimeSieve) -> Option<BigUint> {
    let mut rest = v.clone();
    let mut rad = BigUint::one();
    for &p in sieve.primes() {
        if rest.is_one() {
            break;
        }
        let bp = BigUint::from(p);
        if (&rest % &bp).is_zero() {
            rad *= &bp;
            while (&rest % &bp).is_zero() {
                rest /= &bp;
            }
        }
    }
    rest.is_one().then_some(rad)
}

fn db_even(ctx: &Ctx) -> Outcome {
    ctx.each_par(1, ctx.limit, |n| {
        expect(denom::db(n, ctx.sieve).is_even(), || "db(n) is odd".into())
    })
}

fn coprime_parity(ctx: &Ctx) -> Outcome {
    ctx.each_par(1, ctx.limit, |n| {
        let even = denom::dd_coprime(n, ctx.sieve).is_even();
        let expected = n >= 3 && n % 2 == 1;
        expect(even == expected, || format!("coprime(n) even = {even}"))
    })
}

fn first_derivative(ctx: &Ctx) -> Outcome {
    ctx.each_par(1, ctx.limit, |n| {
        if !denom::dd_coprime(n, ctx.sieve).is_one() {
            return Ok(());
        }
        expect(is_prime(n + 1), || "coprime(n) = 1 but n+1 is composite".into())?;
        let dbm = denom::db(n - 1, ctx.sieve);
        expect(dbm == radical(n), || format!("db(n-1)={dbm} differs from rad(n)"))
    })
}

fn higher_derivatives(ctx: &Ctx) -> Outcome {
    ctx.each(1..=50, |n| {
        for k in 1..=50 {
            let d = denom::db_k(n, k, ctx.sieve);
            if let Some(&p) = d.primes().iter().find(|&&p| p <= k) {
                return Err(format!("k={k}: prime {p} divides db_k={d}"));
            }
        }
        Ok(())
    })
}

fn db_k_forms(ctx: &Ctx) -> Outcome {
    ctx.each_par(1, ctx.limit, |n| {
        for k in 1..=3.min(n - 1) {
            let forms = denom::db_k_forms(n, k, ctx.sieve);
            expect(forms.iter().all(|f| *f == forms[0]), || format!("k={k}: forms disagree"))?;
        }
        Ok(())
    })
}

fn set_nesting(ctx: &Ctx) -> Outcome {
    let limit = ctx.limit.min(1000);
    ctx.each(1..=2, |k| {
        let lower = scanner::find_sets(k, limit, ctx.sieve).map_err(|e| e.to_string())?;
        let upper = scanner::find_sets(k + 1, limit, ctx.sieve).map_err(|e| e.to_string())?;
        if let Some(n) = lower.members.iter().find(|n| upper.members.binary_search(n).is_err()) {
            return Err(format!("n={n} is in set {k} but not in set {}", k + 1));
        }
        // The prefiltered search must agree with direct evaluation.
        for report in [&lower, &upper] {
            let k = report.k().expect("derivative set");
            let direct: Vec<u64> = (1..=limit).filter(|&n| denom::db_k(n, k, ctx.sieve).is_one()).collect();
            expect(direct == report.members, || format!("prefiltered set {k} differs from direct search"))?;
        }
        Ok(())
    })
}

fn rad_set_structure(ctx: &Ctx) -> Outcome {
    let report = scanner::find_rad_set(ctx.limit, ctx.sieve).map_err(|e| Counterexample {
        n: 0,
        detail: e.to_string(),
    })?;
    ctx.each(report.members.iter().copied(), |n| {
        expect(!is_prime(n + 1), || "n+1 is prime".into())?;
        expect(n % 2 == 1 || n.is_power_of_two(), || "even member is not a power of two".into())?;
        if n % 2 == 1 {
            expect(denom::dd_coprime(n + 1, ctx.sieve).is_one(), || "coprime(n+1) != 1 for odd member".into())?;
        }
        Ok(())
    })
}

fn omega_bound(ctx: &Ctx) -> Outcome {
    let chunk = scanner::scan_omega_plus(1, ctx.limit, ctx.sieve).map_err(|e| Counterexample {
        n: 0,
        detail: e.to_string(),
    })?;
    ctx.each(1..=ctx.limit, |n| {
        let w = chunk.omega(n) as u64;
        expect(w * w < n, || format!("omega(D+(n))={w} >= sqrt(n)"))
    })
}

fn scanner_consistency(ctx: &Ctx) -> Outcome {
    let chunk = scanner::scan_omega_plus(1, ctx.limit, ctx.sieve).map_err(|e| Counterexample {
        n: 0,
        detail: e.to_string(),
    })?;
    ctx.each_par(1, ctx.limit, |n| {
        let brute = denom::dd_plus(n, ctx.sieve).omega();
        let floor = denom::omega_dd_plus(n, ctx.sieve);
        let scanned = chunk.omega(n) as usize;
        expect(brute == scanned && floor == scanned, || {
            format!("scan={scanned} per-n={brute} floor-count={floor}")
        })
    })
}

fn big(v: &SquarefreeProduct) -> &BigUint {
    v.value()
}

fn oracle_equivalence(ctx: &Ctx) -> Outcome {
    let max = ctx.oracle_limit as usize;
    let numbers = oracle::bernoulli_numbers(max + 1);
    ctx.each_par(1, ctx.oracle_limit, |n| {
        let nu = n as usize;
        let poly = oracle::bernoulli_polynomial_from(nu, &numbers);
        let d = oracle::denominator_of(&poly);
        expect(&d == big(&denom::db(n, ctx.sieve)), || format!("denom(B_n(x))={d}"))?;
        let d = oracle::denominator_of(&poly.without_constant_term());
        expect(&d == big(&denom::dd(n, ctx.sieve)), || format!("denom(B_n(x)-B_n)={d}"))?;
        let d = oracle::denominator_of_number(&numbers[nu]);
        expect(&d == big(&denom::dn(n)), || format!("denom(B_n)={d}"))?;
        let d = oracle::denominator_of(&oracle::sum_of_powers_from(nu, &numbers));
        expect(d == denom::ds(n, ctx.sieve), || format!("denom(S_n(x))={d}"))?;
        for k in 1..=3u64 {
            let d = oracle::denominator_of(&oracle::derivative(&poly, k as usize));
            expect(&d == big(&denom::db_k(n, k, ctx.sieve)), || format!("k={k}: denom of derivative={d}"))?;
        }
        Ok(())
    })
}

fn power_sums(ctx: &Ctx) -> Outcome {
    let numbers = oracle::bernoulli_numbers(11);
    ctx.each(0..=10u64, |n| {
        let s = oracle::sum_of_powers_from(n as usize, &numbers);
        let mut direct = BigInt::zero();
        for m in 0..=20u64 {
            let value = s.evaluate(&BigRational::from_integer(BigInt::from(m)));
            expect(value == BigRational::from_integer(direct.clone()), || {
                format!("S_n({m})={value} but direct sum is {direct}")
            })?;
            direct += BigInt::from(m).pow(n as u32);
        }
        Ok(())
    })
}

fn reflection(ctx: &Ctx) -> Outcome {
    let numbers = oracle::bernoulli_numbers(50);
    let minus_one = BigRational::from_integer(BigInt::from(-1));
    ctx.each(0..=50u64, |n| {
        let p = oracle::bernoulli_polynomial_from(n as usize, &numbers);
        let expected = if n % 2 == 0 { p.clone() } else { p.scale(&minus_one) };
        expect(p.reflect() == expected, || "B_n(1-x) != (-1)^n B_n(x)".into())
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> VerifyConfig {
        VerifyConfig {
            limit: 600,
            oracle_limit: 60,
            inject_fault: None,
        }
    }

    #[test]
    fn all_families_pass_on_a_small_window() {
        for r in run(&small()).unwrap() {
            assert!(r.passed, "{r:?}");
        }
    }

    #[test]
    fn injected_fault_names_family_and_witness() {
        let cfg = VerifyConfig {
            inject_fault: Some("triple_product".into()),
            ..small()
        };
        let results = run(&cfg).unwrap();
        let failed: Vec<_> = results.iter().filter(|r| !r.passed).collect();
        assert_eq!(failed.len(), 1);
        assert_eq!(failed[0].family, "triple_product");
        assert_eq!(failed[0].witness, Some(1));
    }

    #[test]
    fn rejects_bad_config() {
        let mut cfg = small();
        cfg.oracle_limit = 1001;
        assert!(run(&cfg).is_err());
        cfg.oracle_limit = 10;
        cfg.inject_fault = Some("nope".into());
        assert!(run(&cfg).is_err());
    }
}
