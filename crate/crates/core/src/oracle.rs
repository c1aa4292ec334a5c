//! Exact rational Bernoulli numbers and polynomials.
//!
//! This path shares no code with [`crate::denom`]; denominators are read off
//! reduced coefficients, which makes it an independent reference for the
//! product formulas at small indices.

use std::fmt;
use std::ops::{Mul, Sub};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// A polynomial with exact rational coefficients, lowest power first.
///
/// Coefficients are kept reduced (guaranteed by [`BigRational`]) and trailing
/// zeros are trimmed, so the zero polynomial has no coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalPolynomial {
    coefficients: Vec<BigRational>,
}

impl RationalPolynomial {
    pub fn new(mut coefficients: Vec<BigRational>) -> Self {
        while coefficients.last().is_some_and(Zero::is_zero) {
            coefficients.pop();
        }
        Self { coefficients }
    }

    pub fn zero() -> Self {
        Self::new(Vec::new())
    }

    pub fn constant(c: BigRational) -> Self {
        Self::new(vec![c])
    }

    pub fn coefficients(&self) -> &[BigRational] {
        &self.coefficients
    }

    pub fn coefficient(&self, power: usize) -> BigRational {
        self.coefficients.get(power).cloned().unwrap_or_else(BigRational::zero)
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coefficients.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.is_empty()
    }

    pub fn leading_coefficient(&self) -> Option<&BigRational> {
        self.coefficients.last()
    }

    pub fn evaluate(&self, x: &BigRational) -> BigRational {
        self.coefficients
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * x + c)
    }

    /// `p(1 - x)`.
    pub fn reflect(&self) -> Self {
        // (1 - x)^j expanded with alternating binomials.
        let mut out = vec![BigRational::zero(); self.coefficients.len()];
        for (j, c) in self.coefficients.iter().enumerate() {
            let mut binom = BigInt::one();
            for (i, slot) in out.iter_mut().enumerate().take(j + 1) {
                let term = c * BigRational::from_integer(binom.clone());
                if i % 2 == 0 {
                    *slot += term;
                } else {
                    *slot -= term;
                }
                binom = binom * BigInt::from(j - i) / BigInt::from(i + 1);
            }
        }
        Self::new(out)
    }

    pub fn scale(&self, factor: &BigRational) -> Self {
        Self::new(self.coefficients.iter().map(|c| c * factor).collect())
    }

    pub fn without_constant_term(&self) -> Self {
        let mut coefficients = self.coefficients.clone();
        if let Some(c) = coefficients.first_mut() {
            *c = BigRational::zero();
        }
        Self::new(coefficients)
    }
}

impl Sub for &RationalPolynomial {
    type Output = RationalPolynomial;

    fn sub(self, rhs: Self) -> RationalPolynomial {
        let len = self.coefficients.len().max(rhs.coefficients.len());
        RationalPolynomial::new(
            (0..len)
                .map(|i| self.coefficient(i) - rhs.coefficient(i))
                .collect(),
        )
    }
}

impl Mul<&BigRational> for &RationalPolynomial {
    type Output = RationalPolynomial;

    fn mul(self, rhs: &BigRational) -> RationalPolynomial {
        self.scale(rhs)
    }
}

impl fmt::Display for RationalPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coefficients.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let a = c.abs();
            match (i, a.is_one()) {
                (0, _) => write!(f, "{a}")?,
                (_, true) => {}
                _ => write!(f, "{a}*")?,
            }
            match i {
                0 => {}
                1 => write!(f, "x")?,
                _ => write!(f, "x^{i}")?,
            }
        }
        Ok(())
    }
}

/// `B_0, ..., B_max` with `B_1 = -1/2`, from
/// `sum_{k=0}^{n} C(n+1, k) B_k = 0`.
pub fn bernoulli_numbers(max: usize) -> Vec<BigRational> {
    let mut numbers: Vec<BigRational> = Vec::with_capacity(max + 1);
    numbers.push(BigRational::one());
    for n in 1..=max {
        if n >= 3 && n % 2 == 1 {
            numbers.push(BigRational::zero());
            continue;
        }
        // Row n+1 of Pascal's triangle, entries 0..n.
        let mut binom = BigInt::one();
        let mut sum = BigRational::zero();
        for (k, b) in numbers.iter().enumerate() {
            if !b.is_zero() {
                sum += b * BigRational::from_integer(binom.clone());
            }
            binom = binom * BigInt::from(n + 1 - k) / BigInt::from(k + 1);
        }
        numbers.push(-sum / BigRational::from_integer(BigInt::from(n + 1)));
    }
    numbers
}

/// `B_n(x) = sum_k C(n, k) B_{n-k} x^k`.
pub fn bernoulli_polynomial(n: usize) -> RationalPolynomial {
    bernoulli_polynomial_from(n, &bernoulli_numbers(n))
}

/// Same as [`bernoulli_polynomial`] with precomputed numbers `B_0..B_m`, `m >= n`.
pub fn bernoulli_polynomial_from(n: usize, numbers: &[BigRational]) -> RationalPolynomial {
    assert!(numbers.len() > n, "need Bernoulli numbers up to index {n}");
    let mut coefficients = Vec::with_capacity(n + 1);
    let mut binom = BigInt::one();
    for k in 0..=n {
        coefficients.push(&numbers[n - k] * BigRational::from_integer(binom.clone()));
        binom = binom * BigInt::from(n - k) / BigInt::from(k + 1);
    }
    RationalPolynomial::new(coefficients)
}

/// `k`-fold formal derivative.
pub fn derivative(poly: &RationalPolynomial, k: usize) -> RationalPolynomial {
    let coefficients = poly
        .coefficients()
        .iter()
        .enumerate()
        .skip(k)
        .map(|(i, c)| {
            let falling: BigInt = ((i - k + 1)..=i).map(BigInt::from).product();
            c * BigRational::from_integer(falling)
        })
        .collect();
    RationalPolynomial::new(coefficients)
}

/// `S_n(x) = (B_{n+1}(x) - B_{n+1}) / (n + 1)`, so that `S_n(m) = sum_{v<m} v^n`.
pub fn sum_of_powers_polynomial(n: usize) -> RationalPolynomial {
    sum_of_powers_from(n, &bernoulli_numbers(n + 1))
}

pub fn sum_of_powers_from(n: usize, numbers: &[BigRational]) -> RationalPolynomial {
    let b = bernoulli_polynomial_from(n + 1, numbers);
    let inv = BigRational::new(BigInt::one(), BigInt::from(n + 1));
    b.without_constant_term().scale(&inv)
}

/// Least common multiple of the reduced coefficient denominators.
pub fn denominator_of(poly: &RationalPolynomial) -> BigUint {
    poly.coefficients()
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()))
        .magnitude()
        .clone()
}

/// Reduced denominator of a single rational.
pub fn denominator_of_number(q: &BigRational) -> BigUint {
    q.denom().magnitude().clone()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn poly(c: &[(i64, i64)]) -> RationalPolynomial {
        RationalPolynomial::new(c.iter().map(|&(n, d)| q(n, d)).collect())
    }

    #[test]
    fn small_bernoulli_numbers() {
        let b = bernoulli_numbers(12);
        assert_eq!(b[0], q(1, 1));
        assert_eq!(b[1], q(-1, 2));
        assert_eq!(b[2], q(1, 6));
        assert_eq!(b[3], q(0, 1));
        assert_eq!(b[4], q(-1, 30));
        assert_eq!(b[12], q(-691, 2730));
        assert_eq!(denominator_of_number(&b[4]), BigUint::from(30u32));
    }

    #[test]
    fn recurrence_for_odd_indices_is_zero() {
        // The skip for odd n >= 3 is an optimization; check it against the
        // unabridged recurrence.
        let b = bernoulli_numbers(15);
        for n in (3..=15).step_by(2) {
            let mut binom = BigInt::one();
            let mut sum = BigRational::zero();
            for (k, bk) in b.iter().enumerate().take(n) {
                sum += bk * BigRational::from_integer(binom.clone());
                binom = binom * BigInt::from(n + 1 - k) / BigInt::from(k + 1);
            }
            assert!(sum.is_zero(), "B_{n} should vanish");
        }
    }

    #[test]
    fn small_polynomials() {
        assert_eq!(bernoulli_polynomial(1), poly(&[(-1, 2), (1, 1)]));
        assert_eq!(bernoulli_polynomial(2), poly(&[(1, 6), (-1, 1), (1, 1)]));
        assert_eq!(bernoulli_polynomial(2).to_string(), "x^2 - x + 1/6");
        for n in 0..30 {
            let b = bernoulli_polynomial(n);
            assert_eq!(b.degree(), Some(n));
            assert!(b.leading_coefficient().unwrap().is_one());
        }
    }

    #[test]
    fn derivative_rule() {
        let b4 = bernoulli_polynomial(4);
        let b3 = bernoulli_polynomial(3);
        assert_eq!(derivative(&b4, 1), b3.scale(&q(4, 1)));
        assert_eq!(derivative(&b4, 0), b4);
        assert!(derivative(&bernoulli_polynomial(2), 3).is_zero());
        let b = bernoulli_numbers(40);
        for n in 1..40 {
            let lhs = derivative(&bernoulli_polynomial_from(n, &b), 1);
            let rhs = bernoulli_polynomial_from(n - 1, &b).scale(&q(n as i64, 1));
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn sum_of_powers_examples() {
        assert_eq!(sum_of_powers_polynomial(1), poly(&[(0, 1), (-1, 2), (1, 2)]));
        assert_eq!(denominator_of(&sum_of_powers_polynomial(1)), BigUint::from(2u32));
        assert_eq!(sum_of_powers_polynomial(0), poly(&[(0, 1), (1, 1)]));
        assert_eq!(sum_of_powers_polynomial(2).evaluate(&q(4, 1)), q(14, 1));
    }

    #[test]
    fn denominators_of_simple_polynomials() {
        assert_eq!(denominator_of(&poly(&[(-1, 2), (1, 1)])), BigUint::from(2u32));
        assert_eq!(denominator_of(&poly(&[(3, 1), (-7, 1)])), BigUint::one());
        assert_eq!(denominator_of(&RationalPolynomial::zero()), BigUint::one());
        let dd: Vec<BigUint> = (1..=10)
            .map(|n| {
                let b = bernoulli_polynomial(n);
                denominator_of(&b.without_constant_term())
            })
            .collect();
        let expect: Vec<BigUint> = [1u32, 1, 2, 1, 6, 2, 6, 3, 10, 2]
            .into_iter()
            .map(BigUint::from)
            .collect();
        assert_eq!(dd, expect);
    }

    #[test]
    fn reflection() {
        let b = bernoulli_numbers(50);
        for n in 0..=50 {
            let p = bernoulli_polynomial_from(n, &b);
            let expect = if n % 2 == 0 { p.clone() } else { p.scale(&q(-1, 1)) };
            assert_eq!(p.reflect(), expect, "n={n}");
        }
    }
}
