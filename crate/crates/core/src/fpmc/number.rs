//! Truncating floating-point numbers and probability distributions.
//!
//! A number of precision `l` is `mantissa * 2^exponent` with the mantissa
//! below `2^l`. Arithmetic computes the exact rational result and truncates
//! the mantissa back to `l` significant bits toward zero, so an operation
//! never overshoots and loses at most a relative `2^(1-l)`. Distributions
//! are weight vectors of such numbers, normalized exactly on read-out.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::Rational;

/// Non-negative floating-point number with `precision`-bit mantissa.
/// Canonical form: zero is `(0, 0)`; otherwise the mantissa is odd.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FpNumber {
    mantissa: BigUint,
    exponent: BigInt,
    precision: u32,
}

impl FpNumber {
    pub fn zero(precision: u32) -> FpNumber {
        FpNumber {
            mantissa: BigUint::zero(),
            exponent: BigInt::zero(),
            precision,
        }
    }

    pub fn one(precision: u32) -> FpNumber {
        FpNumber {
            mantissa: BigUint::one(),
            exponent: BigInt::zero(),
            precision,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa.is_zero()
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn mantissa(&self) -> &BigUint {
        &self.mantissa
    }

    pub fn exponent(&self) -> &BigInt {
        &self.exponent
    }

    /// Exact rational value `mantissa * 2^exponent`.
    pub fn value(&self) -> Rational {
        if self.mantissa.is_zero() {
            return Rational::zero();
        }
        let m = BigInt::from(self.mantissa.clone());
        match u64::try_from(&self.exponent) {
            Ok(e) => Rational::from_integer(m << e),
            Err(_) => {
                let e = u64::try_from(-&self.exponent).expect("exponent fits in u64");
                Rational::new(m, BigInt::one() << e)
            }
        }
    }

    fn canonical(mut mantissa: BigUint, mut exponent: BigInt, precision: u32) -> FpNumber {
        if mantissa.is_zero() {
            return FpNumber::zero(precision);
        }
        let shift = mantissa.trailing_zeros().unwrap_or(0);
        if shift > 0 {
            mantissa >>= shift;
            exponent += shift;
        }
        FpNumber {
            mantissa,
            exponent,
            precision,
        }
    }
}

/// Floor of `log2(x)` for positive rational `x`.
fn floor_log2(x: &Rational) -> i64 {
    debug_assert!(x.is_positive());
    let t = x.numer().bits() as i64 - x.denom().bits() as i64;
    // x is within a factor of two of 2^t; one comparison settles the floor.
    let two_to_t = if t >= 0 {
        Rational::from_integer(BigInt::one() << t as u64)
    } else {
        Rational::new(BigInt::one(), BigInt::one() << (-t) as u64)
    };
    if *x >= two_to_t {
        t
    } else {
        t - 1
    }
}

/// Truncates a non-negative rational to `precision` significant bits,
/// rounding toward zero.
pub fn truncate_rational(x: &Rational, precision: u32) -> Result<FpNumber> {
    if precision == 0 {
        return Err(Error::PrecisionTooSmall(0));
    }
    if x.is_negative() {
        return Err(Error::NegativeResult);
    }
    if x.is_zero() {
        return Ok(FpNumber::zero(precision));
    }
    let e = floor_log2(x) - i64::from(precision) + 1;
    // mantissa = floor(x * 2^-e), which lands in [2^(precision-1), 2^precision).
    let scaled = if e >= 0 {
        x / Rational::from_integer(BigInt::one() << e as u64)
    } else {
        x * Rational::from_integer(BigInt::one() << (-e) as u64)
    };
    let mantissa = scaled.to_integer().magnitude().clone();
    debug_assert!(mantissa.bits() as u32 == precision);
    Ok(FpNumber::canonical(mantissa, BigInt::from(e), precision))
}

fn check_precisions(a: &FpNumber, b: &FpNumber) -> Result<u32> {
    if a.precision != b.precision {
        return Err(Error::PrecisionMismatch(a.precision, b.precision));
    }
    Ok(a.precision)
}

/// Truncating addition.
pub fn fp_add(a: &FpNumber, b: &FpNumber) -> Result<FpNumber> {
    let ell = check_precisions(a, b)?;
    truncate_rational(&(a.value() + b.value()), ell)
}

/// Truncating subtraction on the non-negative domain: requires `a >= b`.
pub fn fp_sub(a: &FpNumber, b: &FpNumber) -> Result<FpNumber> {
    let ell = check_precisions(a, b)?;
    let diff = a.value() - b.value();
    if diff.is_negative() {
        return Err(Error::NegativeResult);
    }
    truncate_rational(&diff, ell)
}

/// Truncating multiplication.
pub fn fp_mul(a: &FpNumber, b: &FpNumber) -> Result<FpNumber> {
    let ell = check_precisions(a, b)?;
    truncate_rational(&(a.value() * b.value()), ell)
}

/// Truncating division; the divisor must be positive.
pub fn fp_div(a: &FpNumber, b: &FpNumber) -> Result<FpNumber> {
    let ell = check_precisions(a, b)?;
    if b.is_zero() {
        return Err(Error::DivisionByZero);
    }
    truncate_rational(&(a.value() / b.value()), ell)
}

/// Relative distance `max(x/y, y/x) - 1` of two positive rationals.
pub fn rel_distance(x: &Rational, y: &Rational) -> Result<Rational> {
    if !x.is_positive() || !y.is_positive() {
        return Err(Error::NonPositiveRel);
    }
    let a = x / y;
    let b = y / x;
    Ok(a.max(b) - Rational::one())
}

/// Whether `x` and `y` are within relative distance
/// `(1 - 2^(1-l))^-i - 1` of each other. Zero is close only to zero.
pub fn is_close(x: &Rational, y: &Rational, ell: u32, i: u32) -> bool {
    if x.is_zero() && y.is_zero() {
        return true;
    }
    let Ok(rel) = rel_distance(x, y) else {
        return false;
    };
    // (rel + 1) * (1 - 2^(1-l))^i <= 1, exact in rationals. For l = 1 the
    // base is zero and everything positive is close.
    let base = Rational::one()
        - if ell >= 1 {
            Rational::new(BigInt::one() << 1u8, BigInt::one() << u64::from(ell))
        } else {
            return true;
        };
    let factor = num_traits::pow(base, i as usize);
    (rel + Rational::one()) * factor <= Rational::one()
}

/// Probability distribution whose weights live in the precision-`l` number
/// set; the carried probabilities are the exactly normalized weights.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FpDistribution {
    weights: Vec<FpNumber>,
    precision: u32,
}

impl FpDistribution {
    /// Wraps weights, checking the membership invariant: the weight sum must
    /// be `(l, t)`-close to 1 for `t` weights.
    pub fn new(weights: Vec<FpNumber>) -> Result<FpDistribution> {
        let precision = weights.first().ok_or(Error::AllZeroWeights)?.precision();
        if weights.iter().any(|w| w.precision() != precision) {
            return Err(Error::PrecisionMismatch(
                precision,
                weights.iter().map(FpNumber::precision).max().unwrap_or(0),
            ));
        }
        let total: Rational = weights.iter().map(FpNumber::value).sum();
        if total.is_zero() {
            return Err(Error::AllZeroWeights);
        }
        if !is_close(&total, &Rational::one(), precision, weights.len() as u32) {
            return Err(Error::ShapeMismatch(
                "weight sum is not close enough to 1".into(),
            ));
        }
        Ok(FpDistribution { weights, precision })
    }

    pub fn weights(&self) -> &[FpNumber] {
        &self.weights
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    /// Exactly normalized probabilities `w_i / sum(w)`.
    pub fn probabilities(&self) -> Vec<Rational> {
        let total: Rational = self.weights.iter().map(FpNumber::value).sum();
        self.weights
            .iter()
            .map(|w| w.value() / &total)
            .collect()
    }
}

/// Divides each weight by the truncating sum of all weights and wraps the
/// quotients as a distribution.
pub fn normalize_to_fp_distribution(xs: &[FpNumber]) -> Result<FpDistribution> {
    if xs.is_empty() {
        return Err(Error::AllZeroWeights);
    }
    let mut total = xs[0].clone();
    for x in &xs[1..] {
        total = fp_add(&total, x)?;
    }
    if total.is_zero() {
        return Err(Error::AllZeroWeights);
    }
    let quotients = xs
        .iter()
        .map(|x| fp_div(x, &total))
        .collect::<Result<Vec<_>>>()?;
    FpDistribution::new(quotients)
}

/// Rounds an exact distribution into the floating-point distribution set by
/// truncating each probability and renormalizing.
pub fn fp_distribution_from_exact(probs: &[Rational], ell: u32) -> Result<FpDistribution> {
    let truncated = probs
        .iter()
        .map(|p| truncate_rational(p, ell))
        .collect::<Result<Vec<_>>>()?;
    normalize_to_fp_distribution(&truncated)
}
