//! Arbitrary-precision rational scalars used across the whole crate.
//!
//! Every model quantity (probabilities, rewards, discount factors, game
//! values) is a [`Rational`]: a `num_rational::BigRational`, which keeps
//! the denominator positive and the fraction in lowest terms. All
//! arithmetic is exact; nothing in this crate rounds unless an operation
//! says so explicitly.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

pub type Rational = num_rational::BigRational;

/// Shorthand for a rational from machine integers.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// The dyadic rational `2^-k`.
pub fn pow2_neg(k: u64) -> Rational {
    Rational::new(BigInt::one(), BigInt::one() << k)
}

/// The dyadic rational `2^k` for signed `k`.
pub fn pow2(k: i64) -> Rational {
    if k >= 0 {
        Rational::from_integer(BigInt::one() << k as u64)
    } else {
        pow2_neg(-k as u64)
    }
}

/// Smallest integer `k >= min_kappa` with `2^-k <= eps`, i.e. the result of
/// rounding `eps` down to a power of two. Returns `None` for `eps <= 0`.
pub fn log2_ceil_inverse(eps: &Rational, min_kappa: u64) -> Option<u64> {
    if !eps.is_positive() {
        return None;
    }
    let mut kappa = min_kappa;
    loop {
        if pow2_neg(kappa) <= *eps {
            return Some(kappa);
        }
        kappa += 1;
        // eps > 0 guarantees termination: 2^-k falls below any positive bound.
    }
}

/// Parses `"p/q"` or a plain integer string into a rational.
pub fn parse_rational(s: &str) -> Result<Rational, String> {
    let s = s.trim();
    let (num_str, den_str) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num_str
        .parse()
        .map_err(|_| format!("invalid numerator in rational '{s}'"))?;
    let den: BigInt = den_str
        .parse()
        .map_err(|_| format!("invalid denominator in rational '{s}'"))?;
    if den.is_zero() {
        return Err(format!("zero denominator in rational '{s}'"));
    }
    Ok(Rational::new(num, den))
}

/// Renders a rational as `"p/q"`, or `"p"` when the denominator is 1.
pub fn format_rational(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Nearest dyadic `j * 2^-precision` obtained by rounding toward zero.
/// The absolute error is below `2^-precision`.
pub fn round_to_dyadic(x: &Rational, precision: u64) -> Rational {
    let scaled = x * pow2(precision as i64);
    Rational::new(scaled.to_integer(), BigInt::one() << precision)
}
