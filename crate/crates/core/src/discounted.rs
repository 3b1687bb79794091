//! Bisection solver for the discounted value.
//!
//! The value of the auxiliary kernel game is strictly decreasing in the probe
//! `z` and vanishes exactly at the discounted value, so its sign steers a
//! binary search on `[0, 1]`. Arithmetic is exact; the only approximation is
//! the bracket width.

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::game::{DiscountSpec, GameSpec};
use crate::kernel::KernelMatrix;
use crate::rational::{log2_ceil_inverse, Rational};

/// Certified enclosure of the discounted value at one state.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bracket {
    pub lo: Rational,
    pub hi: Rational,
    pub iterations: u32,
}

impl Bracket {
    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> Rational {
        (&self.lo + &self.hi) / Rational::from_integer(2.into())
    }
}

/// Approximates the discounted value at `state` to within `eps`.
///
/// Runs exactly `ceil(log2(1/eps))` bisection steps from `[0, 1]`, keeping
/// the sign invariant: the kernel game value is non-negative at `lo` and
/// non-positive at `hi`. Ties (`value == 0`) raise `lo`. Returns the final
/// bracket midpoint together with the bracket itself.
pub fn approx_discounted(
    game: &GameSpec,
    state: usize,
    disc: &DiscountSpec,
    eps: &Rational,
) -> Result<(Rational, Bracket)> {
    let kernel = KernelMatrix::build(game, disc, state)?;
    approx_discounted_with_kernel(&kernel, eps)
}

/// Same bisection on a pre-built kernel; lets callers reuse the cached
/// determinants across calls that differ only in `eps`.
pub fn approx_discounted_with_kernel(
    kernel: &KernelMatrix,
    eps: &Rational,
) -> Result<(Rational, Bracket)> {
    let iterations = log2_ceil_inverse(eps, 1).ok_or(Error::NonPositiveEpsilon)? as u32;
    let two = Rational::from_integer(2.into());
    let mut lo = Rational::zero();
    let mut hi = Rational::one();
    for _ in 0..iterations {
        let z = (&lo + &hi) / &two;
        if kernel.value_at(&z).is_negative() {
            hi = z;
        } else {
            lo = z;
        }
    }
    let bracket = Bracket {
        lo,
        hi,
        iterations,
    };
    Ok((bracket.midpoint(), bracket))
}

/// Public probe: exact value of the auxiliary kernel game at `z`. Its sign
/// tells on which side of `z` the discounted value lies.
pub fn kernel_value_probe(
    game: &GameSpec,
    disc: &DiscountSpec,
    state: usize,
    z: &Rational,
) -> Result<Rational> {
    Ok(KernelMatrix::build(game, disc, state)?.value_at(z))
}
