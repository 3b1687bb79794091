//! Limit-value solver and parity front end.
//!
//! The limit value (iterated limit of the discounted value as the discount
//! factors go to zero in order) is approximated by solving one discounted
//! instance whose factors are pinned double-exponentially small; the nesting
//! exponent keeps every factor inside the root-free region of the kernel
//! polynomials, so the sign pattern of the auxiliary game is already the
//! limit's. Parity instances reduce to limit instances by rewarding
//! even-priority states.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive, Zero};

use crate::discounted::approx_discounted;
use crate::error::{Error, Result};
use crate::game::{DiscountSpec, GameSpec};
use crate::linalg::{bit_size, bit_size_uint};
use crate::rational::{log2_ceil_inverse, Rational};

/// Hard ceiling on materialized discount-factor exponents, in bits. Beyond
/// this the instance is out of exact-mode scale.
pub const MAX_DISCOUNT_BITS: u64 = 1 << 21;

/// The constants that pin the double-exponentially small discount factors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LimitConstants {
    /// Upper bound on either player's pure-strategy count: `m^n`.
    pub profile_bound: BigUint,
    /// Root-free-region exponent `11 * D * n * (B + bit(n) + bit(D) + kappa)`.
    pub region_bits: BigUint,
    /// Exponent of each factor: `lambda_i = 2^-(region_bits * (n*D+1)^(i-1))`.
    pub lambda_exponents: Vec<BigUint>,
    /// The materialized factors themselves.
    pub factors: Vec<Rational>,
}

/// Largest `bit` over all transition and reward rationals: the input bit-size
/// `B` every exponent formula is charged against.
pub fn game_bit_bound(game: &GameSpec) -> u64 {
    let mut best = 1;
    let mut visit = |q: &Rational| {
        if let Ok(b) = bit_size(q) {
            best = best.max(b);
        }
    };
    for per_state in &game.transition {
        for per_a in per_state {
            for row in per_a {
                row.iter().for_each(&mut visit);
            }
        }
    }
    if let Some(rewards) = &game.rewards {
        for per_state in rewards {
            for per_a in per_state {
                per_a.iter().for_each(&mut visit);
            }
        }
    }
    best
}

/// Evaluates the discount-factor formulas from the raw size parameters:
/// `D = m^n`, `B1 = 11*D*n*(B + bit(n) + bit(D) + kappa)`, and
/// `lambda_i = 2^-(B1 * (n*D+1)^(i-1))` for `i` in `1..=num_factors`.
pub fn limit_constants_from_parts(
    num_states: usize,
    max_actions: usize,
    num_factors: usize,
    input_bits: u64,
    kappa: u64,
) -> Result<LimitConstants> {
    if num_states == 0 || max_actions == 0 || num_factors == 0 {
        return Err(Error::EmptyGame);
    }
    let n = num_states as u64;
    let profile_bound = BigUint::from(max_actions).pow(num_states as u32);

    let inner = BigUint::from(input_bits)
        + BigUint::from(bit_size_uint(&BigUint::from(n)))
        + BigUint::from(bit_size_uint(&profile_bound))
        + BigUint::from(kappa);
    let region_bits = BigUint::from(11u32) * &profile_bound * BigUint::from(n) * inner;

    let nesting = BigUint::from(n) * &profile_bound + BigUint::one();
    let mut lambda_exponents = Vec::with_capacity(num_factors);
    let mut factors = Vec::with_capacity(num_factors);
    let mut exponent = region_bits.clone();
    for i in 0..num_factors {
        if i > 0 {
            exponent *= &nesting;
        }
        let bits = exponent
            .to_u64()
            .filter(|&b| b <= MAX_DISCOUNT_BITS)
            .ok_or_else(|| Error::DiscountExponentTooLarge {
                bits: exponent.to_u64().unwrap_or(u64::MAX),
                cap: MAX_DISCOUNT_BITS,
            })?;
        lambda_exponents.push(exponent.clone());
        factors.push(Rational::new(BigInt::one(), BigInt::one() << bits));
    }
    Ok(LimitConstants {
        profile_bound,
        region_bits,
        lambda_exponents,
        factors,
    })
}

/// Evaluates the discount-factor formulas for a game and an assignment.
/// `eps` is rounded down to a power of two `2^-kappa` first.
pub fn limit_constants(
    game: &GameSpec,
    assignment: &[usize],
    eps: &Rational,
) -> Result<LimitConstants> {
    let kappa = log2_ceil_inverse(eps, 1).ok_or(Error::NonPositiveEpsilon)?;
    if assignment.len() != game.num_states() {
        return Err(Error::ShapeMismatch(format!(
            "assignment covers {} states, game has {}",
            assignment.len(),
            game.num_states()
        )));
    }
    let num_factors = assignment.iter().max().map_or(0, |&i| i + 1);
    if num_factors == 0 {
        return Err(Error::ShapeMismatch("empty assignment".into()));
    }
    limit_constants_from_parts(
        game.num_states(),
        game.max_actions(),
        num_factors,
        game_bit_bound(game),
        kappa,
    )
}

/// Approximates the limit value at `state` to within `eps` by solving the
/// discounted instance at the pinned factors with error `eps / 2`.
pub fn approx_limit(
    game: &GameSpec,
    state: usize,
    assignment: &[usize],
    eps: &Rational,
) -> Result<Rational> {
    let constants = limit_constants(game, assignment, eps)?;
    let disc = DiscountSpec {
        factors: constants.factors,
        assignment: assignment.to_vec(),
    };
    let half_eps = eps / Rational::from_integer(2.into());
    Ok(approx_discounted(game, state, &disc, &half_eps)?.0)
}

/// Which end of the factor ladder the most important (smallest) priority
/// gets. `Outermost` maps priority 0 to the largest factor, i.e. the
/// outermost limit; this is the ordering the turn-based oracle corpus
/// validates and the shipped default.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PriorityOrdering {
    #[default]
    MostImportantOutermost,
    MostImportantInnermost,
}

/// Rewrites a parity instance as a limit instance: even-priority states earn
/// reward 1, odd-priority states 0, and every priority class gets its own
/// discount-factor index.
pub fn parity_reduction(
    game: &GameSpec,
    ordering: PriorityOrdering,
) -> Result<(GameSpec, Vec<usize>)> {
    let priorities = game
        .priorities
        .as_ref()
        .ok_or(Error::PriorityRange { state: 0 })?;
    if priorities.len() != game.num_states() {
        return Err(Error::PriorityRange {
            state: priorities.len(),
        });
    }
    let num_classes = priorities.iter().max().copied().unwrap_or(0) as usize + 1;
    let (m1, m2) = (game.actions1.len(), game.actions2.len());
    let rewards = priorities
        .iter()
        .map(|&p| {
            let r = if p % 2 == 0 {
                Rational::one()
            } else {
                Rational::zero()
            };
            vec![vec![r; m2]; m1]
        })
        .collect();
    let assignment = priorities
        .iter()
        .map(|&p| {
            let idx = (p as usize).min(num_classes - 1);
            match ordering {
                PriorityOrdering::MostImportantOutermost => idx,
                PriorityOrdering::MostImportantInnermost => num_classes - 1 - idx,
            }
        })
        .collect();
    let mut converted = game.clone();
    converted.rewards = Some(rewards);
    Ok((converted, assignment))
}

/// Approximates the parity value at `state` to within `eps`.
pub fn approx_parity(
    game: &GameSpec,
    state: usize,
    eps: &Rational,
    ordering: PriorityOrdering,
) -> Result<Rational> {
    let (converted, assignment) = parity_reduction(game, ordering)?;
    approx_limit(&converted, state, &assignment, eps)
}
