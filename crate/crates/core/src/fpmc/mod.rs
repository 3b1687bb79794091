//! Finite-precision calculus for Markov-chain value approximation:
//! truncating floating-point numbers, closeness algebra, and the
//! discounted-to-reachability pipeline with certified error bounds.

mod chain;
mod number;

pub use chain::{
    discounted_approx, discounted_to_reachability, entrywise_rel, reach_values, round_chain,
    ReachMc,
};
pub use number::{
    fp_add, fp_distribution_from_exact, fp_div, fp_mul, fp_sub, is_close,
    normalize_to_fp_distribution, rel_distance, truncate_rational, FpDistribution, FpNumber,
};
