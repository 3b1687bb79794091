//! Markov-chain value pipeline: discounted-to-reachability reduction,
//! floating-point rounding of the chain, and exact reachability solves with
//! certified end-to-end error.

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::fpmc::number::{
    fp_distribution_from_exact, rel_distance, truncate_rational, FpNumber,
};
use crate::game::InducedMc;
use crate::linalg::{solve_linear, RatMatrix};
use crate::rational::Rational;

/// Markov chain with two designated absorbing states: `top` is the
/// reachability target, `bot` the losing sink.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReachMc {
    pub transition: Vec<Vec<Rational>>,
    pub top: usize,
    pub bot: usize,
}

impl ReachMc {
    pub fn num_states(&self) -> usize {
        self.transition.len()
    }

    fn is_absorbing_state(&self, s: usize) -> bool {
        self.transition[s][s].is_one()
    }
}

/// Rewrites a discounted chain as a reachability chain: each step either
/// continues with probability `1 - discount`, or stops and wins with
/// probability `discount * reward` (to `top`) or loses with the rest (to
/// `bot`). The reachability value of `top` equals the discounted value,
/// exactly, state by state.
pub fn discounted_to_reachability(mc: &InducedMc) -> Result<ReachMc> {
    let n = mc.num_states();
    for (s, lambda) in mc.discount.iter().enumerate() {
        if lambda.is_zero() {
            return Err(Error::ZeroDiscount { state: s });
        }
    }
    let top = n;
    let bot = n + 1;
    let mut transition = Vec::with_capacity(n + 2);
    for s in 0..n {
        let lambda = &mc.discount[s];
        let keep = Rational::one() - lambda;
        let mut row: Vec<Rational> = mc.transition[s].iter().map(|p| &keep * p).collect();
        row.push(lambda * &mc.stage_reward[s]);
        row.push(lambda * (Rational::one() - &mc.stage_reward[s]));
        transition.push(row);
    }
    for absorbing in [top, bot] {
        let mut row = vec![Rational::zero(); n + 2];
        row[absorbing] = Rational::one();
        transition.push(row);
    }
    Ok(ReachMc {
        transition,
        top,
        bot,
    })
}

/// States from which an absorbing state is reachable, by backward closure
/// over the support graph.
fn reaches_absorbing(chain: &ReachMc) -> Vec<bool> {
    let n = chain.num_states();
    let mut reached: Vec<bool> = (0..n).map(|s| chain.is_absorbing_state(s)).collect();
    loop {
        let mut changed = false;
        for s in 0..n {
            if reached[s] {
                continue;
            }
            if (0..n).any(|t| reached[t] && chain.transition[s][t].is_positive()) {
                reached[s] = true;
                changed = true;
            }
        }
        if !changed {
            return reached;
        }
    }
}

fn check_absorbing(chain: &ReachMc) -> Result<()> {
    if !chain.is_absorbing_state(chain.top) || !chain.is_absorbing_state(chain.bot) {
        return Err(Error::ShapeMismatch(
            "designated states must self-loop with probability 1".into(),
        ));
    }
    let reached = reaches_absorbing(chain);
    match reached.iter().position(|&r| !r) {
        Some(state) => Err(Error::NonAbsorbing { state }),
        None => Ok(()),
    }
}

/// Exact probability of reaching `top` from every state, by solving the
/// linear system over the transient states. Fails on non-absorbing chains.
pub fn reach_values(chain: &ReachMc) -> Result<Vec<Rational>> {
    check_absorbing(chain)?;
    let n = chain.num_states();
    let transient: Vec<usize> = (0..n).filter(|&s| !chain.is_absorbing_state(s)).collect();
    let mut values = vec![Rational::zero(); n];
    values[chain.top] = Rational::one();
    if transient.is_empty() {
        return Ok(values);
    }
    let k = transient.len();
    let mut system = RatMatrix::identity(k);
    let mut rhs = Vec::with_capacity(k);
    for (i, &s) in transient.iter().enumerate() {
        for (j, &t) in transient.iter().enumerate() {
            let v = system.at(i, j) - &chain.transition[s][t];
            system.set(i, j, v);
        }
        rhs.push(chain.transition[s][chain.top].clone());
    }
    let x = solve_linear(&system, &rhs)?;
    for (i, &s) in transient.iter().enumerate() {
        values[s] = x[i].clone();
    }
    Ok(values)
}

/// Rounds every non-absorbing row into the floating-point distribution set:
/// entries are truncated to `ell` bits and renormalized through truncating
/// arithmetic. Preserves supports, hence the absorbing structure.
pub fn round_chain(chain: &ReachMc, ell: u32) -> Result<ReachMc> {
    if ell < 2 {
        return Err(Error::PrecisionTooSmall(ell));
    }
    let mut transition = Vec::with_capacity(chain.num_states());
    for (s, row) in chain.transition.iter().enumerate() {
        if chain.is_absorbing_state(s) {
            transition.push(row.clone());
            continue;
        }
        let rounded = fp_distribution_from_exact(row, ell)?.probabilities();
        transition.push(rounded);
    }
    Ok(ReachMc {
        transition,
        top: chain.top,
        bot: chain.bot,
    })
}

/// Largest entrywise relative distance between two chains on the same state
/// space. Entries must have identical supports; both-zero pairs contribute 0.
pub fn entrywise_rel(a: &ReachMc, b: &ReachMc) -> Result<Rational> {
    if a.num_states() != b.num_states() {
        return Err(Error::ShapeMismatch("chains differ in state count".into()));
    }
    let mut worst = Rational::zero();
    for (row_a, row_b) in a.transition.iter().zip(&b.transition) {
        for (x, y) in row_a.iter().zip(row_b) {
            if x.is_zero() && y.is_zero() {
                continue;
            }
            worst = worst.max(rel_distance(x, y)?);
        }
    }
    Ok(worst)
}

/// Approximate discounted values of a chain through the full pipeline:
/// reachability reduction, chain rounding at precision `ell`, exact solve,
/// and truncation of the outputs. The result for each state is within
/// `104 * n^4 * 2^-ell` of the exact discounted value.
pub fn discounted_approx(mc: &InducedMc, ell: u32) -> Result<Vec<FpNumber>> {
    let chain = discounted_to_reachability(mc)?;
    let rounded = round_chain(&chain, ell)?;
    let values = reach_values(&rounded)?;
    (0..mc.num_states())
        .map(|s| truncate_rational(&values[s], ell))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::mc_discounted_values;
    use crate::rational::{pow2_neg, rat};

    fn one_state_mc(reward: Rational, lambda: Rational) -> InducedMc {
        InducedMc {
            transition: vec![vec![rat(1, 1)]],
            stage_reward: vec![reward],
            discount: vec![lambda],
        }
    }

    #[test]
    fn one_state_reduction_rows() {
        let mc = one_state_mc(rat(2, 3), rat(1, 4));
        let chain = discounted_to_reachability(&mc).unwrap();
        // (1-l)*p, l*r, l*(1-r)
        assert_eq!(chain.transition[0], vec![rat(3, 4), rat(1, 6), rat(1, 12)]);
        let values = reach_values(&chain).unwrap();
        assert_eq!(values[0], rat(2, 3));
    }

    #[test]
    fn reward_one_never_reaches_bot() {
        let mc = one_state_mc(rat(1, 1), rat(1, 2));
        let chain = discounted_to_reachability(&mc).unwrap();
        assert_eq!(chain.transition[0][chain.bot], rat(0, 1));
        assert_eq!(reach_values(&chain).unwrap()[0], rat(1, 1));
    }

    #[test]
    fn zero_discount_rejected() {
        let mc = one_state_mc(rat(1, 2), rat(0, 1));
        assert!(matches!(
            discounted_to_reachability(&mc),
            Err(Error::ZeroDiscount { state: 0 })
        ));
    }

    #[test]
    fn absorbing_state_values_are_fixed() {
        let mc = one_state_mc(rat(1, 2), rat(1, 2));
        let chain = discounted_to_reachability(&mc).unwrap();
        let values = reach_values(&chain).unwrap();
        assert_eq!(values[chain.top], rat(1, 1));
        assert_eq!(values[chain.bot], rat(0, 1));
    }

    #[test]
    fn two_outcome_chain() {
        // s -> top w.p. 2/5, s -> bot w.p. 3/5.
        let chain = ReachMc {
            transition: vec![
                vec![rat(0, 1), rat(2, 5), rat(3, 5)],
                vec![rat(0, 1), rat(1, 1), rat(0, 1)],
                vec![rat(0, 1), rat(0, 1), rat(1, 1)],
            ],
            top: 1,
            bot: 2,
        };
        assert_eq!(reach_values(&chain).unwrap()[0], rat(2, 5));
    }

    #[test]
    fn non_absorbing_detected() {
        let chain = ReachMc {
            transition: vec![
                vec![rat(0, 1), rat(1, 1), rat(0, 1), rat(0, 1)],
                vec![rat(1, 1), rat(0, 1), rat(0, 1), rat(0, 1)],
                vec![rat(0, 1), rat(0, 1), rat(1, 1), rat(0, 1)],
                vec![rat(0, 1), rat(0, 1), rat(0, 1), rat(1, 1)],
            ],
            top: 2,
            bot: 3,
        };
        assert!(matches!(
            reach_values(&chain),
            Err(Error::NonAbsorbing { .. })
        ));
    }

    #[test]
    fn dyadic_chain_rounds_to_itself() {
        let mc = one_state_mc(rat(1, 2), rat(1, 2));
        let chain = discounted_to_reachability(&mc).unwrap();
        let rounded = round_chain(&chain, 16).unwrap();
        assert_eq!(rounded, chain);
    }

    #[test]
    fn rounding_stays_entrywise_close() {
        let mc = one_state_mc(rat(2, 3), rat(1, 3));
        let chain = discounted_to_reachability(&mc).unwrap();
        let ell = 16;
        let rounded = round_chain(&chain, ell).unwrap();
        let rel = entrywise_rel(&chain, &rounded).unwrap();
        // Proof-chain bound: 6 * n * 2^-ell with n = 1.
        assert!(rel <= rat(6, 1) * pow2_neg(u64::from(ell)));
    }

    #[test]
    fn pipeline_error_within_contract() {
        let mc = InducedMc {
            transition: vec![
                vec![rat(1, 3), rat(2, 3)],
                vec![rat(3, 7), rat(4, 7)],
            ],
            stage_reward: vec![rat(1, 6), rat(5, 9)],
            discount: vec![rat(1, 5), rat(2, 7)],
        };
        let exact = mc_discounted_values(&mc).unwrap();
        let ell = 32;
        let approx = discounted_approx(&mc, ell).unwrap();
        let n = mc.num_states() as i64;
        let bound = rat(104 * n.pow(4), 1) * pow2_neg(u64::from(ell));
        for (e, a) in exact.iter().zip(&approx) {
            assert!((e - a.value()).abs() <= bound);
        }
    }

    #[test]
    fn zero_rewards_stay_exactly_zero() {
        let mc = one_state_mc(rat(0, 1), rat(1, 3));
        let approx = discounted_approx(&mc, 12).unwrap();
        assert!(approx[0].is_zero());
    }
}
