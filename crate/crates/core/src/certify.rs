//! Deterministic verification of near-optimal strategies and game values.
//!
//! The nondeterministic guesses of the underlying decision procedures are
//! realized by exhaustive enumeration at desk scale: a best response in an
//! induced MDP is the per-state optimum over all pure stationary strategies,
//! each evaluated by an exact linear solve. On top of that sit the
//! epsilon-optimality check for a fixed strategy and the two-sided value
//! certificate check.

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::game::{induce_mdp, DiscountSpec, GameSpec, InducedMdp, MixedStationary, Player};
use crate::kernel::mc_discounted_values;
use crate::rational::{pow2_neg, Rational};

/// Default cap on enumerated pure strategies per best-response computation.
pub const DEFAULT_ENUM_CAP: usize = 1 << 14;

/// Exact optimal value vector of the MDP's controller, by enumerating pure
/// stationary strategies and taking the per-state max (Player 1) or min
/// (Player 2). A pure stationary strategy is optimal in every state at once,
/// so the per-state optimum is the MDP value.
pub fn best_response_values(mdp: &InducedMdp, cap: usize) -> Result<Vec<Rational>> {
    let n = mdp.num_states();
    let m = mdp.num_actions();
    let needed = (m as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    if needed > cap as u128 {
        return Err(Error::EnumerationCap { needed, cap });
    }
    let mut best: Option<Vec<Rational>> = None;
    let mut choice = vec![0usize; n];
    loop {
        let mc = mdp.fix_pure(&choice)?;
        let values = mc_discounted_values(&mc)?;
        best = Some(match best {
            None => values,
            Some(acc) => acc
                .into_iter()
                .zip(values)
                .map(|(a, v)| match mdp.player {
                    Player::One => a.max(v),
                    Player::Two => a.min(v),
                })
                .collect(),
        });
        let mut pos = n;
        loop {
            if pos == 0 {
                return Ok(best.expect("at least one pure strategy exists"));
            }
            pos -= 1;
            choice[pos] += 1;
            if choice[pos] < m {
                break;
            }
            choice[pos] = 0;
        }
    }
}

/// Optimal MDP value at a single state.
pub fn best_response_value(mdp: &InducedMdp, state: usize, cap: usize) -> Result<Rational> {
    let mut values = best_response_values(mdp, cap)?;
    if state >= values.len() {
        return Err(Error::ShapeMismatch(format!("state {state} out of range")));
    }
    Ok(values.swap_remove(state))
}

/// Exact Bellman residual of a candidate optimal value vector: zero iff the
/// vector is the MDP fixed point. Exposed for cross-checks.
pub fn bellman_residual(mdp: &InducedMdp, values: &[Rational]) -> Result<Rational> {
    let n = mdp.num_states();
    if values.len() != n {
        return Err(Error::ShapeMismatch("value vector length mismatch".into()));
    }
    let mut worst = Rational::zero();
    for s in 0..n {
        let lambda = &mdp.discount[s];
        let keep = Rational::one() - lambda;
        let backups = (0..mdp.num_actions()).map(|a| {
            let continuation: Rational = mdp.transition[s][a]
                .iter()
                .zip(values)
                .map(|(p, v)| p * v)
                .sum();
            lambda * &mdp.stage_reward[s][a] + &keep * continuation
        });
        let backup = match mdp.player {
            Player::One => backups.max(),
            Player::Two => backups.min(),
        }
        .expect("MDP has at least one action");
        worst = worst.max((backup - &values[s]).abs());
    }
    Ok(worst)
}

/// Checks that a fixed stationary strategy guarantees `value_ref` within
/// `eps` in every state, against an exactly computed opponent best response.
pub fn check_eps_optimal(
    game: &GameSpec,
    disc: &DiscountSpec,
    strat: &MixedStationary,
    eps: &Rational,
    value_ref: &[Rational],
    cap: usize,
) -> Result<bool> {
    if value_ref.len() != game.num_states() {
        return Err(Error::ShapeMismatch(
            "reference value vector length mismatch".into(),
        ));
    }
    let mdp = induce_mdp(game, strat, disc)?;
    let response = best_response_values(&mdp, cap)?;
    Ok(response
        .iter()
        .zip(value_ref)
        .all(|(b, v)| match strat.player {
            Player::One => *b >= v - eps,
            Player::Two => *b <= v + eps,
        }))
}

/// Candidate proof that the discounted value at a state is `alpha`:
/// two allegedly near-optimal strategies plus a grid value
/// `alpha = j * 2^-(kappa+2)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValueCertificate {
    pub sigma: MixedStationary,
    pub tau: MixedStationary,
    pub grid_index: u64,
    pub kappa: u32,
}

impl ValueCertificate {
    pub fn alpha(&self) -> Rational {
        Rational::from_integer(self.grid_index.into()) * pow2_neg(u64::from(self.kappa) + 2)
    }

    pub fn validate(&self, game: &GameSpec) -> Result<()> {
        if u128::from(self.grid_index) > 1u128 << (self.kappa + 2) {
            return Err(Error::GridIndexRange { j: self.grid_index });
        }
        if self.sigma.player != Player::One || self.tau.player != Player::Two {
            return Err(Error::ShapeMismatch(
                "certificate needs a Player-1 sigma and a Player-2 tau".into(),
            ));
        }
        self.sigma.validate(game)?;
        self.tau.validate(game)
    }
}

/// Two-sided certificate check at `state` with `eps = 2^-kappa`: computes
/// both opponents' exact best responses and accepts iff
/// `alpha - 3eps/4 <= v_sigma - eps/4` and `alpha + 3eps/4 >= v_tau + eps/4`.
/// Acceptance pins the discounted value within `eps` of `alpha`.
pub fn verify_certificate(
    game: &GameSpec,
    disc: &DiscountSpec,
    state: usize,
    cert: &ValueCertificate,
    eps: &Rational,
    cap: usize,
) -> Result<bool> {
    cert.validate(game)?;
    if *eps != pow2_neg(u64::from(cert.kappa)) {
        let eps_kappa = crate::rational::log2_ceil_inverse(eps, 1)
            .ok_or(Error::NonPositiveEpsilon)? as u32;
        return Err(Error::KappaMismatch {
            cert: cert.kappa,
            eps: eps_kappa,
        });
    }
    let alpha = cert.alpha();
    let quarter = eps / Rational::from_integer(4.into());
    let three_quarters = &quarter * Rational::from_integer(3.into());

    let v_sigma = best_response_value(&induce_mdp(game, &cert.sigma, disc)?, state, cap)?;
    let v_tau = best_response_value(&induce_mdp(game, &cert.tau, disc)?, state, cap)?;

    let lower_ok = &alpha - &three_quarters <= &v_sigma - &quarter;
    let upper_ok = &alpha + &three_quarters >= &v_tau + &quarter;
    Ok(lower_ok && upper_ok)
}

/// Transition-perturbation bound for two MDPs on identical shapes: the value
/// gap is at most `max-row-L1(p - p~) / min discount`.
pub fn mdp_continuity_gap(a: &InducedMdp, b: &InducedMdp) -> Result<Rational> {
    if a.player != b.player
        || a.num_states() != b.num_states()
        || a.num_actions() != b.num_actions()
        || a.discount != b.discount
    {
        return Err(Error::ShapeMismatch(
            "continuity bound needs identical shapes and discounts".into(),
        ));
    }
    let mut norm = Rational::zero();
    for s in 0..a.num_states() {
        for act in 0..a.num_actions() {
            let row_l1: Rational = a.transition[s][act]
                .iter()
                .zip(&b.transition[s][act])
                .map(|(x, y)| (x - y).abs())
                .sum();
            norm = norm.max(row_l1);
        }
    }
    let min_lambda = a
        .discount
        .iter()
        .min()
        .ok_or_else(|| Error::ShapeMismatch("empty MDP".into()))?;
    Ok(norm / min_lambda)
}

/// Drops strategy weights at or below `threshold` and renormalizes each row
/// exactly. Used by the patience checks: near-optimal strategies survive
/// pruning at threshold `min_discount * eps / 2`.
pub fn prune_strategy(strat: &MixedStationary, threshold: &Rational) -> Result<MixedStationary> {
    let rows = strat
        .rows
        .iter()
        .map(|row| {
            let kept: Vec<Rational> = row
                .iter()
                .map(|w| {
                    if w <= threshold {
                        Rational::zero()
                    } else {
                        w.clone()
                    }
                })
                .collect();
            let total: Rational = kept.iter().sum();
            if total.is_zero() {
                return Err(Error::AllZeroWeights);
            }
            Ok(kept.into_iter().map(|w| w / &total).collect())
        })
        .collect::<Result<Vec<Vec<Rational>>>>()?;
    Ok(MixedStationary {
        player: strat.player,
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::validate_game;
    use crate::rational::rat;

    fn matching_pennies() -> GameSpec {
        let loop_row = vec![rat(1, 1)];
        validate_game(GameSpec {
            states: vec!["s".into()],
            actions1: vec!["h".into(), "t".into()],
            actions2: vec!["h".into(), "t".into()],
            transition: vec![vec![
                vec![loop_row.clone(), loop_row.clone()],
                vec![loop_row.clone(), loop_row],
            ]],
            rewards: Some(vec![vec![
                vec![rat(1, 1), rat(0, 1)],
                vec![rat(0, 1), rat(1, 1)],
            ]]),
            priorities: None,
        })
        .unwrap()
    }

    fn single_state_mdp(rewards: Vec<Rational>, lambda: Rational) -> InducedMdp {
        let m = rewards.len();
        InducedMdp {
            player: Player::One,
            transition: vec![vec![vec![rat(1, 1)]; m]],
            stage_reward: vec![rewards],
            discount: vec![lambda],
        }
    }

    #[test]
    fn single_state_max_over_actions() {
        let mdp = single_state_mdp(vec![rat(1, 5), rat(7, 10)], rat(1, 2));
        assert_eq!(
            best_response_value(&mdp, 0, DEFAULT_ENUM_CAP).unwrap(),
            rat(7, 10)
        );
    }

    #[test]
    fn equal_rewards_give_that_value() {
        let mdp = single_state_mdp(vec![rat(3, 8), rat(3, 8)], rat(1, 4));
        assert_eq!(
            best_response_value(&mdp, 0, DEFAULT_ENUM_CAP).unwrap(),
            rat(3, 8)
        );
    }

    #[test]
    fn optimal_vector_has_zero_residual() {
        let mdp = single_state_mdp(vec![rat(1, 5), rat(7, 10)], rat(1, 2));
        let values = best_response_values(&mdp, DEFAULT_ENUM_CAP).unwrap();
        assert_eq!(bellman_residual(&mdp, &values).unwrap(), rat(0, 1));
    }

    #[test]
    fn enumeration_cap_enforced() {
        let mdp = single_state_mdp(vec![rat(1, 5), rat(7, 10)], rat(1, 2));
        assert!(matches!(
            best_response_values(&mdp, 1),
            Err(Error::EnumerationCap { needed: 2, cap: 1 })
        ));
    }

    #[test]
    fn uniform_is_optimal_in_matching_pennies() {
        let g = matching_pennies();
        let disc = DiscountSpec::uniform(rat(1, 2), 1);
        let uniform = MixedStationary::uniform(Player::One, &g);
        let value = vec![rat(1, 2)];
        assert!(check_eps_optimal(&g, &disc, &uniform, &rat(1, 100), &value, 64).unwrap());
        let uniform2 = MixedStationary::uniform(Player::Two, &g);
        assert!(check_eps_optimal(&g, &disc, &uniform2, &rat(1, 100), &value, 64).unwrap());
    }

    #[test]
    fn pure_strategy_is_exploitable() {
        let g = matching_pennies();
        let disc = DiscountSpec::uniform(rat(1, 2), 1);
        let dirac = MixedStationary {
            player: Player::One,
            rows: vec![vec![rat(1, 1), rat(0, 1)]],
        };
        // The best response drives the payoff to 0; 1/4-optimality fails.
        assert!(!check_eps_optimal(&g, &disc, &dirac, &rat(1, 4), &[rat(1, 2)], 64).unwrap());
    }

    fn pennies_certificate(grid_index: u64, kappa: u32) -> ValueCertificate {
        let g = matching_pennies();
        ValueCertificate {
            sigma: MixedStationary::uniform(Player::One, &g),
            tau: MixedStationary::uniform(Player::Two, &g),
            grid_index,
            kappa,
        }
    }

    #[test]
    fn certificate_accepts_true_value() {
        let g = matching_pennies();
        let disc = DiscountSpec::uniform(rat(1, 2), 1);
        // alpha = 1/2 on the kappa = 4 grid: j = 2^(kappa+2) / 2 = 32.
        let cert = pennies_certificate(32, 4);
        assert_eq!(cert.alpha(), rat(1, 2));
        assert!(verify_certificate(&g, &disc, 0, &cert, &pow2_neg(4), 64).unwrap());
    }

    #[test]
    fn certificate_rejects_alpha_one() {
        let g = matching_pennies();
        let disc = DiscountSpec::uniform(rat(1, 2), 1);
        let cert = pennies_certificate(64, 4); // alpha = 1
        assert!(!verify_certificate(&g, &disc, 0, &cert, &pow2_neg(4), 64).unwrap());
    }

    #[test]
    fn certificate_kappa_must_match_eps() {
        let g = matching_pennies();
        let disc = DiscountSpec::uniform(rat(1, 2), 1);
        let cert = pennies_certificate(32, 4);
        assert!(matches!(
            verify_certificate(&g, &disc, 0, &cert, &pow2_neg(5), 64),
            Err(Error::KappaMismatch { cert: 4, eps: 5 })
        ));
    }

    #[test]
    fn grid_index_range_checked() {
        let g = matching_pennies();
        let cert = pennies_certificate(65, 4);
        assert!(matches!(
            cert.validate(&g),
            Err(Error::GridIndexRange { j: 65 })
        ));
    }

    #[test]
    fn identical_mdps_gap_zero() {
        let mdp = single_state_mdp(vec![rat(1, 2)], rat(1, 2));
        assert_eq!(mdp_continuity_gap(&mdp, &mdp).unwrap(), rat(0, 1));
    }

    #[test]
    fn perturbed_row_bound() {
        // Move mass delta/2 between two targets: row L1 = delta, bound =
        // delta / min_lambda = 2 * delta at lambda = 1/2.
        let delta = rat(1, 10);
        let base = InducedMdp {
            player: Player::One,
            transition: vec![
                vec![vec![rat(1, 2), rat(1, 2)]],
                vec![vec![rat(0, 1), rat(1, 1)]],
            ],
            stage_reward: vec![vec![rat(1, 1)], vec![rat(0, 1)]],
            discount: vec![rat(1, 2), rat(1, 2)],
        };
        let mut moved = base.clone();
        moved.transition[0][0][0] += rat(1, 20);
        moved.transition[0][0][1] -= rat(1, 20);
        let bound = mdp_continuity_gap(&base, &moved).unwrap();
        assert_eq!(bound, rat(2, 1) * &delta);
        let va = best_response_values(&base, 64).unwrap();
        let vb = best_response_values(&moved, 64).unwrap();
        for (x, y) in va.iter().zip(&vb) {
            assert!((x - y).abs() <= bound);
        }
    }

    #[test]
    fn pruning_keeps_distribution_shape() {
        let strat = MixedStationary {
            player: Player::One,
            rows: vec![vec![rat(1, 100), rat(99, 100)]],
        };
        let pruned = prune_strategy(&strat, &rat(1, 50)).unwrap();
        assert_eq!(pruned.rows[0], vec![rat(0, 1), rat(1, 1)]);
        // Pruning everything is an error.
        assert!(prune_strategy(&strat, &rat(2, 1)).is_err());
    }
}
