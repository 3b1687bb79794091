//! Induced-model cross-checks against direct summation oracles.

use csg_core::game::{
    enumerate_pure, induce_mc, induce_mdp, pure_count, Player,
};
use csg_core::rational::Rational;
use csg_core::testkit::{random_game, random_mixed, random_multi_discount, rng};
use num_traits::{One, Zero};

#[test]
fn induced_mdp_matches_direct_summation() {
    let mut rng = rng(0x21);
    for _ in 0..20 {
        let g = random_game(&mut rng, 2, 2, 2);
        let disc = random_multi_discount(&mut rng, 2, 2);
        let sigma = random_mixed(&mut rng, Player::One, &g);
        let mdp = induce_mdp(&g, &sigma, &disc).unwrap();
        for s in 0..2 {
            for b in 0..2 {
                for t in 0..2 {
                    let direct: Rational = (0..2)
                        .map(|a| &sigma.rows[s][a] * &g.transition[s][a][b][t])
                        .sum();
                    assert_eq!(mdp.transition[s][b][t], direct);
                }
                let direct: Rational = (0..2)
                    .map(|a| &sigma.rows[s][a] * g.reward(s, a, b))
                    .sum();
                assert_eq!(mdp.stage_reward[s][b], direct);
            }
        }
    }
}

#[test]
fn induced_mc_matches_double_summation() {
    let mut rng = rng(0x22);
    for _ in 0..15 {
        let g = random_game(&mut rng, 3, 2, 2);
        let disc = random_multi_discount(&mut rng, 3, 2);
        let sigma = random_mixed(&mut rng, Player::One, &g);
        let tau = random_mixed(&mut rng, Player::Two, &g);
        let mc = induce_mc(&g, &sigma, &tau, &disc).unwrap();
        for s in 0..3 {
            for t in 0..3 {
                let direct: Rational = (0..2)
                    .flat_map(|a| (0..2).map(move |b| (a, b)))
                    .map(|(a, b)| {
                        &sigma.rows[s][a] * &tau.rows[s][b] * &g.transition[s][a][b][t]
                    })
                    .sum();
                assert_eq!(mc.transition[s][t], direct);
            }
        }
    }
}

#[test]
fn induced_rows_sum_to_one_exactly() {
    let mut rng = rng(0x23);
    for _ in 0..15 {
        let g = random_game(&mut rng, 3, 2, 2);
        let disc = random_multi_discount(&mut rng, 3, 2);
        let sigma = random_mixed(&mut rng, Player::One, &g);
        let tau = random_mixed(&mut rng, Player::Two, &g);
        let mc = induce_mc(&g, &sigma, &tau, &disc).unwrap();
        for row in &mc.transition {
            assert_eq!(row.iter().sum::<Rational>(), Rational::one());
        }
        let mdp = induce_mdp(&g, &sigma, &disc).unwrap();
        for per_state in &mdp.transition {
            for row in per_state {
                assert_eq!(row.iter().sum::<Rational>(), Rational::one());
            }
        }
    }
}

#[test]
fn chain_equals_mdp_then_second_average() {
    // Fixing sigma then averaging tau over the induced MDP must agree with
    // the one-shot chain construction, exactly.
    let mut rng = rng(0x24);
    for _ in 0..15 {
        let g = random_game(&mut rng, 2, 2, 3);
        let disc = random_multi_discount(&mut rng, 2, 2);
        let sigma = random_mixed(&mut rng, Player::One, &g);
        let tau = random_mixed(&mut rng, Player::Two, &g);
        let mc = induce_mc(&g, &sigma, &tau, &disc).unwrap();
        let mdp = induce_mdp(&g, &sigma, &disc).unwrap();
        for s in 0..2 {
            for t in 0..2 {
                let averaged: Rational = (0..3)
                    .map(|b| &tau.rows[s][b] * &mdp.transition[s][b][t])
                    .sum();
                assert_eq!(mc.transition[s][t], averaged);
            }
            let averaged: Rational = (0..3)
                .map(|b| &tau.rows[s][b] * &mdp.stage_reward[s][b])
                .sum();
            assert_eq!(mc.stage_reward[s], averaged);
        }
    }
}

#[test]
fn pure_enumeration_is_complete_and_strict() {
    let mut rng = rng(0x25);
    let g = random_game(&mut rng, 3, 3, 2);
    let profiles = enumerate_pure(&g, Player::One);
    assert_eq!(profiles.len(), 27);
    assert_eq!(pure_count(&g, Player::One), 27);
    assert!(profiles.windows(2).all(|w| w[0].choice < w[1].choice));
    let other = enumerate_pure(&g, Player::Two);
    assert_eq!(other.len(), 8);
}

#[test]
fn pure_profiles_are_dirac_rows() {
    let mut rng = rng(0x26);
    let g = random_game(&mut rng, 2, 2, 2);
    for profile in enumerate_pure(&g, Player::Two) {
        let mixed = profile.to_mixed(&g);
        for (s, row) in mixed.rows.iter().enumerate() {
            for (b, w) in row.iter().enumerate() {
                let expected = if b == profile.choice[s] {
                    Rational::one()
                } else {
                    Rational::zero()
                };
                assert_eq!(*w, expected);
            }
        }
    }
}
