//! Matrix-game solver properties: certification, shift/scale laws,
//! monotonicity, and the determinant-ratio witness.

use csg_core::linalg::RatMatrix;
use csg_core::matgame::{certifies, game_value, shapley_snow_witness, MatrixGame};
use csg_core::rational::{rat, Rational};
use csg_core::testkit::{random_matrix, random_rational, rng};
use num_traits::Signed;

fn random_game(rng: &mut rand_chacha::ChaCha8Rng, r: usize, c: usize) -> MatrixGame {
    MatrixGame {
        payoff: random_matrix(rng, r, c, 5),
    }
}

#[test]
fn strategies_certify_value_on_random_games() {
    let mut rng = rng(0x31);
    for round in 0..60 {
        let r = 1 + round % 5;
        let c = 1 + (round / 5) % 5;
        let g = random_game(&mut rng, r, c);
        let sol = game_value(&g);
        assert!(certifies(&g, &sol), "uncertified solution at round {round}");
    }
}

#[test]
fn constant_shift_moves_value_by_constant() {
    let mut rng = rng(0x32);
    for _ in 0..20 {
        let g = random_game(&mut rng, 3, 3);
        let shift = random_rational(&mut rng, 3, 4);
        let mut shifted = g.payoff.clone();
        for i in 0..3 {
            for j in 0..3 {
                shifted.set(i, j, g.payoff.at(i, j) + &shift);
            }
        }
        let v0 = game_value(&g).value;
        let v1 = game_value(&MatrixGame { payoff: shifted }).value;
        assert_eq!(v1, v0 + shift);
    }
}

#[test]
fn positive_scaling_scales_value() {
    let mut rng = rng(0x33);
    for _ in 0..20 {
        let g = random_game(&mut rng, 3, 2);
        let mut scale = random_rational(&mut rng, 3, 4).abs();
        if scale == rat(0, 1) {
            scale = rat(1, 2);
        }
        let mut scaled = g.payoff.clone();
        for i in 0..3 {
            for j in 0..2 {
                scaled.set(i, j, g.payoff.at(i, j) * &scale);
            }
        }
        let v0 = game_value(&g).value;
        let v1 = game_value(&MatrixGame { payoff: scaled }).value;
        assert_eq!(v1, v0 * scale);
    }
}

#[test]
fn value_is_entrywise_monotone() {
    let mut rng = rng(0x34);
    for _ in 0..20 {
        let g = random_game(&mut rng, 3, 3);
        let mut bumped = g.payoff.clone();
        for i in 0..3 {
            for j in 0..3 {
                let bump = random_rational(&mut rng, 2, 3).abs();
                bumped.set(i, j, g.payoff.at(i, j) + bump);
            }
        }
        let v0 = game_value(&g).value;
        let v1 = game_value(&MatrixGame { payoff: bumped }).value;
        assert!(v1 >= v0);
    }
}

#[test]
fn witness_ratio_equals_lp_value() {
    let mut rng = rng(0x35);
    for _ in 0..15 {
        let g = random_game(&mut rng, 3, 3);
        let sol = game_value(&g);
        let w = shapley_snow_witness(&g);
        assert_eq!(&w.det / &w.minor_sum, sol.value);
    }
}

#[test]
fn degenerate_shapes() {
    // Single row: the column player picks the minimum.
    let g = MatrixGame {
        payoff: RatMatrix::from_rows(vec![vec![rat(2, 1), rat(-1, 3), rat(5, 7)]]),
    };
    let sol = game_value(&g);
    assert_eq!(sol.value, rat(-1, 3));
    assert!(certifies(&g, &sol));
    // Single column: the row player picks the maximum.
    let g = MatrixGame {
        payoff: RatMatrix::from_rows(vec![vec![rat(2, 1)], vec![rat(7, 2)], vec![rat(-4, 1)]]),
    };
    let sol = game_value(&g);
    assert_eq!(sol.value, rat(7, 2));
    assert!(certifies(&g, &sol));
}

#[test]
fn all_equal_entries() {
    let c = rat(3, 11);
    let g = MatrixGame {
        payoff: RatMatrix::from_rows(vec![vec![c.clone(), c.clone()], vec![c.clone(), c.clone()]]),
    };
    let sol = game_value(&g);
    assert_eq!(sol.value, c);
    assert!(certifies(&g, &sol));
}

#[test]
fn witness_on_rock_paper_scissors() {
    let g = MatrixGame {
        payoff: RatMatrix::from_rows(vec![
            vec![rat(0, 1), rat(1, 1), rat(-1, 1)],
            vec![rat(-1, 1), rat(0, 1), rat(1, 1)],
            vec![rat(1, 1), rat(-1, 1), rat(0, 1)],
        ]),
    };
    let sol = game_value(&g);
    assert_eq!(sol.value, rat(0, 1));
    assert_eq!(sol.row_strategy, vec![rat(1, 3); 3]);
    let w = shapley_snow_witness(&g);
    assert_eq!(&w.det / &w.minor_sum, rat(0, 1));
}
