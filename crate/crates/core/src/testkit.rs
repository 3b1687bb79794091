//! Seeded corpus generators and independent oracles for the test suites.
//!
//! Everything here is deliberately naive: Laplace determinant expansion,
//! cofactor adjugates, recurrent-class analysis by transitive closure. The
//! oracles never call the code paths they are used to check.

use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::game::{
    enumerate_pure, DiscountSpec, GameSpec, InducedMc, MixedStationary, Player, PureProfile,
};
use crate::kernel::{stage_game, ValueInterval};
use crate::linalg::RatMatrix;
use crate::matgame::game_value;
use crate::rational::{log2_ceil_inverse, rat, round_to_dyadic, Rational};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random probability row over `n` outcomes from small integer weights;
/// entries have bit size at most 8 for n <= 3.
pub fn random_prob_row(rng: &mut ChaCha8Rng, n: usize) -> Vec<Rational> {
    loop {
        let weights: Vec<i64> = (0..n).map(|_| rng.gen_range(0..=7)).collect();
        let total: i64 = weights.iter().sum();
        if total == 0 {
            continue;
        }
        return weights.into_iter().map(|w| rat(w, total)).collect();
    }
}

/// Random reward in `[0, 1]` on the eighths grid.
pub fn random_reward(rng: &mut ChaCha8Rng) -> Rational {
    rat(rng.gen_range(0..=8), 8)
}

/// Random discount factor from a fixed menu with minimum 1/8.
pub fn random_discount(rng: &mut ChaCha8Rng) -> Rational {
    let menu = [
        rat(1, 8),
        rat(1, 4),
        rat(3, 8),
        rat(1, 2),
        rat(5, 8),
        rat(3, 4),
        rat(7, 8),
    ];
    menu[rng.gen_range(0..menu.len())].clone()
}

/// Random rational in `[-bound, bound]` with denominator up to `max_den`.
pub fn random_rational(rng: &mut ChaCha8Rng, bound: i64, max_den: i64) -> Rational {
    let den = rng.gen_range(1..=max_den);
    let num = rng.gen_range(-bound * den..=bound * den);
    rat(num, den)
}

/// Random rational matrix with entries in `[-bound, bound]`.
pub fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize, bound: i64) -> RatMatrix {
    let data = (0..rows * cols)
        .map(|_| random_rational(rng, bound, 6))
        .collect();
    RatMatrix::new(rows, cols, data)
}

/// Random game with rewards, `n` states, and `m1 x m2` actions.
pub fn random_game(rng: &mut ChaCha8Rng, n: usize, m1: usize, m2: usize) -> GameSpec {
    let transition = (0..n)
        .map(|_| {
            (0..m1)
                .map(|_| (0..m2).map(|_| random_prob_row(rng, n)).collect())
                .collect()
        })
        .collect();
    let rewards = (0..n)
        .map(|_| {
            (0..m1)
                .map(|_| (0..m2).map(|_| random_reward(rng)).collect())
                .collect()
        })
        .collect();
    GameSpec {
        states: (0..n).map(|s| format!("s{s}")).collect(),
        actions1: (0..m1).map(|a| format!("a{a}")).collect(),
        actions2: (0..m2).map(|b| format!("b{b}")).collect(),
        transition,
        rewards: Some(rewards),
        priorities: None,
    }
}

/// Random single-factor discount spec with min factor 1/8.
pub fn random_uniform_discount(rng: &mut ChaCha8Rng, n: usize) -> DiscountSpec {
    DiscountSpec::uniform(random_discount(rng), n)
}

/// Random multi-factor discount spec (up to `d` factors, all >= 1/8).
pub fn random_multi_discount(rng: &mut ChaCha8Rng, n: usize, d: usize) -> DiscountSpec {
    let d = d.max(1);
    let factors: Vec<Rational> = (0..d).map(|_| random_discount(rng)).collect();
    let assignment = (0..n).map(|_| rng.gen_range(0..d)).collect();
    DiscountSpec {
        factors,
        assignment,
    }
}

/// Random mixed stationary strategy with small rational weights.
pub fn random_mixed(rng: &mut ChaCha8Rng, player: Player, game: &GameSpec) -> MixedStationary {
    let m = game.actions_of(player);
    let rows = (0..game.num_states())
        .map(|_| random_prob_row(rng, m))
        .collect();
    MixedStationary { player, rows }
}

/// Random Markov chain with random per-state discounts.
pub fn random_mc(rng: &mut ChaCha8Rng, n: usize) -> InducedMc {
    InducedMc {
        transition: (0..n).map(|_| random_prob_row(rng, n)).collect(),
        stage_reward: (0..n).map(|_| random_reward(rng)).collect(),
        discount: (0..n).map(|_| random_discount(rng)).collect(),
    }
}

/// Random absorbing chain: `n` transient states plus the two designated
/// sinks; every transient row puts positive mass on a sink.
pub fn random_absorbing_chain(rng: &mut ChaCha8Rng, n: usize) -> crate::fpmc::ReachMc {
    let total = n + 2;
    let top = n;
    let bot = n + 1;
    let mut transition = Vec::with_capacity(total);
    for _ in 0..n {
        let mut weights: Vec<i64> = (0..total).map(|_| rng.gen_range(0..=7)).collect();
        if weights[top] == 0 && weights[bot] == 0 {
            weights[if rng.gen_bool(0.5) { top } else { bot }] = 1 + rng.gen_range(0..=6);
        }
        let sum: i64 = weights.iter().sum();
        transition.push(weights.into_iter().map(|w| rat(w, sum)).collect());
    }
    for absorbing in [top, bot] {
        let mut row = vec![Rational::zero(); total];
        row[absorbing] = Rational::one();
        transition.push(row);
    }
    crate::fpmc::ReachMc {
        transition,
        top,
        bot,
    }
}

/// Multiplies every nonzero transient-row entry by `1 + k/1000` for a random
/// `|k| <= spread` and renormalizes, keeping supports identical. The caller
/// measures the resulting entrywise relative distance exactly.
pub fn perturb_chain(
    rng: &mut ChaCha8Rng,
    chain: &crate::fpmc::ReachMc,
    spread: i64,
) -> crate::fpmc::ReachMc {
    let mut transition = Vec::with_capacity(chain.num_states());
    for (s, row) in chain.transition.iter().enumerate() {
        if row[s].is_one() {
            transition.push(row.clone());
            continue;
        }
        let scaled: Vec<Rational> = row
            .iter()
            .map(|p| {
                if p.is_zero() {
                    Rational::zero()
                } else {
                    p * (Rational::one() + rat(rng.gen_range(-spread..=spread), 1000))
                }
            })
            .collect();
        let total: Rational = scaled.iter().sum();
        transition.push(scaled.into_iter().map(|p| p / &total).collect());
    }
    crate::fpmc::ReachMc {
        transition,
        top: chain.top,
        bot: chain.bot,
    }
}

/// Determinant by Laplace expansion along the first row. Exponential;
/// independent of the elimination path.
pub fn naive_det(m: &RatMatrix) -> Rational {
    assert!(m.is_square());
    let n = m.rows();
    if n == 1 {
        return m.at(0, 0).clone();
    }
    let mut acc = Rational::zero();
    for j in 0..n {
        if m.at(0, j).is_zero() {
            continue;
        }
        let cofactor = naive_det(&m.minor(0, j));
        let signed = if j % 2 == 0 { cofactor } else { -cofactor };
        acc += m.at(0, j) * signed;
    }
    acc
}

/// Sum of all adjugate entries via explicit cofactors of `naive_det`.
pub fn adjugate_sum(m: &RatMatrix) -> Rational {
    assert!(m.is_square());
    let n = m.rows();
    if n == 1 {
        return Rational::one();
    }
    let mut acc = Rational::zero();
    for i in 0..n {
        for j in 0..n {
            let c = naive_det(&m.minor(i, j));
            acc += if (i + j) % 2 == 0 { c } else { -c };
        }
    }
    acc
}

/// Probability that the minimal priority visited infinitely often is even,
/// for a Markov chain given as a bare transition matrix. Uses transitive
/// closure to find closed recurrent classes and an exact absorption solve.
pub fn mc_parity_probability(
    transition: &[Vec<Rational>],
    priorities: &[u32],
    start: usize,
) -> Rational {
    let n = transition.len();
    // Reachability closure over the support graph.
    let mut reach = vec![vec![false; n]; n];
    for (s, row) in transition.iter().enumerate() {
        reach[s][s] = true;
        for (t, p) in row.iter().enumerate() {
            if p.is_positive() {
                reach[s][t] = true;
            }
        }
    }
    for k in 0..n {
        for i in 0..n {
            if !reach[i][k] {
                continue;
            }
            for j in 0..n {
                if reach[k][j] {
                    reach[i][j] = true;
                }
            }
        }
    }
    // Recurrent states: everything they can reach can come back.
    let recurrent: Vec<bool> = (0..n)
        .map(|s| (0..n).all(|t| !reach[s][t] || reach[t][s]))
        .collect();
    // Value of a recurrent state: its whole class is visited infinitely
    // often almost surely, so only the class minimum priority matters.
    let mut value = vec![Rational::zero(); n];
    for s in 0..n {
        if !recurrent[s] {
            continue;
        }
        let class_min = (0..n)
            .filter(|&t| reach[s][t] && reach[t][s])
            .map(|t| priorities[t])
            .min()
            .expect("class contains s");
        if class_min % 2 == 0 {
            value[s] = Rational::one();
        }
    }
    let transient: Vec<usize> = (0..n).filter(|&s| !recurrent[s]).collect();
    if transient.is_empty() || recurrent[start] {
        return value[start].clone();
    }
    // Absorption probabilities into the even-minimum classes.
    let k = transient.len();
    let mut system = RatMatrix::identity(k);
    let mut rhs = vec![Rational::zero(); k];
    for (i, &s) in transient.iter().enumerate() {
        for (j, &t) in transient.iter().enumerate() {
            let v = system.at(i, j) - &transition[s][t];
            system.set(i, j, v);
        }
        for t in 0..n {
            if recurrent[t] {
                rhs[i] += &transition[s][t] * &value[t];
            }
        }
    }
    let x = crate::linalg::solve_linear(&system, &rhs).expect("absorption system is nonsingular");
    let pos = transient.iter().position(|&s| s == start).expect("start is transient");
    x[pos].clone()
}

fn pure_pair_transition(
    game: &GameSpec,
    p1: &PureProfile,
    p2: &PureProfile,
) -> Vec<Vec<Rational>> {
    (0..game.num_states())
        .map(|s| game.transition[s][p1.choice[s]][p2.choice[s]].clone())
        .collect()
}

/// Parity value of a turn-based game by strategy enumeration: maximin over
/// pure stationary pairs of the induced chain's parity probability. Sound
/// for turn-based instances, where pure stationary optima exist; callers
/// should assert maximin equals minimax on their corpus.
pub fn turn_based_parity_value(game: &GameSpec, start: usize) -> (Rational, Rational) {
    let priorities = game.priorities.as_ref().expect("parity game");
    let rows = enumerate_pure(game, Player::One);
    let cols = enumerate_pure(game, Player::Two);
    let payoff: Vec<Vec<Rational>> = rows
        .iter()
        .map(|p1| {
            cols.iter()
                .map(|p2| {
                    mc_parity_probability(&pure_pair_transition(game, p1, p2), priorities, start)
                })
                .collect()
        })
        .collect();
    let maximin = payoff
        .iter()
        .map(|row| row.iter().min().unwrap().clone())
        .max()
        .unwrap();
    let minimax = (0..cols.len())
        .map(|j| payoff.iter().map(|row| row[j].clone()).max().unwrap())
        .min()
        .unwrap();
    (maximin, minimax)
}

/// Near-optimal stationary strategies extracted from value iteration: run the
/// rounded Shapley iteration until the step drops below `tol * min_lambda`,
/// then solve each state's stage game exactly. Returns both strategies and
/// the certified enclosures of the values.
pub fn extract_strategies(
    game: &GameSpec,
    disc: &DiscountSpec,
    tol: &Rational,
) -> (MixedStationary, MixedStationary, Vec<ValueInterval>) {
    let n = game.num_states();
    let min_lambda = disc.min_factor().clone();
    let stop = tol * &min_lambda;
    let budget = &stop * &min_lambda;
    let precision = log2_ceil_inverse(&budget, 1).expect("positive budget");
    let mut v = vec![Rational::zero(); n];
    loop {
        let next: Vec<Rational> = (0..n)
            .map(|s| round_to_dyadic(&game_value(&stage_game(game, disc, s, &v)).value, precision))
            .collect();
        let step = v
            .iter()
            .zip(&next)
            .map(|(a, b)| (a - b).abs())
            .max()
            .unwrap();
        v = next;
        if step <= stop {
            break;
        }
    }
    let mut sigma_rows = Vec::with_capacity(n);
    let mut tau_rows = Vec::with_capacity(n);
    let mut intervals = Vec::with_capacity(n);
    for s in 0..n {
        let sol = game_value(&stage_game(game, disc, s, &v));
        sigma_rows.push(sol.row_strategy);
        tau_rows.push(sol.col_strategy);
        intervals.push(ValueInterval {
            lo: &v[s] - tol,
            hi: &v[s] + tol,
        });
    }
    (
        MixedStationary {
            player: Player::One,
            rows: sigma_rows,
        },
        MixedStationary {
            player: Player::Two,
            rows: tau_rows,
        },
        intervals,
    )
}
