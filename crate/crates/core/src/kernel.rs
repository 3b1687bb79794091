//! Determinant kernel of the discounted game.
//!
//! Fixing a pair of pure stationary profiles turns the discounted Bellman
//! system into a linear system; Cramer's rule writes the payoff at a state as
//! a ratio of two determinants. The kernel caches that determinant pair for
//! every profile pair, so the auxiliary matrix game whose entries are affine
//! in the probe value `z` can be rebuilt for any `z` with one
//! multiply-subtract per entry. An independent value-iteration oracle returns
//! certified value intervals for cross-checking the solvers.

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::game::{
    enumerate_pure, induce_mc, DiscountSpec, GameSpec, InducedMc, MixedStationary, Player,
    PureProfile,
};
use crate::linalg::{bareiss_det, solve_linear, RatMatrix};
use crate::matgame::{game_value, MatrixGame};
use crate::rational::{log2_ceil_inverse, round_to_dyadic, Rational};

/// The pair of determinants behind Cramer's rule for one profile pair: the
/// payoff at the kernel's state is `payoff_num / payoff_den`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KernelEntry {
    pub payoff_num: Rational,
    pub payoff_den: Rational,
}

/// `Id - ((1 - L) 1^T) .* P` for a chain with transition `P` and per-state
/// discounts `L`: the coefficient matrix of the discounted Bellman system.
fn bellman_matrix(transition: &[Vec<Rational>], discount: &[Rational]) -> RatMatrix {
    let n = transition.len();
    let mut m = RatMatrix::identity(n);
    for s in 0..n {
        let keep = Rational::one() - &discount[s];
        for t in 0..n {
            let v = m.at(s, t) - &keep * &transition[s][t];
            m.set(s, t, v);
        }
    }
    m
}

fn pure_chain(
    game: &GameSpec,
    p1: &PureProfile,
    p2: &PureProfile,
) -> (Vec<Vec<Rational>>, Vec<Rational>) {
    let n = game.num_states();
    let transition = (0..n)
        .map(|s| game.transition[s][p1.choice[s]][p2.choice[s]].clone())
        .collect();
    let reward = (0..n)
        .map(|s| game.reward(s, p1.choice[s], p2.choice[s]).clone())
        .collect();
    (transition, reward)
}

/// Exact determinant pair for a pure profile pair at `state`.
pub fn kernel_entry(
    game: &GameSpec,
    disc: &DiscountSpec,
    state: usize,
    p1: &PureProfile,
    p2: &PureProfile,
) -> Result<KernelEntry> {
    if p1.player != Player::One || p2.player != Player::Two {
        return Err(Error::ShapeMismatch(
            "kernel entries take a Player-1 and a Player-2 profile".into(),
        ));
    }
    if p1.choice.len() != game.num_states() || p2.choice.len() != game.num_states() {
        return Err(Error::ShapeMismatch("profile does not cover all states".into()));
    }
    let n = game.num_states();
    let (transition, reward) = pure_chain(game, p1, p2);
    let discount: Vec<Rational> = (0..n).map(|s| disc.discount_of(s).clone()).collect();
    let base = bellman_matrix(&transition, &discount);
    let payoff_den = bareiss_det(&base)?;
    let mut replaced = base;
    for row in 0..n {
        replaced.set(row, state, &discount[row] * &reward[row]);
    }
    let payoff_num = bareiss_det(&replaced)?;
    Ok(KernelEntry {
        payoff_num,
        payoff_den,
    })
}

/// Determinant pair of the chain induced by mixed stationary strategies;
/// agrees with the product-weighted combination of pure-profile entries.
pub fn kernel_entry_mixed(
    game: &GameSpec,
    disc: &DiscountSpec,
    state: usize,
    sigma: &MixedStationary,
    tau: &MixedStationary,
) -> Result<KernelEntry> {
    let mc = induce_mc(game, sigma, tau, disc)?;
    let base = bellman_matrix(&mc.transition, &mc.discount);
    let payoff_den = bareiss_det(&base)?;
    let mut replaced = base;
    for row in 0..mc.num_states() {
        replaced.set(row, state, &mc.discount[row] * &mc.stage_reward[row]);
    }
    let payoff_num = bareiss_det(&replaced)?;
    Ok(KernelEntry {
        payoff_num,
        payoff_den,
    })
}

/// Cached kernel entries for every pure profile pair, with deterministic
/// row/column order taken from [`enumerate_pure`].
#[derive(Debug, Clone)]
pub struct KernelMatrix {
    pub state: usize,
    pub row_profiles: Vec<PureProfile>,
    pub col_profiles: Vec<PureProfile>,
    entries: Vec<KernelEntry>,
}

impl KernelMatrix {
    pub fn build(game: &GameSpec, disc: &DiscountSpec, state: usize) -> Result<KernelMatrix> {
        disc.validate(game.num_states())?;
        if state >= game.num_states() {
            return Err(Error::ShapeMismatch(format!("state {state} out of range")));
        }
        let row_profiles = enumerate_pure(game, Player::One);
        let col_profiles = enumerate_pure(game, Player::Two);
        let mut entries = Vec::with_capacity(row_profiles.len() * col_profiles.len());
        for p1 in &row_profiles {
            for p2 in &col_profiles {
                entries.push(kernel_entry(game, disc, state, p1, p2)?);
            }
        }
        Ok(KernelMatrix {
            state,
            row_profiles,
            col_profiles,
            entries,
        })
    }

    pub fn entry(&self, row: usize, col: usize) -> &KernelEntry {
        &self.entries[row * self.col_profiles.len() + col]
    }

    /// The auxiliary matrix game at probe value `z`: entry
    /// `payoff_num - z * payoff_den`, affine and strictly decreasing in `z`.
    pub fn game_at(&self, z: &Rational) -> MatrixGame {
        let data = self
            .entries
            .iter()
            .map(|e| &e.payoff_num - z * &e.payoff_den)
            .collect();
        MatrixGame {
            payoff: RatMatrix::new(self.row_profiles.len(), self.col_profiles.len(), data),
        }
    }

    /// Exact value of the auxiliary game at `z`; its sign locates the
    /// discounted value at the kernel's state.
    pub fn value_at(&self, z: &Rational) -> Rational {
        game_value(&self.game_at(z)).value
    }
}

/// Exact discounted values of a Markov chain, one per state, by solving the
/// Bellman system directly.
pub fn mc_discounted_values(mc: &InducedMc) -> Result<Vec<Rational>> {
    let n = mc.num_states();
    let base = bellman_matrix(&mc.transition, &mc.discount);
    let rhs: Vec<Rational> = (0..n)
        .map(|s| &mc.discount[s] * &mc.stage_reward[s])
        .collect();
    solve_linear(&base, &rhs)
}

/// Exact discounted payoff at `state` under a pair of mixed stationary
/// strategies.
pub fn discounted_payoff(
    game: &GameSpec,
    disc: &DiscountSpec,
    state: usize,
    sigma: &MixedStationary,
    tau: &MixedStationary,
) -> Result<Rational> {
    let mc = induce_mc(game, sigma, tau, disc)?;
    Ok(mc_discounted_values(&mc)?.swap_remove(state))
}

/// Verifies the determinant lower bound `det >= (min discount)^n` on the
/// Bellman matrix of a chain.
pub fn det_lower_bound_check(mc: &InducedMc) -> Result<bool> {
    let n = mc.num_states();
    let det = bareiss_det(&bellman_matrix(&mc.transition, &mc.discount))?;
    let min_lambda = mc
        .discount
        .iter()
        .min()
        .ok_or_else(|| Error::ShapeMismatch("empty chain".into()))?;
    let mut bound = Rational::one();
    for _ in 0..n {
        bound *= min_lambda;
    }
    Ok(det >= bound)
}

/// Certified enclosure of a discounted value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValueInterval {
    pub lo: Rational,
    pub hi: Rational,
}

impl ValueInterval {
    pub fn contains(&self, v: &Rational) -> bool {
        self.lo <= *v && *v <= self.hi
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn widen(&self, by: &Rational) -> ValueInterval {
        ValueInterval {
            lo: &self.lo - by,
            hi: &self.hi + by,
        }
    }

    pub fn midpoint(&self) -> Rational {
        (&self.lo + &self.hi) / Rational::from_integer(2.into())
    }
}

/// Independent value-iteration oracle: iterates the Shapley operator (stage
/// matrix games over one-step lookahead payoffs) from zero until the step
/// drops below `tol * min_lambda`, then returns per-state intervals of width
/// `2 * tol` certified by the contraction factor `1 - min_lambda`.
///
/// Iterates are rounded to dyadics between steps to keep bit growth linear;
/// the rounding budget `tol * min_lambda^2` per step is folded into the
/// certificate, so the enclosure stays sound.
pub fn value_iteration_oracle(
    game: &GameSpec,
    disc: &DiscountSpec,
    tol: &Rational,
) -> Result<Vec<ValueInterval>> {
    if !tol.is_positive() {
        return Err(Error::NonPositiveTolerance);
    }
    disc.validate(game.num_states())?;
    if game.rewards.is_none() {
        return Err(Error::ShapeMismatch("value iteration needs rewards".into()));
    }
    let n = game.num_states();
    let min_lambda = disc.min_factor().clone();
    let stop = tol * &min_lambda;
    let rounding_budget = &stop * &min_lambda;
    let precision = log2_ceil_inverse(&rounding_budget, 1).expect("budget is positive");

    let mut v = vec![Rational::zero(); n];
    loop {
        let mut next = Vec::with_capacity(n);
        for s in 0..n {
            let stage = stage_game(game, disc, s, &v);
            let value = game_value(&stage).value;
            next.push(round_to_dyadic(&value, precision));
        }
        let step = v
            .iter()
            .zip(&next)
            .map(|(a, b)| (a - b).abs())
            .max()
            .expect("game has at least one state");
        v = next;
        if step <= stop {
            break;
        }
    }
    Ok(v
        .into_iter()
        .map(|mid| ValueInterval {
            lo: &mid - tol,
            hi: &mid + tol,
        })
        .collect())
}

/// One-step lookahead stage game at `state` for continuation values `v`.
pub fn stage_game(
    game: &GameSpec,
    disc: &DiscountSpec,
    state: usize,
    v: &[Rational],
) -> MatrixGame {
    let (m1, m2) = (game.actions1.len(), game.actions2.len());
    let lambda = disc.discount_of(state);
    let keep = Rational::one() - lambda;
    let mut data = Vec::with_capacity(m1 * m2);
    for a in 0..m1 {
        for b in 0..m2 {
            let continuation: Rational = game.transition[state][a][b]
                .iter()
                .zip(v)
                .map(|(p, val)| p * val)
                .sum();
            data.push(lambda * game.reward(state, a, b) + &keep * continuation);
        }
    }
    MatrixGame {
        payoff: RatMatrix::new(m1, m2, data),
    }
}

/// Weight of each pure profile under the product lift of a mixed stationary
/// strategy; used by the bilinearity cross-checks.
pub fn profile_weights(strat: &MixedStationary, profiles: &[PureProfile]) -> Vec<Rational> {
    profiles
        .iter()
        .map(|p| {
            p.choice
                .iter()
                .enumerate()
                .map(|(s, &a)| strat.rows[s][a].clone())
                .product()
        })
        .collect()
}
