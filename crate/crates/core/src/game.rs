//! Game, objective, and strategy data model.
//!
//! A [`GameSpec`] is a finite two-player zero-sum concurrent stochastic game:
//! both players pick an action simultaneously in every state, the next state
//! is drawn from an exact rational transition distribution, and Player 1
//! maximizes. Rewards and a per-state discount assignment make a discounted
//! instance; a priority function makes a parity instance. Fixing stationary
//! strategies for one or both players materializes the induced MDP or Markov
//! chain with exactly averaged transitions and rewards.

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Player {
    One,
    Two,
}

impl Player {
    pub fn opponent(self) -> Player {
        match self {
            Player::One => Player::Two,
            Player::Two => Player::One,
        }
    }
}

/// A finite concurrent stochastic game with global action sets.
///
/// `transition[s][a][b]` is the probability vector over successor states,
/// `rewards[s][a][b]` the stage reward in `[0, 1]`. Rewards are optional so
/// that the same type carries parity instances (priorities only).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GameSpec {
    pub states: Vec<String>,
    pub actions1: Vec<String>,
    pub actions2: Vec<String>,
    pub transition: Vec<Vec<Vec<Vec<Rational>>>>,
    pub rewards: Option<Vec<Vec<Vec<Rational>>>>,
    pub priorities: Option<Vec<u32>>,
}

impl GameSpec {
    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    /// Largest action count over both players (the `m` of size bounds).
    pub fn max_actions(&self) -> usize {
        self.actions1.len().max(self.actions2.len())
    }

    pub fn actions_of(&self, player: Player) -> usize {
        match player {
            Player::One => self.actions1.len(),
            Player::Two => self.actions2.len(),
        }
    }

    pub fn reward(&self, s: usize, a: usize, b: usize) -> &Rational {
        &self.rewards.as_ref().expect("game has no rewards")[s][a][b]
    }
}

/// Per-state discount factors: `factors[assignment[s]]` is the discount used
/// in state `s`. Indices are 0-based internally.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiscountSpec {
    pub factors: Vec<Rational>,
    pub assignment: Vec<usize>,
}

impl DiscountSpec {
    /// Single discount factor applied to every state.
    pub fn uniform(lambda: Rational, num_states: usize) -> DiscountSpec {
        DiscountSpec {
            factors: vec![lambda],
            assignment: vec![0; num_states],
        }
    }

    pub fn discount_of(&self, state: usize) -> &Rational {
        &self.factors[self.assignment[state]]
    }

    pub fn min_factor(&self) -> &Rational {
        self.factors
            .iter()
            .min()
            .expect("discount spec has at least one factor")
    }

    pub fn validate(&self, num_states: usize) -> Result<()> {
        if self.factors.is_empty() {
            return Err(Error::ShapeMismatch("no discount factors".into()));
        }
        for (i, f) in self.factors.iter().enumerate() {
            if !f.is_positive() || *f > Rational::one() {
                return Err(Error::DiscountRange { index: i });
            }
        }
        if self.assignment.len() != num_states {
            return Err(Error::ShapeMismatch(format!(
                "assignment covers {} states, game has {num_states}",
                self.assignment.len()
            )));
        }
        if let Some(&bad) = self.assignment.iter().find(|&&i| i >= self.factors.len()) {
            return Err(Error::ShapeMismatch(format!(
                "assignment index {bad} out of range for {} factors",
                self.factors.len()
            )));
        }
        Ok(())
    }
}

/// A randomized stationary strategy: one probability row per state over the
/// owning player's actions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MixedStationary {
    pub player: Player,
    pub rows: Vec<Vec<Rational>>,
}

impl MixedStationary {
    pub fn uniform(player: Player, game: &GameSpec) -> MixedStationary {
        let m = game.actions_of(player);
        let w = Rational::new(1.into(), (m as i64).into());
        MixedStationary {
            player,
            rows: vec![vec![w; m]; game.num_states()],
        }
    }

    pub fn validate(&self, game: &GameSpec) -> Result<()> {
        if self.rows.len() != game.num_states() {
            return Err(Error::ShapeMismatch(format!(
                "strategy covers {} states, game has {}",
                self.rows.len(),
                game.num_states()
            )));
        }
        let m = game.actions_of(self.player);
        for (s, row) in self.rows.iter().enumerate() {
            if row.len() != m {
                return Err(Error::ShapeMismatch(format!(
                    "strategy row {s} has {} entries, player has {m} actions",
                    row.len()
                )));
            }
            if row.iter().any(|p| p.is_negative()) {
                return Err(Error::NegativeProbability { index: s });
            }
            if row.iter().sum::<Rational>() != Rational::one() {
                return Err(Error::DistributionSum { index: s });
            }
        }
        Ok(())
    }
}

/// A pure stationary strategy: one action index per state.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PureProfile {
    pub player: Player,
    pub choice: Vec<usize>,
}

impl PureProfile {
    pub fn to_mixed(&self, game: &GameSpec) -> MixedStationary {
        let m = game.actions_of(self.player);
        let rows = self
            .choice
            .iter()
            .map(|&a| {
                let mut row = vec![Rational::zero(); m];
                row[a] = Rational::one();
                row
            })
            .collect();
        MixedStationary {
            player: self.player,
            rows,
        }
    }
}

impl PartialOrd for Player {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Player {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        fn rank(p: &Player) -> u8 {
            match p {
                Player::One => 0,
                Player::Two => 1,
            }
        }
        rank(self).cmp(&rank(other))
    }
}

/// Markov chain induced by fixing both players' stationary strategies.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InducedMc {
    pub transition: Vec<Vec<Rational>>,
    pub stage_reward: Vec<Rational>,
    pub discount: Vec<Rational>,
}

impl InducedMc {
    pub fn num_states(&self) -> usize {
        self.transition.len()
    }
}

/// MDP induced by fixing one player's stationary strategy; `player` is the
/// remaining controller.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InducedMdp {
    pub player: Player,
    pub transition: Vec<Vec<Vec<Rational>>>,
    pub stage_reward: Vec<Vec<Rational>>,
    pub discount: Vec<Rational>,
}

impl InducedMdp {
    pub fn num_states(&self) -> usize {
        self.transition.len()
    }

    pub fn num_actions(&self) -> usize {
        self.transition[0].len()
    }

    /// Markov chain obtained by fixing a pure choice of the controller.
    pub fn fix_pure(&self, choice: &[usize]) -> Result<InducedMc> {
        if choice.len() != self.num_states() {
            return Err(Error::ShapeMismatch(format!(
                "choice covers {} states, MDP has {}",
                choice.len(),
                self.num_states()
            )));
        }
        let n = self.num_states();
        let mut transition = Vec::with_capacity(n);
        let mut stage_reward = Vec::with_capacity(n);
        for s in 0..n {
            let a = choice[s];
            if a >= self.num_actions() {
                return Err(Error::ShapeMismatch(format!(
                    "action {a} out of range at state {s}"
                )));
            }
            transition.push(self.transition[s][a].clone());
            stage_reward.push(self.stage_reward[s][a].clone());
        }
        Ok(InducedMc {
            transition,
            stage_reward,
            discount: self.discount.clone(),
        })
    }
}

/// Checks every structural invariant of a game and hands it back unchanged.
/// The first violation is reported with its coordinates.
pub fn validate_game(game: GameSpec) -> Result<GameSpec> {
    let n = game.num_states();
    if n == 0 || game.actions1.is_empty() || game.actions2.is_empty() {
        return Err(Error::EmptyGame);
    }
    let (m1, m2) = (game.actions1.len(), game.actions2.len());
    if game.transition.len() != n {
        return Err(Error::MissingTriple { state: game.transition.len(), a: 0, b: 0 });
    }
    for s in 0..n {
        if game.transition[s].len() != m1 {
            return Err(Error::MissingTriple { state: s, a: game.transition[s].len(), b: 0 });
        }
        for a in 0..m1 {
            if game.transition[s][a].len() != m2 {
                return Err(Error::MissingTriple { state: s, a, b: game.transition[s][a].len() });
            }
            for b in 0..m2 {
                let row = &game.transition[s][a][b];
                if row.len() != n {
                    return Err(Error::MissingTriple { state: s, a, b });
                }
                if row.iter().any(|p| p.is_negative()) {
                    return Err(Error::RowSum { state: s, a, b });
                }
                if row.iter().sum::<Rational>() != Rational::one() {
                    return Err(Error::RowSum { state: s, a, b });
                }
            }
        }
    }
    if let Some(rewards) = &game.rewards {
        if rewards.len() != n {
            return Err(Error::MissingTriple { state: rewards.len(), a: 0, b: 0 });
        }
        for s in 0..n {
            if rewards[s].len() != m1 {
                return Err(Error::MissingTriple { state: s, a: rewards[s].len(), b: 0 });
            }
            for a in 0..m1 {
                if rewards[s][a].len() != m2 {
                    return Err(Error::MissingTriple { state: s, a, b: rewards[s][a].len() });
                }
                for b in 0..m2 {
                    let r = &rewards[s][a][b];
                    if r.is_negative() || *r > Rational::one() {
                        return Err(Error::RewardRange { state: s, a, b });
                    }
                }
            }
        }
    }
    if let Some(priorities) = &game.priorities {
        if priorities.len() != n {
            return Err(Error::PriorityRange { state: priorities.len() });
        }
    }
    Ok(game)
}

/// Fixes `strat` and returns the opposing player's MDP with exactly averaged
/// transitions and rewards.
pub fn induce_mdp(
    game: &GameSpec,
    strat: &MixedStationary,
    disc: &DiscountSpec,
) -> Result<InducedMdp> {
    strat.validate(game)?;
    disc.validate(game.num_states())?;
    let n = game.num_states();
    let controller = strat.player.opponent();
    let m = game.actions_of(controller);
    let mut transition = vec![vec![vec![Rational::zero(); n]; m]; n];
    let mut stage_reward = vec![vec![Rational::zero(); m]; n];
    for s in 0..n {
        for c in 0..m {
            for (fixed_action, weight) in strat.rows[s].iter().enumerate() {
                if weight.is_zero() {
                    continue;
                }
                let (a, b) = match strat.player {
                    Player::One => (fixed_action, c),
                    Player::Two => (c, fixed_action),
                };
                for t in 0..n {
                    transition[s][c][t] += weight * &game.transition[s][a][b][t];
                }
                stage_reward[s][c] += weight * game.reward(s, a, b);
            }
        }
    }
    Ok(InducedMdp {
        player: controller,
        transition,
        stage_reward,
        discount: (0..n).map(|s| disc.discount_of(s).clone()).collect(),
    })
}

/// Fixes both strategies and returns the induced Markov chain.
pub fn induce_mc(
    game: &GameSpec,
    sigma: &MixedStationary,
    tau: &MixedStationary,
    disc: &DiscountSpec,
) -> Result<InducedMc> {
    if sigma.player != Player::One || tau.player != Player::Two {
        return Err(Error::ShapeMismatch(
            "induce_mc expects a Player-1 and a Player-2 strategy".into(),
        ));
    }
    sigma.validate(game)?;
    tau.validate(game)?;
    disc.validate(game.num_states())?;
    let n = game.num_states();
    let mut transition = vec![vec![Rational::zero(); n]; n];
    let mut stage_reward = vec![Rational::zero(); n];
    for s in 0..n {
        for (a, wa) in sigma.rows[s].iter().enumerate() {
            if wa.is_zero() {
                continue;
            }
            for (b, wb) in tau.rows[s].iter().enumerate() {
                if wb.is_zero() {
                    continue;
                }
                let w = wa * wb;
                for t in 0..n {
                    transition[s][t] += &w * &game.transition[s][a][b][t];
                }
                stage_reward[s] += &w * game.reward(s, a, b);
            }
        }
    }
    Ok(InducedMc {
        transition,
        stage_reward,
        discount: (0..n).map(|s| disc.discount_of(s).clone()).collect(),
    })
}

/// All pure stationary strategies of `player`, lexicographically ordered by
/// the per-state action indices. The count is `actions^states`.
pub fn enumerate_pure(game: &GameSpec, player: Player) -> Vec<PureProfile> {
    let n = game.num_states();
    let m = game.actions_of(player);
    let total = (m as u128).pow(n as u32);
    let mut out = Vec::with_capacity(total.min(1 << 20) as usize);
    let mut choice = vec![0usize; n];
    loop {
        out.push(PureProfile {
            player,
            choice: choice.clone(),
        });
        // Odometer with the last state fastest keeps lexicographic order.
        let mut pos = n;
        loop {
            if pos == 0 {
                return out;
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

/// Number of pure stationary strategies of `player`, without materializing.
pub fn pure_count(game: &GameSpec, player: Player) -> u128 {
    (game.actions_of(player) as u128).pow(game.num_states() as u32)
}
