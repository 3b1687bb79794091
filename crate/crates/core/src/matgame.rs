//! Exact value and optimal mixed strategies of zero-sum matrix games.
//!
//! The value is computed by an exact rational simplex. Entries are shifted to
//! be at least 1, the column player's scaled LP `max 1'y : My <= 1, y >= 0`
//! is solved with Bland's rule (no cycling, no tolerances), and both players'
//! strategies fall out of the primal and dual solutions. Everything is exact;
//! the returned strategies certify the value by construction.

use num_traits::{One, Signed, Zero};

use crate::linalg::{bareiss_det, signed_minor_sum, RatMatrix};
use crate::rational::Rational;

/// Zero-sum matrix game; the row player maximizes.
#[derive(Debug, Clone)]
pub struct MatrixGame {
    pub payoff: RatMatrix,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GameSolution {
    pub value: Rational,
    pub row_strategy: Vec<Rational>,
    pub col_strategy: Vec<Rational>,
}

/// Exact minimax value with certifying optimal strategies for both players.
pub fn game_value(game: &MatrixGame) -> GameSolution {
    let m = &game.payoff;
    let (r, c) = (m.rows(), m.cols());

    // Shift so every entry is >= 1; the value shifts by the same amount.
    let min_entry = (0..r)
        .flat_map(|i| (0..c).map(move |j| (i, j)))
        .map(|(i, j)| m.at(i, j))
        .min()
        .expect("matrix games are non-empty")
        .clone();
    let shift = if min_entry < Rational::one() {
        Rational::one() - &min_entry
    } else {
        Rational::zero()
    };

    // Tableau over c structural + r slack columns.
    let cols = c + r;
    let mut tab: Vec<Vec<Rational>> = (0..r)
        .map(|i| {
            let mut row: Vec<Rational> = (0..c).map(|j| m.at(i, j) + &shift).collect();
            row.extend((0..r).map(|k| {
                if k == i {
                    Rational::one()
                } else {
                    Rational::zero()
                }
            }));
            row
        })
        .collect();
    let mut rhs = vec![Rational::one(); r];
    let mut zrow: Vec<Rational> = (0..cols)
        .map(|j| if j < c { Rational::one() } else { Rational::zero() })
        .collect();
    let mut zval = Rational::zero();
    let mut basis: Vec<usize> = (c..c + r).collect();

    loop {
        // Bland: entering column is the smallest index with positive reduced cost.
        let Some(enter) = (0..cols).find(|&j| zrow[j].is_positive()) else {
            break;
        };
        // Ratio test; ties broken by smallest basis variable index.
        let mut pivot_row: Option<usize> = None;
        let mut best: Option<Rational> = None;
        for i in 0..r {
            if !tab[i][enter].is_positive() {
                continue;
            }
            let ratio = &rhs[i] / &tab[i][enter];
            let better = match &best {
                None => true,
                Some(b) => {
                    ratio < *b || (ratio == *b && basis[i] < basis[pivot_row.unwrap()])
                }
            };
            if better {
                best = Some(ratio);
                pivot_row = Some(i);
            }
        }
        let p = pivot_row.expect("matrix-game LP is bounded, a pivot row always exists");

        let piv = tab[p][enter].clone();
        for v in tab[p].iter_mut() {
            *v /= &piv;
        }
        rhs[p] /= &piv;
        for i in 0..r {
            if i == p || tab[i][enter].is_zero() {
                continue;
            }
            let f = tab[i][enter].clone();
            for j in 0..cols {
                let d = &f * &tab[p][j];
                tab[i][j] -= d;
            }
            let d = &f * &rhs[p];
            rhs[i] -= d;
        }
        let f = zrow[enter].clone();
        if !f.is_zero() {
            for j in 0..cols {
                let d = &f * &tab[p][j];
                zrow[j] -= d;
            }
            zval += &f * &rhs[p];
        }
        basis[p] = enter;
    }

    // zval = 1 / shifted value; structural primal = column strategy (scaled),
    // slack duals = row strategy (scaled).
    debug_assert!(zval.is_positive());
    let mut col_scaled = vec![Rational::zero(); c];
    for i in 0..r {
        if basis[i] < c {
            col_scaled[basis[i]] = rhs[i].clone();
        }
    }
    let row_scaled: Vec<Rational> = (0..r).map(|i| -zrow[c + i].clone()).collect();
    let shifted_value = Rational::one() / &zval;
    GameSolution {
        value: shifted_value - shift,
        row_strategy: row_scaled.into_iter().map(|u| u / &zval).collect(),
        col_strategy: col_scaled.into_iter().map(|y| y / &zval).collect(),
    }
}

/// A square sub-matrix witnessing the game value as a determinant ratio.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SnowWitness {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
    pub det: Rational,
    pub minor_sum: Rational,
}

/// Finds a square sub-matrix `M0` with `S(M0) != 0` whose ratio
/// `det(M0)/S(M0)` equals the game value, scanning sizes in increasing order
/// and index sets lexicographically. Shapley–Snow guarantees existence.
/// Diagnostic facility: exponential in the matrix size.
pub fn shapley_snow_witness(game: &MatrixGame) -> SnowWitness {
    let value = game_value(game).value;
    let (r, c) = (game.payoff.rows(), game.payoff.cols());
    for size in 1..=r.min(c) {
        for row_idx in combinations(r, size) {
            for col_idx in combinations(c, size) {
                let sub = game.payoff.submatrix(&row_idx, &col_idx);
                let s = signed_minor_sum(&sub).expect("submatrix is square");
                if s.is_zero() {
                    continue;
                }
                let det = bareiss_det(&sub).expect("submatrix is square");
                if &det / &s == value {
                    return SnowWitness {
                        rows: row_idx,
                        cols: col_idx,
                        det,
                        minor_sum: s,
                    };
                }
            }
        }
    }
    unreachable!("a value-witnessing sub-matrix always exists")
}

/// All `size`-element subsets of `0..n` in lexicographic order.
fn combinations(n: usize, size: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current: Vec<usize> = (0..size).collect();
    if size > n {
        return out;
    }
    loop {
        out.push(current.clone());
        // Advance the rightmost index that can still move.
        let mut i = size;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if current[i] < n - (size - i) {
                current[i] += 1;
                for j in i + 1..size {
                    current[j] = current[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Exact certificate that strategies guarantee the claimed value: the row
/// strategy earns at least `value` against every column, the column strategy
/// concedes at most `value` against every row.
pub fn certifies(game: &MatrixGame, sol: &GameSolution) -> bool {
    let m = &game.payoff;
    let (r, c) = (m.rows(), m.cols());
    if sol.row_strategy.iter().sum::<Rational>() != Rational::one()
        || sol.col_strategy.iter().sum::<Rational>() != Rational::one()
        || sol.row_strategy.iter().any(Signed::is_negative)
        || sol.col_strategy.iter().any(Signed::is_negative)
    {
        return false;
    }
    for j in 0..c {
        let earned: Rational = (0..r).map(|i| &sol.row_strategy[i] * m.at(i, j)).sum();
        if earned < sol.value {
            return false;
        }
    }
    for i in 0..r {
        let conceded: Rational = (0..c).map(|j| &sol.col_strategy[j] * m.at(i, j)).sum();
        if conceded > sol.value {
            return false;
        }
    }
    true
}
