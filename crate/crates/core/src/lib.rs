//! Exact-arithmetic solvers for two-player zero-sum concurrent stochastic
//! games.
//!
//! The crate computes epsilon-approximations of three values on the same
//! game model: the stateful-discounted value (each state carries its own
//! discount factor), the limit value (iterated limit of the discounted value
//! as the factors vanish in order), and the parity value. All model
//! arithmetic is exact rational; approximation enters only through explicit,
//! certified brackets.
//!
//! Module map:
//! - [`game`]: the game/strategy data model and induced MDPs and chains.
//! - [`linalg`]: fraction-free determinants, minor sums, exact solves.
//! - [`matgame`]: exact LP value and optimal strategies of matrix games.
//! - [`kernel`]: determinant kernel, auxiliary game, value-iteration oracle.
//! - [`discounted`]: bisection solver for the discounted value.
//! - [`limit`]: pinned double-exponential discounts and the parity front end.
//! - [`fpmc`]: truncating floating-point calculus and the MC value pipeline.
//! - [`certify`]: best responses, epsilon-optimality, value certificates.
//! - [`poly`]: multivariate polynomials and the root-free-region bound.

pub mod certify;
pub mod discounted;
pub mod error;
pub mod fpmc;
pub mod game;
pub mod kernel;
pub mod limit;
pub mod linalg;
pub mod matgame;
pub mod poly;
pub mod rational;

#[cfg(any(test, feature = "testkit"))]
pub mod testkit;

pub use error::{Error, Result};
pub use rational::Rational;
