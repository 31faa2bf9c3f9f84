//! Minimax-optimal play for unconstrained online linear optimization.
//!
//! Each round the player picks `x_t` in R, the adversary answers with
//! `g_t` in `[-1, 1]`, and the player pays `g_t x_t`. Regret is measured
//! against a concave benchmark `L` of the gradient sum `G = g_1 + ... + g_T`:
//!
//! ```text
//! Regret = sum_t g_t x_t - L(G)
//! ```
//!
//! For such benchmarks the game value is `E[-L(B_T)]` with `B_T` a sum of `T`
//! Rademacher variables, and the minimax play is read off the conditional
//! values. The crate provides:
//!
//! - [`rademacher`]: exact and log-space numerics for `B_m`.
//! - [`benchmarks`]: the quadratic, absolute-value and exponential benchmark
//!   families with their game values and conditional values.
//! - [`strategies`]: closed-form minimax plays and the generic recipe.
//! - [`adversaries`]: random, greedy, replayed and minimax gradient sources.
//! - [`engine`]: full games in `n` dimensions, regret accounting, bankroll
//!   betting sessions and value sweeps.
//! - [`oracle`]: sequence enumeration and grid backward induction used to
//!   check all of the above.
//! - [`io`]: CSV / JSON-lines writers.
//!
//! ```
//! use olo_core::{Benchmark, StrategyKind, Strategy, PlayerState};
//!
//! let game = Benchmark::absolute_value(10);
//! let strategy = StrategyKind::minimax_for(&game);
//! let x = strategy.play(&PlayerState::new(10, 3, 1.0).unwrap()).unwrap();
//! assert!((-1.0..=1.0).contains(&x));
//! ```

pub mod adversaries;
pub mod benchmarks;
pub mod engine;
pub mod error;
pub mod io;
pub mod oracle;
pub mod rademacher;
pub mod strategies;

pub use adversaries::{Adversary, AdversaryPolicy};
pub use benchmarks::{Benchmark, BenchmarkKind, DualGrid, GameValueReport};
pub use engine::{
    betting_session, play_game, regret_of, value_sweep, BetRound, BettingSession, GameSpec, Round, Transcript,
};
pub use error::{Error, Result};
pub use oracle::{GridInduction, OracleConfig, WorstCase};
pub use rademacher::{RademacherSum, TailMethod, Tails};
pub use strategies::{PlayerState, Strategy, StrategyKind};
