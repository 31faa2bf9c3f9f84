//! Minimax plays for the one-dimensional games.
//!
//! With `V_{t+1}` the conditional value after the next round, the minimax play
//! is the point where the two continuations `-x + V_{t+1}(G - 1)` and
//! `x + V_{t+1}(G + 1)` intersect:
//!
//! ```text
//! x_{t+1} = (V_{t+1}(G_t - 1) - V_{t+1}(G_t + 1)) / 2
//! ```
//!
//! The closed forms below are that recipe worked out per benchmark. Play sums
//! of minimax plays are minimax for the summed benchmark, which is how the
//! symmetric bettor is built.

use serde::{Deserialize, Serialize};

use crate::benchmarks::{Benchmark, BenchmarkKind};
use crate::error::{invalid, Error, Result};
use crate::rademacher::{ln_cosh, RademacherSum};

/// Where the player stands before choosing `x_{t+1}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlayerState {
    horizon: u32,
    t: u32,
    g_sum: f64,
}

impl PlayerState {
    /// `t` rounds played out of `horizon`, gradient sum `g_sum`.
    pub fn new(horizon: u32, t: u32, g_sum: f64) -> Result<Self> {
        if t > horizon {
            return Err(Error::RoundPastHorizon { t, horizon });
        }
        if !g_sum.is_finite() || g_sum.abs() > f64::from(t) + 1e-9 {
            return Err(invalid("g_sum", format!("|G_t| must not exceed t = {t}, got {g_sum}")));
        }
        Ok(Self { horizon, t, g_sum })
    }

    pub fn start(horizon: u32) -> Self {
        Self {
            horizon,
            t: 0,
            g_sum: 0.0,
        }
    }

    pub fn horizon(&self) -> u32 {
        self.horizon
    }

    pub fn rounds_played(&self) -> u32 {
        self.t
    }

    pub fn g_sum(&self) -> f64 {
        self.g_sum
    }

    /// Rounds left after the upcoming play.
    pub fn remaining_after_play(&self) -> Result<u32> {
        if self.t >= self.horizon {
            return Err(Error::RoundPastHorizon {
                t: self.t,
                horizon: self.horizon,
            });
        }
        Ok(self.horizon - self.t - 1)
    }

    /// State after the adversary answers with `g`.
    pub fn advance(&self, g: f64) -> Result<Self> {
        if !(-1.0..=1.0).contains(&g) {
            return Err(Error::GradientOutOfRange(g));
        }
        if self.t >= self.horizon {
            return Err(Error::RoundPastHorizon {
                t: self.t + 1,
                horizon: self.horizon,
            });
        }
        Ok(Self {
            horizon: self.horizon,
            t: self.t + 1,
            g_sum: self.g_sum + g,
        })
    }

    /// Same position with the gradient sum negated.
    pub fn mirrored(&self) -> Self {
        Self {
            g_sum: -self.g_sum,
            ..*self
        }
    }
}

/// Anything that proposes a play from a [`PlayerState`].
pub trait Strategy {
    fn play(&self, state: &PlayerState) -> Result<f64>;
}

impl<F> Strategy for F
where
    F: Fn(&PlayerState) -> Result<f64>,
{
    fn play(&self, state: &PlayerState) -> Result<f64> {
        self(state)
    }
}

/// The built-in minimax strategies.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "strategy", rename_all = "snake_case")]
pub enum StrategyKind {
    /// Constant-rate gradient descent, `x = -G / sigma`.
    GradientDescent { sigma: f64 },
    /// Tail-probability play for `L(G) = -|G|`.
    Hypercube,
    /// One-sided exponential bettor.
    Betting { alpha: f64 },
    /// Sum of the one-sided bettor and its mirror image.
    SymmetricBetting { alpha: f64 },
    /// Generic recipe on the benchmark's conditional values.
    Generic(Benchmark),
}

impl StrategyKind {
    /// Closed-form minimax strategy for `benchmark`.
    pub fn minimax_for(benchmark: &Benchmark) -> Self {
        match benchmark.kind() {
            BenchmarkKind::Quadratic { sigma } => StrategyKind::GradientDescent { sigma },
            BenchmarkKind::AbsoluteValue => StrategyKind::Hypercube,
            BenchmarkKind::ExpOneSided { alpha } => StrategyKind::Betting { alpha },
            BenchmarkKind::ExpSymmetric { alpha } => StrategyKind::SymmetricBetting { alpha },
        }
    }

    pub fn short_name(&self) -> &'static str {
        match self {
            StrategyKind::GradientDescent { .. } => "gd",
            StrategyKind::Hypercube => "hypercube",
            StrategyKind::Betting { .. } => "betting",
            StrategyKind::SymmetricBetting { .. } => "symmetric",
            StrategyKind::Generic(_) => "generic",
        }
    }
}

impl Strategy for StrategyKind {
    fn play(&self, state: &PlayerState) -> Result<f64> {
        match *self {
            StrategyKind::GradientDescent { sigma } => {
                state.remaining_after_play()?;
                Ok(next_play_gd(sigma, state))
            }
            StrategyKind::Hypercube => next_play_hypercube(state),
            StrategyKind::Betting { alpha } => next_play_betting(alpha, state),
            StrategyKind::SymmetricBetting { alpha } => next_play_symmetric(alpha, state),
            StrategyKind::Generic(benchmark) => {
                let next = state.rounds_played() + 1;
                next_play_generic(|g| benchmark.conditional_value(next, g), state)
            }
        }
    }
}

/// `(V_next(G_t - 1) - V_next(G_t + 1)) / 2` for any conditional-value
/// evaluator of the round after this one.
pub fn next_play_generic<V>(v_next: V, state: &PlayerState) -> Result<f64>
where
    V: Fn(f64) -> Result<f64>,
{
    state.remaining_after_play()?;
    let down = v_next(state.g_sum - 1.0)?;
    let up = v_next(state.g_sum + 1.0)?;
    if !down.is_finite() {
        return Err(Error::NonFinite {
            point: state.g_sum - 1.0,
        });
    }
    if !up.is_finite() {
        return Err(Error::NonFinite {
            point: state.g_sum + 1.0,
        });
    }
    Ok(0.5 * (down - up))
}

/// Gradient descent with learning rate `1 / sigma`; horizon-free.
pub fn next_play_gd(sigma: f64, state: &PlayerState) -> f64 {
    0.0 - state.g_sum / sigma
}

/// Minimax play for `L(G) = -|G|`. Always lies in `[-1, 1]`.
///
/// With `m = T - t - 1` rounds left after this one, an integral `G_t` gives
/// `Pr(b < -G_t) - Pr(b > -G_t)` over `b ~ B_m`. Interior gradients can leave
/// `G_t` off the integers; then the lattice point `b*` with `|G_t + b*| < 1`
/// contributes `-(G_t + b*)` instead of a full `±1`.
pub fn next_play_hypercube(state: &PlayerState) -> Result<f64> {
    let m = state.remaining_after_play()?;
    let dist = RademacherSum::new(m);
    let g = state.g_sum;
    if g.fract() == 0.0 {
        let tails = dist.tails(-g);
        return Ok(tails.below - tails.above);
    }
    let below = dist.tails(-g - 1.0).below;
    let above = dist.tails(-g + 1.0).above;
    let first = (-g - 1.0).ceil() as i64;
    let inner = if (first + i64::from(m)).rem_euclid(2) == 0 {
        first
    } else {
        first + 1
    };
    let correction = dist.pmf(inner) * (g + inner as f64);
    Ok((below - above - correction).clamp(-1.0, 1.0))
}

/// One-sided exponential bettor:
/// `-exp(G_t / a) sinh(1/a) cosh(1/a)^(T-t-1)` with `a = T^alpha`,
/// evaluated in log space. Never positive.
pub fn next_play_betting(alpha: f64, state: &PlayerState) -> Result<f64> {
    let m = state.remaining_after_play()?;
    if !(alpha > 0.0 && alpha <= 0.5) {
        return Err(invalid("alpha", format!("must lie in (0, 0.5], got {alpha}")));
    }
    let a = f64::from(state.horizon).powf(alpha);
    let ln_mag = state.g_sum / a + (1.0 / a).sinh().ln() + f64::from(m) * ln_cosh(1.0 / a);
    Ok(-ln_mag.exp())
}

/// Symmetric bettor: the one-sided play plus the sign-flipped play of a copy
/// that sees negated gradients.
pub fn next_play_symmetric(alpha: f64, state: &PlayerState) -> Result<f64> {
    let direct = next_play_betting(alpha, state)?;
    let mirrored = next_play_betting(alpha, &state.mirrored())?;
    Ok(direct - mirrored)
}

/// Scale a play so that a worst-case loss of `worst_case_loss` costs at most
/// `budget`.
pub fn scale_for_bankroll(x: f64, budget: f64, worst_case_loss: f64) -> f64 {
    x * budget / worst_case_loss
}
