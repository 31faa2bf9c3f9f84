//! Gradient sources for the one-dimensional game.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::benchmarks::Benchmark;
use crate::error::{invalid, Error, Result};
use crate::strategies::PlayerState;

/// How an adversary picks `g_t` after seeing the play `x_t`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "adversary", rename_all = "snake_case")]
pub enum AdversaryPolicy {
    /// Uniform on `{-1, +1}`.
    RademacherRandom,
    /// `sign(x_t)`, maximizing the instantaneous loss; `+1` at zero.
    Greedy,
    /// `+1` with probability `p`, else `-1`.
    BiasedCoin { p: f64 },
    /// A fixed sequence, possibly with interior values.
    Replay { gradients: Vec<f64> },
    /// Maximizes `g x_t + V_{t+1}(G_t + g)` over `g` in `{-1, +1}`; ties go to `+1`.
    Minimax { benchmark: Benchmark },
}

impl AdversaryPolicy {
    pub fn short_name(&self) -> &'static str {
        match self {
            AdversaryPolicy::RademacherRandom => "random",
            AdversaryPolicy::Greedy => "greedy",
            AdversaryPolicy::BiasedCoin { .. } => "biased",
            AdversaryPolicy::Replay { .. } => "replay",
            AdversaryPolicy::Minimax { .. } => "minimax",
        }
    }
}

/// A policy instance with its own RNG stream and replay cursor.
#[derive(Debug, Clone)]
pub struct Adversary {
    policy: AdversaryPolicy,
    rng: ChaCha8Rng,
    cursor: usize,
}

impl Adversary {
    pub fn new(policy: AdversaryPolicy, seed: u64) -> Result<Self> {
        match &policy {
            AdversaryPolicy::BiasedCoin { p } if !(0.0..=1.0).contains(p) => {
                return Err(invalid("p", format!("must lie in [0, 1], got {p}")));
            }
            AdversaryPolicy::Replay { gradients } => {
                if let Some(&g) = gradients.iter().find(|g| !(-1.0..=1.0).contains(*g)) {
                    return Err(Error::GradientOutOfRange(g));
                }
            }
            _ => {}
        }
        Ok(Self {
            policy,
            rng: ChaCha8Rng::seed_from_u64(seed),
            cursor: 0,
        })
    }

    pub fn policy(&self) -> &AdversaryPolicy {
        &self.policy
    }

    pub fn next_gradient(&mut self, state: &PlayerState, x: f64) -> Result<f64> {
        let g = match &self.policy {
            AdversaryPolicy::RademacherRandom => {
                if self.rng.random_bool(0.5) {
                    1.0
                } else {
                    -1.0
                }
            }
            AdversaryPolicy::Greedy => {
                if x < 0.0 {
                    -1.0
                } else {
                    1.0
                }
            }
            AdversaryPolicy::BiasedCoin { p } => {
                if self.rng.random_bool(*p) {
                    1.0
                } else {
                    -1.0
                }
            }
            AdversaryPolicy::Replay { gradients } => {
                let g = *gradients
                    .get(self.cursor)
                    .ok_or(Error::ReplayExhausted(gradients.len()))?;
                self.cursor += 1;
                g
            }
            AdversaryPolicy::Minimax { benchmark } => {
                let (down, up) = minimax_branch_values(benchmark, state, x)?;
                if up >= down - tie_tolerance(up, down) {
                    1.0
                } else {
                    -1.0
                }
            }
        };
        if !(-1.0..=1.0).contains(&g) {
            return Err(Error::GradientOutOfRange(g));
        }
        Ok(g)
    }
}

fn tie_tolerance(a: f64, b: f64) -> f64 {
    1e-12 * a.abs().max(b.abs()).max(1.0)
}

/// Adversary payoffs `(-x + V_{t+1}(G - 1), x + V_{t+1}(G + 1))` of the two
/// extreme gradients against play `x`.
pub fn minimax_branch_values(benchmark: &Benchmark, state: &PlayerState, x: f64) -> Result<(f64, f64)> {
    let next = state.rounds_played() + 1;
    let down = -x + benchmark.conditional_value(next, state.g_sum() - 1.0)?;
    let up = x + benchmark.conditional_value(next, state.g_sum() + 1.0)?;
    Ok((down, up))
}

/// Parse a replay file: one decimal gradient in `[-1, 1]` per line. Blank
/// lines are skipped.
pub fn parse_replay(text: &str) -> Result<Vec<f64>> {
    let mut out = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        let g: f64 = line.parse().map_err(|_| Error::Parse {
            line: idx + 1,
            message: format!("not a number: {line:?}"),
        })?;
        if !(-1.0..=1.0).contains(&g) {
            return Err(Error::Parse {
                line: idx + 1,
                message: format!("gradient {g} outside [-1, 1]"),
            });
        }
        out.push(g);
    }
    Ok(out)
}
