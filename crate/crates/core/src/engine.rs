//! Full games, regret accounting, bankroll betting sessions and value sweeps.
//!
//! An `n`-dimensional game against an `L_inf`-bounded adversary decomposes
//! per coordinate: each coordinate runs the one-dimensional strategy on its
//! own gradient sum, and the payoff is `sum_t g_t . x_t - sum_i L(G_i)`.

use serde::{Deserialize, Serialize};

use crate::adversaries::{Adversary, AdversaryPolicy};
use crate::benchmarks::{Benchmark, BenchmarkKind, GameValueReport};
use crate::error::{invalid, Error, Result};
use crate::strategies::{next_play_symmetric, scale_for_bankroll, PlayerState, Strategy, StrategyKind};

/// Root seed used when none is given.
pub const DEFAULT_SEED: u64 = 20_130_101;

/// Seed for coordinate `i` derived from the root seed; coordinate 0 keeps the
/// root seed itself.
pub fn coordinate_seed(root: u64, i: usize) -> u64 {
    root.wrapping_add((i as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

/// Everything needed to run one game.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GameSpec {
    pub benchmark: Benchmark,
    pub dimension: usize,
    pub strategy: StrategyKind,
    /// One policy per coordinate, or a single policy used for all of them.
    pub adversaries: Vec<AdversaryPolicy>,
    pub seed: u64,
}

impl GameSpec {
    pub fn one_dimensional(
        benchmark: Benchmark,
        strategy: StrategyKind,
        adversary: AdversaryPolicy,
        seed: u64,
    ) -> Self {
        Self {
            benchmark,
            dimension: 1,
            strategy,
            adversaries: vec![adversary],
            seed,
        }
    }

    fn instantiate_adversaries(&self) -> Result<Vec<Adversary>> {
        if self.dimension == 0 {
            return Err(invalid("dimension", "must be at least 1"));
        }
        let policies: Vec<&AdversaryPolicy> = match self.adversaries.len() {
            1 => std::iter::repeat_n(&self.adversaries[0], self.dimension).collect(),
            n if n == self.dimension => self.adversaries.iter().collect(),
            n => {
                return Err(invalid(
                    "adversaries",
                    format!("expected 1 or {} policies, got {n}", self.dimension),
                ))
            }
        };
        let horizon = self.benchmark.horizon() as usize;
        policies
            .into_iter()
            .enumerate()
            .map(|(i, policy)| {
                if let AdversaryPolicy::Replay { gradients } = policy {
                    if gradients.len() < horizon {
                        return Err(invalid(
                            "replay",
                            format!("sequence has {} gradients, horizon is {horizon}", gradients.len()),
                        ));
                    }
                }
                Adversary::new(policy.clone(), coordinate_seed(self.seed, i))
            })
            .collect()
    }
}

/// One round of play across all coordinates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Round {
    pub round: u32,
    pub x: Vec<f64>,
    pub g: Vec<f64>,
    /// `g_t . x_t`
    pub inst_loss: f64,
}

/// Complete record of a game.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Transcript {
    pub horizon: u32,
    pub dimension: usize,
    pub rounds: Vec<Round>,
    /// `G_i = g_{1:T,i}` per coordinate.
    pub final_sums: Vec<f64>,
    /// `sum_i L(G_i)`
    pub benchmark_value: f64,
    pub loss: f64,
    pub reward: f64,
    pub regret: f64,
}

impl Transcript {
    /// Running totals of the per-round losses.
    pub fn cumulative_losses(&self) -> Vec<f64> {
        self.rounds
            .iter()
            .scan(0.0, |acc, r| {
                *acc += r.inst_loss;
                Some(*acc)
            })
            .collect()
    }
}

/// Run the game described by `spec`.
pub fn play_game(spec: &GameSpec) -> Result<Transcript> {
    let mut adversaries = spec.instantiate_adversaries()?;
    play_with(&spec.strategy, &spec.benchmark, &mut adversaries)
}

/// Run a game with an arbitrary strategy, one adversary per coordinate.
pub fn play_with<S: Strategy + ?Sized>(
    strategy: &S,
    benchmark: &Benchmark,
    adversaries: &mut [Adversary],
) -> Result<Transcript> {
    let horizon = benchmark.horizon();
    let n = adversaries.len();
    if n == 0 {
        return Err(invalid("dimension", "must be at least 1"));
    }
    let mut states = vec![PlayerState::start(horizon); n];
    let mut rounds = Vec::with_capacity(horizon as usize);
    for round in 1..=horizon {
        let mut x = Vec::with_capacity(n);
        let mut g = Vec::with_capacity(n);
        for (state, adversary) in states.iter_mut().zip(adversaries.iter_mut()) {
            let play = strategy.play(state)?;
            let grad = adversary.next_gradient(state, play)?;
            *state = state.advance(grad)?;
            x.push(play);
            g.push(grad);
        }
        let inst_loss = dot(&g, &x);
        rounds.push(Round { round, x, g, inst_loss });
    }
    let mut transcript = Transcript {
        horizon,
        dimension: n,
        rounds,
        final_sums: Vec::new(),
        benchmark_value: 0.0,
        loss: 0.0,
        reward: 0.0,
        regret: 0.0,
    };
    fill_totals(&mut transcript, benchmark)?;
    Ok(transcript)
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(p, q)| p * q).sum()
}

fn fill_totals(transcript: &mut Transcript, benchmark: &Benchmark) -> Result<()> {
    let n = transcript.dimension;
    let mut sums = vec![0.0; n];
    for r in &transcript.rounds {
        for (s, g) in sums.iter_mut().zip(&r.g) {
            *s += g;
        }
    }
    transcript.benchmark_value = sums.iter().map(|&s| benchmark.loss(s)).sum();
    transcript.final_sums = sums;
    transcript.loss = transcript.rounds.iter().map(|r| dot(&r.g, &r.x)).sum();
    transcript.reward = -transcript.loss;
    transcript.regret = regret_of(transcript, benchmark)?;
    Ok(())
}

/// `sum_t g_t . x_t - sum_i L(G_i)`, recomputed from the stored plays and
/// gradients.
pub fn regret_of(transcript: &Transcript, benchmark: &Benchmark) -> Result<f64> {
    if transcript.rounds.len() != benchmark.horizon() as usize {
        return Err(Error::IncompleteTranscript {
            rounds: transcript.rounds.len(),
            horizon: benchmark.horizon(),
        });
    }
    let n = transcript.dimension;
    let mut sums = vec![0.0; n];
    let mut loss = 0.0;
    for r in &transcript.rounds {
        if r.x.len() != n || r.g.len() != n {
            return Err(invalid(
                "transcript",
                format!("round {} has the wrong dimension", r.round),
            ));
        }
        loss += dot(&r.g, &r.x);
        for (s, g) in sums.iter_mut().zip(&r.g) {
            *s += g;
        }
    }
    let bench: f64 = sums.iter().map(|&s| benchmark.loss(s)).sum();
    Ok(loss - bench)
}

/// One wager of a betting session.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BetRound {
    pub round: u32,
    /// Scaled wager `x_t` (signed).
    pub bet: f64,
    /// Outcome `g_t`; the bettor wins `|bet|` when `sign(bet) != g_t`.
    pub outcome: f64,
    /// Wealth after settling this round.
    pub wealth: f64,
}

/// Wealth trajectory of the scaled symmetric bettor.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BettingSession {
    pub horizon: u32,
    pub alpha: f64,
    pub budget: f64,
    /// Loss bound the bets are scaled against.
    pub worst_case_loss: f64,
    pub rounds: Vec<BetRound>,
    pub final_wealth: f64,
    /// Lowest wealth seen after any round (the budget if never lower).
    pub min_wealth: f64,
    /// Rounds whose wager exceeded the wealth held before it.
    pub over_wager_rounds: usize,
    pub g_sum: f64,
    /// `budget * exp(|G| / T^alpha) / worst_case_loss`, the guaranteed final wealth.
    pub guarantee_floor: f64,
}

/// Worst-case loss of the unscaled symmetric bettor: `2 sqrt(e)`, or the
/// exact symmetric game value when that is larger (only for `alpha < 1/2`).
pub fn symmetric_worst_case_loss(horizon: u32, alpha: f64) -> Result<f64> {
    let value = Benchmark::exp_symmetric(alpha, horizon)?.game_value().exact_value;
    Ok(value.max(2.0 * std::f64::consts::E.sqrt()))
}

/// Run the symmetric bettor for `horizon` rounds with bets scaled so that the
/// loss at the horizon never exceeds `budget`.
pub fn betting_session(
    horizon: u32,
    alpha: f64,
    budget: f64,
    adversary: AdversaryPolicy,
    seed: u64,
) -> Result<BettingSession> {
    if !(budget > 0.0 && budget.is_finite()) {
        return Err(invalid("budget", format!("must be positive, got {budget}")));
    }
    if let AdversaryPolicy::Replay { gradients } = &adversary {
        if gradients.len() < horizon as usize {
            return Err(invalid(
                "replay",
                format!("sequence has {} gradients, horizon is {horizon}", gradients.len()),
            ));
        }
    }
    let worst = symmetric_worst_case_loss(horizon, alpha)?;
    let mut adv = Adversary::new(adversary, seed)?;
    let mut state = PlayerState::start(horizon);
    let mut wealth = budget;
    let mut min_wealth = budget;
    let mut over = 0;
    let mut rounds = Vec::with_capacity(horizon as usize);
    for round in 1..=horizon {
        let raw = next_play_symmetric(alpha, &state)?;
        let bet = scale_for_bankroll(raw, budget, worst);
        if bet.abs() > wealth {
            over += 1;
        }
        let outcome = adv.next_gradient(&state, bet)?;
        state = state.advance(outcome)?;
        wealth -= outcome * bet;
        min_wealth = min_wealth.min(wealth);
        rounds.push(BetRound {
            round,
            bet,
            outcome,
            wealth,
        });
    }
    let g_sum = state.g_sum();
    let a = f64::from(horizon.max(1)).powf(alpha);
    Ok(BettingSession {
        horizon,
        alpha,
        budget,
        worst_case_loss: worst,
        rounds,
        final_wealth: wealth,
        min_wealth,
        over_wager_rounds: over,
        g_sum,
        guarantee_floor: budget * (g_sum.abs() / a).exp() / worst,
    })
}

/// Game values for one benchmark family over several horizons.
pub fn value_sweep(kind: BenchmarkKind, horizons: &[u32]) -> Result<Vec<GameValueReport>> {
    if horizons.is_empty() {
        return Err(invalid("horizons", "range is empty"));
    }
    horizons
        .iter()
        .map(|&t| Benchmark::new(kind, t).map(|b| b.game_value()))
        .collect()
}
