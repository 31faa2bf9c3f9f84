//! Independent checks of the closed forms.
//!
//! Two routes that do not go through the closed-form values:
//! exhaustive enumeration of every `{-1, +1}^T` gradient sequence, and a
//! grid backward induction that evaluates `inf_x sup_g` directly with
//! interior gradients on the adversary's grid.

use serde::{Deserialize, Serialize};

use crate::benchmarks::{Benchmark, BenchmarkKind};
use crate::error::{invalid, Error, Result};
use crate::rademacher::{ln_cosh, RademacherSum};
use crate::strategies::{PlayerState, Strategy};

/// Largest horizon for sequence enumeration.
pub const EXHAUSTIVE_MAX_T: u32 = 16;
/// Largest horizon for grid induction.
pub const GRID_MAX_T: u32 = 8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OracleConfig {
    pub x_range: (f64, f64),
    pub x_step: f64,
    /// Spacing of the adversary's gradient grid on `[-1, 1]`; `1 / g_step`
    /// must be an integer.
    pub g_step: f64,
    pub horizon: u32,
}

impl OracleConfig {
    /// x-grid wide enough for the benchmark's plays, step `1e-3`, gradients
    /// on `{-1, -1/2, 0, 1/2, 1}`.
    pub fn for_benchmark(benchmark: &Benchmark) -> Self {
        let half = default_half_width(benchmark);
        Self {
            x_range: (-half, half),
            x_step: 1e-3,
            g_step: 0.5,
            horizon: benchmark.horizon(),
        }
    }

    fn validate(&self) -> Result<u32> {
        let (lo, hi) = self.x_range;
        let ordered = lo < hi && lo.is_finite() && hi.is_finite();
        if !ordered {
            return Err(invalid("x_range", format!("need lo < hi, got ({lo}, {hi})")));
        }
        let positive = self.x_step > 0.0;
        if !positive {
            return Err(invalid("x_step", "must be positive"));
        }
        if !(self.g_step > 0.0 && self.g_step <= 1.0) {
            return Err(invalid("g_step", "must lie in (0, 1]"));
        }
        let per_unit = (1.0 / self.g_step).round();
        if (per_unit * self.g_step - 1.0).abs() > 1e-12 {
            return Err(invalid("g_step", "1 / g_step must be an integer"));
        }
        if self.horizon > GRID_MAX_T {
            return Err(Error::HorizonTooLarge {
                horizon: self.horizon,
                cap: GRID_MAX_T,
            });
        }
        Ok(per_unit as u32)
    }
}

/// Largest closed-form play magnitude plus a margin of two.
fn default_half_width(benchmark: &Benchmark) -> f64 {
    let t = f64::from(benchmark.horizon());
    let one_sided = |alpha: f64| {
        let a = t.max(1.0).powf(alpha);
        (t / a + (1.0 / a).sinh().ln() + t * ln_cosh(1.0 / a)).exp()
    };
    2.0 + match benchmark.kind() {
        BenchmarkKind::Quadratic { sigma } => t / sigma,
        BenchmarkKind::AbsoluteValue => t,
        BenchmarkKind::ExpOneSided { alpha } => one_sided(alpha),
        BenchmarkKind::ExpSymmetric { alpha } => 2.0 * one_sided(alpha),
    }
}

fn check_exhaustive_cap(horizon: u32) -> Result<()> {
    if horizon > EXHAUSTIVE_MAX_T {
        return Err(Error::HorizonTooLarge {
            horizon,
            cap: EXHAUSTIVE_MAX_T,
        });
    }
    Ok(())
}

/// `2^-T * sum over all sign sequences of -L(g_1 + ... + g_T)`.
pub fn exhaustive_value(benchmark: &Benchmark) -> Result<f64> {
    let horizon = benchmark.horizon();
    check_exhaustive_cap(horizon)?;
    fn walk(benchmark: &Benchmark, depth: u32, sum: f64) -> f64 {
        if depth == 0 {
            return -benchmark.loss(sum);
        }
        walk(benchmark, depth - 1, sum - 1.0) + walk(benchmark, depth - 1, sum + 1.0)
    }
    let total = walk(benchmark, horizon, 0.0);
    Ok(total / 2f64.powi(horizon as i32))
}

/// `2^-T * sum_i C(T, i) * -L(2i - T)`: the collapsed lattice form.
pub fn lattice_value(benchmark: &Benchmark) -> Result<f64> {
    let dist = RademacherSum::new(benchmark.horizon());
    dist.expect(|g| -benchmark.loss(g), 0.0)
}

/// Result of a grid backward induction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridInduction {
    /// `V_0` on the grid.
    pub value: f64,
    /// Largest amount, over all states, by which an interior gradient beat
    /// both `-1` and `+1` at the minimizing play. Non-positive means the
    /// adversary's best response was always an extreme point.
    pub interior_excess: f64,
    pub states: usize,
}

/// Backward induction of `inf_x sup_g (g x + V_{t+1}(G + g))` over an x-grid
/// and a gradient grid that includes interior points.
pub fn grid_minimax_value(benchmark: &Benchmark, cfg: &OracleConfig) -> Result<GridInduction> {
    let per_unit = cfg.validate()?;
    let benchmark = benchmark.with_horizon(cfg.horizon);
    let horizon = cfg.horizon;
    let k = i64::from(per_unit);
    let kf = f64::from(per_unit);
    let (lo, hi) = cfg.x_range;
    let nx = ((hi - lo) / cfg.x_step + 1e-9).floor() as usize;
    let xs: Vec<f64> = (0..=nx).map(|i| lo + i as f64 * cfg.x_step).collect();

    // values[j + offset] holds V_t at sum j / per_unit
    let span = |t: u32| i64::from(t) * k;
    let mut values: Vec<f64> = (-span(horizon)..=span(horizon))
        .map(|j| -benchmark.loss(j as f64 / kf))
        .collect();
    let mut interior_excess = f64::NEG_INFINITY;
    let mut states = values.len();

    for t in (0..horizon).rev() {
        let next_span = span(t + 1);
        let cur_span = span(t);
        let mut current = Vec::with_capacity((2 * cur_span + 1) as usize);
        for j in -cur_span..=cur_span {
            let branch: Vec<(f64, f64)> = (-k..=k)
                .map(|step| {
                    let idx = (j + step + next_span) as usize;
                    (step as f64 / kf, values[idx])
                })
                .collect();
            let payoff = |x: f64| branch.iter().map(|&(g, v)| g * x + v).fold(f64::NEG_INFINITY, f64::max);
            let mut best = f64::INFINITY;
            let mut best_i = 0;
            for (i, &x) in xs.iter().enumerate() {
                let p = payoff(x);
                if p < best {
                    best = p;
                    best_i = i;
                }
            }
            if best_i == 0 || best_i == nx {
                return Err(Error::GridNotBracketing {
                    endpoint: xs[best_i],
                    round: t,
                    sum: j as f64 / kf,
                });
            }
            let x = xs[best_i];
            let (g_lo, v_lo) = branch[0];
            let (g_hi, v_hi) = branch[branch.len() - 1];
            let extreme = (g_lo * x + v_lo).max(g_hi * x + v_hi);
            let interior = branch[1..branch.len() - 1]
                .iter()
                .map(|&(g, v)| g * x + v)
                .fold(f64::NEG_INFINITY, f64::max);
            interior_excess = interior_excess.max(interior - extreme);
            current.push(best);
        }
        states += current.len();
        values = current;
    }
    Ok(GridInduction {
        value: values[0],
        interior_excess,
        states,
    })
}

/// Realized regret of `strategy` for every sequence in `{-1, +1}^T`.
/// The visitor receives the gradient sequence and its regret.
pub fn for_each_sequence_regret<S, F>(strategy: &S, benchmark: &Benchmark, mut visit: F) -> Result<()>
where
    S: Strategy + ?Sized,
    F: FnMut(&[f64], f64),
{
    let horizon = benchmark.horizon();
    check_exhaustive_cap(horizon)?;
    let mut path = Vec::with_capacity(horizon as usize);
    walk_sequences(
        strategy,
        benchmark,
        PlayerState::start(horizon),
        0.0,
        &mut path,
        &mut visit,
    )
}

fn walk_sequences<S, F>(
    strategy: &S,
    benchmark: &Benchmark,
    state: PlayerState,
    loss: f64,
    path: &mut Vec<f64>,
    visit: &mut F,
) -> Result<()>
where
    S: Strategy + ?Sized,
    F: FnMut(&[f64], f64),
{
    if state.rounds_played() == state.horizon() {
        visit(path, loss - benchmark.loss(state.g_sum()));
        return Ok(());
    }
    let x = strategy.play(&state)?;
    for g in [-1.0, 1.0] {
        path.push(g);
        walk_sequences(strategy, benchmark, state.advance(g)?, loss + g * x, path, visit)?;
        path.pop();
    }
    Ok(())
}

/// Largest realized regret over `{-1, +1}^T` and a sequence attaining it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WorstCase {
    pub regret: f64,
    pub witness: Vec<f64>,
}

pub fn worst_case_regret<S: Strategy + ?Sized>(strategy: &S, benchmark: &Benchmark) -> Result<WorstCase> {
    let mut worst = WorstCase {
        regret: f64::NEG_INFINITY,
        witness: Vec::new(),
    };
    for_each_sequence_regret(strategy, benchmark, |seq, regret| {
        if regret > worst.regret {
            worst.regret = regret;
            worst.witness = seq.to_vec();
        }
    })?;
    Ok(worst)
}

/// Visit the player state after every prefix in `{-1, +1}^t`, `t < T`
/// (the states at which a play is due).
pub fn for_each_prefix_state<F>(horizon: u32, mut visit: F) -> Result<()>
where
    F: FnMut(&PlayerState) -> Result<()>,
{
    check_exhaustive_cap(horizon)?;
    fn walk<F: FnMut(&PlayerState) -> Result<()>>(state: PlayerState, visit: &mut F) -> Result<()> {
        if state.rounds_played() == state.horizon() {
            return Ok(());
        }
        visit(&state)?;
        walk(state.advance(-1.0)?, visit)?;
        walk(state.advance(1.0)?, visit)
    }
    walk(PlayerState::start(horizon), &mut visit)
}
