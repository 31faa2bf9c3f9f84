//! Benchmark functions `L(G)` of the final gradient sum, their comparator
//! penalties `Psi`, and the exact game values they induce.
//!
//! Every benchmark here is concave in `G`, so the value of the remaining game
//! after `t` rounds is the expectation of `-L` over the Rademacher sum of the
//! rounds still to play.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::rademacher::{ln_cosh, mean_abs_deviation, RademacherSum};

/// The benchmark family and its shape parameter.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BenchmarkKind {
    /// `L(G) = -G^2 / (2 sigma)`: soft quadratic comparator penalty.
    Quadratic { sigma: f64 },
    /// `L(G) = -|G|`: standard regret against `[-1, 1]`.
    AbsoluteValue,
    /// `L(G) = -exp(G / T^alpha)`: one-sided betting benchmark.
    ExpOneSided { alpha: f64 },
    /// `L(G) = -exp(G / T^alpha) - exp(-G / T^alpha)`.
    ExpSymmetric { alpha: f64 },
}

impl BenchmarkKind {
    /// Short name used by the CLI and in output files.
    pub fn short_name(&self) -> &'static str {
        match self {
            BenchmarkKind::Quadratic { .. } => "quad",
            BenchmarkKind::AbsoluteValue => "abs",
            BenchmarkKind::ExpOneSided { .. } => "exp",
            BenchmarkKind::ExpSymmetric { .. } => "exp-sym",
        }
    }
}

/// A benchmark family fixed to a horizon.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Benchmark {
    kind: BenchmarkKind,
    horizon: u32,
}

/// Exact game value next to its large-`T` reference curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GameValueReport {
    pub horizon: u32,
    pub exact_value: f64,
    pub asymptote: f64,
    pub ratio: f64,
}

/// Uniform grid `lo, lo + step, ..., <= hi` for the penalty duality check.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DualGrid {
    pub lo: f64,
    pub hi: f64,
    pub step: f64,
}

impl Benchmark {
    pub fn new(kind: BenchmarkKind, horizon: u32) -> Result<Self> {
        match kind {
            BenchmarkKind::Quadratic { sigma } => {
                if !(sigma > 0.0 && sigma.is_finite()) {
                    return Err(invalid("sigma", format!("must be positive and finite, got {sigma}")));
                }
            }
            BenchmarkKind::ExpOneSided { alpha } | BenchmarkKind::ExpSymmetric { alpha } => {
                if !(alpha > 0.0 && alpha <= 0.5) {
                    return Err(invalid("alpha", format!("must lie in (0, 0.5], got {alpha}")));
                }
            }
            BenchmarkKind::AbsoluteValue => {}
        }
        Ok(Self { kind, horizon })
    }

    pub fn quadratic(sigma: f64, horizon: u32) -> Result<Self> {
        Self::new(BenchmarkKind::Quadratic { sigma }, horizon)
    }

    pub fn absolute_value(horizon: u32) -> Self {
        Self {
            kind: BenchmarkKind::AbsoluteValue,
            horizon,
        }
    }

    pub fn exp_one_sided(alpha: f64, horizon: u32) -> Result<Self> {
        Self::new(BenchmarkKind::ExpOneSided { alpha }, horizon)
    }

    pub fn exp_symmetric(alpha: f64, horizon: u32) -> Result<Self> {
        Self::new(BenchmarkKind::ExpSymmetric { alpha }, horizon)
    }

    pub fn kind(&self) -> BenchmarkKind {
        self.kind
    }

    pub fn horizon(&self) -> u32 {
        self.horizon
    }

    /// Same family and parameters at another horizon.
    pub fn with_horizon(&self, horizon: u32) -> Self {
        Self {
            kind: self.kind,
            horizon,
        }
    }

    /// `T^alpha` for the exponential families. A zero horizon is treated as
    /// one; the only reachable sum is then `G = 0`.
    pub fn scale(&self) -> f64 {
        match self.kind {
            BenchmarkKind::ExpOneSided { alpha } | BenchmarkKind::ExpSymmetric { alpha } => {
                f64::from(self.horizon.max(1)).powf(alpha)
            }
            _ => 1.0,
        }
    }

    /// `L(G)`.
    pub fn loss(&self, g_sum: f64) -> f64 {
        match self.kind {
            BenchmarkKind::Quadratic { sigma } => -g_sum * g_sum / (2.0 * sigma),
            BenchmarkKind::AbsoluteValue => -g_sum.abs(),
            BenchmarkKind::ExpOneSided { .. } => -(g_sum / self.scale()).exp(),
            BenchmarkKind::ExpSymmetric { .. } => {
                let a = self.scale();
                -(g_sum / a).exp() - (-g_sum / a).exp()
            }
        }
    }

    /// Comparator penalty `Psi(x)` with `L(G) = min_x G x + Psi(x)`.
    ///
    /// Infinite penalties are returned as `+inf`. The symmetric exponential
    /// benchmark has no closed-form penalty and yields `None`.
    pub fn penalty(&self, x: f64) -> Option<f64> {
        match self.kind {
            BenchmarkKind::Quadratic { sigma } => Some(sigma * x * x / 2.0),
            BenchmarkKind::AbsoluteValue => Some(if x.abs() <= 1.0 { 0.0 } else { f64::INFINITY }),
            BenchmarkKind::ExpOneSided { .. } => {
                let a = self.scale();
                Some(if x > 0.0 {
                    f64::INFINITY
                } else if x == 0.0 {
                    // 0 log 0 := 0
                    0.0
                } else {
                    -a * x * (-a * x).ln() + a * x
                })
            }
            BenchmarkKind::ExpSymmetric { .. } => None,
        }
    }

    /// `min` over the grid of `G x + Psi(x)`; approximates [`Self::loss`].
    pub fn penalty_dual_check(&self, g_sum: f64, grid: DualGrid) -> Result<f64> {
        let usable = grid.step > 0.0 && grid.lo <= grid.hi && grid.lo.is_finite() && grid.hi.is_finite();
        if !usable {
            return Err(Error::EmptyGrid);
        }
        if matches!(self.kind, BenchmarkKind::ExpSymmetric { .. }) {
            return Err(invalid(
                "benchmark",
                "symmetric exponential benchmark has no penalty form",
            ));
        }
        let n = ((grid.hi - grid.lo) / grid.step + 1e-9).floor() as u64;
        let mut best = f64::INFINITY;
        for k in 0..=n {
            let x = (grid.lo + k as f64 * grid.step).min(grid.hi);
            if let Some(psi) = self.penalty(x) {
                best = best.min(g_sum * x + psi);
            }
        }
        Ok(best)
    }

    /// Exact minimax value `V^T = E[-L(B_T)]` with its reference curve:
    /// `T/(2 sigma)`, `sqrt(2T/pi)`, `exp(T^(1-2 alpha)/2)` (which is `sqrt(e)` at
    /// `alpha = 1/2`), doubled for the symmetric benchmark.
    pub fn game_value(&self) -> GameValueReport {
        let t = f64::from(self.horizon);
        let (exact_value, asymptote) = match self.kind {
            BenchmarkKind::Quadratic { sigma } => (t / (2.0 * sigma), t / (2.0 * sigma)),
            BenchmarkKind::AbsoluteValue => {
                let exact = match mean_abs_deviation(self.horizon) {
                    Ok(v) => v,
                    Err(_) => abs_expectation(self.horizon, 0.0),
                };
                (exact, (2.0 * t / PI).sqrt())
            }
            BenchmarkKind::ExpOneSided { alpha } => (
                (t * ln_cosh(1.0 / self.scale())).exp(),
                (0.5 * t.powf(1.0 - 2.0 * alpha)).exp(),
            ),
            BenchmarkKind::ExpSymmetric { alpha } => (
                2.0 * (t * ln_cosh(1.0 / self.scale())).exp(),
                2.0 * (0.5 * t.powf(1.0 - 2.0 * alpha)).exp(),
            ),
        };
        GameValueReport {
            horizon: self.horizon,
            exact_value,
            asymptote,
            ratio: exact_value / asymptote,
        }
    }

    /// `V_t(G_t)`: value of the remaining `T - t` rounds given the running
    /// sum, excluding loss already paid.
    pub fn conditional_value(&self, t: u32, g_sum: f64) -> Result<f64> {
        let remaining = self.remaining(t)?;
        Ok(match self.kind {
            BenchmarkKind::Quadratic { sigma } => (g_sum * g_sum + f64::from(remaining)) / (2.0 * sigma),
            BenchmarkKind::AbsoluteValue => abs_expectation(remaining, g_sum),
            BenchmarkKind::ExpOneSided { .. } => self.ln_one_sided_value(remaining, g_sum).exp(),
            BenchmarkKind::ExpSymmetric { .. } => {
                self.ln_one_sided_value(remaining, g_sum).exp() + self.ln_one_sided_value(remaining, -g_sum).exp()
            }
        })
    }

    /// `ln V_t(G_t)` for the one-sided exponential benchmark:
    /// `G/a + tau ln cosh(1/a)`; for other families the log of
    /// [`Self::conditional_value`].
    pub fn ln_conditional_value(&self, t: u32, g_sum: f64) -> Result<f64> {
        match self.kind {
            BenchmarkKind::ExpOneSided { .. } => Ok(self.ln_one_sided_value(self.remaining(t)?, g_sum)),
            _ => self.conditional_value(t, g_sum).map(f64::ln),
        }
    }

    fn remaining(&self, t: u32) -> Result<u32> {
        self.horizon.checked_sub(t).ok_or(Error::RoundPastHorizon {
            t,
            horizon: self.horizon,
        })
    }

    fn ln_one_sided_value(&self, remaining: u32, g_sum: f64) -> f64 {
        let a = self.scale();
        g_sum / a + f64::from(remaining) * ln_cosh(1.0 / a)
    }
}

/// `E|offset + B_m|`.
fn abs_expectation(m: u32, offset: f64) -> f64 {
    let dist = RademacherSum::new(m);
    (0..=m)
        .map(|i| dist.mass_at_index(i) * (offset + f64::from(2 * i) - f64::from(m)).abs())
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn all_kinds(horizon: u32) -> Vec<Benchmark> {
        vec![
            Benchmark::quadratic(1.5, horizon).unwrap(),
            Benchmark::absolute_value(horizon),
            Benchmark::exp_one_sided(0.5, horizon).unwrap(),
            Benchmark::exp_one_sided(0.3, horizon).unwrap(),
            Benchmark::exp_symmetric(0.5, horizon).unwrap(),
        ]
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(Benchmark::quadratic(0.0, 3).is_err());
        assert!(Benchmark::quadratic(-1.0, 3).is_err());
        assert!(Benchmark::exp_one_sided(0.0, 3).is_err());
        assert!(Benchmark::exp_one_sided(0.51, 3).is_err());
        assert!(Benchmark::exp_symmetric(f64::NAN, 3).is_err());
        assert!(Benchmark::exp_one_sided(0.5, 3).is_ok());
    }

    #[test]
    fn loss_examples() {
        assert_eq!(Benchmark::quadratic(1.0, 10).unwrap().loss(4.0), -8.0);
        assert_eq!(Benchmark::absolute_value(10).loss(-3.0), -3.0);
        let e = Benchmark::exp_one_sided(0.5, 4).unwrap();
        assert_relative_eq!(e.loss(2.0), -std::f64::consts::E, max_relative = 1e-15);
        let s = Benchmark::exp_symmetric(0.5, 4).unwrap();
        assert_relative_eq!(s.loss(2.0), -(1f64.exp() + (-1f64).exp()), max_relative = 1e-15);
    }

    #[test]
    fn losses_are_concave_and_nonpositive() {
        for b in all_kinds(9) {
            for k in -90..=90 {
                let g = f64::from(k) / 10.0;
                assert!(b.loss(g) <= 0.0);
                let h = 0.37;
                let mid = b.loss(g);
                let chord = 0.5 * (b.loss(g - h) + b.loss(g + h));
                assert!(mid >= chord - 1e-12, "{:?} not concave at {g}", b.kind());
            }
        }
    }

    #[test]
    fn penalty_examples() {
        let q = Benchmark::quadratic(2.0, 1).unwrap();
        assert_eq!(q.penalty(3.0), Some(9.0));
        let a = Benchmark::absolute_value(1);
        assert_eq!(a.penalty(1.5), Some(f64::INFINITY));
        assert_eq!(a.penalty(-1.0), Some(0.0));
        let e = Benchmark::exp_one_sided(0.5, 1).unwrap();
        assert_relative_eq!(e.penalty(-1.0).unwrap(), -1.0);
        assert_eq!(e.penalty(0.0), Some(0.0));
        assert_eq!(e.penalty(0.1), Some(f64::INFINITY));
        assert_eq!(Benchmark::exp_symmetric(0.5, 1).unwrap().penalty(-1.0), None);
    }

    #[test]
    fn dual_check_examples() {
        let q = Benchmark::quadratic(1.0, 1).unwrap();
        let v = q
            .penalty_dual_check(
                2.0,
                DualGrid {
                    lo: -5.0,
                    hi: 5.0,
                    step: 1e-3,
                },
            )
            .unwrap();
        assert!((v + 2.0).abs() < 1e-5);
        let e = Benchmark::exp_one_sided(0.5, 1).unwrap();
        let v = e
            .penalty_dual_check(
                0.0,
                DualGrid {
                    lo: -5.0,
                    hi: 0.0,
                    step: 1e-4,
                },
            )
            .unwrap();
        assert!((v + 1.0).abs() < 1e-7);
        let a = Benchmark::absolute_value(1);
        let v = a
            .penalty_dual_check(
                3.0,
                DualGrid {
                    lo: -1.0,
                    hi: 1.0,
                    step: 1e-3,
                },
            )
            .unwrap();
        assert!((v + 3.0).abs() < 1e-9);
        assert_eq!(
            a.penalty_dual_check(
                3.0,
                DualGrid {
                    lo: 1.0,
                    hi: -1.0,
                    step: 1e-3
                }
            ),
            Err(Error::EmptyGrid)
        );
        assert_eq!(
            a.penalty_dual_check(
                3.0,
                DualGrid {
                    lo: -1.0,
                    hi: 1.0,
                    step: 0.0
                }
            ),
            Err(Error::EmptyGrid)
        );
    }

    #[test]
    fn game_value_examples() {
        let r = Benchmark::quadratic(2.0, 10).unwrap().game_value();
        assert_eq!(r.exact_value, 2.5);
        let r = Benchmark::absolute_value(2).game_value();
        assert_relative_eq!(r.exact_value, 1.0, max_relative = 1e-13);
        assert_relative_eq!(r.asymptote, std::f64::consts::FRAC_2_SQRT_PI, max_relative = 1e-13);
        let r = Benchmark::exp_one_sided(0.5, 4).unwrap().game_value();
        assert_relative_eq!(r.exact_value, 1.616_814_778_793_075_3, max_relative = 1e-13);
        assert_relative_eq!(r.asymptote, 1.648_721_270_700_128_2, max_relative = 1e-13);
        assert_relative_eq!(r.ratio, r.exact_value / r.asymptote);
        // odd horizon through the lattice sum: E|B_3| = (3 + 3*1 + 3*1 + 3) / 8
        let r = Benchmark::absolute_value(3).game_value();
        assert_relative_eq!(r.exact_value, 1.5, max_relative = 1e-14);
    }

    #[test]
    fn large_horizon_values_stay_finite() {
        let r = Benchmark::exp_one_sided(0.5, 1_000_000).unwrap().game_value();
        assert!(r.exact_value < std::f64::consts::E.sqrt());
        let v = Benchmark::exp_one_sided(0.5, 1_000_000)
            .unwrap()
            .ln_conditional_value(0, 1_000_000.0)
            .unwrap();
        assert!(v.is_finite() && v > 900.0);
    }

    #[test]
    fn conditional_value_examples() {
        let q = Benchmark::quadratic(1.0, 5).unwrap();
        assert_eq!(q.conditional_value(3, 2.0).unwrap(), 3.0);
        let e = Benchmark::exp_one_sided(0.5, 9).unwrap();
        assert_relative_eq!(e.conditional_value(9, 1.7).unwrap(), (1.7f64 / 3.0).exp());
        let a = Benchmark::absolute_value(4);
        assert_relative_eq!(a.conditional_value(2, 0.0).unwrap(), 1.0);
        assert_eq!(
            a.conditional_value(5, 0.0),
            Err(Error::RoundPastHorizon { t: 5, horizon: 4 })
        );
    }

    #[test]
    fn conditional_value_anchors_to_game_value() {
        for horizon in 1..=40 {
            for b in all_kinds(horizon) {
                let v0 = b.conditional_value(0, 0.0).unwrap();
                assert_relative_eq!(v0, b.game_value().exact_value, max_relative = 1e-12);
            }
        }
    }

    #[test]
    fn one_sided_value_matches_lattice_expectation() {
        let b = Benchmark::exp_one_sided(0.4, 13).unwrap();
        for t in 0..=13 {
            let dist = RademacherSum::new(13 - t);
            let direct = dist.expect(|g| -b.loss(g), 0.6).unwrap();
            assert_relative_eq!(b.conditional_value(t, 0.6).unwrap(), direct, max_relative = 1e-12);
        }
    }
}
