//! Numerics for the distribution of a sum of `m` independent uniform ±1
//! variables.
//!
//! The support is the lattice `{-m, -m+2, ..., m}`. Index `i` (the number of
//! `+1` summands) maps to the lattice point `b = 2i - m` and carries mass
//! `2^-m * C(m, i)`. Everything here is a pure function of its inputs.

use serde::{Deserialize, Serialize};
use statrs::function::erf::erfc;
use statrs::function::gamma::ln_gamma;

use crate::error::{invalid, Error, Result};

/// Largest `m` for which tails are summed exactly over the lattice.
pub const EXACT_TAIL_MAX_M: u32 = 10_000;

/// Largest `m` for which binomial coefficients may be formed directly
/// from integer arithmetic instead of through log-gamma.
pub const DIRECT_PMF_MAX_M: u32 = 20;

/// Distribution of `B_m`, the sum of `m` Rademacher variables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RademacherSum {
    m: u32,
    direct_max: u32,
}

/// How a tail probability was computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TailMethod {
    /// Lattice summation in log space.
    Exact,
    /// Binomial CDF through the regularized incomplete beta function.
    IncompleteBeta,
    /// Continuity-corrected normal approximation.
    Normal,
}

/// Strict tail masses around a threshold.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tails {
    /// `Pr(b < threshold)`
    pub below: f64,
    /// `Pr(b > threshold)`
    pub above: f64,
    pub method: TailMethod,
}

impl RademacherSum {
    pub fn new(m: u32) -> Self {
        Self {
            m,
            direct_max: DIRECT_PMF_MAX_M,
        }
    }

    /// Use log-gamma for every `m` above `threshold`. Values above
    /// [`DIRECT_PMF_MAX_M`] are clamped to it.
    pub fn with_log_space_above(mut self, threshold: u32) -> Self {
        self.direct_max = threshold.min(DIRECT_PMF_MAX_M);
        self
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    /// Lattice points from `-m` to `m` in steps of two.
    pub fn support(&self) -> impl Iterator<Item = i64> + '_ {
        let m = i64::from(self.m);
        (0..=m).map(move |i| 2 * i - m)
    }

    /// Lattice index `(b + m) / 2` when `b` is a support point.
    pub fn index_of(&self, b: i64) -> Option<u32> {
        let m = i64::from(self.m);
        if b < -m || b > m || (b + m) % 2 != 0 {
            return None;
        }
        u32::try_from((b + m) / 2).ok()
    }

    /// Natural log of the mass at lattice index `i` (number of `+1`s).
    pub fn ln_mass_at_index(&self, i: u32) -> f64 {
        if i > self.m {
            return f64::NEG_INFINITY;
        }
        ln_choose(self.m, i) - f64::from(self.m) * std::f64::consts::LN_2
    }

    pub fn mass_at_index(&self, i: u32) -> f64 {
        if i > self.m {
            return 0.0;
        }
        if self.m <= self.direct_max {
            // 2^20 and C(20, 10) are exact in f64
            direct_choose(self.m, i) as f64 / (1u64 << self.m) as f64
        } else {
            self.ln_mass_at_index(i).exp()
        }
    }

    /// `Pr(B_m = b)`; zero off the lattice.
    pub fn pmf(&self, b: i64) -> f64 {
        self.index_of(b).map_or(0.0, |i| self.mass_at_index(i))
    }

    /// Strict tails with the method picked by size: exact summation up to
    /// [`EXACT_TAIL_MAX_M`], incomplete beta above.
    pub fn tails(&self, threshold: f64) -> Tails {
        let method = if self.m <= EXACT_TAIL_MAX_M {
            TailMethod::Exact
        } else {
            TailMethod::IncompleteBeta
        };
        self.tails_with(threshold, method)
    }

    pub fn tails_with(&self, threshold: f64, method: TailMethod) -> Tails {
        let m = f64::from(self.m);
        // b = 2i - m < threshold  <=>  i < u
        let u = (threshold + m) / 2.0;
        // largest index strictly below u, smallest strictly above
        let last_below = if u.is_nan() { -1.0 } else { u.ceil() - 1.0 };
        let first_above = if u.is_nan() { m + 1.0 } else { u.floor() + 1.0 };

        let (below, above) = match method {
            TailMethod::Exact => (
                self.exact_range_mass(0.0, last_below),
                self.exact_range_mass(first_above, m),
            ),
            TailMethod::IncompleteBeta => (self.beta_cdf(last_below), self.beta_upper(first_above)),
            TailMethod::Normal => (self.normal_cdf(last_below), self.normal_upper(first_above)),
        };
        Tails { below, above, method }
    }

    /// Sum of masses over indices `lo..=hi`, clamped to `0..=m`, accumulated
    /// with a log-sum-exp over the recurrence `ln p(i+1) = ln p(i) + ln((m-i)/(i+1))`.
    fn exact_range_mass(&self, lo: f64, hi: f64) -> f64 {
        let m = f64::from(self.m);
        let lo = lo.max(0.0);
        let hi = hi.min(m);
        if lo > hi {
            return 0.0;
        }
        let (lo, hi) = (lo as u32, hi as u32);
        if lo == 0 && hi == self.m {
            return 1.0;
        }
        let mut ln_p = self.ln_mass_at_index(lo);
        let mut terms = Vec::with_capacity((hi - lo + 1) as usize);
        for i in lo..=hi {
            terms.push(ln_p);
            if i < hi {
                ln_p += (f64::from(self.m - i) / f64::from(i + 1)).ln();
            }
        }
        log_sum_exp(&terms).exp().min(1.0)
    }

    /// `Pr(index <= k)` via `I_{1/2}(m - k, k + 1)`.
    fn beta_cdf(&self, k: f64) -> f64 {
        let m = f64::from(self.m);
        if k < 0.0 {
            0.0
        } else if k >= m {
            1.0
        } else {
            regularized_incomplete_beta(m - k, k + 1.0, 0.5)
        }
    }

    /// `Pr(index >= j)` via `I_{1/2}(j, m - j + 1)`.
    fn beta_upper(&self, j: f64) -> f64 {
        let m = f64::from(self.m);
        if j > m {
            0.0
        } else if j <= 0.0 {
            1.0
        } else {
            regularized_incomplete_beta(j, m - j + 1.0, 0.5)
        }
    }

    fn normal_cdf(&self, k: f64) -> f64 {
        let m = f64::from(self.m);
        if k < 0.0 {
            return 0.0;
        }
        if k >= m {
            return 1.0;
        }
        let z = (k + 0.5 - m / 2.0) / (m.sqrt() / 2.0);
        0.5 * erfc(-z / std::f64::consts::SQRT_2)
    }

    fn normal_upper(&self, j: f64) -> f64 {
        let m = f64::from(self.m);
        if j > m {
            return 0.0;
        }
        if j <= 0.0 {
            return 1.0;
        }
        let z = (j - 0.5 - m / 2.0) / (m.sqrt() / 2.0);
        0.5 * erfc(z / std::f64::consts::SQRT_2)
    }

    /// `E[f(offset + B_m)]` as an exact weighted lattice sum.
    pub fn expect<F>(&self, f: F, offset: f64) -> Result<f64>
    where
        F: Fn(f64) -> f64,
    {
        let m = self.m;
        let mut acc = 0.0;
        for i in 0..=m {
            let point = offset + f64::from(2 * i) - f64::from(m);
            let value = f(point);
            if !value.is_finite() {
                return Err(Error::NonFinite { point });
            }
            let w = self.mass_at_index(i);
            if w > 0.0 {
                acc += w * value;
            }
        }
        Ok(acc)
    }

    /// `ln E[exp(ln_f(offset + B_m))]`, for positive integrands whose
    /// values would overflow in linear space.
    pub fn ln_expect_exp<F>(&self, ln_f: F, offset: f64) -> Result<f64>
    where
        F: Fn(f64) -> f64,
    {
        let m = self.m;
        let mut terms = Vec::with_capacity(m as usize + 1);
        for i in 0..=m {
            let point = offset + f64::from(2 * i) - f64::from(m);
            let value = ln_f(point);
            if value.is_nan() || value == f64::INFINITY {
                return Err(Error::NonFinite { point });
            }
            terms.push(self.ln_mass_at_index(i) + value);
        }
        Ok(log_sum_exp(&terms))
    }
}

/// `E|B_T|` for even `T >= 2`, via `2^-T * 2M * T! / ((T-M)! M!)`, `M = T/2`.
pub fn mean_abs_deviation(t: u32) -> Result<f64> {
    if t < 2 || !t.is_multiple_of(2) {
        return Err(Error::OddHorizon(t));
    }
    let big_t = f64::from(t);
    let half = f64::from(t / 2);
    let ln = half.ln() + std::f64::consts::LN_2 + ln_gamma(big_t + 1.0)
        - ln_gamma(big_t - half + 1.0)
        - ln_gamma(half + 1.0)
        - big_t * std::f64::consts::LN_2;
    Ok(ln.exp())
}

/// `C(2M, M) * sqrt(pi M) / 4^M`. Equals `1 - c_M / M` with `c_M` in `(1/9, 1/8)`.
pub fn central_binomial_ratio(m: u32) -> Result<f64> {
    if m == 0 {
        return Err(invalid("M", "must be at least 1"));
    }
    let mm = f64::from(m);
    let ln = ln_choose(2 * m, m) - 2.0 * mm * std::f64::consts::LN_2 + 0.5 * (std::f64::consts::PI * mm).ln();
    Ok(ln.exp())
}

/// Regularized incomplete beta `I_x(a, b)` by Lentz's continued fraction.
///
/// The iteration budget grows with `sqrt(a + b)`, which is what the fraction
/// needs near `x = a / (a + b)`.
pub fn regularized_incomplete_beta(a: f64, b: f64, x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if x >= 1.0 {
        return 1.0;
    }
    // the fraction converges fast for x < (a + 1) / (a + b + 2)
    if x > (a + 1.0) / (a + b + 2.0) {
        return 1.0 - regularized_incomplete_beta(b, a, 1.0 - x);
    }
    let front = ln_beta_front(a, b, x).exp();
    if front == 0.0 {
        return 0.0;
    }

    const TINY: f64 = 1e-300;
    let max_iter = 200 + (20.0 * (a + b).sqrt()) as usize;
    let mut c = 1.0;
    let mut d = 1.0 - (a + b) * x / (a + 1.0);
    if d.abs() < TINY {
        d = TINY;
    }
    d = 1.0 / d;
    let mut h = d;
    for k in 1..=max_iter {
        let k = k as f64;
        let even = k * (b - k) * x / ((a + 2.0 * k - 1.0) * (a + 2.0 * k));
        d = 1.0 + even * d;
        d = if d.abs() < TINY { 1.0 / TINY } else { 1.0 / d };
        c = 1.0 + even / c;
        if c.abs() < TINY {
            c = TINY;
        }
        h *= d * c;

        let odd = -(a + k) * (a + b + k) * x / ((a + 2.0 * k) * (a + 2.0 * k + 1.0));
        d = 1.0 + odd * d;
        d = if d.abs() < TINY { 1.0 / TINY } else { 1.0 / d };
        c = 1.0 + odd / c;
        if c.abs() < TINY {
            c = TINY;
        }
        let delta = d * c;
        h *= delta;
        if (delta - 1.0).abs() < 1e-16 {
            break;
        }
    }
    front * h / a
}

/// `ln(x^a (1-x)^b / B(a, b))`.
///
/// For large arguments the log-gamma terms are each of order `a ln a` and
/// cancel almost completely, so the Stirling form is regrouped around
/// `ln(x (a+b) / a)` and `ln((1-x) (a+b) / b)`, which are small near the mode.
fn ln_beta_front(a: f64, b: f64, x: f64) -> f64 {
    if a.min(b) < 20.0 {
        return ln_gamma(a + b) - ln_gamma(a) - ln_gamma(b) + a * x.ln() + b * (-x).ln_1p();
    }
    let s = a + b;
    let ln_x_term = ((x * s - a) / a).ln_1p();
    let ln_y_term = (((1.0 - x) * s - b) / b).ln_1p();
    a * ln_x_term + b * ln_y_term + 0.5 * (a * b / s).ln() - 0.5 * (2.0 * std::f64::consts::PI).ln()
        + stirling_correction(s)
        - stirling_correction(a)
        - stirling_correction(b)
}

/// `ln Gamma(x) - ((x - 1/2) ln x - x + ln(2 pi) / 2)` for `x >= 20`.
fn stirling_correction(x: f64) -> f64 {
    let r = 1.0 / x;
    let r2 = r * r;
    r * (1.0 / 12.0 - r2 * (1.0 / 360.0 - r2 * (1.0 / 1260.0 - r2 / 1680.0)))
}

/// `ln C(n, k)` through log-gamma.
pub fn ln_choose(n: u32, k: u32) -> f64 {
    if k > n {
        return f64::NEG_INFINITY;
    }
    if k == 0 || k == n {
        return 0.0;
    }
    let (n, k) = (f64::from(n), f64::from(k));
    ln_gamma(n + 1.0) - ln_gamma(k + 1.0) - ln_gamma(n - k + 1.0)
}

fn direct_choose(n: u32, k: u32) -> u64 {
    debug_assert!(n <= DIRECT_PMF_MAX_M);
    let k = k.min(n - k) as u64;
    let n = n as u64;
    (0..k).fold(1u64, |acc, j| acc * (n - j) / (j + 1))
}

/// `ln(sum(exp(x)))` without overflow; `-inf` for an empty slice.
pub fn log_sum_exp(terms: &[f64]) -> f64 {
    let max = terms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    if max == f64::INFINITY {
        return f64::INFINITY;
    }
    let sum: f64 = terms.iter().map(|&x| (x - max).exp()).sum();
    max + sum.ln()
}

/// `ln cosh(x)`, accurate for small `x` and finite for large `x`.
pub fn ln_cosh(x: f64) -> f64 {
    let a = x.abs();
    if a < 1.0 {
        // cosh x = 1 + 2 sinh^2(x/2)
        let s = (a / 2.0).sinh();
        (2.0 * s * s).ln_1p()
    } else {
        a + (-2.0 * a).exp().ln_1p() - std::f64::consts::LN_2
    }
}
