use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Stability assumption `(1 + alpha, epsilon)` and failure probability `delta`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StabilityParams {
    pub alpha: f64,
    pub epsilon: f64,
    pub delta: f64,
}

impl StabilityParams {
    pub fn new(alpha: f64, epsilon: f64, delta: f64) -> Result<Self> {
        let p = Self {
            alpha,
            epsilon,
            delta,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha.is_finite()) {
            return Err(Error::param(format!(
                "alpha must be positive, got {}",
                self.alpha
            )));
        }
        if !(self.epsilon > 0.0 && self.epsilon < 1.0) {
            return Err(Error::param(format!(
                "epsilon must lie in (0, 1), got {}",
                self.epsilon
            )));
        }
        if !(self.delta > 0.0 && self.delta < 1.0) {
            return Err(Error::param(format!(
                "delta must lie in (0, 1), got {}",
                self.delta
            )));
        }
        Ok(())
    }

    /// Fraction `s_min / n` of points guaranteed in the smallest good set: `(3 + 120/alpha) * epsilon`.
    pub fn min_good_fraction(&self) -> f64 {
        (3.0 + 120.0 / self.alpha) * self.epsilon
    }

    /// Ideal threshold `alpha * w / (40 * epsilon)` for average weight `w = OPT / n`.
    pub fn ideal_threshold(&self, avg_weight: f64) -> f64 {
        self.alpha * avg_weight / (40.0 * self.epsilon)
    }
}

/// Inputs of a single clustering run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AlgorithmParams {
    pub k: usize,
    pub n_prime: usize,
    pub threshold: f64,
    pub seed: u64,
}

impl AlgorithmParams {
    pub fn validate(&self, n: usize) -> Result<()> {
        if self.k == 0 || self.k > n {
            return Err(Error::param(format!("k = {} must lie in [1, {n}]", self.k)));
        }
        if self.n_prime == 0 || self.n_prime > n {
            return Err(Error::param(format!(
                "landmark count {} must lie in [1, {n}]",
                self.n_prime
            )));
        }
        if self.threshold.is_nan() || self.threshold <= 0.0 {
            return Err(Error::param(format!(
                "threshold must be positive, got {}",
                self.threshold
            )));
        }
        Ok(())
    }
}

/// Ceiling that ignores floating-point noise just above an integer.
pub fn ceil_count(x: f64) -> f64 {
    let r = x.round();
    if (x - r).abs() <= 1e-9 * r.abs().max(1.0) {
        r
    } else {
        x.ceil()
    }
}

/// `ceil((n / s) * ln(k / delta))` uniform samples hit every good set of size
/// at least `s` with probability at least `1 - delta`. Clamped to `[1, n]`.
pub fn landmarks_for_coverage(n_over_s: f64, k: usize, delta: f64, n: usize) -> usize {
    let raw = ceil_count(n_over_s * (k as f64 / delta).ln());
    if raw.is_nan() || raw < 1.0 {
        1
    } else {
        (raw.min(n as f64) as usize).max(1)
    }
}

/// Number of landmarks `ceil(ln(k / delta) / ((3 + 120/alpha) * epsilon))`, clamped to `[1, n]`.
pub fn landmark_count_for(params: &StabilityParams, k: usize, n: usize) -> Result<usize> {
    params.validate()?;
    if k == 0 {
        return Err(Error::param("k must be positive"));
    }
    Ok(landmarks_for_coverage(
        1.0 / params.min_good_fraction(),
        k,
        params.delta,
        n,
    ))
}

/// Threshold `alpha * OPT / (40 * epsilon * n)` for a known optimum value.
pub fn threshold_from_opt(params: &StabilityParams, opt: f64, n: usize) -> Result<f64> {
    params.validate()?;
    if !(opt > 0.0 && opt.is_finite()) || n == 0 {
        return Err(Error::param(format!(
            "OPT must be positive and finite, got {opt}"
        )));
    }
    Ok(params.ideal_threshold(opt / n as f64))
}
