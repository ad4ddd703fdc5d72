//! Monte Carlo estimates with error bars.

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Estimate {
    pub value: f64,
    pub std_error: f64,
}

impl Estimate {
    pub fn exact(value: f64) -> Self {
        Self { value, std_error: 0.0 }
    }

    /// Sample mean and its standard error.
    pub fn mean_of(samples: &[f64]) -> Self {
        let n = samples.len() as f64;
        let mean = samples.iter().sum::<f64>() / n;
        if samples.len() < 2 {
            return Self { value: mean, std_error: f64::NAN };
        }
        let var = samples.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0);
        Self { value: mean, std_error: (var / n).sqrt() }
    }

    /// Self-normalized ratio `Σ u_e / Σ w_e` with its delta-method error.
    pub fn ratio(numerators: &[f64], weights: &[f64]) -> Self {
        let total_w: f64 = weights.iter().sum();
        let value = numerators.iter().sum::<f64>() / total_w;
        let var: f64 = numerators.iter().zip(weights).map(|(u, w)| (u - value * w).powi(2)).sum();
        Self { value, std_error: var.sqrt() / total_w }
    }

    /// Whether `other` lies within `k` combined standard errors.
    pub fn agrees_with(&self, other: f64, k: f64) -> bool {
        (self.value - other).abs() <= k * self.std_error
    }
}

/// Delete-one-block jackknife. `estimate(skip)` must return the statistic
/// computed without block `skip` (`None` for the full sample).
pub fn jackknife<F>(blocks: usize, estimate: F) -> Estimate
where
    F: Fn(Option<usize>) -> f64,
{
    let full = estimate(None);
    let partial: Vec<f64> = (0..blocks).map(|b| estimate(Some(b))).collect();
    let b = blocks as f64;
    let mean = partial.iter().sum::<f64>() / b;
    let var = partial.iter().map(|x| (x - mean).powi(2)).sum::<f64>() * (b - 1.0) / b;
    Estimate { value: full, std_error: var.sqrt() }
}
