//! Poisson weights of the number-state expansion of coherent states.
//!
//! `|⟨n|α⟩|²` is a Poisson distribution with rate `|α|²`, so every truncation
//! error in this crate reduces to a tail of that distribution.

/// `ln(n!)` by direct summation. Exact enough for the cutoffs used here.
pub fn ln_factorial(n: usize) -> f64 {
    (2..=n).map(|k| (k as f64).ln()).sum()
}

pub fn pmf(rate: f64, n: usize) -> f64 {
    if rate == 0.0 {
        return if n == 0 { 1.0 } else { 0.0 };
    }
    (-rate + n as f64 * rate.ln() - ln_factorial(n)).exp()
}

/// `P(N ≤ n)` summed upward from zero.
pub fn cdf(rate: f64, n: usize) -> f64 {
    if rate == 0.0 {
        return 1.0;
    }
    let mut term = (-rate).exp();
    let mut sum = term;
    for k in 1..=n {
        term *= rate / k as f64;
        sum += term;
    }
    sum.min(1.0)
}

/// `P(N ≥ from)`, summed over the tail itself rather than as `1 − cdf`, so
/// that tiny tails keep full relative precision.
pub fn tail(rate: f64, from: usize) -> f64 {
    if from == 0 {
        return 1.0;
    }
    if rate == 0.0 {
        return 0.0;
    }
    let mut term = pmf(rate, from);
    let mut sum = 0.0;
    let mut k = from;
    loop {
        sum += term;
        k += 1;
        term *= rate / k as f64;
        if (k as f64 > rate && term <= sum * 1e-18) || term == 0.0 {
            break;
        }
    }
    sum
}
