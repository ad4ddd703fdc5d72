//! Multiboson wave-packet source with stimulated-emission weights.
//!
//! Packet centres are drawn from a static Gaussian source,
//! `ξ ~ N(0, R²)` and `π ~ N(0, mT)` per axis, and every `n`-packet
//! configuration carries the weight `perm(G)` of its Gram matrix. Averages
//! under the symmetrized `n`-particle density matrix are self-normalized
//! importance-sampling estimates `Σ_e perm(G_e) O_e / Σ_e perm(G_e)`, and
//! `N(n) = E[perm(G)]` is the normalization of that density matrix.
//!
//! Sampling is deterministic: event `i` of multiplicity `n` draws from its
//! own ChaCha stream keyed by `(seed, n, i)`, so results do not depend on
//! thread scheduling.

mod condensate;
mod config;
mod observables;

pub use condensate::CondensateDensity;
pub use config::{ConfigError, ConfigIssue, ModelConfig};
pub use observables::{
    condensed_limit_check, inclusive_correlation, one_particle_spectrum, two_particle_correlation, CorrelationGrid,
    LimitReport, LimitRow, Spectrum, MAX_OBSERVABLE_MULTIPLICITY, N1_FLOOR,
};

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::poisson;
use crate::stats::Estimate;
use crate::wavepacket::{real_permanent, GramMatrix, WavePacket};

/// Largest multiplicity for sampled events.
pub const MAX_MULTIPLICITY: usize = 20;

/// Fewest samples accepted by [`normalization_constant`] and
/// [`multiplicity_distribution`].
pub const MIN_SAMPLES: usize = 1000;

/// RNG for event `index` of multiplicity `n`.
pub fn event_rng(seed: u64, n: usize, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((n as u64) << 48) ^ index);
    rng
}

/// One packet drawn from the source distribution.
pub fn sample_single_packet<R: Rng + ?Sized>(config: &ModelConfig, rng: &mut R) -> WavePacket {
    let momentum_width = (config.mass * config.temperature).sqrt();
    let mut xi = Vec::with_capacity(config.dim);
    let mut pi = Vec::with_capacity(config.dim);
    for _ in 0..config.dim {
        let z: f64 = rng.sample(StandardNormal);
        xi.push(config.radius * z);
    }
    for _ in 0..config.dim {
        let z: f64 = rng.sample(StandardNormal);
        pi.push(momentum_width * z);
    }
    WavePacket::new(xi, pi, config.sigma).expect("validated config yields valid packets")
}

/// `ln Π_i ρ_x(ξ_i) ρ_p(π_i)`.
fn log_source_density(config: &ModelConfig, packets: &[WavePacket]) -> f64 {
    let r2 = config.radius * config.radius;
    let mt = config.mass * config.temperature;
    let d = config.dim as f64;
    packets
        .iter()
        .map(|p| {
            let x2: f64 = p.xi().iter().map(|x| x * x).sum();
            let p2: f64 = p.pi().iter().map(|x| x * x).sum();
            -x2 / (2.0 * r2) - p2 / (2.0 * mt) - 0.5 * d * ((2.0 * PI * r2).ln() + (2.0 * PI * mt).ln())
        })
        .sum()
}

#[derive(Debug, Clone, PartialEq)]
pub struct Event {
    pub packets: Vec<WavePacket>,
    /// Overlaps used for the weight and observables; the identity when
    /// symmetrization is switched off.
    pub gram: GramMatrix,
    /// `perm(gram)`.
    pub weight: f64,
    /// Log of the sampling density the packets were drawn from.
    pub log_importance: f64,
    /// Whether the packets are treated as identical bosons.
    pub symmetrized: bool,
}

impl Event {
    /// Build an event from fixed packets.
    pub fn from_packets(packets: Vec<WavePacket>, symmetrization: bool) -> Result<Self> {
        let gram = if symmetrization { GramMatrix::new(&packets)? } else { GramMatrix::identity(packets.len()) };
        let weight = real_permanent(&gram)?;
        if !(weight > 0.0) {
            return Err(Error::Numerical(format!("event weight {weight:e} is not positive")));
        }
        Ok(Self { packets, gram, weight, log_importance: f64::NAN, symmetrized: symmetrization })
    }

    pub fn multiplicity(&self) -> usize {
        self.packets.len()
    }

    pub fn importance(&self) -> f64 {
        self.log_importance.exp()
    }
}

fn check_multiplicity(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidParameter { name: "n", reason: "events need at least one packet".into() });
    }
    if n > MAX_MULTIPLICITY {
        return Err(Error::TooLarge { n, bound: MAX_MULTIPLICITY, method: "sampled event" });
    }
    Ok(())
}

fn check_config(config: &ModelConfig) -> Result<()> {
    config
        .validate()
        .map_err(|e| Error::InvalidParameter { name: "config", reason: e.to_string() })
}

/// `n` packets from the source, weighted by `perm(G)`.
pub fn sample_event<R: Rng + ?Sized>(config: &ModelConfig, n: usize, rng: &mut R) -> Result<Event> {
    check_multiplicity(n)?;
    let packets: Vec<WavePacket> = (0..n).map(|_| sample_single_packet(config, rng)).collect();
    let log_importance = log_source_density(config, &packets);
    let mut event = Event::from_packets(packets, config.symmetrization)?;
    event.log_importance = log_importance;
    Ok(event)
}

/// Events of one multiplicity sharing a config.
#[derive(Debug, Clone, PartialEq)]
pub struct Ensemble {
    pub config: ModelConfig,
    pub n: usize,
    pub events: Vec<Event>,
}

impl Ensemble {
    /// `samples` events, event `i` drawn from `event_rng(seed, n, i)`.
    pub fn sample(config: &ModelConfig, n: usize, samples: usize) -> Result<Self> {
        check_config(config)?;
        check_multiplicity(n)?;
        let draw = |i: usize| sample_event(config, n, &mut event_rng(config.seed, n, i as u64));
        #[cfg(feature = "parallel")]
        let events: Result<Vec<Event>> = {
            use rayon::prelude::*;
            (0..samples).into_par_iter().map(draw).collect()
        };
        #[cfg(not(feature = "parallel"))]
        let events: Result<Vec<Event>> = (0..samples).map(draw).collect();
        Ok(Self { config: config.clone(), n, events: events? })
    }

    /// An ensemble of hand-placed events.
    pub fn from_events(config: &ModelConfig, events: Vec<Event>) -> Result<Self> {
        let n = events.first().map(Event::multiplicity).ok_or(Error::InvalidParameter {
            name: "events",
            reason: "empty ensemble".into(),
        })?;
        if events.iter().any(|e| e.multiplicity() != n) {
            return Err(Error::InvalidParameter { name: "events", reason: "mixed multiplicities".into() });
        }
        Ok(Self { config: config.clone(), n, events })
    }

    pub fn weights(&self) -> Vec<f64> {
        self.events.iter().map(|e| e.weight).collect()
    }
}

/// `N(n) = E[perm(G)]` under independent emission, with its standard error.
/// `N(0) = N(1) = 1` exactly.
pub fn normalization_constant(config: &ModelConfig, n: usize, samples: usize) -> Result<Estimate> {
    check_config(config)?;
    if n <= 1 {
        return Ok(Estimate::exact(1.0));
    }
    if samples < MIN_SAMPLES {
        return Err(Error::InvalidParameter { name: "samples", reason: format!("need at least {MIN_SAMPLES}, got {samples}") });
    }
    if !config.symmetrization {
        return Ok(Estimate::exact(1.0));
    }
    let ensemble = Ensemble::sample(config, n, samples)?;
    Ok(Estimate::mean_of(&ensemble.weights()))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MultiplicityDistribution {
    /// `p_n` for `n = 0..=n_max`.
    pub probabilities: Vec<Estimate>,
    /// `N(n)` used to build them.
    pub normalizations: Vec<Estimate>,
    /// `Σ n p_n`.
    pub mean: Estimate,
}

/// `p_n ∝ p_n⁽⁰⁾ N(n)` on `0..=n_max`, with `p_n⁽⁰⁾` Poisson of mean `n₀`.
///
/// Errors are propagated to first order from the independent `N(n)`
/// estimates through the renormalization.
pub fn multiplicity_distribution(config: &ModelConfig, n_max: usize, samples: usize) -> Result<MultiplicityDistribution> {
    check_config(config)?;
    if n_max > MAX_MULTIPLICITY {
        return Err(Error::TooLarge { n: n_max, bound: MAX_MULTIPLICITY, method: "multiplicity distribution" });
    }
    let normalizations = (0..=n_max)
        .map(|n| normalization_constant(config, n, samples))
        .collect::<Result<Vec<_>>>()?;
    let q: Vec<f64> = (0..=n_max).map(|n| poisson::pmf(config.n0, n) * normalizations[n].value).collect();
    let dq: Vec<f64> = (0..=n_max).map(|n| poisson::pmf(config.n0, n) * normalizations[n].std_error).collect();
    let total: f64 = q.iter().sum();

    let probabilities: Vec<Estimate> = (0..=n_max)
        .map(|n| {
            let var: f64 = (0..=n_max)
                .map(|m| {
                    let delta = if m == n { 1.0 } else { 0.0 };
                    let grad = (delta * total - q[n]) / (total * total);
                    (grad * dq[m]).powi(2)
                })
                .sum();
            Estimate { value: q[n] / total, std_error: var.sqrt() }
        })
        .collect();

    let mean_value: f64 = probabilities.iter().enumerate().map(|(n, p)| n as f64 * p.value).sum();
    let mean_var: f64 = (0..=n_max)
        .map(|m| {
            // ∂/∂q_m of Σ n q_n / Σ q
            let grad = (m as f64 - mean_value) / total;
            (grad * dq[m]).powi(2)
        })
        .sum();
    Ok(MultiplicityDistribution {
        probabilities,
        normalizations,
        mean: Estimate { value: mean_value, std_error: mean_var.sqrt() },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    pub(crate) fn config(radius: f64, temperature: f64) -> ModelConfig {
        ModelConfig {
            radius,
            temperature,
            mass: 1.0,
            sigma: 1.0,
            n0: 2.0,
            t0: 0.0,
            dim: 1,
            seed: 11,
            symmetrization: true,
        }
    }

    #[test]
    fn packet_statistics() {
        let c = ModelConfig { temperature: 0.5, mass: 2.0, ..config(1.5, 0.5) };
        let mut rng = event_rng(3, 1, 0);
        let packets: Vec<_> = (0..100_000).map(|_| sample_single_packet(&c, &mut rng)).collect();
        let xi: Vec<f64> = packets.iter().map(|p| p.xi()[0]).collect();
        let mean = Estimate::mean_of(&xi);
        assert!(mean.agrees_with(0.0, 5.0), "{mean:?}");

        let pi: Vec<f64> = packets.iter().map(|p| p.pi()[0]).collect();
        let n = pi.len() as f64;
        let var = pi.iter().map(|x| x * x).sum::<f64>() / n;
        // Var of the sample variance of a normal is 2σ⁴/n
        let target = c.mass * c.temperature;
        assert!((var - target).abs() <= 3.0 * (2.0 * target * target / n).sqrt(), "{var}");
    }

    #[test]
    fn sampling_is_deterministic() {
        let c = config(1.0, 1.0);
        let a = Ensemble::sample(&c, 3, 50).unwrap();
        let b = Ensemble::sample(&c, 3, 50).unwrap();
        assert_eq!(a, b);
        let other = Ensemble::sample(&ModelConfig { seed: 12, ..c }, 3, 50).unwrap();
        assert_ne!(a.events[0].packets, other.events[0].packets);
    }

    #[test]
    fn single_packet_events_have_unit_weight() {
        let e = Ensemble::sample(&config(0.3, 0.2), 1, 100).unwrap();
        assert!(e.events.iter().all(|ev| ev.weight == 1.0));
    }

    #[test]
    fn remote_regime_weights_near_one() {
        let e = Ensemble::sample(&config(200.0, 200.0), 2, 500).unwrap();
        let mean = e.weights().iter().sum::<f64>() / 500.0;
        assert!(mean < 1.01, "{mean}");
        assert!(e.events.iter().all(|ev| ev.weight >= 1.0 - 1e-12));
    }

    #[test]
    fn importance_is_source_density() {
        let c = config(1.0, 1.0);
        let e = sample_event(&c, 1, &mut event_rng(1, 1, 0)).unwrap();
        let p = &e.packets[0];
        let expected = (-p.xi()[0].powi(2) / 2.0).exp() / (2.0 * PI).sqrt() * (-p.pi()[0].powi(2) / 2.0).exp() / (2.0 * PI).sqrt();
        assert_abs_diff_eq!(e.importance(), expected, epsilon = 1e-14);
    }

    #[test]
    fn multiplicity_bounds() {
        let c = config(1.0, 1.0);
        assert!(matches!(sample_event(&c, 0, &mut event_rng(0, 0, 0)), Err(Error::InvalidParameter { .. })));
        assert!(matches!(sample_event(&c, 21, &mut event_rng(0, 0, 0)), Err(Error::TooLarge { .. })));
        assert!(normalization_constant(&c, 3, 10).is_err());
        assert_eq!(normalization_constant(&c, 1, 0).unwrap(), Estimate::exact(1.0));
    }

    #[test]
    fn switched_off_is_poisson() {
        let c = ModelConfig { symmetrization: false, n0: 2.5, ..config(0.5, 0.5) };
        let dist = multiplicity_distribution(&c, 8, 1000).unwrap();
        let cdf = poisson::cdf(2.5, 8);
        for (n, p) in dist.probabilities.iter().enumerate() {
            assert_abs_diff_eq!(p.value, poisson::pmf(2.5, n) / cdf, epsilon = 1e-12);
            assert_eq!(p.std_error, 0.0);
        }
    }

    #[test]
    fn overlap_enhances_multiplicity() {
        let on = config(0.5, 0.3);
        let off = ModelConfig { symmetrization: false, ..on.clone() };
        let a = multiplicity_distribution(&on, 6, 2000).unwrap();
        let b = multiplicity_distribution(&off, 6, 2000).unwrap();
        assert!(a.mean.value - 5.0 * a.mean.std_error > b.mean.value, "{:?} vs {:?}", a.mean, b.mean);
        let sum: f64 = a.probabilities.iter().map(|p| p.value).sum();
        assert_abs_diff_eq!(sum, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn invalid_config_rejected() {
        let c = ModelConfig { radius: -1.0, ..config(1.0, 1.0) };
        assert!(matches!(Ensemble::sample(&c, 2, 10), Err(Error::InvalidParameter { name: "config", .. })));
    }
}
