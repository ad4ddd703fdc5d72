//! Coherent states under a finite energy budget.
//!
//! A mode of frequency `ω` can hold at most `n_f = ⌊E_max/ω⌋` quanta. For a
//! massive boson `ω_k = √(m² + |k|²) ≥ m`, so no mode holds more than
//! `E_max/m` quanta and the coherent series must stop there.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fock::StateVector;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModeSpec {
    mass: f64,
    momentum: f64,
}

impl ModeSpec {
    /// `momentum` is `|k|`; both arguments are in energy units.
    pub fn new(mass: f64, momentum: f64) -> Result<Self> {
        if !(mass >= 0.0 && mass.is_finite()) {
            return Err(Error::InvalidParameter { name: "mass", reason: format!("{mass} is negative or not finite") });
        }
        if !(momentum >= 0.0 && momentum.is_finite()) {
            return Err(Error::InvalidParameter { name: "k", reason: format!("{momentum} is negative or not finite") });
        }
        Ok(Self { mass, momentum })
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn momentum(&self) -> f64 {
        self.momentum
    }

    /// `ω_k = √(m² + |k|²)`; exactly `|k|` when massless.
    pub fn omega(&self) -> f64 {
        if self.mass == 0.0 {
            self.momentum
        } else {
            self.mass.hypot(self.momentum)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EnergyBudget {
    e_max: f64,
}

impl EnergyBudget {
    pub fn new(e_max: f64) -> Result<Self> {
        if !(e_max > 0.0 && e_max.is_finite()) {
            return Err(Error::InvalidParameter { name: "e_max", reason: format!("{e_max} is not positive") });
        }
        Ok(Self { e_max })
    }

    pub fn e_max(&self) -> f64 {
        self.e_max
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Capacity {
    Finite(usize),
    /// A zero-frequency mode: the budget puts no bound on its occupation.
    Unbounded,
}

/// `⌊E_max/ω_k⌋`.
///
/// The ratio is nudged up by a few ulps before flooring so that budgets that
/// are exact multiples of `ω` (up to the rounding of `ω` itself) are not
/// short-changed by one quantum.
pub fn mode_capacity(budget: &EnergyBudget, mode: &ModeSpec) -> Capacity {
    let omega = mode.omega();
    if omega == 0.0 {
        return Capacity::Unbounded;
    }
    let ratio = budget.e_max / omega;
    Capacity::Finite((ratio * (1.0 + 8.0 * f64::EPSILON)).floor() as usize)
}

/// The series `Σ_{n≤n_f} αⁿ (a†)ⁿ/n! |0⟩`, i.e. `c_n = αⁿ/√(n!)`, kept
/// unnormalized alongside its squared norm.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedCoherent {
    pub raw: StateVector,
    pub norm_sqr: f64,
}

impl TruncatedCoherent {
    pub fn normalized(&self) -> StateVector {
        self.raw.scaled(Complex64::new(1.0 / self.norm_sqr.sqrt(), 0.0))
    }
}

pub fn truncated_coherent(alpha: Complex64, n_f: usize) -> Result<TruncatedCoherent> {
    if !alpha.is_finite() {
        return Err(Error::InvalidParameter { name: "alpha", reason: "not finite".into() });
    }
    // build by repeated raising of the vacuum, as the series is written
    let dim = n_f + 1;
    let mut power = StateVector::number(0, dim)?;
    let mut coeffs = power.coefficients().to_vec();
    for n in 1..dim {
        power = power.create().state.scaled(alpha / n as f64);
        for (c, p) in coeffs.iter_mut().zip(power.coefficients()) {
            *c += p;
        }
    }
    let raw = StateVector::from_coefficients(coeffs)?;
    let norm_sqr = raw.norm_sqr();
    Ok(TruncatedCoherent { raw, norm_sqr })
}

/// `|⟨α|α⟩_m|²` between the ideal coherent state and the normalized
/// truncated one.
pub fn truncation_fidelity(alpha: Complex64, n_f: usize) -> Result<f64> {
    let truncated = truncated_coherent(alpha, n_f)?.normalized();
    // components of |α⟩ above n_f are orthogonal to the truncated state
    let ideal = StateVector::coherent(alpha, n_f + 1)?;
    Ok(ideal.inner(&truncated).norm_sqr())
}
