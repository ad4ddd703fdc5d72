use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::StateVector;

/// `ρ_c = (α₀†)^{n_f}|0⟩⟨0|(α₀)^{n_f} / n_f!` in the number basis of the
/// `α₀ = (0, 0)` packet mode, on `0..=n_f`.
#[derive(Debug, Clone, PartialEq)]
pub struct CondensateDensity {
    n_f: usize,
    matrix: DMatrix<Complex64>,
}

impl CondensateDensity {
    pub fn new(n_f: usize) -> Result<Self> {
        if n_f < 1 {
            return Err(Error::InvalidParameter { name: "n_f", reason: "condensate must hold at least one quantum".into() });
        }
        let dim = n_f + 1;
        let mut v = StateVector::number(0, dim)?;
        let mut log_norm = 0.0;
        for k in 1..=n_f {
            v = v.create().state;
            log_norm += (k as f64).ln();
        }
        let v = v.scaled(Complex64::new((-0.5 * log_norm).exp(), 0.0));
        let c = v.coefficients();
        let matrix = DMatrix::from_fn(dim, dim, |i, j| c[i] * c[j].conj());
        Ok(Self { n_f, matrix })
    }

    pub fn occupancy(&self) -> usize {
        self.n_f
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn trace(&self) -> Complex64 {
        self.matrix.trace()
    }

    pub fn squared(&self) -> DMatrix<Complex64> {
        &self.matrix * &self.matrix
    }

    /// `Tr ρ²`.
    pub fn purity(&self) -> f64 {
        self.squared().trace().re
    }

    /// `max |(ρ² − ρ)_ij|`.
    pub fn idempotency_defect(&self) -> f64 {
        (self.squared() - &self.matrix).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}
