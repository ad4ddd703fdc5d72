//! Hole states over a fully developed condensate.
//!
//! A condensate of `n_f` quanta in one mode, `|BEC⟩ = (a†)^{n_f}|0⟩/√(n_f!)`,
//! admits no further quanta, so `a†|BEC⟩ = 0` and it plays the part of a
//! vacuum for the creation operator. Removing `j` quanta gives the hole
//! state `|j⟩_†`, which is the particle number state `|n_f − j⟩`.
//!
//! On the hole ladder the two operators trade places:
//!
//! ```text
//! a  |j⟩_† = √(j+1) |j+1⟩_†
//! a† |j⟩_† = √j     |j−1⟩_†
//! ```
//!
//! These relations hold as stated only in the limit of an infinite
//! condensate. Here `n_f` is always finite and every place where the finite
//! ladder departs from the limit (the bottom of the ladder, the Poisson tail
//! of coherent superpositions) is reported as a number.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::{self, StateVector, NORM_TOLERANCE};
use crate::poisson;

/// A state in the hole basis `|0⟩_† … |n_f⟩_†`.
#[derive(Debug, Clone, PartialEq)]
pub struct HoleState {
    n_f: usize,
    coeffs: Vec<Complex64>,
    /// Momentum of the condensed mode. Carried along, never interpreted.
    mode: [f64; 3],
}

/// Outcome of a ladder operator on a [`HoleState`].
#[derive(Debug, Clone, PartialEq)]
pub struct HoleStep {
    pub state: HoleState,
    /// Squared magnitude pushed past `j = n_f` (the particle vacuum).
    pub leakage: f64,
    /// Set when the input had weight on `|BEC⟩` and `a†` removed it.
    pub constrained: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Ladder {
    Annihilation,
    Creation,
}

fn check_occupancy(n_f: usize) -> Result<()> {
    if n_f < 1 {
        return Err(Error::InvalidParameter { name: "n_f", reason: "condensate must hold at least one quantum".into() });
    }
    Ok(())
}

impl HoleState {
    pub fn from_coefficients(n_f: usize, coeffs: Vec<Complex64>) -> Result<Self> {
        check_occupancy(n_f)?;
        if coeffs.len() != n_f + 1 {
            return Err(Error::InvalidCutoff { got: coeffs.len(), min: n_f + 1 });
        }
        Ok(Self { n_f, coeffs, mode: [0.0; 3] })
    }

    /// The condensate itself, `|0⟩_†`.
    pub fn bec(n_f: usize) -> Result<Self> {
        Self::number(0, n_f)
    }

    /// `|j⟩_†`: the condensate with `j` quanta removed.
    pub fn number(j: usize, n_f: usize) -> Result<Self> {
        check_occupancy(n_f)?;
        if j > n_f {
            return Err(Error::OutOfRange { index: j, dim: n_f + 1 });
        }
        let mut coeffs = vec![Complex64::new(0.0, 0.0); n_f + 1];
        coeffs[j] = Complex64::new(1.0, 0.0);
        Ok(Self { n_f, coeffs, mode: [0.0; 3] })
    }

    /// Coherent state of the creation operator,
    /// `c_j = e^{−|α|²/2} (α*)^j / √(j!)`, cut at `j = n_f`. Its eigenvalue
    /// under `a†` is `α*`.
    pub fn dual_coherent(alpha: Complex64, n_f: usize) -> Result<Self> {
        check_occupancy(n_f)?;
        let particle_like = StateVector::coherent(alpha.conj(), n_f + 1)?;
        Ok(Self { n_f, coeffs: particle_like.into_coefficients(), mode: [0.0; 3] })
    }

    /// Attach the momentum label of the condensed mode.
    pub fn with_mode(mut self, k: [f64; 3]) -> Self {
        self.mode = k;
        self
    }

    pub fn mode(&self) -> [f64; 3] {
        self.mode
    }

    pub fn occupancy(&self) -> usize {
        self.n_f
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    fn require_normalized(&self) -> Result<()> {
        let norm = self.norm();
        if (norm - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::Unnormalized { norm });
        }
        Ok(())
    }

    fn with_coeffs(&self, coeffs: Vec<Complex64>) -> Self {
        Self { n_f: self.n_f, coeffs, mode: self.mode }
    }

    pub fn inner(&self, other: &HoleState) -> Complex64 {
        self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a.conj() * b).sum()
    }

    /// Particle-basis image in a Fock space of `dim ≥ n_f + 1` levels:
    /// hole `j` lands on occupation `n_f − j`.
    pub fn to_particle(&self, dim: usize) -> Result<StateVector> {
        if dim < self.n_f + 1 {
            return Err(Error::InvalidCutoff { got: dim, min: self.n_f + 1 });
        }
        let mut coeffs = vec![Complex64::new(0.0, 0.0); dim];
        for (j, c) in self.coeffs.iter().enumerate() {
            coeffs[self.n_f - j] = *c;
        }
        StateVector::from_coefficients(coeffs)
    }

    /// Inverse of [`HoleState::to_particle`]. Occupations above `n_f` must be
    /// empty.
    pub fn from_particle(s: &StateVector, n_f: usize) -> Result<Self> {
        check_occupancy(n_f)?;
        let c = s.coefficients();
        if c.len() < n_f + 1 {
            return Err(Error::InvalidCutoff { got: c.len(), min: n_f + 1 });
        }
        if let Some(n) = (n_f + 1..c.len()).find(|&n| c[n].norm_sqr() > 0.0) {
            return Err(Error::OutOfRange { index: n, dim: n_f + 1 });
        }
        let coeffs = (0..=n_f).map(|j| c[n_f - j]).collect();
        Ok(Self { n_f, coeffs, mode: [0.0; 3] })
    }

    /// `a` on the hole ladder: one more hole, factor `√(j+1)`. Weight on
    /// `j = n_f` would need a hole below the particle vacuum; it is dropped
    /// and reported as leakage `(n_f + 1)|c_{n_f}|²`.
    pub fn annihilate(&self) -> HoleStep {
        // in hole index space `a` has the matrix of a particle raising step
        let out = fock::raise(&self.coeffs);
        let leakage = (self.n_f + 1) as f64 * self.coeffs[self.n_f].norm_sqr();
        HoleStep { state: self.with_coeffs(out), leakage, constrained: false }
    }

    /// `a†` on the hole ladder: one hole fewer, factor `√j`. The condensate
    /// component is annihilated outright: `a†|0⟩_† = 0`.
    pub fn create(&self) -> HoleStep {
        let out = fock::lower(&self.coeffs);
        let constrained = self.coeffs[0].norm_sqr() > 0.0;
        HoleStep { state: self.with_coeffs(out), leakage: 0.0, constrained }
    }

    /// `⟨N_†⟩ = ⟨a a†⟩ = ‖a†ψ‖²`, evaluated by applying the hole-ladder `a†`.
    /// Equals `Σ j |c_j|²` because `a†` kills the condensate.
    pub fn hole_number_expectation(&self) -> Result<f64> {
        self.require_normalized()?;
        let lowered = self.create().state;
        Ok(lowered.inner(&lowered).re)
    }

    /// `‖Op ψ − λ ψ‖` for the chosen hole-ladder operator.
    pub fn eigen_residual(&self, which: Ladder, lambda: Complex64) -> Result<f64> {
        self.require_normalized()?;
        Ok(self.residual(which, lambda))
    }

    fn residual(&self, which: Ladder, lambda: Complex64) -> f64 {
        let applied = match which {
            Ladder::Annihilation => self.annihilate().state,
            Ladder::Creation => self.create().state,
        };
        applied.coeffs.iter().zip(&self.coeffs).map(|(o, s)| (o - lambda * s).norm_sqr()).sum::<f64>().sqrt()
    }
}

/// Weight of the ideal creation-operator coherent state beyond `j = n_f`.
pub fn dual_coherent_deficit(alpha: Complex64, n_f: usize) -> f64 {
    poisson::tail(alpha.norm_sqr(), n_f + 1)
}

/// `‖a† ψ − α* ψ‖` for `ψ` = [`HoleState::dual_coherent`], which is left
/// unnormalized so that the residual measures the cut alone.
pub fn dual_coherent_residual(alpha: Complex64, n_f: usize) -> Result<f64> {
    Ok(HoleState::dual_coherent(alpha, n_f)?.residual(Ladder::Creation, alpha.conj()))
}

/// Closed form of the creation-operator eigen-residual of
/// [`HoleState::dual_coherent`]: only the last rung fails the eigen-relation,
/// leaving `|α| |c_{n_f}| = e^{−|α|²/2} |α|^{n_f+1} / √(n_f!)`.
pub fn dual_coherent_residual_bound(alpha: Complex64, n_f: usize) -> f64 {
    let r = alpha.norm();
    if r == 0.0 {
        return 0.0;
    }
    (-r * r / 2.0 + (n_f + 1) as f64 * r.ln() - 0.5 * poisson::ln_factorial(n_f)).exp()
}

/// `D†(α) ψ` on the hole ladder. With `a` raising and `a†` lowering the hole
/// number, `D†(α) = exp(α* a − α a†)` is normal-ordered with respect to the
/// condensate as `e^{−|α|²/2} e^{α* a} e^{−α a†}`.
pub fn dual_displace(state: &HoleState, alpha: Complex64) -> HoleState {
    let lowered = fock::exp_nilpotent(&state.coeffs, -alpha, fock::lower);
    let raised = fock::exp_nilpotent(&lowered, alpha.conj(), fock::raise);
    let prefactor = (-alpha.norm_sqr() / 2.0).exp();
    state.with_coeffs(raised.into_iter().map(|c| c * prefactor).collect())
}

/// `D†(α)|BEC⟩`, refused when the Poisson weight beyond `n_f` exceeds
/// `tolerance`.
pub fn dual_displaced_bec(alpha: Complex64, n_f: usize, tolerance: f64) -> Result<HoleState> {
    let bec = HoleState::bec(n_f)?;
    let tail = dual_coherent_deficit(alpha, n_f);
    if tail > tolerance {
        return Err(Error::Truncation { tail, tolerance });
    }
    Ok(dual_displace(&bec, alpha))
}
