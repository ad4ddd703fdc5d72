//! Single-mode Fock space truncated at a fixed cutoff.
//!
//! States are coefficient vectors over the number basis `|0⟩ … |dim−1⟩`.
//! Operators never grow the basis: whatever would be pushed past the cutoff
//! is dropped and its weight returned to the caller as leakage.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::poisson;

/// Tolerance on `|‖ψ‖ − 1|` for operations that require normalized input.
pub const NORM_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    coeffs: Vec<Complex64>,
}

/// Result of a raising operation: the truncated state plus the squared
/// magnitude of the component that fell off the top of the basis.
#[derive(Debug, Clone, PartialEq)]
pub struct Raised {
    pub state: StateVector,
    pub leakage: f64,
}

impl StateVector {
    pub fn from_coefficients(coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidCutoff { got: 0, min: 1 });
        }
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::Numerical("non-finite coefficient".into()));
        }
        Ok(Self { coeffs })
    }

    pub fn zero(dim: usize) -> Result<Self> {
        Self::from_coefficients(vec![Complex64::new(0.0, 0.0); dim])
    }

    /// The number state `|n⟩` in a basis of `dim` levels.
    pub fn number(n: usize, dim: usize) -> Result<Self> {
        if n >= dim {
            return Err(Error::OutOfRange { index: n, dim });
        }
        let mut s = Self::zero(dim)?;
        s.coeffs[n] = Complex64::new(1.0, 0.0);
        Ok(s)
    }

    /// Coherent state `|α⟩` with coefficients `e^{−|α|²/2} αⁿ/√(n!)`, cut at
    /// `dim`. The series is not renormalized; the missing weight is
    /// [`coherent_truncation_deficit`].
    pub fn coherent(alpha: Complex64, dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidCutoff { got: 0, min: 1 });
        }
        if !alpha.is_finite() {
            return Err(Error::InvalidParameter { name: "alpha", reason: "not finite".into() });
        }
        let mut coeffs = Vec::with_capacity(dim);
        let mut c = Complex64::new((-alpha.norm_sqr() / 2.0).exp(), 0.0);
        for n in 0..dim {
            if n > 0 {
                c *= alpha / (n as f64).sqrt();
            }
            coeffs.push(c);
        }
        Ok(Self { coeffs })
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn into_coefficients(self) -> Vec<Complex64> {
        self.coeffs
    }

    pub fn norm_sqr(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn is_normalized(&self) -> bool {
        (self.norm() - 1.0).abs() <= NORM_TOLERANCE
    }

    pub(crate) fn require_normalized(&self) -> Result<()> {
        if self.is_normalized() {
            Ok(())
        } else {
            Err(Error::Unnormalized { norm: self.norm() })
        }
    }

    pub fn normalized(&self) -> Result<Self> {
        let norm = self.norm();
        if norm == 0.0 {
            return Err(Error::Numerical("cannot normalize the zero vector".into()));
        }
        Ok(self.scaled(Complex64::new(1.0 / norm, 0.0)))
    }

    pub fn scaled(&self, factor: Complex64) -> Self {
        Self { coeffs: self.coeffs.iter().map(|c| c * factor).collect() }
    }

    /// `⟨self|other⟩` over the common part of the two bases.
    pub fn inner(&self, other: &StateVector) -> Complex64 {
        self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a.conj() * b).sum()
    }

    /// Componentwise `self − other`; bases must agree.
    pub fn sub(&self, other: &StateVector) -> Result<Self> {
        if self.dim() != other.dim() {
            return Err(Error::InvalidCutoff { got: other.dim(), min: self.dim() });
        }
        Ok(Self { coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect() })
    }

    /// Largest componentwise modulus of `self − other`.
    pub fn max_abs_diff(&self, other: &StateVector) -> f64 {
        let n = self.dim().max(other.dim());
        let zero = Complex64::new(0.0, 0.0);
        (0..n)
            .map(|i| {
                let a = self.coeffs.get(i).unwrap_or(&zero);
                let b = other.coeffs.get(i).unwrap_or(&zero);
                (a - b).norm()
            })
            .fold(0.0, f64::max)
    }

    /// `a|ψ⟩`, with `(aψ)_n = √(n+1) ψ_{n+1}`.
    ///
    /// The top output component would need `ψ_dim`, which lies beyond the
    /// cutoff, so it is always zero and should be treated as
    /// truncation-affected.
    pub fn annihilate(&self) -> StateVector {
        let dim = self.dim();
        let mut out = vec![Complex64::new(0.0, 0.0); dim];
        for n in 0..dim - 1 {
            out[n] = self.coeffs[n + 1] * ((n + 1) as f64).sqrt();
        }
        StateVector { coeffs: out }
    }

    /// `a†|ψ⟩`, with `(a†ψ)_n = √n ψ_{n−1}`. The component that would land at
    /// index `dim` is dropped and reported.
    pub fn create(&self) -> Raised {
        let dim = self.dim();
        let mut out = vec![Complex64::new(0.0, 0.0); dim];
        for n in 1..dim {
            out[n] = self.coeffs[n - 1] * (n as f64).sqrt();
        }
        let top = self.coeffs[dim - 1];
        Raised { state: StateVector { coeffs: out }, leakage: dim as f64 * top.norm_sqr() }
    }

    /// `Σ n |c_n|²`.
    pub fn mean_occupation(&self) -> f64 {
        self.coeffs.iter().enumerate().map(|(n, c)| n as f64 * c.norm_sqr()).sum()
    }
}

/// Weight a coherent state loses when cut at `dim`: the Poisson tail
/// `Σ_{n≥dim} e^{−|α|²} |α|^{2n}/n!`.
pub fn coherent_truncation_deficit(alpha: Complex64, dim: usize) -> f64 {
    poisson::tail(alpha.norm_sqr(), dim)
}

/// `exp(c·Op) v` for an operator nilpotent on the truncated basis (both
/// ladder operators are). The series is summed until a term vanishes
/// identically, so the result is exact up to rounding.
pub(crate) fn exp_nilpotent<F>(v: &[Complex64], c: Complex64, op: F) -> Vec<Complex64>
where
    F: Fn(&[Complex64]) -> Vec<Complex64>,
{
    let mut sum = v.to_vec();
    let mut term = v.to_vec();
    for k in 1..=v.len() {
        term = op(&term);
        let factor = c / k as f64;
        for t in term.iter_mut() {
            *t *= factor;
        }
        if term.iter().all(|t| t.re == 0.0 && t.im == 0.0) {
            break;
        }
        for (s, t) in sum.iter_mut().zip(&term) {
            *s += t;
        }
    }
    sum
}

pub(crate) fn lower(v: &[Complex64]) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); v.len()];
    for n in 0..v.len() - 1 {
        out[n] = v[n + 1] * ((n + 1) as f64).sqrt();
    }
    out
}

pub(crate) fn raise(v: &[Complex64]) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); v.len()];
    for n in 1..v.len() {
        out[n] = v[n - 1] * (n as f64).sqrt();
    }
    out
}

/// `D(α)|ψ⟩` through the normal-ordered factorization
/// `D(α) = e^{−|α|²/2} e^{α a†} e^{−α* a}`, each exponential applied as a
/// terminating series of truncated ladder steps.
pub fn displace(state: &StateVector, alpha: Complex64) -> StateVector {
    let lowered = exp_nilpotent(&state.coeffs, -alpha.conj(), lower);
    let raised = exp_nilpotent(&lowered, alpha, raise);
    let prefactor = (-alpha.norm_sqr() / 2.0).exp();
    StateVector { coeffs: raised.into_iter().map(|c| c * prefactor).collect() }
}

/// `D(α)|0⟩` in a basis of `dim` levels. Refuses when the Poisson weight
/// beyond the cutoff exceeds `tolerance`.
pub fn displaced_vacuum(alpha: Complex64, dim: usize, tolerance: f64) -> Result<StateVector> {
    if !alpha.is_finite() {
        return Err(Error::InvalidParameter { name: "alpha", reason: "not finite".into() });
    }
    let vacuum = StateVector::number(0, dim)?;
    let tail = coherent_truncation_deficit(alpha, dim);
    if tail > tolerance {
        return Err(Error::Truncation { tail, tolerance });
    }
    Ok(displace(&vacuum, alpha))
}

/// Classical data of a harmonic oscillator (`ħ = 1`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OscillatorParams {
    pub mass: f64,
    pub omega: f64,
    pub x0: f64,
    pub p0: f64,
}

impl OscillatorParams {
    pub fn new(mass: f64, omega: f64, x0: f64, p0: f64) -> Result<Self> {
        if !(mass > 0.0 && mass.is_finite()) {
            return Err(Error::InvalidParameter { name: "mass", reason: format!("{mass} is not positive") });
        }
        if !(omega > 0.0 && omega.is_finite()) {
            return Err(Error::InvalidParameter { name: "omega", reason: format!("{omega} is not positive") });
        }
        if !x0.is_finite() || !p0.is_finite() {
            return Err(Error::InvalidParameter { name: "x0/p0", reason: "not finite".into() });
        }
        Ok(Self { mass, omega, x0, p0 })
    }

    /// Oscillator of the given mass and frequency at rest at the origin.
    pub fn at_rest(mass: f64, omega: f64) -> Result<Self> {
        Self::new(mass, omega, 0.0, 0.0)
    }

    /// Same oscillator, with `(x₀, p₀)` taken from a coherent amplitude.
    pub fn with_alpha(self, alpha: Complex64) -> Self {
        let (x0, p0) = phase_space_from_alpha(alpha, self.mass, self.omega);
        Self { x0, p0, ..self }
    }

    /// Classical trajectory `(x(t), p(t))` starting from `(x₀, p₀)`.
    pub fn classical_trajectory(&self, t: f64) -> (f64, f64) {
        let (s, c) = (self.omega * t).sin_cos();
        let mw = self.mass * self.omega;
        (self.x0 * c + self.p0 / mw * s, self.p0 * c - mw * self.x0 * s)
    }
}

/// `α = √(mω/2) x₀ + i p₀/√(2mω)`.
pub fn alpha_from_phase_space(p: &OscillatorParams) -> Complex64 {
    let mw = p.mass * p.omega;
    Complex64::new((mw / 2.0).sqrt() * p.x0, p.p0 / (2.0 * mw).sqrt())
}

/// Inverse of [`alpha_from_phase_space`]: `x₀ = √(2/mω) Re α`,
/// `p₀ = √(2mω) Im α`.
pub fn phase_space_from_alpha(alpha: Complex64, mass: f64, omega: f64) -> (f64, f64) {
    let mw = mass * omega;
    ((2.0 / mw).sqrt() * alpha.re, (2.0 * mw).sqrt() * alpha.im)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadratureMoments {
    pub mean_x: f64,
    pub mean_p: f64,
    pub var_x: f64,
    pub var_p: f64,
}

impl QuadratureMoments {
    pub fn uncertainty_product(&self) -> f64 {
        self.var_x * self.var_p
    }
}

/// Means and variances of `x = (a + a†)/√(2mω)` and
/// `p = −i√(mω/2)(a − a†)`.
///
/// Matrix elements are those of the untruncated operators acting on the
/// state's finite support, so `⟨a a†⟩ = ⟨a† a⟩ + 1` holds exactly.
pub fn quadrature_moments(s: &StateVector, p: &OscillatorParams) -> Result<QuadratureMoments> {
    s.require_normalized()?;
    let c = &s.coeffs;
    let dim = c.len();
    let mut a1 = Complex64::new(0.0, 0.0);
    let mut a2 = Complex64::new(0.0, 0.0);
    for n in 0..dim {
        if n + 1 < dim {
            a1 += c[n].conj() * c[n + 1] * ((n + 1) as f64).sqrt();
        }
        if n + 2 < dim {
            a2 += c[n].conj() * c[n + 2] * (((n + 1) * (n + 2)) as f64).sqrt();
        }
    }
    let occupation = s.mean_occupation();
    let mw = p.mass * p.omega;

    let mean_x = 2.0 * a1.re / (2.0 * mw).sqrt();
    let mean_p = (2.0 * mw).sqrt() * a1.im;
    let x2 = (2.0 * a2.re + 2.0 * occupation + 1.0) / (2.0 * mw);
    let p2 = mw / 2.0 * (2.0 * occupation + 1.0 - 2.0 * a2.re);
    Ok(QuadratureMoments {
        mean_x,
        mean_p,
        var_x: (x2 - mean_x * mean_x).max(0.0),
        var_p: (p2 - mean_p * mean_p).max(0.0),
    })
}

/// `⟨x|α⟩ = (mω/π)^{1/4} exp[−mω(x − x₀)²/2 + i p₀ x]`, with `(x₀, p₀)`
/// recovered from `α`. Only the mass and frequency of `p` are used.
pub fn coordinate_wavefunction(alpha: Complex64, p: &OscillatorParams, x: f64) -> Complex64 {
    let mw = p.mass * p.omega;
    let (x0, p0) = phase_space_from_alpha(alpha, p.mass, p.omega);
    let amplitude = (mw / std::f64::consts::PI).powf(0.25);
    let dx = x - x0;
    Complex64::new(-mw * dx * dx / 2.0, p0 * x).exp() * amplitude
}

/// Free harmonic evolution: each number component picks up
/// `e^{−iωt(n + 1/2)}`, zero-point phase included.
pub fn evolve(s: &StateVector, p: &OscillatorParams, t: f64) -> Result<StateVector> {
    s.require_normalized()?;
    let coeffs = s
        .coeffs
        .iter()
        .enumerate()
        .map(|(n, c)| c * Complex64::from_polar(1.0, -p.omega * t * (n as f64 + 0.5)))
        .collect();
    Ok(StateVector { coeffs })
}
