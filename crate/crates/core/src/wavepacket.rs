//! Gaussian wave packets and their overlaps.
//!
//! A packet centred at `ξ` in coordinate space and `π` in momentum space,
//! with momentum width `σ`, has the momentum-space amplitude
//!
//! ```text
//! φ(p) = (πσ²)^{−d/4} exp[−(p − π)²/(2σ²) − i ξ·(p − π)]
//! ```
//!
//! For two packets of equal width the overlap factorizes over axes, each axis
//! contributing
//!
//! ```text
//! ⟨i|j⟩ = exp[−(π_i − π_j)²/(4σ²) − σ²(ξ_i − ξ_j)²/4 + i(ξ_i + ξ_j)(π_j − π_i)/2]
//! ```
//!
//! The closed form is checked against [`overlap_quadrature`] in the tests.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::permanent;

/// Upper bound on the number of packets in a [`GramMatrix`]; set by the
/// permanent routines.
pub const MAX_PACKETS: usize = permanent::RYSER_MAX;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WavePacket {
    xi: Vec<f64>,
    pi: Vec<f64>,
    sigma: f64,
}

impl WavePacket {
    pub fn new(xi: Vec<f64>, pi: Vec<f64>, sigma: f64) -> Result<Self> {
        if xi.len() != pi.len() || !(xi.len() == 1 || xi.len() == 3) {
            return Err(Error::InvalidParameter {
                name: "dimension",
                reason: format!("centres have lengths {} and {}; expected 1 or 3", xi.len(), pi.len()),
            });
        }
        if !(sigma > 0.0 && sigma.is_finite()) {
            return Err(Error::InvalidParameter { name: "sigma", reason: format!("{sigma} is not positive") });
        }
        if xi.iter().chain(&pi).any(|x| !x.is_finite()) {
            return Err(Error::InvalidParameter { name: "centre", reason: "not finite".into() });
        }
        Ok(Self { xi, pi, sigma })
    }

    /// The packet centred at the origin of phase space.
    pub fn at_origin(dim: usize, sigma: f64) -> Result<Self> {
        Self::new(vec![0.0; dim], vec![0.0; dim], sigma)
    }

    pub fn dim(&self) -> usize {
        self.xi.len()
    }

    pub fn xi(&self) -> &[f64] {
        &self.xi
    }

    pub fn pi(&self) -> &[f64] {
        &self.pi
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    /// `φ(p)`; `p` must have the packet's dimension.
    pub fn amplitude(&self, p: &[f64]) -> Complex64 {
        debug_assert_eq!(p.len(), self.dim());
        let s2 = self.sigma * self.sigma;
        let (mut gauss, mut phase) = (0.0, 0.0);
        for ((&pk, &ck), &xk) in p.iter().zip(&self.pi).zip(&self.xi) {
            let d = pk - ck;
            gauss += d * d;
            phase += xk * d;
        }
        let norm = (PI * s2).powf(-(self.dim() as f64) / 4.0);
        Complex64::from_polar(norm * (-gauss / (2.0 * s2)).exp(), -phase)
    }

    fn axis(&self, k: usize) -> WavePacket {
        WavePacket { xi: vec![self.xi[k]], pi: vec![self.pi[k]], sigma: self.sigma }
    }
}

fn check_compatible(a: &WavePacket, b: &WavePacket) -> Result<()> {
    if a.dim() != b.dim() {
        return Err(Error::MismatchedPackets("dimension"));
    }
    if (a.sigma - b.sigma).abs() > 1e-12 * a.sigma.max(b.sigma) {
        return Err(Error::MismatchedPackets("width"));
    }
    Ok(())
}

/// Closed-form `⟨a|b⟩`.
pub fn overlap(a: &WavePacket, b: &WavePacket) -> Result<Complex64> {
    check_compatible(a, b)?;
    let s2 = a.sigma * a.sigma;
    let (mut re, mut im) = (0.0, 0.0);
    for k in 0..a.dim() {
        let dp = a.pi[k] - b.pi[k];
        let dx = a.xi[k] - b.xi[k];
        re -= dp * dp / (4.0 * s2) + s2 * dx * dx / 4.0;
        im += (a.xi[k] + b.xi[k]) * (b.pi[k] - a.pi[k]) / 2.0;
    }
    Ok(Complex64::from_polar(re.exp(), im))
}

/// Uniform momentum grid for [`overlap_quadrature`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureGrid {
    /// Points per axis.
    pub points: usize,
    /// Half-width of the grid beyond the outermost centre, in units of σ.
    pub half_width: f64,
}

impl Default for QuadratureGrid {
    fn default() -> Self {
        Self { points: 1 << 12, half_width: 10.0 }
    }
}

pub const MIN_QUADRATURE_POINTS: usize = 1 << 10;
pub const MIN_HALF_WIDTH: f64 = 8.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureEstimate {
    pub value: Complex64,
    /// `|I(h) − I(2h)|`, the change on halving the resolution.
    pub error: f64,
}

/// Trapezoidal `∫ φ_a*(p) φ_b(p) dp`.
///
/// In one dimension the full amplitude is integrated on the grid. In three
/// dimensions a tensor grid is out of reach, so each axis is integrated
/// separately on its own 1-d grid and the results multiplied; the error
/// estimates are combined to first order.
pub fn overlap_quadrature(a: &WavePacket, b: &WavePacket, grid: QuadratureGrid) -> Result<QuadratureEstimate> {
    check_compatible(a, b)?;
    if a.dim() == 1 {
        return quadrature_1d(a, b, grid);
    }
    let mut value = Complex64::new(1.0, 0.0);
    let mut rel_error = 0.0;
    for k in 0..a.dim() {
        let e = quadrature_1d(&a.axis(k), &b.axis(k), grid)?;
        value *= e.value;
        rel_error += e.error / e.value.norm().max(f64::MIN_POSITIVE);
    }
    Ok(QuadratureEstimate { value, error: rel_error * value.norm() })
}

fn quadrature_1d(a: &WavePacket, b: &WavePacket, grid: QuadratureGrid) -> Result<QuadratureEstimate> {
    let sigma = a.sigma;
    let lo = a.pi[0].min(b.pi[0]) - grid.half_width * sigma;
    let hi = a.pi[0].max(b.pi[0]) + grid.half_width * sigma;
    // the integrand is a Gaussian of width σ/√2 modulated at frequency |Δξ|;
    // its spectrum is negligible beyond |Δξ| + 13/σ
    let max_step = 2.0 * PI / ((a.xi[0] - b.xi[0]).abs() + 13.0 / sigma);
    let required = (((hi - lo) / max_step).ceil() as usize + 1).max(MIN_QUADRATURE_POINTS);
    if grid.half_width < MIN_HALF_WIDTH {
        return Err(Error::InsufficientGrid { required, got: 0 });
    }
    if grid.points < required {
        return Err(Error::InsufficientGrid { required, got: grid.points });
    }
    let n = grid.points;
    let h = (hi - lo) / (n - 1) as f64;
    let mut fine = Complex64::new(0.0, 0.0);
    let mut coarse = Complex64::new(0.0, 0.0);
    for i in 0..n {
        let p = [lo + i as f64 * h];
        let f = a.amplitude(&p).conj() * b.amplitude(&p);
        let w = if i == 0 || i == n - 1 { 0.5 } else { 1.0 };
        fine += f * w;
        if i % 2 == 0 {
            coarse += f * w;
        }
    }
    let fine = fine * h;
    let coarse = coarse * (2.0 * h);
    Ok(QuadratureEstimate { value: fine, error: (fine - coarse).norm() })
}

/// Pairwise overlaps `G_ij = ⟨α_i|α_j⟩` of a set of packets.
#[derive(Debug, Clone, PartialEq)]
pub struct GramMatrix(DMatrix<Complex64>);

impl GramMatrix {
    pub fn new(packets: &[WavePacket]) -> Result<Self> {
        let n = packets.len();
        if n == 0 {
            return Err(Error::InvalidParameter { name: "packets", reason: "empty".into() });
        }
        if n > MAX_PACKETS {
            return Err(Error::TooLarge { n, bound: MAX_PACKETS, method: "Gram matrix" });
        }
        let mut g = DMatrix::from_element(n, n, Complex64::new(1.0, 0.0));
        for i in 0..n {
            for j in i + 1..n {
                let o = overlap(&packets[i], &packets[j])?;
                g[(i, j)] = o;
                g[(j, i)] = o.conj();
            }
        }
        // diagonal from the closed form too, so mismatches surface
        for (i, p) in packets.iter().enumerate() {
            g[(i, i)] = overlap(p, p)?;
        }
        Ok(Self(g))
    }

    /// The Gram matrix of `n` mutually orthogonal packets.
    pub fn identity(n: usize) -> Self {
        Self(DMatrix::identity(n, n))
    }

    pub fn order(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.0
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        let n = self.order();
        (0..n).all(|i| (0..n).all(|j| (self.0[(i, j)] - self.0[(j, i)].conj()).norm() <= tol))
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.0.clone().symmetric_eigenvalues().iter().cloned().fold(f64::INFINITY, f64::min)
    }

    pub fn permanent(&self) -> Result<Complex64> {
        permanent::permanent(&self.0)
    }
}

/// Tolerance on the imaginary part of `perm(G)` relative to its modulus.
const PERMANENT_IMAG_TOLERANCE: f64 = 1e-10;

/// `perm(G)` of a Gram matrix as a real number, checked to be real and
/// non-negative up to rounding.
pub fn real_permanent(g: &GramMatrix) -> Result<f64> {
    let p = g.permanent()?;
    let scale = p.norm().max(1.0);
    if p.im.abs() > PERMANENT_IMAG_TOLERANCE * scale {
        return Err(Error::Numerical(format!("permanent of a Gram matrix has imaginary part {:e}", p.im)));
    }
    if p.re < -PERMANENT_IMAG_TOLERANCE * scale {
        return Err(Error::Numerical(format!("permanent of a Gram matrix is negative ({:e})", p.re)));
    }
    Ok(p.re.max(0.0))
}

/// Normalization `√perm(G)` of the symmetrized state `α_n† … α_1†|0⟩`.
pub fn nboson_norm(packets: &[WavePacket]) -> Result<f64> {
    Ok(real_permanent(&GramMatrix::new(packets)?)?.sqrt())
}
