//! wasm-bindgen exports for `www/index.html`. Every export returns a flat
//! `Float64Array`; the layout is given on each function.

use bosonlab::fock::{coordinate_wavefunction, OscillatorParams};
use bosonlab::holes::{dual_coherent_residual, dual_coherent_residual_bound};
use bosonlab::truncation::truncation_fidelity;
use bosonlab::{poisson, Complex64};
use wasm_bindgen::prelude::*;

/// Largest `n_f` the page may ask for.
pub const MAX_NF: usize = 120;

fn alpha(re: f64, im: f64) -> Result<Complex64, String> {
    let a = Complex64::new(re, im);
    if a.is_finite() {
        Ok(a)
    } else {
        Err("alpha must be finite".into())
    }
}

fn check_nf(nf_max: usize) -> Result<(), String> {
    if nf_max == 0 || nf_max > MAX_NF {
        return Err(format!("n_f must lie in 1..={MAX_NF}"));
    }
    Ok(())
}

/// `|⟨x|α e^{−iωt}⟩|²` and the real part of the amplitude at `points`
/// positions in `[x_min, x_max]`, as `[x, density, re ψ]` triples.
#[allow(clippy::too_many_arguments)]
pub fn coherent_density(
    re: f64,
    im: f64,
    mass: f64,
    omega: f64,
    t: f64,
    x_min: f64,
    x_max: f64,
    points: usize,
) -> Result<Vec<f64>, String> {
    let a = alpha(re, im)? * Complex64::from_polar(1.0, -omega * t);
    let osc = OscillatorParams::at_rest(mass, omega).map_err(|e| e.to_string())?;
    if points < 2 || !(x_max > x_min) {
        return Err("need at least two points and x_max > x_min".into());
    }
    let h = (x_max - x_min) / (points - 1) as f64;
    let mut out = Vec::with_capacity(3 * points);
    for i in 0..points {
        let x = x_min + h * i as f64;
        // the zero-point phase e^{−iωt/2} is common to every x
        let psi = coordinate_wavefunction(a, &osc, x) * Complex64::from_polar(1.0, -omega * t / 2.0);
        out.extend([x, psi.norm_sqr(), psi.re]);
    }
    Ok(out)
}

/// `[n_f, residual, bound]` for `n_f = 1..=nf_max`.
pub fn hole_residuals(re: f64, im: f64, nf_max: usize) -> Result<Vec<f64>, String> {
    let a = alpha(re, im)?;
    check_nf(nf_max)?;
    let mut out = Vec::with_capacity(3 * nf_max);
    for n_f in 1..=nf_max {
        let r = dual_coherent_residual(a, n_f).map_err(|e| e.to_string())?;
        out.extend([n_f as f64, r, dual_coherent_residual_bound(a, n_f)]);
    }
    Ok(out)
}

/// `[n_f, fidelity, Poisson CDF]` for `n_f = 0..=nf_max`.
pub fn fidelity_curve(re: f64, im: f64, nf_max: usize) -> Result<Vec<f64>, String> {
    let a = alpha(re, im)?;
    check_nf(nf_max)?;
    let mut out = Vec::with_capacity(3 * (nf_max + 1));
    for n_f in 0..=nf_max {
        let f = truncation_fidelity(a, n_f).map_err(|e| e.to_string())?;
        out.extend([n_f as f64, f, poisson::cdf(a.norm_sqr(), n_f)]);
    }
    Ok(out)
}

#[wasm_bindgen(js_name = coherentDensity)]
#[allow(clippy::too_many_arguments)]
pub fn coherent_density_js(
    re: f64,
    im: f64,
    mass: f64,
    omega: f64,
    t: f64,
    x_min: f64,
    x_max: f64,
    points: usize,
) -> Result<Vec<f64>, JsError> {
    coherent_density(re, im, mass, omega, t, x_min, x_max, points).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = holeResiduals)]
pub fn hole_residuals_js(re: f64, im: f64, nf_max: usize) -> Result<Vec<f64>, JsError> {
    hole_residuals(re, im, nf_max).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = fidelityCurve)]
pub fn fidelity_curve_js(re: f64, im: f64, nf_max: usize) -> Result<Vec<f64>, JsError> {
    fidelity_curve(re, im, nf_max).map_err(|e| JsError::new(&e))
}
