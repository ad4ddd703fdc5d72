use std::f64::consts::PI;

use bosonlab::fock::{
    coherent_truncation_deficit, displaced_vacuum, evolve, phase_space_from_alpha, quadrature_moments, OscillatorParams,
};
use bosonlab::Complex64;
use clap::Args;
use serde_json::json;

use crate::output::{Column, Run, Table};
use crate::{alpha_json, parse_alpha, OutArgs, Outcome};

#[derive(Args)]
pub struct CoherentArgs {
    /// Complex amplitude, e.g. 1, 0.5-1.2i.
    #[arg(long, value_parser = parse_alpha, allow_hyphen_values = true)]
    alpha: Complex64,
    /// Number states kept (0..dim).
    #[arg(long, default_value_t = 32)]
    dim: usize,
    #[arg(long, default_value_t = 1.0)]
    mass: f64,
    #[arg(long, default_value_t = 1.0)]
    omega: f64,
    /// Trajectory samples over one period.
    #[arg(long, default_value_t = 64)]
    steps: usize,
    /// Largest Poisson weight allowed beyond the cutoff.
    #[arg(long, default_value_t = 1e-12)]
    tolerance: f64,
    #[command(flatten)]
    out: OutArgs,
}

pub fn run(a: &CoherentArgs) -> Outcome {
    let base = OscillatorParams::at_rest(a.mass, a.omega)?;
    if a.steps == 0 {
        return Err(crate::Failure::Usage("--steps must be at least 1".into()));
    }
    let params = json!({
        "alpha": alpha_json(a.alpha),
        "dim": a.dim,
        "mass": a.mass,
        "omega": a.omega,
        "steps": a.steps,
        "tolerance": a.tolerance,
    });
    let state = displaced_vacuum(a.alpha, a.dim, a.tolerance)?;
    let osc = base.with_alpha(a.alpha);
    let (x0, p0) = phase_space_from_alpha(a.alpha, a.mass, a.omega);

    let c = state.coefficients();
    let coefficients = Table::new(
        "coherent_coefficients",
        vec![
            Column::new("n", 0..c.len()),
            Column::new("re", c.iter().map(|z| z.re)),
            Column::new("im", c.iter().map(|z| z.im)),
            Column::new("probability", c.iter().map(|z| z.norm_sqr())),
        ],
    )
    .with("truncation_deficit", coherent_truncation_deficit(a.alpha, a.dim))
    .with("mean_occupation", state.mean_occupation());

    let period = 2.0 * PI / a.omega;
    let mut cols: [Vec<f64>; 8] = Default::default();
    for i in 0..=a.steps {
        let t = period * i as f64 / a.steps as f64;
        let m = quadrature_moments(&evolve(&state, &osc, t)?, &osc)?;
        let (xc, pc) = osc.classical_trajectory(t);
        for (col, v) in cols.iter_mut().zip([t, m.mean_x, m.mean_p, m.var_x, m.var_p, m.uncertainty_product(), xc, pc]) {
            col.push(v);
        }
    }
    let [t, mx, mp, vx, vp, up, xc, pc] = cols;
    let trajectory = Table::new(
        "coherent_trajectory",
        vec![
            Column::new("t", t),
            Column::new("mean_x", mx),
            Column::new("mean_p", mp),
            Column::new("var_x", vx),
            Column::new("var_p", vp),
            Column::new("uncertainty_product", up),
            Column::new("classical_x", xc),
            Column::new("classical_p", pc),
        ],
    )
    .with("x0", x0)
    .with("p0", p0);

    let mut run = Run::new(&a.out.out, "coherent", params, None)?;
    run.write(&coefficients)?;
    run.write(&trajectory)?;
    Ok(run.finish()?)
}
