use bosonlab::holes::{dual_coherent_residual, dual_coherent_residual_bound, dual_displaced_bec, HoleState};
use bosonlab::Complex64;
use clap::Args;
use serde_json::json;

use crate::output::{Column, Run, Table};
use crate::{alpha_json, parse_alpha, Failure, OutArgs, Outcome};

#[derive(Args)]
pub struct HolesArgs {
    /// Complex amplitude; the state is an eigenstate of a† with eigenvalue α*.
    #[arg(long, value_parser = parse_alpha, allow_hyphen_values = true)]
    alpha: Complex64,
    /// Condensate occupancy.
    #[arg(long)]
    nf: usize,
    /// Occupancies for the eigen-residual table.
    #[arg(long, value_delimiter = ',', default_value = "8,16,32,64")]
    sweep: Vec<usize>,
    /// Largest Poisson weight allowed beyond j = n_f.
    #[arg(long, default_value_t = 1e-12)]
    tolerance: f64,
    #[command(flatten)]
    out: OutArgs,
}

pub fn run(a: &HolesArgs) -> Outcome {
    if a.nf < 1 {
        return Err(Failure::Usage("--nf must be at least 1".into()));
    }
    let params = json!({
        "alpha": alpha_json(a.alpha),
        "nf": a.nf,
        "sweep": a.sweep,
        "tolerance": a.tolerance,
    });
    let state = dual_displaced_bec(a.alpha, a.nf, a.tolerance)?;
    // drop rows that carry no weight so that α = 0 is the single BEC row
    let c = state.coefficients();
    let rows: Vec<usize> = (0..c.len()).filter(|&j| c[j] != Complex64::new(0.0, 0.0)).collect();
    let coefficients = Table::new(
        "holes_coefficients",
        vec![
            Column::new("j", rows.iter().copied()),
            Column::new("particles", rows.iter().map(|j| a.nf - j)),
            Column::new("re", rows.iter().map(|&j| c[j].re)),
            Column::new("im", rows.iter().map(|&j| c[j].im)),
            Column::new("probability", rows.iter().map(|&j| c[j].norm_sqr())),
        ],
    );

    let mut residuals = Vec::with_capacity(a.sweep.len());
    for &n_f in &a.sweep {
        residuals.push((n_f, dual_coherent_residual(a.alpha, n_f)?, dual_coherent_residual_bound(a.alpha, n_f)));
    }
    let residual = Table::new(
        "holes_residual",
        vec![
            Column::new("nf", residuals.iter().map(|r| r.0)),
            Column::new("residual", residuals.iter().map(|r| r.1)),
            Column::new("bound", residuals.iter().map(|r| r.2)),
        ],
    );

    let bec = HoleState::bec(a.nf)?;
    let killed = bec.create();
    let summary = Table::new(
        "holes_summary",
        vec![
            Column::new("quantity", ["hole_number_expectation", "creation_on_bec_norm", "state_norm"]),
            Column::new("value", [state.hole_number_expectation()?, killed.state.norm(), state.norm()]),
        ],
    )
    .with("creation_on_bec_constrained", killed.constrained);

    let mut run = Run::new(&a.out.out, "holes", params, None)?;
    run.write(&coefficients)?;
    run.write(&residual)?;
    run.write(&summary)?;
    Ok(run.finish()?)
}
