use bosonlab::truncation::truncation_fidelity;
use bosonlab::{poisson, Complex64};
use clap::Args;
use serde_json::json;

use crate::output::{Column, Run, Table};
use crate::{alpha_json, parse_alpha, Failure, OutArgs, Outcome};

#[derive(Args)]
pub struct TruncateArgs {
    #[arg(long, value_parser = parse_alpha, allow_hyphen_values = true)]
    alpha: Complex64,
    /// Cutoffs n_f, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    nf: Vec<usize>,
    #[command(flatten)]
    out: OutArgs,
}

pub fn run(a: &TruncateArgs) -> Outcome {
    if a.nf.is_empty() {
        return Err(Failure::Usage("--nf needs at least one cutoff".into()));
    }
    let params = json!({ "alpha": alpha_json(a.alpha), "nf": a.nf });
    let rate = a.alpha.norm_sqr();
    let mut fidelity = Vec::with_capacity(a.nf.len());
    for &n_f in &a.nf {
        fidelity.push(truncation_fidelity(a.alpha, n_f)?);
    }
    let tails: Vec<f64> = a.nf.iter().map(|&n_f| poisson::tail(rate, n_f + 1)).collect();
    let table = Table::new(
        "truncate",
        vec![
            Column::new("nf", a.nf.iter().copied()),
            Column::new("fidelity", fidelity.iter().copied()),
            Column::new("deficit", fidelity.iter().map(|f| 1.0 - f)),
            Column::new("poisson_tail", tails.iter().copied()),
            Column::new("difference", fidelity.iter().zip(&tails).map(|(f, t)| (1.0 - f) - t)),
        ],
    );
    let mut run = Run::new(&a.out.out, "truncate", params, None)?;
    run.write(&table)?;
    Ok(run.finish()?)
}
