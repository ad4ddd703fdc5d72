use std::fs;
use std::path::PathBuf;

use bosonlab::plaser::{
    condensed_limit_check, multiplicity_distribution, normalization_constant, one_particle_spectrum, CorrelationGrid,
    Ensemble, ModelConfig,
};
use bosonlab::poisson;
use bosonlab::stats::Estimate;
use clap::{Args, Subcommand};
use serde_json::{json, Value};

use crate::output::{Column, Run, Table};
use crate::{Failure, OutArgs, Outcome};

#[derive(Subcommand)]
pub enum PlaserCommand {
    /// Normalization constants N(n) = E[perm G].
    Norm {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 6)]
        n_max: usize,
    },
    /// Multiplicity distribution p_n ∝ Poisson(n0)·N(n).
    Mult {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 8)]
        n_max: usize,
    },
    /// One-particle momentum spectrum at fixed multiplicity.
    Spectrum {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[command(flatten)]
        grid: KGrid,
    },
    /// Two-particle correlation C2 on a momentum grid.
    C2 {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[command(flatten)]
        grid: KGrid,
        /// Also compute the multiplicity-inclusive C2 over n = 1..=N.
        #[arg(long, value_name = "N")]
        inclusive: Option<usize>,
    },
    /// max|C2 − 1| along configs with R and T scaled down step by step.
    Limit {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[command(flatten)]
        grid: KGrid,
        /// Number of configs, the first being the one in --config.
        #[arg(long, default_value_t = 5)]
        steps: usize,
        /// Factor applied to both R and T between configs.
        #[arg(long, default_value_t = 0.1)]
        factor: f64,
    },
}

#[derive(Args)]
pub struct Common {
    /// Source config (R, T, m, sigma, n0, t0, d, seed, symmetrization).
    #[arg(long, value_name = "FILE")]
    config: PathBuf,
    /// Events per multiplicity.
    #[arg(long, default_value_t = 20_000)]
    samples: usize,
    #[command(flatten)]
    out: OutArgs,
}

/// Momenta along the first axis; other components are zero in d = 3.
#[derive(Args)]
pub struct KGrid {
    #[arg(long, default_value_t = -2.0, allow_hyphen_values = true)]
    k_min: f64,
    #[arg(long, default_value_t = 2.0, allow_hyphen_values = true)]
    k_max: f64,
    #[arg(long, default_value_t = 9)]
    k_points: usize,
}

impl KGrid {
    fn axis(&self) -> Result<Vec<f64>, Failure> {
        if self.k_points == 0 || !self.k_min.is_finite() || !self.k_max.is_finite() || self.k_max < self.k_min {
            return Err(Failure::Usage("k grid needs k_min ≤ k_max and at least one point".into()));
        }
        if self.k_points == 1 {
            return Ok(vec![self.k_min]);
        }
        let h = (self.k_max - self.k_min) / (self.k_points - 1) as f64;
        Ok((0..self.k_points).map(|i| self.k_min + h * i as f64).collect())
    }

    fn points(&self, dim: usize) -> Result<Vec<Vec<f64>>, Failure> {
        Ok(self
            .axis()?
            .into_iter()
            .map(|k| {
                let mut v = vec![0.0; dim];
                v[0] = k;
                v
            })
            .collect())
    }

    fn json(&self) -> Value {
        json!({ "k_min": self.k_min, "k_max": self.k_max, "k_points": self.k_points })
    }
}

fn load(common: &Common) -> Result<ModelConfig, Failure> {
    let text = fs::read_to_string(&common.config)
        .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", common.config.display())))?;
    ModelConfig::parse(&text).map_err(|e| Failure::Usage(format!("{}: {e}", common.config.display())))
}

fn start(common: &Common, name: &str, config: &ModelConfig, mut extra: Value) -> Result<Run, Failure> {
    let mut params = json!({
        "config_file": common.config.display().to_string(),
        "config": config,
        "samples": common.samples,
    });
    if let (Some(p), Some(e)) = (params.as_object_mut(), extra.as_object_mut()) {
        p.append(e);
    }
    Ok(Run::new(&common.out.out, &format!("plaser {name}"), params, Some(config.seed))?)
}

fn values(e: &[Estimate]) -> impl Iterator<Item = f64> + '_ {
    e.iter().map(|x| x.value)
}

fn errors(e: &[Estimate]) -> impl Iterator<Item = f64> + '_ {
    e.iter().map(|x| x.std_error)
}

fn grid_table(name: &'static str, k: &[f64], grid: &CorrelationGrid) -> Table {
    let pairs: Vec<(usize, usize)> = (0..k.len()).flat_map(|a| (0..k.len()).map(move |b| (a, b))).collect();
    Table::new(
        name,
        vec![
            Column::new("k1", pairs.iter().map(|&(a, _)| k[a])),
            Column::new("k2", pairs.iter().map(|&(_, b)| k[b])),
            Column::new("c2", pairs.iter().map(|&(a, b)| grid.at(a, b).value)),
            Column::new("c2_error", pairs.iter().map(|&(a, b)| grid.at(a, b).std_error)),
        ],
    )
}

pub fn run(cmd: &PlaserCommand) -> Outcome {
    match cmd {
        PlaserCommand::Norm { common, n_max } => {
            let config = load(common)?;
            let mut run = start(common, "norm", &config, json!({ "n_max": n_max }))?;
            let norms = (0..=*n_max)
                .map(|n| normalization_constant(&config, n, common.samples))
                .collect::<Result<Vec<_>, _>>()?;
            run.write(&Table::new(
                "plaser_norm",
                vec![
                    Column::new("n", 0..=*n_max),
                    Column::new("normalization", values(&norms)),
                    Column::new("normalization_error", errors(&norms)),
                ],
            ))?;
            Ok(run.finish()?)
        }
        PlaserCommand::Mult { common, n_max } => {
            let config = load(common)?;
            let mut run = start(common, "mult", &config, json!({ "n_max": n_max }))?;
            let dist = multiplicity_distribution(&config, *n_max, common.samples)?;
            let cdf = poisson::cdf(config.n0, *n_max);
            run.write(
                &Table::new(
                    "plaser_mult",
                    vec![
                        Column::new("n", 0..=*n_max),
                        Column::new("probability", values(&dist.probabilities)),
                        Column::new("probability_error", errors(&dist.probabilities)),
                        Column::new("poisson", (0..=*n_max).map(|n| poisson::pmf(config.n0, n) / cdf)),
                        Column::new("normalization", values(&dist.normalizations)),
                        Column::new("normalization_error", errors(&dist.normalizations)),
                    ],
                )
                .with("mean", dist.mean.value)
                .with("mean_error", dist.mean.std_error),
            )?;
            Ok(run.finish()?)
        }
        PlaserCommand::Spectrum { common, n, grid } => {
            let config = load(common)?;
            let mut run = start(common, "spectrum", &config, json!({ "n": n, "k_grid": grid.json() }))?;
            let ensemble = Ensemble::sample(&config, *n, common.samples)?;
            let spectrum = one_particle_spectrum(&ensemble, &grid.points(config.dim)?)?;
            run.write(&Table::new(
                "plaser_spectrum",
                vec![
                    Column::new("k", grid.axis()?),
                    Column::new("density", values(&spectrum.density)),
                    Column::new("density_error", errors(&spectrum.density)),
                ],
            ))?;
            Ok(run.finish()?)
        }
        PlaserCommand::C2 { common, n, grid, inclusive } => {
            let config = load(common)?;
            let extra = json!({ "n": n, "k_grid": grid.json(), "inclusive_n_max": inclusive });
            let mut run = start(common, "c2", &config, extra)?;
            let k = grid.axis()?;
            let points = grid.points(config.dim)?;
            let ensemble = Ensemble::sample(&config, *n, common.samples)?;
            let fixed = CorrelationGrid::compute(&ensemble, &points)?;
            run.write(&grid_table("plaser_c2", &k, &fixed).with("mode", "fixed-n"))?;
            if let Some(n_max) = *inclusive {
                if n_max < 2 {
                    return Err(Failure::Usage("--inclusive needs N ≥ 2".into()));
                }
                let dist = multiplicity_distribution(&config, n_max, common.samples)?;
                let strata = (1..=n_max)
                    .map(|m| Ensemble::sample(&config, m, common.samples))
                    .collect::<Result<Vec<_>, _>>()?;
                let weighted: Vec<(f64, &Ensemble)> =
                    strata.iter().map(|e| (dist.probabilities[e.n].value, e)).collect();
                let incl = CorrelationGrid::inclusive(&weighted, &points)?;
                run.write(
                    &grid_table("plaser_c2_inclusive", &k, &incl)
                        .with("mode", "inclusive")
                        .with("probabilities", values(&dist.probabilities).collect::<Vec<_>>()),
                )?;
            }
            Ok(run.finish()?)
        }
        PlaserCommand::Limit { common, n, grid, steps, factor } => {
            let config = load(common)?;
            if !(*factor > 0.0 && *factor < 1.0) || *steps == 0 {
                return Err(Failure::Usage("--factor must lie in (0, 1) and --steps be positive".into()));
            }
            let extra = json!({ "n": n, "k_grid": grid.json(), "steps": steps, "factor": factor });
            let mut run = start(common, "limit", &config, extra)?;
            let configs: Vec<ModelConfig> = (0..*steps)
                .map(|i| {
                    let s = factor.powi(i as i32);
                    ModelConfig { radius: config.radius * s, temperature: config.temperature * s, ..config.clone() }
                })
                .collect();
            let report = condensed_limit_check(&configs, *n, common.samples, &grid.points(config.dim)?)?;
            let dev: Vec<Estimate> = report.rows.iter().map(|r| r.max_deviation).collect();
            run.write(
                &Table::new(
                    "plaser_limit",
                    vec![
                        Column::new("step", 0..*steps),
                        Column::new("R", report.rows.iter().map(|r| r.radius)),
                        Column::new("T", report.rows.iter().map(|r| r.temperature)),
                        Column::new("r2t", report.rows.iter().map(|r| r.r2t)),
                        Column::new("max_deviation", values(&dev)),
                        Column::new("max_deviation_error", errors(&dev)),
                    ],
                )
                .with("monotone", report.monotone),
            )?;
            Ok(run.finish()?)
        }
    }
}
