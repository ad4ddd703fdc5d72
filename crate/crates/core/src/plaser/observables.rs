//! Momentum-space one- and two-body densities of symmetrized events.
//!
//! For the normalized state `|ψ⟩ ∝ α_n† … α_1†|0⟩` with Gram matrix `G`,
//!
//! ```text
//! N₁(k)     = Σ_ij φ_i*(k) φ_j(k) perm(G without row i, col j) / perm(G)
//! N₂(k₁,k₂) = Σ φ_i*(k₁) φ_i'*(k₂) φ_j(k₁) φ_j'(k₂)
//!               · perm(G without rows i,i', cols j,j') / perm(G)
//! ```
//!
//! the second sum running over ordered pairs `i ≠ i'`, `j ≠ j'`. Grouping the
//! pairs gives a Hermitian form `A† P A` with
//! `A_{jj'} = φ_j(k₁)φ_j'(k₂) + φ_j'(k₁)φ_j(k₂)`. The minors' permanents do
//! not depend on `k` and are computed once per event.
//!
//! Ensemble averages weight each event by `perm(G)`, which cancels the
//! denominators above. With symmetrization switched off the packets are
//! distinguishable and the densities are plain sums of `|φ_i|²` products.
//! Correlations at fixed `n` compare per-pair and per-particle densities,
//! `C₂ = [N₂/(n(n−1))] / [(N₁(k₁)/n)(N₁(k₂)/n)]`, so that uncorrelated
//! emission gives 1.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use super::{Ensemble, Event, ModelConfig};
use crate::error::{Error, Result};
use crate::permanent::{minor, permanent};
use crate::stats::{jackknife, Estimate};

/// One-body densities below this are treated as zero when forming `C₂`.
pub const N1_FLOOR: f64 = 1e-12;

/// Largest multiplicity for momentum-space observables.
pub const MAX_OBSERVABLE_MULTIPLICITY: usize = 8;

/// Jackknife blocks used for error bars.
const BLOCKS: usize = 20;

struct Kernel {
    symmetrized: bool,
    one: DMatrix<Complex64>,
    pairs: Vec<(usize, usize)>,
    two: DMatrix<Complex64>,
}

impl Kernel {
    fn new(event: &Event, two_body: bool) -> Result<Self> {
        let g = event.gram.matrix();
        let n = g.nrows();
        if !event.symmetrized {
            return Ok(Self { symmetrized: false, one: DMatrix::zeros(0, 0), pairs: Vec::new(), two: DMatrix::zeros(0, 0) });
        }
        let mut one = DMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                one[(i, j)] = permanent(&minor(g, &[i], &[j]))?;
            }
        }
        let pairs: Vec<(usize, usize)> = if two_body {
            (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect()
        } else {
            Vec::new()
        };
        let mut two = DMatrix::zeros(pairs.len(), pairs.len());
        for (p, &(i, i2)) in pairs.iter().enumerate() {
            for (q, &(j, j2)) in pairs.iter().enumerate() {
                two[(p, q)] = permanent(&minor(g, &[i, i2], &[j, j2]))?;
            }
        }
        Ok(Self { symmetrized: true, one, pairs, two })
    }

    fn one_body(&self, phi: &[Complex64]) -> f64 {
        if !self.symmetrized {
            return phi.iter().map(|z| z.norm_sqr()).sum();
        }
        let n = phi.len();
        let mut sum = Complex64::new(0.0, 0.0);
        for i in 0..n {
            for j in 0..n {
                sum += phi[i].conj() * phi[j] * self.one[(i, j)];
            }
        }
        sum.re
    }

    fn two_body(&self, phi1: &[Complex64], phi2: &[Complex64]) -> f64 {
        if !self.symmetrized {
            // distinguishable particles: Σ_{i≠j} |φ_i(k₁)|² |φ_j(k₂)|²
            let a: f64 = phi1.iter().map(|z| z.norm_sqr()).sum();
            let b: f64 = phi2.iter().map(|z| z.norm_sqr()).sum();
            let same: f64 = phi1.iter().zip(phi2).map(|(x, y)| x.norm_sqr() * y.norm_sqr()).sum();
            return a * b - same;
        }
        let a: Vec<Complex64> = self.pairs.iter().map(|&(j, k)| phi1[j] * phi2[k] + phi1[k] * phi2[j]).collect();
        let mut sum = Complex64::new(0.0, 0.0);
        for (p, ap) in a.iter().enumerate() {
            for (q, aq) in a.iter().enumerate() {
                sum += ap.conj() * aq * self.two[(p, q)];
            }
        }
        sum.re
    }
}

/// Per-block sums of weights and unnormalized densities on a `k` grid.
#[derive(Clone)]
struct BlockSums {
    weight: f64,
    one: Vec<f64>,
    /// Row-major `K × K`; filled only when two-body sums were requested.
    two: Vec<f64>,
}

impl BlockSums {
    fn zero(points: usize, two_body: bool) -> Self {
        Self { weight: 0.0, one: vec![0.0; points], two: vec![0.0; if two_body { points * points } else { 0 }] }
    }

    fn add(&mut self, other: &BlockSums) {
        self.weight += other.weight;
        self.one.iter_mut().zip(&other.one).for_each(|(a, b)| *a += b);
        self.two.iter_mut().zip(&other.two).for_each(|(a, b)| *a += b);
    }

    fn sub(&mut self, other: &BlockSums) {
        self.weight -= other.weight;
        self.one.iter_mut().zip(&other.one).for_each(|(a, b)| *a -= b);
        self.two.iter_mut().zip(&other.two).for_each(|(a, b)| *a -= b);
    }
}

fn check_grid(ensemble: &Ensemble, k_grid: &[Vec<f64>]) -> Result<()> {
    if k_grid.is_empty() {
        return Err(Error::InvalidParameter { name: "k_grid", reason: "empty".into() });
    }
    if ensemble.events.is_empty() {
        return Err(Error::InvalidParameter { name: "ensemble", reason: "no events".into() });
    }
    if ensemble.n > MAX_OBSERVABLE_MULTIPLICITY {
        return Err(Error::TooLarge { n: ensemble.n, bound: MAX_OBSERVABLE_MULTIPLICITY, method: "momentum-space observable" });
    }
    let d = ensemble.events[0].packets[0].dim();
    if k_grid.iter().any(|k| k.len() != d) {
        return Err(Error::InvalidParameter { name: "k_grid", reason: format!("points must have dimension {d}") });
    }
    Ok(())
}

fn event_sums(event: &Event, k_grid: &[Vec<f64>], two_body: bool) -> Result<BlockSums> {
    let kernel = Kernel::new(event, two_body)?;
    let phis: Vec<Vec<Complex64>> =
        k_grid.iter().map(|k| event.packets.iter().map(|p| p.amplitude(k)).collect()).collect();
    let points = k_grid.len();
    let mut sums = BlockSums::zero(points, two_body);
    sums.weight = event.weight;
    for (a, phi) in phis.iter().enumerate() {
        sums.one[a] = kernel.one_body(phi);
    }
    if two_body {
        for a in 0..points {
            for b in a..points {
                let v = kernel.two_body(&phis[a], &phis[b]);
                sums.two[a * points + b] = v;
                sums.two[b * points + a] = v;
            }
        }
    }
    Ok(sums)
}

fn block_sums(ensemble: &Ensemble, k_grid: &[Vec<f64>], two_body: bool) -> Result<Vec<BlockSums>> {
    let events = &ensemble.events;
    let blocks = BLOCKS.min(events.len());
    let block = |b: usize| -> Result<BlockSums> {
        let (lo, hi) = (b * events.len() / blocks, (b + 1) * events.len() / blocks);
        let mut acc = BlockSums::zero(k_grid.len(), two_body);
        for e in &events[lo..hi] {
            acc.add(&event_sums(e, k_grid, two_body)?);
        }
        Ok(acc)
    };
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (0..blocks).into_par_iter().map(block).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..blocks).map(block).collect()
    }
}

/// Totals, and totals with each block left out in turn.
fn leave_one_out(blocks: &[BlockSums]) -> (BlockSums, Vec<BlockSums>) {
    let mut total = BlockSums::zero(blocks[0].one.len(), !blocks[0].two.is_empty());
    blocks.iter().for_each(|b| total.add(b));
    let partial = blocks
        .iter()
        .map(|b| {
            let mut t = total.clone();
            t.sub(b);
            t
        })
        .collect();
    (total, partial)
}

fn pick<'a>(total: &'a BlockSums, partial: &'a [BlockSums], skip: Option<usize>) -> &'a BlockSums {
    match skip {
        None => total,
        Some(b) => &partial[b],
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Spectrum {
    pub k: Vec<Vec<f64>>,
    /// `⟨N₁(k)⟩`, normalized to the multiplicity.
    pub density: Vec<Estimate>,
}

/// Ensemble-averaged one-body momentum density on `k_grid`.
pub fn one_particle_spectrum(ensemble: &Ensemble, k_grid: &[Vec<f64>]) -> Result<Spectrum> {
    check_grid(ensemble, k_grid)?;
    let blocks = block_sums(ensemble, k_grid, false)?;
    let (total, partial) = leave_one_out(&blocks);
    let density = (0..k_grid.len())
        .map(|a| {
            jackknife(blocks.len(), |skip| {
                let s = pick(&total, &partial, skip);
                s.one[a] / s.weight
            })
        })
        .collect();
    Ok(Spectrum { k: k_grid.to_vec(), density })
}

/// `C₂` on every pair of a `k` grid, from one pass over the ensemble.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorrelationGrid {
    pub k: Vec<Vec<f64>>,
    pub one_body: Vec<Estimate>,
    /// Row-major `K × K`.
    pub c2: Vec<Estimate>,
}

impl CorrelationGrid {
    pub fn compute(ensemble: &Ensemble, k_grid: &[Vec<f64>]) -> Result<Self> {
        check_grid(ensemble, k_grid)?;
        let n = ensemble.n;
        if n < 2 {
            return Err(Error::InvalidParameter { name: "n", reason: "two-particle correlations need n ≥ 2".into() });
        }
        let blocks = block_sums(ensemble, k_grid, true)?;
        let (total, partial) = leave_one_out(&blocks);
        let points = k_grid.len();
        for a in 0..points {
            let value = total.one[a] / total.weight;
            if !(value >= N1_FLOOR) {
                return Err(Error::UndefinedRatio { k: k_grid[a].clone(), value, floor: N1_FLOOR });
            }
        }
        let pair_norm = n as f64 / (n - 1) as f64;
        let one_body = (0..points)
            .map(|a| jackknife(blocks.len(), |skip| {
                let s = pick(&total, &partial, skip);
                s.one[a] / s.weight
            }))
            .collect();
        let c2 = (0..points * points)
            .map(|ab| {
                let (a, b) = (ab / points, ab % points);
                jackknife(blocks.len(), |skip| {
                    let s = pick(&total, &partial, skip);
                    pair_norm * s.two[ab] * s.weight / (s.one[a] * s.one[b])
                })
            })
            .collect();
        Ok(Self { k: k_grid.to_vec(), one_body, c2 })
    }

    pub fn at(&self, a: usize, b: usize) -> Estimate {
        self.c2[a * self.k.len() + b]
    }

    /// `max |C₂ − 1|` over the grid, with the error bar at the maximizer.
    pub fn max_deviation(&self) -> Estimate {
        self.c2
            .iter()
            .map(|e| Estimate { value: (e.value - 1.0).abs(), std_error: e.std_error })
            .fold(Estimate::exact(0.0), |best, e| if e.value > best.value { e } else { best })
    }
}

/// Fixed-`n` `C₂(k₁, k₂)` of an ensemble.
pub fn two_particle_correlation(ensemble: &Ensemble, k1: &[f64], k2: &[f64]) -> Result<Estimate> {
    let grid = CorrelationGrid::compute(ensemble, &[k1.to_vec(), k2.to_vec()])?;
    Ok(grid.at(0, 1))
}

/// Inclusive `C₂ = Σ_n p_n⟨N₂⟩_n / (Σ_n p_n⟨N₁(k₁)⟩_n · Σ_n p_n⟨N₁(k₂)⟩_n)`
/// over multiplicity strata `(p_n, ensemble_n)`. Strata with `n < 2`
/// contribute to the one-body densities only.
pub fn inclusive_correlation(strata: &[(f64, &Ensemble)], k1: &[f64], k2: &[f64]) -> Result<Estimate> {
    Ok(CorrelationGrid::inclusive(strata, &[k1.to_vec(), k2.to_vec()])?.at(0, 1))
}

impl CorrelationGrid {
    /// Inclusive `C₂` on every pair of a grid; `one_body` holds
    /// `Σ_n p_n⟨N₁⟩_n`. Jackknife blocks are dropped from all strata at once.
    pub fn inclusive(strata: &[(f64, &Ensemble)], k_grid: &[Vec<f64>]) -> Result<Self> {
        if strata.is_empty() {
            return Err(Error::InvalidParameter { name: "strata", reason: "empty".into() });
        }
        let points = k_grid.len();
        let mut per_stratum = Vec::with_capacity(strata.len());
        for (p, ensemble) in strata {
            check_grid(ensemble, k_grid)?;
            let blocks = block_sums(ensemble, k_grid, ensemble.n >= 2)?;
            let count = blocks.len();
            per_stratum.push((*p, leave_one_out(&blocks), count));
        }
        let blocks = per_stratum.iter().map(|s| s.2).min().unwrap_or(1);
        // strata with more blocks than the smallest keep their extra ones
        let view = |skip: Option<usize>| {
            per_stratum.iter().map(move |(p, (total, partial), nb)| {
                let s = match skip {
                    Some(b) if b < *nb => &partial[b],
                    _ => total,
                };
                (*p, s)
            })
        };
        let one = |skip: Option<usize>, a: usize| view(skip).map(|(p, s)| p * s.one[a] / s.weight).sum::<f64>();
        let two = |skip: Option<usize>, ab: usize| {
            view(skip).filter(|(_, s)| !s.two.is_empty()).map(|(p, s)| p * s.two[ab] / s.weight).sum::<f64>()
        };
        for (a, k) in k_grid.iter().enumerate() {
            let value = one(None, a);
            if !(value >= N1_FLOOR) {
                return Err(Error::UndefinedRatio { k: k.clone(), value, floor: N1_FLOOR });
            }
        }
        let one_body = (0..points).map(|a| jackknife(blocks, |skip| one(skip, a))).collect();
        let c2 = (0..points * points)
            .map(|ab| {
                let (a, b) = (ab / points, ab % points);
                jackknife(blocks, |skip| two(skip, ab) / (one(skip, a) * one(skip, b)))
            })
            .collect();
        Ok(Self { k: k_grid.to_vec(), one_body, c2 })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LimitRow {
    pub radius: f64,
    pub temperature: f64,
    pub r2t: f64,
    pub max_deviation: Estimate,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LimitReport {
    pub rows: Vec<LimitRow>,
    /// Each row's `max|C₂ − 1|` is no larger than the previous one's, up to
    /// two combined standard errors.
    pub monotone: bool,
}

/// `max|C₂ − 1|` on `k_grid` along configs of decreasing `R²T`.
pub fn condensed_limit_check(configs: &[ModelConfig], n: usize, samples: usize, k_grid: &[Vec<f64>]) -> Result<LimitReport> {
    if configs.windows(2).any(|w| w[1].r2t() >= w[0].r2t()) {
        return Err(Error::InvalidParameter { name: "configs", reason: "R²T must decrease along the sequence".into() });
    }
    let rows = configs
        .iter()
        .map(|c| {
            let ensemble = Ensemble::sample(c, n, samples)?;
            let grid = CorrelationGrid::compute(&ensemble, k_grid)?;
            Ok(LimitRow { radius: c.radius, temperature: c.temperature, r2t: c.r2t(), max_deviation: grid.max_deviation() })
        })
        .collect::<Result<Vec<_>>>()?;
    let monotone = rows.windows(2).all(|w| {
        let (a, b) = (w[0].max_deviation, w[1].max_deviation);
        b.value <= a.value + 2.0 * a.std_error.hypot(b.std_error)
    });
    Ok(LimitReport { rows, monotone })
}
