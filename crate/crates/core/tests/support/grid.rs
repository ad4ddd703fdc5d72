//! Brute-force momentum densities of a symmetrized product state on a 1-D
//! grid, for checking the permanent-based observables.

#![allow(dead_code)]

use bosonlab::wavepacket::WavePacket;
use bosonlab::Complex64;

pub struct GridOracle {
    pub h: f64,
    pub k: Vec<f64>,
    n: usize,
    phi: Vec<Vec<Complex64>>,
    perms: Vec<Vec<usize>>,
    norm: f64,
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

impl GridOracle {
    /// Trapezoid grid `−half_width..=half_width` with spacing `h`.
    pub fn new(packets: &[WavePacket], half_width: f64, h: f64) -> Self {
        let m = (half_width / h).round() as i64;
        let k: Vec<f64> = (-m..=m).map(|i| i as f64 * h).collect();
        let phi = packets.iter().map(|p| k.iter().map(|&x| p.amplitude(&[x])).collect()).collect();
        let n = packets.len();
        let mut oracle = Self { h, k, n, phi, perms: permutations(n), norm: 0.0 };
        oracle.norm = (0..oracle.k.len()).map(|a| oracle.marginal(&[a])).sum::<f64>() * h;
        oracle
    }

    fn psi(&self, idx: &[usize]) -> Complex64 {
        self.perms
            .iter()
            .map(|p| p.iter().zip(idx).map(|(&i, &x)| self.phi[i][x]).product::<Complex64>())
            .sum()
    }

    /// `∫|Ψ(k_fixed, rest)|² d rest` with the leading coordinates pinned.
    fn marginal(&self, fixed: &[usize]) -> f64 {
        if fixed.len() == self.n {
            return self.psi(fixed).norm_sqr();
        }
        let mut idx = fixed.to_vec();
        idx.push(0);
        let last = idx.len() - 1;
        let mut sum = 0.0;
        for a in 0..self.k.len() {
            idx[last] = a;
            sum += self.marginal(&idx);
        }
        sum * self.h
    }

    /// `∫|Ψ|²` over all coordinates.
    pub fn norm(&self) -> f64 {
        self.norm
    }

    /// One-body density at grid index `a`, normalized to `n`.
    pub fn one_body(&self, a: usize) -> f64 {
        self.n as f64 * self.marginal(&[a]) / self.norm
    }

    /// Two-body density at grid indices `(a, b)`, normalized to `n(n − 1)`.
    pub fn two_body(&self, a: usize, b: usize) -> f64 {
        (self.n * (self.n - 1)) as f64 * self.marginal(&[a, b]) / self.norm
    }

    pub fn index_of(&self, k: f64) -> usize {
        ((k - self.k[0]) / self.h).round() as usize
    }
}
