//! Matrix permanents.
//!
//! `perm(M) = Σ_σ Π_i M_{i,σ(i)}` has `n!` terms. The brute-force sum is kept
//! as the reference; production code goes through Ryser's inclusion-exclusion
//! formula in the centred (Nijenhuis–Wilf) form, walking the column subsets
//! in Gray-code order so that each step updates the row sums by one column.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

pub const BRUTE_FORCE_MAX: usize = 10;
pub const RYSER_MAX: usize = 30;

/// Orders at or below this go through the brute-force sum in [`permanent`].
const DIRECT_MAX: usize = 3;

fn check_square(m: &DMatrix<Complex64>) -> Result<usize> {
    if m.nrows() != m.ncols() {
        return Err(Error::NotSquare { rows: m.nrows(), cols: m.ncols() });
    }
    Ok(m.nrows())
}

/// Sum over all `n!` permutations.
pub fn permanent_bruteforce(m: &DMatrix<Complex64>) -> Result<Complex64> {
    let n = check_square(m)?;
    if n > BRUTE_FORCE_MAX {
        return Err(Error::TooLarge { n, bound: BRUTE_FORCE_MAX, method: "brute-force permanent" });
    }
    fn expand(m: &DMatrix<Complex64>, row: usize, used: u32, prefix: Complex64) -> Complex64 {
        let n = m.nrows();
        if row == n {
            return prefix;
        }
        let mut sum = Complex64::new(0.0, 0.0);
        for col in 0..n {
            if used & (1 << col) == 0 {
                sum += expand(m, row + 1, used | (1 << col), prefix * m[(row, col)]);
            }
        }
        sum
    }
    Ok(expand(m, 0, 0, Complex64::new(1.0, 0.0)))
}

/// Ryser's formula, `O(2^{n−1} n)`.
///
/// With `x_i = M_{i,n−1} − ½ Σ_j M_{ij}`,
/// `perm(M) = 2 (−1)^{n−1} Σ_{S ⊆ {0..n−2}} (−1)^{|S|} Π_i (x_i + Σ_{j∈S} M_{ij})`.
pub fn permanent_ryser(m: &DMatrix<Complex64>) -> Result<Complex64> {
    let n = check_square(m)?;
    if n > RYSER_MAX {
        return Err(Error::TooLarge { n, bound: RYSER_MAX, method: "Ryser permanent" });
    }
    if n == 0 {
        return Ok(Complex64::new(1.0, 0.0));
    }
    let mut sums: Vec<Complex64> = (0..n).map(|i| m[(i, n - 1)] - m.row(i).sum() * 0.5).collect();
    let mut total: Complex64 = sums.iter().product();
    let mut gray: u64 = 0;
    for k in 1u64..(1u64 << (n - 1)) {
        let col = k.trailing_zeros() as usize;
        gray ^= 1 << col;
        let column = m.column(col);
        if gray & (1 << col) != 0 {
            sums.iter_mut().zip(column.iter()).for_each(|(s, c)| *s += c);
        } else {
            sums.iter_mut().zip(column.iter()).for_each(|(s, c)| *s -= c);
        }
        let term: Complex64 = sums.iter().product();
        if gray.count_ones().is_multiple_of(2) {
            total += term;
        } else {
            total -= term;
        }
    }
    let sign = if n % 2 == 1 { 2.0 } else { -2.0 };
    Ok(total * sign)
}

/// Permanent by the cheapest exact route for the order.
pub fn permanent(m: &DMatrix<Complex64>) -> Result<Complex64> {
    let n = check_square(m)?;
    if n <= DIRECT_MAX {
        permanent_bruteforce(m)
    } else {
        permanent_ryser(m)
    }
}

/// `m` with the listed rows and columns deleted. Indices must be sorted
/// and distinct.
pub fn minor(m: &DMatrix<Complex64>, rows: &[usize], cols: &[usize]) -> DMatrix<Complex64> {
    let keep_rows: Vec<usize> = (0..m.nrows()).filter(|r| !rows.contains(r)).collect();
    let keep_cols: Vec<usize> = (0..m.ncols()).filter(|c| !cols.contains(c)).collect();
    DMatrix::from_fn(keep_rows.len(), keep_cols.len(), |i, j| m[(keep_rows[i], keep_cols[j])])
}
