//! Kernel computations for small exact matrices.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::graded_poly::CoefficientMode;

/// Integer basis of `{x : Σ_j x_j · columns[j] = 0}`. Over the integers the
/// basis spans the rational kernel; over Z/2 it is a GF(2) basis.
pub fn kernel(columns: &[Vec<BigInt>], mode: CoefficientMode) -> Vec<Vec<BigInt>> {
    let n = columns.len();
    if n == 0 {
        return Vec::new();
    }
    let rows = columns.iter().map(Vec::len).max().unwrap_or(0);
    // Row-major copy, fraction-free elimination (Bareiss-style row ops with
    // gcd reduction keeps entries small at desk scale).
    let mut a: Vec<Vec<BigInt>> = (0..rows)
        .map(|i| {
            (0..n)
                .map(|j| reduce(columns[j].get(i).cloned().unwrap_or_default(), mode))
                .collect()
        })
        .collect();

    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut row = 0;
    for col in 0..n {
        let Some(p) = (row..rows).find(|&i| !a[i][col].is_zero()) else {
            continue;
        };
        a.swap(row, p);
        for i in 0..rows {
            if i == row || a[i][col].is_zero() {
                continue;
            }
            let (pv, f) = (a[row][col].clone(), a[i][col].clone());
            let pivot_row = a[row].clone();
            for (x, p) in a[i].iter_mut().zip(&pivot_row) {
                *x = reduce(&*x * &pv - p * &f, mode);
            }
            normalize_row(&mut a[i]);
        }
        pivots.push((row, col));
        row += 1;
        if row == rows {
            break;
        }
    }

    let pivot_cols: Vec<usize> = pivots.iter().map(|&(_, c)| c).collect();
    let mut basis = Vec::new();
    for free in (0..n).filter(|c| !pivot_cols.contains(c)) {
        // x_free = L, x_pivot = -a[r][free] * L / a[r][pivot]
        let mut lcm = BigInt::one();
        for &(r, c) in &pivots {
            if !a[r][free].is_zero() {
                lcm = lcm.lcm(&a[r][c].abs());
            }
        }
        let mut x = vec![BigInt::zero(); n];
        x[free] = lcm.clone();
        for &(r, c) in &pivots {
            if !a[r][free].is_zero() {
                x[c] = -(&a[r][free] * &lcm) / &a[r][c];
            }
        }
        let x: Vec<BigInt> = x.into_iter().map(|v| reduce(v, mode)).collect();
        basis.push(x);
    }
    basis
}

fn reduce(v: BigInt, mode: CoefficientMode) -> BigInt {
    match mode {
        CoefficientMode::Integers => v,
        CoefficientMode::Mod2 => v.mod_floor(&BigInt::from(2)),
    }
}

fn normalize_row(row: &mut [BigInt]) {
    let g = row.iter().fold(BigInt::zero(), |g, v| g.gcd(v));
    if g > BigInt::one() {
        for v in row.iter_mut() {
            *v = &*v / &g;
        }
    }
}
