//! Dense multiprecision linear algebra for small, badly conditioned
//! matrices: Cholesky of Hankel moment matrices and a fraction-free
//! determinant used as an independent oracle.

use crate::{Ctx, Error, Real, Result};
use alloc::vec::Vec;

/// Lower Cholesky factor of the Hankel matrix `[m_{i+j}]` with rows
/// `0..=n_max`, plus the off-diagonal part of row `n_max + 1`.
///
/// Only `m_0..=m_{2 n_max + 1}` are touched, which is exactly what a
/// recurrence table with indices up to `n_max` needs.
#[derive(Clone, Debug)]
pub struct HankelFactor {
    rows: Vec<Vec<Real>>,
}

impl HankelFactor {
    /// `L[i][j]` for `j <= i`, except the missing `L[n_max+1][n_max+1]`.
    pub fn entry(&self, i: usize, j: usize) -> &Real {
        &self.rows[i][j]
    }

    /// Largest index with a diagonal entry.
    pub fn n_max(&self) -> usize {
        self.rows.len() - 2
    }
}

pub fn hankel_cholesky(moments: &[Real], n_max: usize) -> Result<HankelFactor> {
    let needed = 2 * n_max + 1;
    if moments.len() <= needed {
        return Err(Error::Depth { needed, available: moments.len().saturating_sub(1) });
    }
    let mut rows: Vec<Vec<Real>> = Vec::with_capacity(n_max + 2);
    for i in 0..=n_max + 1 {
        let width = if i == n_max + 1 { i } else { i + 1 };
        let mut row: Vec<Real> = Vec::with_capacity(width);
        for j in 0..width {
            let mut sum = moments[i + j].clone();
            if i == j {
                for v in &row {
                    sum -= v.square();
                }
            } else {
                for k in 0..j {
                    sum -= &row[k] * &rows[j][k];
                }
            }
            if i == j {
                if !sum.is_positive() {
                    return Err(Error::NonPositivePivot { n: i });
                }
                row.push(sum.sqrt());
            } else {
                row.push(sum / &rows[j][j]);
            }
        }
        rows.push(row);
    }
    Ok(HankelFactor { rows })
}

/// Determinant by Bareiss elimination with row pivoting. Division by the
/// previous pivot is exact in exact arithmetic, so no fractions build up.
pub fn determinant(matrix: &[Vec<Real>], ctx: &Ctx) -> Real {
    let n = matrix.len();
    if n == 0 {
        return ctx.one();
    }
    let mut a: Vec<Vec<Real>> = matrix.to_vec();
    let mut negate = false;
    let mut previous = ctx.one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    negate = !negate;
                }
                None => return ctx.zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &previous;
                a[i][j] = v;
            }
        }
        previous = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if negate {
        -d
    } else {
        d
    }
}
