//! Least-squares kernel: Householder QR with column pivoting.
//!
//! Rank is decided at a relative tolerance on the pivoted R diagonal.
//! Collinear columns are either reported as an error ([`ols`]) or dropped
//! with the surviving fit returned ([`ols_dropping`]); pivoting pushes the
//! later-ordered member of a collinear pair out of the model.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Relative tolerance on the R diagonal used to decide numerical rank.
pub const RANK_TOLERANCE: f64 = 1e-10;

/// Result of a least-squares fit.
#[derive(Debug, Clone)]
pub struct OlsFit {
    /// One entry per design column; dropped columns hold 0 and are listed
    /// in `dropped`.
    pub coefficients: Vec<f64>,
    /// Conventional standard errors (`sigma^2 (X'X)^{-1}` on the retained
    /// block); `NaN` for dropped columns.
    pub standard_errors: Vec<f64>,
    /// Original indices of retained columns, ascending.
    pub retained: Vec<usize>,
    /// Original indices of dropped (collinear) columns, ascending.
    pub dropped: Vec<usize>,
    pub residuals: DVector<f64>,
    pub fitted: DVector<f64>,
    pub rss: f64,
    /// Residual degrees of freedom: rows minus rank.
    pub dof: usize,
    pub rank: usize,
}

/// Strict least squares: errors with the offending column names if the
/// design is rank deficient at [`RANK_TOLERANCE`].
pub fn ols(y: &DVector<f64>, x: &DMatrix<f64>, names: &[String]) -> Result<OlsFit> {
    let fit = solve(y, x, names)?;
    if !fit.dropped.is_empty() {
        return Err(Error::RankDeficient {
            columns: fit.dropped.iter().map(|&j| names[j].clone()).collect(),
        });
    }
    Ok(fit)
}

/// Least squares that drops collinear columns instead of failing. Dropped
/// column indices are reported on the fit; callers decide how loudly to
/// complain.
pub fn ols_dropping(y: &DVector<f64>, x: &DMatrix<f64>, names: &[String]) -> Result<OlsFit> {
    solve(y, x, names)
}

fn solve(y: &DVector<f64>, x: &DMatrix<f64>, names: &[String]) -> Result<OlsFit> {
    let m = x.nrows();
    let n = x.ncols();
    assert_eq!(names.len(), n, "one name per design column");
    assert_eq!(y.len(), m);
    if m <= n {
        return Err(Error::InsufficientDegreesOfFreedom { rows: m, cols: n });
    }

    let mut a = x.clone();
    let mut qty = y.clone();
    let mut pivots: Vec<usize> = (0..n).collect();
    let kmax = n.min(m);

    for k in 0..kmax {
        // Exact re-computation of trailing column norms; designs here are
        // small, so stability beats the classical running update.
        let mut best = k;
        let mut best_norm = tail_norm2(&a, k, k);
        for j in k + 1..n {
            let nj = tail_norm2(&a, k, j);
            if nj > best_norm {
                best = j;
                best_norm = nj;
            }
        }
        if best != k {
            a.swap_columns(k, best);
            pivots.swap(k, best);
        }
        let normx = best_norm.sqrt();
        if normx == 0.0 {
            break;
        }
        // Householder reflector zeroing a[k+1.., k].
        let alpha = if a[(k, k)] >= 0.0 { -normx } else { normx };
        let mut v = DVector::zeros(m - k);
        for i in k..m {
            v[i - k] = a[(i, k)];
        }
        v[0] -= alpha;
        let vtv: f64 = v.dot(&v);
        if vtv > 0.0 {
            for j in k..n {
                let mut dot = 0.0;
                for i in k..m {
                    dot += v[i - k] * a[(i, j)];
                }
                let c = 2.0 * dot / vtv;
                for i in k..m {
                    a[(i, j)] -= c * v[i - k];
                }
            }
            let mut dot = 0.0;
            for i in k..m {
                dot += v[i - k] * qty[i];
            }
            let c = 2.0 * dot / vtv;
            for i in k..m {
                qty[i] -= c * v[i - k];
            }
        }
        a[(k, k)] = alpha;
        for i in k + 1..m {
            a[(i, k)] = 0.0;
        }
    }

    // Numerical rank from the pivoted diagonal.
    let lead = a[(0, 0)].abs();
    let mut rank = 0;
    for k in 0..kmax {
        if a[(k, k)].abs() > RANK_TOLERANCE * lead {
            rank = k + 1;
        } else {
            break;
        }
    }
    if rank == 0 {
        return Err(Error::RankDeficient {
            columns: names.to_vec(),
        });
    }

    // Back substitution on the leading rank x rank block.
    let mut beta_piv = vec![0.0; rank];
    for k in (0..rank).rev() {
        let mut s = qty[k];
        for j in k + 1..rank {
            s -= a[(k, j)] * beta_piv[j];
        }
        beta_piv[k] = s / a[(k, k)];
    }

    let mut coefficients = vec![0.0; n];
    for k in 0..rank {
        coefficients[pivots[k]] = beta_piv[k];
    }
    let mut retained: Vec<usize> = pivots[..rank].to_vec();
    retained.sort_unstable();
    let mut dropped: Vec<usize> = pivots[rank..].to_vec();
    dropped.sort_unstable();

    let beta = DVector::from_column_slice(&coefficients);
    let fitted = x * &beta;
    let residuals = y - &fitted;
    let rss = residuals.dot(&residuals);
    let dof = m - rank;

    // Standard errors from the retained triangular block:
    // (X1'X1)^{-1} = R^{-1} R^{-T}, so the j-th diagonal entry is the
    // squared norm of row j of R^{-1}.
    let mut standard_errors = vec![f64::NAN; n];
    if dof > 0 {
        let sigma2 = rss / dof as f64;
        let rinv = invert_upper(&a, rank);
        for k in 0..rank {
            let mut s = 0.0;
            for j in k..rank {
                s += rinv[(k, j)] * rinv[(k, j)];
            }
            standard_errors[pivots[k]] = (sigma2 * s).sqrt();
        }
    }

    Ok(OlsFit {
        coefficients,
        standard_errors,
        retained,
        dropped,
        residuals,
        fitted,
        rss,
        dof,
        rank,
    })
}

fn tail_norm2(a: &DMatrix<f64>, row_start: usize, col: usize) -> f64 {
    let mut s = 0.0;
    for i in row_start..a.nrows() {
        s += a[(i, col)] * a[(i, col)];
    }
    s
}

fn invert_upper(a: &DMatrix<f64>, rank: usize) -> DMatrix<f64> {
    let mut inv = DMatrix::zeros(rank, rank);
    for col in 0..rank {
        // Solve R x = e_col.
        for k in (0..rank).rev() {
            let mut s = if k == col { 1.0 } else { 0.0 };
            for j in k + 1..rank {
                s -= a[(k, j)] * inv[(j, col)];
            }
            inv[(k, col)] = s / a[(k, k)];
        }
    }
    inv
}
