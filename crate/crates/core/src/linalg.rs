//! Small dense linear-algebra helpers shared by the estimation modules.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Solution of a (weighted) least-squares problem.
#[derive(Debug, Clone)]
pub(crate) struct LsSolution {
    pub coef: Vec<f64>,
    /// Weighted residual sum of squares.
    pub rss: f64,
    /// (X' W X)^{-1}, the coefficient covariance up to scale.
    pub xtx_inv: DMatrix<f64>,
}

/// Weighted least squares via normal equations. `weights` are inverse
/// variances; pass `None` for OLS.
pub(crate) fn least_squares(
    y: &[f64],
    cols: &[&[f64]],
    weights: Option<&[f64]>,
) -> Result<LsSolution> {
    let n = y.len();
    let k = cols.len();
    if k == 0 || n < k {
        return Err(Error::SingularRegression(format!(
            "{n} rows for {k} regressors"
        )));
    }
    for c in cols {
        debug_assert_eq!(c.len(), n);
    }

    let w_at = |i: usize| weights.map_or(1.0, |w| w[i]);
    let mut xtx = DMatrix::<f64>::zeros(k, k);
    let mut xty = DVector::<f64>::zeros(k);
    for i in 0..n {
        let w = w_at(i);
        for a in 0..k {
            let xa = cols[a][i];
            xty[a] += w * xa * y[i];
            for b in a..k {
                xtx[(a, b)] += w * xa * cols[b][i];
            }
        }
    }
    for a in 0..k {
        for b in 0..a {
            xtx[(a, b)] = xtx[(b, a)];
        }
    }

    let chol = PivotedCholesky::new(&xtx)
        .ok_or_else(|| Error::SingularRegression("normal equations not positive definite".into()))?;
    let coef = chol.solve(&xty);
    let xtx_inv = chol.inverse();

    let mut rss = 0.0;
    for i in 0..n {
        let mut fit = 0.0;
        for a in 0..k {
            fit += coef[a] * cols[a][i];
        }
        let r = y[i] - fit;
        rss += w_at(i) * r * r;
    }

    Ok(LsSolution {
        coef: coef.iter().copied().collect(),
        rss,
        xtx_inv,
    })
}

/// Cholesky factorization that rejects pivots below a relative floor, so
/// exactly collinear designs surface as errors instead of NaN solutions.
struct PivotedCholesky {
    l: DMatrix<f64>,
}

impl PivotedCholesky {
    fn new(m: &DMatrix<f64>) -> Option<Self> {
        let n = m.nrows();
        let max_diag = (0..n).map(|i| m[(i, i)].abs()).fold(0.0f64, f64::max);
        if max_diag <= 0.0 || !max_diag.is_finite() {
            return None;
        }
        let floor = 1e-13 * max_diag;
        let mut l = DMatrix::<f64>::zeros(n, n);
        for j in 0..n {
            let mut d = m[(j, j)];
            for k in 0..j {
                d -= l[(j, k)] * l[(j, k)];
            }
            if d <= floor {
                return None;
            }
            let dj = d.sqrt();
            l[(j, j)] = dj;
            for i in j + 1..n {
                let mut v = m[(i, j)];
                for k in 0..j {
                    v -= l[(i, k)] * l[(j, k)];
                }
                l[(i, j)] = v / dj;
            }
        }
        Some(Self { l })
    }

    fn solve(&self, b: &DVector<f64>) -> DVector<f64> {
        let n = b.len();
        let mut y = b.clone();
        for i in 0..n {
            for k in 0..i {
                let v = y[k];
                y[i] -= self.l[(i, k)] * v;
            }
            y[i] /= self.l[(i, i)];
        }
        for i in (0..n).rev() {
            for k in i + 1..n {
                let v = y[k];
                y[i] -= self.l[(k, i)] * v;
            }
            y[i] /= self.l[(i, i)];
        }
        y
    }

    fn inverse(&self) -> DMatrix<f64> {
        let n = self.l.nrows();
        let mut inv = DMatrix::<f64>::zeros(n, n);
        for j in 0..n {
            let mut e = DVector::<f64>::zeros(n);
            e[j] = 1.0;
            let col = self.solve(&e);
            inv.set_column(j, &col);
        }
        // symmetrize against round-off
        for i in 0..n {
            for j in 0..i {
                let v = 0.5 * (inv[(i, j)] + inv[(j, i)]);
                inv[(i, j)] = v;
                inv[(j, i)] = v;
            }
        }
        inv
    }
}

/// Symmetric inverse square root via eigendecomposition.
///
/// Fails when the smallest eigenvalue is below `tol` times the largest,
/// reporting the matrix as numerically singular.
pub(crate) fn symmetric_inv_sqrt(m: &DMatrix<f64>, tol: f64) -> Option<DMatrix<f64>> {
    let eig = m.clone().symmetric_eigen();
    let max = eig.eigenvalues.iter().cloned().fold(f64::MIN, f64::max);
    if max <= 0.0 {
        return None;
    }
    let mut d = DMatrix::<f64>::zeros(m.nrows(), m.nrows());
    for (i, &lambda) in eig.eigenvalues.iter().enumerate() {
        if lambda < tol * max {
            return None;
        }
        d[(i, i)] = lambda.sqrt().recip();
    }
    Some(&eig.eigenvectors * d * eig.eigenvectors.transpose())
}

/// Companion matrix of an AR(p) polynomial (first row holds the coefficients).
pub(crate) fn companion(rho: &[f64]) -> DMatrix<f64> {
    let p = rho.len();
    let mut a = DMatrix::<f64>::zeros(p, p);
    for (j, &r) in rho.iter().enumerate() {
        a[(0, j)] = r;
    }
    for i in 1..p {
        a[(i, i - 1)] = 1.0;
    }
    a
}

/// True when every root of `1 - rho_1 z - ... - rho_p z^p` lies outside the
/// unit circle, i.e. the AR process is stationary.
pub(crate) fn ar_is_stationary(rho: &[f64]) -> bool {
    if rho.is_empty() {
        return true;
    }
    companion(rho)
        .complex_eigenvalues()
        .iter()
        .all(|z| z.norm() < 1.0)
}
