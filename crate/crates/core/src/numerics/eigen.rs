//! Symmetric eigendecomposition by Householder tridiagonalization followed by
//! the implicit QL algorithm with Wilkinson-style shifts (EISPACK `tred2` /
//! `tql2`). Cost is O(n³) with a small constant, so Gram matrices of several
//! hundred samples decompose in well under a second.

use crate::error::{Error, Result};

use super::Matrix;

/// Default relative threshold below which an eigenvalue is treated as zero.
pub const DEFAULT_EIG_TOL: f64 = 1e-10;

/// Relative asymmetry accepted by [`sym_eig`].
pub const SYMMETRY_TOL: f64 = 1e-10;

/// Full spectrum of a symmetric matrix.
///
/// Eigenvalues are sorted in descending order and column `j` of
/// `eigenvectors` is the unit eigenvector paired with `eigenvalues[j]`. The
/// sign of each eigenvector is fixed so that its first non-negligible
/// component is positive.
#[derive(Debug, Clone)]
pub struct EigenResult {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: Matrix,
    /// Relative threshold supplied by the caller.
    pub tol: f64,
}

impl EigenResult {
    pub fn max_abs_eigenvalue(&self) -> f64 {
        self.eigenvalues.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }

    /// True when `|λ_j| < tol · max|λ|`.
    pub fn is_negligible(&self, j: usize) -> bool {
        self.eigenvalues[j].abs() < self.tol * self.max_abs_eigenvalue()
            || self.max_abs_eigenvalue() == 0.0
    }

    /// Number of eigenvalues strictly above `tol · max|λ|`.
    pub fn positive_count(&self) -> usize {
        let threshold = self.tol * self.max_abs_eigenvalue();
        self.eigenvalues
            .iter()
            .filter(|&&l| l > threshold && l > 0.0)
            .count()
    }

    pub fn eigenvector(&self, j: usize) -> Vec<f64> {
        self.eigenvectors.column(j)
    }
}

/// Eigendecomposition of a symmetric matrix.
///
/// Every eigenvalue is reported, including those below `tol · max|λ|`; the
/// threshold is kept on the result so callers can classify them as zero.
pub fn sym_eig(a: &Matrix, tol: f64) -> Result<EigenResult> {
    if !a.is_square() {
        return Err(Error::InvalidMatrix(format!(
            "eigendecomposition needs a square matrix, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    if !a.is_symmetric(SYMMETRY_TOL) {
        return Err(Error::InvalidMatrix(
            "eigendecomposition needs a symmetric matrix".into(),
        ));
    }
    if !(tol.is_finite() && tol >= 0.0) {
        return Err(Error::InvalidInput(format!("eigenvalue tolerance {tol}")));
    }
    a.ensure_finite("input")?;

    let n = a.rows();
    let mut v: Vec<Vec<f64>> = (0..n).map(|i| a.row(i).to_vec()).collect();
    for i in 0..n {
        for j in (i + 1)..n {
            let s = 0.5 * (v[i][j] + v[j][i]);
            v[i][j] = s;
            v[j][i] = s;
        }
    }
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    tridiagonalize(&mut v, &mut d, &mut e);
    tridiagonal_ql(&mut v, &mut d, &mut e)?;

    // Stable sort keeps the QL output order among exact ties.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| d[y].total_cmp(&d[x]));

    let eigenvalues: Vec<f64> = order.iter().map(|&k| d[k]).collect();
    let mut vectors = Matrix::zeros(n, n);
    for (col, &k) in order.iter().enumerate() {
        let sign = leading_sign(v.iter().map(|row| row[k]));
        for (row, vr) in v.iter().enumerate() {
            vectors[(row, col)] = sign * vr[k];
        }
    }
    Ok(EigenResult {
        eigenvalues,
        eigenvectors: vectors,
        tol,
    })
}

/// Sign that makes the first non-negligible component positive.
fn leading_sign(components: impl Iterator<Item = f64>) -> f64 {
    const NEGLIGIBLE: f64 = 1e-12;
    for c in components {
        if c.abs() > NEGLIGIBLE {
            return c.signum();
        }
    }
    1.0
}

/// Householder reduction of `v` to tridiagonal form. On exit `d` holds the
/// diagonal, `e[1..]` the sub-diagonal and `v` the accumulated orthogonal
/// transformation.
fn tridiagonalize(v: &mut [Vec<f64>], d: &mut [f64], e: &mut [f64]) {
    let n = d.len();
    d.copy_from_slice(&v[n - 1]);

    for i in (1..n).rev() {
        let scale: f64 = d[..i].iter().map(|x| x.abs()).sum();
        let mut h = 0.0;
        if scale == 0.0 {
            e[i] = d[i - 1];
            for j in 0..i {
                d[j] = v[i - 1][j];
                v[i][j] = 0.0;
                v[j][i] = 0.0;
            }
        } else {
            for dk in d[..i].iter_mut() {
                *dk /= scale;
                h += *dk * *dk;
            }
            let mut f = d[i - 1];
            let mut g = h.sqrt();
            if f > 0.0 {
                g = -g;
            }
            e[i] = scale * g;
            h -= f * g;
            d[i - 1] = f - g;
            e[..i].iter_mut().for_each(|x| *x = 0.0);

            for j in 0..i {
                f = d[j];
                v[j][i] = f;
                g = e[j] + v[j][j] * f;
                for k in (j + 1)..i {
                    g += v[k][j] * d[k];
                    e[k] += v[k][j] * f;
                }
                e[j] = g;
            }
            f = 0.0;
            for j in 0..i {
                e[j] /= h;
                f += e[j] * d[j];
            }
            let hh = f / (h + h);
            for j in 0..i {
                e[j] -= hh * d[j];
            }
            for j in 0..i {
                f = d[j];
                g = e[j];
                for k in j..i {
                    v[k][j] -= f * e[k] + g * d[k];
                }
                d[j] = v[i - 1][j];
                v[i][j] = 0.0;
            }
        }
        d[i] = h;
    }

    for i in 0..n - 1 {
        v[n - 1][i] = v[i][i];
        v[i][i] = 1.0;
        let h = d[i + 1];
        if h != 0.0 {
            for k in 0..=i {
                d[k] = v[k][i + 1] / h;
            }
            for j in 0..=i {
                let mut g = 0.0;
                for k in 0..=i {
                    g += v[k][i + 1] * v[k][j];
                }
                for k in 0..=i {
                    v[k][j] -= g * d[k];
                }
            }
        }
        for row in v.iter_mut().take(i + 1) {
            row[i + 1] = 0.0;
        }
    }
    for j in 0..n {
        d[j] = v[n - 1][j];
        v[n - 1][j] = 0.0;
    }
    v[n - 1][n - 1] = 1.0;
    e[0] = 0.0;
}

/// Implicit QL iterations on the tridiagonal matrix `(d, e)`, accumulating
/// rotations into `v`.
fn tridiagonal_ql(v: &mut [Vec<f64>], d: &mut [f64], e: &mut [f64]) -> Result<()> {
    let n = d.len();
    let max_iter = 60 * n.max(1);
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;

    let mut f = 0.0;
    let mut tst1 = 0.0_f64;
    let eps = f64::EPSILON;
    let mut iterations = 0usize;

    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n - 1 && e[m].abs() > eps * tst1 {
            m += 1;
        }

        if m > l {
            loop {
                iterations += 1;
                if iterations > max_iter {
                    return Err(Error::Numerical(
                        "symmetric QL iteration did not converge".into(),
                    ));
                }
                let mut g = d[l];
                let mut p = (d[l + 1] - g) / (2.0 * e[l]);
                let mut r = p.hypot(1.0);
                if p < 0.0 {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let mut h = g - d[l];
                for di in d.iter_mut().skip(l + 2) {
                    *di -= h;
                }
                f += h;

                p = d[m];
                let mut c = 1.0;
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = 0.0;
                let mut s2 = 0.0;
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    g = c * e[i];
                    h = c * p;
                    r = p.hypot(e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);
                    for row in v.iter_mut() {
                        h = row[i + 1];
                        row[i + 1] = s * row[i] + c * h;
                        row[i] = c * row[i] - s * h;
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;

                if e[l].abs() <= eps * tst1 {
                    break;
                }
            }
        }
        d[l] += f;
        e[l] = 0.0;
    }
    Ok(())
}
