//! Symmetric eigendecomposition and definiteness tests.
//!
//! [`decompose`] reduces the matrix to tridiagonal form with Householder
//! reflections and diagonalizes it with implicit QL shifts (the EISPACK
//! `tred2`/`tql2` pair). [`decompose_jacobi`] runs cyclic Jacobi rotations
//! instead; it is slower but structurally independent, which makes it useful
//! as a cross-check.
//!
//! Both return eigenvalues in descending order with eigenvectors normalized so
//! that the largest-magnitude component of each column is nonnegative.

use crate::distgeom::{scalar_products, SignedDistribution};
use crate::error::{Error, Result};
use crate::matrix::{Matrix, SymmetricMatrix};

/// Default relative tolerance for eigenvalue sign decisions.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

/// Sweep cap for the Jacobi solver.
pub const MAX_JACOBI_SWEEPS: usize = 100;

/// QL iteration cap per eigenvalue.
const MAX_QL_ITERATIONS: usize = 60;

#[derive(Debug, Clone, PartialEq)]
pub struct EigenSystem {
    /// Eigenvalues, descending.
    pub eigenvalues: Vec<f64>,
    /// Orthonormal eigenvectors; column `α` pairs with `eigenvalues[α]`.
    pub eigenvectors: Matrix,
}

impl EigenSystem {
    pub fn order(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn eigenvector(&self, alpha: usize) -> Vec<f64> {
        self.eigenvectors.column(alpha)
    }

    /// Largest absolute eigenvalue (0 for the empty system).
    pub fn spectral_radius(&self) -> f64 {
        self.eigenvalues.iter().map(|l| l.abs()).fold(0.0, f64::max)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues.last().copied().unwrap_or(0.0)
    }

    /// `U Λ Uᵀ`.
    pub fn reconstruct(&self) -> Matrix {
        let n = self.order();
        let u = &self.eigenvectors;
        Matrix::from_fn(n, n, |i, j| {
            (0..n)
                .map(|a| u[(i, a)] * self.eigenvalues[a] * u[(j, a)])
                .sum()
        })
    }

    /// Whether the smallest eigenvalue is at least `-tol · max(1, |λ|max)`.
    pub fn is_nonnegative(&self, tol: f64) -> bool {
        self.min_eigenvalue() >= -tol * self.spectral_radius().max(1.0)
    }

    fn from_unsorted(values: Vec<f64>, vectors_by_row: Vec<Vec<f64>>) -> Self {
        // vectors_by_row[α] holds eigenvector α.
        let n = values.len();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| values[b].total_cmp(&values[a]));

        let mut eigenvectors = Matrix::zeros(n, n);
        let mut eigenvalues = Vec::with_capacity(n);
        for (col, &src) in order.iter().enumerate() {
            eigenvalues.push(values[src]);
            let v = &vectors_by_row[src];
            let sign = orientation(v);
            for (i, x) in v.iter().enumerate() {
                eigenvectors[(i, col)] = sign * x;
            }
        }
        Self {
            eigenvalues,
            eigenvectors,
        }
    }
}

/// Sign making the largest-magnitude component nonnegative. Near-ties are
/// resolved toward the lowest index.
fn orientation(v: &[f64]) -> f64 {
    let max = v.iter().map(|x| x.abs()).fold(0.0, f64::max);
    match v.iter().find(|x| x.abs() >= max * (1.0 - 1e-12)) {
        Some(&x) if x < 0.0 => -1.0,
        _ => 1.0,
    }
}

/// Full eigendecomposition of a symmetric matrix.
pub fn decompose(m: &SymmetricMatrix) -> Result<EigenSystem> {
    let n = m.order();
    if n == 0 {
        return Ok(EigenSystem {
            eigenvalues: Vec::new(),
            eigenvectors: Matrix::zeros(0, 0),
        });
    }
    if n == 1 {
        return Ok(EigenSystem {
            eigenvalues: vec![m[(0, 0)]],
            eigenvectors: Matrix::identity(1),
        });
    }

    let mut v: Vec<Vec<f64>> = (0..n).map(|i| m.row(i).to_vec()).collect();
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    tridiagonalize(&mut v, &mut d, &mut e);

    // QL rotations act on columns of `v`; work on its transpose so that each
    // rotation touches two contiguous rows.
    let mut w: Vec<Vec<f64>> = (0..n).map(|j| (0..n).map(|i| v[i][j]).collect()).collect();
    drop(v);
    tridiagonal_ql(&mut w, &mut d, &mut e)?;

    Ok(EigenSystem::from_unsorted(d, w))
}

/// Householder reduction to tridiagonal form; on exit `v` holds the
/// accumulated orthogonal transformation, `d` the diagonal and `e` the
/// subdiagonal (in `e[1..]`).
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
            for x in &mut d[..i] {
                *x /= scale;
                h += *x * *x;
            }
            let mut f = d[i - 1];
            let mut g = h.sqrt();
            if f > 0.0 {
                g = -g;
            }
            e[i] = scale * g;
            h -= f * g;
            d[i - 1] = f - g;
            e[..i].fill(0.0);

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

    // Accumulate transformations.
    for i in 0..(n - 1) {
        v[n - 1][i] = v[i][i];
        v[i][i] = 1.0;
        let h = d[i + 1];
        if h != 0.0 {
            for k in 0..=i {
                d[k] = v[k][i + 1] / h;
            }
            for j in 0..=i {
                let g: f64 = (0..=i).map(|k| v[k][i + 1] * v[k][j]).sum();
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

/// Implicit QL on the tridiagonal (d, e). `w[α]` is eigenvector α on exit.
fn tridiagonal_ql(w: &mut [Vec<f64>], d: &mut [f64], e: &mut [f64]) -> Result<()> {
    let n = d.len();
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;

    let eps = f64::EPSILON;
    let mut f = 0.0;
    let mut tst1: f64 = 0.0;
    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n - 1 && e[m].abs() > eps * tst1 {
            m += 1;
        }

        if m > l {
            let mut iter = 0;
            loop {
                iter += 1;
                if iter > MAX_QL_ITERATIONS {
                    return Err(Error::NoConvergence {
                        order: n,
                        sweeps: MAX_QL_ITERATIONS,
                    });
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
                for x in &mut d[(l + 2)..] {
                    *x -= h;
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

                    let (lo, hi) = w.split_at_mut(i + 1);
                    let (wi, wi1) = (&mut lo[i], &mut hi[0]);
                    for (a, b) in wi.iter_mut().zip(wi1.iter_mut()) {
                        let t = *b;
                        *b = s * *a + c * t;
                        *a = c * *a - s * t;
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

/// Cyclic Jacobi eigendecomposition, capped at [`MAX_JACOBI_SWEEPS`] sweeps.
pub fn decompose_jacobi(m: &SymmetricMatrix) -> Result<EigenSystem> {
    let n = m.order();
    let mut a: Vec<Vec<f64>> = (0..n).map(|i| m.row(i).to_vec()).collect();
    // v[α] is the running eigenvector α (rows of Vᵀ).
    let mut v: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect();

    let scale: f64 = a
        .iter()
        .flatten()
        .map(|x| x * x)
        .sum::<f64>()
        .sqrt();
    let target = f64::EPSILON * scale;

    let mut converged = n < 2 || scale == 0.0;
    for _ in 0..MAX_JACOBI_SWEEPS {
        if converged {
            break;
        }
        let off: f64 = (0..n)
            .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
            .map(|(i, j)| 2.0 * a[i][j] * a[i][j])
            .sum::<f64>()
            .sqrt();
        if off <= target {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p][q];
                if apq.abs() <= f64::MIN_POSITIVE {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + theta.hypot(1.0));
                let c = 1.0 / t.hypot(1.0);
                let s = t * c;

                for k in 0..n {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
                a[p][q] = 0.0;
                a[q][p] = 0.0;

                let (lo, hi) = v.split_at_mut(q);
                let (vp, vq) = (&mut lo[p], &mut hi[0]);
                for (x, y) in vp.iter_mut().zip(vq.iter_mut()) {
                    let (xp, yq) = (*x, *y);
                    *x = c * xp - s * yq;
                    *y = s * xp + c * yq;
                }
            }
        }
    }
    if !converged {
        let off: f64 = (0..n)
            .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
            .map(|(i, j)| 2.0 * a[i][j] * a[i][j])
            .sum::<f64>()
            .sqrt();
        if off > target {
            return Err(Error::NoConvergence {
                order: n,
                sweeps: MAX_JACOBI_SWEEPS,
            });
        }
    }

    let values = (0..n).map(|i| a[i][i]).collect();
    Ok(EigenSystem::from_unsorted(values, v))
}

/// Positive (semi-)definiteness: the smallest eigenvalue is at least
/// `-tol · max(1, |λ|max)`.
pub fn is_pd(m: &SymmetricMatrix, tol: f64) -> Result<bool> {
    check_tolerance(tol)?;
    Ok(decompose(m)?.is_nonnegative(tol))
}

/// Conditional negative definiteness, decided through the p.d. test of the
/// uniformly centered scalar products `-½ H M Hᵀ`.
pub fn is_cnd(m: &SymmetricMatrix, tol: f64) -> Result<bool> {
    check_tolerance(tol)?;
    Ok(centered_spectrum(m)?.is_nonnegative(tol))
}

/// Eigensystem of `-½ H M Hᵀ` for the uniform centering `H = I - 11ᵀ/n`.
pub fn centered_spectrum(m: &SymmetricMatrix) -> Result<EigenSystem> {
    let n = m.order();
    if n == 0 {
        return decompose(m);
    }
    let b = scalar_products(m, &SignedDistribution::uniform(n))?;
    decompose(&b)
}

fn check_tolerance(tol: f64) -> Result<()> {
    if tol.is_nan() || tol < 0.0 {
        return Err(Error::InvalidArgument(format!(
            "tolerance must be nonnegative, got {tol}"
        )));
    }
    Ok(())
}
