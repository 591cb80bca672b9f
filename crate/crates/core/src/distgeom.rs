//! Distance calculus for conditionally negative definite matrices.
//!
//! A signed distribution `a` (components summing to one, possibly negative)
//! selects an origin, the `a`-barycenter of the configuration. Everything here
//! is expressed through the distances themselves: no coordinates are needed to
//! obtain scalar products, dispersions or distances between barycenters.

use crate::error::{Error, Result};
use crate::matrix::{dot, Matrix, SymmetricMatrix};
use crate::spectral;

/// Largest drift of `Σ a_i` from 1 that is silently renormalized.
pub const NORMALIZATION_SLACK: f64 = 1e-8;

/// Negative ingested distances above this bound are clamped to zero.
pub const NEGATIVE_CLAMP: f64 = -1e-12;

/// Real weights summing to one; components may be negative.
#[derive(Debug, Clone, PartialEq)]
pub struct SignedDistribution(Vec<f64>);

impl SignedDistribution {
    /// Validates and, when `|Σ a_i - 1| ≤ 1e-8`, renormalizes the components.
    pub fn new(components: Vec<f64>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::InvalidDistribution("empty distribution".into()));
        }
        if let Some(i) = components.iter().position(|x| !x.is_finite()) {
            return Err(Error::InvalidDistribution(format!(
                "component {} is not finite",
                i + 1
            )));
        }
        let total: f64 = components.iter().sum();
        if (total - 1.0).abs() > NORMALIZATION_SLACK {
            return Err(Error::InvalidDistribution(format!(
                "components sum to {total}, expected 1"
            )));
        }
        Ok(Self(components.into_iter().map(|x| x / total).collect()))
    }

    /// Wraps components already known to be finite and to sum to one.
    pub(crate) fn from_exact(components: Vec<f64>) -> Self {
        debug_assert!((components.iter().sum::<f64>() - 1.0).abs() <= NORMALIZATION_SLACK);
        Self(components)
    }

    pub fn uniform(n: usize) -> Self {
        assert!(n > 0, "uniform distribution needs at least one object");
        Self(vec![1.0 / n as f64; n])
    }

    /// All mass on object `k` (zero-based).
    pub fn point_mass(n: usize, k: usize) -> Result<Self> {
        if k >= n {
            return Err(Error::InvalidDistribution(format!(
                "point mass index {} out of range for {n} objects",
                k + 1
            )));
        }
        let mut v = vec![0.0; n];
        v[k] = 1.0;
        Ok(Self(v))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }
}

/// Strictly positive object weights summing to one.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightDistribution(Vec<f64>);

impl WeightDistribution {
    pub fn new(components: Vec<f64>) -> Result<Self> {
        if let Some(i) = components.iter().position(|&x| !(x > 0.0)) {
            return Err(Error::InvalidDistribution(format!(
                "weight {} is {}, weights must be strictly positive",
                i + 1,
                components[i]
            )));
        }
        let signed = SignedDistribution::new(components)?;
        Ok(Self(signed.0))
    }

    pub fn uniform(n: usize) -> Self {
        Self(SignedDistribution::uniform(n).0)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn to_signed(&self) -> SignedDistribution {
        SignedDistribution(self.0.clone())
    }
}

/// Group memberships `1..=m`, every group nonempty.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupLabels {
    labels: Vec<usize>,
    groups: usize,
}

impl GroupLabels {
    pub fn new(labels: Vec<usize>) -> Result<Self> {
        if labels.is_empty() {
            return Err(Error::InvalidLabels("no labels".into()));
        }
        if let Some(i) = labels.iter().position(|&l| l == 0) {
            return Err(Error::InvalidLabels(format!(
                "label of object {} is 0, labels start at 1",
                i + 1
            )));
        }
        let groups = labels.iter().copied().max().unwrap_or(0);
        let mut sizes = vec![0usize; groups];
        for &l in &labels {
            sizes[l - 1] += 1;
        }
        if let Some(g) = sizes.iter().position(|&s| s == 0) {
            return Err(Error::InvalidLabels(format!("group {} is empty", g + 1)));
        }
        Ok(Self { labels, groups })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn groups(&self) -> usize {
        self.groups
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.labels
    }

    pub fn group_size(&self, g: usize) -> usize {
        self.labels.iter().filter(|&&l| l == g).count()
    }
}

/// Symmetric, nonnegative, zero-diagonal matrix of squared distances.
#[derive(Debug, Clone, PartialEq)]
pub struct SquaredDistanceMatrix(SymmetricMatrix);

impl SquaredDistanceMatrix {
    /// Validates the structural invariants. The diagonal must vanish to within
    /// 1e-12 and is then set to exactly zero; entries in `[-1e-12, 0)` are
    /// clamped to zero. Euclidean embeddability is not checked here.
    pub fn new(m: SymmetricMatrix) -> Result<Self> {
        let n = m.order();
        for i in 0..n {
            if m[(i, i)].abs() > -NEGATIVE_CLAMP {
                return Err(Error::InvalidMatrix(format!(
                    "diagonal entry {} is {}, expected 0",
                    i + 1,
                    m[(i, i)]
                )));
            }
        }
        for i in 0..n {
            for j in (i + 1)..n {
                let v = m[(i, j)];
                if !v.is_finite() || v < NEGATIVE_CLAMP {
                    return Err(Error::InvalidMatrix(format!(
                        "entry ({}, {}) is {v}, squared distances must be finite and nonnegative",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        Ok(Self(m.map_upper(|i, j, v| if i == j { 0.0 } else { v.max(0.0) })))
    }

    /// Like [`SquaredDistanceMatrix::new`] on raw, possibly slightly
    /// asymmetric input (e.g. parsed text): entries must agree with their
    /// mirror to within `1e-12·max(1, |d|)` and are averaged.
    pub fn from_raw(m: &Matrix) -> Result<Self> {
        if m.rows() != m.cols() {
            return Err(Error::InvalidMatrix(format!(
                "expected a square matrix, got {}x{}",
                m.rows(),
                m.cols()
            )));
        }
        let n = m.rows();
        for i in 0..n {
            for j in (i + 1)..n {
                let (a, b) = (m[(i, j)], m[(j, i)]);
                if (a - b).abs() > 1e-12 * a.abs().max(b.abs()).max(1.0) {
                    return Err(Error::InvalidMatrix(format!(
                        "not symmetric at ({}, {}): {a} vs {b}",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        Self::new(SymmetricMatrix::symmetrized(m)?)
    }

    /// Validates and additionally requires the matrix to be c.n.d. at `tol`.
    pub fn new_euclidean(m: SymmetricMatrix, tol: f64) -> Result<Self> {
        let d = Self::new(m)?;
        d.check_euclidean(tol)?;
        Ok(d)
    }

    /// Fails with [`Error::NotEuclidean`] unless the matrix is c.n.d. at `tol`.
    pub fn check_euclidean(&self, tol: f64) -> Result<()> {
        let es = spectral::centered_spectrum(&self.0)?;
        if es.is_nonnegative(tol) {
            Ok(())
        } else {
            Err(Error::NotEuclidean {
                eigenvalue: es.min_eigenvalue(),
                tolerance: tol * es.spectral_radius().max(1.0),
            })
        }
    }

    pub fn order(&self) -> usize {
        self.0.order()
    }

    pub fn as_symmetric(&self) -> &SymmetricMatrix {
        &self.0
    }

    pub fn into_symmetric(self) -> SymmetricMatrix {
        self.0
    }

    pub fn row(&self, i: usize) -> &[f64] {
        self.0.row(i)
    }

    /// Elementwise map of the off-diagonal entries without any validity check.
    /// The diagonal stays zero.
    pub fn map_unchecked(&self, mut f: impl FnMut(f64) -> f64) -> SymmetricMatrix {
        self.0.map_upper(|i, j, v| if i == j { 0.0 } else { f(v) })
    }

    /// Entrywise product with a scalar `c > 0`.
    pub fn scaled(&self, c: f64) -> Result<Self> {
        if !(c > 0.0) || !c.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "scale factor must be positive, got {c}"
            )));
        }
        Ok(Self(self.0.map(|v| v * c)))
    }
}

impl std::ops::Index<(usize, usize)> for SquaredDistanceMatrix {
    type Output = f64;

    fn index(&self, idx: (usize, usize)) -> &f64 {
        &self.0[idx]
    }
}

fn check_order(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(Error::DimensionMismatch { expected, found });
    }
    Ok(())
}

/// `H(a) = I - 1aᵀ`, entry `(i, j) = δ_ij - a_j`.
pub fn centering_matrix(a: &SignedDistribution) -> Matrix {
    let n = a.len();
    Matrix::from_fn(n, n, |i, j| {
        let delta = if i == j { 1.0 } else { 0.0 };
        delta - a.as_slice()[j]
    })
}

/// Scalar products `B(a) = -½ H(a) C H(a)ᵀ` relative to the `a`-barycenter.
///
/// Expanding the product gives `b_ij = -½ (c_ij - r_i - r_j + s)` with
/// `r = C a` and `s = aᵀ C a`, which costs O(n²).
pub fn scalar_products(c: &SymmetricMatrix, a: &SignedDistribution) -> Result<SymmetricMatrix> {
    check_order(c.order(), a.len())?;
    let r = c.mul_vec(a.as_slice())?;
    let s = dot(a.as_slice(), &r);
    Ok(SymmetricMatrix::from_upper_fn(c.order(), |i, j| {
        -0.5 * (c[(i, j)] - r[i] - r[j] + s)
    }))
}

/// The zero-diagonal associate `ĉ_ij = c_ij - ½ c_ii - ½ c_jj`. It has the same
/// scalar products as `C`; it is a squared Euclidean distance exactly when
/// `C` is c.n.d.
pub fn zero_diagonal_associate(c: &SymmetricMatrix) -> SymmetricMatrix {
    c.map_upper(|i, j, v| {
        if i == j {
            0.0
        } else {
            v - 0.5 * c[(i, i)] - 0.5 * c[(j, j)]
        }
    })
}

/// Dispersion `Δ_a = ½ Σ a_i a_j D_ij`; negative values are possible for
/// signed `a`.
pub fn dispersion(d: &SquaredDistanceMatrix, a: &SignedDistribution) -> Result<f64> {
    check_order(d.order(), a.len())?;
    Ok(0.5 * d.as_symmetric().quadratic_form(a.as_slice())?)
}

/// Squared distances `D_ia` from every object to the `a`-barycenter, from the
/// Huygens decomposition `Σ_j a_j D_ij = D_ia + Δ_a`.
pub fn distances_to_barycenter(d: &SquaredDistanceMatrix, a: &SignedDistribution) -> Result<Vec<f64>> {
    check_order(d.order(), a.len())?;
    let mut r = d.as_symmetric().mul_vec(a.as_slice())?;
    let delta = 0.5 * dot(a.as_slice(), &r);
    for x in &mut r {
        *x -= delta;
    }
    Ok(r)
}

/// Squared distance between the `a`- and `b`-barycenters,
/// `D_ab = -½ Σ (a_i - b_i)(a_j - b_j) D_ij`.
pub fn barycenter_squared_distance(
    d: &SquaredDistanceMatrix,
    a: &SignedDistribution,
    b: &SignedDistribution,
) -> Result<f64> {
    check_order(d.order(), a.len())?;
    check_order(d.order(), b.len())?;
    let z: Vec<f64> = a.as_slice().iter().zip(b.as_slice()).map(|(x, y)| x - y).collect();
    Ok(-0.5 * d.as_symmetric().quadratic_form(&z)?)
}
