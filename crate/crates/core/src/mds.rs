//! Classical and weighted multidimensional scaling.
//!
//! Weighted MDS diagonalizes the weighted scalar products
//! `K(a) = -½ √Π H(a) D H(a)ᵀ √Π` with `Π = diag(f)`, and places object `i` at
//! `x_iα = √(λ_α / f_i) u_iα`. Classical MDS is the special case of unit masses,
//! `x_iα = √λ_α u_iα` from `B(a)`. Its eigenvalues are `n` times those of
//! weighted MDS with uniform `f`.

use crate::distgeom::{scalar_products, SignedDistribution, SquaredDistanceMatrix, WeightDistribution};
use crate::error::{Error, Result};
use crate::matrix::{Matrix, SymmetricMatrix};
use crate::spectral::{self, DEFAULT_TOLERANCE};

/// Components with `λ ≤ NULL_CUTOFF · λ_max` are treated as numerical null space.
pub const NULL_CUTOFF: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct Embedding {
    /// `n × p` object coordinates.
    pub coordinates: Matrix,
    /// Retained eigenvalues, descending and positive.
    pub eigenvalues: Vec<f64>,
    pub origin: SignedDistribution,
    pub weights: WeightDistribution,
}

impl Embedding {
    pub fn dimension(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn len(&self) -> usize {
        self.coordinates.rows()
    }

    pub fn is_empty(&self) -> bool {
        self.coordinates.rows() == 0
    }

    /// Sum of the retained eigenvalues.
    pub fn total_inertia(&self) -> f64 {
        self.eigenvalues.iter().sum()
    }

    /// Squared Euclidean distances between coordinate rows.
    pub fn squared_distances(&self) -> SquaredDistanceMatrix {
        let x = &self.coordinates;
        let m = SymmetricMatrix::from_upper_fn(x.rows(), |i, j| {
            if i == j {
                0.0
            } else {
                x.row(i).iter().zip(x.row(j)).map(|(a, b)| (a - b) * (a - b)).sum()
            }
        });
        SquaredDistanceMatrix::new(m).expect("coordinate distances are valid")
    }
}

/// Classical MDS relative to the origin `a`, at the default tolerance.
pub fn classical_mds(d: &SquaredDistanceMatrix, a: &SignedDistribution) -> Result<Embedding> {
    classical_mds_with_tolerance(d, a, DEFAULT_TOLERANCE)
}

pub fn classical_mds_with_tolerance(
    d: &SquaredDistanceMatrix,
    a: &SignedDistribution,
    tol: f64,
) -> Result<Embedding> {
    let b = scalar_products(d.as_symmetric(), a)?;
    let es = spectral::decompose(&b)?;
    let n = d.order();
    let (eigenvalues, kept) = retained_spectrum(&es, tol)?;
    let coordinates = Matrix::from_fn(n, kept, |i, alpha| {
        eigenvalues[alpha].sqrt() * es.eigenvectors[(i, alpha)]
    });
    Ok(Embedding {
        coordinates,
        eigenvalues,
        origin: a.clone(),
        weights: WeightDistribution::uniform(n),
    })
}

/// Weighted MDS with object masses `f` and origin `a`, at the default tolerance.
pub fn weighted_mds(
    d: &SquaredDistanceMatrix,
    f: &WeightDistribution,
    a: &SignedDistribution,
) -> Result<Embedding> {
    weighted_mds_with_tolerance(d, f, a, DEFAULT_TOLERANCE)
}

pub fn weighted_mds_with_tolerance(
    d: &SquaredDistanceMatrix,
    f: &WeightDistribution,
    a: &SignedDistribution,
    tol: f64,
) -> Result<Embedding> {
    if f.len() != d.order() {
        return Err(Error::DimensionMismatch {
            expected: d.order(),
            found: f.len(),
        });
    }
    let k = weighted_scalar_products(d, f, a)?;
    let es = spectral::decompose(&k)?;
    let n = d.order();
    let (eigenvalues, kept) = retained_spectrum(&es, tol)?;
    let w = f.as_slice();
    let coordinates = Matrix::from_fn(n, kept, |i, alpha| {
        (eigenvalues[alpha] / w[i]).sqrt() * es.eigenvectors[(i, alpha)]
    });
    Ok(Embedding {
        coordinates,
        eigenvalues,
        origin: a.clone(),
        weights: f.clone(),
    })
}

/// `K(a)_ij = √(f_i f_j) b_ij(a)`.
pub fn weighted_scalar_products(
    d: &SquaredDistanceMatrix,
    f: &WeightDistribution,
    a: &SignedDistribution,
) -> Result<SymmetricMatrix> {
    let b = scalar_products(d.as_symmetric(), a)?;
    let root: Vec<f64> = f.as_slice().iter().map(|x| x.sqrt()).collect();
    Ok(b.map_upper(|i, j, v| root[i] * root[j] * v))
}

/// Splits the spectrum into retained positive eigenvalues, rejecting
/// negative ones beyond tolerance.
fn retained_spectrum(es: &spectral::EigenSystem, tol: f64) -> Result<(Vec<f64>, usize)> {
    if tol.is_nan() || tol < 0.0 {
        return Err(Error::InvalidArgument(format!(
            "tolerance must be nonnegative, got {tol}"
        )));
    }
    if !es.is_nonnegative(tol) {
        return Err(Error::NotEuclidean {
            eigenvalue: es.min_eigenvalue(),
            tolerance: tol * es.spectral_radius().max(1.0),
        });
    }
    let top = es.eigenvalues.first().copied().unwrap_or(0.0);
    let cutoff = NULL_CUTOFF * top;
    let mut kept = es
        .eigenvalues
        .iter()
        .take_while(|&&l| l > cutoff && l > 0.0)
        .count();
    // The origin direction is always null; never keep more than n - 1 axes.
    kept = kept.min(es.order().saturating_sub(1));
    Ok((es.eigenvalues[..kept].to_vec(), kept))
}

/// Proportion of the total inertia carried by each retained axis. Empty when
/// the spectrum vanishes.
pub fn reconstruction_proportions(e: &Embedding) -> Vec<f64> {
    let total = e.total_inertia();
    if !(total > 0.0) {
        return Vec::new();
    }
    e.eigenvalues.iter().map(|l| l / total).collect()
}

/// Keeps the `dims` leading axes.
pub fn truncate(e: &Embedding, dims: usize) -> Result<Embedding> {
    if dims == 0 {
        return Err(Error::InvalidArgument("cannot truncate to 0 dimensions".into()));
    }
    if dims > e.dimension() {
        return Err(Error::InvalidArgument(format!(
            "cannot keep {dims} dimensions out of {}",
            e.dimension()
        )));
    }
    let x = &e.coordinates;
    Ok(Embedding {
        coordinates: Matrix::from_fn(x.rows(), dims, |i, j| x[(i, j)]),
        eigenvalues: e.eigenvalues[..dims].to_vec(),
        origin: e.origin.clone(),
        weights: e.weights.clone(),
    })
}
