//! Nearest-centroid discriminant on (transformed) squared distances.
//!
//! Each group `g` is represented by the uniform distribution `f^g` on its
//! members. The squared distance from object `i` to the group centroid comes
//! from the Huygens decomposition,
//! `D_ig = Σ_j f^g_j D_ij - ½ Σ_jk f^g_j f^g_k D_jk`, and `i` is assigned to
//! the closest centroid. Accuracy is resubstitution accuracy.

use std::fmt;
use std::str::FromStr;

use crate::distgeom::{distances_to_barycenter, GroupLabels, SignedDistribution, SquaredDistanceMatrix};
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::spectral;
use crate::transforms::SchoenbergTransform;

/// Negative centroid distances above this bound are rounding noise.
pub const CENTROID_CLAMP: f64 = -1e-10;

/// One distribution per group: `1/n_g` on members, zero elsewhere.
pub fn group_distributions(labels: &GroupLabels) -> Vec<SignedDistribution> {
    (1..=labels.groups())
        .map(|g| {
            let mass = 1.0 / labels.group_size(g) as f64;
            let v = labels
                .as_slice()
                .iter()
                .map(|&l| if l == g { mass } else { 0.0 })
                .collect();
            SignedDistribution::from_exact(v)
        })
        .collect()
}

/// `n × m` squared distances from objects to group centroids.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupCentroidDistances(Matrix);

impl GroupCentroidDistances {
    /// Computes the centroid distances. Values in `[-1e-10, 0)` are clamped to
    /// zero; larger negative values (possible only for non-Euclidean input)
    /// are kept as they are.
    pub fn compute(d: &SquaredDistanceMatrix, labels: &GroupLabels) -> Result<Self> {
        if labels.len() != d.order() {
            return Err(Error::DimensionMismatch {
                expected: d.order(),
                found: labels.len(),
            });
        }
        let n = d.order();
        let m = labels.groups();
        let mut out = Matrix::zeros(n, m);
        for (g, f) in group_distributions(labels).iter().enumerate() {
            for (i, v) in distances_to_barycenter(d, f)?.into_iter().enumerate() {
                out[(i, g)] = if (CENTROID_CLAMP..0.0).contains(&v) { 0.0 } else { v };
            }
        }
        Ok(Self(out))
    }

    pub fn as_matrix(&self) -> &Matrix {
        &self.0
    }

    pub fn objects(&self) -> usize {
        self.0.rows()
    }

    pub fn groups(&self) -> usize {
        self.0.cols()
    }

    /// Closest group (1-based) for every object; ties go to the lowest index.
    pub fn assignments(&self) -> Vec<usize> {
        (0..self.objects())
            .map(|i| {
                let row = self.0.row(i);
                let mut best = 0;
                for (g, &v) in row.iter().enumerate().skip(1) {
                    if v < row[best] {
                        best = g;
                    }
                }
                best + 1
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Classification {
    /// 1-based group per object.
    pub assignments: Vec<usize>,
    /// Fraction of objects assigned to their own group.
    pub accuracy: f64,
    pub distances: GroupCentroidDistances,
}

/// Transforms `d` with `t` (checked to stay Euclidean) and classifies every
/// object to its nearest group centroid.
pub fn classify(d: &SquaredDistanceMatrix, labels: &GroupLabels, t: &SchoenbergTransform) -> Result<Classification> {
    classify_transformed(&t.apply(d)?, labels)
}

/// Classification on an already transformed matrix.
pub fn classify_transformed(d: &SquaredDistanceMatrix, labels: &GroupLabels) -> Result<Classification> {
    let distances = GroupCentroidDistances::compute(d, labels)?;
    let assignments = distances.assignments();
    let accuracy = accuracy(&assignments, labels);
    Ok(Classification {
        assignments,
        accuracy,
        distances,
    })
}

fn accuracy(assignments: &[usize], labels: &GroupLabels) -> f64 {
    let hits = assignments
        .iter()
        .zip(labels.as_slice())
        .filter(|(a, l)| a == l)
        .count();
    hits as f64 / labels.len() as f64
}

/// Parametric families scanned by [`parameter_sweep`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    /// `D^a`. Exponents above 1 are allowed here and flagged when the result
    /// is not c.n.d.
    Power,
    /// `ln(1 + aD)`.
    Log,
    /// `1 - exp(-aD)`.
    Gaussian,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Power => "power",
            Family::Log => "log",
            Family::Gaussian => "gaussian",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "power" => Ok(Family::Power),
            "log" => Ok(Family::Log),
            "gaussian" => Ok(Family::Gaussian),
            other => Err(Error::InvalidArgument(format!(
                "unknown family `{other}`, expected power, log or gaussian"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub family: Family,
    pub grid: Vec<f64>,
    pub accuracy: Vec<f64>,
    /// True where the transformed matrix failed the c.n.d. test.
    pub invalid_transform: Vec<bool>,
}

/// Transformed matrix for one grid point, plus whether it is c.n.d.
fn family_member(d: &SquaredDistanceMatrix, family: Family, a: f64, tol: f64) -> Result<(SquaredDistanceMatrix, bool)> {
    let t = match family {
        Family::Power if a > 1.0 => {
            let raw = d.map_unchecked(|v| v.powf(a));
            let valid = spectral::is_cnd(&raw, tol)?;
            return Ok((SquaredDistanceMatrix::new(raw)?, !valid));
        }
        Family::Power => SchoenbergTransform::power(a)?,
        // ln(1 + aD) is the catalog log with scale 1/a.
        Family::Log => SchoenbergTransform::log(1.0 / a)?,
        Family::Gaussian => SchoenbergTransform::gaussian(a)?,
    };
    Ok((t.apply_with_tolerance(d, tol)?, false))
}

/// Accuracy of the discriminant along a parameter grid.
pub fn parameter_sweep(d: &SquaredDistanceMatrix, labels: &GroupLabels, family: Family, grid: &[f64]) -> Result<SweepResult> {
    parameter_sweep_with_tolerance(d, labels, family, grid, spectral::DEFAULT_TOLERANCE)
}

pub fn parameter_sweep_with_tolerance(
    d: &SquaredDistanceMatrix,
    labels: &GroupLabels,
    family: Family,
    grid: &[f64],
    tol: f64,
) -> Result<SweepResult> {
    if let Some(&bad) = grid.iter().find(|a| !(**a > 0.0) || !a.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "{family} grid values must be positive and finite, got {bad}"
        )));
    }
    let mut accuracy = Vec::with_capacity(grid.len());
    let mut invalid_transform = Vec::with_capacity(grid.len());
    for &a in grid {
        let (dt, invalid) = family_member(d, family, a, tol)?;
        accuracy.push(classify_transformed(&dt, labels)?.accuracy);
        invalid_transform.push(invalid);
    }
    Ok(SweepResult {
        family,
        grid: grid.to_vec(),
        accuracy,
        invalid_transform,
    })
}
