//! Synthetic configurations, CSV ingestion and distance construction.
//!
//! Randomness comes from ChaCha8 (`rand_chacha`) seeded through
//! `SeedableRng::seed_from_u64`, so a seed reproduces the same cloud on every
//! platform. Uniform variates are `rand`'s standard `[0, 1)` doubles; normal
//! variates use the Marsaglia polar method, keeping the spare draw.

use std::f64::consts::TAU;
use std::io::{Read, Write};
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::distgeom::{GroupLabels, SquaredDistanceMatrix};
use crate::error::{Error, Result};
use crate::matrix::{Matrix, SymmetricMatrix};
use crate::spectral;

/// Radii and radial standard deviations of the concentric-circles groups.
pub const CIRCLES: [(f64, f64); 3] = [(1.0, 0.1), (3.0, 0.3), (5.0, 0.2)];

/// Relative eigenvalue floor below which a covariance direction is singular.
pub const COVARIANCE_RANK_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct PointCloud {
    /// `n × p` coordinates.
    pub coordinates: Matrix,
    pub labels: Option<GroupLabels>,
    /// Generator name and seed, or source file.
    pub provenance: String,
}

impl PointCloud {
    pub fn new(coordinates: Matrix, labels: Option<GroupLabels>, provenance: impl Into<String>) -> Result<Self> {
        if let Some(pos) = coordinates.as_slice().iter().position(|v| !v.is_finite()) {
            let cols = coordinates.cols().max(1);
            return Err(Error::InvalidArgument(format!(
                "coordinate ({}, {}) is not finite",
                pos / cols + 1,
                pos % cols + 1
            )));
        }
        if let Some(l) = &labels {
            if l.len() != coordinates.rows() {
                return Err(Error::DimensionMismatch {
                    expected: coordinates.rows(),
                    found: l.len(),
                });
            }
        }
        Ok(Self {
            coordinates,
            labels,
            provenance: provenance.into(),
        })
    }

    pub fn len(&self) -> usize {
        self.coordinates.rows()
    }

    pub fn is_empty(&self) -> bool {
        self.coordinates.rows() == 0
    }

    pub fn dimension(&self) -> usize {
        self.coordinates.cols()
    }
}

/// Seeded source of uniform and normal variates.
pub struct SeededRng {
    inner: ChaCha8Rng,
    spare: Option<f64>,
}

impl SeededRng {
    pub fn new(seed: u64) -> Self {
        Self {
            inner: ChaCha8Rng::seed_from_u64(seed),
            spare: None,
        }
    }

    /// Uniform on `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        self.inner.random::<f64>()
    }

    /// Standard normal by the Marsaglia polar method.
    pub fn normal(&mut self) -> f64 {
        if let Some(z) = self.spare.take() {
            return z;
        }
        loop {
            let u = 2.0 * self.uniform() - 1.0;
            let v = 2.0 * self.uniform() - 1.0;
            let s = u * u + v * v;
            if s > 0.0 && s < 1.0 {
                let factor = (-2.0 * s.ln() / s).sqrt();
                self.spare = Some(v * factor);
                return u * factor;
            }
        }
    }
}

/// `side × side` lattice with the given spacing, row-major.
pub fn generate_grid(side: usize, spacing: f64) -> Result<PointCloud> {
    if side < 2 {
        return Err(Error::InvalidArgument(format!("grid side must be at least 2, got {side}")));
    }
    if !(spacing > 0.0) || !spacing.is_finite() {
        return Err(Error::InvalidArgument(format!("grid spacing must be positive, got {spacing}")));
    }
    let x = Matrix::from_fn(side * side, 2, |i, k| {
        let idx = if k == 0 { i / side } else { i % side };
        idx as f64 * spacing
    });
    PointCloud::new(x, None, format!("grid(side={side},spacing={spacing})"))
}

/// Thin rod: `x1 ~ U(0, 1000)`, `x2 ~ U(0, 1)`.
pub fn generate_rod(n: usize, seed: u64) -> Result<PointCloud> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("rod needs at least 2 points, got {n}")));
    }
    let mut rng = SeededRng::new(seed);
    let mut data = Vec::with_capacity(2 * n);
    for _ in 0..n {
        data.push(1000.0 * rng.uniform());
        data.push(rng.uniform());
    }
    PointCloud::new(Matrix::from_row_major(n, 2, data)?, None, format!("rod(n={n},seed={seed})"))
}

/// Three labeled concentric circles (radii 1, 3, 5; radial sd 0.1, 0.3, 0.2).
/// Each point draws its angle, then its radial perturbation.
pub fn generate_circles(per_group: usize, seed: u64) -> Result<PointCloud> {
    if per_group == 0 {
        return Err(Error::InvalidArgument("circles need at least one point per group".into()));
    }
    let mut rng = SeededRng::new(seed);
    let n = per_group * CIRCLES.len();
    let mut data = Vec::with_capacity(2 * n);
    let mut labels = Vec::with_capacity(n);
    for (g, &(radius, sd)) in CIRCLES.iter().enumerate() {
        for _ in 0..per_group {
            let angle = TAU * rng.uniform();
            let r = radius + sd * rng.normal();
            data.push(r * angle.cos());
            data.push(r * angle.sin());
            labels.push(g + 1);
        }
    }
    PointCloud::new(
        Matrix::from_row_major(n, 2, data)?,
        Some(GroupLabels::new(labels)?),
        format!("circles(per_group={per_group},seed={seed})"),
    )
}

/// `D_ij = Σ_α (x_iα - x_jα)²`.
pub fn squared_distances(cloud: &PointCloud) -> SquaredDistanceMatrix {
    squared_distances_of(&cloud.coordinates)
}

pub fn squared_distances_of(x: &Matrix) -> SquaredDistanceMatrix {
    let m = SymmetricMatrix::from_upper_fn(x.rows(), |i, j| {
        if i == j {
            0.0
        } else {
            x.row(i).iter().zip(x.row(j)).map(|(a, b)| (a - b) * (a - b)).sum()
        }
    });
    SquaredDistanceMatrix::new(m).expect("sums of squares are nonnegative")
}

/// Which covariance defines the Mahalanobis metric.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CovarianceKind {
    /// Sample covariance of the whole cloud (denominator `n - 1`).
    Total,
    /// Pooled within-group covariance (denominator `n - m`); needs labels.
    PooledWithinGroups,
}

/// Whitens the cloud with its total sample covariance: the result is
/// centered with identity sample covariance.
pub fn mahalanobis_standardize(cloud: &PointCloud) -> Result<PointCloud> {
    mahalanobis_standardize_with(cloud, CovarianceKind::Total)
}

/// Centers the cloud and maps it through `S^{-1/2}` for the chosen
/// covariance `S`. Constant columns are dropped first.
pub fn mahalanobis_standardize_with(cloud: &PointCloud, kind: CovarianceKind) -> Result<PointCloud> {
    let x = &cloud.coordinates;
    let (n, p) = (x.rows(), x.cols());
    if n < 2 {
        return Err(Error::InvalidArgument("standardization needs at least 2 points".into()));
    }
    let means: Vec<f64> = (0..p).map(|k| x.column(k).iter().sum::<f64>() / n as f64).collect();

    // Residuals that define the covariance.
    let (residuals, dof) = match kind {
        CovarianceKind::Total => (
            Matrix::from_fn(n, p, |i, k| x[(i, k)] - means[k]),
            n - 1,
        ),
        CovarianceKind::PooledWithinGroups => {
            let labels = cloud.labels.as_ref().ok_or_else(|| {
                Error::InvalidArgument("pooled within-group covariance needs labels".into())
            })?;
            let m = labels.groups();
            if n <= m {
                return Err(Error::InvalidArgument(format!(
                    "pooled covariance needs more points ({n}) than groups ({m})"
                )));
            }
            let mut group_means = vec![vec![0.0; p]; m];
            for (i, &g) in labels.as_slice().iter().enumerate() {
                for k in 0..p {
                    group_means[g - 1][k] += x[(i, k)];
                }
            }
            for (g, row) in group_means.iter_mut().enumerate() {
                let size = labels.group_size(g + 1) as f64;
                row.iter_mut().for_each(|v| *v /= size);
            }
            let l = labels.as_slice();
            (Matrix::from_fn(n, p, |i, k| x[(i, k)] - group_means[l[i] - 1][k]), n - m)
        }
    };

    let covariance = |cols: &[usize]| {
        SymmetricMatrix::from_upper_fn(cols.len(), |a, b| {
            (0..n).map(|i| residuals[(i, cols[a])] * residuals[(i, cols[b])]).sum::<f64>() / dof as f64
        })
    };

    let all: Vec<usize> = (0..p).collect();
    let variances: Vec<f64> = (0..p).map(|k| covariance(&[k])[(0, 0)]).collect();
    let max_var = variances.iter().copied().fold(0.0, f64::max);
    let kept: Vec<usize> = all
        .into_iter()
        .filter(|&k| variances[k] > COVARIANCE_RANK_TOLERANCE * max_var && variances[k] > 0.0)
        .collect();
    if kept.is_empty() {
        return Err(Error::SingularCovariance {
            directions: (0..p).map(|k| unit(p, k)).collect(),
        });
    }

    let es = spectral::decompose(&covariance(&kept))?;
    let top = es.eigenvalues[0];
    let deficient: Vec<Vec<f64>> = (0..kept.len())
        .filter(|&a| es.eigenvalues[a] <= COVARIANCE_RANK_TOLERANCE * top)
        .map(|a| {
            // Express the direction in the original feature space.
            let mut dir = vec![0.0; p];
            for (r, &k) in kept.iter().enumerate() {
                dir[k] = es.eigenvectors[(r, a)];
            }
            dir
        })
        .collect();
    if !deficient.is_empty() {
        return Err(Error::SingularCovariance { directions: deficient });
    }

    // W = V Λ^{-1/2} Vᵀ
    let q = kept.len();
    let v = &es.eigenvectors;
    let w = Matrix::from_fn(q, q, |r, c| {
        (0..q).map(|a| v[(r, a)] * v[(c, a)] / es.eigenvalues[a].sqrt()).sum()
    });
    let centered = Matrix::from_fn(n, q, |i, r| x[(i, kept[r])] - means[kept[r]]);
    let z = centered.matmul(&w)?;
    PointCloud::new(
        z,
        cloud.labels.clone(),
        format!("mahalanobis({})", cloud.provenance),
    )
}

fn unit(p: usize, k: usize) -> Vec<f64> {
    let mut v = vec![0.0; p];
    v[k] = 1.0;
    v
}

fn csv_error(e: csv::Error) -> Error {
    let line = e.position().map_or(0, |p| p.line());
    let reason = match e.kind() {
        csv::ErrorKind::UnequalLengths { expected_len, len, .. } => {
            format!("expected {expected_len} fields, found {len}")
        }
        _ => e.to_string(),
    };
    Error::Parse { line, reason }
}

/// Reads a coordinate file: header `x1,…,xp` with an optional trailing
/// `label` column of positive integers.
pub fn load_csv(path: impl AsRef<Path>) -> Result<PointCloud> {
    let path = path.as_ref();
    let file = std::fs::File::open(path)?;
    parse_csv(file, &path.display().to_string())
}

pub fn parse_csv(reader: impl Read, source: &str) -> Result<PointCloud> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let header = rdr.headers().map_err(csv_error)?.clone();
    if header.is_empty() || (header.len() == 1 && header[0].is_empty()) {
        return Err(Error::Parse {
            line: 1,
            reason: "empty file".into(),
        });
    }
    let has_labels = header.iter().next_back() == Some("label");
    let p = header.len() - usize::from(has_labels);
    if p == 0 {
        return Err(Error::Parse {
            line: 1,
            reason: "no coordinate columns".into(),
        });
    }
    for (k, name) in header.iter().take(p).enumerate() {
        if name != format!("x{}", k + 1) {
            return Err(Error::Parse {
                line: 1,
                reason: format!("unknown header `{name}`, expected `x{}`", k + 1),
            });
        }
    }

    let mut data = Vec::new();
    let mut labels = Vec::new();
    for record in rdr.records() {
        let record = record.map_err(csv_error)?;
        let line = record.position().map_or(0, |pos| pos.line());
        for (k, cell) in record.iter().take(p).enumerate() {
            let v: f64 = cell.parse().map_err(|_| Error::Parse {
                line,
                reason: format!("column x{}: `{cell}` is not a number", k + 1),
            })?;
            data.push(v);
        }
        if has_labels {
            let cell = &record[p];
            let l: usize = cell.parse().ok().filter(|&l| l > 0).ok_or_else(|| Error::Parse {
                line,
                reason: format!("label `{cell}` is not a positive integer"),
            })?;
            labels.push(l);
        }
    }
    let n = data.len() / p;
    if n == 0 {
        return Err(Error::Parse {
            line: 2,
            reason: "no data rows".into(),
        });
    }
    let labels = if has_labels { Some(GroupLabels::new(labels)?) } else { None };
    PointCloud::new(Matrix::from_row_major(n, p, data)?, labels, source)
}

/// Writes coordinates with header `{prefix}1,…,{prefix}p` and, when given, a
/// trailing `label` column.
pub fn write_coordinates(
    out: impl Write,
    prefix: &str,
    x: &Matrix,
    labels: Option<&GroupLabels>,
) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut header: Vec<String> = (1..=x.cols()).map(|k| format!("{prefix}{k}")).collect();
    if labels.is_some() {
        header.push("label".into());
    }
    w.write_record(&header).map_err(csv_io)?;
    for i in 0..x.rows() {
        let mut row: Vec<String> = x.row(i).iter().map(|v| v.to_string()).collect();
        if let Some(l) = labels {
            row.push(l.as_slice()[i].to_string());
        }
        w.write_record(&row).map_err(csv_io)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_csv(out: impl Write, cloud: &PointCloud) -> Result<()> {
    write_coordinates(out, "x", &cloud.coordinates, cloud.labels.as_ref())
}

fn csv_io(e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::Io(io),
        other => Error::Internal(format!("csv writer: {other:?}")),
    }
}

/// Reads a headerless square matrix.
pub fn load_matrix_csv(path: impl AsRef<Path>) -> Result<Matrix> {
    parse_matrix_csv(std::fs::File::open(path)?)
}

pub fn parse_matrix_csv(reader: impl Read) -> Result<Matrix> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for record in rdr.records() {
        let record = record.map_err(csv_error)?;
        let line = record.position().map_or(0, |pos| pos.line());
        let row = record
            .iter()
            .map(|cell| {
                cell.parse::<f64>().map_err(|_| Error::Parse {
                    line,
                    reason: format!("`{cell}` is not a number"),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(Error::Parse {
            line: 1,
            reason: "empty file".into(),
        });
    }
    if rows.len() != rows[0].len() {
        return Err(Error::Parse {
            line: 1,
            reason: format!("matrix is {}x{}, expected square", rows.len(), rows[0].len()),
        });
    }
    Matrix::from_rows(&rows)
}

pub fn write_matrix_csv(out: impl Write, m: &Matrix) -> Result<()> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    for i in 0..m.rows() {
        w.write_record(m.row(i).iter().map(|v| v.to_string())).map_err(csv_io)?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn grid_shapes() {
        let g = generate_grid(10, 1.0).unwrap();
        assert_eq!((g.len(), g.dimension()), (100, 2));
        assert!(g.labels.is_none());
        let sq = generate_grid(2, 1.0).unwrap();
        assert_eq!(sq.coordinates.as_slice(), &[0.0, 0.0, 0.0, 1.0, 1.0, 0.0, 1.0, 1.0]);
        assert!(generate_grid(1, 1.0).is_err());
        assert!(generate_grid(3, 0.0).is_err());
    }

    #[test]
    fn grid_distances_are_rotation_symmetric() {
        let g = generate_grid(5, 0.5).unwrap();
        let rotated = Matrix::from_fn(g.len(), 2, |i, k| {
            let (x, y) = (g.coordinates[(i, 0)], g.coordinates[(i, 1)]);
            if k == 0 { -y } else { x }
        });
        let multiset = |m: &Matrix| {
            let d = squared_distances_of(m);
            let mut v: Vec<f64> = d.as_symmetric().as_matrix().as_slice().to_vec();
            v.sort_by(f64::total_cmp);
            v
        };
        assert_eq!(multiset(&g.coordinates), multiset(&rotated));
    }

    #[test]
    fn rod_is_deterministic_and_uniform() {
        let a = generate_rod(1000, 1).unwrap();
        let b = generate_rod(1000, 1).unwrap();
        assert_eq!(a, b);
        assert_ne!(a.coordinates, generate_rod(1000, 2).unwrap().coordinates);
        assert_eq!((a.len(), a.dimension()), (1000, 2));
        let n = a.len() as f64;
        let m1 = a.coordinates.column(0).iter().sum::<f64>() / n;
        let m2 = a.coordinates.column(1).iter().sum::<f64>() / n;
        // U(0, L) has sd L/√12; three standard errors of the mean.
        let se = |l: f64| 3.0 * l / 12f64.sqrt() / n.sqrt();
        assert!((m1 - 500.0).abs() < se(1000.0), "{m1}");
        assert!((m2 - 0.5).abs() < se(1.0), "{m2}");
        assert!(a.coordinates.column(0).iter().all(|&v| (0.0..1000.0).contains(&v)));
    }

    #[test]
    fn circles_layout() {
        let c = generate_circles(50, 7).unwrap();
        assert_eq!(c.len(), 150);
        let labels = c.labels.as_ref().unwrap();
        assert_eq!(labels.groups(), 3);
        for g in 1..=3 {
            assert_eq!(labels.group_size(g), 50);
        }
        for (g, &(radius, sd)) in CIRCLES.iter().enumerate() {
            let radii: Vec<f64> = (0..150)
                .filter(|&i| labels.as_slice()[i] == g + 1)
                .map(|i| c.coordinates.row(i).iter().map(|v| v * v).sum::<f64>().sqrt())
                .collect();
            let mean = radii.iter().sum::<f64>() / radii.len() as f64;
            assert!((mean - radius).abs() < 3.0 * sd / 50f64.sqrt(), "group {}: {mean}", g + 1);
        }
        assert!(generate_circles(0, 1).is_err());
    }

    #[test]
    fn polar_normals_have_unit_variance() {
        let mut rng = SeededRng::new(3);
        let draws: Vec<f64> = (0..20000).map(|_| rng.normal()).collect();
        let mean = draws.iter().sum::<f64>() / draws.len() as f64;
        let var = draws.iter().map(|z| (z - mean).powi(2)).sum::<f64>() / (draws.len() - 1) as f64;
        assert!(mean.abs() < 3.0 / (draws.len() as f64).sqrt());
        assert!((var - 1.0).abs() < 0.05);
    }

    #[test]
    fn distance_examples() {
        let x = Matrix::from_rows(&[vec![0.0, 0.0], vec![3.0, 4.0], vec![3.0, 4.0]]).unwrap();
        let d = squared_distances_of(&x);
        assert_eq!(d[(0, 1)], 25.0);
        assert_eq!(d[(1, 2)], 0.0);
        assert!(spectral::is_cnd(d.as_symmetric(), spectral::DEFAULT_TOLERANCE).unwrap());
    }

    fn covariance_of(x: &Matrix) -> Matrix {
        let (n, p) = (x.rows(), x.cols());
        let means: Vec<f64> = (0..p).map(|k| x.column(k).iter().sum::<f64>() / n as f64).collect();
        Matrix::from_fn(p, p, |a, b| {
            (0..n).map(|i| (x[(i, a)] - means[a]) * (x[(i, b)] - means[b])).sum::<f64>() / (n - 1) as f64
        })
    }

    #[test]
    fn whitening_equalizes_axis_scales() {
        let mut rng = SeededRng::new(5);
        let x = Matrix::from_fn(200, 2, |_, k| if k == 0 { rng.normal() } else { 10.0 * rng.normal() });
        let cloud = PointCloud::new(x, None, "test").unwrap();
        let z = mahalanobis_standardize(&cloud).unwrap();
        let cov = covariance_of(&z.coordinates);
        assert!(cov.max_abs_diff(&Matrix::identity(2)) < 1e-8);
    }

    #[test]
    fn pooled_whitening_uses_within_group_scatter() {
        let c = generate_circles(20, 2).unwrap();
        let z = mahalanobis_standardize_with(&c, CovarianceKind::PooledWithinGroups).unwrap();
        let labels = z.labels.as_ref().unwrap();
        let mut scatter = Matrix::zeros(2, 2);
        for g in 1..=3 {
            let rows: Vec<usize> = (0..z.len()).filter(|&i| labels.as_slice()[i] == g).collect();
            let sub = Matrix::from_fn(rows.len(), 2, |r, k| z.coordinates[(rows[r], k)]);
            let cov = covariance_of(&sub);
            for a in 0..2 {
                for b in 0..2 {
                    scatter[(a, b)] += cov[(a, b)] * (rows.len() - 1) as f64;
                }
            }
        }
        let pooled = Matrix::from_fn(2, 2, |a, b| scatter[(a, b)] / (z.len() - 3) as f64);
        assert!(pooled.max_abs_diff(&Matrix::identity(2)) < 1e-8);
        let unlabeled = PointCloud::new(c.coordinates.clone(), None, "x").unwrap();
        assert!(mahalanobis_standardize_with(&unlabeled, CovarianceKind::PooledWithinGroups).is_err());
    }

    #[test]
    fn singular_covariance_names_direction() {
        // x2 = 2·x1 exactly: the direction (2, -1)/√5 has zero variance.
        let x = Matrix::from_fn(10, 2, |i, k| (i as f64) * if k == 0 { 1.0 } else { 2.0 });
        let cloud = PointCloud::new(x, None, "line").unwrap();
        match mahalanobis_standardize(&cloud) {
            Err(Error::SingularCovariance { directions }) => {
                assert_eq!(directions.len(), 1);
                let d = &directions[0];
                assert!((d[0].abs() - 2.0 / 5f64.sqrt()).abs() < 1e-8);
                assert!((d[1].abs() - 1.0 / 5f64.sqrt()).abs() < 1e-8);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn constant_columns_are_dropped() {
        let mut rng = SeededRng::new(9);
        let x = Matrix::from_fn(30, 3, |_, k| if k == 1 { 4.0 } else { rng.normal() });
        let z = mahalanobis_standardize(&PointCloud::new(x, None, "c").unwrap()).unwrap();
        assert_eq!(z.dimension(), 2);
    }

    #[test]
    fn csv_parsing() {
        let c = parse_csv("x1,x2\n0,1\n2,3\n4.5,-1e-3\n".as_bytes(), "inline").unwrap();
        assert_eq!((c.len(), c.dimension()), (3, 2));
        assert!(c.labels.is_none());

        let c = parse_csv("x1,x2,x3,x4,label\n1,2,3,4,1\n5,6,7,8,2\n".as_bytes(), "inline").unwrap();
        assert_eq!(c.labels.unwrap().groups(), 2);

        let err = |s: &str| parse_csv(s.as_bytes(), "inline").unwrap_err();
        assert!(matches!(err(""), Error::Parse { .. }));
        assert!(matches!(err("x1,x2\n"), Error::Parse { .. }));
        assert!(matches!(err("x1,x2\n1,2\n3\n"), Error::Parse { line: 3, .. }));
        assert!(matches!(err("x1,x2\n1,2\n3,abc\n"), Error::Parse { line: 3, .. }));
        assert!(matches!(err("x1,y\n1,2\n"), Error::Parse { line: 1, .. }));
        assert!(matches!(err("x1,label\n1,0\n"), Error::Parse { line: 2, .. }));
    }

    #[test]
    fn csv_round_trip_is_exact() {
        let c = generate_circles(5, 11).unwrap();
        let mut buf = Vec::new();
        write_csv(&mut buf, &c).unwrap();
        let back = parse_csv(buf.as_slice(), "buf").unwrap();
        assert_eq!(back.coordinates, c.coordinates);
        assert_eq!(back.labels, c.labels);
    }

    #[test]
    fn matrix_csv() {
        let m = parse_matrix_csv("0,1\n1,0\n".as_bytes()).unwrap();
        assert_eq!(m.as_slice(), &[0.0, 1.0, 1.0, 0.0]);
        assert!(parse_matrix_csv("0,1\n".as_bytes()).is_err());
        assert!(parse_matrix_csv("".as_bytes()).is_err());
    }

    fn cloud_strategy() -> impl Strategy<Value = Matrix> {
        (3usize..=20, 1usize..=4).prop_flat_map(|(n, p)| {
            proptest::collection::vec(-10.0f64..10.0, n * p)
                .prop_map(move |v| Matrix::from_row_major(n, p, v).unwrap())
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn root_distances_satisfy_triangle_inequality(x in cloud_strategy()) {
            let d = squared_distances_of(&x);
            let n = x.rows();
            for i in 0..n {
                for j in 0..n {
                    for k in 0..n {
                        prop_assert!(d[(i, j)].sqrt() <= d[(i, k)].sqrt() + d[(k, j)].sqrt() + 1e-10);
                    }
                }
            }
        }

        #[test]
        fn whitening_is_idempotent_up_to_rotation(
            x in (8usize..=20, 1usize..=3).prop_flat_map(|(n, p)| {
                proptest::collection::vec(-10.0f64..10.0, n * p)
                    .prop_map(move |v| Matrix::from_row_major(n, p, v).unwrap())
            })
        ) {
            let cloud = PointCloud::new(x, None, "p").unwrap();
            let once = match mahalanobis_standardize(&cloud) {
                Ok(c) => c,
                Err(Error::SingularCovariance { .. }) => return Ok(()),
                Err(e) => return Err(TestCaseError::fail(e.to_string())),
            };
            let twice = mahalanobis_standardize(&once).unwrap();
            let gap = squared_distances(&once).as_symmetric().as_matrix()
                .max_abs_diff(squared_distances(&twice).as_symmetric().as_matrix());
            prop_assert!(gap < 1e-9);
        }
    }
}
