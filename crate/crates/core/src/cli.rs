//! Command-line front end.
//!
//! CSV results go to `--out` when given and to stdout otherwise; in the
//! latter case the human-readable report moves to stderr so stdout stays a
//! clean CSV stream. Errors are printed as a single line
//! `error[<kind>]: <message>` with exit code 2 for usage, parse and IO
//! problems and 3 for numerical failures.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::datasets::{self, CovarianceKind, PointCloud};
use crate::discriminant::{self, Family};
use crate::distgeom::{GroupLabels, SignedDistribution, SquaredDistanceMatrix, WeightDistribution};
use crate::error::Error;
use crate::matrix::SymmetricMatrix;
use crate::mds;
use crate::spectral;
use crate::transforms::SchoenbergTransform;

/// Hadamard exponents probed by `check --divisible`.
pub const DIVISIBILITY_POWERS: [f64; 7] = [0.125, 0.25, 0.5, 1.0, 2.0, 4.0, 8.0];

#[derive(Debug, Parser)]
#[command(name = "schoenberg", version, about = "Euclidean-preserving transformations of squared distances, MDS and distance-based discriminant analysis")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[command(flatten)]
    pub global: GlobalArgs,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Seed for the synthetic generators.
    #[arg(long, global = true, default_value_t = 1)]
    pub seed: u64,

    /// Relative tolerance for eigenvalue sign tests.
    #[arg(long, global = true, default_value_t = spectral::DEFAULT_TOLERANCE)]
    pub tol: f64,

    /// Output CSV path (stdout when omitted).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Read the input as a headerless square matrix of squared distances.
    #[arg(long, global = true)]
    pub matrix: bool,

    /// Whiten coordinates before computing distances.
    #[arg(long, global = true)]
    pub mahalanobis: bool,

    /// Covariance used by --mahalanobis; `auto` pools within groups when the
    /// command has labels.
    #[arg(long, global = true, value_enum, default_value_t = CovarianceChoice::Auto)]
    pub covariance: CovarianceChoice,

    /// Origin: `uniform`, `point-mass:k` (1-based) or a file of signed weights.
    #[arg(long, global = true, default_value = "uniform")]
    pub origin: String,

    /// Object masses: `uniform` or a file of positive weights.
    #[arg(long, global = true, default_value = "uniform")]
    pub weights: String,

    /// Transformation, e.g. `gaussian:a=0.65` or `compose(log:a=1,power:a=0.5)`.
    #[arg(long, global = true, default_value = "identity")]
    pub transform: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CovarianceChoice {
    Auto,
    Total,
    Within,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    Grid,
    Rod,
    Circles,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a synthetic point cloud.
    Generate {
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long, default_value_t = 10)]
        side: usize,
        #[arg(long, default_value_t = 1.0)]
        spacing: f64,
        #[arg(long, default_value_t = 1000)]
        n: usize,
        #[arg(long, default_value_t = 50)]
        per_group: usize,
    },
    /// Weighted MDS of the (transformed) distances.
    Embed {
        input: PathBuf,
        /// Keep only the leading dimensions.
        #[arg(long)]
        dims: Option<usize>,
        /// Scree CSV path; defaults to `<out>.scree.csv` when --out is given.
        #[arg(long)]
        scree: Option<PathBuf>,
    },
    /// Nearest-centroid classification.
    Discriminate {
        input: PathBuf,
        /// Label file, one positive integer per line (optional `label` header).
        #[arg(long)]
        labels: Option<PathBuf>,
    },
    /// Discriminant accuracy along a parameter grid.
    Sweep {
        input: PathBuf,
        #[arg(long)]
        labels: Option<PathBuf>,
        #[arg(long)]
        family: String,
        /// `start:stop:step` (inclusive) or a comma-separated list.
        #[arg(long)]
        grid: String,
    },
    /// Report c.n.d. / p.d. verdicts for a matrix.
    Check {
        input: PathBuf,
        /// Treat the matrix as a kernel and test positive definiteness.
        #[arg(long)]
        kernel: bool,
        /// Test p.d. of Hadamard powers of the kernel.
        #[arg(long)]
        divisible: bool,
    },
}

/// Failure of a command, tagged for the exit code and message prefix.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Io(String),
    Parse(String),
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Numerical(_) => 3,
            _ => 2,
        }
    }

    pub fn tag(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Io(_) => "io",
            CliError::Parse(_) => "parse",
            CliError::Numerical(_) => "numerical",
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Io(m) | CliError::Parse(m) | CliError::Numerical(m) => m,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let msg = e.to_string();
        match e {
            _ if e.is_numerical() => CliError::Numerical(msg),
            Error::Io(_) => CliError::Io(msg),
            Error::Parse { .. } => CliError::Parse(msg),
            _ => CliError::Usage(msg),
        }
    }
}

type CliResult<T> = Result<T, CliError>;

fn io_error(path: &Path, e: impl std::fmt::Display) -> CliError {
    CliError::Io(format!("{}: {e}", path.display()))
}

/// Parses `args` and runs the command. Returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(stdout, "{e}");
                return 0;
            }
            let rendered = e.to_string();
            let first = rendered
                .lines()
                .next()
                .unwrap_or("invalid arguments")
                .trim_start_matches("error: ");
            let _ = writeln!(stderr, "error[usage]: {first}");
            return 2;
        }
    };
    match execute(&cli, stdout, stderr) {
        Ok(()) => 0,
        Err(e) => {
            let line = e.message().replace('\n', " ");
            let _ = writeln!(stderr, "error[{}]: {line}", e.tag());
            e.exit_code()
        }
    }
}

pub fn execute(cli: &Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> CliResult<()> {
    let g = &cli.global;
    if !(g.tol >= 0.0) || !g.tol.is_finite() {
        return Err(CliError::Usage(format!("--tol must be nonnegative, got {}", g.tol)));
    }
    // Specs parse before any computation.
    let transform: SchoenbergTransform = g.transform.parse()?;

    match &cli.command {
        Command::Generate {
            kind,
            side,
            spacing,
            n,
            per_group,
        } => {
            let cloud = match kind {
                Kind::Grid => datasets::generate_grid(*side, *spacing)?,
                Kind::Rod => datasets::generate_rod(*n, g.seed)?,
                Kind::Circles => datasets::generate_circles(*per_group, g.seed)?,
            };
            let mut out = open_output(g.out.as_deref(), stdout)?;
            datasets::write_csv(&mut out, &cloud).map_err(|e| output_error(g.out.as_deref(), e))?;
            Ok(())
        }
        Command::Embed { input, dims, scree } => {
            let input = load_euclidean(input, g, None, false)?;
            let n = input.distances.order();
            let origin = parse_origin(&g.origin, n)?;
            let weights = parse_weights(&g.weights, n)?;
            let d = transform.apply_with_tolerance(&input.distances, g.tol)?;
            let full = mds::weighted_mds_with_tolerance(&d, &weights, &origin, g.tol)?;
            let proportions = mds::reconstruction_proportions(&full);
            let embedding = match dims {
                Some(k) => mds::truncate(&full, *k)?,
                None => full.clone(),
            };

            let scree_path = scree.clone().or_else(|| g.out.as_ref().map(|p| sibling(p, "scree.csv")));
            if let Some(path) = &scree_path {
                let file = create(path)?;
                write_scree(file, &full.eigenvalues, &proportions).map_err(|e| io_error(path, e))?;
            }
            {
                let mut out = open_output(g.out.as_deref(), stdout)?;
                datasets::write_coordinates(&mut out, "dim", &embedding.coordinates, input.labels.as_ref())
                    .map_err(|e| output_error(g.out.as_deref(), e))?;
            }

            let report = report_stream(g.out.is_some(), stdout, stderr);
            let shown = dims.unwrap_or(5).min(proportions.len());
            let mut cumulative = 0.0;
            let mut lines = vec![format!("dimensions: {} of {n} objects", full.dimension())];
            for (k, (lambda, p)) in full.eigenvalues.iter().zip(&proportions).take(shown).enumerate() {
                cumulative += p;
                lines.push(format!(
                    "dim{}: eigenvalue {lambda:.6e}, proportion {p:.4}, cumulative {cumulative:.4}",
                    k + 1
                ));
            }
            write_lines(report, &lines)
        }
        Command::Discriminate { input, labels } => {
            let input = load_euclidean(input, g, labels.as_deref(), true)?;
            let labels = input.require_labels()?;
            let d = transform.apply_with_tolerance(&input.distances, g.tol)?;
            let c = discriminant::classify_transformed(&d, labels)?;
            {
                let mut out = open_output(g.out.as_deref(), stdout)?;
                write_assignments(&mut out, labels, &c.assignments)
                    .map_err(|e| output_error(g.out.as_deref(), e))?;
            }
            let hits = (c.accuracy * labels.len() as f64).round() as usize;
            let report = report_stream(g.out.is_some(), stdout, stderr);
            write_lines(
                report,
                &[format!("accuracy: {:.4} ({hits}/{})", c.accuracy, labels.len())],
            )
        }
        Command::Sweep {
            input,
            labels,
            family,
            grid,
        } => {
            let family: Family = family.parse()?;
            let grid = parse_grid(grid)?;
            let input = load_euclidean(input, g, labels.as_deref(), true)?;
            let labels = input.require_labels()?;
            if g.transform != "identity" {
                return Err(CliError::Usage("sweep takes its transformation from --family, not --transform".into()));
            }
            let result = discriminant::parameter_sweep_with_tolerance(&input.distances, labels, family, &grid, g.tol)?;
            {
                let mut out = open_output(g.out.as_deref(), stdout)?;
                write_sweep(&mut out, &result).map_err(|e| output_error(g.out.as_deref(), e))?;
            }
            let best = result.accuracy.iter().copied().fold(0.0, f64::max);
            let invalid = result.invalid_transform.iter().filter(|&&b| b).count();
            let report = report_stream(g.out.is_some(), stdout, stderr);
            write_lines(
                report,
                &[format!(
                    "{family}: {} grid points, best accuracy {best:.4}, {invalid} flagged invalid",
                    result.grid.len()
                )],
            )
        }
        Command::Check {
            input,
            kernel,
            divisible,
        } => check(input, g, &transform, *kernel || *divisible, *divisible, stdout),
    }
}

fn check(
    input: &Path,
    g: &GlobalArgs,
    transform: &SchoenbergTransform,
    kernel: bool,
    divisible: bool,
    stdout: &mut dyn Write,
) -> CliResult<()> {
    let mut lines = Vec::new();
    let m: SymmetricMatrix = if kernel {
        if g.transform != "identity" {
            return Err(CliError::Usage("--transform does not apply to kernel matrices".into()));
        }
        read_symmetric(input)?
    } else {
        let input = load_input(input, g, None, false)?;
        // The transform is applied without the Euclidean post-check: deciding
        // that is the point of this command.
        input.distances.map_unchecked(|v| transform.eval(v))
    };
    lines.push(format!("order: {}", m.order()));

    let centered = spectral::centered_spectrum(&m)?;
    let cnd = centered.is_nonnegative(g.tol);
    lines.push(format!("c.n.d.: {}", yes_no(cnd)));
    lines.push(format!("min centered eigenvalue: {:e}", centered.min_eigenvalue()));

    if kernel {
        let es = spectral::decompose(&m)?;
        lines.push(format!("p.d.: {}", yes_no(es.is_nonnegative(g.tol))));
        lines.push(format!("min eigenvalue: {:e}", es.min_eigenvalue()));
    }
    if divisible {
        if m.as_matrix().as_slice().iter().any(|&v| !(v > 0.0)) {
            return Err(CliError::Usage(
                "Hadamard powers need a kernel with strictly positive entries".into(),
            ));
        }
        for t in DIVISIBILITY_POWERS {
            let es = spectral::decompose(&m.map(|v| v.powf(t)))?;
            lines.push(format!(
                "hadamard power {t}: p.d.: {} (min eigenvalue {:e})",
                yes_no(es.is_nonnegative(g.tol)),
                es.min_eigenvalue()
            ));
        }
    }
    write_lines(stdout, &lines)
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

struct Input {
    distances: SquaredDistanceMatrix,
    labels: Option<GroupLabels>,
}

impl Input {
    fn require_labels(&self) -> CliResult<&GroupLabels> {
        self.labels
            .as_ref()
            .ok_or_else(|| CliError::Usage("input has no labels (add a `label` column or pass --labels)".into()))
    }
}

/// Loads the input and requires it to be Euclidean.
fn load_euclidean(path: &Path, g: &GlobalArgs, labels: Option<&Path>, labeled_command: bool) -> CliResult<Input> {
    let input = load_input(path, g, labels, labeled_command)?;
    input.distances.check_euclidean(g.tol)?;
    Ok(input)
}

fn load_input(path: &Path, g: &GlobalArgs, labels: Option<&Path>, labeled_command: bool) -> CliResult<Input> {
    let external = labels.map(load_labels).transpose()?;
    if g.matrix {
        if g.mahalanobis {
            return Err(CliError::Usage("--mahalanobis needs coordinates, not a distance matrix".into()));
        }
        let m = datasets::load_matrix_csv(path).map_err(|e| read_error(path, e))?;
        let distances = SquaredDistanceMatrix::from_raw(&m)?;
        check_label_count(external.as_ref(), distances.order())?;
        return Ok(Input {
            distances,
            labels: external,
        });
    }

    let mut cloud = datasets::load_csv(path).map_err(|e| read_error(path, e))?;
    if let Some(l) = external {
        check_label_count(Some(&l), cloud.len())?;
        cloud = PointCloud::new(cloud.coordinates, Some(l), cloud.provenance)?;
    }
    if g.mahalanobis {
        let kind = match g.covariance {
            CovarianceChoice::Total => CovarianceKind::Total,
            CovarianceChoice::Within => CovarianceKind::PooledWithinGroups,
            CovarianceChoice::Auto if labeled_command && cloud.labels.is_some() => CovarianceKind::PooledWithinGroups,
            CovarianceChoice::Auto => CovarianceKind::Total,
        };
        cloud = datasets::mahalanobis_standardize_with(&cloud, kind)?;
    }
    Ok(Input {
        distances: datasets::squared_distances(&cloud),
        labels: cloud.labels,
    })
}

fn check_label_count(labels: Option<&GroupLabels>, n: usize) -> CliResult<()> {
    match labels {
        Some(l) if l.len() != n => Err(CliError::Usage(format!(
            "label file has {} entries for {n} objects",
            l.len()
        ))),
        _ => Ok(()),
    }
}

/// Prefixes IO and parse errors with the offending path.
fn read_error(path: &Path, e: Error) -> CliError {
    match e {
        Error::Io(io) => io_error(path, io),
        Error::Parse { line, reason } => {
            CliError::Parse(format!("{}:{line}: {reason}", path.display()))
        }
        other => other.into(),
    }
}

fn output_error(path: Option<&Path>, e: Error) -> CliError {
    match (path, e) {
        (Some(p), Error::Io(io)) => io_error(p, io),
        (_, e) => e.into(),
    }
}

fn read_symmetric(path: &Path) -> CliResult<SymmetricMatrix> {
    let m = datasets::load_matrix_csv(path).map_err(|e| read_error(path, e))?;
    let scale = m.max_abs();
    let asym = m.max_abs_diff(&m.transpose());
    if asym > 1e-12 * scale.max(1.0) {
        return Err(CliError::Usage(format!(
            "{}: matrix is not symmetric (max asymmetry {asym:e})",
            path.display()
        )));
    }
    Ok(SymmetricMatrix::symmetrized(&m)?)
}

/// Reads numbers separated by newlines or commas, skipping a non-numeric
/// first line as a header.
fn read_numbers(path: &Path) -> CliResult<Vec<f64>> {
    let text = std::fs::read_to_string(path).map_err(|e| io_error(path, e))?;
    let mut values = Vec::new();
    for (k, line) in text.lines().enumerate() {
        for cell in line.split(',').map(str::trim).filter(|c| !c.is_empty()) {
            match cell.parse::<f64>() {
                Ok(v) => values.push(v),
                Err(_) if k == 0 => break,
                Err(_) => {
                    return Err(CliError::Parse(format!(
                        "{}:{}: `{cell}` is not a number",
                        path.display(),
                        k + 1
                    )))
                }
            }
        }
    }
    if values.is_empty() {
        return Err(CliError::Parse(format!("{}:1: no values", path.display())));
    }
    Ok(values)
}

fn load_labels(path: &Path) -> CliResult<GroupLabels> {
    let values = read_numbers(path)?;
    let labels = values
        .iter()
        .map(|&v| {
            if v >= 1.0 && v.fract() == 0.0 {
                Ok(v as usize)
            } else {
                Err(CliError::Parse(format!("{}: label {v} is not a positive integer", path.display())))
            }
        })
        .collect::<CliResult<Vec<_>>>()?;
    Ok(GroupLabels::new(labels)?)
}

pub fn parse_origin(spec: &str, n: usize) -> CliResult<SignedDistribution> {
    if spec == "uniform" {
        return Ok(SignedDistribution::uniform(n));
    }
    if let Some(k) = spec.strip_prefix("point-mass:") {
        let k: usize = k
            .parse()
            .ok()
            .filter(|&k| k >= 1)
            .ok_or_else(|| CliError::Usage(format!("invalid origin `{spec}`: expected point-mass:k with k >= 1")))?;
        return Ok(SignedDistribution::point_mass(n, k - 1)?);
    }
    let values = read_numbers(Path::new(spec))?;
    check_length("origin", values.len(), n)?;
    Ok(SignedDistribution::new(values)?)
}

pub fn parse_weights(spec: &str, n: usize) -> CliResult<WeightDistribution> {
    if spec == "uniform" {
        return Ok(WeightDistribution::uniform(n));
    }
    let values = read_numbers(Path::new(spec))?;
    check_length("weights", values.len(), n)?;
    Ok(WeightDistribution::new(values)?)
}

fn check_length(what: &str, found: usize, n: usize) -> CliResult<()> {
    if found != n {
        return Err(CliError::Usage(format!("{what} has {found} entries for {n} objects")));
    }
    Ok(())
}

/// `start:stop:step` (inclusive of `stop` up to rounding) or `a,b,c`.
pub fn parse_grid(spec: &str) -> CliResult<Vec<f64>> {
    let bad = |reason: &str| CliError::Usage(format!("invalid grid `{spec}`: {reason}"));
    let number = |s: &str| s.trim().parse::<f64>().map_err(|_| bad(&format!("`{s}` is not a number")));
    let grid = if spec.contains(':') {
        let parts: Vec<&str> = spec.split(':').collect();
        if parts.len() != 3 {
            return Err(bad("expected start:stop:step"));
        }
        let (start, stop, step) = (number(parts[0])?, number(parts[1])?, number(parts[2])?);
        if !(step > 0.0) || !(stop >= start) || !start.is_finite() || !stop.is_finite() {
            return Err(bad("need start <= stop and step > 0"));
        }
        let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
        if count > 1_000_000 {
            return Err(bad("too many grid points"));
        }
        (0..count).map(|k| start + k as f64 * step).collect()
    } else {
        spec.split(',').map(number).collect::<CliResult<Vec<f64>>>()?
    };
    if grid.is_empty() {
        return Err(bad("empty grid"));
    }
    Ok(grid)
}

fn sibling(path: &Path, suffix: &str) -> PathBuf {
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    path.with_file_name(format!("{stem}.{suffix}"))
}

fn create(path: &Path) -> CliResult<BufWriter<File>> {
    File::create(path).map(BufWriter::new).map_err(|e| io_error(path, e))
}

fn open_output<'a>(path: Option<&Path>, stdout: &'a mut dyn Write) -> CliResult<Box<dyn Write + 'a>> {
    Ok(match path {
        Some(p) => Box::new(create(p)?),
        None => Box::new(stdout),
    })
}

fn report_stream<'a>(to_stdout: bool, stdout: &'a mut dyn Write, stderr: &'a mut dyn Write) -> &'a mut dyn Write {
    if to_stdout {
        stdout
    } else {
        stderr
    }
}

fn write_lines(w: &mut dyn Write, lines: &[String]) -> CliResult<()> {
    for line in lines {
        writeln!(w, "{line}").map_err(|e| CliError::Io(e.to_string()))?;
    }
    Ok(())
}

fn write_scree(out: impl Write, eigenvalues: &[f64], proportions: &[f64]) -> io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["dimension", "eigenvalue", "proportion", "cumulative"])?;
    let mut cumulative = 0.0;
    for (k, (lambda, p)) in eigenvalues.iter().zip(proportions).enumerate() {
        cumulative += p;
        w.write_record([
            (k + 1).to_string(),
            lambda.to_string(),
            p.to_string(),
            cumulative.to_string(),
        ])?;
    }
    w.flush()
}

fn write_assignments(out: impl Write, labels: &GroupLabels, assigned: &[usize]) -> Result<(), Error> {
    let mut w = csv::Writer::from_writer(out);
    let wrap = |e: csv::Error| Error::Io(e.into());
    w.write_record(["object", "label", "assigned"]).map_err(wrap)?;
    for (i, (l, a)) in labels.as_slice().iter().zip(assigned).enumerate() {
        w.write_record([(i + 1).to_string(), l.to_string(), a.to_string()]).map_err(wrap)?;
    }
    w.flush()?;
    Ok(())
}

fn write_sweep(out: impl Write, r: &discriminant::SweepResult) -> Result<(), Error> {
    let mut w = csv::Writer::from_writer(out);
    let wrap = |e: csv::Error| Error::Io(e.into());
    w.write_record(["parameter", "accuracy", "invalid_transform"]).map_err(wrap)?;
    for ((a, acc), bad) in r.grid.iter().zip(&r.accuracy).zip(&r.invalid_transform) {
        w.write_record([a.to_string(), acc.to_string(), bad.to_string()]).map_err(wrap)?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_specs() {
        assert_eq!(parse_grid("0.5,1,2").unwrap(), vec![0.5, 1.0, 2.0]);
        let g = parse_grid("0.05:2:0.05").unwrap();
        assert_eq!(g.len(), 40);
        assert!((g[39] - 2.0).abs() < 1e-12);
        assert_eq!(parse_grid("1:1:0.5").unwrap(), vec![1.0]);
        for bad in ["", "1:2", "2:1:0.1", "0:1:0", "a,b"] {
            assert!(matches!(parse_grid(bad), Err(CliError::Usage(_))), "{bad}");
        }
    }

    #[test]
    fn origin_specs() {
        assert_eq!(parse_origin("uniform", 4).unwrap(), SignedDistribution::uniform(4));
        assert_eq!(parse_origin("point-mass:2", 3).unwrap().as_slice(), &[0.0, 1.0, 0.0]);
        assert!(parse_origin("point-mass:0", 3).is_err());
        assert!(parse_origin("point-mass:4", 3).is_err());
        assert!(matches!(parse_origin("/no/such/file", 3), Err(CliError::Io(_))));
    }

    #[test]
    fn error_categories() {
        let numerical: CliError = Error::NotEuclidean { eigenvalue: -1.0, tolerance: 1e-9 }.into();
        assert_eq!(numerical.exit_code(), 3);
        let parse: CliError = Error::Parse { line: 3, reason: "x".into() }.into();
        assert_eq!((parse.exit_code(), parse.tag()), (2, "parse"));
        let usage: CliError = Error::InvalidArgument("x".into()).into();
        assert_eq!((usage.exit_code(), usage.tag()), (2, "usage"));
    }

    #[test]
    fn clap_errors_are_single_line() {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = run(["schoenberg", "generate", "--kind", "sphere"], &mut out, &mut err);
        assert_eq!(code, 2);
        let text = String::from_utf8(err).unwrap();
        assert_eq!(text.lines().count(), 1, "{text}");
        assert!(text.starts_with("error[usage]: "));
    }
}
