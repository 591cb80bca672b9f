use std::path::Path;
use std::process::{Command, Output};

use schoenberg::datasets;
use tempfile::TempDir;

fn schoenberg(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_schoenberg"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn ok(dir: &Path, args: &[&str]) -> String {
    let out = schoenberg(dir, args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn stderr_line(out: &Output) -> String {
    let text = String::from_utf8(out.stderr.clone()).unwrap();
    assert_eq!(text.lines().count(), 1, "expected a single line, got {text:?}");
    text.trim_end().to_string()
}

fn write_matrix(path: &Path, rows: &[Vec<f64>]) {
    let text: String = rows
        .iter()
        .map(|r| r.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",") + "\n")
        .collect();
    std::fs::write(path, text).unwrap();
}

#[test]
fn generate_row_counts() {
    let dir = TempDir::new().unwrap();
    ok(dir.path(), &["generate", "--kind", "circles", "--seed", "7", "--out", "pts.csv"]);
    let c = datasets::load_csv(dir.path().join("pts.csv")).unwrap();
    assert_eq!((c.len(), c.labels.unwrap().groups()), (150, 3));

    let grid = ok(dir.path(), &["generate", "--kind", "grid", "--side", "10"]);
    assert_eq!(grid.lines().count(), 101);
    assert_eq!(grid.lines().next(), Some("x1,x2"));

    ok(dir.path(), &["generate", "--kind", "rod", "--n", "1000", "--seed", "1", "--out", "rod.csv"]);
    assert_eq!(datasets::load_csv(dir.path().join("rod.csv")).unwrap().len(), 1000);
}

#[test]
fn identity_embedding_round_trips() {
    let dir = TempDir::new().unwrap();
    ok(dir.path(), &["generate", "--kind", "circles", "--per-group", "10", "--seed", "3", "--out", "pts.csv"]);
    ok(dir.path(), &["embed", "pts.csv", "--out", "emb.csv"]);
    let original = datasets::squared_distances(&datasets::load_csv(dir.path().join("pts.csv")).unwrap());

    // Embedding columns are dim1..dimk plus the label column.
    let text = std::fs::read_to_string(dir.path().join("emb.csv")).unwrap();
    assert!(text.starts_with("dim1,dim2,label\n"), "{}", &text[..40]);
    let renamed = text.replacen("dim1,dim2", "x1,x2", 1);
    let embedded = datasets::squared_distances(&datasets::parse_csv(renamed.as_bytes(), "emb").unwrap());
    let gap = original
        .as_symmetric()
        .as_matrix()
        .max_abs_diff(embedded.as_symmetric().as_matrix());
    assert!(gap < 1e-7, "{gap}");

    let scree = std::fs::read_to_string(dir.path().join("emb.scree.csv")).unwrap();
    let mut lines = scree.lines();
    assert_eq!(lines.next(), Some("dimension,eigenvalue,proportion,cumulative"));
    let last: Vec<f64> = lines.last().unwrap().split(',').map(|c| c.parse().unwrap()).collect();
    assert!((last[3] - 1.0).abs() < 1e-12);
}

#[test]
fn rod_scree_matches_sqrt_spectrum() {
    let dir = TempDir::new().unwrap();
    ok(dir.path(), &["generate", "--kind", "rod", "--n", "400", "--seed", "2", "--out", "rod.csv"]);
    ok(
        dir.path(),
        &["embed", "rod.csv", "--transform", "power:a=0.5", "--dims", "2", "--out", "e.csv", "--scree", "s.csv"],
    );
    let scree = std::fs::read_to_string(dir.path().join("s.csv")).unwrap();
    let first: Vec<f64> = scree.lines().nth(1).unwrap().split(',').map(|c| c.parse().unwrap()).collect();
    assert!((first[2] - 0.608).abs() < 0.02, "{}", first[2]);
    let emb = std::fs::read_to_string(dir.path().join("e.csv")).unwrap();
    assert_eq!(emb.lines().next(), Some("dim1,dim2"));
}

#[test]
fn discriminate_reports_accuracy() {
    let dir = TempDir::new().unwrap();
    ok(dir.path(), &["generate", "--kind", "circles", "--seed", "7", "--out", "pts.csv"]);
    let report = ok(dir.path(), &["discriminate", "pts.csv", "--transform", "gaussian:a=0.65", "--out", "a.csv"]);
    assert_eq!(report.trim(), "accuracy: 1.0000 (150/150)");
    let assignments = std::fs::read_to_string(dir.path().join("a.csv")).unwrap();
    assert_eq!(assignments.lines().next(), Some("object,label,assigned"));
    assert_eq!(assignments.lines().count(), 151);

    // Without --out the CSV goes to stdout and the report to stderr.
    let out = schoenberg(dir.path(), &["discriminate", "pts.csv"]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("object,label,assigned"));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("accuracy: "));
}

#[test]
fn discriminate_with_matrix_and_label_file() {
    let dir = TempDir::new().unwrap();
    let x = [0.0, 1.0, 10.0, 11.0];
    let rows: Vec<Vec<f64>> = x.iter().map(|a| x.iter().map(|b| (a - b) * (a - b)).collect()).collect();
    write_matrix(&dir.path().join("d.csv"), &rows);
    std::fs::write(dir.path().join("labels.csv"), "label\n1\n1\n2\n2\n").unwrap();
    let report = ok(dir.path(), &["discriminate", "d.csv", "--matrix", "--labels", "labels.csv", "--out", "a.csv"]);
    assert_eq!(report.trim(), "accuracy: 1.0000 (4/4)");
}

#[test]
fn sweep_flags_power_above_one() {
    let dir = TempDir::new().unwrap();
    ok(dir.path(), &["generate", "--kind", "circles", "--seed", "7", "--out", "pts.csv"]);
    ok(dir.path(), &["sweep", "pts.csv", "--family", "power", "--grid", "0.1:2:0.1", "--out", "s.csv"]);
    let text = std::fs::read_to_string(dir.path().join("s.csv")).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("parameter,accuracy,invalid_transform"));
    let rows: Vec<(f64, f64, bool)> = lines
        .map(|l| {
            let c: Vec<&str> = l.split(',').collect();
            (c[0].parse().unwrap(), c[1].parse().unwrap(), c[2].parse().unwrap())
        })
        .collect();
    assert_eq!(rows.len(), 20);
    for (a, acc, invalid) in rows {
        assert_eq!(invalid, a > 1.0 + 1e-9, "a={a}");
        assert!((0.0..=1.0).contains(&acc));
    }

    ok(dir.path(), &["sweep", "pts.csv", "--family", "gaussian", "--grid", "0.05:2:0.05", "--out", "g.csv"]);
    let text = std::fs::read_to_string(dir.path().join("g.csv")).unwrap();
    assert!(text.lines().skip(1).any(|l| l.split(',').nth(1) == Some("1")));
}

#[test]
fn check_verdicts() {
    let dir = TempDir::new().unwrap();
    // A generic five-point planar cloud.
    let pts: [(f64, f64); 5] = [(0.0, 0.0), (1.0, 0.2), (0.3, 1.7), (2.5, 0.9), (1.1, 3.0)];
    let d: Vec<Vec<f64>> = pts
        .iter()
        .map(|p| pts.iter().map(|q| (p.0 - q.0).powi(2) + (p.1 - q.1).powi(2)).collect())
        .collect();
    write_matrix(&dir.path().join("d.csv"), &d);
    let squared: Vec<Vec<f64>> = d.iter().map(|r| r.iter().map(|v| v * v).collect()).collect();
    write_matrix(&dir.path().join("d2.csv"), &squared);
    let kernel: Vec<Vec<f64>> = d.iter().map(|r| r.iter().map(|v| (-v).exp()).collect()).collect();
    write_matrix(&dir.path().join("k.csv"), &kernel);

    assert!(ok(dir.path(), &["check", "d.csv", "--matrix"]).contains("c.n.d.: yes"));
    // Oracle: some zero-sum z in {-1, 0, 1}^5 has a positive quadratic form.
    let witness = (0..3i32.pow(5)).any(|code| {
        let z: Vec<f64> = (0..5).map(|k| f64::from((code / 3i32.pow(k)) % 3 - 1)).collect();
        let form: f64 = (0..5).map(|i| (0..5).map(|j| z[i] * squared[i][j] * z[j]).sum::<f64>()).sum();
        z.iter().sum::<f64>() == 0.0 && form > 1e-9
    });
    assert!(witness);
    assert!(ok(dir.path(), &["check", "d2.csv", "--matrix"]).contains("c.n.d.: no"));

    let report = ok(dir.path(), &["check", "k.csv", "--divisible"]);
    assert!(report.contains("p.d.: yes"));
    let powers: Vec<&str> = report.lines().filter(|l| l.starts_with("hadamard power")).collect();
    assert_eq!(powers.len(), 7);
    assert!(powers.iter().all(|l| l.contains("p.d.: yes")), "{report}");
}

#[test]
fn error_exit_codes() {
    let dir = TempDir::new().unwrap();
    ok(dir.path(), &["generate", "--kind", "grid", "--side", "3", "--out", "grid.csv"]);

    // Unlabeled input.
    let out = schoenberg(dir.path(), &["discriminate", "grid.csv"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr_line(&out).starts_with("error[usage]: "));

    // Missing file.
    let out = schoenberg(dir.path(), &["embed", "missing.csv"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr_line(&out).starts_with("error[io]: "));

    // Unwritable output.
    let out = schoenberg(dir.path(), &["generate", "--kind", "grid", "--out", "no/such/dir/x.csv"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr_line(&out).starts_with("error[io]: "));

    // Malformed matrix.
    std::fs::write(dir.path().join("bad.csv"), "0,1\n1\n").unwrap();
    let out = schoenberg(dir.path(), &["check", "bad.csv", "--matrix"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr_line(&out).starts_with("error[parse]: "));

    // Bad transform spec, reported before any file is read.
    let out = schoenberg(dir.path(), &["embed", "missing.csv", "--transform", "gaussian:a=-1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr_line(&out).contains("gaussian:a=-1"));

    // Non-Euclidean dissimilarities: squared gaps (i - j)^4 on a line.
    let rows: Vec<Vec<f64>> = (0..5).map(|i: i32| (0..5).map(|j: i32| f64::from((i - j).pow(4))).collect()).collect();
    write_matrix(&dir.path().join("quartic.csv"), &rows);
    let out = schoenberg(dir.path(), &["embed", "quartic.csv", "--matrix"]);
    assert_eq!(out.status.code(), Some(3));
    let line = stderr_line(&out);
    assert!(line.starts_with("error[numerical]: ") && line.contains("eigenvalue"), "{line}");

    // Clap-level usage errors.
    let out = schoenberg(dir.path(), &["sweep", "grid.csv"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr_line(&out).starts_with("error[usage]: "));
}

#[test]
fn outputs_are_byte_identical_across_runs() {
    let dir = TempDir::new().unwrap();
    for tag in ["a", "b"] {
        ok(dir.path(), &["generate", "--kind", "circles", "--seed", "42", "--out", &format!("p{tag}.csv")]);
        ok(dir.path(), &["sweep", &format!("p{tag}.csv"), "--family", "log", "--grid", "0.5,1,5,20", "--out", &format!("s{tag}.csv")]);
        ok(dir.path(), &["embed", &format!("p{tag}.csv"), "--transform", "rational:a=2", "--out", &format!("e{tag}.csv")]);
    }
    for (a, b) in [("pa.csv", "pb.csv"), ("sa.csv", "sb.csv"), ("ea.csv", "eb.csv"), ("ea.scree.csv", "eb.scree.csv")] {
        let read = |name: &str| std::fs::read(dir.path().join(name)).unwrap();
        assert_eq!(read(a), read(b), "{a}");
    }
}

#[test]
fn mahalanobis_flag() {
    let dir = TempDir::new().unwrap();
    ok(dir.path(), &["generate", "--kind", "circles", "--seed", "7", "--out", "pts.csv"]);
    let out = schoenberg(dir.path(), &["discriminate", "pts.csv", "--mahalanobis"]);
    assert!(out.status.success());
    let out = schoenberg(dir.path(), &["embed", "pts.csv", "--matrix", "--mahalanobis"]);
    assert_eq!(out.status.code(), Some(2));
}
