use std::f64::consts::FRAC_PI_4;
use std::path::Path;

use entcap::cli::{fmt_g12, parse_matrix_file, run_with, MatrixFormat};
use entcap::qcore::gates::{cnot, swap};
use entcap::ComplexMatrix;
use tempfile::TempDir;

struct Run {
    code: i32,
    out: String,
    err: String,
}

fn entcap(args: &[&str]) -> Run {
    let argv = std::iter::once("entcap").chain(args.iter().copied());
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run_with(argv, &mut out, &mut err);
    Run {
        code,
        out: String::from_utf8(out).unwrap(),
        err: String::from_utf8(err).unwrap(),
    }
}

fn field<'a>(out: &'a str, key: &str) -> &'a str {
    out.lines()
        .find_map(|l| l.strip_prefix(key).and_then(|r| r.strip_prefix(" = ")))
        .unwrap_or_else(|| panic!("no {key} in {out}"))
}

fn json_text(m: &ComplexMatrix) -> String {
    let rows: Vec<String> = (0..4)
        .map(|r| {
            let cells: Vec<String> = (0..4)
                .map(|c| {
                    let z = m.get(r, c);
                    format!("[{}, {}]", z.re, z.im)
                })
                .collect();
            format!("[{}]", cells.join(", "))
        })
        .collect();
    format!("{{\"matrix\": [{}]}}", rows.join(", "))
}

fn write(dir: &TempDir, name: &str, text: &str) -> String {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_owned()
}

#[test]
fn decompose_cnot_json() {
    let dir = TempDir::new().unwrap();
    let path = write(&dir, "cnot.json", &json_text(&cnot()));
    let r = entcap(&["decompose", "--matrix", &path]);
    assert_eq!(r.code, 0, "{}", r.err);
    assert_eq!(field(&r.out, "alpha"), "(0.785398163397, 0, 0)");
    assert_eq!(field(&r.out, "conjugated"), "false");
}

#[test]
fn text_and_json_agree() {
    let dir = TempDir::new().unwrap();
    let json = write(&dir, "swap.json", &json_text(&swap()));
    let txt = write(&dir, "swap.dat", "# swap\n1 0 0 0\n0 0 1 0\n\n0 1 0 0\n0 0 0 1\n");
    let a = entcap(&["decompose", "--matrix", &json]);
    let b = entcap(&["decompose", "--matrix", &txt, "--format", "txt"]);
    assert_eq!((a.code, b.code), (0, 0));
    assert_eq!(a.out, b.out);
    assert_eq!(field(&a.out, "alpha"), "(0.785398163397, 0.785398163397, 0.785398163397)");
}

#[test]
fn complex_text_entries() {
    let dir = TempDir::new().unwrap();
    // diag(1, i, i, 1) written with assorted spellings
    let path = write(&dir, "u.txt", "1+0i 0 0 0\n0 i 0 0\n0 0 0+1i 0\n0 0 0 1.0\n");
    let u = parse_matrix_file(Path::new(&path), MatrixFormat::Txt, 1e-8).unwrap();
    assert_eq!(u.get(1, 1).im, 1.0);
    let r = entcap(&["invariants", "--matrix", &path]);
    assert_eq!(r.code, 0, "{}", r.err);
    assert!(r.out.starts_with("invariants = ("));
    assert!(r.out.contains("phases = ("));
}

#[test]
fn capacity_of_cnot_is_one_ebit() {
    let dir = TempDir::new().unwrap();
    let path = write(&dir, "cnot.json", &json_text(&cnot()));
    let r = entcap(&["capacity", "--matrix", &path, "--measure", "c2"]);
    assert_eq!(r.code, 0, "{}", r.err);
    assert_eq!(field(&r.out, "capacity"), "1");
    assert_eq!(field(&r.out, "region"), "OneEbit");
}

#[test]
fn capacity_from_triple_with_fallback() {
    let r = entcap(&[
        "capacity", "--alpha", "0.7853981634,0.7853981634,0.3", "--measure", "concurrence",
        "--numeric-fallback", "--restarts", "8",
    ]);
    assert_eq!(r.code, 0, "{}", r.err);
    assert_eq!(field(&r.out, "region"), "Region2");
    assert_eq!(field(&r.out, "extrapolated"), "true");
    let closed: f64 = field(&r.out, "capacity").parse().unwrap();
    let numeric: f64 = field(&r.out, "numeric_capacity").parse().unwrap();
    assert!((closed - numeric).abs() < 1e-6, "{closed} vs {numeric}");
}

#[test]
fn linear_entropy_prints_both_scales() {
    let r = entcap(&["capacity", "--alpha", "0.3,0.1,0", "--measure", "linear"]);
    assert_eq!(r.code, 0, "{}", r.err);
    let v: f64 = field(&r.out, "capacity").parse().unwrap();
    let w: f64 = field(&r.out, "rescaled_capacity").parse().unwrap();
    assert!((w - 2.0 * v).abs() < 1e-11);
}

#[test]
fn swap_sweep_csv() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("swap.csv");
    let r = entcap(&[
        "sweep", "--family", "swap", "--alpha-min", "0", "--alpha-max", "0.7853981634", "--steps", "16",
        "--measure", "entropy", "--anc-a", "1", "--anc-b", "1", "--restarts", "4", "--seed", "3",
        "--out", out.to_str().unwrap(),
    ]);
    assert_eq!(r.code, 0, "{}", r.err);
    assert!(r.out.is_empty());
    let csv = std::fs::read_to_string(&out).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("alpha,capacity,e0,ef,converged"));
    let rows: Vec<Vec<f64>> = lines
        .map(|l| l.split(',').map(|x| x.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 16);
    assert_eq!(rows[0][0], 0.0);
    assert_eq!(fmt_g12(rows[15][0]), fmt_g12(FRAC_PI_4));
    for row in &rows {
        assert_eq!(row.len(), 5);
        assert!((row[1] - (row[3] - row[2])).abs() < 1e-9, "{row:?}");
    }
    assert!(rows[15][1] > 2.0 - 1e-6);
}

#[test]
fn triple_sweep_to_stdout() {
    let r = entcap(&[
        "sweep", "--triple", "0.785398163397,0,0", "--triple", "0.2,0.1,-0.05", "--measure", "c2",
        "--restarts", "4",
    ]);
    assert_eq!(r.code, 0, "{}", r.err);
    let lines: Vec<&str> = r.out.lines().collect();
    assert_eq!(lines[0], "alpha1,alpha2,alpha3,capacity,e0,ef,converged");
    assert_eq!(lines.len(), 3);
    assert!(lines[1].starts_with("0.785398163397,0,0,1,"), "{}", lines[1]);
    assert!(lines[2].starts_with("0.2,0.1,-0.05,"));
}

#[test]
fn optimize_family_member() {
    let r = entcap(&[
        "optimize", "--family", "cnot", "--alpha", "0.7853981634", "--measure", "entropy", "--restarts", "4",
        "--seed", "9", "--threads", "2",
    ]);
    assert_eq!(r.code, 0, "{}", r.err);
    let c: f64 = field(&r.out, "capacity").parse().unwrap();
    assert!((c - 1.0).abs() < 1e-6);
    assert_eq!(field(&r.out, "converged_restarts"), "4/4");
    assert!(field(&r.out, "optimal_state").starts_with('('));

    let p = entcap(&[
        "optimize", "--family", "cnot", "--alpha", "0.3", "--measure", "entropy", "--anc-a", "1", "--anc-b",
        "1", "--product-start", "--restarts", "4",
    ]);
    assert_eq!(p.code, 0, "{}", p.err);
    assert_eq!(field(&p.out, "initial_entanglement"), "0");
}

#[test]
fn unknown_flags_are_usage_errors() {
    for sub in ["decompose", "invariants", "capacity", "optimize", "sweep"] {
        let r = entcap(&[sub, "--bogus-flag"]);
        assert_eq!(r.code, 2, "{sub}");
        assert!(r.err.contains("--bogus-flag"), "{sub}: {}", r.err);
    }
    assert_eq!(entcap(&["frobnicate"]).code, 2);
    assert_eq!(entcap(&[]).code, 2);
    assert_eq!(entcap(&["optimize", "--family", "cnot", "--alpha", "0.1", "--measure", "c2", "--anc-a", "3"]).code, 2);
    assert_eq!(entcap(&["capacity", "--alpha", "0.1,0.2", "--measure", "c2"]).code, 2);
    assert_eq!(entcap(&["capacity", "--alpha", "0.1,0.1,0", "--measure", "nope"]).code, 2);
}

#[test]
fn help_exits_zero() {
    let r = entcap(&["--help"]);
    assert_eq!(r.code, 0);
    assert!(r.out.contains("sweep"));
}

#[test]
fn domain_errors_exit_one() {
    let dir = TempDir::new().unwrap();
    let bad = write(&dir, "bad.txt", "1 0 0 0\n0 1 0 0\n0 0 1 0\n0 0 0 2\n");
    let r = entcap(&["decompose", "--matrix", &bad]);
    assert_eq!(r.code, 1);
    assert!(r.err.starts_with("error: "), "{}", r.err);
    assert!(r.err.contains("unitar"), "{}", r.err);

    let wide = write(&dir, "wide.txt", "1 0 0 0 0\n0 1 0 0\n0 0 1 0\n0 0 0 1\n");
    let r = entcap(&["decompose", "--matrix", &wide]);
    assert_eq!(r.code, 1);
    assert!(r.err.contains("row 1"), "{}", r.err);

    let garbage = write(&dir, "g.txt", "1 0 0 0\n0 1 0 0\n0 0 x 0\n0 0 0 1\n");
    assert_eq!(entcap(&["decompose", "--matrix", &garbage]).code, 1);

    let missing = dir.path().join("missing.json");
    assert_eq!(entcap(&["decompose", "--matrix", missing.to_str().unwrap()]).code, 1);

    let r = entcap(&["capacity", "--alpha", "0.5,0.6,0", "--measure", "c2"]);
    assert_eq!(r.code, 1, "non-canonical triple");

    let r = entcap(&["optimize", "--family", "cnot", "--alpha", "0.9", "--measure", "c2"]);
    assert_eq!(r.code, 1, "family parameter out of range");

    let r = entcap(&["optimize", "--family", "cnot", "--alpha", "0.3", "--measure", "c2", "--anc-a", "1"]);
    assert_eq!(r.code, 1, "concurrence with ancillas");
}

#[test]
fn loose_unitarity_tolerance_is_honoured() {
    let dir = TempDir::new().unwrap();
    let path = write(&dir, "u.txt", "1.000001 0 0 0\n0 1 0 0\n0 0 0 1\n0 0 1 0\n");
    assert_eq!(entcap(&["decompose", "--matrix", &path]).code, 1);
    let r = entcap(&["decompose", "--matrix", &path, "--unitary-tol", "1e-5"]);
    assert_eq!(r.code, 0, "{}", r.err);
}

#[test]
fn sweep_is_independent_of_threads() {
    let args = |threads: &'static str| {
        entcap(&[
            "sweep", "--family", "dcnot", "--alpha-min", "0.1", "--alpha-max", "0.7", "--steps", "3",
            "--measure", "linear", "--anc-a", "1", "--restarts", "6", "--seed", "11", "--threads", threads,
        ])
    };
    let (a, b) = (args("1"), args("3"));
    assert_eq!((a.code, b.code), (0, 0));
    assert_eq!(a.out, b.out);
}
