//! The `entcap` command line.
//!
//! ```text
//! entcap decompose  --matrix PATH [--format json|txt] [--unitary-tol X]
//! entcap invariants --matrix PATH
//! entcap capacity   (--matrix PATH | --alpha A1,A2,A3) --measure M [--tol X] [--numeric-fallback]
//! entcap optimize   (--matrix PATH | --family F --alpha X) --measure M [--anc-a N] [--anc-b N]
//!                   [--restarts N] [--seed N] [--tol X] [--product-start] [--threads N]
//! entcap sweep      (--family F --alpha-min X --alpha-max X --steps N | --triple A1,A2,A3 ...)
//!                   --measure M [--anc-a N] [--anc-b N] [--restarts N] [--seed N] [--tol X]
//!                   [--threads N] [--out PATH]
//! ```
//!
//! Exit status is 0 on success, 1 for domain errors (bad matrix, optimizer
//! failure, out-of-range parameters) and 2 for usage errors. Numbers are
//! printed with 12 significant digits.

pub mod matrix_file;

use std::f64::consts::FRAC_PI_4;
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::canonical::{decompose, local_invariants, CanonicalParams, DECOMPOSE_UNITARY_TOL};
use crate::capacity::{
    capacity_c2, capacity_concurrence, capacity_entropy_no_ancilla, capacity_linear_entropy,
    AnalyticCapacity, SCAN_TOL,
};
use crate::error::{Error, Result};
use crate::measures::MeasureKind;
use crate::optimize::{
    family_sweep, family_unitary, numeric_capacity, product_start_capacity, triple_sweep,
    FamilyKind, GateFamily, OptimizerConfig, SweepRow, FAMILY_RANGE_SLACK,
};
use crate::qcore::matrix::{ComplexMatrix, C64};
use crate::qcore::state::PureState;

pub use matrix_file::{parse_complex, parse_matrix_file, parse_matrix_str, MatrixFormat, DEFAULT_UNITARY_TOL};

#[derive(Parser, Debug)]
#[command(name = "entcap", version, about = "Entangling capacity of two-qubit unitaries")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Canonical parameters and eigenphases of a unitary.
    Decompose(MatrixArgs),
    /// Local invariants (spectrum of Ũ U).
    Invariants(MatrixArgs),
    /// Closed-form capacity without ancillas.
    Capacity(CapacityArgs),
    /// Numerical capacity at a single gate.
    Optimize(OptimizeArgs),
    /// Numerical capacities over a gate family or a list of canonical triples, as CSV.
    Sweep(SweepArgs),
}

#[derive(Args, Debug)]
struct MatrixArgs {
    #[arg(long)]
    matrix: PathBuf,
    /// Input format; inferred from the file extension when omitted.
    #[arg(long)]
    format: Option<MatrixFormat>,
    #[arg(long, default_value_t = DEFAULT_UNITARY_TOL)]
    unitary_tol: f64,
}

impl MatrixArgs {
    fn load(&self) -> Result<ComplexMatrix> {
        load_matrix(&self.matrix, self.format, self.unitary_tol)
    }
}

/// Reads a gate. Matrices accepted only thanks to a tolerance looser than
/// [`DECOMPOSE_UNITARY_TOL`] are replaced by their nearest unitary.
fn load_matrix(path: &Path, format: Option<MatrixFormat>, unitary_tol: f64) -> Result<ComplexMatrix> {
    let format = format.unwrap_or_else(|| MatrixFormat::from_path(path));
    let m = parse_matrix_file(path, format, unitary_tol)?;
    if m.unitarity_residual() > DECOMPOSE_UNITARY_TOL {
        m.nearest_unitary()
    } else {
        Ok(m)
    }
}

#[derive(Args, Debug)]
struct CapacityArgs {
    #[arg(long, conflicts_with = "alpha", required_unless_present = "alpha")]
    matrix: Option<PathBuf>,
    #[arg(long)]
    format: Option<MatrixFormat>,
    #[arg(long, default_value_t = DEFAULT_UNITARY_TOL)]
    unitary_tol: f64,
    /// Canonical triple instead of a matrix file.
    #[arg(long, value_parser = parse_triple, allow_hyphen_values = true)]
    alpha: Option<[f64; 3]>,
    #[arg(long)]
    measure: MeasureKind,
    /// Refinement tolerance for the entropy scan.
    #[arg(long, default_value_t = SCAN_TOL)]
    tol: f64,
    /// Also run the numerical optimizer when the closed form is extrapolated
    /// or gives no optimal state.
    #[arg(long)]
    numeric_fallback: bool,
    #[arg(long, default_value_t = 32)]
    restarts: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args, Debug)]
struct SearchArgs {
    #[arg(long)]
    measure: MeasureKind,
    #[arg(long, default_value_t = 0, value_parser = clap::value_parser!(u8).range(0..=2))]
    anc_a: u8,
    #[arg(long, default_value_t = 0, value_parser = clap::value_parser!(u8).range(0..=2))]
    anc_b: u8,
    /// Restart count; defaults to 32, or 64 with two ancillas on each side.
    #[arg(long)]
    restarts: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Objective tolerance of the local ascent.
    #[arg(long)]
    tol: Option<f64>,
    /// Worker threads for restarts (results do not depend on it).
    #[arg(long)]
    threads: Option<usize>,
}

impl SearchArgs {
    fn config(&self) -> OptimizerConfig {
        let mut cfg = OptimizerConfig::for_ancillas(self.anc_a as usize, self.anc_b as usize).with_seed(self.seed);
        if let Some(r) = self.restarts {
            cfg.restarts = r;
        }
        if let Some(t) = self.tol {
            cfg.objective_tolerance = t;
        }
        cfg.threads = self.threads;
        cfg
    }
}

#[derive(Args, Debug)]
struct OptimizeArgs {
    #[arg(long, conflicts_with = "family", required_unless_present = "family")]
    matrix: Option<PathBuf>,
    #[arg(long)]
    format: Option<MatrixFormat>,
    #[arg(long, default_value_t = DEFAULT_UNITARY_TOL)]
    unitary_tol: f64,
    #[arg(long, requires = "alpha")]
    family: Option<FamilyKind>,
    /// Family parameter in [0, pi/4].
    #[arg(long, requires = "family", allow_hyphen_values = true)]
    alpha: Option<f64>,
    /// Restrict inputs to products across the cut.
    #[arg(long)]
    product_start: bool,
    #[command(flatten)]
    search: SearchArgs,
}

#[derive(Args, Debug)]
struct SweepArgs {
    #[arg(long, conflicts_with = "triple", required_unless_present = "triple",
          requires_all = ["alpha_min", "alpha_max", "steps"])]
    family: Option<FamilyKind>,
    #[arg(long, allow_hyphen_values = true)]
    alpha_min: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    alpha_max: Option<f64>,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    steps: Option<u64>,
    /// Canonical triple; may be repeated.
    #[arg(long, value_parser = parse_triple, allow_hyphen_values = true)]
    triple: Vec<[f64; 3]>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    search: SearchArgs,
}

/// Three comma-separated numbers. Entries that overshoot `π/4` by no more
/// than [`FAMILY_RANGE_SLACK`] are taken as `π/4`, so a rounded value such as
/// `0.7853981634` stays canonical.
fn parse_triple(s: &str) -> std::result::Result<[f64; 3], String> {
    let snap = |x: f64| {
        if x > FRAC_PI_4 && x <= FRAC_PI_4 + FAMILY_RANGE_SLACK {
            FRAC_PI_4
        } else {
            x
        }
    };
    let parts: Vec<f64> = s
        .split(',')
        .map(|p| p.trim().parse::<f64>().map(snap).map_err(|e| format!("{p:?}: {e}")))
        .collect::<std::result::Result<_, _>>()?;
    parts
        .try_into()
        .map_err(|v: Vec<f64>| format!("expected three comma-separated numbers, got {}", v.len()))
}

/// `%.12g`: 12 significant digits, trailing zeros removed.
pub fn fmt_g12(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{x:.11e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-5..12).contains(&exp) {
        let m = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{m}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (11 - exp).max(0) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn fmt_complex(z: C64) -> String {
    if z.im == 0.0 {
        return fmt_g12(z.re);
    }
    if z.re == 0.0 {
        return format!("{}i", fmt_g12(z.im));
    }
    let im = fmt_g12(z.im);
    if im.starts_with('-') {
        format!("{}{im}i", fmt_g12(z.re))
    } else {
        format!("{}+{im}i", fmt_g12(z.re))
    }
}

fn fmt_list<T>(xs: impl IntoIterator<Item = T>, f: impl Fn(T) -> String) -> String {
    let parts: Vec<String> = xs.into_iter().map(f).collect();
    format!("({})", parts.join(", "))
}

fn fmt_state(psi: &PureState) -> String {
    fmt_list(psi.amplitudes().iter().copied(), fmt_complex)
}

/// CSV text for sweep rows. Rows from [`crate::optimize::triple_sweep`] get
/// three parameter columns instead of one.
pub fn sweep_csv(rows: &[SweepRow], triples: bool) -> String {
    let mut out = String::new();
    out.push_str(if triples {
        "alpha1,alpha2,alpha3,capacity,e0,ef,converged\n"
    } else {
        "alpha,capacity,e0,ef,converged\n"
    });
    for r in rows {
        let lead = if triples {
            r.params.iter().map(|&a| fmt_g12(a)).collect::<Vec<_>>().join(",")
        } else {
            fmt_g12(r.alpha)
        };
        out.push_str(&format!(
            "{lead},{},{},{},{}\n",
            fmt_g12(r.capacity),
            fmt_g12(r.initial_entanglement),
            fmt_g12(r.final_entanglement),
            r.converged_restarts
        ));
    }
    out
}

/// Evenly spaced grid including both ends.
pub fn linspace(lo: f64, hi: f64, steps: usize) -> Vec<f64> {
    if steps == 1 {
        return vec![lo];
    }
    (0..steps)
        .map(|k| lo + (hi - lo) * k as f64 / (steps - 1) as f64)
        .collect()
}

/// Runs the command line with `args` (program name first), writing results
/// to `out` and diagnostics to `err`. Returns the exit status.
pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { write!(out, "{text}") } else { write!(err, "{text}") };
            return code;
        }
    };
    match dispatch(cli.command, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            1
        }
    }
}

/// [`run_with`] on the process's standard streams.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(args, &mut stdout.lock(), &mut stderr.lock())
}

fn dispatch(cmd: Command, out: &mut dyn Write) -> Result<()> {
    match cmd {
        Command::Decompose(a) => {
            let p = decompose(&a.load()?)?;
            writeln!(out, "alpha = {}", fmt_list(p.alpha(), fmt_g12))?;
            writeln!(out, "conjugated = {}", p.conjugated())?;
            writeln!(out, "lambdas = {}", fmt_list(p.lambdas(), fmt_g12))?;
        }
        Command::Invariants(a) => {
            let inv = local_invariants(&a.load()?)?;
            writeln!(out, "invariants = {}", fmt_list(inv.values(), fmt_complex))?;
            writeln!(out, "phases = {}", fmt_list(inv.phases(), fmt_g12))?;
        }
        Command::Capacity(a) => capacity_command(a, out)?,
        Command::Optimize(a) => {
            let u = match (&a.matrix, a.family, a.alpha) {
                (Some(path), _, _) => load_matrix(path, a.format, a.unitary_tol)?,
                (None, Some(kind), Some(alpha)) => family_unitary(&GateFamily::new(kind, alpha)?)?,
                _ => return Err(Error::OutOfRange("need --matrix or --family with --alpha".into())),
            };
            let s = &a.search;
            let cfg = s.config();
            let (na, nb) = (s.anc_a as usize, s.anc_b as usize);
            let r = if a.product_start {
                product_start_capacity(&u, s.measure, na, nb, &cfg)?
            } else {
                numeric_capacity(&u, s.measure, na, nb, &cfg)?
            };
            writeln!(out, "capacity = {}", fmt_g12(r.value))?;
            writeln!(out, "initial_entanglement = {}", fmt_g12(r.initial_entanglement))?;
            writeln!(out, "final_entanglement = {}", fmt_g12(r.final_entanglement))?;
            writeln!(out, "converged_restarts = {}/{}", r.converged_restarts, r.restarts)?;
            writeln!(out, "best_restart_seed = {}", r.best_restart_seed)?;
            writeln!(out, "optimal_state = {}", fmt_state(&r.optimal_state))?;
        }
        Command::Sweep(a) => {
            let s = &a.search;
            let cfg = s.config();
            let (na, nb) = (s.anc_a as usize, s.anc_b as usize);
            let (rows, triples) = match a.family {
                Some(kind) => {
                    let (lo, hi, n) = (
                        a.alpha_min.expect("required by clap"),
                        a.alpha_max.expect("required by clap"),
                        a.steps.expect("required by clap") as usize,
                    );
                    (family_sweep(kind, &linspace(lo, hi, n), s.measure, na, nb, &cfg)?, false)
                }
                None => (triple_sweep(&a.triple, s.measure, na, nb, &cfg)?, true),
            };
            let csv = sweep_csv(&rows, triples);
            match &a.out {
                Some(path) => std::fs::write(path, csv)
                    .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?,
                None => out.write_all(csv.as_bytes())?,
            }
        }
    }
    Ok(())
}

fn capacity_command(a: CapacityArgs, out: &mut dyn Write) -> Result<()> {
    let (params, unitary) = match (&a.matrix, a.alpha) {
        (Some(path), _) => {
            let u = load_matrix(path, a.format, a.unitary_tol)?;
            (decompose(&u)?, Some(u))
        }
        (None, Some(alpha)) => (CanonicalParams::canonical(alpha)?, None),
        _ => return Err(Error::OutOfRange("need --matrix or --alpha".into())),
    };
    let cap: AnalyticCapacity = match a.measure {
        MeasureKind::ConcurrenceSquared => capacity_c2(&params)?,
        MeasureKind::Concurrence => capacity_concurrence(&params)?,
        MeasureKind::EntropyOfEntanglement => capacity_entropy_no_ancilla(&params, a.tol)?,
        MeasureKind::LinearEntropy => capacity_linear_entropy(&params)?,
    };
    writeln!(out, "capacity = {}", fmt_g12(cap.value))?;
    if let Some(r) = cap.rescaled_value {
        writeln!(out, "rescaled_capacity = {}", fmt_g12(r))?;
    }
    writeln!(out, "region = {}", cap.region)?;
    writeln!(out, "initial_entanglement = {}", fmt_g12(cap.initial_entanglement))?;
    match &cap.optimal_state {
        Some(psi) => writeln!(out, "optimal_state = {}", fmt_state(psi))?,
        None => writeln!(out, "optimal_state = unresolved")?,
    }
    if cap.extrapolated {
        writeln!(out, "extrapolated = true")?;
    }
    if a.numeric_fallback && (cap.extrapolated || cap.optimal_state.is_none()) {
        let u = unitary.unwrap_or_else(|| crate::canonical::build_canonical_unitary(&params));
        let cfg = OptimizerConfig::default().with_restarts(a.restarts).with_seed(a.seed);
        let r = numeric_capacity(&u, a.measure, 0, 0, &cfg)?;
        writeln!(out, "numeric_capacity = {}", fmt_g12(r.value))?;
        writeln!(out, "numeric_optimal_state = {}", fmt_state(&r.optimal_state))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(fmt_g12(std::f64::consts::FRAC_PI_4), "0.785398163397");
        assert_eq!(fmt_g12(1.0), "1");
        assert_eq!(fmt_g12(0.0), "0");
        assert_eq!(fmt_g12(-0.0), "0");
        assert_eq!(fmt_g12(-2.5), "-2.5");
        assert_eq!(fmt_g12(1e-7), "1e-07");
        assert_eq!(fmt_g12(1.5e20), "1.5e+20");
        assert_eq!(fmt_g12(123456789012.4), "123456789012");
        assert_eq!(fmt_g12(0.999999999999999), "1");
        assert_eq!(fmt_g12(f64::NAN), "nan");
    }

    #[test]
    fn formatted_values_round_trip_at_twelve_digits() {
        for &x in &[0.6008760, 1.0 / 3.0, -0.000123456789012345, 2.0f64.sqrt() * 1e9] {
            let back: f64 = fmt_g12(x).parse().unwrap();
            assert!((back - x).abs() <= 5e-12 * x.abs());
        }
    }

    #[test]
    fn complex_formatting_parses_back() {
        for z in [C64::new(0.5, -0.25), C64::new(0.0, 1.0), C64::new(-1.0, 0.0), C64::new(1e-9, 3.0)] {
            assert_eq!(parse_complex(&fmt_complex(z)).unwrap(), z);
        }
    }

    #[test]
    fn grid() {
        assert_eq!(linspace(0.0, 1.0, 1), vec![0.0]);
        assert_eq!(linspace(0.0, 1.0, 3), vec![0.0, 0.5, 1.0]);
    }

    #[test]
    fn triples_parse() {
        assert_eq!(parse_triple("0.1, 0.2,-0.05").unwrap(), [0.1, 0.2, -0.05]);
        assert!(parse_triple("0.1,0.2").is_err());
        assert!(parse_triple("a,b,c").is_err());
        assert_eq!(parse_triple("0.7853981634,0,0").unwrap()[0], FRAC_PI_4);
        assert_eq!(parse_triple("0.79,0,0").unwrap()[0], 0.79);
    }
}
