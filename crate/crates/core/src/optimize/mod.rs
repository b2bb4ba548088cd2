//! Numerical entangling capacities.
//!
//! The capacity of `U` for a measure `E` is the maximum of
//! `E(U|ψ⟩) - E(|ψ⟩)` over initial pure states. Here the maximum is searched
//! by multi-start projected gradient ascent over states of
//! `2 + anc_a + anc_b` qubits laid out as
//!
//! ```text
//! (Alice ancillas..., Alice shared, Bob shared, Bob ancillas...)
//! ```
//!
//! with `U` acting on the two shared qubits and the cut separating all of
//! Alice's qubits from all of Bob's.
//!
//! Restart `r` is seeded with `master_seed + r`; restarts are independent and
//! the best one is chosen by value, ties going to the lowest seed, so the
//! outcome does not depend on how many worker threads run them.

pub(crate) mod ascent;
mod objective;

use std::f64::consts::FRAC_PI_4;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::canonical::{build_canonical_unitary, CanonicalParams};
use crate::error::{Error, Result};
use crate::measures::{value_and_gradient_unchecked, MeasureKind};
use crate::qcore::matrix::{vec_norm, ComplexMatrix, C64, UNITARY_TOL};
use crate::qcore::random::{haar_amplitudes, rng_from_seed};
use crate::qcore::state::{Party, PureState};

pub use ascent::{CONVERGED_GRAD_NORM, FD_STEP, MAX_MOVE};

/// Restarts that stall above the gradient threshold are continued once with
/// the objective tolerance scaled by this factor.
pub const POLISH_FACTOR: f64 = 1e-4;
use objective::{CapacityObjective, MinInitialObjective, StartKind};

/// How gradients are obtained during ascent.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GradientMode {
    /// Central differences with step [`FD_STEP`].
    FiniteDifference,
    /// Closed-form gradients (all built-in measures have them).
    AnalyticWhereAvailable,
}

#[derive(Clone, Debug, PartialEq)]
pub struct OptimizerConfig {
    pub restarts: usize,
    pub max_iterations: usize,
    pub objective_tolerance: f64,
    pub step_tolerance: f64,
    pub master_seed: u64,
    pub gradient_mode: GradientMode,
    /// Worker threads for restarts; `None` uses the global rayon pool.
    pub threads: Option<usize>,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            restarts: 32,
            max_iterations: 5000,
            objective_tolerance: 1e-8,
            step_tolerance: 1e-10,
            master_seed: 0,
            gradient_mode: GradientMode::AnalyticWhereAvailable,
            threads: None,
        }
    }
}

impl OptimizerConfig {
    /// Defaults with the restart count scaled for the state dimension:
    /// 64 restarts once either side carries two ancillas.
    pub fn for_ancillas(anc_a: usize, anc_b: usize) -> Self {
        let restarts = if anc_a + anc_b >= 4 { 64 } else { 32 };
        Self {
            restarts,
            ..Self::default()
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.master_seed = seed;
        self
    }

    pub fn with_restarts(mut self, restarts: usize) -> Self {
        self.restarts = restarts;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.restarts == 0 || self.max_iterations == 0 {
            return Err(Error::OutOfRange(
                "restarts and max_iterations must be positive".into(),
            ));
        }
        if !(self.objective_tolerance > 0.0 && self.step_tolerance > 0.0) {
            return Err(Error::OutOfRange("tolerances must be positive".into()));
        }
        if self.threads == Some(0) {
            return Err(Error::OutOfRange("thread count must be positive".into()));
        }
        Ok(())
    }
}

/// Outcome of a numerical capacity search.
#[derive(Clone, Debug, PartialEq)]
pub struct CapacityResult {
    /// `final_entanglement - initial_entanglement`.
    pub value: f64,
    pub optimal_state: PureState,
    pub initial_entanglement: f64,
    pub final_entanglement: f64,
    pub converged_restarts: usize,
    pub restarts: usize,
    pub best_restart_seed: u64,
}

/// Qubit labels for the ancilla layout described in the module docs.
pub fn layout_partition(anc_a: usize, anc_b: usize) -> Vec<Party> {
    std::iter::repeat_n(Party::A, anc_a + 1)
        .chain(std::iter::repeat_n(Party::B, anc_b + 1))
        .collect()
}

fn check_inputs(
    u: &ComplexMatrix,
    measure: MeasureKind,
    anc_a: usize,
    anc_b: usize,
    cfg: &OptimizerConfig,
) -> Result<()> {
    cfg.validate()?;
    if u.rows() != 4 || u.cols() != 4 {
        return Err(Error::DimensionMismatch("two-qubit gate must be 4x4".into()));
    }
    let residual = u.unitarity_residual();
    if residual > 1e-8 {
        return Err(Error::NotUnitary { residual });
    }
    if anc_a > 2 || anc_b > 2 {
        return Err(Error::OutOfRange(format!(
            "at most two ancillas per side (got {anc_a} + {anc_b})"
        )));
    }
    if measure.is_two_qubit_only() && anc_a + anc_b > 0 {
        return Err(Error::UnsupportedMeasureForDimension {
            measure: if measure == MeasureKind::Concurrence {
                "concurrence"
            } else {
                "concurrence squared"
            },
            n_qubits: 2 + anc_a + anc_b,
        });
    }
    Ok(())
}

fn with_pool<T: Send>(cfg: &OptimizerConfig, f: impl FnOnce() -> T + Send) -> T {
    match cfg.threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .expect("thread pool")
            .install(f),
        None => f(),
    }
}

struct RestartOutcome {
    seed: u64,
    x: Vec<C64>,
    value: f64,
    grad_norm: f64,
    converged: bool,
}

fn multi_start(obj: &CapacityObjective, cfg: &OptimizerConfig) -> Result<(RestartOutcome, usize)> {
    let blocks = obj.block_sizes();
    let outcomes: Vec<RestartOutcome> = with_pool(cfg, || {
        (0..cfg.restarts as u64)
            .into_par_iter()
            .map(|r| {
                let seed = cfg.master_seed.wrapping_add(r);
                let mut rng = rng_from_seed(seed);
                let x0: Vec<C64> = blocks
                    .iter()
                    .flat_map(|&len| haar_amplitudes(len, &mut rng))
                    .collect();
                let mut out = ascent::ascend(obj, x0, cfg);
                if !out.converged && !out.hit_iteration_limit {
                    // stalled on a flat maximum: one pass with a finer stall threshold
                    let fine = OptimizerConfig {
                        objective_tolerance: cfg.objective_tolerance * POLISH_FACTOR,
                        ..cfg.clone()
                    };
                    let polished = ascent::ascend(obj, out.x.clone(), &fine);
                    if polished.value >= out.value {
                        out = polished;
                    }
                }
                RestartOutcome {
                    seed,
                    x: out.x,
                    value: out.value,
                    grad_norm: out.grad_norm,
                    converged: out.converged,
                }
            })
            .collect()
    });
    let converged = outcomes.iter().filter(|o| o.converged).count();
    if converged == 0 {
        let best_grad = outcomes.iter().map(|o| o.grad_norm).fold(f64::INFINITY, f64::min);
        return Err(Error::ConvergenceFailure(format!(
            "none of {} restarts reached gradient norm {CONVERGED_GRAD_NORM:e} (smallest {best_grad:.2e})",
            cfg.restarts
        )));
    }
    let best = outcomes
        .into_iter()
        .reduce(|a, b| {
            if b.value > a.value || (b.value == a.value && b.seed < a.seed) {
                b
            } else {
                a
            }
        })
        .expect("at least one restart");
    Ok((best, converged))
}

fn finish(
    obj: &CapacityObjective,
    best: RestartOutcome,
    converged: usize,
    cfg: &OptimizerConfig,
) -> CapacityResult {
    let amps = obj.full_state(&best.x);
    let partition = obj.partition().to_vec();
    let initial = match obj.start() {
        StartKind::Product => 0.0,
        StartKind::Unrestricted => {
            value_and_gradient_unchecked(obj.measure(), &amps, &partition).0
        }
    };
    let evolved = obj.evolve(&amps);
    let final_e = value_and_gradient_unchecked(obj.measure(), &evolved, &partition).0;
    CapacityResult {
        value: final_e - initial,
        optimal_state: PureState::from_parts_unchecked(amps, partition),
        initial_entanglement: initial,
        final_entanglement: final_e,
        converged_restarts: converged,
        restarts: cfg.restarts,
        best_restart_seed: best.seed,
    }
}

/// Capacity over arbitrary (possibly entangled) initial states.
///
/// The concurrence has a cone-shaped kink at every product state, and ascent
/// creeps towards such an apex only slowly. For that measure the product
/// input search is run as well and the better of the two results returned.
pub fn numeric_capacity(
    u: &ComplexMatrix,
    measure: MeasureKind,
    anc_a: usize,
    anc_b: usize,
    cfg: &OptimizerConfig,
) -> Result<CapacityResult> {
    check_inputs(u, measure, anc_a, anc_b, cfg)?;
    let obj = CapacityObjective::new(u, measure, anc_a, anc_b, StartKind::Unrestricted);
    let (best, converged) = multi_start(&obj, cfg)?;
    let general = finish(&obj, best, converged, cfg);
    if measure != MeasureKind::Concurrence {
        return Ok(general);
    }
    match product_start_capacity(u, measure, anc_a, anc_b, cfg) {
        Ok(p) if p.value > general.value => Ok(CapacityResult {
            converged_restarts: general.converged_restarts,
            ..p
        }),
        _ => Ok(general),
    }
}

/// Capacity over initial states `|ψ_A⟩ ⊗ |ψ_B⟩` that are products across
/// the cut. Each factor may still entangle a party's shared qubit with its
/// own ancillas.
pub fn product_start_capacity(
    u: &ComplexMatrix,
    measure: MeasureKind,
    anc_a: usize,
    anc_b: usize,
    cfg: &OptimizerConfig,
) -> Result<CapacityResult> {
    check_inputs(u, measure, anc_a, anc_b, cfg)?;
    let obj = CapacityObjective::new(u, measure, anc_a, anc_b, StartKind::Product);
    let (best, converged) = multi_start(&obj, cfg)?;
    Ok(finish(&obj, best, converged, cfg))
}

/// Among states whose capacity gain is within `slack` of `best.value`,
/// looks for one with smaller initial entanglement.
///
/// Penalty method: maximize `-E(ψ) - κ max(0, target - ΔE(ψ))²` for
/// increasing `κ`, starting from `best.optimal_state`. Returns `best`
/// unchanged if no improvement is found.
pub fn min_initial_entanglement(
    u: &ComplexMatrix,
    measure: MeasureKind,
    anc_a: usize,
    anc_b: usize,
    best: &CapacityResult,
    slack: f64,
    cfg: &OptimizerConfig,
) -> Result<CapacityResult> {
    check_inputs(u, measure, anc_a, anc_b, cfg)?;
    let base = CapacityObjective::new(u, measure, anc_a, anc_b, StartKind::Unrestricted);
    let target = best.value - slack;
    let mut x = best.optimal_state.amplitudes().to_vec();
    for kappa in [1e2, 1e4, 1e6, 1e8] {
        let obj = MinInitialObjective {
            base: &base,
            target,
            kappa,
        };
        x = ascent::ascend(&obj, x, cfg).x;
    }
    let candidate = finish(
        &base,
        RestartOutcome {
            seed: best.best_restart_seed,
            x,
            value: 0.0,
            grad_norm: 0.0,
            converged: true,
        },
        best.converged_restarts,
        cfg,
    );
    if candidate.value >= best.value - 2.0 * slack
        && candidate.initial_entanglement < best.initial_entanglement
    {
        Ok(candidate)
    } else {
        Ok(best.clone())
    }
}

/// Interleaved `(re, im)` coordinates mapped to a normalized state.
pub fn parameterize_state(raw: &[f64], partition: Vec<Party>) -> Result<PureState> {
    if raw.len() != 2 << partition.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} raw coordinates for {} qubits",
            raw.len(),
            partition.len()
        )));
    }
    let amps: Vec<C64> = raw.chunks(2).map(|c| C64::new(c[0], c[1])).collect();
    PureState::normalized(amps, partition)
}

/// Gradient of `measure ∘ parameterize_state` with respect to `raw`.
pub fn parameterized_gradient(
    measure: MeasureKind,
    raw: &[f64],
    partition: Vec<Party>,
) -> Result<Vec<f64>> {
    let psi = parameterize_state(raw, partition)?;
    let (_, g) = crate::measures::value_and_gradient(measure, &psi)?;
    let amps: Vec<C64> = raw.chunks(2).map(|c| C64::new(c[0], c[1])).collect();
    let r = vec_norm(&amps);
    let x = psi.amplitudes();
    let radial: f64 = x.iter().zip(&g).map(|(a, b)| (a.conj() * b).re).sum();
    Ok(g.iter()
        .zip(x)
        .flat_map(|(gi, xi)| {
            let t = (gi - xi * radial) / r;
            [t.re, t.im]
        })
        .collect())
}

/// The three one-parameter gate families.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FamilyKind {
    /// `exp(iα σ₁⊗σ₁)`
    Cnot,
    /// `exp(iα (σ₁⊗σ₁ + σ₂⊗σ₂))`
    Dcnot,
    /// `exp(iα (σ₁⊗σ₁ + σ₂⊗σ₂ + σ₃⊗σ₃))`
    Swap,
}

impl FamilyKind {
    pub fn name(&self) -> &'static str {
        match self {
            FamilyKind::Cnot => "cnot",
            FamilyKind::Dcnot => "dcnot",
            FamilyKind::Swap => "swap",
        }
    }

    pub fn params(&self, alpha: f64) -> [f64; 3] {
        match self {
            FamilyKind::Cnot => [alpha, 0.0, 0.0],
            FamilyKind::Dcnot => [alpha, alpha, 0.0],
            FamilyKind::Swap => [alpha, alpha, alpha],
        }
    }
}

impl fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FamilyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cnot" => Ok(FamilyKind::Cnot),
            "dcnot" => Ok(FamilyKind::Dcnot),
            "swap" => Ok(FamilyKind::Swap),
            other => Err(Error::Parse(format!("unknown family {other:?}"))),
        }
    }
}

pub const FAMILY_RANGE_SLACK: f64 = 1e-9;

/// A member of one of the gate families, `α ∈ [0, π/4]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GateFamily {
    pub kind: FamilyKind,
    pub alpha: f64,
}

impl GateFamily {
    /// Values within [`FAMILY_RANGE_SLACK`] of the interval are clamped onto
    /// it, so a rounded `π/4` such as `0.7853981634` is accepted.
    pub fn new(kind: FamilyKind, alpha: f64) -> Result<Self> {
        if !(-FAMILY_RANGE_SLACK..=FRAC_PI_4 + FAMILY_RANGE_SLACK).contains(&alpha) {
            return Err(Error::OutOfRange(format!(
                "family parameter {alpha} outside [0, pi/4]"
            )));
        }
        Ok(Self {
            kind,
            alpha: alpha.clamp(0.0, FRAC_PI_4),
        })
    }

    pub fn params(&self) -> CanonicalParams {
        CanonicalParams::new(self.kind.params(self.alpha))
    }
}

pub fn family_unitary(f: &GateFamily) -> Result<ComplexMatrix> {
    let f = GateFamily::new(f.kind, f.alpha)?;
    let u = build_canonical_unitary(&f.params());
    debug_assert!(u.is_unitary(UNITARY_TOL));
    Ok(u)
}

/// One row of a capacity sweep. Failed rows keep their error message and
/// carry NaN values.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow {
    /// Family parameter (or `α₁` for custom triples).
    pub alpha: f64,
    pub params: [f64; 3],
    pub capacity: f64,
    pub initial_entanglement: f64,
    pub final_entanglement: f64,
    pub converged_restarts: usize,
    pub error: Option<String>,
}

impl SweepRow {
    fn from_result(alpha: f64, params: [f64; 3], r: Result<CapacityResult>) -> Self {
        match r {
            Ok(r) => Self {
                alpha,
                params,
                capacity: r.value,
                initial_entanglement: r.initial_entanglement,
                final_entanglement: r.final_entanglement,
                converged_restarts: r.converged_restarts,
                error: None,
            },
            Err(e) => Self {
                alpha,
                params,
                capacity: f64::NAN,
                initial_entanglement: f64::NAN,
                final_entanglement: f64::NAN,
                converged_restarts: 0,
                error: Some(e.to_string()),
            },
        }
    }
}

/// Capacity of every family member on `alpha_grid`, each row computed with
/// the same configuration (and therefore the same master seed).
pub fn family_sweep(
    kind: FamilyKind,
    alpha_grid: &[f64],
    measure: MeasureKind,
    anc_a: usize,
    anc_b: usize,
    cfg: &OptimizerConfig,
) -> Result<Vec<SweepRow>> {
    cfg.validate()?;
    let members = alpha_grid
        .iter()
        .map(|&a| GateFamily::new(kind, a))
        .collect::<Result<Vec<_>>>()?;
    Ok(members
        .into_iter()
        .map(|f| {
            let r = family_unitary(&f).and_then(|u| numeric_capacity(&u, measure, anc_a, anc_b, cfg));
            SweepRow::from_result(f.alpha, f.kind.params(f.alpha), r)
        })
        .collect())
}

/// Like [`family_sweep`] but over arbitrary canonical triples.
pub fn triple_sweep(
    triples: &[[f64; 3]],
    measure: MeasureKind,
    anc_a: usize,
    anc_b: usize,
    cfg: &OptimizerConfig,
) -> Result<Vec<SweepRow>> {
    cfg.validate()?;
    Ok(triples
        .iter()
        .map(|&t| {
            let u = build_canonical_unitary(&CanonicalParams::new(t));
            SweepRow::from_result(t[0], t, numeric_capacity(&u, measure, anc_a, anc_b, cfg))
        })
        .collect())
}
