//! Closed-form single-copy capacities without ancillas, and the bounds they
//! imply for gate interconversion.
//!
//! Canonical parameter space splits into three regions:
//!
//! * `OneEbit`: `α₁+α₂ ≥ π/4` and `α₂+α₃ ≤ π/4`. A product input reaches a
//!   maximally entangled output.
//! * `Region1`: `α₁+α₂ < π/4`. The optimum lives on the Bell pair `(Φ₃, Φ₄)`.
//! * `Region2`: `α₂+α₃ > π/4`. The optimum lives on the Bell pair `(Φ₁, Φ₄)`.
//!
//! Within a two-term Bell superposition `b_j Φ_j + b_k Φ_k` the concurrence
//! before and after `U_d` is `|b_j² + b_k²|` and
//! `|e^{2iλ_j} b_j² + e^{2iλ_k} b_k²|`, so every pure-state measure that is a
//! function of the concurrence reduces to a two-angle search.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_4, FRAC_PI_8, TAU};
use std::fmt;

use crate::canonical::{build_canonical_unitary, BellBasis, CanonicalParams};
use crate::error::{Error, Result};
use crate::measures::{binary_entropy, MeasureKind};
use crate::optimize::{numeric_capacity, product_start_capacity, OptimizerConfig};
use crate::qcore::matrix::{ComplexMatrix, C64, ZERO};
use crate::qcore::state::PureState;

/// Grid resolution per axis of the two-angle scan.
pub const SCAN_GRID: usize = 64;
/// Default refinement tolerance for [`capacity_entropy_no_ancilla`].
pub const SCAN_TOL: f64 = 1e-9;
/// Capacities at or below this count as zero when used as a denominator.
pub const ZERO_CAPACITY_TOL: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RegionTag {
    OneEbit,
    Region1,
    Region2,
}

impl fmt::Display for RegionTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RegionTag::OneEbit => "OneEbit",
            RegionTag::Region1 => "Region1",
            RegionTag::Region2 => "Region2",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct AnalyticCapacity {
    /// Capacity in the measure's native units.
    pub value: f64,
    pub region: RegionTag,
    /// Optimal input for `U_d(α₁, α₂, |α₃|)`; `None` when none could be
    /// produced.
    pub optimal_state: Option<PureState>,
    /// Entanglement of `optimal_state`, same units as `value`.
    pub initial_entanglement: f64,
    /// The value follows from extending a formula beyond the region where it
    /// was derived and has only been checked numerically.
    pub extrapolated: bool,
    /// Linear entropy only: the capacity for `2(1 - Tr ρ²)`.
    pub rescaled_value: Option<f64>,
}

fn canonical_alpha(p: &CanonicalParams) -> Result<[f64; 3]> {
    p.check_canonical()?;
    let [a1, a2, a3] = p.alpha();
    Ok([a1, a2, a3.abs()])
}

pub fn region_of(p: &CanonicalParams) -> Result<RegionTag> {
    let [a1, a2, a3] = canonical_alpha(p)?;
    Ok(region_from(a1, a2, a3))
}

fn region_from(a1: f64, a2: f64, a3: f64) -> RegionTag {
    if a1 + a2 < FRAC_PI_4 {
        RegionTag::Region1
    } else if a2 + a3 > FRAC_PI_4 {
        RegionTag::Region2
    } else {
        RegionTag::OneEbit
    }
}

/// `max_{j<k} |sin(λ_k - λ_j)|`.
pub fn max_gap_sine(p: &CanonicalParams) -> f64 {
    let l = p.lambdas();
    let mut best: f64 = 0.0;
    for j in 0..4 {
        for k in j + 1..4 {
            best = best.max((l[k] - l[j]).sin().abs());
        }
    }
    best
}

fn two_qubit(amps: [C64; 4]) -> PureState {
    PureState::two_qubit(amps).expect("unit-norm construction")
}

/// `(Φ_j + e^{iφ} Φ_k)/√2` (zero-based indices).
fn bell_pair_state(j: usize, k: usize, phi: f64) -> PureState {
    let mut b = [ZERO; 4];
    b[j] = C64::new(FRAC_1_SQRT_2, 0.0);
    b[k] = C64::from_polar(FRAC_1_SQRT_2, phi);
    two_qubit(BellBasis::new().combine(&b))
}

/// Product input reaching one e-bit, found by a small product-start search.
fn one_ebit_product_state(alpha: [f64; 3]) -> Option<PureState> {
    let u = build_canonical_unitary(&CanonicalParams::new(alpha));
    let cfg = OptimizerConfig::default().with_restarts(8);
    product_start_capacity(&u, MeasureKind::ConcurrenceSquared, 0, 0, &cfg)
        .ok()
        .filter(|r| r.value > 1.0 - 1e-8)
        .map(|r| r.optimal_state)
}

/// Capacity for the squared concurrence.
pub fn capacity_c2(p: &CanonicalParams) -> Result<AnalyticCapacity> {
    let [a1, a2, a3] = canonical_alpha(p)?;
    let region = region_from(a1, a2, a3);
    let out = match region {
        RegionTag::OneEbit => AnalyticCapacity {
            value: 1.0,
            region,
            optimal_state: one_ebit_product_state([a1, a2, a3]),
            initial_entanglement: 0.0,
            extrapolated: false,
            rescaled_value: None,
        },
        RegionTag::Region1 => {
            let s = a1 + a2;
            // mixing angle π/8 - s/2; the opposite sign suits the conjugate gate
            let xi = FRAC_PI_8 - s / 2.0;
            let state = two_qubit([ZERO, C64::new(xi.sin(), 0.0), C64::new(0.0, -xi.cos()), ZERO]);
            AnalyticCapacity {
                value: (2.0 * s).sin(),
                region,
                optimal_state: Some(state),
                initial_entanglement: (1.0 - (2.0 * s).sin()) / 2.0,
                extrapolated: false,
                rescaled_value: None,
            }
        }
        RegionTag::Region2 => {
            let s = a2 + a3;
            AnalyticCapacity {
                value: (2.0 * s).sin(),
                region,
                optimal_state: Some(bell_pair_state(0, 3, FRAC_PI_4 + s)),
                initial_entanglement: (1.0 - (2.0 * s).sin()) / 2.0,
                extrapolated: false,
                rescaled_value: None,
            }
        }
    };
    Ok(out)
}

/// Capacity for the concurrence. The optimum always starts from a product
/// state; the `Region2` value is flagged as extrapolated.
pub fn capacity_concurrence(p: &CanonicalParams) -> Result<AnalyticCapacity> {
    let [a1, a2, a3] = canonical_alpha(p)?;
    let region = region_from(a1, a2, a3);
    let i_phase = FRAC_PI_2;
    let (value, state, extrapolated) = match region {
        RegionTag::OneEbit => (1.0, one_ebit_product_state([a1, a2, a3]), false),
        RegionTag::Region1 => ((2.0 * (a1 + a2)).sin(), Some(bell_pair_state(2, 3, i_phase)), false),
        RegionTag::Region2 => ((2.0 * (a2 + a3)).sin(), Some(bell_pair_state(0, 3, i_phase)), true),
    };
    Ok(AnalyticCapacity {
        value,
        region,
        optimal_state: state,
        initial_entanglement: 0.0,
        extrapolated,
        rescaled_value: None,
    })
}

/// Capacity for the linear entropy `1 - Tr ρ²`, together with the value for
/// the rescaled `2(1 - Tr ρ²)` in `rescaled_value`.
pub fn capacity_linear_entropy(p: &CanonicalParams) -> Result<AnalyticCapacity> {
    let [a1, a2, a3] = canonical_alpha(p)?;
    let region = region_from(a1, a2, a3);
    let out = if region == RegionTag::Region2 {
        let scan = pair_scan(CanonicalParams::new([a1, a2, a3]).lambdas(), (0, 3), |c| c * c / 2.0, SCAN_TOL)?;
        AnalyticCapacity {
            value: scan.value,
            region,
            optimal_state: Some(scan.state),
            initial_entanglement: scan.initial,
            extrapolated: false,
            rescaled_value: Some(2.0 * scan.value),
        }
    } else {
        let c2 = capacity_c2(p)?;
        AnalyticCapacity {
            value: c2.value / 2.0,
            region,
            optimal_state: c2.optimal_state,
            initial_entanglement: c2.initial_entanglement / 2.0,
            extrapolated: false,
            rescaled_value: Some(c2.value),
        }
    };
    Ok(out)
}

/// Capacity for the entropy of entanglement (bits) without ancillas.
///
/// Outside `OneEbit` the optimum over the relevant Bell pair is located by a
/// [`SCAN_GRID`]² scan in mixing angle and relative phase, then refined by
/// pattern search until the step drops below `tol`.
pub fn capacity_entropy_no_ancilla(p: &CanonicalParams, tol: f64) -> Result<AnalyticCapacity> {
    let [a1, a2, a3] = canonical_alpha(p)?;
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::OutOfRange(format!("tolerance must be positive, got {tol}")));
    }
    let region = region_from(a1, a2, a3);
    let pair = match region {
        RegionTag::OneEbit => {
            return Ok(AnalyticCapacity {
                value: 1.0,
                region,
                optimal_state: one_ebit_product_state([a1, a2, a3]),
                initial_entanglement: 0.0,
                extrapolated: false,
                rescaled_value: None,
            })
        }
        RegionTag::Region1 => (2, 3),
        RegionTag::Region2 => (0, 3),
    };
    let scan = pair_scan(CanonicalParams::new([a1, a2, a3]).lambdas(), pair, entropy_of_concurrence, tol)?;
    Ok(AnalyticCapacity {
        value: scan.value,
        region,
        optimal_state: Some(scan.state),
        initial_entanglement: scan.initial,
        extrapolated: false,
        rescaled_value: None,
    })
}

fn entropy_of_concurrence(c: f64) -> f64 {
    let c = c.clamp(0.0, 1.0);
    binary_entropy((1.0 + (1.0 - c * c).max(0.0).sqrt()) / 2.0)
}

struct PairScan {
    value: f64,
    initial: f64,
    state: PureState,
}

/// Maximizes `f(C_f) - f(C_0)` over `cos θ Φ_j + e^{iφ} sin θ Φ_k`.
fn pair_scan(lambdas: [f64; 4], (j, k): (usize, usize), f: impl Fn(f64) -> f64, tol: f64) -> Result<PairScan> {
    let wj = C64::from_polar(1.0, 2.0 * lambdas[j]);
    let wk = C64::from_polar(1.0, 2.0 * lambdas[k]);
    let concurrences = |theta: f64, phi: f64| {
        let bj2 = theta.cos().powi(2);
        let bk2 = C64::from_polar(theta.sin().powi(2), 2.0 * phi);
        ((bj2 + bk2).norm(), (wj * bj2 + wk * bk2).norm())
    };
    let objective = |theta: f64, phi: f64| {
        let (c0, cf) = concurrences(theta, phi);
        f(cf) - f(c0)
    };

    let d_theta = FRAC_PI_2 / (SCAN_GRID - 1) as f64;
    let d_phi = TAU / SCAN_GRID as f64;
    let mut best = (f64::NEG_INFINITY, 0.0, 0.0);
    for i in 0..SCAN_GRID {
        for m in 0..SCAN_GRID {
            let (t, ph) = (i as f64 * d_theta, m as f64 * d_phi);
            let v = objective(t, ph);
            if v > best.0 {
                best = (v, t, ph);
            }
        }
    }

    let (mut v, mut t, mut ph) = best;
    let mut step = d_theta.max(d_phi);
    while step >= tol {
        let mut moved = false;
        for (dt, dp) in [(step, 0.0), (-step, 0.0), (0.0, step), (0.0, -step)] {
            let cand_t = (t + dt).clamp(0.0, FRAC_PI_2);
            let cv = objective(cand_t, ph + dp);
            if cv > v {
                (v, t, ph) = (cv, cand_t, ph + dp);
                moved = true;
                break;
            }
        }
        if !moved {
            step /= 2.0;
        }
    }
    if !v.is_finite() {
        return Err(Error::ConvergenceFailure("pair scan produced a non-finite value".into()));
    }

    let mut b = [ZERO; 4];
    b[j] = C64::new(t.cos(), 0.0);
    b[k] = C64::from_polar(t.sin(), ph);
    let (c0, _) = concurrences(t, ph);
    Ok(PairScan {
        value: v,
        initial: f(c0),
        state: two_qubit(BellBasis::new().combine(&b)),
    })
}

/// `C²(U_d ψ) - C²(ψ)` for `ψ = Σ_j b_j Φ_j`.
pub fn delta_c2_bell(b: &[C64; 4], p: &CanonicalParams) -> Result<f64> {
    let norm_sq: f64 = b.iter().map(|z| z.norm_sqr()).sum();
    if (norm_sq - 1.0).abs() > 1e-10 {
        return Err(Error::NotNormalized { norm_sq });
    }
    let l = p.lambdas();
    let before: C64 = b.iter().map(|z| z * z).sum();
    let after: C64 = b
        .iter()
        .zip(l)
        .map(|(z, lj)| C64::from_polar(1.0, 2.0 * lj) * z * z)
        .sum();
    Ok(after.norm_sqr() - before.norm_sqr())
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InterconversionBounds {
    /// E-bits one use of `u1` can create.
    pub ebit_lower_bound: f64,
    /// Upper bound on uses of `u2` simulable per use of `u1`.
    pub rate_upper_bound: f64,
}

/// Entropy capacities with one ancilla per side, compared across two gates.
pub fn interconversion_bounds(
    u1: &ComplexMatrix,
    u2: &ComplexMatrix,
    cfg: &OptimizerConfig,
) -> Result<InterconversionBounds> {
    let ec = |u: &ComplexMatrix| {
        numeric_capacity(u, MeasureKind::EntropyOfEntanglement, 1, 1, cfg).map(|r| r.value.max(0.0))
    };
    let ec1 = ec(u1)?;
    let ec2 = if u1 == u2 { ec1 } else { ec(u2)? };
    if ec2 <= ZERO_CAPACITY_TOL {
        return Err(Error::ZeroCapacityDenominator(ec2));
    }
    Ok(InterconversionBounds {
        ebit_lower_bound: ec1,
        rate_upper_bound: ec1 / ec2,
    })
}

/// Capacity of `n` uses of `u` processed jointly: `n` times the single-use
/// capacity with ancillas and entangled inputs.
pub fn n_copy_capacity(u: &ComplexMatrix, n: usize, cfg: &OptimizerConfig) -> Result<f64> {
    if n == 0 {
        return Err(Error::OutOfRange("copy count must be at least 1".into()));
    }
    let single = numeric_capacity(u, MeasureKind::EntropyOfEntanglement, 1, 1, cfg)?;
    Ok(n as f64 * single.value.max(0.0))
}
