//! Canonical form of two-qubit unitaries.
//!
//! Every `U ∈ U(4)` is locally equivalent to
//! `U_d = exp(i Σ_j α_j σ_j ⊗ σ_j)` with `π/4 ≥ α₁ ≥ α₂ ≥ |α₃| ≥ 0`.
//! `U_d` is diagonal in the (magic) Bell basis with eigenphases
//!
//! ```text
//! λ₁ = -α₁ + α₂ + α₃
//! λ₂ = +α₁ - α₂ + α₃
//! λ₃ = +α₁ + α₂ - α₃
//! λ₄ = -α₁ - α₂ - α₃
//! ```
//!
//! The spectrum of `Ũ U`, with `Ũ = (σ₂⊗σ₂) Uᵀ (σ₂⊗σ₂)` and `U` scaled into
//! SU(4), is `{e^{2iλ_j}}` and is invariant under local unitaries. Inverting
//! the relation above recovers the α triple.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_4, PI, TAU};

use crate::error::{Error, Result};
use crate::qcore::gates::pauli_y;
use crate::qcore::matrix::{ComplexMatrix, C64, ONE, ZERO};
use crate::qcore::state::PureState;
use crate::qcore::tensor_product;

/// Unitarity tolerance for inputs to [`decompose`] and [`local_invariants`].
pub const DECOMPOSE_UNITARY_TOL: f64 = 1e-8;
/// Eigenphases of `ŨU` closer than this are treated as one degenerate value.
pub const PHASE_CLUSTER_TOL: f64 = 1e-7;
/// Largest invariant mismatch accepted when resolving branches.
pub const BRANCH_MATCH_TOL: f64 = 1e-7;

const SNAP_TOL: f64 = 1e-12;
const ORDER_TOL: f64 = 1e-12;

/// The triple `(α₁, α₂, α₃)` of the canonical form.
///
/// `conjugated` is set by [`decompose`] when the input was locally equivalent
/// to the complex conjugate of `U_d(α)` rather than to `U_d(α)` itself, i.e.
/// when its true third parameter is `-α₃`. Entangling capacities do not see
/// the difference.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CanonicalParams {
    alpha: [f64; 3],
    conjugated: bool,
}

impl CanonicalParams {
    /// Any real triple; no ordering is enforced.
    pub fn new(alpha: [f64; 3]) -> Self {
        Self {
            alpha,
            conjugated: false,
        }
    }

    /// A triple that must already satisfy `π/4 ≥ α₁ ≥ α₂ ≥ |α₃| ≥ 0`.
    pub fn canonical(alpha: [f64; 3]) -> Result<Self> {
        let p = Self::new(alpha);
        p.check_canonical()?;
        Ok(p)
    }

    pub fn with_conjugated(mut self, conjugated: bool) -> Self {
        self.conjugated = conjugated;
        self
    }

    pub fn alpha(&self) -> [f64; 3] {
        self.alpha
    }

    pub fn conjugated(&self) -> bool {
        self.conjugated
    }

    /// The α triple of the representative that is locally equivalent to the
    /// decomposed unitary itself (third entry negated when `conjugated`).
    pub fn signed_alpha(&self) -> [f64; 3] {
        let [a1, a2, a3] = self.alpha;
        if self.conjugated {
            [a1, a2, -a3]
        } else {
            [a1, a2, a3]
        }
    }

    /// Eigenphases `λ₁..λ₄` of `U_d(α)`; they always sum to zero.
    pub fn lambdas(&self) -> [f64; 4] {
        lambdas_of(self.alpha)
    }

    pub fn is_canonical(&self) -> bool {
        self.check_canonical().is_ok()
    }

    pub fn check_canonical(&self) -> Result<()> {
        let [a1, a2, a3] = self.alpha;
        let ok = a1.is_finite()
            && a2.is_finite()
            && a3.is_finite()
            && a1 <= FRAC_PI_4 + ORDER_TOL
            && a1 + ORDER_TOL >= a2
            && a2 + ORDER_TOL >= a3.abs();
        if ok {
            Ok(())
        } else {
            Err(Error::NotCanonical(format!(
                "expected pi/4 >= a1 >= a2 >= |a3| >= 0, got ({a1}, {a2}, {a3})"
            )))
        }
    }
}

pub(crate) fn lambdas_of([a1, a2, a3]: [f64; 3]) -> [f64; 4] {
    [
        -a1 + a2 + a3,
        a1 - a2 + a3,
        a1 + a2 - a3,
        -a1 - a2 - a3,
    ]
}

fn alpha_of_lambdas(l: [f64; 4]) -> [f64; 3] {
    [(l[1] + l[2]) / 2.0, (l[0] + l[2]) / 2.0, (l[0] + l[1]) / 2.0]
}

/// The magic Bell basis with fixed phases:
///
/// ```text
/// Φ₁ = -i(|00⟩ - |11⟩)/√2    Φ₂ = (|00⟩ + |11⟩)/√2
/// Φ₃ = -i(|01⟩ + |10⟩)/√2    Φ₄ = (|01⟩ - |10⟩)/√2
/// ```
///
/// In this basis the concurrence of `Σ b_j Φ_j` is `|Σ b_j²|`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BellBasis {
    vectors: [[C64; 4]; 4],
}

impl Default for BellBasis {
    fn default() -> Self {
        Self::new()
    }
}

impl BellBasis {
    pub fn new() -> Self {
        let h = C64::new(FRAC_1_SQRT_2, 0.0);
        let mi = C64::new(0.0, -FRAC_1_SQRT_2);
        Self {
            vectors: [
                [mi, ZERO, ZERO, -mi],
                [h, ZERO, ZERO, h],
                [ZERO, mi, mi, ZERO],
                [ZERO, h, -h, ZERO],
            ],
        }
    }

    /// `Φ_{j+1}` for `j = 0..4`.
    pub fn vector(&self, j: usize) -> [C64; 4] {
        self.vectors[j]
    }

    /// `Σ_j b_j Φ_j` as computational-basis amplitudes.
    pub fn combine(&self, b: &[C64; 4]) -> [C64; 4] {
        let mut out = [ZERO; 4];
        for (bj, v) in b.iter().zip(&self.vectors) {
            for (o, x) in out.iter_mut().zip(v) {
                *o += bj * x;
            }
        }
        out
    }

    /// `b_j = ⟨Φ_j|ψ⟩`
    pub fn coefficients(&self, amps: &[C64; 4]) -> [C64; 4] {
        let mut b = [ZERO; 4];
        for (bj, v) in b.iter_mut().zip(&self.vectors) {
            *bj = v.iter().zip(amps).map(|(x, a)| x.conj() * a).sum();
        }
        b
    }

    /// Unitary whose columns are `Φ₁..Φ₄`.
    pub fn change_of_basis(&self) -> ComplexMatrix {
        let mut m = ComplexMatrix::zeros(4, 4);
        for (j, v) in self.vectors.iter().enumerate() {
            for (r, x) in v.iter().enumerate() {
                m.set(r, j, *x);
            }
        }
        m
    }
}

/// `U_d = Σ_j e^{iλ_j} |Φ_j⟩⟨Φ_j|`.
pub fn build_canonical_unitary(params: &CanonicalParams) -> ComplexMatrix {
    let basis = BellBasis::new();
    let q = basis.change_of_basis();
    let phases: Vec<C64> = params
        .lambdas()
        .iter()
        .map(|&l| C64::from_polar(1.0, l))
        .collect();
    &(&q * &ComplexMatrix::diagonal(&phases)) * &q.adjoint()
}

/// Bell-basis coefficients of a two-qubit state.
pub fn bell_coefficients(psi: &PureState) -> Result<[C64; 4]> {
    if psi.n_qubits() != 2 {
        return Err(Error::DimensionMismatch(format!(
            "bell coefficients need a 2-qubit state, got {} qubits",
            psi.n_qubits()
        )));
    }
    let mut amps = [ZERO; 4];
    amps.copy_from_slice(psi.amplitudes());
    Ok(BellBasis::new().coefficients(&amps))
}

fn sigma_yy() -> ComplexMatrix {
    tensor_product(&pauli_y(), &pauli_y())
}

/// `Ũ = (σ₂⊗σ₂) Uᵀ (σ₂⊗σ₂)`.
pub fn u_tilde(u: &ComplexMatrix) -> Result<ComplexMatrix> {
    if u.rows() != 4 || u.cols() != 4 {
        return Err(Error::DimensionMismatch(format!(
            "expected a 4x4 matrix, got {}x{}",
            u.rows(),
            u.cols()
        )));
    }
    let yy = sigma_yy();
    Ok(&(&yy * &u.transpose()) * &yy)
}

fn check_two_qubit_unitary(u: &ComplexMatrix) -> Result<()> {
    if u.rows() != 4 || u.cols() != 4 {
        return Err(Error::DimensionMismatch(format!(
            "expected a 4x4 matrix, got {}x{}",
            u.rows(),
            u.cols()
        )));
    }
    let residual = u.unitarity_residual();
    if residual > DECOMPOSE_UNITARY_TOL {
        return Err(Error::NotUnitary { residual });
    }
    Ok(())
}

/// `U / det(U)^{1/4}` with the principal fourth root.
fn to_special_unitary(u: &ComplexMatrix) -> Result<ComplexMatrix> {
    let det = u.determinant()?;
    let root = C64::from_polar(1.0, det.arg() / 4.0);
    Ok(u.scale(root.inv()))
}

/// Spectrum of `ŨU` for a unit-determinant representative of `U`.
///
/// The choice of fourth root can flip every value's sign at once, so
/// comparisons through [`LocalInvariants::distance`] are modulo a common
/// factor of `±1`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LocalInvariants {
    values: [C64; 4],
}

impl LocalInvariants {
    fn from_values(mut values: [C64; 4]) -> Self {
        for v in &mut values {
            *v /= v.norm();
        }
        cluster_phases(&mut values);
        values.sort_by(|a, b| a.arg().total_cmp(&b.arg()));
        Self { values }
    }

    pub fn values(&self) -> [C64; 4] {
        self.values
    }

    /// Eigenphases in `(-π, π]`, ascending.
    pub fn phases(&self) -> [f64; 4] {
        self.values.map(|v| v.arg())
    }

    pub fn conj(&self) -> Self {
        Self::from_values(self.values.map(|v| v.conj()))
    }

    /// Smallest max-norm distance between the two multisets over all
    /// pairings and over a common sign flip.
    pub fn distance(&self, other: &LocalInvariants) -> f64 {
        let mut best = f64::INFINITY;
        for sign in [ONE, -ONE] {
            for perm in PERMUTATIONS_4.iter() {
                let d = (0..4)
                    .map(|k| (self.values[k] - sign * other.values[perm[k]]).norm())
                    .fold(0.0, f64::max);
                best = best.min(d);
            }
        }
        best
    }

    pub fn approx_eq(&self, other: &LocalInvariants, tol: f64) -> bool {
        self.distance(other) <= tol
    }
}

/// Replaces eigenvalues whose phases agree within [`PHASE_CLUSTER_TOL`]
/// by their common (normalized) mean.
fn cluster_phases(values: &mut [C64; 4]) {
    let mut label = [usize::MAX; 4];
    for i in 0..4 {
        if label[i] != usize::MAX {
            continue;
        }
        label[i] = i;
        for j in i + 1..4 {
            if label[j] == usize::MAX && (values[i] - values[j]).norm() < PHASE_CLUSTER_TOL {
                label[j] = i;
            }
        }
    }
    for i in 0..4 {
        let members: Vec<usize> = (0..4).filter(|&k| label[k] == i).collect();
        if members.len() > 1 {
            let mean: C64 = members.iter().map(|&k| values[k]).sum();
            let mean = mean / mean.norm();
            for k in members {
                values[k] = mean;
            }
        }
    }
}

const PERMUTATIONS_4: [[usize; 4]; 24] = [
    [0, 1, 2, 3],
    [0, 1, 3, 2],
    [0, 2, 1, 3],
    [0, 2, 3, 1],
    [0, 3, 1, 2],
    [0, 3, 2, 1],
    [1, 0, 2, 3],
    [1, 0, 3, 2],
    [1, 2, 0, 3],
    [1, 2, 3, 0],
    [1, 3, 0, 2],
    [1, 3, 2, 0],
    [2, 0, 1, 3],
    [2, 0, 3, 1],
    [2, 1, 0, 3],
    [2, 1, 3, 0],
    [2, 3, 0, 1],
    [2, 3, 1, 0],
    [3, 0, 1, 2],
    [3, 0, 2, 1],
    [3, 1, 0, 2],
    [3, 1, 2, 0],
    [3, 2, 0, 1],
    [3, 2, 1, 0],
];

/// Local invariants of a two-qubit unitary.
pub fn local_invariants(u: &ComplexMatrix) -> Result<LocalInvariants> {
    check_two_qubit_unitary(u)?;
    invariants_unchecked(u)
}

fn invariants_unchecked(u: &ComplexMatrix) -> Result<LocalInvariants> {
    let su = to_special_unitary(u)?;
    let m = &u_tilde(&su)? * &su;
    let ev = m.eigenvalues()?;
    Ok(LocalInvariants::from_values([ev[0], ev[1], ev[2], ev[3]]))
}

/// Moves an arbitrary α triple into the chamber `π/4 ≥ α₁ ≥ α₂ ≥ |α₃|`
/// using moves that preserve local equivalence: shifts by π/2, axis
/// permutations and simultaneous sign flips of two entries.
pub(crate) fn canonicalize_signed(alpha: [f64; 3]) -> [f64; 3] {
    let mut negatives = 0;
    let mut mags = alpha.map(|a| {
        let r = a - FRAC_PI_2 * (a / FRAC_PI_2).round();
        if r < 0.0 {
            negatives += 1;
        }
        r.abs()
    });
    mags.sort_by(|a, b| b.total_cmp(a));
    let snap = |a: f64| {
        if a.abs() < SNAP_TOL {
            0.0
        } else if (a - FRAC_PI_4).abs() < SNAP_TOL {
            FRAC_PI_4
        } else {
            a
        }
    };
    let mut out = mags.map(snap);
    // An odd number of sign flips can be absorbed when α₁ sits on π/4,
    // because (π/4, a, -b) ~ (-π/4, a, -b) ~ (π/4, a, b).
    if negatives % 2 == 1 && out[0] < FRAC_PI_4 && out[2] != 0.0 {
        out[2] = -out[2];
    }
    out
}

/// Canonical parameters of an arbitrary two-qubit unitary.
///
/// Eigenphases of `ŨU` fix `2λ_j` modulo 2π. Every assignment of those
/// phases to `λ₁..λ₄`, each with either half-angle branch, is tried; the
/// ones compatible with `Σλ_j ≡ 0 (mod 2π)` are mapped to α, folded into the
/// canonical chamber, and the candidate whose rebuilt `U_d` reproduces the
/// input's invariants best is returned. A negative third parameter is
/// reported as `|α₃|` with the `conjugated` flag set.
pub fn decompose(u: &ComplexMatrix) -> Result<CanonicalParams> {
    check_two_qubit_unitary(u)?;
    let target = invariants_unchecked(u)?;
    let mu = target.phases();

    let mut candidates: Vec<[f64; 3]> = Vec::new();
    for perm in PERMUTATIONS_4.iter() {
        for shifts in 0u32..16 {
            let mut l = [0.0; 4];
            for j in 0..4 {
                let branch = if shifts >> j & 1 == 1 { PI } else { 0.0 };
                l[j] = mu[perm[j]] / 2.0 + branch;
            }
            let sum: f64 = l.iter().sum();
            let wraps = (sum / TAU).round();
            let residue = sum - wraps * TAU;
            if residue.abs() > 1e-6 {
                continue;
            }
            for x in &mut l {
                *x -= residue / 4.0;
            }
            l[3] -= wraps * TAU;
            let alpha = canonicalize_signed(alpha_of_lambdas(l));
            if !candidates
                .iter()
                .any(|c| c.iter().zip(&alpha).all(|(x, y)| (x - y).abs() < 1e-10))
            {
                candidates.push(alpha);
            }
        }
    }

    let mut best: Option<([f64; 3], f64)> = None;
    for alpha in candidates {
        let rebuilt = build_canonical_unitary(&CanonicalParams::new(alpha));
        let d = invariants_unchecked(&rebuilt)?.distance(&target);
        if best.is_none_or(|(_, bd)| d < bd) {
            best = Some((alpha, d));
        }
    }
    let (alpha, mismatch) = best.ok_or(Error::BranchResolutionFailure {
        mismatch: f64::INFINITY,
    })?;
    if mismatch > BRANCH_MATCH_TOL {
        return Err(Error::BranchResolutionFailure { mismatch });
    }
    let [a1, a2, a3] = alpha;
    Ok(CanonicalParams::new([a1, a2, a3.abs()]).with_conjugated(a3 < 0.0))
}

/// Whether `u` is locally equivalent to the representative described by
/// `params` (honouring its `conjugated` flag).
pub fn is_locally_equivalent(u: &ComplexMatrix, params: &CanonicalParams, tol: f64) -> Result<bool> {
    let inv = local_invariants(u)?;
    let rep = CanonicalParams::new(params.signed_alpha());
    Ok(inv.approx_eq(&local_invariants(&build_canonical_unitary(&rep))?, tol))
}

/// `exp(i Σ α_j σ_j⊗σ_j)` evaluated as a product of three commuting
/// factors `cos α_j + i sin α_j σ_j⊗σ_j`. Independent of the Bell-basis
/// construction in [`build_canonical_unitary`].
pub fn canonical_unitary_from_paulis(alpha: [f64; 3]) -> ComplexMatrix {
    use crate::qcore::gates::{exp_i_involution, pauli};
    let mut u = ComplexMatrix::identity(4);
    for (j, &a) in alpha.iter().enumerate() {
        let pp = tensor_product(&pauli(j + 1), &pauli(j + 1));
        u = &u * &exp_i_involution(&pp, a);
    }
    u
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::gates::{cnot, dcnot, swap};
    use crate::qcore::matrix::I;
    use crate::qcore::random::{haar_unitary_2, rng_from_seed};
    use crate::qcore::state::Party;
    use rand::Rng;

    fn assert_alpha(p: &CanonicalParams, want: [f64; 3], tol: f64) {
        for (a, w) in p.alpha().iter().zip(&want) {
            assert!((a - w).abs() < tol, "{:?} vs {want:?}", p.alpha());
        }
    }

    #[test]
    fn bell_basis_is_orthonormal() {
        let b = BellBasis::new();
        for j in 0..4 {
            for k in 0..4 {
                let ip: C64 = b
                    .vector(j)
                    .iter()
                    .zip(b.vector(k).iter())
                    .map(|(x, y)| x.conj() * y)
                    .sum();
                let want = if j == k { ONE } else { ZERO };
                assert!((ip - want).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn canonical_unitary_matches_pauli_exponential() {
        let mut rng = rng_from_seed(5);
        for _ in 0..50 {
            let a = [
                rng.random_range(-1.0..1.0),
                rng.random_range(-1.0..1.0),
                rng.random_range(-1.0..1.0),
            ];
            let u = build_canonical_unitary(&CanonicalParams::new(a));
            let v = canonical_unitary_from_paulis(a);
            assert!(u.max_abs_diff(&v) < 1e-13);
            assert!(u.is_unitary(1e-13));
        }
    }

    #[test]
    fn zero_alpha_builds_identity() {
        let u = build_canonical_unitary(&CanonicalParams::new([0.0; 3]));
        assert!(u.max_abs_diff(&ComplexMatrix::identity(4)) < 1e-15);
    }

    #[test]
    fn cnot_class_eigenphases() {
        let p = CanonicalParams::new([FRAC_PI_4, 0.0, 0.0]);
        let l = p.lambdas();
        let want = [-FRAC_PI_4, FRAC_PI_4, FRAC_PI_4, -FRAC_PI_4];
        for (a, b) in l.iter().zip(&want) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn canonical_unitary_is_diagonal_in_bell_basis() {
        let p = CanonicalParams::new([0.7, 0.4, -0.2]);
        let q = BellBasis::new().change_of_basis();
        let d = &(&q.adjoint() * &build_canonical_unitary(&p)) * &q;
        for r in 0..4 {
            for c in 0..4 {
                if r != c {
                    assert!(d.get(r, c).norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn u_tilde_is_an_involution() {
        let mut rng = rng_from_seed(11);
        for _ in 0..100 {
            let u = random_two_qubit_unitary(&mut rng);
            let back = u_tilde(&u_tilde(&u).unwrap()).unwrap();
            assert!(back.max_abs_diff(&u) < 1e-13);
        }
        let id = ComplexMatrix::identity(4);
        assert!(u_tilde(&id).unwrap().max_abs_diff(&id) < 1e-15);
        assert!(matches!(
            u_tilde(&ComplexMatrix::identity(2)),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn u_tilde_u_squares_canonical_eigenvalues() {
        let p = CanonicalParams::new([0.6, 0.3, 0.1]);
        let u = build_canonical_unitary(&p);
        let inv = local_invariants(&u).unwrap();
        let want = LocalInvariants::from_values(p.lambdas().map(|l| C64::from_polar(1.0, 2.0 * l)));
        assert!(inv.distance(&want) < 1e-10);
        // Without the sign freedom the raw spectrum agrees as well, since
        // U_d already has unit determinant.
        let m = &u_tilde(&u).unwrap() * &u;
        let mut ev: Vec<f64> = m.eigenvalues().unwrap().iter().map(|z| z.arg()).collect();
        let mut w: Vec<f64> = p.lambdas().iter().map(|l| C64::from_polar(1.0, 2.0 * l).arg()).collect();
        ev.sort_by(f64::total_cmp);
        w.sort_by(f64::total_cmp);
        for (a, b) in ev.iter().zip(&w) {
            assert!((a - b).abs() < 1e-10);
        }
    }

    #[test]
    fn identity_invariants_are_all_one() {
        let inv = local_invariants(&ComplexMatrix::identity(4)).unwrap();
        for v in inv.values() {
            assert!((v - ONE).norm() < 1e-12);
        }
    }

    #[test]
    fn cnot_invariants() {
        let inv = local_invariants(&cnot()).unwrap();
        let want = LocalInvariants::from_values([-I, I, I, -I]);
        assert!(inv.distance(&want) < 1e-10, "{:?}", inv.values());
    }

    #[test]
    fn invariants_survive_local_unitaries() {
        let mut rng = rng_from_seed(3);
        for _ in 0..500 {
            let u = random_two_qubit_unitary(&mut rng);
            let v = dress(&u, &mut rng);
            let d = local_invariants(&u)
                .unwrap()
                .distance(&local_invariants(&v).unwrap());
            assert!(d < 1e-9, "{d}");
        }
    }

    #[test]
    fn known_gates_decompose() {
        assert_alpha(&decompose(&ComplexMatrix::identity(4)).unwrap(), [0.0; 3], 1e-12);
        assert_alpha(&decompose(&cnot()).unwrap(), [FRAC_PI_4, 0.0, 0.0], 1e-12);
        assert_alpha(&decompose(&dcnot()).unwrap(), [FRAC_PI_4, FRAC_PI_4, 0.0], 1e-12);
        assert_alpha(
            &decompose(&swap()).unwrap(),
            [FRAC_PI_4, FRAC_PI_4, FRAC_PI_4],
            1e-12,
        );
    }

    #[test]
    fn decompose_rejects_non_unitary() {
        let m = ComplexMatrix::identity(4).scale(C64::new(1.01, 0.0));
        assert!(matches!(decompose(&m), Err(Error::NotUnitary { .. })));
        assert!(matches!(
            decompose(&ComplexMatrix::identity(2)),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn decompose_round_trips_canonical_points() {
        let mut rng = rng_from_seed(17);
        for _ in 0..300 {
            let a = random_canonical(&mut rng);
            let p = decompose(&build_canonical_unitary(&CanonicalParams::new(a))).unwrap();
            assert_eq!(p.conjugated(), a[2] < 0.0);
            assert_alpha(&p, [a[0], a[1], a[2].abs()], 1e-10);
            assert!(p.is_canonical());
        }
    }

    #[test]
    fn decompose_sees_through_local_dressing() {
        let mut rng = rng_from_seed(23);
        for _ in 0..300 {
            let a = random_canonical(&mut rng);
            let u = dress(&build_canonical_unitary(&CanonicalParams::new(a)), &mut rng);
            let p = decompose(&u).unwrap();
            assert_alpha(&p, [a[0], a[1], a[2].abs()], 1e-9);
            assert!(is_locally_equivalent(&u, &p, 1e-8).unwrap());
        }
    }

    #[test]
    fn conjugate_flips_the_flag() {
        let a = [0.7, 0.5, 0.2];
        let u = build_canonical_unitary(&CanonicalParams::new(a));
        assert!(!decompose(&u).unwrap().conjugated());
        let p = decompose(&u.conj()).unwrap();
        assert!(p.conjugated());
        assert_alpha(&p, a, 1e-10);
    }

    #[test]
    fn pi_over_4_absorbs_third_sign() {
        let u = build_canonical_unitary(&CanonicalParams::new([FRAC_PI_4, 0.3, -0.1]));
        let p = decompose(&u).unwrap();
        assert!(!p.conjugated());
        assert_alpha(&p, [FRAC_PI_4, 0.3, 0.1], 1e-10);
    }

    #[test]
    fn decompose_arbitrary_unitaries() {
        let mut rng = rng_from_seed(99);
        for _ in 0..200 {
            let u = random_two_qubit_unitary(&mut rng);
            let p = decompose(&u).unwrap();
            assert!(p.is_canonical());
            assert!(is_locally_equivalent(&u, &p, 1e-8).unwrap());
        }
    }

    #[test]
    fn bell_coefficients_examples() {
        let h = FRAC_1_SQRT_2;
        let phi2 = PureState::two_qubit([C64::new(h, 0.0), ZERO, ZERO, C64::new(h, 0.0)]).unwrap();
        let b = bell_coefficients(&phi2).unwrap();
        for (x, w) in b.iter().zip([ZERO, ONE, ZERO, ZERO]) {
            assert!((x - w).norm() < 1e-15);
        }
        let zero = PureState::basis("00", vec![Party::A, Party::B]).unwrap();
        let b = bell_coefficients(&zero).unwrap();
        let want = [C64::new(0.0, h), C64::new(h, 0.0), ZERO, ZERO];
        for (x, w) in b.iter().zip(want) {
            assert!((x - w).norm() < 1e-15);
        }
    }

    #[test]
    fn bell_coefficients_round_trip() {
        let mut rng = rng_from_seed(8);
        let basis = BellBasis::new();
        for _ in 0..100 {
            let psi = crate::qcore::haar_state_with(vec![Party::A, Party::B], &mut rng);
            let b = bell_coefficients(&psi).unwrap();
            assert!((b.iter().map(|z| z.norm_sqr()).sum::<f64>() - 1.0).abs() < 1e-13);
            let back = basis.combine(&b);
            for (x, y) in back.iter().zip(psi.amplitudes()) {
                assert!((x - y).norm() < 1e-13);
            }
        }
        let three = crate::qcore::haar_random_state(3, 0);
        assert!(matches!(bell_coefficients(&three), Err(Error::DimensionMismatch(_))));
    }

    pub(crate) fn random_canonical<R: Rng>(rng: &mut R) -> [f64; 3] {
        // Components kept 1e-3 away from each other and from the walls.
        loop {
            let a1: f64 = rng.random_range(0.0..FRAC_PI_4);
            let a2: f64 = rng.random_range(0.0..a1.max(1e-9));
            let a3: f64 = rng.random_range(-a2..a2.max(1e-9));
            let gaps = [FRAC_PI_4 - a1, a1 - a2, a2 - a3.abs(), a3.abs(), a2];
            if gaps.iter().all(|&g| g > 1e-3) {
                return [a1, a2, a3];
            }
        }
    }

    fn dress<R: Rng>(u: &ComplexMatrix, rng: &mut R) -> ComplexMatrix {
        let left = tensor_product(&haar_unitary_2(rng), &haar_unitary_2(rng));
        let right = tensor_product(&haar_unitary_2(rng), &haar_unitary_2(rng));
        &(&left * u) * &right
    }

    fn random_two_qubit_unitary<R: Rng>(rng: &mut R) -> ComplexMatrix {
        let a = [
            rng.random_range(-3.0..3.0),
            rng.random_range(-3.0..3.0),
            rng.random_range(-3.0..3.0),
        ];
        let phase = C64::from_polar(1.0, rng.random_range(0.0..TAU));
        dress(&canonical_unitary_from_paulis(a), rng).scale(phase)
    }
}
