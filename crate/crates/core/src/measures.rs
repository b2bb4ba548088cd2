//! Pure-state bipartite entanglement measures.
//!
//! Each measure is also available together with its gradient with respect
//! to the (unnormalized) amplitude vector, using the real inner product
//! `⟨g, δψ⟩ = Re Σ conj(g_i) δψ_i`. The optimizer relies on these.

use std::f64::consts::LN_2;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::qcore::matrix::{ComplexMatrix, C64, ZERO};
use crate::qcore::state::{
    amplitudes_from_bipartite, bipartite_matrix_unchecked, entropy_of_spectrum, reduce, Party,
    PureState,
};

/// The four pure-state measures an entangling capacity can be taken over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MeasureKind {
    Concurrence,
    ConcurrenceSquared,
    EntropyOfEntanglement,
    LinearEntropy,
}

impl MeasureKind {
    pub const ALL: [MeasureKind; 4] = [
        MeasureKind::Concurrence,
        MeasureKind::ConcurrenceSquared,
        MeasureKind::EntropyOfEntanglement,
        MeasureKind::LinearEntropy,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            MeasureKind::Concurrence => "concurrence",
            MeasureKind::ConcurrenceSquared => "c2",
            MeasureKind::EntropyOfEntanglement => "entropy",
            MeasureKind::LinearEntropy => "linear",
        }
    }

    /// Only defined on exactly one qubit per party.
    pub fn is_two_qubit_only(&self) -> bool {
        matches!(self, MeasureKind::Concurrence | MeasureKind::ConcurrenceSquared)
    }

    /// Whether the measure is differentiable on the whole state sphere. The
    /// concurrence has a kink at product states and the entropy an infinite
    /// one-sided slope wherever the reduced state loses rank.
    pub fn is_smooth(&self) -> bool {
        matches!(self, MeasureKind::ConcurrenceSquared | MeasureKind::LinearEntropy)
    }
}

impl fmt::Display for MeasureKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MeasureKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "c2" | "concurrence-squared" => Ok(MeasureKind::ConcurrenceSquared),
            "concurrence" | "c" => Ok(MeasureKind::Concurrence),
            "entropy" | "e" => Ok(MeasureKind::EntropyOfEntanglement),
            "linear" | "r" | "linear-entropy" => Ok(MeasureKind::LinearEntropy),
            other => Err(Error::Parse(format!("unknown measure {other:?}"))),
        }
    }
}

fn check_two_qubit(psi: &PureState, measure: &'static str) -> Result<()> {
    if psi.n_qubits() != 2 {
        return Err(Error::UnsupportedMeasureForDimension {
            measure,
            n_qubits: psi.n_qubits(),
        });
    }
    if psi.partition()[0] == psi.partition()[1] {
        return Err(Error::WrongPartition(
            "concurrence needs one qubit per party".into(),
        ));
    }
    Ok(())
}

/// `ψᵀ (σ₂⊗σ₂) ψ`; its modulus is the concurrence.
fn spin_flip_overlap(a: &[C64]) -> C64 {
    2.0 * (a[1] * a[2] - a[0] * a[3])
}

/// `|⟨ψ|σ₂⊗σ₂|ψ*⟩|` for a two-qubit state.
pub fn concurrence(psi: &PureState) -> Result<f64> {
    check_two_qubit(psi, "concurrence")?;
    Ok(spin_flip_overlap(psi.amplitudes()).norm())
}

pub fn concurrence_squared(psi: &PureState) -> Result<f64> {
    check_two_qubit(psi, "concurrence squared")?;
    Ok(spin_flip_overlap(psi.amplitudes()).norm_sqr())
}

/// von Neumann entropy (bits) of A's reduced state, for any A|B labelling.
pub fn entropy_of_entanglement(psi: &PureState) -> Result<f64> {
    let m = psi.bipartite_matrix()?;
    let rho = smaller_reduction(&m);
    Ok(entropy_of_spectrum(&rho.hermitian_eigenvalues()?))
}

/// `1 - Tr(ρ_A²)`.
pub fn linear_entropy(psi: &PureState) -> Result<f64> {
    let m = psi.bipartite_matrix()?;
    let rho = smaller_reduction(&m);
    let purity: f64 = rho.data().iter().map(|z| z.norm_sqr()).sum();
    Ok(1.0 - purity)
}

/// `2 (1 - Tr(ρ_A²))`, scaled so a two-qubit Bell state scores 1.
pub fn linear_entropy_normalized(psi: &PureState) -> Result<f64> {
    Ok(2.0 * linear_entropy(psi)?)
}

fn smaller_reduction(m: &ComplexMatrix) -> ComplexMatrix {
    if m.rows() <= m.cols() {
        reduce(m, Party::A)
    } else {
        reduce(m, Party::B)
    }
}

/// Dispatches on `kind`.
pub fn evaluate(kind: MeasureKind, psi: &PureState) -> Result<f64> {
    match kind {
        MeasureKind::Concurrence => concurrence(psi),
        MeasureKind::ConcurrenceSquared => concurrence_squared(psi),
        MeasureKind::EntropyOfEntanglement => entropy_of_entanglement(psi),
        MeasureKind::LinearEntropy => linear_entropy(psi),
    }
}

/// `h(p) = -p log₂ p - (1-p) log₂(1-p)`, with `h(0) = h(1) = 0`.
pub fn binary_entropy(p: f64) -> f64 {
    let term = |x: f64| if x <= 0.0 { 0.0 } else { -x * x.log2() };
    term(p) + term(1.0 - p)
}

/// Entropy of entanglement of a two-qubit pure state with concurrence `c`:
/// `h((1 + √(1 - c²)) / 2)`.
pub fn entropy_from_concurrence(c: f64) -> Result<f64> {
    if !(-1e-12..=1.0 + 1e-12).contains(&c) || c.is_nan() {
        return Err(Error::OutOfRange(format!("concurrence {c} outside [0, 1]")));
    }
    let c = c.clamp(0.0, 1.0);
    Ok(binary_entropy((1.0 + (1.0 - c * c).sqrt()) / 2.0))
}

/// Measure value and gradient with respect to the amplitudes.
///
/// The concurrence gradient is taken as zero on product states, where the
/// measure is not differentiable.
pub fn value_and_gradient(kind: MeasureKind, psi: &PureState) -> Result<(f64, Vec<C64>)> {
    if kind.is_two_qubit_only() {
        check_two_qubit(psi, if kind == MeasureKind::Concurrence { "concurrence" } else { "concurrence squared" })?;
    } else {
        psi.bipartite_matrix()?;
    }
    Ok(value_and_gradient_unchecked(kind, psi.amplitudes(), psi.partition()))
}

pub(crate) fn value_and_gradient_unchecked(
    kind: MeasureKind,
    amps: &[C64],
    partition: &[Party],
) -> (f64, Vec<C64>) {
    match kind {
        MeasureKind::ConcurrenceSquared | MeasureKind::Concurrence => {
            let q = spin_flip_overlap(amps);
            // conj(S ψ) with S = σ₂⊗σ₂
            let s = [-amps[3], amps[2], amps[1], -amps[0]].map(|z| z.conj());
            if kind == MeasureKind::ConcurrenceSquared {
                (q.norm_sqr(), s.iter().map(|z| 4.0 * q * z).collect())
            } else {
                let c = q.norm();
                if c < 1e-300 {
                    (0.0, vec![ZERO; 4])
                } else {
                    let u = q / c;
                    (c, s.iter().map(|z| 2.0 * u * z).collect())
                }
            }
        }
        MeasureKind::EntropyOfEntanglement | MeasureKind::LinearEntropy => {
            let m = bipartite_matrix_unchecked(amps, partition);
            let keep_a = m.rows() <= m.cols();
            let rho = if keep_a { reduce(&m, Party::A) } else { reduce(&m, Party::B) };
            // value and Hermitian G with dE = Tr(G dρ)
            let (value, g) = if kind == MeasureKind::EntropyOfEntanglement {
                let (ps, v) = rho.hermitian_eigen().expect("square");
                let value = entropy_of_spectrum(&ps);
                let weights: Vec<C64> = ps
                    .iter()
                    .map(|&p| C64::new(-(p.max(1e-300).ln() + 1.0) / LN_2, 0.0))
                    .collect();
                let g = &(&v * &ComplexMatrix::diagonal(&weights)) * &v.adjoint();
                (value, g)
            } else {
                let purity: f64 = rho.data().iter().map(|z| z.norm_sqr()).sum();
                (1.0 - purity, rho.scale(C64::new(-2.0, 0.0)))
            };
            // ρ_A = M M†  ⇒ ∇_M = 2 G M ;  ρ_B = (M† M)ᵀ ⇒ ∇_M = 2 M Gᵀ
            let grad_m = if keep_a {
                (&g * &m).scale(C64::new(2.0, 0.0))
            } else {
                (&m * &g.transpose()).scale(C64::new(2.0, 0.0))
            };
            (value, amplitudes_from_bipartite(&grad_m, partition))
        }
    }
}
