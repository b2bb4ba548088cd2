//! Pure states over labelled qubits, reduced density matrices and entropy.
//!
//! Qubit 0 is the most significant bit of the basis index throughout the
//! crate, so `|01⟩` is amplitude index 1.

use std::f64::consts::LN_2;

use super::matrix::{inner, vec_norm, ComplexMatrix, C64, ONE, ZERO};
use crate::error::{Error, Result};

/// Tolerance on `| ‖ψ‖ - 1 |` accepted by [`PureState::new`].
pub const NORM_TOL: f64 = 1e-10;

/// Eigenvalues below this contribute nothing to the von Neumann entropy.
pub const ENTROPY_EIGEN_FLOOR: f64 = 1e-12;

/// Which side of the bipartite cut a qubit belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Party {
    A,
    B,
}

/// A normalized state vector of `n` qubits, each labelled with its owner.
#[derive(Clone, Debug, PartialEq)]
pub struct PureState {
    amplitudes: Vec<C64>,
    partition: Vec<Party>,
}

fn check_dims(len: usize, partition: &[Party]) -> Result<()> {
    let n = partition.len();
    if n == 0 || n > 16 || len != 1usize << n {
        return Err(Error::DimensionMismatch(format!(
            "{len} amplitudes do not match {n} labelled qubits"
        )));
    }
    Ok(())
}

impl PureState {
    /// Wraps already-normalized amplitudes.
    pub fn new(amplitudes: Vec<C64>, partition: Vec<Party>) -> Result<Self> {
        check_dims(amplitudes.len(), &partition)?;
        let norm = vec_norm(&amplitudes);
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized {
                norm_sq: norm * norm,
            });
        }
        Ok(Self {
            amplitudes,
            partition,
        })
    }

    /// Normalizes the amplitudes first.
    pub fn normalized(mut amplitudes: Vec<C64>, partition: Vec<Party>) -> Result<Self> {
        check_dims(amplitudes.len(), &partition)?;
        let norm = vec_norm(&amplitudes);
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::ZeroVector);
        }
        for a in &mut amplitudes {
            *a /= norm;
        }
        Ok(Self {
            amplitudes,
            partition,
        })
    }

    /// Two-qubit state with qubit 0 owned by A and qubit 1 by B.
    pub fn two_qubit(amplitudes: [C64; 4]) -> Result<Self> {
        Self::new(amplitudes.to_vec(), vec![Party::A, Party::B])
    }

    /// Computational basis state from a bit string such as `"0110"`.
    pub fn basis(bits: &str, partition: Vec<Party>) -> Result<Self> {
        let n = bits.len();
        if n != partition.len() {
            return Err(Error::DimensionMismatch(format!(
                "{n} bits but {} partition labels",
                partition.len()
            )));
        }
        let index = usize::from_str_radix(bits, 2)
            .map_err(|_| Error::Parse(format!("not a bit string: {bits:?}")))?;
        let mut amps = vec![ZERO; 1 << n];
        amps[index] = ONE;
        Self::new(amps, partition)
    }

    pub(crate) fn from_parts_unchecked(amplitudes: Vec<C64>, partition: Vec<Party>) -> Self {
        debug_assert_eq!(amplitudes.len(), 1 << partition.len());
        Self {
            amplitudes,
            partition,
        }
    }

    /// `|a⟩ ⊗ |b⟩`, with qubit labels concatenated.
    pub fn tensor(&self, other: &PureState) -> PureState {
        let mut amps = Vec::with_capacity(self.dim() * other.dim());
        for x in &self.amplitudes {
            for y in &other.amplitudes {
                amps.push(x * y);
            }
        }
        let mut partition = self.partition.clone();
        partition.extend_from_slice(&other.partition);
        PureState {
            amplitudes: amps,
            partition,
        }
    }

    #[inline]
    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<C64> {
        self.amplitudes
    }

    #[inline]
    pub fn partition(&self) -> &[Party] {
        &self.partition
    }

    #[inline]
    pub fn n_qubits(&self) -> usize {
        self.partition.len()
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn norm(&self) -> f64 {
        vec_norm(&self.amplitudes)
    }

    /// `⟨self|other⟩`
    pub fn inner(&self, other: &PureState) -> C64 {
        inner(&self.amplitudes, &other.amplitudes)
    }

    /// `|⟨self|other⟩|`, i.e. overlap insensitive to global phase.
    pub fn fidelity(&self, other: &PureState) -> f64 {
        self.inner(other).norm()
    }

    pub fn qubits_of(&self, party: Party) -> Vec<usize> {
        (0..self.n_qubits())
            .filter(|&q| self.partition[q] == party)
            .collect()
    }

    fn check_bipartite(&self) -> Result<()> {
        if self.qubits_of(Party::A).is_empty() || self.qubits_of(Party::B).is_empty() {
            return Err(Error::WrongPartition(
                "both parties need at least one qubit".into(),
            ));
        }
        Ok(())
    }

    /// Amplitudes reshaped to a `d_A × d_B` matrix, rows indexed by A's
    /// qubits and columns by B's (each in ascending qubit order).
    pub fn bipartite_matrix(&self) -> Result<ComplexMatrix> {
        self.check_bipartite()?;
        Ok(bipartite_matrix_unchecked(&self.amplitudes, &self.partition))
    }

    /// Applies a single-qubit unitary to qubit `q`.
    pub fn apply_single(&self, g: &ComplexMatrix, q: usize) -> Result<PureState> {
        if g.rows() != 2 || g.cols() != 2 {
            return Err(Error::DimensionMismatch("single-qubit gate must be 2x2".into()));
        }
        let n = self.n_qubits();
        if q >= n {
            return Err(Error::IndexOutOfRange {
                index: q,
                n_qubits: n,
            });
        }
        let bit = 1usize << (n - 1 - q);
        let mut out = self.amplitudes.clone();
        for i in 0..self.dim() {
            if i & bit == 0 {
                let (a0, a1) = (self.amplitudes[i], self.amplitudes[i | bit]);
                out[i] = g.get(0, 0) * a0 + g.get(0, 1) * a1;
                out[i | bit] = g.get(1, 0) * a0 + g.get(1, 1) * a1;
            }
        }
        Ok(PureState {
            amplitudes: out,
            partition: self.partition.clone(),
        })
    }
}

pub(crate) fn bipartite_matrix_unchecked(amps: &[C64], partition: &[Party]) -> ComplexMatrix {
    let n = partition.len();
    let a_bits: Vec<usize> = (0..n).filter(|&q| partition[q] == Party::A).collect();
    let b_bits: Vec<usize> = (0..n).filter(|&q| partition[q] == Party::B).collect();
    let (da, db) = (1usize << a_bits.len(), 1usize << b_bits.len());
    // Fast path: A qubits come first.
    if a_bits.iter().enumerate().all(|(i, &q)| i == q) {
        return ComplexMatrix::new(da, db, amps.to_vec()).expect("dimensions consistent");
    }
    let mut m = ComplexMatrix::zeros(da, db);
    for (idx, &amp) in amps.iter().enumerate() {
        let extract = |qs: &[usize]| {
            qs.iter()
                .fold(0usize, |acc, &q| (acc << 1) | ((idx >> (n - 1 - q)) & 1))
        };
        m.set(extract(&a_bits), extract(&b_bits), amp);
    }
    m
}

/// Inverse of [`bipartite_matrix_unchecked`].
pub(crate) fn amplitudes_from_bipartite(m: &ComplexMatrix, partition: &[Party]) -> Vec<C64> {
    let n = partition.len();
    let a_bits: Vec<usize> = (0..n).filter(|&q| partition[q] == Party::A).collect();
    if a_bits.iter().enumerate().all(|(i, &q)| i == q) {
        return m.data().to_vec();
    }
    let b_bits: Vec<usize> = (0..n).filter(|&q| partition[q] == Party::B).collect();
    let mut out = vec![ZERO; 1 << n];
    for (idx, slot) in out.iter_mut().enumerate() {
        let extract = |qs: &[usize]| {
            qs.iter()
                .fold(0usize, |acc, &q| (acc << 1) | ((idx >> (n - 1 - q)) & 1))
        };
        *slot = m.get(extract(&a_bits), extract(&b_bits));
    }
    out
}

/// A validated density matrix: Hermitian, unit trace, positive semidefinite
/// (all within `1e-10`).
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix(ComplexMatrix);

const DENSITY_TOL: f64 = 1e-10;

impl DensityMatrix {
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::DimensionMismatch("density matrix must be square".into()));
        }
        if !m.is_hermitian(DENSITY_TOL) {
            return Err(Error::OutOfRange("density matrix is not Hermitian".into()));
        }
        let tr = m.trace();
        if (tr - ONE).norm() > DENSITY_TOL {
            return Err(Error::OutOfRange(format!("density matrix has trace {tr}")));
        }
        let min = m.hermitian_eigenvalues()?.first().copied().unwrap_or(0.0);
        if min < -DENSITY_TOL {
            return Err(Error::OutOfRange(format!(
                "density matrix has eigenvalue {min:.3e}"
            )));
        }
        Ok(Self(m))
    }

    pub(crate) fn new_unchecked(m: ComplexMatrix) -> Self {
        Self(m)
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.rows()
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        self.0
            .hermitian_eigenvalues()
            .expect("density matrices are square")
    }

    /// `Tr(ρ²)`
    pub fn purity(&self) -> f64 {
        // Tr(ρ²) = Σ |ρ_ij|² for Hermitian ρ.
        self.0.data().iter().map(|z| z.norm_sqr()).sum()
    }
}

/// Reduced density matrix of `psi` on the qubits owned by `keep`.
pub fn partial_trace(psi: &PureState, keep: Party) -> Result<DensityMatrix> {
    let m = psi.bipartite_matrix()?;
    Ok(DensityMatrix::new_unchecked(reduce(&m, keep)))
}

/// `M M†` (keep A) or `(M† M)ᵀ` (keep B) for a bipartite amplitude matrix.
pub(crate) fn reduce(m: &ComplexMatrix, keep: Party) -> ComplexMatrix {
    let (da, db) = (m.rows(), m.cols());
    match keep {
        Party::A => {
            let mut rho = ComplexMatrix::zeros(da, da);
            for i in 0..da {
                for j in i..da {
                    let v: C64 = m
                        .row(i)
                        .iter()
                        .zip(m.row(j))
                        .map(|(x, y)| x * y.conj())
                        .sum();
                    rho.set(i, j, v);
                    rho.set(j, i, v.conj());
                }
            }
            rho
        }
        Party::B => {
            let mut rho = ComplexMatrix::zeros(db, db);
            for i in 0..db {
                for j in i..db {
                    let v: C64 = (0..da).map(|a| m.get(a, i) * m.get(a, j).conj()).sum();
                    rho.set(i, j, v);
                    rho.set(j, i, v.conj());
                }
            }
            rho
        }
    }
}

/// `-Σ p log₂ p` over the eigenvalues of `rho`, ignoring `p < 1e-12`.
pub fn von_neumann_entropy_bits(rho: &DensityMatrix) -> f64 {
    entropy_of_spectrum(&rho.eigenvalues())
}

pub(crate) fn entropy_of_spectrum(ps: &[f64]) -> f64 {
    ps.iter()
        .filter(|&&p| p > ENTROPY_EIGEN_FLOOR)
        .map(|&p| -p * p.ln() / LN_2)
        .sum::<f64>()
        .max(0.0)
}

/// Applies a 4×4 unitary to the ordered qubit pair `(qa, qb)`, where `qa`
/// must belong to A and `qb` to B. `qa` is the more significant qubit of
/// the gate's own basis.
pub fn apply_to_qubit_pair(
    u: &ComplexMatrix,
    psi: &PureState,
    qa: usize,
    qb: usize,
) -> Result<PureState> {
    if u.rows() != 4 || u.cols() != 4 {
        return Err(Error::DimensionMismatch("two-qubit gate must be 4x4".into()));
    }
    let residual = u.unitarity_residual();
    if residual > super::matrix::UNITARY_TOL {
        return Err(Error::NotUnitary { residual });
    }
    let n = psi.n_qubits();
    for q in [qa, qb] {
        if q >= n {
            return Err(Error::IndexOutOfRange {
                index: q,
                n_qubits: n,
            });
        }
    }
    if qa == qb {
        return Err(Error::WrongPartition("gate qubits must differ".into()));
    }
    if psi.partition[qa] != Party::A || psi.partition[qb] != Party::B {
        return Err(Error::WrongPartition(format!(
            "qubit {qa} must belong to A and qubit {qb} to B"
        )));
    }
    let mut gate = [ZERO; 16];
    gate.copy_from_slice(u.data());
    Ok(PureState {
        amplitudes: apply_pair_raw(&gate, &psi.amplitudes, n, qa, qb),
        partition: psi.partition.clone(),
    })
}

/// Unchecked kernel behind [`apply_to_qubit_pair`].
pub(crate) fn apply_pair_raw(
    gate: &[C64; 16],
    amps: &[C64],
    n: usize,
    qa: usize,
    qb: usize,
) -> Vec<C64> {
    let ba = 1usize << (n - 1 - qa);
    let bb = 1usize << (n - 1 - qb);
    let mut out = vec![ZERO; amps.len()];
    for i in 0..amps.len() {
        if i & ba != 0 || i & bb != 0 {
            continue;
        }
        let idx = [i, i | bb, i | ba, i | ba | bb];
        let v = [amps[idx[0]], amps[idx[1]], amps[idx[2]], amps[idx[3]]];
        for r in 0..4 {
            out[idx[r]] = gate[4 * r] * v[0]
                + gate[4 * r + 1] * v[1]
                + gate[4 * r + 2] * v[2]
                + gate[4 * r + 3] * v[3];
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::gates;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn ab() -> Vec<Party> {
        vec![Party::A, Party::B]
    }

    fn bell() -> PureState {
        let h = C64::new(FRAC_1_SQRT_2, 0.0);
        PureState::two_qubit([h, ZERO, ZERO, h]).unwrap()
    }

    #[test]
    fn cnot_maps_10_to_11() {
        let psi = PureState::basis("10", ab()).unwrap();
        let out = apply_to_qubit_pair(&gates::cnot(), &psi, 0, 1).unwrap();
        assert_eq!(out, PureState::basis("11", ab()).unwrap());
    }

    #[test]
    fn identity_leaves_state_alone() {
        let psi = bell();
        let out = apply_to_qubit_pair(&ComplexMatrix::identity(4), &psi, 0, 1).unwrap();
        assert!(out.amplitudes().iter().zip(psi.amplitudes()).all(|(a, b)| a == b));
    }

    #[test]
    fn gate_acts_on_the_named_pair_only() {
        // qubits: a(A) A(A) B(B) b(B); CNOT on (1, 2) applied to |0110>
        let part = vec![Party::A, Party::A, Party::B, Party::B];
        let psi = PureState::basis("0100", part.clone()).unwrap();
        let out = apply_to_qubit_pair(&gates::cnot(), &psi, 1, 2).unwrap();
        assert_eq!(out, PureState::basis("0110", part).unwrap());
    }

    #[test]
    fn pair_application_errors() {
        let psi = PureState::basis("00", ab()).unwrap();
        assert!(matches!(
            apply_to_qubit_pair(&gates::cnot(), &psi, 0, 2),
            Err(Error::IndexOutOfRange { index: 2, .. })
        ));
        assert!(matches!(
            apply_to_qubit_pair(&gates::cnot(), &psi, 1, 0),
            Err(Error::WrongPartition(_))
        ));
        let not_unitary = ComplexMatrix::identity(4).scale(C64::new(1.1, 0.0));
        assert!(matches!(
            apply_to_qubit_pair(&not_unitary, &psi, 0, 1),
            Err(Error::NotUnitary { .. })
        ));
    }

    #[test]
    fn bell_reduces_to_maximally_mixed() {
        let rho = partial_trace(&bell(), Party::A).unwrap();
        let half = ComplexMatrix::identity(2).scale(C64::new(0.5, 0.0));
        assert!(rho.matrix().max_abs_diff(&half) < 1e-15);
        assert!((von_neumann_entropy_bits(&rho) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn product_reduces_to_projector() {
        let psi = PureState::basis("01", ab()).unwrap();
        let rho = partial_trace(&psi, Party::A).unwrap();
        let p0 = ComplexMatrix::diagonal(&[ONE, ZERO]);
        assert_eq!(rho.matrix(), &p0);
        assert_eq!(von_neumann_entropy_bits(&rho), 0.0);
        let rho_b = partial_trace(&psi, Party::B).unwrap();
        assert_eq!(rho_b.matrix(), &ComplexMatrix::diagonal(&[ZERO, ONE]));
    }

    #[test]
    fn entropy_of_three_quarters_quarter() {
        let rho = DensityMatrix::new(ComplexMatrix::diagonal(&[
            C64::new(0.75, 0.0),
            C64::new(0.25, 0.0),
        ]))
        .unwrap();
        // h(1/4) evaluated independently
        let h = -0.25f64 * 0.25f64.log2() - 0.75 * 0.75f64.log2();
        assert!((von_neumann_entropy_bits(&rho) - h).abs() < 1e-14);
        assert!((h - 0.811278).abs() < 1e-6);
    }

    #[test]
    fn density_matrix_validation() {
        let bad_trace = ComplexMatrix::diagonal(&[ONE, ONE]);
        assert!(DensityMatrix::new(bad_trace).is_err());
        let negative = ComplexMatrix::diagonal(&[C64::new(1.5, 0.0), C64::new(-0.5, 0.0)]);
        assert!(DensityMatrix::new(negative).is_err());
    }

    #[test]
    fn interleaved_partition_matches_permuted_layout() {
        // A B A B labelling of (|Φ+⟩_{q0,q1} ⊗ |0⟩⊗|0⟩) reshaped by owner.
        let h = C64::new(FRAC_1_SQRT_2, 0.0);
        let mut amps = vec![ZERO; 16];
        amps[0b0000] = h;
        amps[0b1100] = h;
        let psi = PureState::new(amps, vec![Party::A, Party::B, Party::A, Party::B]).unwrap();
        let m = psi.bipartite_matrix().unwrap();
        // A bits (q0, q2), B bits (q1, q3): |00>_A|00>_B and |10>_A|10>_B
        assert_eq!(m.get(0, 0), h);
        assert_eq!(m.get(2, 2), h);
        let back = amplitudes_from_bipartite(&m, psi.partition());
        assert_eq!(back, psi.amplitudes());
        let rho = partial_trace(&psi, Party::A).unwrap();
        assert!((von_neumann_entropy_bits(&rho) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn bipartite_requires_both_parties() {
        let psi = PureState::basis("00", vec![Party::A, Party::A]).unwrap();
        assert!(matches!(partial_trace(&psi, Party::A), Err(Error::WrongPartition(_))));
    }
}
