//! Seeded sampling of Haar-random states and local unitaries.
//!
//! All randomness flows from an explicit `u64` seed through ChaCha, a
//! counter-based generator; independent streams are derived by seed offset.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;

use super::matrix::{ComplexMatrix, C64};
use super::state::{Party, PureState};

pub type SeededRng = ChaCha20Rng;

pub fn rng_from_seed(seed: u64) -> SeededRng {
    ChaCha20Rng::seed_from_u64(seed)
}

/// Complex vector with i.i.d. standard Gaussian entries, normalized. This is
/// the unitarily invariant measure on the unit sphere.
pub fn haar_amplitudes<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Vec<C64> {
    loop {
        let mut v: Vec<C64> = (0..dim)
            .map(|_| C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
            .collect();
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-300 {
            v.iter_mut().for_each(|z| *z /= norm);
            return v;
        }
    }
}

/// Haar-random state over `partition.len()` qubits.
pub fn haar_state_with<R: Rng + ?Sized>(partition: Vec<Party>, rng: &mut R) -> PureState {
    let amps = haar_amplitudes(1 << partition.len(), rng);
    PureState::from_parts_unchecked(amps, partition)
}

/// Default labelling for `n` qubits: the first `max(1, n/2)` belong to A.
pub fn default_partition(n: usize) -> Vec<Party> {
    let n_a = (n / 2).max(1);
    (0..n)
        .map(|q| if q < n_a { Party::A } else { Party::B })
        .collect()
}

/// Haar-random `n`-qubit state; deterministic for a fixed seed.
pub fn haar_random_state(n: usize, seed: u64) -> PureState {
    assert!(n >= 1, "need at least one qubit");
    haar_state_with(default_partition(n), &mut rng_from_seed(seed))
}

/// Haar-random element of U(2): a uniformly random unit quaternion gives
/// SU(2), times a uniform global phase.
pub fn haar_unitary_2<R: Rng + ?Sized>(rng: &mut R) -> ComplexMatrix {
    let q = loop {
        let q: [f64; 4] = [
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
        ];
        let n = q.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n > 1e-300 {
            break q.map(|x| x / n);
        }
    };
    let a = C64::new(q[0], q[1]);
    let b = C64::new(q[2], q[3]);
    let phase = C64::from_polar(1.0, rng.random_range(0.0..std::f64::consts::TAU));
    ComplexMatrix::from_rows(&[[a, -b.conj()], [b, a.conj()]])
        .unwrap()
        .scale(phase)
}

/// Pair of independent Haar-random single-qubit unitaries.
pub fn haar_random_local_unitary(seed: u64) -> (ComplexMatrix, ComplexMatrix) {
    let mut rng = rng_from_seed(seed);
    let a = haar_unitary_2(&mut rng);
    let b = haar_unitary_2(&mut rng);
    (a, b)
}
