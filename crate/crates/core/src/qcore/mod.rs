//! Dense linear algebra and pure-state primitives shared by every module.

pub mod gates;
pub mod matrix;
pub mod random;
pub mod state;

pub use matrix::{tensor_product, ComplexMatrix, C64, UNITARY_TOL};
pub use random::{
    haar_random_local_unitary, haar_random_state, haar_state_with, haar_unitary_2, rng_from_seed,
    SeededRng,
};
pub use state::{
    apply_to_qubit_pair, partial_trace, von_neumann_entropy_bits, DensityMatrix, Party, PureState,
};
