//! Entangling capacity of two-qubit unitaries.
//!
//! The crate is organised bottom-up:
//!
//! * [`qcore`]: dense complex matrices, labelled pure states, partial traces,
//!   Haar sampling.
//! * [`canonical`]: reduction of any `U ∈ U(4)` to its canonical parameters
//!   `(α₁, α₂, α₃)` through local invariants.
//! * [`measures`]: pure-state entanglement measures and their gradients.
//! * [`capacity`]: closed-form single-copy capacities without ancillas.
//! * [`optimize`]: multi-start numerical capacities, optionally with
//!   ancillas, and gate-family sweeps.
//! * [`cli`]: the `entcap` command line.

pub mod canonical;
pub mod capacity;
pub mod cli;
pub mod error;
pub mod measures;
pub mod optimize;
pub mod qcore;

pub use canonical::{
    bell_coefficients, build_canonical_unitary, decompose, local_invariants, u_tilde, BellBasis,
    CanonicalParams, LocalInvariants,
};
pub use error::{Error, Result};
pub use measures::MeasureKind;
pub use qcore::{ComplexMatrix, Party, PureState, C64};
