//! Fixed one- and two-qubit gate matrices in the computational basis.

use super::matrix::{ComplexMatrix, C64, I, ONE, ZERO};

pub fn pauli_x() -> ComplexMatrix {
    ComplexMatrix::from_rows(&[[ZERO, ONE], [ONE, ZERO]]).unwrap()
}

pub fn pauli_y() -> ComplexMatrix {
    ComplexMatrix::from_rows(&[[ZERO, -I], [I, ZERO]]).unwrap()
}

pub fn pauli_z() -> ComplexMatrix {
    ComplexMatrix::from_rows(&[[ONE, ZERO], [ZERO, -ONE]]).unwrap()
}

/// `σ_j` for `j = 1, 2, 3`.
pub fn pauli(j: usize) -> ComplexMatrix {
    match j {
        1 => pauli_x(),
        2 => pauli_y(),
        3 => pauli_z(),
        _ => panic!("pauli index must be 1, 2 or 3, got {j}"),
    }
}

pub fn hadamard() -> ComplexMatrix {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    ComplexMatrix::from_real_rows(&[[h, h], [h, -h]]).unwrap()
}

/// CNOT with the first qubit as control.
pub fn cnot() -> ComplexMatrix {
    ComplexMatrix::from_real_rows(&[
        [1.0, 0.0, 0.0, 0.0],
        [0.0, 1.0, 0.0, 0.0],
        [0.0, 0.0, 0.0, 1.0],
        [0.0, 0.0, 1.0, 0.0],
    ])
    .unwrap()
}

/// CNOT with the second qubit as control.
pub fn cnot_reversed() -> ComplexMatrix {
    ComplexMatrix::from_real_rows(&[
        [1.0, 0.0, 0.0, 0.0],
        [0.0, 0.0, 0.0, 1.0],
        [0.0, 0.0, 1.0, 0.0],
        [0.0, 1.0, 0.0, 0.0],
    ])
    .unwrap()
}

/// Double CNOT: a CNOT followed by a CNOT with the roles reversed.
pub fn dcnot() -> ComplexMatrix {
    &cnot_reversed() * &cnot()
}

pub fn swap() -> ComplexMatrix {
    ComplexMatrix::from_real_rows(&[
        [1.0, 0.0, 0.0, 0.0],
        [0.0, 0.0, 1.0, 0.0],
        [0.0, 1.0, 0.0, 0.0],
        [0.0, 0.0, 0.0, 1.0],
    ])
    .unwrap()
}

pub fn cz() -> ComplexMatrix {
    ComplexMatrix::diagonal(&[ONE, ONE, ONE, -ONE])
}

/// `exp(i θ P)` for an involutory `P` (`P² = 1`), i.e. `cos θ + i sin θ P`.
pub fn exp_i_involution(p: &ComplexMatrix, theta: f64) -> ComplexMatrix {
    let n = p.rows();
    let c = ComplexMatrix::identity(n).scale(C64::new(theta.cos(), 0.0));
    let s = p.scale(C64::new(0.0, theta.sin()));
    &c + &s
}
