//! Single-qubit Pauli matrices and two-qubit Pauli products.

use crate::linalg::{c64, CMat, I, ONE, ZERO};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub const ALL: [Pauli; 4] = [Pauli::X, Pauli::Y, Pauli::Z, Pauli::I];

    pub fn matrix(self) -> CMat {
        match self {
            Pauli::I => CMat::identity(2),
            Pauli::X => sigma_x(),
            Pauli::Y => sigma_y(),
            Pauli::Z => sigma_z(),
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }
}

pub fn sigma_x() -> CMat {
    CMat::from_rows(&[[ZERO, ONE], [ONE, ZERO]])
}

pub fn sigma_y() -> CMat {
    CMat::from_rows(&[[ZERO, -I], [I, ZERO]])
}

pub fn sigma_z() -> CMat {
    CMat::from_rows(&[[ONE, ZERO], [ZERO, c64(-1.0, 0.0)]])
}

/// `a (x) b` on two qubits.
pub fn pauli_pair(a: Pauli, b: Pauli) -> CMat {
    a.matrix().kron(&b.matrix())
}
