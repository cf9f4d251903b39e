//! The Peres-Mermin square on two qubits.
//!
//! ```text
//! A11 = Y Z   A12 = Z Y   A13 = X X
//! A21 = Z X   A22 = X Z   A23 = Y Y
//! A31 = X Y   A32 = Y X   A33 = Z Z
//! ```
//!
//! Rows multiply to `+1`, columns to `-1`. The inequality adds the row
//! correlators, subtracts the column correlators and is bounded by 4.

use crate::measure::Observable;
use crate::pauli::{pauli_pair, Pauli};

use super::{Direction, Inequality, Scenario};

pub const NAME: &str = "pm";
pub const CLASSICAL_BOUND: f64 = 4.0;
pub const QUANTUM_VALUE: f64 = 6.0;

const GRID: [[(Pauli, Pauli); 3]; 3] = {
    use Pauli::{X, Y, Z};
    [
        [(Y, Z), (Z, Y), (X, X)],
        [(Z, X), (X, Z), (Y, Y)],
        [(X, Y), (Y, X), (Z, Z)],
    ]
};

/// Row-major `A11, A12, ..., A33`.
pub fn observables() -> Vec<Observable> {
    let mut out = Vec::with_capacity(9);
    for (r, row) in GRID.iter().enumerate() {
        for (c, &(a, b)) in row.iter().enumerate() {
            let label = format!("A{}{}", r + 1, c + 1);
            out.push(Observable::new(label, pauli_pair(a, b)).expect("Pauli product"));
        }
    }
    out
}

/// Rows first, then columns.
pub fn contexts() -> Vec<Vec<usize>> {
    let rows = (0..3).map(|r| (0..3).map(|c| 3 * r + c).collect());
    let cols = (0..3).map(|c| (0..3).map(|r| 3 * r + c).collect());
    rows.chain(cols).collect()
}

pub fn scenario() -> Scenario {
    Scenario::new(
        NAME,
        4,
        observables(),
        contexts(),
        Inequality {
            gamma: vec![1.0, 1.0, 1.0, -1.0, -1.0, -1.0],
            bound: CLASSICAL_BOUND,
            direction: Direction::AtMost,
        },
    )
    .expect("Peres-Mermin scenario is well formed")
}

/// Noisy sequential value `6 p^2` with noise before each measurement.
pub fn noisy_value(p: f64) -> f64 {
    QUANTUM_VALUE * p * p
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::CMat;
    use crate::measure::NoisePlacement;
    use crate::scenarios::{evaluate_inequality, Picture};
    use crate::states::random_state;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn product(s: &Scenario, k: usize) -> CMat {
        s.context_observables(k)
            .iter()
            .fold(CMat::identity(4), |acc, o| &acc * o.matrix())
    }

    #[test]
    fn rows_and_columns_multiply_to_plus_minus_identity() {
        let s = scenario();
        let id = CMat::identity(4);
        for k in 0..3 {
            assert!(product(&s, k).frob_dist(&id).unwrap() < 1e-12);
        }
        for k in 3..6 {
            assert!(product(&s, k).frob_dist(&id.scale_real(-1.0)).unwrap() < 1e-12);
        }
        assert_eq!(s.context_label(0), "A11 A12 A13");
        assert_eq!(s.context_label(3), "A11 A21 A31");
    }

    #[test]
    fn state_independent_value() {
        let s = scenario();
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..20 {
            let rho = random_state(4, &mut rng);
            let r = evaluate_inequality(&s, &rho, None, NoisePlacement::None, Picture::Both).unwrap();
            assert!((r.value - 6.0).abs() < 1e-10);
            assert!(r.violated);
        }
    }

    #[test]
    fn noise_before_the_test_cannot_change_the_value() {
        let s = scenario();
        let mut rng = ChaCha8Rng::seed_from_u64(32);
        for p in [0.0, 0.3, 0.7, 1.0] {
            let ch = crate::channels::Channel::depolarizing(p, 4).unwrap();
            let rho = random_state(4, &mut rng);
            let r = evaluate_inequality(&s, &rho, Some(&ch), NoisePlacement::BeforeFirstOnly, Picture::Both)
                .unwrap();
            for (k, c) in r.correlators.iter().enumerate() {
                let expected = if k < 3 { 1.0 } else { -1.0 };
                assert!((c - expected).abs() < 1e-10);
            }
        }
    }
}
