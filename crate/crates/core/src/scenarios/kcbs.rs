//! The KCBS pentagram scenario on a qutrit.
//!
//! Five rank-one projectors `|v_i><v_i|` with `<v_i|v_{i+1}> = 0` give the
//! dichotomic observables `A_i = 2|v_i><v_i| - 1`; the contexts are the
//! neighbouring pairs `{i, i+1 mod 5}` and the inequality is
//! `sum_i <A_i A_{i+1}> >= -3`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{c64, CMat};
use crate::measure::Observable;

use super::{Direction, Inequality, Scenario};

pub const NAME: &str = "kcbs";
pub const CLASSICAL_BOUND: f64 = -3.0;
/// Inequality value of the maximally mixed qutrit.
pub const MIXED_VALUE: f64 = -5.0 / 3.0;

/// `5 - 4 sqrt(5)`, the largest quantum violation.
pub fn max_violation() -> f64 {
    5.0 - 4.0 * 5f64.sqrt()
}

/// `(5 + 3 sqrt(5)) / 20`.
pub fn max_p_crit() -> f64 {
    (5.0 + 3.0 * 5f64.sqrt()) / 20.0
}

/// `|v_i> = (5^{-1/4}, sqrt(1 - 1/sqrt5) cos(4 i pi/5), sqrt(1 - 1/sqrt5) sin(4 i pi/5))`.
pub fn vector(i: usize) -> [Complex64; 3] {
    let first = 5f64.powf(-0.25);
    let radial = (1.0 - 1.0 / 5f64.sqrt()).sqrt();
    let angle = 4.0 * (i % 5) as f64 * PI / 5.0;
    [
        c64(first, 0.0),
        c64(radial * angle.cos(), 0.0),
        c64(radial * angle.sin(), 0.0),
    ]
}

pub fn observables() -> Vec<Observable> {
    (0..5)
        .map(|i| {
            let proj = CMat::projector(&vector(i));
            let a = &proj.scale_real(2.0) - &CMat::identity(3);
            Observable::new(format!("A{i}"), a).expect("KCBS observable is an involution")
        })
        .collect()
}

pub fn scenario() -> Scenario {
    Scenario::new(
        NAME,
        3,
        observables(),
        (0..5).map(|i| vec![i, (i + 1) % 5]).collect(),
        Inequality {
            gamma: vec![1.0; 5],
            bound: CLASSICAL_BOUND,
            direction: Direction::AtLeast,
        },
    )
    .expect("KCBS scenario is well formed")
}

/// `|psi><psi|` with `psi = (1, 0, 0)`, which reaches `5 - 4 sqrt(5)`.
pub fn optimal_state() -> CMat {
    CMat::projector(&[c64(1.0, 0.0), c64(0.0, 0.0), c64(0.0, 0.0)])
}

/// Inequality value after depolarizing the state before the test:
/// `p S - (1 - p) 5/3`.
pub fn kcbs_noisy_value(s_rho: f64, p: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::OutOfRange {
            name: "p",
            value: p,
            range: "[0, 1]",
        });
    }
    Ok(p * s_rho + (1.0 - p) * MIXED_VALUE)
}

/// `(-4/3) / (S + 5/3)`: at or below this `p` a state with noiseless value
/// `S < -3` no longer violates.
pub fn kcbs_p_crit(s_rho: f64) -> Result<f64> {
    if s_rho.is_nan() || s_rho >= CLASSICAL_BOUND {
        return Err(Error::NoViolation(s_rho));
    }
    Ok((-4.0 / 3.0) / (s_rho - MIXED_VALUE))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::{sequential_correlator, NoisePlacement};
    use crate::scenarios::{evaluate_inequality, Picture};
    use crate::states::maximally_mixed;

    fn inner(a: &[Complex64; 3], b: &[Complex64; 3]) -> Complex64 {
        a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
    }

    #[test]
    fn neighbours_orthogonal_and_normalized() {
        // <v0|v1> = 1/sqrt5 + (1 - 1/sqrt5) cos(4 pi/5), and cos(4 pi/5) = -(1 + sqrt5)/4
        let r5 = 5f64.sqrt();
        let by_hand = 1.0 / r5 + (1.0 - 1.0 / r5) * (-(1.0 + r5) / 4.0);
        assert!(by_hand.abs() < 1e-15);
        for i in 0..5 {
            let (a, b) = (vector(i), vector(i + 1));
            assert!(inner(&a, &b).norm() < 1e-12, "i = {i}");
            assert!((inner(&a, &a).re - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn observables_commute_and_have_trace_minus_one() {
        let obs = observables();
        for i in 0..5 {
            let a = &obs[i];
            let b = &obs[(i + 1) % 5];
            assert!(a.commutator_norm(b).unwrap() < 1e-10);
            assert!((a.matrix().trace().unwrap().re + 1.0).abs() < 1e-12);
            let tr = a.matrix().trace_product(b.matrix()).unwrap();
            assert!((tr.re + 1.0).abs() < 1e-10 && tr.im.abs() < 1e-12);
        }
        // non-neighbours do not commute
        assert!(obs[0].commutator_norm(&obs[2]).unwrap() > 1e-3);
    }

    #[test]
    fn optimal_and_mixed_values() {
        let s = scenario();
        let r = evaluate_inequality(&s, &optimal_state(), None, NoisePlacement::None, Picture::Both)
            .unwrap();
        assert!((r.value - max_violation()).abs() < 1e-10);
        assert!((r.value + 3.9442719100).abs() < 1e-10);
        assert!(r.violated);
        let psi = optimal_state();
        assert!((psi.trace().unwrap().re - 1.0).abs() < 1e-15);
        assert_eq!(&psi * &psi, psi);

        let obs = observables();
        let mixed = maximally_mixed(3);
        for i in 0..5 {
            let v = sequential_correlator(&mixed, &[&obs[i], &obs[(i + 1) % 5]], None, NoisePlacement::None)
                .unwrap();
            assert!((v + 1.0 / 3.0).abs() < 1e-12);
        }
    }

    #[test]
    fn noisy_value_examples() {
        let s = max_violation();
        assert_eq!(kcbs_noisy_value(s, 1.0).unwrap(), s);
        assert_eq!(kcbs_noisy_value(123.0, 0.0).unwrap(), -5.0 / 3.0);
        // 0.5 (5 - 4 sqrt5) - 0.5 * 5/3
        let by_hand = 0.5 * (5.0 - 4.0 * 2.23606797749979) - 5.0 / 6.0;
        assert!((kcbs_noisy_value(s, 0.5).unwrap() - by_hand).abs() < 1e-12);
        assert!((kcbs_noisy_value(s, 0.5).unwrap() + 2.8054692883).abs() < 1e-10);
        assert!(kcbs_noisy_value(s, 1.2).is_err());
    }

    #[test]
    fn p_crit_examples() {
        let p = kcbs_p_crit(max_violation()).unwrap();
        assert!((p - max_p_crit()).abs() < 1e-12);
        assert!((p - 0.5854101966).abs() < 1e-10);
        assert!(matches!(kcbs_p_crit(-3.0), Err(Error::NoViolation(_))));
        assert!(kcbs_p_crit(-1.0).is_err());
        assert!((kcbs_p_crit(-3.5).unwrap() - 8.0 / 11.0).abs() < 1e-15);
    }
}
