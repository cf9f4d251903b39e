//! Noise sweeps and classicalization thresholds.
//!
//! The threshold finder bisects on the violation verdict rather than
//! inverting a closed form, so it also covers placements with no known
//! formula. Closed forms, where they exist, are attached as cross-checks.

use serde::Serialize;

use crate::channels::{lindblad_p, Channel};
use crate::error::{Error, Result};
use crate::linalg::CMat;
use crate::measure::NoisePlacement;
use crate::scenarios::{
    evaluate_inequality, kcbs, kcbs_p_crit, peres_mermin, Direction, Picture, Scenario,
};

pub const DEFAULT_TOL: f64 = 1e-8;
pub const MAX_BISECTIONS: usize = 64;
/// Grid used to bracket the crossing and detect non-monotone behaviour.
pub const BRACKET_GRID: usize = 65;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepPoint {
    pub p: f64,
    pub value: f64,
    pub violated: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepSeries {
    pub scenario: String,
    pub placement: NoisePlacement,
    pub state: String,
    pub bound: f64,
    pub direction: Direction,
    pub points: Vec<SweepPoint>,
    pub analytic_threshold: Option<f64>,
    pub numeric_threshold: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "outcome", content = "p", rename_all = "kebab-case")]
pub enum ThresholdOutcome {
    Crossing(f64),
    NeverViolates,
    AlwaysViolates,
}

impl ThresholdOutcome {
    pub fn crossing(self) -> Option<f64> {
        match self {
            ThresholdOutcome::Crossing(p) => Some(p),
            _ => None,
        }
    }
}

fn value_at(s: &Scenario, rho: &CMat, placement: NoisePlacement, p: f64, picture: Picture) -> Result<(f64, bool)> {
    let ch = Channel::depolarizing(p, s.dimension())?;
    let r = evaluate_inequality(s, rho, Some(&ch), placement, picture)?;
    Ok((r.value, r.violated))
}

/// Evaluates the inequality (both pictures, cross-checked) at `steps`
/// evenly spaced noise levels from `p_min` to `p_max` inclusive.
pub fn sweep(
    s: &Scenario,
    rho: &CMat,
    placement: NoisePlacement,
    p_min: f64,
    p_max: f64,
    steps: usize,
) -> Result<SweepSeries> {
    if !(0.0 <= p_min && p_min < p_max && p_max <= 1.0) {
        return Err(Error::OutOfRange {
            name: "p range",
            value: p_max - p_min,
            range: "0 <= p_min < p_max <= 1",
        });
    }
    if steps < 2 {
        return Err(Error::OutOfRange {
            name: "steps",
            value: steps as f64,
            range: "[2, inf)",
        });
    }
    let points = (0..steps)
        .map(|k| {
            let p = if k == steps - 1 {
                p_max
            } else {
                p_min + (p_max - p_min) * k as f64 / (steps - 1) as f64
            };
            let (value, violated) = value_at(s, rho, placement, p, Picture::Both)?;
            Ok(SweepPoint { p, value, violated })
        })
        .collect::<Result<Vec<_>>>()?;
    let numeric_threshold = find_threshold(s, rho, placement, DEFAULT_TOL)
        .ok()
        .and_then(ThresholdOutcome::crossing);
    Ok(SweepSeries {
        scenario: s.name().to_string(),
        placement,
        state: "custom".into(),
        bound: s.inequality().bound,
        direction: s.inequality().direction,
        points,
        analytic_threshold: analytic_threshold(s, rho, placement)?,
        numeric_threshold,
    })
}

/// Closed-form threshold for the configurations that have one: the KCBS
/// scenario with noise before the test (`p_crit(S_rho)`) and the
/// Peres-Mermin square with noise before each measurement (`sqrt(2/3)`).
pub fn analytic_threshold(s: &Scenario, rho: &CMat, placement: NoisePlacement) -> Result<Option<f64>> {
    if placement == NoisePlacement::BeforeFirstOnly && *s == kcbs::scenario() {
        let s_rho = evaluate_inequality(s, rho, None, NoisePlacement::None, Picture::Schrodinger)?.value;
        return Ok(kcbs_p_crit(s_rho).ok());
    }
    if placement == NoisePlacement::BeforeEach && *s == peres_mermin::scenario() {
        return Ok(Some((peres_mermin::CLASSICAL_BOUND / peres_mermin::QUANTUM_VALUE).sqrt()));
    }
    Ok(None)
}

/// Locates the depolarizing parameter where the violation verdict flips,
/// to within `tol`, by bisection on `[0, 1]`.
pub fn find_threshold(
    s: &Scenario,
    rho: &CMat,
    placement: NoisePlacement,
    tol: f64,
) -> Result<ThresholdOutcome> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::OutOfRange {
            name: "tol",
            value: tol,
            range: "(0, inf)",
        });
    }
    let violated = |p: f64| -> Result<bool> {
        Ok(value_at(s, rho, placement, p, Picture::Schrodinger)?.1)
    };

    let grid: Vec<f64> = (0..BRACKET_GRID)
        .map(|k| k as f64 / (BRACKET_GRID - 1) as f64)
        .collect();
    let verdicts = grid.iter().map(|&p| violated(p)).collect::<Result<Vec<_>>>()?;
    let flips: Vec<usize> = (1..grid.len())
        .filter(|&k| verdicts[k] != verdicts[k - 1])
        .collect();
    match flips.as_slice() {
        [] if verdicts[0] => Ok(ThresholdOutcome::AlwaysViolates),
        [] => Ok(ThresholdOutcome::NeverViolates),
        &[k] => {
            let low_verdict = verdicts[k - 1];
            let (mut lo, mut hi) = (grid[k - 1], grid[k]);
            for _ in 0..MAX_BISECTIONS {
                if hi - lo <= tol {
                    break;
                }
                let mid = 0.5 * (lo + hi);
                if violated(mid)? == low_verdict {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            Ok(ThresholdOutcome::Crossing(0.5 * (lo + hi)))
        }
        many => Err(Error::NonMonotone(format!(
            "verdict changes {} times on the p grid (first near p = {:.4})",
            many.len(),
            grid[many[0]]
        ))),
    }
}

/// Noisy Peres-Mermin value `6 p^2`.
pub fn experiment_consistency(p: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::OutOfRange {
            name: "p",
            value: p,
            range: "[0, 1]",
        });
    }
    Ok(peres_mermin::noisy_value(p))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TimePoint {
    pub t: f64,
    pub p: f64,
    pub value: f64,
    pub violated: bool,
}

/// The same evaluation parametrized by interaction time, `p = exp(-4 gamma t)`.
pub fn sweep_time(
    s: &Scenario,
    rho: &CMat,
    placement: NoisePlacement,
    gamma: f64,
    times: &[f64],
) -> Result<Vec<TimePoint>> {
    times
        .iter()
        .map(|&t| {
            let p = lindblad_p(gamma, t)?;
            let (value, violated) = value_at(s, rho, placement, p, Picture::Both)?;
            Ok(TimePoint {
                t,
                p,
                value,
                violated,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::Observable;
    use crate::pauli::sigma_z;
    use crate::scenarios::Inequality;
    use crate::states::{basis_state, maximally_mixed, random_state};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn pm_sweep_values() {
        let pm = peres_mermin::scenario();
        let series = sweep(&pm, &maximally_mixed(4), NoisePlacement::BeforeEach, 0.0, 1.0, 3).unwrap();
        let values: Vec<f64> = series.points.iter().map(|pt| pt.value).collect();
        for (v, e) in values.iter().zip([0.0, 1.5, 6.0]) {
            assert!((v - e).abs() < 1e-12);
        }
        let a = series.analytic_threshold.unwrap();
        let n = series.numeric_threshold.unwrap();
        assert!((a - n).abs() < DEFAULT_TOL);
    }

    #[test]
    fn kcbs_sweep_endpoints() {
        let k = kcbs::scenario();
        let series = sweep(&k, &kcbs::optimal_state(), NoisePlacement::BeforeFirstOnly, 0.0, 1.0, 2).unwrap();
        assert!((series.points[0].value + 5.0 / 3.0).abs() < 1e-12);
        assert!((series.points[1].value - kcbs::max_violation()).abs() < 1e-10);
        assert!(series.points.windows(2).all(|w| w[0].p < w[1].p));
    }

    #[test]
    fn sweep_rejects_bad_ranges() {
        let k = kcbs::scenario();
        let rho = maximally_mixed(3);
        assert!(sweep(&k, &rho, NoisePlacement::BeforeEach, 0.5, 0.5, 5).is_err());
        assert!(sweep(&k, &rho, NoisePlacement::BeforeEach, 0.0, 1.0, 1).is_err());
        assert!(sweep(&k, &rho, NoisePlacement::BeforeEach, -0.1, 1.0, 5).is_err());
        assert!(sweep(&k, &rho, NoisePlacement::BeforeEach, 0.0, 1.1, 5).is_err());
    }

    #[test]
    fn kcbs_threshold() {
        let k = kcbs::scenario();
        let got = find_threshold(&k, &kcbs::optimal_state(), NoisePlacement::BeforeFirstOnly, 1e-8)
            .unwrap()
            .crossing()
            .unwrap();
        assert!((got - kcbs::max_p_crit()).abs() < 1e-8);
        assert!((got - 0.5854101966).abs() < 1e-8);
        assert_eq!(
            find_threshold(&k, &maximally_mixed(3), NoisePlacement::BeforeFirstOnly, 1e-8).unwrap(),
            ThresholdOutcome::NeverViolates
        );
    }

    #[test]
    fn pm_threshold_state_independent() {
        let pm = peres_mermin::scenario();
        let mut rng = ChaCha8Rng::seed_from_u64(51);
        for _ in 0..5 {
            let rho = random_state(4, &mut rng);
            let got = find_threshold(&pm, &rho, NoisePlacement::BeforeEach, 1e-8)
                .unwrap()
                .crossing()
                .unwrap();
            assert!((got - (2.0f64 / 3.0).sqrt()).abs() < 1e-8);
        }
        // noise only before the test never removes the violation
        assert_eq!(
            find_threshold(&pm, &maximally_mixed(4), NoisePlacement::BeforeFirstOnly, 1e-8).unwrap(),
            ThresholdOutcome::AlwaysViolates
        );
    }

    #[test]
    fn single_crossing_on_custom_scenario() {
        // <Z> on |0> after depolarizing before the test is p
        let z = Observable::new("Z", sigma_z()).unwrap();
        let s = Scenario::new(
            "linear",
            2,
            vec![z],
            vec![vec![0]],
            Inequality {
                gamma: vec![1.0],
                bound: 0.3,
                direction: Direction::AtMost,
            },
        )
        .unwrap();
        let rho = basis_state(2, 0).unwrap();
        let got = find_threshold(&s, &rho, NoisePlacement::BeforeFirstOnly, 1e-9).unwrap();
        assert!((got.crossing().unwrap() - 0.3).abs() < 1e-8);
        assert!(find_threshold(&s, &rho, NoisePlacement::BeforeFirstOnly, 0.0).is_err());
    }

    #[test]
    fn non_monotone_configuration_is_an_error() {
        // A PM row under noise before each measurement gives p^2, the single
        // context {XX} on a +1 eigenstate gives p, so the value p^2 - p dips
        // below -0.2 only on an interior window of p.
        let pm = peres_mermin::observables();
        let s = Scenario::new(
            "window",
            4,
            pm,
            vec![vec![0, 1, 2], vec![2]],
            Inequality {
                gamma: vec![1.0, -1.0],
                bound: -0.2,
                direction: Direction::AtLeast,
            },
        )
        .unwrap();
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let bell = crate::states::pure_state(&[
            crate::linalg::c64(r, 0.0),
            crate::linalg::ZERO,
            crate::linalg::ZERO,
            crate::linalg::c64(r, 0.0),
        ])
        .unwrap();
        let err = find_threshold(&s, &bell, NoisePlacement::BeforeEach, 1e-8).unwrap_err();
        assert!(matches!(err, Error::NonMonotone(_)), "{err}");
    }

    #[test]
    fn experiment_consistency_values() {
        assert!((experiment_consistency(0.98).unwrap() - 5.7624).abs() < 1e-12);
        assert_eq!(experiment_consistency(1.0).unwrap(), 6.0);
        assert!((experiment_consistency((2.0f64 / 3.0).sqrt()).unwrap() - 4.0).abs() < 1e-12);
        assert!(experiment_consistency(1.5).is_err());
    }

    #[test]
    fn time_sweep_reparametrizes() {
        let pm = peres_mermin::scenario();
        let rho = maximally_mixed(4);
        let gamma = 0.2;
        let times = [0.0, 0.1, 0.5, 1.0, 2.0];
        let pts = sweep_time(&pm, &rho, NoisePlacement::BeforeEach, gamma, &times).unwrap();
        for pt in pts {
            let direct = value_at(&pm, &rho, NoisePlacement::BeforeEach, pt.p, Picture::Both).unwrap().0;
            assert!((pt.value - direct).abs() < 1e-12);
            assert!((pt.p - (-4.0 * gamma * pt.t).exp()).abs() < 1e-15);
        }
    }
}
