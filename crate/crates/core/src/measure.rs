//! Dichotomic observables, Lüders instruments and sequential correlators.
//!
//! A sequential correlator measures the observables of a list one after the
//! other, each through its Lüders instrument, and records the product of the
//! `±1` outcomes. The outcome-weighted instrument is the score map
//! `S(X) = P+ X P+ - P- X P-`, so the correlator is the trace of the nested
//! score maps applied to the state. Noise may be inserted once before the
//! first measurement or before every measurement.
//!
//! The Heisenberg evaluation pulls the identity back through the dual maps
//! in reverse order and pairs the result with the state. Both evaluations
//! must agree; the tests treat either as the oracle for the other.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::channels::Channel;
use crate::error::{Error, Result};
use crate::linalg::{CMat, HERMITIAN_TOL};
use crate::states::{require_dimension, validate_state};

/// Tolerance on `||[A, B]||_F` for compatibility.
pub const COMMUTE_TOL: f64 = 1e-9;
/// Largest tolerated imaginary part of a correlator trace.
pub const IMAG_TOL: f64 = 1e-10;
/// Below this probability a Lüders post-measurement state is undefined.
pub const BRANCH_PROB_EPS: f64 = 1e-12;

/// Hermitian involution `A^2 = 1` with outcomes `±1`.
#[derive(Debug, Clone, PartialEq)]
pub struct Observable {
    label: String,
    matrix: CMat,
    plus: CMat,
    minus: CMat,
}

impl Observable {
    pub fn new(label: impl Into<String>, matrix: CMat) -> Result<Self> {
        let label = label.into();
        let invalid = |reason: String| Error::InvalidObservable {
            label: label.clone(),
            reason,
        };
        if !matrix.is_square() {
            return Err(invalid(format!(
                "matrix must be square, got {}x{}",
                matrix.rows(),
                matrix.cols()
            )));
        }
        let herm = matrix.hermiticity_residual()?;
        if herm > HERMITIAN_TOL {
            return Err(invalid(format!("not Hermitian (residual {herm:e})")));
        }
        let d = matrix.rows();
        let id = CMat::identity(d);
        let inv = (&matrix * &matrix).frob_dist(&id)?;
        if inv > HERMITIAN_TOL {
            return Err(invalid(format!("A^2 != 1 (residual {inv:e})")));
        }
        let plus = (&id + &matrix).scale_real(0.5);
        let minus = (&id - &matrix).scale_real(0.5);
        Ok(Self {
            label,
            matrix,
            plus,
            minus,
        })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn matrix(&self) -> &CMat {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    /// `P+ = (1 + A)/2`.
    pub fn plus_projector(&self) -> &CMat {
        &self.plus
    }

    /// `P- = (1 - A)/2`.
    pub fn minus_projector(&self) -> &CMat {
        &self.minus
    }

    /// `||[A, B]||_F`.
    pub fn commutator_norm(&self, other: &Observable) -> Result<f64> {
        Ok(self.matrix.commutator(&other.matrix)?.frob_norm())
    }

    pub fn commutes_with(&self, other: &Observable) -> bool {
        self.commutator_norm(other).is_ok_and(|r| r <= COMMUTE_TOL)
    }

    fn require_operand(&self, x: &CMat) -> Result<()> {
        let d = self.dim();
        if x.shape() != (d, d) {
            return Err(Error::DimensionMismatch {
                expected: format!("{d}x{d} operand for `{}`", self.label),
                found: format!("{}x{}", x.rows(), x.cols()),
            });
        }
        Ok(())
    }
}

impl fmt::Display for Observable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label)
    }
}

/// Where the noise channel acts relative to the measurement sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NoisePlacement {
    None,
    BeforeFirstOnly,
    BeforeEach,
}

impl NoisePlacement {
    pub const ALL: [NoisePlacement; 3] = [
        NoisePlacement::None,
        NoisePlacement::BeforeFirstOnly,
        NoisePlacement::BeforeEach,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            NoisePlacement::None => "none",
            NoisePlacement::BeforeFirstOnly => "before-first",
            NoisePlacement::BeforeEach => "before-each",
        }
    }
}

impl fmt::Display for NoisePlacement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for NoisePlacement {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "none" => Ok(NoisePlacement::None),
            "before-first" | "before-first-only" => Ok(NoisePlacement::BeforeFirstOnly),
            "before-each" => Ok(NoisePlacement::BeforeEach),
            other => Err(Error::Parse(format!(
                "unknown placement `{other}` (expected none, before-first, before-each)"
            ))),
        }
    }
}

/// Lüders score map `P+ X P+ - P- X P-`.
pub fn luders_score(obs: &Observable, x: &CMat) -> Result<CMat> {
    obs.require_operand(x)?;
    let plus = &(&obs.plus * x) * &obs.plus;
    let minus = &(&obs.minus * x) * &obs.minus;
    Ok(&plus - &minus)
}

/// Dual score map. For projectors it has the same form as the forward map.
pub fn luders_score_dual(obs: &Observable, x: &CMat) -> Result<CMat> {
    obs.require_operand(x)?;
    let plus = &(&obs.plus.dagger() * x) * &obs.plus;
    let minus = &(&obs.minus.dagger() * x) * &obs.minus;
    Ok(&plus - &minus)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Branch {
    pub prob: f64,
    /// `None` when `prob <= BRANCH_PROB_EPS`.
    pub state: Option<CMat>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LudersBranches {
    pub plus: Branch,
    pub minus: Branch,
}

/// Outcome probabilities and normalized Lüders post-measurement states.
pub fn luders_branch(obs: &Observable, rho: &CMat) -> Result<LudersBranches> {
    obs.require_operand(rho)?;
    validate_state(rho)?;
    let branch = |proj: &CMat| -> Result<Branch> {
        let unnorm = &(proj * rho) * proj;
        let prob = unnorm.trace()?.re.max(0.0);
        let state = (prob > BRANCH_PROB_EPS).then(|| unnorm.scale_real(1.0 / prob));
        Ok(Branch { prob, state })
    };
    Ok(LudersBranches {
        plus: branch(&obs.plus)?,
        minus: branch(&obs.minus)?,
    })
}

fn check_sequence(
    rho: &CMat,
    observables: &[&Observable],
    noise: Option<&Channel>,
    placement: NoisePlacement,
) -> Result<Option<Channel>> {
    let d = rho.rows();
    require_dimension(rho, d)?;
    validate_state(rho)?;
    for obs in observables {
        if obs.dim() != d {
            return Err(Error::DimensionMismatch {
                expected: format!("observable of dimension {d}"),
                found: format!("`{}` of dimension {}", obs.label, obs.dim()),
            });
        }
    }
    match (placement, noise) {
        (NoisePlacement::None, _) => Ok(None),
        (_, None) => Err(Error::MissingNoise(placement.to_string())),
        (_, Some(ch)) if ch.dim() != d => Err(Error::DimensionMismatch {
            expected: format!("channel of dimension {d}"),
            found: format!("channel of dimension {}", ch.dim()),
        }),
        (_, Some(ch)) => Ok(Some(ch.clone())),
    }
}

fn real_trace(value: num_complex::Complex64) -> Result<f64> {
    if value.im.abs() >= IMAG_TOL {
        return Err(Error::ImaginaryResidue(value.im));
    }
    Ok(value.re)
}

/// Schrödinger-picture sequential correlator. Score maps nest in list order;
/// `BeforeEach` inserts the channel before every measurement (the first
/// included), `BeforeFirstOnly` once at the start.
pub fn sequential_correlator(
    rho: &CMat,
    observables: &[&Observable],
    noise: Option<&Channel>,
    placement: NoisePlacement,
) -> Result<f64> {
    let noise = check_sequence(rho, observables, noise, placement)?;
    let mut x = rho.clone();
    for (k, obs) in observables.iter().enumerate() {
        if let Some(ch) = &noise {
            if placement == NoisePlacement::BeforeEach || k == 0 {
                x = ch.map(&x)?;
            }
        }
        x = luders_score(obs, &x)?;
    }
    if observables.is_empty() {
        if let Some(ch) = &noise {
            x = ch.map(&x)?;
        }
    }
    real_trace(x.trace()?)
}

/// Heisenberg-picture sequential correlator: the identity is pulled back
/// through dual score maps and dual noise in reverse order, then paired
/// with the state.
pub fn sequential_correlator_heisenberg(
    rho: &CMat,
    observables: &[&Observable],
    noise: Option<&Channel>,
    placement: NoisePlacement,
) -> Result<f64> {
    let noise = check_sequence(rho, observables, noise, placement)?;
    let effect = pulled_back_effect(rho.rows(), observables, noise.as_ref(), placement)?;
    real_trace(rho.trace_product(&effect)?)
}

/// Operator `E` with `correlator = tr(rho E)` for every state: the identity
/// pulled back through the dual instrument sequence.
pub fn pulled_back_effect(
    dim: usize,
    observables: &[&Observable],
    noise: Option<&Channel>,
    placement: NoisePlacement,
) -> Result<CMat> {
    let noise = match placement {
        NoisePlacement::None => None,
        _ => Some(noise.ok_or_else(|| Error::MissingNoise(placement.to_string()))?),
    };
    if let Some(ch) = noise {
        if ch.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: format!("channel of dimension {dim}"),
                found: format!("channel of dimension {}", ch.dim()),
            });
        }
    }
    let mut x = CMat::identity(dim);
    for (k, obs) in observables.iter().enumerate().rev() {
        x = luders_score_dual(obs, &x)?;
        if let Some(ch) = noise {
            if placement == NoisePlacement::BeforeEach || k == 0 {
                x = ch.map_dual(&x)?;
            }
        }
    }
    if observables.is_empty() {
        if let Some(ch) = noise {
            x = ch.map_dual(&x)?;
        }
    }
    Ok(x)
}

/// `Re tr(rho A_1 A_2 ... A_n)` for pairwise commuting observables.
pub fn product_correlator(rho: &CMat, observables: &[&Observable]) -> Result<f64> {
    let d = rho.rows();
    require_dimension(rho, d)?;
    for (i, a) in observables.iter().enumerate() {
        if a.dim() != d {
            return Err(Error::DimensionMismatch {
                expected: format!("observable of dimension {d}"),
                found: format!("`{}` of dimension {}", a.label, a.dim()),
            });
        }
        for b in &observables[i + 1..] {
            let residual = a.commutator_norm(b)?;
            if residual > COMMUTE_TOL {
                return Err(Error::NonCommuting {
                    first: a.label.clone(),
                    second: b.label.clone(),
                    residual,
                });
            }
        }
    }
    let product = observables
        .iter()
        .fold(CMat::identity(d), |acc, obs| &acc * &obs.matrix);
    real_trace(rho.trace_product(&product)?)
}
