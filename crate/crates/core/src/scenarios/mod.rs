//! Contextuality scenarios: measurements, contexts, and one noncontextuality
//! inequality `sum_k gamma_k <C_k> (<= or >=) bound`, plus evaluation of the
//! inequality on a (possibly noisy) sequential implementation.

pub mod file;
pub mod kcbs;
pub mod peres_mermin;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::channels::Channel;
use crate::error::{Error, Result};
use crate::linalg::CMat;
use crate::measure::{
    sequential_correlator, sequential_correlator_heisenberg, NoisePlacement, Observable,
    COMMUTE_TOL,
};
use crate::states::require_dimension;

pub use kcbs::{kcbs_noisy_value, kcbs_p_crit};

/// Margin beyond the bound required to call a value a violation.
pub const VIOLATION_TOL: f64 = 1e-10;
/// Largest tolerated Schrödinger/Heisenberg disagreement per correlator.
pub const PICTURE_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Direction {
    #[serde(rename = "<=", alias = "le")]
    AtMost,
    #[serde(rename = ">=", alias = "ge")]
    AtLeast,
}

impl Direction {
    pub fn symbol(self) -> &'static str {
        match self {
            Direction::AtMost => "<=",
            Direction::AtLeast => ">=",
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Inequality {
    pub gamma: Vec<f64>,
    pub bound: f64,
    pub direction: Direction,
}

impl Inequality {
    pub fn value(&self, correlators: &[f64]) -> f64 {
        self.gamma.iter().zip(correlators).map(|(g, c)| g * c).sum()
    }

    /// How far `value` lies on the violating side of the bound (negative
    /// when the inequality holds).
    pub fn excess(&self, value: f64) -> f64 {
        match self.direction {
            Direction::AtMost => value - self.bound,
            Direction::AtLeast => self.bound - value,
        }
    }

    /// Strict violation by more than [`VIOLATION_TOL`].
    pub fn is_violated(&self, value: f64) -> bool {
        self.excess(value) > VIOLATION_TOL
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    name: String,
    dimension: usize,
    measurements: Vec<Observable>,
    contexts: Vec<Vec<usize>>,
    inequality: Inequality,
}

impl Scenario {
    /// Checks shapes only (dimensions, index ranges, coefficient count).
    /// Compatibility and coverage are reported by [`validate_scenario`].
    pub fn new(
        name: impl Into<String>,
        dimension: usize,
        measurements: Vec<Observable>,
        contexts: Vec<Vec<usize>>,
        inequality: Inequality,
    ) -> Result<Self> {
        let name = name.into();
        if dimension == 0 {
            return Err(Error::InvalidScenario("dimension must be positive".into()));
        }
        if let Some(obs) = measurements.iter().find(|o| o.dim() != dimension) {
            return Err(Error::InvalidScenario(format!(
                "measurement `{}` has dimension {}, expected {dimension}",
                obs.label(),
                obs.dim()
            )));
        }
        for (k, ctx) in contexts.iter().enumerate() {
            if ctx.is_empty() {
                return Err(Error::InvalidScenario(format!("context {k} is empty")));
            }
            if let Some(&i) = ctx.iter().find(|&&i| i >= measurements.len()) {
                return Err(Error::InvalidScenario(format!(
                    "context {k} refers to measurement {i}, but only {} exist",
                    measurements.len()
                )));
            }
        }
        if inequality.gamma.len() != contexts.len() {
            return Err(Error::InvalidScenario(format!(
                "inequality has {} coefficients for {} contexts",
                inequality.gamma.len(),
                contexts.len()
            )));
        }
        if !inequality.bound.is_finite() || inequality.gamma.iter().any(|g| !g.is_finite()) {
            return Err(Error::InvalidScenario(
                "inequality coefficients and bound must be finite".into(),
            ));
        }
        Ok(Self {
            name,
            dimension,
            measurements,
            contexts,
            inequality,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn measurements(&self) -> &[Observable] {
        &self.measurements
    }

    pub fn contexts(&self) -> &[Vec<usize>] {
        &self.contexts
    }

    pub fn inequality(&self) -> &Inequality {
        &self.inequality
    }

    /// Observables of context `k` in their listed (measurement) order.
    pub fn context_observables(&self, k: usize) -> Vec<&Observable> {
        self.contexts[k].iter().map(|&i| &self.measurements[i]).collect()
    }

    pub fn context_label(&self, k: usize) -> String {
        self.context_observables(k)
            .iter()
            .map(|o| o.label())
            .collect::<Vec<_>>()
            .join(" ")
    }

    /// Copy with measurement `index` replaced; used to probe validation.
    pub fn with_measurement(&self, index: usize, obs: Observable) -> Result<Self> {
        let mut measurements = self.measurements.clone();
        let slot = measurements.get_mut(index).ok_or_else(|| {
            Error::InvalidScenario(format!("no measurement with index {index}"))
        })?;
        *slot = obs;
        Scenario::new(
            self.name.clone(),
            self.dimension,
            measurements,
            self.contexts.clone(),
            self.inequality.clone(),
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiagnosticCheck {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Diagnostics {
    pub checks: Vec<DiagnosticCheck>,
}

impl Diagnostics {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn first_failure(&self) -> Option<&DiagnosticCheck> {
        self.checks.iter().find(|c| !c.passed)
    }
}

/// Checks the semantic invariants of a scenario: every context consists of
/// distinct, pairwise commuting observables, every measurement is used, and
/// every observable is a Hermitian involution of the right dimension.
pub fn validate_scenario(s: &Scenario) -> Diagnostics {
    let mut checks = Vec::new();
    let mut push = |name: String, failure: Option<String>| {
        checks.push(DiagnosticCheck {
            name,
            passed: failure.is_none(),
            detail: failure.unwrap_or_else(|| "ok".into()),
        });
    };

    let bad_obs = s.measurements.iter().find_map(|o| {
        let m = o.matrix();
        let id = CMat::identity(s.dimension);
        if m.shape() != (s.dimension, s.dimension) {
            return Some(format!("`{}` has shape {}x{}", o.label(), m.rows(), m.cols()));
        }
        let herm = m.hermiticity_residual().unwrap_or(f64::INFINITY);
        let inv = (m * m).frob_dist(&id).unwrap_or(f64::INFINITY);
        (herm > COMMUTE_TOL || inv > COMMUTE_TOL)
            .then(|| format!("`{}` is not a Hermitian involution", o.label()))
    });
    push("observables".into(), bad_obs);

    for (k, ctx) in s.contexts.iter().enumerate() {
        let mut duplicate = None;
        let mut non_commuting = None;
        for (a_pos, &a) in ctx.iter().enumerate() {
            for &b in &ctx[a_pos + 1..] {
                let (oa, ob) = (&s.measurements[a], &s.measurements[b]);
                let same = a == b
                    || oa
                        .matrix()
                        .frob_dist(ob.matrix())
                        .is_ok_and(|r| r <= COMMUTE_TOL);
                if same && duplicate.is_none() {
                    duplicate = Some(format!(
                        "context {k}: `{}` and `{}` are duplicate observables",
                        oa.label(),
                        ob.label()
                    ));
                }
                let residual = oa.commutator_norm(ob).unwrap_or(f64::INFINITY);
                if residual > COMMUTE_TOL && non_commuting.is_none() {
                    non_commuting = Some(format!(
                        "context {k}: `{}` and `{}` do not commute (||[A,B]||_F = {residual:.3e})",
                        oa.label(),
                        ob.label()
                    ));
                }
            }
        }
        push(format!("context {k} distinct"), duplicate);
        push(format!("context {k} commuting"), non_commuting);
    }

    let unused: Vec<&str> = (0..s.measurements.len())
        .filter(|i| !s.contexts.iter().any(|c| c.contains(i)))
        .map(|i| s.measurements[i].label())
        .collect();
    push(
        "coverage".into(),
        (!unused.is_empty()).then(|| format!("measurements in no context: {}", unused.join(", "))),
    );

    Diagnostics { checks }
}

/// Which picture(s) compute the correlators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Picture {
    Schrodinger,
    Heisenberg,
    Both,
}

impl std::str::FromStr for Picture {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "schrodinger" => Ok(Picture::Schrodinger),
            "heisenberg" => Ok(Picture::Heisenberg),
            "both" => Ok(Picture::Both),
            other => Err(Error::Parse(format!(
                "unknown picture `{other}` (expected schrodinger, heisenberg, both)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PictureUsed {
    Schrodinger,
    Heisenberg,
    BothAgree,
}

impl fmt::Display for PictureUsed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PictureUsed::Schrodinger => "schrodinger",
            PictureUsed::Heisenberg => "heisenberg",
            PictureUsed::BothAgree => "both-agree",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub scenario: String,
    pub state: String,
    /// Depolarizing parameter, when the noise is a structured depolarizing channel.
    pub p: Option<f64>,
    pub placement: NoisePlacement,
    pub contexts: Vec<String>,
    pub correlators: Vec<f64>,
    pub gamma: Vec<f64>,
    pub value: f64,
    pub bound: f64,
    pub direction: Direction,
    pub violated: bool,
    pub picture: PictureUsed,
    /// Largest per-context picture disagreement (only for `both-agree`).
    pub picture_residual: Option<f64>,
}

/// Evaluates every context correlator sequentially and assembles the
/// inequality value. With [`Picture::Both`] the two pictures must agree
/// within [`PICTURE_TOL`] on every context; the Schrödinger value is kept.
pub fn evaluate_inequality(
    s: &Scenario,
    rho: &CMat,
    noise: Option<&Channel>,
    placement: NoisePlacement,
    picture: Picture,
) -> Result<EvalReport> {
    require_dimension(rho, s.dimension)?;
    let mut correlators = Vec::with_capacity(s.contexts.len());
    let mut max_residual: f64 = 0.0;
    for k in 0..s.contexts.len() {
        let obs = s.context_observables(k);
        let value = match picture {
            Picture::Schrodinger => sequential_correlator(rho, &obs, noise, placement)?,
            Picture::Heisenberg => sequential_correlator_heisenberg(rho, &obs, noise, placement)?,
            Picture::Both => {
                let a = sequential_correlator(rho, &obs, noise, placement)?;
                let b = sequential_correlator_heisenberg(rho, &obs, noise, placement)?;
                let residual = (a - b).abs();
                if residual > PICTURE_TOL {
                    return Err(Error::PictureMismatch {
                        context: k,
                        residual,
                    });
                }
                max_residual = max_residual.max(residual);
                a
            }
        };
        correlators.push(value);
    }
    let value = s.inequality.value(&correlators);
    Ok(EvalReport {
        scenario: s.name.clone(),
        state: "custom".into(),
        p: match placement {
            NoisePlacement::None => None,
            _ => noise.and_then(Channel::depolarizing_p),
        },
        placement,
        contexts: (0..s.contexts.len()).map(|k| s.context_label(k)).collect(),
        correlators,
        gamma: s.inequality.gamma.clone(),
        value,
        bound: s.inequality.bound,
        direction: s.inequality.direction,
        violated: s.inequality.is_violated(value),
        picture: match picture {
            Picture::Schrodinger => PictureUsed::Schrodinger,
            Picture::Heisenberg => PictureUsed::Heisenberg,
            Picture::Both => PictureUsed::BothAgree,
        },
        picture_residual: (picture == Picture::Both).then_some(max_residual),
    })
}
