//! Noncontextual models of a scenario.
//!
//! A noncontextual model assigns every measurement a fixed `±1` value (or a
//! probability mixture of such assignments). Classical bounds come from
//! enumerating all assignments; membership of a behavior in the convex hull
//! of the assignment correlator vectors is decided by a phase-I simplex.

pub mod simplex;

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::scenarios::Scenario;

/// Enumeration limit for [`classical_bound`].
pub const BOUND_MAX_MEASUREMENTS: usize = 24;
/// Enumeration limit for [`noncontextual_feasible`].
pub const LP_MAX_MEASUREMENTS: usize = 12;
pub const DEFAULT_FEASIBILITY_TOL: f64 = 1e-8;
const BEHAVIOR_SLACK: f64 = 1e-12;

/// One `±1` value per measurement.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct DeterministicAssignment {
    values: Vec<i8>,
}

impl DeterministicAssignment {
    /// Assignment number `index` in binary counting order: bit `j` of
    /// `index` set means measurement `j` takes `+1`, clear means `-1`.
    pub fn from_index(index: u64, n: usize) -> Self {
        let values = (0..n)
            .map(|j| if index >> j & 1 == 1 { 1 } else { -1 })
            .collect();
        Self { values }
    }

    pub fn new(values: Vec<i8>) -> Result<Self> {
        if values.iter().any(|&v| v != 1 && v != -1) {
            return Err(Error::InvalidBehavior("assignment values must be +1 or -1".into()));
        }
        Ok(Self { values })
    }

    pub fn values(&self) -> &[i8] {
        &self.values
    }

    pub fn index(&self) -> u64 {
        self.values
            .iter()
            .enumerate()
            .filter(|(_, &v)| v == 1)
            .map(|(j, _)| 1u64 << j)
            .sum()
    }

    /// Product of the assigned values over each context.
    pub fn correlators(&self, s: &Scenario) -> Vec<f64> {
        s.contexts()
            .iter()
            .map(|ctx| ctx.iter().map(|&i| self.values[i] as f64).product())
            .collect()
    }
}

impl fmt::Display for DeterministicAssignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for v in &self.values {
            f.write_str(if *v == 1 { "+" } else { "-" })?;
        }
        Ok(())
    }
}

/// Full-context correlators, one per context.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Behavior {
    correlators: Vec<f64>,
}

impl Behavior {
    pub fn new(correlators: Vec<f64>) -> Result<Self> {
        if let Some(c) = correlators
            .iter()
            .find(|c| !c.is_finite() || c.abs() > 1.0 + BEHAVIOR_SLACK)
        {
            return Err(Error::InvalidBehavior(format!(
                "correlator {c} lies outside [-1, 1]"
            )));
        }
        Ok(Self { correlators })
    }

    pub fn for_scenario(s: &Scenario, correlators: Vec<f64>) -> Result<Self> {
        if correlators.len() != s.contexts().len() {
            return Err(Error::InvalidBehavior(format!(
                "{} correlators for {} contexts",
                correlators.len(),
                s.contexts().len()
            )));
        }
        Self::new(correlators)
    }

    pub fn correlators(&self) -> &[f64] {
        &self.correlators
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassicalBound {
    pub min: f64,
    pub max: f64,
    pub argmin: DeterministicAssignment,
    pub argmax: DeterministicAssignment,
    pub assignments: u64,
}

fn guard(s: &Scenario, limit: usize) -> Result<usize> {
    let n = s.measurements().len();
    if n > limit {
        return Err(Error::EnumerationLimit { count: n, limit });
    }
    Ok(n)
}

/// Extremes of the inequality expression over all `2^n` deterministic
/// assignments. Ties go to the first assignment in counting order.
pub fn classical_bound(s: &Scenario) -> Result<ClassicalBound> {
    let n = guard(s, BOUND_MAX_MEASUREMENTS)?;
    let gamma = &s.inequality().gamma;
    let masks: Vec<u64> = s
        .contexts()
        .iter()
        .map(|ctx| ctx.iter().fold(0u64, |m, &i| m ^ (1 << i)))
        .collect();
    let total = 1u64 << n;
    let (mut min, mut max) = (f64::INFINITY, f64::NEG_INFINITY);
    let (mut argmin, mut argmax) = (0u64, 0u64);
    for index in 0..total {
        // the context product is -1 exactly when an odd number of its
        // members are assigned -1 (clear bits)
        let value: f64 = masks
            .iter()
            .zip(gamma)
            .map(|(&mask, g)| {
                let minus_ones = (!index & mask).count_ones();
                if minus_ones % 2 == 0 {
                    *g
                } else {
                    -g
                }
            })
            .sum();
        if value < min {
            min = value;
            argmin = index;
        }
        if value > max {
            max = value;
            argmax = index;
        }
    }
    Ok(ClassicalBound {
        min,
        max,
        argmin: DeterministicAssignment::from_index(argmin, n),
        argmax: DeterministicAssignment::from_index(argmax, n),
        assignments: total,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Feasibility {
    pub feasible: bool,
    /// Mixture weights indexed by assignment number, when feasible.
    pub certificate: Option<Vec<f64>>,
    /// Phase-I objective at the optimum.
    pub infeasibility: f64,
}

impl Feasibility {
    /// Assignments carrying nonzero weight in the certificate.
    pub fn support(&self, n: usize) -> Vec<(DeterministicAssignment, f64)> {
        self.certificate
            .iter()
            .flat_map(|w| w.iter().enumerate())
            .filter(|(_, &w)| w > 0.0)
            .map(|(i, &w)| (DeterministicAssignment::from_index(i as u64, n), w))
            .collect()
    }
}

/// Decides whether `b` is a convex mixture of deterministic assignments
/// (a global joint distribution exists reproducing the correlators).
pub fn noncontextual_feasible(s: &Scenario, b: &Behavior, tol: f64) -> Result<Feasibility> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::OutOfRange {
            name: "tol",
            value: tol,
            range: "(0, inf)",
        });
    }
    let n = guard(s, LP_MAX_MEASUREMENTS)?;
    let k = s.contexts().len();
    if b.correlators.len() != k {
        return Err(Error::InvalidBehavior(format!(
            "{} correlators for {k} contexts",
            b.correlators.len()
        )));
    }
    let total = 1usize << n;
    let mut rows = vec![vec![0.0; total]; k + 1];
    for index in 0..total {
        let c = DeterministicAssignment::from_index(index as u64, n).correlators(s);
        for (r, v) in c.into_iter().enumerate() {
            rows[r][index] = v;
        }
        rows[k][index] = 1.0;
    }
    let mut rhs = b.correlators.clone();
    rhs.push(1.0);

    let sol = simplex::phase_one(&rows, &rhs);
    let weights: Vec<f64> = sol.x.iter().map(|&w| if w.abs() < 1e-15 { 0.0 } else { w }).collect();
    let residual = rows
        .iter()
        .zip(&rhs)
        .map(|(row, target)| {
            let got: f64 = row.iter().zip(&weights).map(|(a, w)| a * w).sum();
            (got - target).abs()
        })
        .fold(0.0, f64::max);
    let feasible = sol.infeasibility <= tol && residual <= tol;
    Ok(Feasibility {
        feasible,
        certificate: feasible.then_some(weights),
        infeasibility: sol.infeasibility,
    })
}
