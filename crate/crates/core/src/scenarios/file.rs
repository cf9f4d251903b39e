//! JSON documents for scenarios and states.
//!
//! ```json
//! {
//!   "name": "toy",
//!   "dimension": 2,
//!   "measurements": [{"label": "Z", "matrix": [[[1,0],[0,0]],[[0,0],[-1,0]]]}],
//!   "contexts": [[0]],
//!   "inequality": {"gamma": [1], "bound": 1, "direction": "<="}
//! }
//! ```
//!
//! States are `{"dimension": d, "matrix": [[[re, im], ...], ...]}`. Matrix
//! entries are `[re, im]` pairs in row-major nesting.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{c64, CMat};
use crate::measure::Observable;
use crate::states::validate_state;

use super::{validate_scenario, Inequality, Scenario};

pub type MatrixDoc = Vec<Vec<[f64; 2]>>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ObservableDoc {
    pub label: String,
    pub matrix: MatrixDoc,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioDoc {
    pub name: String,
    pub dimension: usize,
    pub measurements: Vec<ObservableDoc>,
    pub contexts: Vec<Vec<usize>>,
    pub inequality: Inequality,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateDoc {
    pub dimension: usize,
    pub matrix: MatrixDoc,
}

fn matrix_from_doc(what: &str, doc: &MatrixDoc, dim: usize) -> Result<CMat> {
    if doc.len() != dim {
        return Err(Error::Parse(format!(
            "{what}: matrix has {} rows, expected {dim}",
            doc.len()
        )));
    }
    let mut data = Vec::with_capacity(dim * dim);
    for (i, row) in doc.iter().enumerate() {
        if row.len() != dim {
            return Err(Error::Parse(format!(
                "{what}: row {i} has {} entries, expected {dim}",
                row.len()
            )));
        }
        for (j, &[re, im]) in row.iter().enumerate() {
            if !re.is_finite() || !im.is_finite() {
                return Err(Error::Parse(format!("{what}: entry ({i}, {j}) is not finite")));
            }
            data.push(c64(re, im));
        }
    }
    CMat::new(dim, dim, data)
}

pub fn matrix_to_doc(m: &CMat) -> MatrixDoc {
    (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
        .collect()
}

impl ScenarioDoc {
    pub fn from_scenario(s: &Scenario) -> Self {
        Self {
            name: s.name().to_string(),
            dimension: s.dimension(),
            measurements: s
                .measurements()
                .iter()
                .map(|o| ObservableDoc {
                    label: o.label().to_string(),
                    matrix: matrix_to_doc(o.matrix()),
                })
                .collect(),
            contexts: s.contexts().to_vec(),
            inequality: s.inequality().clone(),
        }
    }

    /// Builds the scenario and rejects it unless every scenario invariant holds.
    pub fn into_scenario(self) -> Result<Scenario> {
        let s = self.into_unvalidated()?;
        let diag = validate_scenario(&s);
        if let Some(fail) = diag.first_failure() {
            return Err(Error::InvalidScenario(format!("{}: {}", fail.name, fail.detail)));
        }
        Ok(s)
    }

    /// Checks matrix shapes, observables and index ranges only; commutation
    /// and coverage are left to [`validate_scenario`].
    pub fn into_unvalidated(self) -> Result<Scenario> {
        if self.dimension == 0 {
            return Err(Error::Parse("dimension must be positive".into()));
        }
        let mut measurements = Vec::with_capacity(self.measurements.len());
        for m in &self.measurements {
            let what = format!("measurement `{}`", m.label);
            let matrix = matrix_from_doc(&what, &m.matrix, self.dimension)?;
            measurements.push(Observable::new(m.label.clone(), matrix)?);
        }
        Scenario::new(
            self.name,
            self.dimension,
            measurements,
            self.contexts,
            self.inequality,
        )
    }
}

pub fn parse_scenario(json: &str) -> Result<Scenario> {
    parse_scenario_doc(json)?.into_scenario()
}

pub fn parse_scenario_doc(json: &str) -> Result<ScenarioDoc> {
    serde_json::from_str(json).map_err(|e| Error::Parse(e.to_string()))
}

pub fn scenario_to_json(s: &Scenario) -> String {
    serde_json::to_string_pretty(&ScenarioDoc::from_scenario(s)).expect("serializable")
}

/// Parses and validates a density matrix.
pub fn parse_state(json: &str) -> Result<CMat> {
    let doc: StateDoc = serde_json::from_str(json).map_err(|e| Error::Parse(e.to_string()))?;
    if doc.dimension == 0 {
        return Err(Error::Parse("dimension must be positive".into()));
    }
    let rho = matrix_from_doc("state", &doc.matrix, doc.dimension)?;
    validate_state(&rho)?;
    Ok(rho)
}

pub fn state_to_json(rho: &CMat) -> String {
    let doc = StateDoc {
        dimension: rho.rows(),
        matrix: matrix_to_doc(rho),
    };
    serde_json::to_string_pretty(&doc).expect("serializable")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenarios::{kcbs, peres_mermin, Direction};
    use crate::states::maximally_mixed;

    const TOY: &str = r#"{
        "name": "toy",
        "dimension": 2,
        "measurements": [{"label": "Z", "matrix": [[[1,0],[0,0]],[[0,0],[-1,0]]]}],
        "contexts": [[0]],
        "inequality": {"gamma": [1], "bound": 1, "direction": "<="}
    }"#;

    #[test]
    fn parses_toy() {
        let s = parse_scenario(TOY).unwrap();
        assert_eq!(s.name(), "toy");
        assert_eq!(s.inequality().direction, Direction::AtMost);
        assert_eq!(s.measurements()[0].label(), "Z");
    }

    #[test]
    fn builtins_round_trip() {
        for s in [kcbs::scenario(), peres_mermin::scenario()] {
            let back = parse_scenario(&scenario_to_json(&s)).unwrap();
            assert_eq!(back, s);
        }
        let rho = maximally_mixed(3);
        assert_eq!(parse_state(&state_to_json(&rho)).unwrap(), rho);
    }

    #[test]
    fn rejects_with_precise_messages() {
        let bad_rows = TOY.replace(r#"[[[1,0],[0,0]],[[0,0],[-1,0]]]"#, r#"[[[1,0],[0,0]]]"#);
        let err = parse_scenario(&bad_rows).unwrap_err().to_string();
        assert!(err.contains("measurement `Z`: matrix has 1 rows, expected 2"), "{err}");

        let not_involution = TOY.replace("[-1,0]", "[-2,0]");
        let err = parse_scenario(&not_involution).unwrap_err().to_string();
        assert!(err.contains("invalid observable `Z`"), "{err}");

        let bad_index = TOY.replace("[[0]]", "[[0, 3]]");
        let err = parse_scenario(&bad_index).unwrap_err().to_string();
        assert!(err.contains("context 0 refers to measurement 3"), "{err}");

        let bad_gamma = TOY.replace(r#""gamma": [1]"#, r#""gamma": [1, 2]"#);
        assert!(parse_scenario(&bad_gamma).unwrap_err().to_string().contains("coefficients"));

        let bad_dir = TOY.replace(r#""<=""#, r#""!=""#);
        assert!(matches!(parse_scenario(&bad_dir), Err(Error::Parse(_))));

        // a non-commuting context is rejected by validation
        let x = r#"{"label": "X", "matrix": [[[0,0],[1,0]],[[1,0],[0,0]]]}"#;
        let two = TOY
            .replace(r#"}],"#, &format!("}}, {x}],"))
            .replace("[[0]]", "[[0, 1]]");
        let err = parse_scenario(&two).unwrap_err().to_string();
        assert!(err.contains("context 0 commuting") && err.contains("do not commute"), "{err}");
    }

    #[test]
    fn rejects_invalid_states() {
        let not_unit = r#"{"dimension": 2, "matrix": [[[1,0],[0,0]],[[0,0],[1,0]]]}"#;
        assert!(matches!(parse_state(not_unit), Err(Error::InvalidState(_))));
        let negative = r#"{"dimension": 2, "matrix": [[[1.5,0],[0,0]],[[0,0],[-0.5,0]]]}"#;
        assert!(matches!(parse_state(negative), Err(Error::InvalidState(_))));
        let ragged = r#"{"dimension": 2, "matrix": [[[1,0]],[[0,0],[0,0]]]}"#;
        assert!(parse_state(ragged).unwrap_err().to_string().contains("row 0 has 1 entries"));
        let ok = r#"{"dimension": 2, "matrix": [[[0.5,0],[0,-0.5]],[[0,0.5],[0.5,0]]]}"#;
        parse_state(ok).unwrap();
    }
}
