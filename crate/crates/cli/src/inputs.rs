//! Scenario ids and state specs given on the command line.

use std::fs;
use std::path::Path;

use decohere::scenarios::file::{parse_scenario_doc, parse_state};
use decohere::scenarios::{kcbs, peres_mermin, validate_scenario, Diagnostics};
use decohere::states::{basis_state, maximally_mixed};
use decohere::{CMat, Scenario};

use crate::Failure;

fn read_file(path: &str, what: &str) -> Result<String, Failure> {
    if !Path::new(path).exists() {
        return Err(Failure::new(format!("{what} file not found: {path}")));
    }
    fs::read_to_string(path).map_err(|e| Failure::new(format!("cannot read {what} file {path}: {e}")))
}

/// Loads a built-in or file scenario together with its diagnostics. The
/// scenario may fail validation; callers decide whether that is fatal.
pub fn load_scenario_unchecked(id: &str) -> Result<(Scenario, Diagnostics), Failure> {
    let s = match id {
        kcbs::NAME => kcbs::scenario(),
        peres_mermin::NAME => peres_mermin::scenario(),
        path => {
            let text = read_file(path, "scenario").map_err(|f| {
                Failure::new(format!("{} (built-in scenarios: kcbs, pm)", f.message))
            })?;
            parse_scenario_doc(&text)
                .and_then(|doc| doc.into_unvalidated())
                .map_err(|e| Failure::new(format!("invalid scenario {path}: {e}")))?
        }
    };
    let diag = validate_scenario(&s);
    Ok((s, diag))
}

pub fn load_scenario(id: &str) -> Result<Scenario, Failure> {
    let (s, diag) = load_scenario_unchecked(id)?;
    if let Some(fail) = diag.first_failure() {
        return Err(Failure::new(format!(
            "invalid scenario {id}: {}: {}",
            fail.name, fail.detail
        )));
    }
    Ok(s)
}

/// Resolves `maxmix`, `kcbs-optimal`, `basis:k` or `file:path` for a
/// scenario of dimension `dim`.
pub fn load_state(spec: &str, dim: usize) -> Result<CMat, Failure> {
    let rho = match spec {
        "maxmix" => maximally_mixed(dim),
        "kcbs-optimal" => kcbs::optimal_state(),
        _ => {
            if let Some(k) = spec.strip_prefix("basis:") {
                let k: usize = k
                    .parse()
                    .map_err(|_| Failure::new(format!("invalid basis index in state `{spec}`")))?;
                basis_state(dim, k).map_err(|e| Failure::new(format!("state `{spec}`: {e}")))?
            } else if let Some(path) = spec.strip_prefix("file:") {
                let text = read_file(path, "state")?;
                parse_state(&text).map_err(|e| Failure::new(format!("invalid state {path}: {e}")))?
            } else {
                return Err(Failure::new(format!(
                    "unknown state `{spec}` (expected maxmix, kcbs-optimal, basis:k or file:path)"
                )));
            }
        }
    };
    if rho.rows() != dim {
        return Err(Failure::new(format!(
            "state `{spec}` has dimension {}, scenario needs {dim}",
            rho.rows()
        )));
    }
    Ok(rho)
}
