//! Depolarizing noise and Kochen-Specker contextuality.
//!
//! The crate evaluates noncontextuality inequalities on sequential
//! (Lüders) implementations of their contexts, with a depolarizing channel
//! acting either once before the test or before every measurement. The
//! correlators are computed in both the Schrödinger and the Heisenberg
//! picture. Two scenarios are built in:
//!
//! - [`scenarios::kcbs`]: the state-dependent KCBS pentagram on a qutrit,
//!   bound `-3`, maximal quantum value `5 - 4 sqrt(5)`.
//! - [`scenarios::peres_mermin`]: the state-independent Peres-Mermin square
//!   on two qubits, bound `4`, quantum value `6` for every state.
//!
//! The classical side ([`ncmodel`]) enumerates deterministic assignments for
//! exact bounds and tests membership of correlator vectors in the
//! noncontextual polytope with a phase-I simplex. [`noisescan`] sweeps the
//! depolarizing parameter and bisects for the point where violations stop.
//!
//! ```
//! use decohere::prelude::*;
//!
//! let pm = peres_mermin::scenario();
//! let noise = Channel::depolarizing(0.9, 4).unwrap();
//! let rho = maximally_mixed(4);
//! let report = evaluate_inequality(&pm, &rho, Some(&noise), NoisePlacement::BeforeEach, Picture::Both).unwrap();
//! assert!((report.value - 6.0 * 0.81).abs() < 1e-9);
//! assert!(report.violated);
//! ```

pub mod channels;
pub mod error;
pub mod linalg;
pub mod measure;
pub mod ncmodel;
pub mod noisescan;
pub mod pauli;
pub mod scenarios;
pub mod states;

pub use channels::Channel;
pub use error::{Error, Result};
pub use linalg::CMat;
pub use measure::{NoisePlacement, Observable};
pub use scenarios::{EvalReport, Picture, Scenario};

pub mod prelude {
    pub use crate::channels::{
        lindblad_p, qubit_depolarizing_kraus, two_qubit_pauli_twirl_kraus, Channel,
    };
    pub use crate::error::{Error, Result};
    pub use crate::linalg::{c64, CMat};
    pub use crate::measure::{
        luders_branch, luders_score, product_correlator, sequential_correlator,
        sequential_correlator_heisenberg, NoisePlacement, Observable,
    };
    pub use crate::ncmodel::{classical_bound, noncontextual_feasible, Behavior};
    pub use crate::noisescan::{experiment_consistency, find_threshold, sweep, ThresholdOutcome};
    pub use crate::scenarios::{
        evaluate_inequality, kcbs, kcbs_noisy_value, kcbs_p_crit, peres_mermin, validate_scenario,
        EvalReport, Picture, Scenario,
    };
    pub use crate::states::{maximally_mixed, random_state};
}
