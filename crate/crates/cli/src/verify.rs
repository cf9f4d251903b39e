//! Self-checks run by `decohere verify`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use decohere::channels::{
    matrix_basis, qubit_depolarizing_kraus, two_qubit_pauli_twirl_kraus, Channel,
};
use decohere::measure::{sequential_correlator, sequential_correlator_heisenberg};
use decohere::ncmodel::{classical_bound, noncontextual_feasible, Behavior, DEFAULT_FEASIBILITY_TOL};
use decohere::noisescan::{find_threshold, ThresholdOutcome, DEFAULT_TOL};
use decohere::scenarios::{evaluate_inequality, kcbs, peres_mermin, Picture, Scenario};
use decohere::states::{maximally_mixed, random_hermitian, random_state};
use decohere::linalg::ZERO;
use decohere::{CMat, NoisePlacement, Result};

use crate::format::{csv_table, human_num};
use crate::{to_json, Failure, Outcome, OutputFormat};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Relation {
    Below,
    Above,
    Exact,
}

impl Relation {
    fn symbol(self) -> &'static str {
        match self {
            Relation::Below => "<",
            Relation::Above => ">",
            Relation::Exact => "=",
        }
    }
}

#[derive(Debug, Serialize)]
struct Check {
    name: &'static str,
    measured: f64,
    relation: Relation,
    tol: f64,
    passed: bool,
    detail: String,
}

fn below(name: &'static str, measured: f64, tol: f64, detail: impl Into<String>) -> Check {
    Check {
        name,
        measured,
        relation: Relation::Below,
        tol,
        passed: measured < tol,
        detail: detail.into(),
    }
}

fn above(name: &'static str, measured: f64, tol: f64, detail: impl Into<String>) -> Check {
    Check {
        name,
        measured,
        relation: Relation::Above,
        tol,
        passed: measured > tol,
        detail: detail.into(),
    }
}

fn exact(name: &'static str, measured: f64, detail: impl Into<String>) -> Check {
    Check {
        name,
        measured,
        relation: Relation::Exact,
        tol: 0.0,
        passed: measured == 0.0,
        detail: detail.into(),
    }
}

fn context_product(s: &Scenario, k: usize) -> CMat {
    s.context_observables(k)
        .iter()
        .fold(CMat::identity(s.dimension()), |acc, o| &acc * o.matrix())
}

fn pm_products() -> (f64, f64) {
    let pm = peres_mermin::scenario();
    let id = CMat::identity(4);
    let minus = id.scale_real(-1.0);
    let rows = (0..3)
        .map(|k| context_product(&pm, k).frob_dist(&id).unwrap_or(f64::INFINITY))
        .fold(0.0, f64::max);
    let cols = (3..6)
        .map(|k| context_product(&pm, k).frob_dist(&minus).unwrap_or(f64::INFINITY))
        .fold(0.0, f64::max);
    (rows, cols)
}

fn kcbs_orthogonality() -> f64 {
    (0..5)
        .map(|i| {
            let (a, b) = (kcbs::vector(i), kcbs::vector(i + 1));
            a.iter().zip(&b).fold(ZERO, |acc, (x, y)| acc + x.conj() * y).norm()
        })
        .fold(0.0, f64::max)
}

fn kcbs_trace_identity() -> Result<f64> {
    let obs = kcbs::observables();
    let mut worst: f64 = 0.0;
    for i in 0..5 {
        let t = obs[i].matrix().trace_product(obs[(i + 1) % 5].matrix())?;
        worst = worst.max((t.re + 1.0).abs()).max(t.im.abs());
    }
    Ok(worst)
}

fn value(s: &Scenario, rho: &CMat, p: Option<f64>, placement: NoisePlacement) -> Result<f64> {
    let ch = p.map(|p| Channel::depolarizing(p, s.dimension())).transpose()?;
    Ok(evaluate_inequality(s, rho, ch.as_ref(), placement, Picture::Both)?.value)
}

fn duality(samples: usize, rng: &mut ChaCha8Rng) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for d in 2..=4 {
        for k in 0..samples {
            let p = (k as f64 + 0.5) / samples as f64;
            let structured = Channel::depolarizing(p, d)?;
            let kraus = Channel::kraus(structured.kraus_operators()?)?;
            let a = random_hermitian(d, rng);
            let rho = random_state(d, rng);
            for ch in [&structured, &kraus] {
                let lhs = a.trace_product(&ch.map(&rho)?)?;
                let rhs = ch.map_dual(&a)?.trace_product(&rho)?;
                worst = worst.max((lhs - rhs).norm());
            }
        }
    }
    Ok(worst)
}

fn kraus_equivalence() -> Result<f64> {
    let mut worst: f64 = 0.0;
    for p in [0.0, 0.25, 0.5, 0.75, 1.0] {
        for (kraus, d) in [(qubit_depolarizing_kraus(p)?, 2), (two_qubit_pauli_twirl_kraus(p)?, 4)] {
            let structured = Channel::depolarizing(p, d)?;
            for e in matrix_basis(d) {
                worst = worst.max(kraus.map(&e)?.max_abs_diff(&structured.map(&e)?)?);
                worst = worst.max(kraus.map_dual(&e)?.max_abs_diff(&structured.map_dual(&e)?)?);
            }
        }
    }
    Ok(worst)
}

fn picture_equivalence(rng: &mut ChaCha8Rng) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for s in [kcbs::scenario(), peres_mermin::scenario()] {
        for _ in 0..5 {
            let rho = random_state(s.dimension(), rng);
            for p in [0.0, 0.3, 0.6, 1.0] {
                let ch = Channel::depolarizing(p, s.dimension())?;
                for placement in NoisePlacement::ALL {
                    for k in 0..s.contexts().len() {
                        let obs = s.context_observables(k);
                        let a = sequential_correlator(&rho, &obs, Some(&ch), placement)?;
                        let b = sequential_correlator_heisenberg(&rho, &obs, Some(&ch), placement)?;
                        worst = worst.max((a - b).abs());
                    }
                }
            }
        }
    }
    Ok(worst)
}

fn threshold_error(s: &Scenario, rho: &CMat, placement: NoisePlacement, expected: f64) -> Result<f64> {
    Ok(match find_threshold(s, rho, placement, DEFAULT_TOL)? {
        ThresholdOutcome::Crossing(p) => (p - expected).abs(),
        _ => f64::INFINITY,
    })
}

fn checks(seed: u64, samples: usize) -> Result<Vec<Check>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ks = kcbs::scenario();
    let pm = peres_mermin::scenario();
    let mut out = Vec::new();

    let (rows, cols) = pm_products();
    out.push(below("pm-row-product", rows, 1e-12, "max ||A_r1 A_r2 A_r3 - 1||_F over rows"));
    out.push(below("pm-column-product", cols, 1e-12, "max ||A_1c A_2c A_3c + 1||_F over columns"));
    out.push(below("kcbs-orthogonality", kcbs_orthogonality(), 1e-12, "max |<v_i|v_i+1>|"));
    out.push(below("kcbs-trace-identity", kcbs_trace_identity()?, 1e-10, "max |tr(A_i A_i+1) + 1|"));

    let optimal = value(&ks, &kcbs::optimal_state(), None, NoisePlacement::None)?;
    out.push(below(
        "kcbs-optimal-value",
        (optimal - kcbs::max_violation()).abs(),
        1e-10,
        format!("value {}", human_num(optimal)),
    ));
    let mixed = value(&ks, &maximally_mixed(3), None, NoisePlacement::None)?;
    out.push(below(
        "kcbs-mixed-value",
        (mixed - kcbs::MIXED_VALUE).abs(),
        1e-12,
        format!("value {}", human_num(mixed)),
    ));

    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let rho = random_state(4, &mut rng);
        worst = worst.max((value(&pm, &rho, None, NoisePlacement::None)? - 6.0).abs());
    }
    out.push(below("pm-state-independence", worst, 1e-10, "20 random states"));

    let mut worst: f64 = 0.0;
    let states = [maximally_mixed(4), random_state(4, &mut rng)];
    for k in 0..=20 {
        let p = k as f64 / 20.0;
        for rho in &states {
            let v = value(&pm, rho, Some(p), NoisePlacement::BeforeEach)?;
            worst = worst.max((v - peres_mermin::noisy_value(p)).abs());
        }
    }
    out.push(below("pm-noisy-law", worst, 1e-9, "|value - 6 p^2| on 21 noise levels"));

    let mut worst: f64 = 0.0;
    let states = [kcbs::optimal_state(), random_state(3, &mut rng)];
    for rho in &states {
        let s_rho = value(&ks, rho, None, NoisePlacement::None)?;
        for k in 0..=10 {
            let p = k as f64 / 10.0;
            let v = value(&ks, rho, Some(p), NoisePlacement::BeforeFirstOnly)?;
            worst = worst.max((v - kcbs::kcbs_noisy_value(s_rho, p)?).abs());
        }
    }
    out.push(below("kcbs-noisy-law", worst, 1e-10, "|value - (p S - (1 - p) 5/3)|"));

    out.push(below(
        "duality",
        duality(samples, &mut rng)?,
        1e-10,
        format!("{} pairs per dimension, d = 2, 3, 4, structured and Kraus", samples),
    ));
    out.push(below("kraus-equivalence", kraus_equivalence()?, 1e-12, "qubit and two-qubit forms on matrix units"));
    out.push(below(
        "picture-equivalence",
        picture_equivalence(&mut rng)?,
        1e-10,
        "both scenarios, all placements",
    ));

    let kb = classical_bound(&ks)?;
    out.push(exact(
        "kcbs-classical-bound",
        (kb.min - kcbs::CLASSICAL_BOUND).abs(),
        format!("min {} over {} assignments", kb.min, kb.assignments),
    ));
    let pb = classical_bound(&pm)?;
    out.push(exact(
        "pm-classical-bound",
        (pb.max - peres_mermin::CLASSICAL_BOUND).abs(),
        format!("max {} over {} assignments", pb.max, pb.assignments),
    ));

    let kt = threshold_error(&ks, &kcbs::optimal_state(), NoisePlacement::BeforeFirstOnly, kcbs::max_p_crit())?;
    out.push(below("kcbs-threshold", kt, 1e-8, "bisection against (5 + 3 sqrt5)/20"));
    let pt = threshold_error(&pm, &maximally_mixed(4), NoisePlacement::BeforeEach, (2.0f64 / 3.0).sqrt())?;
    out.push(below("pm-threshold", pt, 1e-8, "bisection against sqrt(2/3)"));

    let ideal = Behavior::new(vec![1.0, 1.0, 1.0, -1.0, -1.0, -1.0])?;
    let f = noncontextual_feasible(&pm, &ideal, DEFAULT_FEASIBILITY_TOL)?;
    out.push(above(
        "pm-ideal-infeasible",
        f.infeasibility,
        DEFAULT_FEASIBILITY_TOL,
        "phase-I infeasibility of rows +1, columns -1",
    ));
    let mixed_behavior = Behavior::new(vec![-1.0 / 3.0; 5])?;
    let f = noncontextual_feasible(&ks, &mixed_behavior, DEFAULT_FEASIBILITY_TOL)?;
    let certificate_error = match &f.certificate {
        Some(w) => {
            let n = ks.measurements().len();
            let mut recon = vec![0.0; ks.contexts().len()];
            for (a, weight) in f.support(n) {
                for (r, c) in recon.iter_mut().zip(a.correlators(&ks)) {
                    *r += weight * c;
                }
            }
            let sum: f64 = w.iter().sum();
            recon
                .iter()
                .map(|r| (r + 1.0 / 3.0).abs())
                .fold((sum - 1.0).abs(), f64::max)
        }
        None => f64::INFINITY,
    };
    out.push(below(
        "kcbs-mixed-feasible",
        certificate_error,
        DEFAULT_FEASIBILITY_TOL,
        "certificate reproduces the correlators",
    ));
    Ok(out)
}

#[derive(Serialize)]
struct VerifyReport<'a> {
    seed: u64,
    passed: bool,
    checks: &'a [Check],
}

pub(crate) fn run(seed: u64, samples: usize, fmt: OutputFormat) -> std::result::Result<Outcome, Failure> {
    if samples == 0 {
        return Err(Failure::new("--samples must be positive"));
    }
    let checks = checks(seed, samples)?;
    let passed = checks.iter().all(|c| c.passed);
    let stdout = match fmt {
        OutputFormat::Json => to_json(&VerifyReport {
            seed,
            passed,
            checks: &checks,
        }),
        OutputFormat::Csv => {
            let rows: Vec<Vec<String>> = checks
                .iter()
                .map(|c| {
                    vec![
                        c.name.to_string(),
                        format!("{:e}", c.measured),
                        c.relation.symbol().to_string(),
                        format!("{:e}", c.tol),
                        c.passed.to_string(),
                    ]
                })
                .collect();
            csv_table(&["check", "measured", "relation", "tol", "passed"], &rows)
        }
        OutputFormat::Human => {
            let mut out = String::new();
            for c in &checks {
                let tag = if c.passed { "PASS" } else { "FAIL" };
                out += &format!(
                    "{tag}  {:<22} residual {:.3e} {} {:.0e}  {}\n",
                    c.name,
                    c.measured,
                    c.relation.symbol(),
                    c.tol,
                    c.detail
                );
            }
            let failed = checks.iter().filter(|c| !c.passed).count();
            out += &format!("\n{} checks, {} failed (seed {seed})\n", checks.len(), failed);
            out
        }
    };
    Ok(Outcome {
        stdout,
        code: if passed { 0 } else { 1 },
    })
}
