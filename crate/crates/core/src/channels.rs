//! Quantum channels with forward (Schrödinger) and dual (Heisenberg) action.
//!
//! Two representations are supported. [`Channel::Depolarizing`] keeps only
//! `(p, d)` and evaluates `p X + (1 - p) tr(X) 1/d` directly, for any
//! dimension. [`Channel::Kraus`] stores an explicit operator list; the qubit
//! and two-qubit depolarizing channels have Kraus constructors so the two
//! forms can be checked against each other. Other dimensions expand through
//! the clock-and-shift twirl.

use crate::error::{Error, Result};
use crate::linalg::{c64, CMat};
use crate::pauli::{pauli_pair, Pauli};
use crate::states::{require_dimension, validate_state};

/// Tolerance on `||sum K^dagger K - 1||_F` (and the unital analogue).
pub const KRAUS_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub enum Channel {
    Kraus(KrausOps),
    Depolarizing(Depolarizing),
}

/// Trace-preserving Kraus operator list.
#[derive(Debug, Clone, PartialEq)]
pub struct KrausOps {
    ops: Vec<CMat>,
    dim: usize,
}

/// `rho -> p rho + (1 - p) 1/d`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Depolarizing {
    p: f64,
    dim: usize,
}

impl Depolarizing {
    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn dim(&self) -> usize {
        self.dim
    }
}

impl KrausOps {
    pub fn operators(&self) -> &[CMat] {
        &self.ops
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of operators that are not identically zero.
    pub fn effective_len(&self) -> usize {
        self.ops.iter().filter(|k| k.frob_norm() > 0.0).count()
    }
}

fn check_probability(name: &'static str, p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) || p.is_nan() {
        return Err(Error::OutOfRange {
            name,
            value: p,
            range: "[0, 1]",
        });
    }
    Ok(())
}

impl Channel {
    pub fn depolarizing(p: f64, dim: usize) -> Result<Self> {
        check_probability("p", p)?;
        if dim == 0 {
            return Err(Error::InvalidChannel("dimension must be positive".into()));
        }
        Ok(Channel::Depolarizing(Depolarizing { p, dim }))
    }

    /// Kraus channel; rejects empty lists, mixed shapes, and lists violating
    /// completeness `sum K^dagger K = 1`.
    pub fn kraus(ops: Vec<CMat>) -> Result<Self> {
        let Some(first) = ops.first() else {
            return Err(Error::InvalidChannel("empty Kraus list".into()));
        };
        let dim = first.rows();
        if let Some(bad) = ops.iter().find(|k| k.shape() != (dim, dim)) {
            return Err(Error::DimensionMismatch {
                expected: format!("{dim}x{dim} Kraus operator"),
                found: format!("{}x{}", bad.rows(), bad.cols()),
            });
        }
        let completeness = ops
            .iter()
            .fold(CMat::zeros(dim, dim), |acc, k| &acc + &(&k.dagger() * k));
        let residual = completeness.frob_dist(&CMat::identity(dim))?;
        if residual > KRAUS_TOL {
            return Err(Error::InvalidChannel(format!(
                "Kraus operators are not trace preserving: ||sum K^dagger K - 1||_F = {residual:e}"
            )));
        }
        Ok(Channel::Kraus(KrausOps { ops, dim }))
    }

    pub fn identity(dim: usize) -> Self {
        Channel::Depolarizing(Depolarizing { p: 1.0, dim })
    }

    pub fn dim(&self) -> usize {
        match self {
            Channel::Kraus(k) => k.dim,
            Channel::Depolarizing(d) => d.dim,
        }
    }

    /// The depolarizing parameter when the channel is stored structurally.
    pub fn depolarizing_p(&self) -> Option<f64> {
        match self {
            Channel::Depolarizing(d) => Some(d.p),
            Channel::Kraus(_) => None,
        }
    }

    /// `sum K K^dagger = 1` within [`KRAUS_TOL`].
    pub fn is_unital(&self) -> bool {
        match self {
            Channel::Depolarizing(_) => true,
            Channel::Kraus(k) => {
                let sum = k
                    .ops
                    .iter()
                    .fold(CMat::zeros(k.dim, k.dim), |acc, op| &acc + &(op * &op.dagger()));
                sum.frob_dist(&CMat::identity(k.dim))
                    .is_ok_and(|r| r <= KRAUS_TOL)
            }
        }
    }

    fn require_operand(&self, x: &CMat) -> Result<()> {
        let d = self.dim();
        if x.shape() != (d, d) {
            return Err(Error::DimensionMismatch {
                expected: format!("{d}x{d} operand"),
                found: format!("{}x{}", x.rows(), x.cols()),
            });
        }
        Ok(())
    }

    /// Linear action on an arbitrary operator. Used for intermediate
    /// (non-state) operators such as Lüders score operators.
    pub fn map(&self, x: &CMat) -> Result<CMat> {
        self.require_operand(x)?;
        Ok(match self {
            Channel::Depolarizing(Depolarizing { p, dim }) => {
                let tr = x.trace()?;
                let mixed = CMat::identity(*dim).scale(tr * ((1.0 - p) / *dim as f64));
                &x.scale_real(*p) + &mixed
            }
            Channel::Kraus(k) => k
                .ops
                .iter()
                .fold(CMat::zeros(k.dim, k.dim), |acc, op| {
                    &acc + &(&(op * x) * &op.dagger())
                }),
        })
    }

    /// Dual (Heisenberg) action, defined by `tr(A E(rho)) = tr(E^dagger(A) rho)`.
    pub fn map_dual(&self, a: &CMat) -> Result<CMat> {
        self.require_operand(a)?;
        Ok(match self {
            Channel::Depolarizing(Depolarizing { p, dim }) => {
                let tr = a.trace()?;
                let mixed = CMat::identity(*dim).scale(tr * ((1.0 - p) / *dim as f64));
                &a.scale_real(*p) + &mixed
            }
            Channel::Kraus(k) => k
                .ops
                .iter()
                .fold(CMat::zeros(k.dim, k.dim), |acc, op| {
                    &acc + &(&(&op.dagger() * a) * op)
                }),
        })
    }

    /// Forward action on a density matrix; the input is validated as a state.
    pub fn apply(&self, rho: &CMat) -> Result<CMat> {
        require_dimension(rho, self.dim())?;
        validate_state(rho)?;
        self.map(rho)
    }

    /// Dual action on an observable.
    pub fn apply_dual(&self, obs: &CMat) -> Result<CMat> {
        self.map_dual(obs)
    }

    /// `second` after `self`. Two depolarizing channels compose to
    /// `Depolarizing(p q)`; anything else becomes a Kraus channel.
    pub fn then(&self, second: &Channel) -> Result<Channel> {
        if self.dim() != second.dim() {
            return Err(Error::DimensionMismatch {
                expected: format!("dimension {}", self.dim()),
                found: format!("dimension {}", second.dim()),
            });
        }
        if let (Channel::Depolarizing(a), Channel::Depolarizing(b)) = (self, second) {
            return Channel::depolarizing(a.p * b.p, a.dim);
        }
        let first_ops = self.kraus_operators()?;
        let second_ops = second.kraus_operators()?;
        let mut ops = Vec::with_capacity(first_ops.len() * second_ops.len());
        for b in &second_ops {
            for a in &first_ops {
                ops.push(b * a);
            }
        }
        Channel::kraus(ops)
    }

    /// Explicit Kraus operators. Structured depolarizing channels use the Pauli
    /// forms for one and two qubits and the clock-and-shift twirl otherwise.
    pub fn kraus_operators(&self) -> Result<Vec<CMat>> {
        match self {
            Channel::Kraus(k) => Ok(k.ops.clone()),
            Channel::Depolarizing(Depolarizing { p, dim: 2 }) => {
                Ok(unwrap_kraus(qubit_depolarizing_kraus(*p)?))
            }
            Channel::Depolarizing(Depolarizing { p, dim: 4 }) => {
                Ok(unwrap_kraus(two_qubit_pauli_twirl_kraus(*p)?))
            }
            Channel::Depolarizing(Depolarizing { p, dim }) => {
                Ok(unwrap_kraus(weyl_twirl_kraus(*p, *dim)?))
            }
        }
    }
}

fn unwrap_kraus(ch: Channel) -> Vec<CMat> {
    match ch {
        Channel::Kraus(k) => k.ops,
        Channel::Depolarizing(_) => unreachable!("constructor returns Kraus"),
    }
}

/// Weights `(kappa, iota) = ((1 + 3p)/4, (1 - p)/4)` of the qubit Kraus form.
pub fn qubit_kraus_weights(p: f64) -> Result<(f64, f64)> {
    check_probability("p", p)?;
    Ok(((1.0 + 3.0 * p) / 4.0, (1.0 - p) / 4.0))
}

/// `{sqrt(kappa) 1, sqrt(iota) X, sqrt(iota) Y, sqrt(iota) Z}`.
pub fn qubit_depolarizing_kraus(p: f64) -> Result<Channel> {
    let (kappa, iota) = qubit_kraus_weights(p)?;
    let mut ops = vec![CMat::identity(2).scale_real(kappa.sqrt())];
    for s in [Pauli::X, Pauli::Y, Pauli::Z] {
        ops.push(s.matrix().scale_real(iota.sqrt()));
    }
    Channel::kraus(ops)
}

/// `sqrt(p) 1` plus `sqrt((1 - p)/16) s_i (x) s_j` over all sixteen two-qubit
/// Pauli products (identity product included).
pub fn two_qubit_pauli_twirl_kraus(p: f64) -> Result<Channel> {
    check_probability("p", p)?;
    let w = c64(((1.0 - p) / 16.0).sqrt(), 0.0);
    let mut ops = Vec::with_capacity(17);
    ops.push(CMat::identity(4).scale_real(p.sqrt()));
    for a in Pauli::ALL {
        for b in Pauli::ALL {
            ops.push(pauli_pair(a, b).scale(w));
        }
    }
    Channel::kraus(ops)
}

/// `sqrt(p) 1` plus `sqrt((1 - p)/d^2) X^a Z^b` for `a, b in 0..d`, where
/// `X|k> = |k+1>` and `Z|k> = w^k |k>` with `w = exp(2 pi i/d)`.
pub fn weyl_twirl_kraus(p: f64, d: usize) -> Result<Channel> {
    check_probability("p", p)?;
    if d == 0 {
        return Err(Error::InvalidChannel("dimension must be positive".into()));
    }
    let w = ((1.0 - p) / (d * d) as f64).sqrt();
    let mut ops = Vec::with_capacity(d * d + 1);
    ops.push(CMat::identity(d).scale_real(p.sqrt()));
    for a in 0..d {
        for b in 0..d {
            let mut op = CMat::zeros(d, d);
            for k in 0..d {
                let phase = 2.0 * std::f64::consts::PI * ((b * k) % d) as f64 / d as f64;
                op[((k + a) % d, k)] = c64(w * phase.cos(), w * phase.sin());
            }
            ops.push(op);
        }
    }
    Channel::kraus(ops)
}

/// Depolarizing parameter `p(t) = exp(-4 gamma t)` reached by the isotropic
/// qubit Lindblad evolution.
pub fn lindblad_p(gamma: f64, t: f64) -> Result<f64> {
    if !gamma.is_finite() || gamma < 0.0 {
        return Err(Error::OutOfRange {
            name: "gamma",
            value: gamma,
            range: "[0, inf)",
        });
    }
    if !t.is_finite() || t < 0.0 {
        return Err(Error::OutOfRange {
            name: "t",
            value: t,
            range: "[0, inf)",
        });
    }
    Ok((-4.0 * gamma * t).exp())
}

/// Unit matrices `E_ij` spanning all `d x d` operators.
pub fn matrix_basis(d: usize) -> Vec<CMat> {
    let mut basis = Vec::with_capacity(d * d);
    for i in 0..d {
        for j in 0..d {
            let mut e = CMat::zeros(d, d);
            e[(i, j)] = c64(1.0, 0.0);
            basis.push(e);
        }
    }
    basis
}
