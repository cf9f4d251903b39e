//! Density matrices: validation and the standard families used by the
//! scenarios, the CLI and the tests.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::linalg::{c64, CMat, HERMITIAN_TOL, ONE, ZERO};

/// Tolerance for unit trace and for the most negative admissible eigenvalue.
pub const STATE_TOL: f64 = 1e-9;

/// Checks Hermiticity, unit trace and positivity, all within [`STATE_TOL`].
pub fn validate_state(rho: &CMat) -> Result<()> {
    if !rho.is_square() {
        return Err(Error::InvalidState(format!(
            "density matrix must be square, got {}x{}",
            rho.rows(),
            rho.cols()
        )));
    }
    let herm = rho.hermiticity_residual()?;
    if herm > HERMITIAN_TOL {
        return Err(Error::InvalidState(format!(
            "not Hermitian (||rho - rho^dagger||_F = {herm:e})"
        )));
    }
    let tr = rho.trace()?;
    if (tr - ONE).norm() > STATE_TOL {
        return Err(Error::InvalidState(format!(
            "trace is {} + {}i, expected 1",
            tr.re, tr.im
        )));
    }
    let eig = rho.hermitian_eigenvalues(HERMITIAN_TOL)?;
    if eig[0] < -STATE_TOL {
        return Err(Error::InvalidState(format!(
            "not positive semidefinite (minimum eigenvalue {:e})",
            eig[0]
        )));
    }
    Ok(())
}

pub fn require_dimension(rho: &CMat, d: usize) -> Result<()> {
    if rho.shape() != (d, d) {
        return Err(Error::DimensionMismatch {
            expected: format!("{d}x{d} state"),
            found: format!("{}x{}", rho.rows(), rho.cols()),
        });
    }
    Ok(())
}

pub fn maximally_mixed(d: usize) -> CMat {
    CMat::identity(d).scale_real(1.0 / d as f64)
}

/// Computational basis projector `|k><k|`.
pub fn basis_state(d: usize, k: usize) -> Result<CMat> {
    if k >= d {
        return Err(Error::InvalidState(format!(
            "basis index {k} out of range for dimension {d}"
        )));
    }
    let mut ket = vec![ZERO; d];
    ket[k] = ONE;
    Ok(CMat::projector(&ket))
}

/// `|psi><psi|` for the normalized ket.
pub fn pure_state(ket: &[Complex64]) -> Result<CMat> {
    let norm = ket.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if ket.is_empty() || norm == 0.0 || !norm.is_finite() {
        return Err(Error::InvalidState("ket must be nonzero and finite".into()));
    }
    let normalized: Vec<Complex64> = ket.iter().map(|z| z / norm).collect();
    Ok(CMat::projector(&normalized))
}

/// Full-rank random state `M M^dagger / tr(M M^dagger)` with `M` an iid
/// standard complex Gaussian matrix.
pub fn random_state<R: Rng + ?Sized>(d: usize, rng: &mut R) -> CMat {
    let mut m = CMat::zeros(d, d);
    for i in 0..d {
        for j in 0..d {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            m[(i, j)] = c64(re, im);
        }
    }
    let mm = &m * &m.dagger();
    let tr = mm.trace().expect("square").re;
    let rho = mm.scale_real(1.0 / tr);
    // symmetrize away rounding
    (&rho + &rho.dagger()).scale_real(0.5)
}

/// Random Hermitian matrix with iid Gaussian entries (not normalized).
pub fn random_hermitian<R: Rng + ?Sized>(d: usize, rng: &mut R) -> CMat {
    let mut m = CMat::zeros(d, d);
    for i in 0..d {
        for j in 0..d {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            m[(i, j)] = c64(re, im);
        }
    }
    (&m + &m.dagger()).scale_real(0.5)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn random_states_are_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for d in 1..=4 {
            for _ in 0..20 {
                let rho = random_state(d, &mut rng);
                validate_state(&rho).unwrap();
                let eig = rho.hermitian_eigenvalues(HERMITIAN_TOL).unwrap();
                assert!(eig[0] > 0.0, "full rank expected");
            }
        }
    }

    #[test]
    fn standard_states() {
        validate_state(&maximally_mixed(3)).unwrap();
        validate_state(&basis_state(4, 2).unwrap()).unwrap();
        assert!(basis_state(2, 2).is_err());
        let rho = pure_state(&[c64(1.0, 0.0), c64(0.0, 1.0)]).unwrap();
        validate_state(&rho).unwrap();
        assert!(pure_state(&[ZERO, ZERO]).is_err());
    }

    #[test]
    fn rejects_invalid() {
        let not_unit = CMat::identity(2);
        assert!(matches!(validate_state(&not_unit), Err(Error::InvalidState(_))));
        let negative = CMat::diag(&[1.5, -0.5]);
        assert!(matches!(validate_state(&negative), Err(Error::InvalidState(_))));
        let non_herm = CMat::from_real_rows(&[[0.5, 0.5], [0.0, 0.5]]);
        assert!(validate_state(&non_herm).is_err());
        assert!(validate_state(&CMat::zeros(2, 3)).is_err());
    }
}
