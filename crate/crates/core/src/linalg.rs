//! Dense complex matrices for the small Hilbert spaces used here (d <= 4).
//!
//! Everything is row-major `Complex64`. Operations that can fail on shape
//! return [`Result`]; the arithmetic operator impls (`&a * &b`, `&a + &b`,
//! `&a - &b`) panic on mismatched shapes and are meant for code that has
//! already established compatibility.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Default tolerance on `||A - A^dagger||_F` for Hermiticity checks.
pub const HERMITIAN_TOL: f64 = 1e-9;

const JACOBI_OFF_TOL: f64 = 1e-14;
const JACOBI_MAX_SWEEPS: usize = 100;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub const I: Complex64 = Complex64::new(0.0, 1.0);

#[inline]
pub fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[derive(Clone, PartialEq)]
pub struct CMat {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl CMat {
    pub fn new(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::DimensionMismatch {
                expected: "positive dimensions".into(),
                found: format!("{rows}x{cols}"),
            });
        }
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: format!("{} entries", rows * cols),
                found: format!("{} entries", data.len()),
            });
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Parse("matrix entries must be finite".into()));
        }
        Ok(Self { rows, cols, data })
    }

    /// Builds a matrix from row slices. Panics on ragged input.
    pub fn from_rows<R: AsRef<[Complex64]>>(rows: &[R]) -> Self {
        let n = rows.len();
        let m = rows[0].as_ref().len();
        let mut data = Vec::with_capacity(n * m);
        for r in rows {
            assert_eq!(r.as_ref().len(), m, "ragged rows");
            data.extend_from_slice(r.as_ref());
        }
        Self::new(n, m, data).expect("valid matrix")
    }

    pub fn from_real_rows<R: AsRef<[f64]>>(rows: &[R]) -> Self {
        let complex: Vec<Vec<Complex64>> = rows
            .iter()
            .map(|r| r.as_ref().iter().map(|&x| c64(x, 0.0)).collect())
            .collect();
        Self::from_rows(&complex)
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(d: usize) -> Self {
        let mut m = Self::zeros(d, d);
        for i in 0..d {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn diag(values: &[f64]) -> Self {
        let mut m = Self::zeros(values.len(), values.len());
        for (i, &v) in values.iter().enumerate() {
            m[(i, i)] = c64(v, 0.0);
        }
        m
    }

    /// Rank-one operator `|v><v|`.
    pub fn projector(ket: &[Complex64]) -> Self {
        let d = ket.len();
        let mut m = Self::zeros(d, d);
        for i in 0..d {
            for j in 0..d {
                m[(i, j)] = ket[i] * ket[j].conj();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.data
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    fn shape_str(&self) -> String {
        format!("{}x{}", self.rows, self.cols)
    }

    fn require_same_shape(&self, other: &CMat) -> Result<()> {
        if self.shape() != other.shape() {
            return Err(Error::DimensionMismatch {
                expected: self.shape_str(),
                found: other.shape_str(),
            });
        }
        Ok(())
    }

    pub fn matmul(&self, other: &CMat) -> Result<CMat> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                expected: format!("{} rows on the right operand", self.cols),
                found: other.shape_str(),
            });
        }
        let mut out = CMat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a == ZERO {
                    continue;
                }
                let row = &other.data[k * other.cols..(k + 1) * other.cols];
                let dst = &mut out.data[i * other.cols..(i + 1) * other.cols];
                for (d, b) in dst.iter_mut().zip(row) {
                    *d += a * b;
                }
            }
        }
        Ok(out)
    }

    /// Kronecker product with block layout `self[i,j] * other`.
    pub fn kron(&self, other: &CMat) -> CMat {
        let rows = self.rows * other.rows;
        let cols = self.cols * other.cols;
        let mut out = CMat::zeros(rows, cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self[(i, j)];
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        out[(i * other.rows + k, j * other.cols + l)] = a * other[(k, l)];
                    }
                }
            }
        }
        out
    }

    pub fn dagger(&self) -> CMat {
        let mut out = CMat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    pub fn trace(&self) -> Result<Complex64> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        Ok((0..self.rows).map(|i| self[(i, i)]).sum())
    }

    pub fn add(&self, other: &CMat) -> Result<CMat> {
        self.require_same_shape(other)?;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        Ok(CMat {
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn sub(&self, other: &CMat) -> Result<CMat> {
        self.require_same_shape(other)?;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        Ok(CMat {
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn scale(&self, c: Complex64) -> CMat {
        CMat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| c * z).collect(),
        }
    }

    pub fn scale_real(&self, c: f64) -> CMat {
        self.scale(c64(c, 0.0))
    }

    pub fn frob_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Frobenius norm of `self - other`.
    pub fn frob_dist(&self, other: &CMat) -> Result<f64> {
        self.require_same_shape(other)?;
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt())
    }

    pub fn max_abs_diff(&self, other: &CMat) -> Result<f64> {
        self.require_same_shape(other)?;
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    /// `[A, B] = AB - BA`.
    pub fn commutator(&self, other: &CMat) -> Result<CMat> {
        let ab = self.matmul(other)?;
        let ba = other.matmul(self)?;
        ab.sub(&ba)
    }

    pub fn hermiticity_residual(&self) -> Result<f64> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        self.frob_dist(&self.dagger())
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_residual().is_ok_and(|r| r <= tol)
    }

    /// Eigenvalues of a Hermitian matrix in ascending order, by cyclic Jacobi
    /// rotations.
    pub fn hermitian_eigenvalues(&self, tol: f64) -> Result<Vec<f64>> {
        let residual = self.hermiticity_residual()?;
        if residual > tol {
            return Err(Error::NotHermitian { residual, tol });
        }
        let n = self.rows;
        // Work on the exactly-Hermitian part so rounding asymmetry cannot stall
        // the sweep.
        let mut a = self.add(&self.dagger())?.scale_real(0.5);
        let threshold = JACOBI_OFF_TOL * a.frob_norm().max(1.0);

        for _ in 0..JACOBI_MAX_SWEEPS {
            if a.off_diagonal_norm() < threshold {
                break;
            }
            for p in 0..n {
                for q in (p + 1)..n {
                    let b = a[(p, q)];
                    let r = b.norm();
                    if r < f64::MIN_POSITIVE {
                        continue;
                    }
                    let app = a[(p, p)].re;
                    let aqq = a[(q, q)].re;
                    let theta = (aqq - app) / (2.0 * r);
                    let t = if theta == 0.0 {
                        1.0
                    } else {
                        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
                    };
                    let cs = 1.0 / (t * t + 1.0).sqrt();
                    let sn = t * cs;
                    let phase = (b / r).conj();

                    // G = D * P with D = diag(1, e^{-i arg b}) on (p, q) and P the
                    // real Jacobi rotation; A <- G^dagger A G.
                    let mut g = CMat::identity(n);
                    g[(p, p)] = c64(cs, 0.0);
                    g[(p, q)] = c64(sn, 0.0);
                    g[(q, p)] = phase * (-sn);
                    g[(q, q)] = phase * cs;
                    a = &(&g.dagger() * &a) * &g;
                    a[(p, q)] = ZERO;
                    a[(q, p)] = ZERO;
                }
            }
        }

        let mut eig: Vec<f64> = (0..n).map(|i| a[(i, i)].re).collect();
        eig.sort_by(f64::total_cmp);
        Ok(eig)
    }

    fn off_diagonal_norm(&self) -> f64 {
        let mut s = 0.0;
        for i in 0..self.rows {
            for j in 0..self.cols {
                if i != j {
                    s += self[(i, j)].norm_sqr();
                }
            }
        }
        s.sqrt()
    }

    /// `trace(self * other)` without forming the product.
    pub fn trace_product(&self, other: &CMat) -> Result<Complex64> {
        if self.cols != other.rows || self.rows != other.cols {
            return Err(Error::DimensionMismatch {
                expected: format!("{}x{}", self.cols, self.rows),
                found: other.shape_str(),
            });
        }
        let mut acc = ZERO;
        for i in 0..self.rows {
            for k in 0..self.cols {
                acc += self[(i, k)] * other[(k, i)];
            }
        }
        Ok(acc)
    }
}

impl Index<(usize, usize)> for CMat {
    type Output = Complex64;

    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        assert!(i < self.rows && j < self.cols, "index out of bounds");
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for CMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        assert!(i < self.rows && j < self.cols, "index out of bounds");
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &CMat {
    type Output = CMat;

    fn mul(self, rhs: &CMat) -> CMat {
        self.matmul(rhs).expect("matrix product shape mismatch")
    }
}

impl Add for &CMat {
    type Output = CMat;

    fn add(self, rhs: &CMat) -> CMat {
        CMat::add(self, rhs).expect("matrix sum shape mismatch")
    }
}

impl Sub for &CMat {
    type Output = CMat;

    fn sub(self, rhs: &CMat) -> CMat {
        CMat::sub(self, rhs).expect("matrix difference shape mismatch")
    }
}

impl fmt::Debug for CMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "CMat {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                let z = self[(i, j)];
                write!(f, "{:+.6}{:+.6}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::{sigma_x, sigma_y, sigma_z};

    fn close(a: &CMat, b: &CMat, tol: f64) -> bool {
        a.frob_dist(b).unwrap() < tol
    }

    #[test]
    fn identity_cases() {
        assert_eq!(CMat::identity(2), CMat::from_real_rows(&[[1.0, 0.0], [0.0, 1.0]]));
        assert_eq!(CMat::identity(3).trace().unwrap(), c64(3.0, 0.0));
        assert_eq!(CMat::identity(4), CMat::identity(2).kron(&CMat::identity(2)));
    }

    #[test]
    fn pauli_products() {
        assert!(close(&(&sigma_x() * &sigma_x()), &CMat::identity(2), 1e-15));
        // sigma_y sigma_z = i sigma_x, entry by entry:
        // [[0,-i],[i,0]] [[1,0],[0,-1]] = [[0, i],[i, 0]]
        let expected = CMat::from_rows(&[[ZERO, I], [I, ZERO]]);
        assert_eq!(&sigma_y() * &sigma_z(), expected);
        assert_eq!(expected, sigma_x().scale(I));
    }

    #[test]
    fn matmul_shape_error() {
        let a = CMat::zeros(2, 3);
        assert!(matches!(a.matmul(&a), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn kron_zz_diagonal() {
        let zz = sigma_z().kron(&sigma_z());
        let diag: Vec<f64> = (0..4).map(|i| zz[(i, i)].re).collect();
        assert_eq!(diag, vec![1.0, -1.0, -1.0, 1.0]);
        assert_eq!(zz.frob_dist(&CMat::diag(&[1.0, -1.0, -1.0, 1.0])).unwrap(), 0.0);
    }

    #[test]
    fn dagger_cases() {
        assert_eq!(sigma_y().dagger(), sigma_y());
        let raising = CMat::from_real_rows(&[[0.0, 1.0], [0.0, 0.0]]);
        assert_eq!(raising.dagger(), CMat::from_real_rows(&[[0.0, 0.0], [1.0, 0.0]]));
    }

    #[test]
    fn trace_cases() {
        assert_eq!(sigma_x().trace().unwrap(), ZERO);
        let v = [c64(0.6, 0.0), c64(0.0, 0.8)];
        assert!((CMat::projector(&v).trace().unwrap() - ONE).norm() < 1e-15);
        assert!(matches!(CMat::zeros(2, 3).trace(), Err(Error::NotSquare { .. })));
    }

    #[test]
    fn add_scale_dist() {
        let x = sigma_x();
        assert_eq!(x.frob_dist(&x).unwrap(), 0.0);
        assert_eq!(CMat::identity(2).scale_real(2.0).trace().unwrap(), c64(4.0, 0.0));
        assert_eq!(x.add(&x.scale_real(-1.0)).unwrap(), CMat::zeros(2, 2));
        assert!(x.add(&CMat::identity(3)).is_err());
        assert!(x.frob_dist(&CMat::identity(3)).is_err());
    }

    #[test]
    fn eigenvalues_simple() {
        assert_eq!(CMat::identity(3).hermitian_eigenvalues(HERMITIAN_TOL).unwrap(), vec![1.0; 3]);
        let ez = sigma_z().hermitian_eigenvalues(HERMITIAN_TOL).unwrap();
        assert_eq!(ez, vec![-1.0, 1.0]);
        let ey = sigma_y().hermitian_eigenvalues(HERMITIAN_TOL).unwrap();
        assert!((ey[0] + 1.0).abs() < 1e-14 && (ey[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn eigenvalues_depolarized_pure_qubit() {
        // Bloch vector of length 1 shrinks to p, eigenvalues (1 +- p)/2.
        let psi = [c64(0.6, 0.0), c64(0.0, 0.8)];
        let rho = CMat::projector(&psi);
        let p = 0.5;
        let out = &rho.scale_real(p) + &CMat::identity(2).scale_real((1.0 - p) / 2.0);
        let e = out.hermitian_eigenvalues(HERMITIAN_TOL).unwrap();
        assert!((e[0] - 0.25).abs() < 1e-12);
        assert!((e[1] - 0.75).abs() < 1e-12);
    }

    #[test]
    fn eigenvalues_complex_4x4() {
        // U diag(..) U^dagger with U = kron of two qubit unitaries.
        let h = CMat::from_real_rows(&[[1.0, 1.0], [1.0, -1.0]]).scale_real(0.5_f64.sqrt());
        let s = CMat::from_rows(&[[ONE, ZERO], [ZERO, I]]);
        let u = (&h * &s).kron(&(&s * &h));
        let d = CMat::diag(&[-2.0, 0.5, 0.5, 3.25]);
        let a = &(&u * &d) * &u.dagger();
        let e = a.hermitian_eigenvalues(HERMITIAN_TOL).unwrap();
        for (x, y) in e.iter().zip([-2.0, 0.5, 0.5, 3.25]) {
            assert!((x - y).abs() < 1e-12, "{e:?}");
        }
    }

    #[test]
    fn eigenvalues_reject_non_hermitian() {
        let a = CMat::from_real_rows(&[[0.0, 1.0], [0.0, 0.0]]);
        assert!(matches!(
            a.hermitian_eigenvalues(HERMITIAN_TOL),
            Err(Error::NotHermitian { .. })
        ));
    }

    #[test]
    fn rejects_non_finite() {
        assert!(CMat::new(1, 1, vec![c64(f64::NAN, 0.0)]).is_err());
        assert!(CMat::new(1, 2, vec![ONE]).is_err());
    }
}
