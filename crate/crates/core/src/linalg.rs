//! Dense complex matrices at qubit sizes.
//!
//! Row-major storage, no external linear-algebra backend. The Hermitian
//! eigensolver is a cyclic Jacobi iteration with complex rotations, which is
//! deterministic and more than accurate enough at n = 4.

use num_complex::Complex64;

use crate::{Error, Result};

pub type C64 = Complex64;

/// Absolute tolerance for Hermiticity checks.
pub const HERMITICITY_TOL: f64 = 1e-12;

const JACOBI_OFFDIAG_TOL: f64 = 1e-13;
const JACOBI_MAX_SWEEPS: usize = 100;

/// Which qubit of a two-qubit matrix an operation targets.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Subsystem {
    First,
    Second,
}

/// Dense complex matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl CMatrix {
    /// Builds a matrix from row-major entries. Rejects NaN/Inf components.
    pub fn new(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimMismatch(rows, cols, data.len(), 1));
        }
        if !data.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![C64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, C64::new(1.0, 0.0));
        }
        m
    }

    /// Real diagonal matrix.
    pub fn from_real_diag(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m.set(i, i, C64::new(d, 0.0));
        }
        m
    }

    /// 2x2 matrix from real entries, row-major.
    pub fn from_real_2x2(a: f64, b: f64, c: f64, d: f64) -> Self {
        Self {
            rows: 2,
            cols: 2,
            data: vec![
                C64::new(a, 0.0),
                C64::new(b, 0.0),
                C64::new(c, 0.0),
                C64::new(d, 0.0),
            ],
        }
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

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: C64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimMismatch(
                self.rows, self.cols, other.rows, other.cols,
            ));
        }
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a + b)
            .collect();
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimMismatch(
                self.rows, self.cols, other.rows, other.cols,
            ));
        }
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a - b)
            .collect();
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * factor).collect(),
        }
    }

    pub fn scale_c(&self, factor: C64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * factor).collect(),
        }
    }

    /// Standard matrix product.
    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimMismatch(
                self.rows, self.cols, other.rows, other.cols,
            ));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let aik = self.get(i, k);
                if aik.re == 0.0 && aik.im == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.get(i, j) + aik * other.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        Ok(out)
    }

    /// Kronecker product; dimensions multiply.
    pub fn kron(&self, other: &Self) -> Self {
        let rows = self.rows * other.rows;
        let cols = self.cols * other.cols;
        let mut out = Self::zeros(rows, cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let aij = self.get(i, j);
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        out.set(
                            i * other.rows + k,
                            j * other.cols + l,
                            aij * other.get(k, l),
                        );
                    }
                }
            }
        }
        out
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).conj());
            }
        }
        out
    }

    pub fn trace(&self) -> Result<C64> {
        if !self.is_square() {
            return Err(Error::NotSquare(self.rows, self.cols));
        }
        let mut t = C64::new(0.0, 0.0);
        for i in 0..self.rows {
            t += self.get(i, i);
        }
        Ok(t)
    }

    /// Max entrywise |a_ij - conj(a_ji)|; zero for exactly Hermitian input.
    pub fn hermiticity_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.rows {
            for j in 0..self.cols {
                let d = (self.get(i, j) - self.get(j, i).conj()).norm();
                worst = worst.max(d);
            }
        }
        worst
    }

    /// (M + M†)/2, used to suppress floating-point drift.
    pub fn hermitize(&self) -> Self {
        let mut out = Self::zeros(self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let v = (self.get(i, j) + self.get(j, i).conj()) * 0.5;
                out.set(i, j, v);
            }
        }
        out
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

/// Kronecker product of two matrices.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kron(b)
}

/// Conjugate transpose.
pub fn dagger(a: &CMatrix) -> CMatrix {
    a.dagger()
}

fn offdiag_frobenius(a: &CMatrix) -> f64 {
    let n = a.rows();
    let mut sum = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                sum += a.get(i, j).norm_sqr();
            }
        }
    }
    sum.sqrt()
}

/// Eigenvalues of a Hermitian matrix, ascending.
///
/// Cyclic Jacobi with complex rotations; converges when the off-diagonal
/// Frobenius norm drops below 1e-13, capped at 100 sweeps. Input must be
/// Hermitian within [`HERMITICITY_TOL`].
pub fn hermitian_eigenvalues(m: &CMatrix) -> Result<Vec<f64>> {
    if !m.is_square() {
        return Err(Error::NotSquare(m.rows(), m.cols()));
    }
    let defect = m.hermiticity_defect();
    if defect > HERMITICITY_TOL {
        return Err(Error::NotHermitian(defect));
    }
    let n = m.rows();
    let mut a = m.hermitize();
    for _ in 0..JACOBI_MAX_SWEEPS {
        if offdiag_frobenius(&a) < JACOBI_OFFDIAG_TOL {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a.get(p, q);
                let babs = apq.norm();
                if babs < 1e-300 {
                    continue;
                }
                let phase = apq / babs;
                let app = a.get(p, p).re;
                let aqq = a.get(q, q).re;
                let eta = (app - aqq) / (2.0 * babs);
                let t = if eta >= 0.0 {
                    1.0 / (eta + (eta * eta + 1.0).sqrt())
                } else {
                    -1.0 / (-eta + (eta * eta + 1.0).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                let su = phase * s; // s * e^{i phi}
                                    // columns: B = A J
                for k in 0..n {
                    let akp = a.get(k, p);
                    let akq = a.get(k, q);
                    a.set(k, p, akp * c + akq * su.conj());
                    a.set(k, q, akq * c - akp * su);
                }
                // rows: A = J^dagger B
                for k in 0..n {
                    let apk = a.get(p, k);
                    let aqk = a.get(q, k);
                    a.set(p, k, apk * c + aqk * su);
                    a.set(q, k, aqk * c - apk * su.conj());
                }
                a.set(p, q, C64::new(0.0, 0.0));
                a.set(q, p, C64::new(0.0, 0.0));
            }
        }
    }
    let mut eigs: Vec<f64> = (0..n).map(|i| a.get(i, i).re).collect();
    eigs.sort_by(f64::total_cmp);
    Ok(eigs)
}

/// Partial transpose of a 4x4 two-qubit matrix on the chosen subsystem.
pub fn partial_transpose(rho: &CMatrix, subsystem: Subsystem) -> Result<CMatrix> {
    if rho.rows() != 4 || rho.cols() != 4 {
        return Err(Error::DimMismatch(rho.rows(), rho.cols(), 4, 4));
    }
    let mut out = CMatrix::zeros(4, 4);
    for i in 0..2 {
        for k in 0..2 {
            for j in 0..2 {
                for l in 0..2 {
                    let v = match subsystem {
                        Subsystem::Second => rho.get(2 * i + l, 2 * j + k),
                        Subsystem::First => rho.get(2 * j + k, 2 * i + l),
                    };
                    out.set(2 * i + k, 2 * j + l, v);
                }
            }
        }
    }
    Ok(out)
}
