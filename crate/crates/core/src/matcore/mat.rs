use std::fmt;
use std::ops::{Add, AddAssign, Index, IndexMut, Mul, Neg, Sub, SubAssign};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tol::Tolerances;

/// Dense real square matrix stored row-major.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MatRepr", into = "MatRepr")]
pub struct Mat {
    n: usize,
    data: Vec<f64>,
}

/// Wire form `{"n": int, "data": [row-major floats]}`.
#[derive(Serialize, Deserialize)]
struct MatRepr {
    n: usize,
    data: Vec<f64>,
}

impl TryFrom<MatRepr> for Mat {
    type Error = Error;

    fn try_from(r: MatRepr) -> Result<Self> {
        Mat::from_row_major(r.n, r.data)
    }
}

impl From<Mat> for MatRepr {
    fn from(m: Mat) -> Self {
        MatRepr {
            n: m.n,
            data: m.data,
        }
    }
}

impl Mat {
    pub fn zeros(n: usize) -> Self {
        Mat {
            n,
            data: vec![0.0; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zeros(n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    /// Builds a matrix from row-major entries, checking shape and finiteness.
    pub fn from_row_major(n: usize, data: Vec<f64>) -> Result<Self> {
        if n == 0 {
            return Err(Error::Dimension("matrix order must be positive".into()));
        }
        if data.len() != n * n {
            return Err(Error::Dimension(format!(
                "order {n} needs {} entries, got {}",
                n * n,
                data.len()
            )));
        }
        if let Some(x) = data.iter().find(|x| !x.is_finite()) {
            return Err(Error::Precondition(format!("non-finite entry {x}")));
        }
        Ok(Mat { n, data })
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for (i, r) in rows.iter().enumerate() {
            let r = r.as_ref();
            if r.len() != n {
                return Err(Error::Dimension(format!(
                    "row {i} has {} entries, expected {n}",
                    r.len()
                )));
            }
            data.extend_from_slice(r);
        }
        Mat::from_row_major(n, data)
    }

    pub fn diag(values: &[f64]) -> Self {
        let mut m = Mat::zeros(values.len());
        for (i, v) in values.iter().enumerate() {
            m[(i, i)] = *v;
        }
        m
    }

    /// Block diagonal matrix with the given square blocks.
    pub fn block_diag(blocks: &[Mat]) -> Self {
        let n = blocks.iter().map(Mat::order).sum();
        let mut m = Mat::zeros(n);
        let mut off = 0;
        for b in blocks {
            m.set_block(off, b);
            off += b.n;
        }
        m
    }

    /// The 2×2 matrix `[[0, 1], [-1, 0]]`.
    pub fn e0() -> Self {
        Mat {
            n: 2,
            data: vec![0.0, 1.0, -1.0, 0.0],
        }
    }

    /// The 2×2 swap permutation `[[0, 1], [1, 0]]`.
    pub fn p0() -> Self {
        Mat {
            n: 2,
            data: vec![0.0, 1.0, 1.0, 0.0],
        }
    }

    /// `exp(theta * E0)`, i.e. `[[cos, sin], [-sin, cos]]`.
    pub fn rot(theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        Mat {
            n: 2,
            data: vec![c, s, -s, c],
        }
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.n
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.data
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.n).map(|i| self[(i, j)]).collect()
    }

    pub fn set_column(&mut self, j: usize, col: &[f64]) {
        for (i, v) in col.iter().enumerate() {
            self[(i, j)] = *v;
        }
    }

    /// Writes `block` with its top-left corner at `(off, off)`.
    pub fn set_block(&mut self, off: usize, block: &Mat) {
        for i in 0..block.n {
            for j in 0..block.n {
                self[(off + i, off + j)] = block[(i, j)];
            }
        }
    }

    /// Principal submatrix on rows/columns `off..off + len`.
    pub fn sub_block(&self, off: usize, len: usize) -> Mat {
        let mut m = Mat::zeros(len);
        for i in 0..len {
            for j in 0..len {
                m[(i, j)] = self[(off + i, off + j)];
            }
        }
        m
    }

    pub fn transpose(&self) -> Mat {
        let n = self.n;
        let mut t = Mat::zeros(n);
        for i in 0..n {
            for j in 0..n {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self[(i, i)]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    pub fn scale(&self, s: f64) -> Mat {
        Mat {
            n: self.n,
            data: self.data.iter().map(|x| x * s).collect(),
        }
    }

    /// `self += alpha * other`.
    pub fn add_scaled(&mut self, alpha: f64, other: &Mat) {
        debug_assert_eq!(self.n, other.n);
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += alpha * b;
        }
    }

    pub fn matmul(&self, other: &Mat) -> Mat {
        assert_eq!(self.n, other.n, "matmul order mismatch");
        let n = self.n;
        let mut out = Mat::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == 0.0 {
                    continue;
                }
                let row = &other.data[k * n..(k + 1) * n];
                let dst = &mut out.data[i * n..(i + 1) * n];
                for (d, b) in dst.iter_mut().zip(row) {
                    *d += a * b;
                }
            }
        }
        out
    }

    /// `self * other * selfᵀ`.
    pub fn congruence(&self, other: &Mat) -> Mat {
        self.matmul(other).matmul(&self.transpose())
    }

    pub fn commutator(&self, other: &Mat) -> Mat {
        &self.matmul(other) - &other.matmul(self)
    }

    pub fn sym_part(&self) -> Mat {
        (self + &self.transpose()).scale(0.5)
    }

    pub fn skew_part(&self) -> Mat {
        (self - &self.transpose()).scale(0.5)
    }

    pub fn dist(&self, other: &Mat) -> f64 {
        (self - other).frobenius_norm()
    }

    pub fn mat_vec(&self, v: &[f64]) -> Vec<f64> {
        let n = self.n;
        (0..n)
            .map(|i| {
                self.data[i * n..(i + 1) * n]
                    .iter()
                    .zip(v)
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect()
    }

    /// Returns the LU factorisation with partial pivoting as
    /// `(packed LU, permutation, sign)`, or `None` on an exactly zero pivot.
    fn lu(&self) -> Option<(Mat, Vec<usize>, f64)> {
        let n = self.n;
        let mut a = self.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut sign = 1.0;
        for k in 0..n {
            let (p, pmax) = (k..n)
                .map(|i| (i, a[(i, k)].abs()))
                .fold(
                    (k, -1.0),
                    |best, cur| if cur.1 > best.1 { cur } else { best },
                );
            if pmax == 0.0 {
                return None;
            }
            if p != k {
                for j in 0..n {
                    a.data.swap(k * n + j, p * n + j);
                }
                perm.swap(k, p);
                sign = -sign;
            }
            let piv = a[(k, k)];
            for i in k + 1..n {
                let f = a[(i, k)] / piv;
                a[(i, k)] = f;
                if f != 0.0 {
                    for j in k + 1..n {
                        let u = a[(k, j)];
                        a[(i, j)] -= f * u;
                    }
                }
            }
        }
        Some((a, perm, sign))
    }

    /// Determinant via LU with partial pivoting.
    pub fn det(&self) -> f64 {
        match self.lu() {
            None => 0.0,
            Some((lu, _, sign)) => (0..self.n).fold(sign, |d, i| d * lu[(i, i)]),
        }
    }

    pub fn inverse(&self) -> Result<Mat> {
        let n = self.n;
        let (lu, perm, _) = self.lu().ok_or(Error::Singular)?;
        let scale = self.max_abs();
        if (0..n).any(|i| lu[(i, i)].abs() <= f64::EPSILON * n as f64 * scale) {
            return Err(Error::Singular);
        }
        let mut inv = Mat::zeros(n);
        for col in 0..n {
            let mut x: Vec<f64> = perm
                .iter()
                .map(|&p| if p == col { 1.0 } else { 0.0 })
                .collect();
            for i in 0..n {
                for k in 0..i {
                    x[i] -= lu[(i, k)] * x[k];
                }
            }
            for i in (0..n).rev() {
                for k in i + 1..n {
                    x[i] -= lu[(i, k)] * x[k];
                }
                x[i] /= lu[(i, i)];
            }
            inv.set_column(col, &x);
        }
        Ok(inv)
    }

    fn check_same_order(&self, other: &Mat) -> Result<()> {
        if self.n != other.n {
            return Err(Error::Dimension(format!(
                "orders {} and {} differ",
                self.n, other.n
            )));
        }
        Ok(())
    }

    /// `‖MᵀM − I‖_F`.
    pub fn orthogonality_residual(&self) -> f64 {
        self.transpose().matmul(self).dist(&Mat::identity(self.n))
    }

    pub fn is_orthogonal(&self, tol: &Tolerances) -> bool {
        self.orthogonality_residual() <= tol.orth_tol
    }

    pub fn is_skew(&self, tol: &Tolerances) -> bool {
        (self + &self.transpose()).frobenius_norm() <= tol.orth_tol
    }

    pub fn is_symmetric(&self, tol: &Tolerances) -> bool {
        (self - &self.transpose()).frobenius_norm() <= tol.orth_tol
    }

    pub(crate) fn require_skew(&self, tol: &Tolerances, what: &str) -> Result<()> {
        if self.is_skew(tol) {
            Ok(())
        } else {
            Err(Error::Precondition(format!(
                "{what} is not skew-symmetric (‖M+Mᵀ‖_F = {:.3e})",
                (self + &self.transpose()).frobenius_norm()
            )))
        }
    }

    pub(crate) fn require_orthogonal(&self, tol: &Tolerances, what: &str) -> Result<()> {
        let r = self.orthogonality_residual();
        if r <= tol.orth_tol {
            Ok(())
        } else {
            Err(Error::Precondition(format!(
                "{what} is not orthogonal (‖MᵀM−I‖_F = {r:.3e})"
            )))
        }
    }

    /// Checks membership of SO(n): orthogonal with positive determinant.
    pub(crate) fn require_special_orthogonal(&self, tol: &Tolerances, what: &str) -> Result<()> {
        self.require_orthogonal(tol, what)?;
        if self.det() <= 0.0 {
            return Err(Error::Precondition(format!(
                "{what} has negative determinant"
            )));
        }
        Ok(())
    }
}

/// Frobenius inner product `tr(VᵀW)`.
pub fn frobenius_inner(v: &Mat, w: &Mat) -> Result<f64> {
    v.check_same_order(w)?;
    Ok(v.data.iter().zip(&w.data).map(|(a, b)| a * b).sum())
}

/// Trace metric `tr(G⁻¹ V G⁻¹ W)` at the base point `G`.
pub fn trace_metric(g: &Mat, v: &Mat, w: &Mat) -> Result<f64> {
    g.check_same_order(v)?;
    g.check_same_order(w)?;
    let gi = g.inverse()?;
    Ok(gi.matmul(v).matmul(&gi).matmul(w).trace())
}

impl Index<(usize, usize)> for Mat {
    type Output = f64;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.n + j]
    }
}

impl IndexMut<(usize, usize)> for Mat {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.n + j]
    }
}

impl Add for &Mat {
    type Output = Mat;

    fn add(self, rhs: &Mat) -> Mat {
        assert_eq!(self.n, rhs.n, "add order mismatch");
        Mat {
            n: self.n,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &Mat {
    type Output = Mat;

    fn sub(self, rhs: &Mat) -> Mat {
        assert_eq!(self.n, rhs.n, "sub order mismatch");
        Mat {
            n: self.n,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl AddAssign<&Mat> for Mat {
    fn add_assign(&mut self, rhs: &Mat) {
        self.add_scaled(1.0, rhs);
    }
}

impl SubAssign<&Mat> for Mat {
    fn sub_assign(&mut self, rhs: &Mat) {
        self.add_scaled(-1.0, rhs);
    }
}

impl Mul for &Mat {
    type Output = Mat;

    fn mul(self, rhs: &Mat) -> Mat {
        self.matmul(rhs)
    }
}

impl Mul<f64> for &Mat {
    type Output = Mat;

    fn mul(self, s: f64) -> Mat {
        self.scale(s)
    }
}

impl Neg for &Mat {
    type Output = Mat;

    fn neg(self) -> Mat {
        self.scale(-1.0)
    }
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Mat({}x{}) [", self.n, self.n)?;
        for i in 0..self.n {
            let row: Vec<String> = (0..self.n)
                .map(|j| format!("{:>12.6}", self[(i, j)]))
                .collect();
            writeln!(f, "  {}", row.join(" "))?;
        }
        write!(f, "]")
    }
}
