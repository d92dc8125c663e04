//! Unique SVD of a skew-symmetric matrix, `A = Σ ζ_j A_j` with the factors
//! forming an SVD system (`A_j³ = −A_j`, `A_j A_h = 0` for `j ≠ h`), and the
//! closed-form exponential it yields.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::matcore::{jacobi, Mat};
use crate::tol::Tolerances;

/// Distinct positive singular values (descending) with their skew factors.
///
/// `mults[j]` is half the rank of `factors[j]`. An empty system represents
/// the zero matrix.
#[derive(Debug, Clone, Serialize)]
pub struct SvdSystem {
    n: usize,
    zetas: Vec<f64>,
    factors: Vec<Mat>,
    mults: Vec<usize>,
}

/// Largest violations of the SVD-system conditions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AxiomResiduals {
    /// `max_j ‖A_j³ + A_j‖_F`
    pub cube: f64,
    /// `max_{j≠h} ‖A_j A_h‖_F`
    pub cross: f64,
    /// `max_j ‖A_j + A_jᵀ‖_F`
    pub skew: f64,
}

impl AxiomResiduals {
    pub fn max(&self) -> f64 {
        self.cube.max(self.cross).max(self.skew)
    }
}

impl SvdSystem {
    /// System with no factors, standing for the zero matrix of order `n`.
    pub fn empty(n: usize) -> Self {
        SvdSystem {
            n,
            zetas: Vec::new(),
            factors: Vec::new(),
            mults: Vec::new(),
        }
    }

    /// Assembles a system from given values and factors, checking the
    /// axioms against `recon_tol`. Values need not be sorted or positive;
    /// this is also used for lattice coefficients.
    pub fn from_parts(zetas: Vec<f64>, factors: Vec<Mat>, tol: &Tolerances) -> Result<Self> {
        if zetas.len() != factors.len() {
            return Err(Error::Dimension(format!(
                "{} values for {} factors",
                zetas.len(),
                factors.len()
            )));
        }
        let n = match factors.first() {
            Some(f) => f.order(),
            None => return Err(Error::EmptyDecomposition),
        };
        if factors.iter().any(|f| f.order() != n) {
            return Err(Error::Dimension("factors have different orders".into()));
        }
        let mults = factors.iter().map(half_rank).collect::<Vec<_>>();
        if mults.contains(&0) {
            return Err(Error::Precondition("SVD-system factor is zero".into()));
        }
        let sys = SvdSystem {
            n,
            zetas,
            factors,
            mults,
        };
        let res = sys.axiom_residuals();
        if res.max() > tol.recon_tol {
            return Err(Error::Precondition(format!(
                "factors do not form an SVD system (cube {:.3e}, cross {:.3e}, skew {:.3e})",
                res.cube, res.cross, res.skew
            )));
        }
        Ok(sys)
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn zetas(&self) -> &[f64] {
        &self.zetas
    }

    pub fn factors(&self) -> &[Mat] {
        &self.factors
    }

    pub fn mults(&self) -> &[usize] {
        &self.mults
    }

    pub fn len(&self) -> usize {
        self.zetas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.zetas.is_empty()
    }

    /// `Σ ζ_j A_j`.
    pub fn reconstruct(&self) -> Mat {
        let mut a = Mat::zeros(self.n);
        for (z, f) in self.zetas.iter().zip(&self.factors) {
            a.add_scaled(*z, f);
        }
        a
    }

    pub fn axiom_residuals(&self) -> AxiomResiduals {
        let mut out = AxiomResiduals {
            cube: 0.0,
            cross: 0.0,
            skew: 0.0,
        };
        for (j, aj) in self.factors.iter().enumerate() {
            let sq = aj.matmul(aj);
            let mut cube = sq.matmul(aj);
            cube += aj;
            out.cube = out.cube.max(cube.frobenius_norm());
            out.skew = out.skew.max((aj + &aj.transpose()).frobenius_norm());
            for (h, ah) in self.factors.iter().enumerate() {
                if h != j {
                    out.cross = out.cross.max(aj.matmul(ah).frobenius_norm());
                }
            }
        }
        out
    }

    /// `(rank(A), tr(A²))` read off the system: `rank = 2Σm_k`,
    /// `tr(A²) = −2Σ m_k ζ_k²`.
    pub fn eig_summary(&self) -> (usize, f64) {
        let rank = 2 * self.mults.iter().sum::<usize>();
        let tr_sq = -2.0
            * self
                .mults
                .iter()
                .zip(&self.zetas)
                .map(|(&m, z)| m as f64 * z * z)
                .sum::<f64>();
        (rank, tr_sq)
    }

    /// Rodrigues formula `I + Σ [sin ζ_j A_j + (1 − cos ζ_j) A_j²]`.
    pub fn rodrigues_exp(&self) -> Mat {
        let (sym, skew) = self.sym_skew_parts();
        &sym + &skew
    }

    /// Symmetric part `I + Σ (1 − cos ζ_j) A_j²` and skew part
    /// `Σ sin ζ_j A_j` of the exponential.
    pub fn sym_skew_parts(&self) -> (Mat, Mat) {
        self.parts_at(1.0)
    }

    /// The two parts of `exp(t · Σ ζ_j A_j)`.
    pub(crate) fn parts_at(&self, t: f64) -> (Mat, Mat) {
        let mut sym = Mat::identity(self.n);
        let mut skew = Mat::zeros(self.n);
        for (z, a) in self.zetas.iter().zip(&self.factors) {
            let (s, c) = (t * z).sin_cos();
            sym.add_scaled(1.0 - c, &a.matmul(a));
            skew.add_scaled(s, a);
        }
        (sym, skew)
    }
}

/// `rank(A)/2` for a factor with `A² = −P`, read from `−tr(A²) = rank`.
fn half_rank(a: &Mat) -> usize {
    let r = -a.matmul(a).trace();
    (r / 2.0).round().max(0.0) as usize
}

/// Decomposes a nonzero skew-symmetric matrix into its SVD system.
///
/// Eigenvalues of `−A²` are clustered in singular-value space; a cluster
/// with projector `P_j` yields `A_j = A P_j / ζ_j`, skew-symmetrised.
pub fn decompose(a: &Mat, tol: &Tolerances) -> Result<SvdSystem> {
    a.require_skew(tol, "decompose input")?;
    let a = a.skew_part();
    let n = a.order();
    let norm = a.frobenius_norm();
    if norm == 0.0 {
        return Err(Error::EmptyDecomposition);
    }
    let neg_sq = (-&a.matmul(&a)).sym_part();
    let eig = jacobi(&neg_sq);
    let zero_cut = (tol.cluster_tol * norm).powi(2);
    let sv: Vec<f64> = eig
        .values
        .iter()
        .take_while(|&&l| l >= zero_cut)
        .map(|l| l.sqrt())
        .collect();
    if sv.is_empty() {
        return Err(Error::EmptyDecomposition);
    }
    let gap = tol.cluster_tol * (1.0 + sv[0]);

    let mut clusters: Vec<Vec<usize>> = vec![vec![0]];
    for i in 1..sv.len() {
        if sv[i - 1] - sv[i] <= gap {
            clusters.last_mut().unwrap().push(i);
        } else {
            clusters.push(vec![i]);
        }
    }

    let mut sys = SvdSystem::empty(n);
    for c in clusters {
        if c.len() % 2 == 1 {
            return Err(Error::Numerical(format!(
                "singular value {:.3e} has odd multiplicity {}",
                sv[c[0]],
                c.len()
            )));
        }
        let zeta = c.iter().map(|&i| sv[i]).sum::<f64>() / c.len() as f64;
        let mut proj = Mat::zeros(n);
        for &i in &c {
            let q = eig.vectors.column(i);
            for r in 0..n {
                for s in 0..n {
                    proj[(r, s)] += q[r] * q[s];
                }
            }
        }
        let factor = a.matmul(&proj).scale(1.0 / zeta).skew_part();
        sys.zetas.push(zeta);
        sys.factors.push(factor);
        sys.mults.push(c.len() / 2);
    }
    Ok(sys)
}
