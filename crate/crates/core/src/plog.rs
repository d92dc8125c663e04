//! Skew-symmetric principal logarithms of `R ∈ SO(n)` (logarithms whose
//! eigenvalues have modulus at most π) and the structure of their set.
//!
//! When −1 is not an eigenvalue the principal logarithm is unique. When −1
//! has multiplicity `2μ`, every principal logarithm is
//! `πW + Σ_{j≥2} θ_j B_j` with `W = K·diag(M, 0)·Kᵀ` and `M` a
//! skew-symmetric orthogonal matrix of order `2μ`; the set has two
//! components told apart by the sign of `Pf(M)`.

use std::f64::consts::PI;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::canon::{canonical_form, CanonicalForm};
use crate::error::{Error, Result};
use crate::loglattice::is_generic_form;
use crate::matcore::{pfaffian, Mat};
use crate::sampling::haar_orthogonal_with_det;
use crate::skewsvd::SvdSystem;
use crate::tol::Tolerances;

/// Shape of the set of principal logarithms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Structure {
    Unique,
    TwoPoints,
    /// Diffeomorphic to the skew-symmetric orthogonal matrices of order
    /// `2μ`: dimension `μ(μ−1)`, two components.
    Manifold {
        mu: usize,
        dim: usize,
        components: usize,
    },
}

impl Structure {
    pub fn from_mu(mu: usize) -> Self {
        match mu {
            0 => Structure::Unique,
            1 => Structure::TwoPoints,
            mu => Structure::Manifold {
                mu,
                dim: mu * (mu - 1),
                components: 2,
            },
        }
    }

    /// Half the multiplicity of the eigenvalue −1.
    pub fn mu(&self) -> usize {
        match *self {
            Structure::Unique => 0,
            Structure::TwoPoints => 1,
            Structure::Manifold { mu, .. } => mu,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Structure::Unique => "Unique",
            Structure::TwoPoints => "TwoPoints",
            Structure::Manifold { .. } => "Manifold",
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PlogDescriptor {
    /// One principal logarithm, `Σ θ_k B_k`.
    pub b: Mat,
    pub system: SvdSystem,
    pub structure: Structure,
    /// `B₁²`, present iff θ₁ = π; it is the same for every principal log.
    pub b1_squared: Option<Mat>,
    #[serde(skip)]
    pub canonical: CanonicalForm,
}

impl PlogDescriptor {
    /// `B − π B₁`: the part shared by all principal logs when θ₁ = π.
    fn shared_part(&self) -> Mat {
        let mut rest = self.b.clone();
        if self.structure != Structure::Unique {
            rest.add_scaled(-PI, &self.system.factors()[0]);
        }
        rest
    }

    /// `tr(B²) = −2 Σ m_k θ_k²`.
    pub fn trace_sq(&self) -> f64 {
        -self.canonical.sum_sq_angles()
    }
}

/// Builds the principal logarithm from the canonical form and classifies
/// the set of all principal logarithms.
pub fn principal_log(r: &Mat, tol: &Tolerances) -> Result<PlogDescriptor> {
    let cf = canonical_form(r, tol)?;
    from_canonical(r, cf, tol)
}

pub(crate) fn from_canonical(
    r: &Mat,
    cf: CanonicalForm,
    tol: &Tolerances,
) -> Result<PlogDescriptor> {
    let n = cf.n;
    let factors: Vec<Mat> = (0..cf.thetas.len())
        .map(|k| cf.plane_factor(cf.first_plane(k), cf.mults[k]))
        .collect();
    let system = if factors.is_empty() {
        SvdSystem::empty(n)
    } else {
        SvdSystem::from_parts(cf.thetas.clone(), factors, tol)?
    };
    let b = system.reconstruct();
    let (has_pi, mult) = cf.has_minus_one(tol);
    let structure = Structure::from_mu(mult / 2);

    let b1_squared = if has_pi {
        // ¼(R+Rᵀ) − ½I − ½ Σ_{j≥2} (1 − cos θ_j) B_j²
        let mut sq = (r + &r.transpose()).scale(0.25);
        sq.add_scaled(-0.5, &Mat::identity(n));
        for (th, bj) in cf.thetas.iter().zip(system.factors()).skip(1) {
            sq.add_scaled(-0.5 * (1.0 - th.cos()), &bj.matmul(bj));
        }
        let b1 = &system.factors()[0];
        let direct = b1.matmul(b1);
        let gap = sq.dist(&direct);
        if gap > tol.recon_tol {
            return Err(Error::Numerical(format!(
                "B₁² formula disagrees with B₁·B₁ by {gap:.3e}"
            )));
        }
        Some(sq)
    } else {
        None
    };

    Ok(PlogDescriptor {
        b,
        system,
        structure,
        b1_squared,
        canonical: cf,
    })
}

/// Every principal logarithm of a generic `R`: one, or the pair `±πB₁ + …`
/// when −1 is an eigenvalue.
pub fn all_principal_logs_generic(r: &Mat, tol: &Tolerances) -> Result<Vec<Mat>> {
    let desc = principal_log(r, tol)?;
    if !is_generic_form(&desc.canonical) {
        return Err(Error::Domain(
            "R is not generic (repeated rotation angles or a large ±1 eigenspace); \
             use sample_aplog to explore its principal logarithms"
                .into(),
        ));
    }
    Ok(principal_logs_listing(&desc))
}

/// The listable principal logs: `[B]` when unique, `[B, B − 2πB₁]` for two points.
pub(crate) fn principal_logs_listing(desc: &PlogDescriptor) -> Vec<Mat> {
    match desc.structure {
        Structure::Unique => vec![desc.b.clone()],
        _ => {
            let mut other = desc.b.clone();
            other.add_scaled(-2.0 * PI, &desc.system.factors()[0]);
            vec![desc.b.clone(), other]
        }
    }
}

/// One sampled principal logarithm together with the `2μ × 2μ` block `M`
/// of its π-part, `W = K·diag(M, 0)·Kᵀ`.
#[derive(Debug, Clone, Serialize)]
pub struct AplogSample {
    pub log: Mat,
    pub w_block: Mat,
}

/// Draws `count` principal logarithms of `R` (−1 must be an eigenvalue).
///
/// Sample `i` uses an orthogonal `Q` of determinant `+1` for even `i` and
/// `−1` for odd `i`, so both components appear as soon as `count ≥ 2`.
/// With μ = 1 the set is two points and these are returned alternately.
pub fn sample_aplog(
    r: &Mat,
    count: usize,
    seed: u64,
    tol: &Tolerances,
) -> Result<Vec<AplogSample>> {
    let desc = principal_log(r, tol)?;
    let mu = desc.structure.mu();
    if mu == 0 {
        return Err(Error::Domain("−1 is not an eigenvalue of R".into()));
    }
    let cf = &desc.canonical;
    let n = cf.n;
    let rest = desc.shared_part();
    let j_mu = Mat::block_diag(&vec![Mat::e0(); mu]);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut out = Vec::with_capacity(count);
    for i in 0..count {
        let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
        let m = if mu == 1 {
            Mat::e0().scale(sign)
        } else {
            haar_orthogonal_with_det(2 * mu, sign, &mut rng)
                .congruence(&j_mu)
                .skew_part()
        };
        let mut padded = Mat::zeros(n);
        padded.set_block(0, &m);
        let w = cf.k.congruence(&padded);
        let mut log = rest.clone();
        log.add_scaled(PI, &w);
        out.push(AplogSample { log, w_block: m });
    }
    Ok(out)
}

/// Component of a skew-symmetric orthogonal block: the sign of its Pfaffian.
pub fn classify_component(w_block: &Mat, tol: &Tolerances) -> Result<i8> {
    w_block.require_skew(tol, "W block")?;
    w_block.require_orthogonal(tol, "W block")?;
    let pf = pfaffian(w_block, tol)?;
    Ok(if pf > 0.0 { 1 } else { -1 })
}
