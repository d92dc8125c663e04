//! Canonical angle-block factorisation of a special orthogonal matrix:
//! `R = K · diag(rot(θ₁)×m₁, …, rot(θ_p)×m_p, I_{n−2m}) · Kᵀ`.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::matcore::{jacobi, Mat};
use crate::tol::Tolerances;

/// Spread (in cos θ) below which eigenvalues of the symmetric part are
/// grouped before the finer splits.
const COARSE_COS_GAP: f64 = 1e-6;

#[derive(Debug, Clone, Serialize)]
pub struct CanonicalForm {
    pub n: usize,
    /// Distinct angles in `(0, π]`, descending.
    pub thetas: Vec<f64>,
    pub mults: Vec<usize>,
    /// Dimension of the fixed space, `n − 2Σm_k`.
    pub fixed_dim: usize,
    /// Orthogonal conjugator; its first `2m₁` columns span the θ₁ planes,
    /// and so on, with the fixed space last.
    pub k: Mat,
}

impl CanonicalForm {
    /// Total number of rotation planes `m = Σ m_k`.
    pub fn planes(&self) -> usize {
        self.mults.iter().sum()
    }

    /// The block-diagonal middle factor.
    pub fn block_form(&self) -> Mat {
        let mut blocks = Vec::with_capacity(self.planes() + 1);
        for (&th, &m) in self.thetas.iter().zip(&self.mults) {
            blocks.extend(std::iter::repeat_n(Mat::rot(th), m));
        }
        if self.fixed_dim > 0 {
            blocks.push(Mat::identity(self.fixed_dim));
        }
        Mat::block_diag(&blocks)
    }

    pub fn reconstruct(&self) -> Mat {
        self.k.congruence(&self.block_form())
    }

    /// `K · F · Kᵀ` where `F` carries `E0` on planes `first..first+count`.
    pub(crate) fn plane_factor(&self, first: usize, count: usize) -> Mat {
        let mut f = Mat::zeros(self.n);
        for p in first..first + count {
            f.set_block(2 * p, &Mat::e0());
        }
        self.k.congruence(&f)
    }

    /// Index of the first plane of angle group `k`.
    pub(crate) fn first_plane(&self, group: usize) -> usize {
        self.mults[..group].iter().sum()
    }

    /// `(θ₁ = π, 2m₁)`, or `(false, 0)` when −1 is not an eigenvalue.
    pub fn has_minus_one(&self, tol: &Tolerances) -> (bool, usize) {
        match self.thetas.first() {
            Some(&t) if (t - PI).abs() <= tol.pi_tol => (true, 2 * self.mults[0]),
            _ => (false, 0),
        }
    }

    /// `Σ 2 m_k θ_k²`, i.e. `−tr(B²)` of any principal logarithm.
    pub fn sum_sq_angles(&self) -> f64 {
        self.thetas
            .iter()
            .zip(&self.mults)
            .map(|(t, &m)| 2.0 * m as f64 * t * t)
            .sum()
    }
}

/// Free-function form of [`CanonicalForm::has_minus_one`].
pub fn has_minus_one(cf: &CanonicalForm, tol: &Tolerances) -> (bool, usize) {
    cf.has_minus_one(tol)
}

type Basis = Vec<Vec<f64>>;

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// `Bᵀ M B` for an orthonormal basis `B` given as columns.
fn restrict(m: &Mat, basis: &Basis) -> Mat {
    let d = basis.len();
    let images: Basis = basis.iter().map(|b| m.mat_vec(b)).collect();
    let mut r = Mat::zeros(d);
    for i in 0..d {
        for j in 0..d {
            r[(i, j)] = dot(&basis[i], &images[j]);
        }
    }
    r.sym_part()
}

/// Splits `basis` into eigen-groups of `Bᵀ M B`, breaking wherever
/// consecutive values of `key(λ)` differ by more than `gap`.
fn split(m: &Mat, basis: &Basis, key: impl Fn(f64) -> f64, gap: f64) -> Vec<Basis> {
    if basis.len() <= 1 {
        return vec![basis.clone()];
    }
    let eig = jacobi(&restrict(m, basis));
    let d = basis.len();
    let n = basis[0].len();
    let keys: Vec<f64> = eig.values.iter().map(|&l| key(l)).collect();
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&i, &j| keys[j].total_cmp(&keys[i]).then(i.cmp(&j)));

    let mut groups: Vec<Basis> = Vec::new();
    let mut prev = f64::NAN;
    for &c in &order {
        let coeffs = eig.vectors.column(c);
        let mut v = vec![0.0; n];
        for (b, w) in basis.iter().zip(&coeffs) {
            for (vi, bi) in v.iter_mut().zip(b) {
                *vi += w * bi;
            }
        }
        if groups.is_empty() || (prev - keys[c]).abs() > gap {
            groups.push(Vec::new());
        }
        groups.last_mut().unwrap().push(v);
        prev = keys[c];
    }
    groups
}

struct AngleGroup {
    theta: f64,
    basis: Basis,
}

/// Angle read off a group via `cos = tr(BᵀSB)/d`, `sin = ‖N B‖_F/√d`.
fn group_angle(s: &Mat, nsk: &Mat, basis: &Basis) -> f64 {
    let d = basis.len() as f64;
    let c = basis.iter().map(|b| dot(b, &s.mat_vec(b))).sum::<f64>() / d;
    let sn = basis
        .iter()
        .map(|b| dot(&nsk.mat_vec(b), &nsk.mat_vec(b)))
        .sum::<f64>()
        .sqrt()
        / d.sqrt();
    sn.atan2(c)
}

/// Orthonormalises `vs` against `against` and keeps the `keep` strongest
/// directions (pivoted Gram–Schmidt).
fn deflate(vs: &Basis, against: &[&[f64]], keep: usize) -> Basis {
    let mut rest: Basis = vs
        .iter()
        .map(|v| {
            let mut v = v.clone();
            for a in against {
                let p = dot(&v, a);
                v.iter_mut().zip(a.iter()).for_each(|(x, y)| *x -= p * y);
            }
            v
        })
        .collect();
    let mut out = Vec::with_capacity(keep);
    while out.len() < keep && !rest.is_empty() {
        let (idx, _) =
            rest.iter()
                .enumerate()
                .map(|(i, v)| (i, norm(v)))
                .fold(
                    (0, -1.0),
                    |best, cur| if cur.1 > best.1 { cur } else { best },
                );
        let mut q = rest.swap_remove(idx);
        let nq = norm(&q);
        q.iter_mut().for_each(|x| *x /= nq);
        for v in rest.iter_mut() {
            let p = dot(v, &q);
            v.iter_mut().zip(&q).for_each(|(x, y)| *x -= p * y);
        }
        out.push(q);
    }
    out
}

/// Orients the planes of an angle group so each block equals `rot(θ)`,
/// using `k₂ = −N k₁ / ‖N k₁‖`.
fn orient_planes(nsk: &Mat, basis: &Basis) -> Result<Basis> {
    let mut remaining = basis.clone();
    let mut out = Vec::with_capacity(basis.len());
    while remaining.len() >= 2 {
        let k1 = remaining[0].clone();
        let mut k2: Vec<f64> = nsk.mat_vec(&k1).iter().map(|x| -x).collect();
        // keep k2 inside the group subspace and orthogonal to k1
        let coeffs: Vec<f64> = remaining.iter().map(|b| dot(b, &k2)).collect();
        k2 = vec![0.0; k1.len()];
        for (b, c) in remaining.iter().zip(&coeffs) {
            k2.iter_mut().zip(b).for_each(|(x, y)| *x += c * y);
        }
        let p = dot(&k2, &k1);
        k2.iter_mut().zip(&k1).for_each(|(x, y)| *x -= p * y);
        let nk2 = norm(&k2);
        if nk2 == 0.0 {
            return Err(Error::Numerical(
                "skew part vanishes on a rotation plane".into(),
            ));
        }
        k2.iter_mut().for_each(|x| *x /= nk2);
        let keep = remaining.len() - 2;
        remaining = deflate(&remaining, &[&k1, &k2], keep);
        out.push(k1);
        out.push(k2);
    }
    Ok(out)
}

/// Computes the canonical form of `R ∈ SO(n)`.
pub fn canonical_form(r: &Mat, tol: &Tolerances) -> Result<CanonicalForm> {
    r.require_special_orthogonal(tol, "canonical_form input")?;
    let n = r.order();
    let s = r.sym_part();
    let nsk = r.skew_part();
    let neg_n2 = (-&nsk.matmul(&nsk)).sym_part();

    let full: Basis = (0..n)
        .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect();
    let coarse_gap = COARSE_COS_GAP.max(100.0 * tol.cluster_tol);

    let mut groups: Vec<AngleGroup> = Vec::new();
    for coarse in split(&s, &full, |c| c, coarse_gap) {
        for by_sin in split(&neg_n2, &coarse, |l| l.max(0.0).sqrt(), tol.cluster_tol) {
            for fine in split(&s, &by_sin, |c| c, tol.cluster_tol) {
                let theta = group_angle(&s, &nsk, &fine);
                groups.push(AngleGroup { theta, basis: fine });
            }
        }
    }

    groups.sort_by(|a, b| b.theta.total_cmp(&a.theta));
    let mut merged: Vec<AngleGroup> = Vec::new();
    for g in groups {
        match merged.last_mut() {
            Some(last) if (last.theta - g.theta).abs() <= tol.cluster_tol => {
                last.basis.extend(g.basis);
            }
            _ => merged.push(g),
        }
    }

    let mut thetas = Vec::new();
    let mut mults = Vec::new();
    let mut columns: Basis = Vec::with_capacity(n);
    let mut fixed: Basis = Vec::new();
    for g in merged {
        let theta = group_angle(&s, &nsk, &g.basis);
        let d = g.basis.len();
        if theta <= tol.pi_tol {
            fixed.extend(g.basis);
            continue;
        }
        if d % 2 == 1 {
            return Err(Error::Numerical(format!(
                "angle {theta} has odd eigenspace dimension {d}"
            )));
        }
        if theta >= PI - tol.pi_tol {
            thetas.push(PI);
            columns.extend(g.basis);
        } else {
            thetas.push(theta);
            columns.extend(orient_planes(&nsk, &g.basis)?);
        }
        mults.push(d / 2);
    }
    let fixed_dim = fixed.len();
    columns.extend(fixed);

    let mut k = Mat::zeros(n);
    for (j, c) in columns.iter().enumerate() {
        k.set_column(j, c);
    }
    Ok(CanonicalForm {
        n,
        thetas,
        mults,
        fixed_dim,
        k,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    fn t(n: usize) -> Tolerances {
        Tolerances::for_order(n)
    }

    #[test]
    fn identity() {
        let cf = canonical_form(&Mat::identity(3), &t(3)).unwrap();
        assert!(cf.thetas.is_empty());
        assert_eq!(cf.fixed_dim, 3);
        assert_eq!(cf.k, Mat::identity(3));
        assert_eq!(cf.has_minus_one(&t(3)), (false, 0));
    }

    #[test]
    fn quarter_turn() {
        let r = Mat::rot(FRAC_PI_2);
        let cf = canonical_form(&r, &t(2)).unwrap();
        assert_eq!(cf.mults, vec![1]);
        assert!((cf.thetas[0] - FRAC_PI_2).abs() < 1e-15);
        assert_eq!(cf.fixed_dim, 0);
        assert!(cf.reconstruct().dist(&r) < 1e-15);
        assert_eq!(cf.has_minus_one(&t(2)), (false, 0));
    }

    #[test]
    fn minus_identity() {
        let cf = canonical_form(&-&Mat::identity(4), &t(4)).unwrap();
        assert_eq!(cf.thetas, vec![PI]);
        assert_eq!(cf.mults, vec![2]);
        assert_eq!(cf.fixed_dim, 0);
        assert_eq!(cf.has_minus_one(&t(4)), (true, 4));
        let cf2 = canonical_form(&-&Mat::identity(2), &t(2)).unwrap();
        assert_eq!(cf2.has_minus_one(&t(2)), (true, 2));
    }

    #[test]
    fn minus_one_with_rotation() {
        let r = Mat::block_diag(&[-&Mat::identity(2), Mat::rot(1.0)]);
        let cf = canonical_form(&r, &t(4)).unwrap();
        assert_eq!(cf.has_minus_one(&t(4)), (true, 2));
        assert_eq!(cf.thetas.len(), 2);
        assert!((cf.thetas[1] - 1.0).abs() < 1e-14);
        assert!(cf.reconstruct().dist(&r) < 1e-14);
    }

    #[test]
    fn conjugated_mixed_spectrum() {
        let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(11);
        let q = crate::sampling::haar_orthogonal(7, &mut rng);
        let core = Mat::block_diag(&[
            Mat::rot(2.5),
            Mat::rot(2.5),
            Mat::rot(0.4),
            Mat::identity(1),
        ]);
        let r = q.congruence(&core);
        let cf = canonical_form(&r, &t(7)).unwrap();
        assert_eq!(cf.mults, vec![2, 1]);
        assert_eq!(cf.fixed_dim, 1);
        assert!((cf.thetas[0] - 2.5).abs() < 1e-12);
        assert!((cf.thetas[1] - 0.4).abs() < 1e-12);
        assert!(cf.reconstruct().dist(&r) < 1e-12);
        assert!(cf.k.is_orthogonal(&t(7)));
    }

    #[test]
    fn close_angles_near_pi_are_separated() {
        // cos differs by ~1.5e-8 here; the skew part resolves them
        let r = Mat::block_diag(&[Mat::rot(PI - 1e-4), Mat::rot(PI - 2e-4)]);
        let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(5);
        let q = crate::sampling::haar_orthogonal(4, &mut rng);
        let r = q.congruence(&r);
        let cf = canonical_form(&r, &t(4)).unwrap();
        assert_eq!(cf.mults, vec![1, 1]);
        assert!((cf.thetas[0] - (PI - 1e-4)).abs() < 1e-11);
        assert!((cf.thetas[1] - (PI - 2e-4)).abs() < 1e-11);
        assert!(cf.reconstruct().dist(&r) < 1e-12);
    }

    #[test]
    fn rejects_improper_and_non_orthogonal() {
        let refl = Mat::diag(&[1.0, -1.0]);
        assert!(matches!(
            canonical_form(&refl, &t(2)),
            Err(Error::Precondition(_))
        ));
        assert!(matches!(
            canonical_form(&Mat::identity(2).scale(2.0), &t(2)),
            Err(Error::Precondition(_))
        ));
    }
}
