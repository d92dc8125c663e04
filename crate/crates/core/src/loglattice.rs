//! All skew-symmetric logarithms of `R ∈ SO(n)`.
//!
//! Any logarithm has the form `B + 2π Σ l_j C_j` with `B` principal and the
//! `C_j` an SVD system commuting with `B`; [`verify_general_form`] extracts
//! such a witness. When every rotation angle is simple, −1 has multiplicity
//! at most 2 and +1 at most 2, the logarithms are exactly
//! `B + 2π Σ r_h B_h`, `r ∈ ℤ^⌊n/2⌋`, which [`enumerate_logs`] lists inside
//! a Frobenius ball.

use std::f64::consts::{PI, SQRT_2};

use serde::Serialize;

use crate::canon::{canonical_form, CanonicalForm};
use crate::error::{Error, Result};
use crate::matcore::{exp_oracle, Mat};
use crate::plog::{from_canonical, principal_logs_listing};
use crate::skewsvd::{decompose, SvdSystem};
use crate::tol::Tolerances;

/// Upper bound on lattice points visited by one enumeration.
const MAX_BOX_POINTS: u128 = 5_000_000;

pub(crate) fn is_generic_form(cf: &CanonicalForm) -> bool {
    cf.mults.iter().all(|&m| m == 1) && cf.fixed_dim <= 2
}

/// True when all angle multiplicities are 1 and the fixed space has
/// dimension at most 2.
pub fn is_generic(r: &Mat, tol: &Tolerances) -> Result<bool> {
    Ok(is_generic_form(&canonical_form(r, tol)?))
}

/// One lattice point `base + 2π Σ r_h directions[h]`.
#[derive(Debug, Clone, Serialize)]
pub struct LatticeLog {
    pub base: Mat,
    pub directions: Vec<Mat>,
    pub coeffs: Vec<i64>,
    /// The materialised logarithm.
    pub log: Mat,
    /// `‖log‖_F`.
    pub norm: f64,
}

/// Lattice generators of a generic `R`: one or two principal bases, the
/// angles of the first base and the `⌊n/2⌋` unit directions.
#[derive(Debug, Clone)]
struct Lattice {
    bases: Vec<(Mat, Vec<f64>)>,
    directions: Vec<Mat>,
}

fn lattice(r: &Mat, tol: &Tolerances) -> Result<Lattice> {
    let cf = canonical_form(r, tol)?;
    if !is_generic_form(&cf) {
        return Err(Error::Domain(
            "R is not generic; its logarithms are not a lattice (use sample_aplog)".into(),
        ));
    }
    let p = cf.thetas.len();
    let mut directions: Vec<Mat> = (0..p).map(|h| cf.plane_factor(h, 1)).collect();
    let mut angles = cf.thetas.clone();
    if cf.fixed_dim == 2 {
        // zero-angle direction on the fixed plane
        directions.push(cf.plane_factor(p, 1));
        angles.push(0.0);
    }
    let desc = from_canonical(r, cf, tol)?;
    let listing = principal_logs_listing(&desc);
    let mut bases = vec![(listing[0].clone(), angles.clone())];
    if listing.len() == 2 {
        let mut flipped = angles;
        flipped[0] = -PI;
        bases.push((listing[1].clone(), flipped));
    }
    Ok(Lattice { bases, directions })
}

/// Integer range of `r` with `|a + 2πr| ≤ bound`.
fn coeff_range(a: f64, bound: f64) -> (i64, i64) {
    let lo = ((-bound - a) / (2.0 * PI)).ceil() as i64;
    let hi = ((bound - a) / (2.0 * PI)).floor() as i64;
    (lo, hi)
}

/// Lattice logarithms of a generic `R` with `‖A‖_F ≤ radius`, ascending by
/// norm (ties broken by coefficients).
pub fn enumerate_logs(r: &Mat, radius: f64, tol: &Tolerances) -> Result<Vec<LatticeLog>> {
    if !(radius.is_finite() && radius >= 0.0) {
        return Err(Error::Domain(format!(
            "radius must be finite and ≥ 0, got {radius}"
        )));
    }
    let lat = lattice(r, tol)?;
    let q = lat.directions.len();
    let bound = radius / SQRT_2;

    let mut found: Vec<LatticeLog> = Vec::new();
    for (base, angles) in &lat.bases {
        let ranges: Vec<(i64, i64)> = angles.iter().map(|&a| coeff_range(a, bound)).collect();
        if ranges.iter().any(|(lo, hi)| lo > hi) {
            continue;
        }
        let points: u128 = ranges
            .iter()
            .map(|(lo, hi)| (hi - lo + 1) as u128)
            .product();
        if points > MAX_BOX_POINTS {
            return Err(Error::Domain(format!(
                "radius {radius} spans {points} lattice candidates; reduce it"
            )));
        }
        let mut coeffs: Vec<i64> = ranges.iter().map(|r| r.0).collect();
        loop {
            let sq: f64 = angles
                .iter()
                .zip(&coeffs)
                .map(|(a, &c)| {
                    let x = a + 2.0 * PI * c as f64;
                    2.0 * x * x
                })
                .sum();
            let norm = sq.sqrt();
            if norm <= radius {
                let mut log = base.clone();
                for (d, &c) in lat.directions.iter().zip(&coeffs) {
                    if c != 0 {
                        log.add_scaled(2.0 * PI * c as f64, d);
                    }
                }
                found.push(LatticeLog {
                    base: base.clone(),
                    directions: lat.directions.clone(),
                    coeffs: coeffs.clone(),
                    log,
                    norm,
                });
            }
            // odometer over the box
            let mut h = 0;
            while h < q {
                if coeffs[h] < ranges[h].1 {
                    coeffs[h] += 1;
                    break;
                }
                coeffs[h] = ranges[h].0;
                h += 1;
            }
            if h == q {
                break;
            }
        }
    }

    found.sort_by(|a, b| {
        a.norm
            .total_cmp(&b.norm)
            .then_with(|| a.coeffs.cmp(&b.coeffs))
    });
    let mut out: Vec<LatticeLog> = Vec::with_capacity(found.len());
    for cand in found {
        let slack = tol.recon_tol * (1.0 + cand.norm);
        let dup = out
            .iter()
            .rev()
            .take_while(|k| cand.norm - k.norm <= slack)
            .any(|k| k.log.dist(&cand.log) <= slack);
        if !dup {
            out.push(cand);
        }
    }
    Ok(out)
}

/// Why a claimed logarithm failed verification.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum VerifyFailure {
    NotSkew,
    NotSpecialOrthogonal,
    ExpMismatch,
    WitnessInvalid,
    NotCommuting,
    BaseNotPrincipal,
    ReconstructionMismatch,
}

/// Outcome of [`verify_general_form`]: `A = base + 2π Σ ints_j C_j`, with
/// the `C_j` the factors of `witness` (whose values are the signed
/// `z_j = τ_j + 2π l_j`).
#[derive(Debug, Clone, Serialize)]
pub struct GeneralForm {
    pub ok: bool,
    pub base: Mat,
    pub witness: SvdSystem,
    pub ints: Vec<i64>,
    pub reason: Option<VerifyFailure>,
}

impl GeneralForm {
    fn fail(n: usize, reason: VerifyFailure) -> Self {
        GeneralForm {
            ok: false,
            base: Mat::zeros(n),
            witness: SvdSystem::empty(n),
            ints: Vec::new(),
            reason: Some(reason),
        }
    }
}

/// Splits each singular value `ζ = η + kπ` (η ∈ (0, π], k ≥ 0) and folds it
/// to `z = τ + 2πl` with τ ∈ [0, π]: even `k` keeps the factor, odd `k`
/// flips it.
fn fold_singular_value(zeta: f64, tol: &Tolerances) -> (f64, f64, i64, f64) {
    let near = (zeta / PI).round();
    let (eta, k) = if near >= 1.0 && (zeta - near * PI).abs() <= tol.pi_tol {
        (PI, near as i64 - 1)
    } else {
        let k = ((zeta / PI).ceil() as i64 - 1).max(0);
        (zeta - k as f64 * PI, k)
    };
    if k % 2 == 0 {
        (zeta, eta, k / 2, 1.0)
    } else {
        (-zeta, PI - eta, (-k - 1) / 2, -1.0)
    }
}

/// Checks that `A` is a logarithm of `R` and extracts a principal base and
/// integer witness.
pub fn verify_general_form(r: &Mat, a: &Mat, tol: &Tolerances) -> GeneralForm {
    let n = a.order();
    if r.order() != n || !a.is_skew(tol) {
        return GeneralForm::fail(n, VerifyFailure::NotSkew);
    }
    if r.require_special_orthogonal(tol, "R").is_err() {
        return GeneralForm::fail(n, VerifyFailure::NotSpecialOrthogonal);
    }
    if exp_oracle(a).dist(r) > tol.recon_tol {
        return GeneralForm::fail(n, VerifyFailure::ExpMismatch);
    }
    let sys = match decompose(a, tol) {
        Ok(s) => s,
        Err(Error::EmptyDecomposition) => {
            return GeneralForm {
                ok: true,
                base: Mat::zeros(n),
                witness: SvdSystem::empty(n),
                ints: Vec::new(),
                reason: None,
            }
        }
        Err(_) => return GeneralForm::fail(n, VerifyFailure::WitnessInvalid),
    };

    let mut base = Mat::zeros(n);
    let mut zs = Vec::with_capacity(sys.len());
    let mut cs = Vec::with_capacity(sys.len());
    let mut ints = Vec::with_capacity(sys.len());
    for (&zeta, aj) in sys.zetas().iter().zip(sys.factors()) {
        let (z, tau, l, sign) = fold_singular_value(zeta, tol);
        let c = aj.scale(sign);
        base.add_scaled(tau, &c);
        zs.push(z);
        cs.push(c);
        ints.push(l);
    }
    let witness = match SvdSystem::from_parts(zs, cs, tol) {
        Ok(w) => w,
        Err(_) => return GeneralForm::fail(n, VerifyFailure::WitnessInvalid),
    };
    let done = |reason: Option<VerifyFailure>, base: Mat, witness: SvdSystem, ints: Vec<i64>| {
        GeneralForm {
            ok: reason.is_none(),
            base,
            witness,
            ints,
            reason,
        }
    };

    let scale = 1.0 + a.frobenius_norm();
    let mut recon = base.clone();
    for (c, &l) in witness.factors().iter().zip(&ints) {
        recon.add_scaled(2.0 * PI * l as f64, c);
    }
    if recon.dist(a) > tol.recon_tol * scale {
        return done(
            Some(VerifyFailure::ReconstructionMismatch),
            base,
            witness,
            ints,
        );
    }
    if witness
        .factors()
        .iter()
        .any(|c| base.commutator(c).frobenius_norm() > tol.recon_tol * scale)
    {
        return done(Some(VerifyFailure::NotCommuting), base, witness, ints);
    }
    let principal = match decompose(&base, tol) {
        Ok(bs) => bs.zetas()[0] <= PI + tol.pi_tol,
        Err(Error::EmptyDecomposition) => true,
        Err(_) => false,
    };
    if !principal || exp_oracle(&base).dist(r) > tol.recon_tol {
        return done(Some(VerifyFailure::BaseNotPrincipal), base, witness, ints);
    }
    done(None, base, witness, ints)
}
