//! Geometry of `O(n)` with the Frobenius metric `g(V, W) = tr(VᵀW)`.
//!
//! Geodesics are `α(t) = G·exp(tA)` with `A` skew-symmetric. The minimal
//! ones joining `G` and `H` are the principal arcs, generated by principal
//! logarithms of `GᵀH`.

use std::f64::consts::PI;

use serde::Serialize;

use crate::canon::canonical_form;
use crate::error::{Error, Result};
use crate::matcore::{frobenius_inner, Mat};
use crate::plog::{principal_log, principal_logs_listing, Structure};
use crate::skewsvd::{decompose, SvdSystem};
use crate::tol::Tolerances;

/// `t ↦ G·exp(tA)`, with `GA_j` and `GA_j²` cached for Rodrigues evaluation.
#[derive(Debug, Clone, Serialize)]
pub struct GeodesicArc {
    pub start: Mat,
    pub generator: Mat,
    pub is_principal: bool,
    pub system: SvdSystem,
    #[serde(skip)]
    ga: Vec<Mat>,
    #[serde(skip)]
    ga2: Vec<Mat>,
}

impl GeodesicArc {
    pub fn eval(&self, t: f64) -> Mat {
        let mut out = self.start.clone();
        for ((z, ga), ga2) in self.system.zetas().iter().zip(&self.ga).zip(&self.ga2) {
            let (s, c) = (t * z).sin_cos();
            out.add_scaled(s, ga);
            out.add_scaled(1.0 - c, ga2);
        }
        out
    }

    /// Length of the arc on `[0, 1]`: the speed `‖A‖_F`.
    pub fn length(&self) -> f64 {
        self.generator.frobenius_norm()
    }

    pub fn is_constant(&self) -> bool {
        self.system.is_empty()
    }
}

pub fn geodesic(g: &Mat, a: &Mat, tol: &Tolerances) -> Result<GeodesicArc> {
    if g.order() != a.order() {
        return Err(Error::Dimension(format!(
            "G is {}×{0}, A is {}×{1}",
            g.order(),
            a.order()
        )));
    }
    g.require_orthogonal(tol, "G")?;
    a.require_skew(tol, "A")?;
    let system = match decompose(a, tol) {
        Ok(s) => s,
        Err(Error::EmptyDecomposition) => SvdSystem::empty(a.order()),
        Err(e) => return Err(e),
    };
    let is_principal = system.zetas().first().is_none_or(|&z| z <= PI + tol.pi_tol);
    let ga: Vec<Mat> = system.factors().iter().map(|f| g.matmul(f)).collect();
    let ga2: Vec<Mat> = ga
        .iter()
        .zip(system.factors())
        .map(|(gf, f)| gf.matmul(f))
        .collect();
    Ok(GeodesicArc {
        start: g.clone(),
        generator: a.skew_part(),
        is_principal,
        system,
        ga,
        ga2,
    })
}

/// `GᵀH`, after checking both are orthogonal and lie in the same component.
fn relative(g: &Mat, h: &Mat, tol: &Tolerances) -> Result<Mat> {
    if g.order() != h.order() {
        return Err(Error::Dimension(format!(
            "G is {}×{0}, H is {}×{1}",
            g.order(),
            h.order()
        )));
    }
    g.require_orthogonal(tol, "G")?;
    h.require_orthogonal(tol, "H")?;
    if !same_component(g, h) {
        return Err(Error::Domain(
            "G and H lie in different components of O(n)".into(),
        ));
    }
    Ok(g.transpose().matmul(h))
}

fn same_component(g: &Mat, h: &Mat) -> bool {
    (g.det() > 0.0) == (h.det() > 0.0)
}

/// Riemannian distance `√(2 Σ m_k θ_k²)` from the angles of `GᵀH`.
pub fn distance(g: &Mat, h: &Mat, tol: &Tolerances) -> Result<f64> {
    let m = relative(g, h, tol)?;
    Ok(canonical_form(&m, tol)?.sum_sq_angles().sqrt())
}

#[derive(Debug, Clone, Serialize)]
pub struct MinimalGeodesics {
    pub arcs: Vec<GeodesicArc>,
    pub structure: Structure,
}

/// Principal arcs from `G` to `H`: all of them when there are one or two,
/// a single representative when they form a manifold.
pub fn minimal_geodesics(g: &Mat, h: &Mat, tol: &Tolerances) -> Result<MinimalGeodesics> {
    let m = relative(g, h, tol)?;
    let desc = principal_log(&m, tol)?;
    let gens = match desc.structure {
        Structure::Manifold { .. } => vec![desc.b.clone()],
        _ => principal_logs_listing(&desc),
    };
    let arcs = gens
        .iter()
        .map(|b| geodesic(g, b, tol))
        .collect::<Result<Vec<_>>>()?;
    Ok(MinimalGeodesics {
        arcs,
        structure: desc.structure,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Periodicity {
    /// Verified: `‖α(period) − α(0)‖_F ≤ recon_tol`.
    Periodic { period: f64 },
    /// No rational relation with small denominators was found; irrational
    /// ratios cannot be certified in floating point.
    Undecided,
}

/// Best rational `p/q` with `q ≤ max_den`, as `(p, q, |x − p/q|)`.
fn best_rational(x: f64, max_den: u64) -> (i64, u64, f64) {
    let mut best = (x.round() as i64, 1, (x - x.round()).abs());
    for q in 2..=max_den {
        let p = (x * q as f64).round();
        let err = (x - p / q as f64).abs();
        if err < best.2 - 1e-15 {
            best = (p as i64, q, err);
        }
    }
    best
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Decides whether the geodesic closes up. With `ζ_j/ζ₁ ≈ p_j/q_j`, the
/// candidate period is `2π·lcm(q_j)/ζ₁`.
pub fn classify_periodicity(
    arc: &GeodesicArc,
    tol: &Tolerances,
    max_den: u64,
) -> Result<Periodicity> {
    if arc.is_constant() {
        return Err(Error::Domain("constant arc has no period".into()));
    }
    if max_den == 0 {
        return Err(Error::Domain("max_den must be at least 1".into()));
    }
    let zetas = arc.system.zetas();
    let z1 = zetas[0];
    let mut lcm = 1u64;
    for &z in &zetas[1..] {
        let (_, q, err) = best_rational(z / z1, max_den);
        if err > tol.cluster_tol {
            return Ok(Periodicity::Undecided);
        }
        lcm = lcm / gcd(lcm, q) * q;
    }
    let period = 2.0 * PI * lcm as f64 / z1;
    if arc.eval(period).dist(&arc.start) <= tol.recon_tol {
        Ok(Periodicity::Periodic { period })
    } else {
        Ok(Periodicity::Undecided)
    }
}

/// `√(2⌊n/2⌋)·π`.
pub fn diameter(n: usize) -> Result<f64> {
    if n < 1 {
        return Err(Error::Domain("diameter needs n ≥ 1".into()));
    }
    Ok((2.0 * (n / 2) as f64).sqrt() * PI)
}

#[derive(Debug, Clone, Serialize)]
pub struct PairClass {
    pub same_component: bool,
    pub weakly_diametral: bool,
    pub diametral: bool,
    /// `(p, n − p)`: multiplicities of `+1` and `−1` in a symmetric `GᵀH`.
    pub grassmann_signature: Option<(usize, usize)>,
    /// `None` across components.
    pub distance: Option<f64>,
}

pub fn classify_pair(g: &Mat, h: &Mat, tol: &Tolerances) -> Result<PairClass> {
    if g.order() != h.order() {
        return Err(Error::Dimension(format!(
            "G is {}×{0}, H is {}×{1}",
            g.order(),
            h.order()
        )));
    }
    g.require_orthogonal(tol, "G")?;
    h.require_orthogonal(tol, "H")?;
    let n = g.order();
    let m = g.transpose().matmul(h);
    let same = same_component(g, h);
    let symmetric = m.is_symmetric(tol);
    let grassmann_signature = symmetric.then(|| {
        let p = ((n as f64 + m.trace()) / 2.0).round().clamp(0.0, n as f64) as usize;
        (p, n - p)
    });
    let distance = if same {
        Some(distance(g, h, tol)?)
    } else {
        None
    };
    let diam = diameter(n)?;
    let diametral = distance.is_some_and(|d| (d - diam).abs() <= tol.recon_tol);
    Ok(PairClass {
        same_component: same,
        weakly_diametral: same && symmetric,
        diametral,
        grassmann_signature,
        distance,
    })
}

/// Ricci coefficient `(n−2)/4` (`Ric = c·g`) and scalar curvature
/// `(n−2)(n−1)n/8`.
pub fn einstein_constants(n: usize) -> Result<(f64, f64)> {
    if n < 1 {
        return Err(Error::Domain("einstein_constants needs n ≥ 1".into()));
    }
    let n = n as f64;
    Ok(((n - 2.0) / 4.0, (n - 2.0) * (n - 1.0) * n / 8.0))
}

/// Sectional curvature of the plane spanned by skew `X, Y`:
/// `¼‖[X,Y]‖² / (‖X‖²‖Y‖² − g(X,Y)²)`.
pub fn sectional_curvature(x: &Mat, y: &Mat, tol: &Tolerances) -> Result<f64> {
    x.require_skew(tol, "X")?;
    y.require_skew(tol, "Y")?;
    let xx = frobenius_inner(x, x)?;
    let yy = frobenius_inner(y, y)?;
    let xy = frobenius_inner(x, y)?;
    let area = xx * yy - xy * xy;
    if area.is_nan() || area <= 1e-12 * xx * yy {
        return Err(Error::Domain("X and Y are linearly dependent".into()));
    }
    let br = x.commutator(y);
    Ok(0.25 * frobenius_inner(&br, &br)? / area)
}
