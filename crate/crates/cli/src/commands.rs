use std::fmt::{self, Write as _};
use std::io::Read;

use ortholog::geo::{self, Periodicity};
use ortholog::loglattice::{enumerate_logs, verify_general_form};
use ortholog::matcore::io::parse_matrix;
use ortholog::plog::{principal_log, sample_aplog, Structure};
use ortholog::{canonical_form, classify_component, decompose, pfaffian, Mat, Tolerances};
use serde_json::{json, Value};

use crate::{Command, Format, Global};

pub const TOL_SCALE_ENV: &str = "ORTHOLOG_TOL_SCALE";

#[derive(Debug)]
pub enum CliError {
    Lib(ortholog::Error),
    Io(String),
    Parse(String),
}

impl CliError {
    pub fn code(&self) -> &'static str {
        match self {
            CliError::Lib(e) => e.code(),
            CliError::Io(_) => "io",
            CliError::Parse(_) => "parse",
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Lib(e) => write!(f, "{e}"),
            CliError::Io(m) | CliError::Parse(m) => f.write_str(m),
        }
    }
}

impl From<ortholog::Error> for CliError {
    fn from(e: ortholog::Error) -> Self {
        CliError::Lib(e)
    }
}

type Res<T> = Result<T, CliError>;

fn read_source(path: &str) -> Res<String> {
    if path == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| CliError::Io(format!("stdin: {e}")))?;
        Ok(buf)
    } else {
        std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{path}: {e}")))
    }
}

fn load(path: &str) -> Res<Mat> {
    let text = read_source(path)?;
    parse_matrix(&text).map_err(|e| CliError::Parse(format!("{path}: {e}")))
}

/// Defaults for order `n`, scaled by the environment, then flag overrides.
fn tolerances(n: usize, g: &Global) -> Res<Tolerances> {
    let mut tol = Tolerances::for_order(n);
    if let Ok(raw) = std::env::var(TOL_SCALE_ENV) {
        let f: f64 = raw
            .trim()
            .parse()
            .map_err(|_| CliError::Parse(format!("{TOL_SCALE_ENV}={raw:?} is not a number")))?;
        tol = tol.scaled(f);
    }
    if let Some(v) = g.tol_orth {
        tol.orth_tol = v;
    }
    if let Some(v) = g.tol_cluster {
        tol.cluster_tol = v;
    }
    if let Some(v) = g.tol_pi {
        tol.pi_tol = v;
    }
    if let Some(v) = g.tol_recon {
        tol.recon_tol = v;
    }
    tol.validate()?;
    Ok(tol)
}

fn mat_json(m: &Mat) -> Value {
    json!({ "n": m.order(), "data": m.as_slice() })
}

fn structure_json(s: &Structure) -> Value {
    match *s {
        Structure::Manifold {
            mu,
            dim,
            components,
        } => {
            json!({ "structure": "Manifold", "mu": mu, "dim": dim, "components": components })
        }
        other => json!({ "structure": other.name(), "mu": other.mu() }),
    }
}

fn merge(into: &mut Value, from: Value) {
    if let (Value::Object(a), Value::Object(b)) = (into, from) {
        a.extend(b);
    }
}

fn emit(text: &str, g: &Global) -> Res<()> {
    match &g.out {
        Some(path) => {
            std::fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn emit_json(v: &Value, g: &Global) -> Res<()> {
    let mut text = serde_json::to_string(v).expect("JSON values always serialise");
    text.push('\n');
    emit(&text, g)
}

pub fn run(cmd: &Command, g: &Global) -> Res<()> {
    match cmd {
        Command::Exp { a } => {
            let a = load(a)?;
            let tol = tolerances(a.order(), g)?;
            let r = match decompose(&a, &tol) {
                Ok(sys) => sys.rodrigues_exp(),
                Err(ortholog::Error::EmptyDecomposition) => Mat::identity(a.order()),
                Err(e) => return Err(e.into()),
            };
            emit_json(&mat_json(&r), g)
        }
        Command::SvdSkew { a } => {
            let a = load(a)?;
            let tol = tolerances(a.order(), g)?;
            let sys = match decompose(&a, &tol) {
                Ok(sys) => sys,
                Err(ortholog::Error::EmptyDecomposition) => ortholog::SvdSystem::empty(a.order()),
                Err(e) => return Err(e.into()),
            };
            let (rank, tr_sq) = sys.eig_summary();
            emit_json(
                &json!({
                    "n": a.order(),
                    "zetas": sys.zetas(),
                    "mults": sys.mults(),
                    "factors": sys.factors().iter().map(mat_json).collect::<Vec<_>>(),
                    "rank": rank,
                    "trace_sq": tr_sq,
                }),
                g,
            )
        }
        Command::Pfaffian { a } => {
            let a = load(a)?;
            let tol = tolerances(a.order(), g)?;
            emit_json(&json!({ "pfaffian": pfaffian(&a, &tol)? }), g)
        }
        Command::Canon { r } => {
            let r = load(r)?;
            let tol = tolerances(r.order(), g)?;
            let cf = canonical_form(&r, &tol)?;
            emit_json(
                &json!({
                    "n": cf.n,
                    "thetas": cf.thetas,
                    "mults": cf.mults,
                    "fixed_dim": cf.fixed_dim,
                    "k": mat_json(&cf.k),
                }),
                g,
            )
        }
        Command::Plog { r } => {
            let r = load(r)?;
            let tol = tolerances(r.order(), g)?;
            let desc = principal_log(&r, &tol)?;
            let logs: Vec<Value> = match desc.structure {
                Structure::Manifold { .. } => vec![mat_json(&desc.b)],
                _ => {
                    let mut v = vec![mat_json(&desc.b)];
                    if desc.structure == Structure::TwoPoints {
                        let mut other = desc.b.clone();
                        other.add_scaled(-2.0 * std::f64::consts::PI, &desc.system.factors()[0]);
                        v.push(mat_json(&other));
                    }
                    v
                }
            };
            let mut out = mat_json(&desc.b);
            merge(&mut out, structure_json(&desc.structure));
            merge(
                &mut out,
                json!({
                    "thetas": desc.system.zetas(),
                    "mults": desc.system.mults(),
                    "trace_sq": desc.trace_sq(),
                    "b1_squared": desc.b1_squared.as_ref().map(mat_json),
                    "logs": logs,
                }),
            );
            emit_json(&out, g)
        }
        Command::SampleAplog { r, count, seed } => {
            let r = load(r)?;
            let tol = tolerances(r.order(), g)?;
            let samples = sample_aplog(&r, *count, *seed, &tol)?;
            let items = samples
                .iter()
                .map(|s| {
                    Ok(json!({
                        "log": mat_json(&s.log),
                        "w_block": mat_json(&s.w_block),
                        "component": classify_component(&s.w_block, &tol)?,
                    }))
                })
                .collect::<Res<Vec<Value>>>()?;
            emit_json(
                &json!({ "seed": seed, "count": count, "samples": items }),
                g,
            )
        }
        Command::Logs { r, radius } => {
            let r = load(r)?;
            let tol = tolerances(r.order(), g)?;
            let logs = enumerate_logs(&r, *radius, &tol)?;
            let items: Vec<Value> = logs
                .iter()
                .map(|l| json!({ "coeffs": l.coeffs, "norm": l.norm, "log": mat_json(&l.log) }))
                .collect();
            let directions: Vec<Value> = logs
                .first()
                .map(|l| l.directions.iter().map(mat_json).collect())
                .unwrap_or_default();
            emit_json(
                &json!({ "radius": radius, "count": items.len(), "directions": directions, "logs": items }),
                g,
            )
        }
        Command::VerifyLog { r, a } => {
            let r = load(r)?;
            let a = load(a)?;
            let tol = tolerances(r.order().max(a.order()), g)?;
            let v = verify_general_form(&r, &a, &tol);
            emit_json(
                &json!({
                    "ok": v.ok,
                    "reason": v.reason,
                    "base": mat_json(&v.base),
                    "ints": v.ints,
                    "witness": {
                        "values": v.witness.zetas(),
                        "factors": v.witness.factors().iter().map(mat_json).collect::<Vec<_>>(),
                    },
                }),
                g,
            )
        }
        Command::Dist { g: gp, h } => {
            let (gm, hm) = (load(gp)?, load(h)?);
            let tol = tolerances(gm.order(), g)?;
            emit_json(&json!({ "distance": geo::distance(&gm, &hm, &tol)? }), g)
        }
        Command::Geodesic {
            g: gp,
            a,
            between,
            samples,
            t_min,
            t_max,
            max_den,
            format,
        } => {
            let gm = load(gp)?;
            let second = load(a)?;
            let tol = tolerances(gm.order(), g)?;
            let arc = if *between {
                let mg = geo::minimal_geodesics(&gm, &second, &tol)?;
                mg.arcs
                    .into_iter()
                    .next()
                    .expect("at least one minimal arc")
            } else {
                geo::geodesic(&gm, &second, &tol)?
            };
            if !(t_min.is_finite() && t_max.is_finite()) {
                return Err(ortholog::Error::Domain("t range must be finite".into()).into());
            }
            let ts: Vec<f64> = match *samples {
                0 => Vec::new(),
                1 => vec![*t_min],
                k => (0..k)
                    .map(|i| t_min + (t_max - t_min) * i as f64 / (k - 1) as f64)
                    .collect(),
            };
            match format {
                Format::Csv => {
                    let n = gm.order();
                    let mut text = String::from("t");
                    for i in 0..n {
                        for j in 0..n {
                            write!(text, ",a{i}{j}").unwrap();
                        }
                    }
                    text.push('\n');
                    for &t in &ts {
                        write!(text, "{t:?}").unwrap();
                        for x in arc.eval(t).as_slice() {
                            write!(text, ",{x:?}").unwrap();
                        }
                        text.push('\n');
                    }
                    emit(&text, g)
                }
                Format::Json => {
                    let periodicity = if arc.is_constant() {
                        json!("Constant")
                    } else {
                        match geo::classify_periodicity(&arc, &tol, *max_den)? {
                            Periodicity::Periodic { period } => {
                                json!({ "Periodic": { "period": period } })
                            }
                            Periodicity::Undecided => json!("Undecided"),
                        }
                    };
                    let pts: Vec<Value> = ts
                        .iter()
                        .map(|&t| json!({ "t": t, "point": mat_json(&arc.eval(t)) }))
                        .collect();
                    emit_json(
                        &json!({
                            "generator": mat_json(&arc.generator),
                            "length": arc.length(),
                            "is_principal": arc.is_principal,
                            "periodicity": periodicity,
                            "samples": pts,
                        }),
                        g,
                    )
                }
            }
        }
        Command::ClassifyPair { g: gp, h } => {
            let (gm, hm) = (load(gp)?, load(h)?);
            let tol = tolerances(gm.order(), g)?;
            let c = geo::classify_pair(&gm, &hm, &tol)?;
            emit_json(&serde_json::to_value(c).expect("PairClass serialises"), g)
        }
        Command::Curvature { n, x, y } => {
            let (ricci, scalar) = geo::einstein_constants(*n)?;
            let mut out = json!({ "n": n, "ricci_coeff": ricci, "scalar": scalar });
            match (x, y) {
                (Some(x), Some(y)) => {
                    let (xm, ym) = (load(x)?, load(y)?);
                    if xm.order() != *n || ym.order() != *n {
                        return Err(
                            ortholog::Error::Dimension(format!("X and Y must be {n}×{n}")).into(),
                        );
                    }
                    let tol = tolerances(*n, g)?;
                    merge(
                        &mut out,
                        json!({ "sectional": geo::sectional_curvature(&xm, &ym, &tol)? }),
                    );
                }
                (None, None) => {}
                _ => {
                    return Err(ortholog::Error::Precondition(
                        "sectional curvature needs both X and Y".into(),
                    )
                    .into())
                }
            }
            emit_json(&out, g)
        }
        Command::Diameter { n } => emit_json(&json!({ "n": n, "diameter": geo::diameter(*n)? }), g),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn global() -> Global {
        Global {
            tol_orth: None,
            tol_cluster: None,
            tol_pi: None,
            tol_recon: None,
            out: None,
        }
    }

    #[test]
    fn flag_overrides_win() {
        let g = Global {
            tol_pi: Some(1e-6),
            ..global()
        };
        let t = tolerances(3, &g).unwrap();
        assert_eq!(t.pi_tol, 1e-6);
        assert_eq!(t.cluster_tol, Tolerances::for_order(3).cluster_tol);
    }

    #[test]
    fn non_positive_override_is_rejected() {
        let g = Global {
            tol_recon: Some(0.0),
            ..global()
        };
        assert!(matches!(tolerances(2, &g), Err(CliError::Lib(_))));
    }

    #[test]
    fn structure_objects() {
        let v = structure_json(&Structure::Manifold {
            mu: 3,
            dim: 6,
            components: 2,
        });
        assert_eq!(v["structure"], "Manifold");
        assert_eq!(v["dim"], 6);
        assert_eq!(structure_json(&Structure::Unique)["mu"], 0);
    }

    #[test]
    fn error_codes() {
        assert_eq!(CliError::Io("x".into()).code(), "io");
        assert_eq!(
            CliError::Lib(ortholog::Error::Domain("d".into())).code(),
            "domain"
        );
    }
}
