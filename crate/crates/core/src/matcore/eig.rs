//! Symmetric eigendecomposition by the cyclic Jacobi method.

use crate::error::{Error, Result};
use crate::matcore::Mat;
use crate::tol::Tolerances;

const MAX_SWEEPS: usize = 100;

/// Eigenvalues in descending order with orthonormal eigenvectors as the
/// columns of `vectors`, so that `vectorsᵀ · S · vectors = diag(values)`.
#[derive(Debug, Clone)]
pub struct SymEig {
    pub values: Vec<f64>,
    pub vectors: Mat,
}

/// Eigendecomposition of a symmetric matrix.
///
/// The input is symmetrised before iterating; asymmetry beyond `orth_tol`
/// is rejected.
pub fn sym_eig(s: &Mat, tol: &Tolerances) -> Result<SymEig> {
    if !s.is_symmetric(tol) {
        return Err(Error::Precondition(format!(
            "sym_eig input is not symmetric (‖S−Sᵀ‖_F = {:.3e})",
            (s - &s.transpose()).frobenius_norm()
        )));
    }
    Ok(jacobi(&s.sym_part()))
}

/// Cyclic Jacobi on an exactly symmetric matrix.
pub(crate) fn jacobi(s: &Mat) -> SymEig {
    let n = s.order();
    let mut a = s.clone();
    let mut v = Mat::identity(n);
    let scale = a.frobenius_norm();

    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[(i, j)] * a[(i, j)])
            .sum();
        if off <= (1e-17 * scale).powi(2) || off == 0.0 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let (app, aqq) = (a[(p, p)], a[(q, q)]);
                // skip rotations that cannot change the diagonal in working precision
                if apq.abs() < 1e-3 * f64::EPSILON * app.abs().min(aqq.abs()) {
                    a[(p, q)] = 0.0;
                    a[(q, p)] = 0.0;
                    continue;
                }
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let sn = t * c;

                for r in 0..n {
                    let arp = a[(r, p)];
                    let arq = a[(r, q)];
                    a[(r, p)] = c * arp - sn * arq;
                    a[(r, q)] = sn * arp + c * arq;
                }
                for r in 0..n {
                    let apr = a[(p, r)];
                    let aqr = a[(q, r)];
                    a[(p, r)] = c * apr - sn * aqr;
                    a[(q, r)] = sn * apr + c * aqr;
                }
                a[(p, q)] = 0.0;
                a[(q, p)] = 0.0;

                for r in 0..n {
                    let vrp = v[(r, p)];
                    let vrq = v[(r, q)];
                    v[(r, p)] = c * vrp - sn * vrq;
                    v[(r, q)] = sn * vrp + c * vrq;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(j, j)].total_cmp(&a[(i, i)]).then(i.cmp(&j)));
    let values = order.iter().map(|&i| a[(i, i)]).collect();
    let mut vectors = Mat::zeros(n);
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_column(dst, &v.column(src));
    }
    SymEig { values, vectors }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn residual(s: &Mat, e: &SymEig) -> f64 {
        e.vectors
            .transpose()
            .matmul(s)
            .matmul(&e.vectors)
            .dist(&Mat::diag(&e.values))
    }

    #[test]
    fn diagonal_input() {
        let s = Mat::diag(&[1.0, 3.0]);
        let e = sym_eig(&s, &Tolerances::for_order(2)).unwrap();
        assert_eq!(e.values, vec![3.0, 1.0]);
        assert!(e.vectors.is_orthogonal(&Tolerances::for_order(2)));
        // eigenvector of 3 is ±e₂
        assert_eq!(e.vectors[(1, 0)].abs(), 1.0);
    }

    #[test]
    fn identity_from_e0_squared() {
        let e0 = Mat::e0();
        let s = -&e0.matmul(&e0);
        let e = sym_eig(&s, &Tolerances::for_order(2)).unwrap();
        assert_eq!(e.values, vec![1.0, 1.0]);
        assert!(e.vectors.is_orthogonal(&Tolerances::for_order(2)));
    }

    #[test]
    fn swap_matrix() {
        let s = Mat::p0();
        let e = sym_eig(&s, &Tolerances::for_order(2)).unwrap();
        assert!((e.values[0] - 1.0).abs() < 1e-15);
        assert!((e.values[1] + 1.0).abs() < 1e-15);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let c0 = e.vectors.column(0);
        let c1 = e.vectors.column(1);
        // columns are (1,1)/√2 and (1,−1)/√2 up to sign
        assert!((c0[0].abs() - h).abs() < 1e-15 && (c0[0] - c0[1]).abs() < 1e-15);
        assert!((c1[0].abs() - h).abs() < 1e-15 && (c1[0] + c1[1]).abs() < 1e-15);
        assert!(residual(&s, &e) < 1e-15);
    }

    #[test]
    fn rejects_non_symmetric() {
        assert!(matches!(
            sym_eig(&Mat::e0(), &Tolerances::for_order(2)),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn repeated_and_zero_eigenvalues() {
        let q = Mat::rot(0.3);
        let big = Mat::block_diag(&[q.clone(), Mat::identity(1)]);
        let s = big.congruence(&Mat::diag(&[2.0, 2.0, 0.0]));
        let e = sym_eig(&s, &Tolerances::for_order(3)).unwrap();
        assert!((e.values[0] - 2.0).abs() < 1e-14);
        assert!((e.values[1] - 2.0).abs() < 1e-14);
        assert!(e.values[2].abs() < 1e-14);
        assert!(residual(&s, &e) < 1e-14);
    }
}
