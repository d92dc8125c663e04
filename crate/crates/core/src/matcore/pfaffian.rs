use crate::error::{Error, Result};
use crate::matcore::Mat;
use crate::tol::Tolerances;

/// Pfaffian of an even-order skew-symmetric matrix.
///
/// Parlett–Reid style reduction: at each step the largest entry of the
/// current column below the diagonal is pivoted into the `(k+1, k)` slot
/// (every swap flips the sign) and the trailing block receives a
/// skew-symmetric rank-2 update.
pub fn pfaffian(a: &Mat, tol: &Tolerances) -> Result<f64> {
    let n = a.order();
    if n % 2 == 1 {
        return Err(Error::Domain(format!("Pfaffian needs even order, got {n}")));
    }
    a.require_skew(tol, "Pfaffian input")?;
    let mut m = a.skew_part();
    let mut pf = 1.0;

    for k in (0..n - 1).step_by(2) {
        let (kp, _) = (k + 1..n)
            .map(|i| (i, m[(i, k)].abs()))
            .fold(
                (k + 1, -1.0),
                |best, cur| if cur.1 > best.1 { cur } else { best },
            );
        if kp != k + 1 {
            swap_sym(&mut m, k + 1, kp);
            pf = -pf;
        }
        let pivot = m[(k, k + 1)];
        if pivot == 0.0 {
            return Ok(0.0);
        }
        pf *= pivot;
        if k + 2 < n {
            let tau: Vec<f64> = (k + 2..n).map(|j| m[(k, j)] / pivot).collect();
            let col: Vec<f64> = (k + 2..n).map(|i| m[(i, k + 1)]).collect();
            for (ii, i) in (k + 2..n).enumerate() {
                for (jj, j) in (k + 2..n).enumerate() {
                    m[(i, j)] += tau[ii] * col[jj] - col[ii] * tau[jj];
                }
            }
        }
    }
    Ok(pf)
}

/// Swaps rows and columns `i` and `j` simultaneously.
fn swap_sym(m: &mut Mat, i: usize, j: usize) {
    let n = m.order();
    for c in 0..n {
        let t = m[(i, c)];
        m[(i, c)] = m[(j, c)];
        m[(j, c)] = t;
    }
    for r in 0..n {
        let t = m[(r, i)];
        m[(r, i)] = m[(r, j)];
        m[(r, j)] = t;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(n: usize) -> Tolerances {
        Tolerances::for_order(n)
    }

    /// Combinatorial Pfaffian by expansion along the first row.
    fn pf_expand(a: &Mat, idx: &[usize]) -> f64 {
        if idx.is_empty() {
            return 1.0;
        }
        let i = idx[0];
        let mut acc = 0.0;
        for (pos, &j) in idx.iter().enumerate().skip(1) {
            let rest: Vec<usize> = idx.iter().copied().filter(|&x| x != i && x != j).collect();
            let sign = if pos % 2 == 1 { 1.0 } else { -1.0 };
            acc += sign * a[(i, j)] * pf_expand(a, &rest);
        }
        acc
    }

    #[test]
    fn block_examples() {
        let e0 = Mat::e0();
        let j4 = Mat::block_diag(&[e0.clone(), e0.clone()]);
        assert_eq!(pfaffian(&j4, &t(4)).unwrap(), 1.0);
        assert_eq!(pfaffian(&e0, &t(2)).unwrap(), 1.0);
        assert_eq!(pfaffian(&-&e0, &t(2)).unwrap(), -1.0);
        let d = Mat::block_diag(&[e0.scale(2.0), e0.scale(3.0)]);
        assert_eq!(pfaffian(&d, &t(4)).unwrap(), 6.0);
        assert!((d.det() - 36.0).abs() < 1e-12);
    }

    #[test]
    fn matches_expansion_with_pivoting() {
        // small (0,1) entry forces a pivot swap
        let rows = [
            [0.0, 1e-3, 2.0, -1.0, 0.5, 3.0],
            [-1e-3, 0.0, 0.7, 4.0, -2.0, 1.0],
            [-2.0, -0.7, 0.0, 1.5, 0.3, -0.2],
            [1.0, -4.0, -1.5, 0.0, 2.2, 0.9],
            [-0.5, 2.0, -0.3, -2.2, 0.0, -1.1],
            [-3.0, -1.0, 0.2, -0.9, 1.1, 0.0],
        ];
        let a = Mat::from_rows(&rows).unwrap();
        let idx: Vec<usize> = (0..6).collect();
        let expect = pf_expand(&a, &idx);
        let got = pfaffian(&a, &t(6)).unwrap();
        assert!(
            (got - expect).abs() < 1e-12 * expect.abs().max(1.0),
            "{got} vs {expect}"
        );
    }

    #[test]
    fn errors() {
        assert!(matches!(
            pfaffian(&Mat::zeros(3), &t(3)),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            pfaffian(&Mat::identity(2), &t(2)),
            Err(Error::Precondition(_))
        ));
        assert_eq!(pfaffian(&Mat::zeros(4), &t(4)).unwrap(), 0.0);
    }
}
