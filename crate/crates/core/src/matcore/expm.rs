use crate::matcore::Mat;

const TAYLOR_TERMS: u32 = 16;
const SCALED_NORM: f64 = 0.5;

/// Matrix exponential by scaling and squaring with a truncated Taylor kernel.
///
/// `A` is halved until `‖A‖_F / 2^s ≤ 0.5`, the 16-term Taylor polynomial is
/// evaluated in Horner form, and the result is squared `s` times. This is the
/// reference against which the closed-form exponentials are checked, so it
/// must not share code with them.
pub fn exp_oracle(a: &Mat) -> Mat {
    let n = a.order();
    let norm = a.frobenius_norm();
    let mut squarings = 0u32;
    while norm / 2f64.powi(squarings as i32) > SCALED_NORM {
        squarings += 1;
    }
    let x = a.scale(1.0 / 2f64.powi(squarings as i32));

    let id = Mat::identity(n);
    let mut e = id.clone();
    for k in (1..=TAYLOR_TERMS).rev() {
        // e ← I + (X/k)·e
        let mut next = x.matmul(&e).scale(1.0 / k as f64);
        next += &id;
        e = next;
    }
    for _ in 0..squarings {
        e = e.matmul(&e);
    }
    e
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Tolerances;
    use std::f64::consts::PI;

    #[test]
    fn zero_gives_identity() {
        assert_eq!(exp_oracle(&Mat::zeros(3)), Mat::identity(3));
    }

    #[test]
    fn quarter_and_half_turn() {
        let q = exp_oracle(&Mat::e0().scale(PI / 2.0));
        assert!(q.dist(&Mat::e0()) < 1e-15);
        let h = exp_oracle(&Mat::e0().scale(PI));
        assert!(h.dist(&-&Mat::identity(2)) < 1e-14);
    }

    #[test]
    fn matches_scalar_exponential_on_diagonal() {
        let d = Mat::diag(&[1.0, -2.0, 3.5]);
        let e = exp_oracle(&d);
        for (i, v) in [1.0f64, -2.0, 3.5].iter().enumerate() {
            assert!((e[(i, i)] - v.exp()).abs() <= 1e-13 * v.exp());
        }
    }

    #[test]
    fn large_rotation_stays_orthogonal() {
        let a = Mat::block_diag(&[Mat::e0().scale(25.0), Mat::e0().scale(-30.0)]);
        let r = exp_oracle(&a);
        assert!(r.is_orthogonal(&Tolerances::for_order(4)));
        let expect = Mat::block_diag(&[Mat::rot(25.0), Mat::rot(-30.0)]);
        assert!(r.dist(&expect) < 1e-12);
    }
}
