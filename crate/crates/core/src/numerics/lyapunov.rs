use nalgebra::{DMatrix, DVector};

use super::{spectral_radius, DenseMatrix};
use crate::error::{Error, Result};

const DISCRETE_REL_STOP: f64 = 1e-13;
const DISCRETE_MAX_ITER: usize = 1_000_000;

fn check_pair(k: &DenseMatrix, q: &DenseMatrix) -> Result<()> {
    if !k.is_square() || !q.is_square() || k.rows() != q.rows() {
        return Err(Error::Config(format!(
            "Lyapunov operands must be square and equal-sized ({}x{} vs {}x{})",
            k.rows(),
            k.cols(),
            q.rows(),
            q.cols()
        )));
    }
    Ok(())
}

/// Solves `K S K^T - S + Q = 0` by the fixed-point iteration
/// `S <- K S K^T + Q` started from `S = Q`.
pub fn solve_discrete_lyapunov(k: &DenseMatrix, q: &DenseMatrix) -> Result<DenseMatrix> {
    check_pair(k, q)?;
    let rho = spectral_radius(k);
    if rho >= 1.0 {
        return Err(Error::Stability(format!(
            "discrete Lyapunov equation needs spectral radius < 1, got {rho}"
        )));
    }
    let kt = k.transpose();
    let mut s = q.clone();
    for _ in 0..DISCRETE_MAX_ITER {
        let next = k.matmul(&s).matmul(&kt).add(q);
        let update = next.max_abs_diff(&s);
        s = next;
        if update < DISCRETE_REL_STOP * s.max_abs() || update == 0.0 {
            return Ok(s);
        }
    }
    Err(Error::Convergence(format!(
        "discrete Lyapunov iteration did not settle within {DISCRETE_MAX_ITER} steps"
    )))
}

/// Solves `M S + S M^T + Q = 0` through the Kronecker-form linear system
/// `(I (x) M + M (x) I) vec(S) = -vec(Q)`. Only meant for small `n`.
pub fn solve_continuous_lyapunov(m: &DenseMatrix, q: &DenseMatrix) -> Result<DenseMatrix> {
    check_pair(m, q)?;
    let n = m.rows();
    let mm = m.as_nalgebra();
    let id = DMatrix::<f64>::identity(n, n);
    let system = id.kronecker(mm) + mm.kronecker(&id);
    // column-major vec(S)
    let rhs = DVector::from_iterator(n * n, q.as_nalgebra().iter().map(|v| -v));
    let lu = system.lu();
    let sol = lu
        .solve(&rhs)
        .filter(|x| x.iter().all(|v| v.is_finite()))
        .ok_or_else(|| {
            Error::Stability("continuous Lyapunov system is singular (M not Hurwitz)".into())
        })?;
    Ok(DenseMatrix::from_nalgebra(DMatrix::from_column_slice(n, n, sol.as_slice())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_with_radius(n: usize, radius: f64, seed: u64) -> DenseMatrix {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = DenseMatrix::from_fn(n, n, |_, _| rng.random_range(-1.0..1.0));
        a.scale(radius / spectral_radius(&a))
    }

    fn truncated_sum(k: &DenseMatrix, q: &DenseMatrix, terms: u32) -> DenseMatrix {
        let mut total = DenseMatrix::zeros(q.rows(), q.cols());
        let mut power = DenseMatrix::identity(k.rows());
        for _ in 0..=terms {
            total = total.add(&power.matmul(q).matmul(&power.transpose()));
            power = k.matmul(&power);
        }
        total
    }

    #[test]
    fn zero_dynamics_returns_q() {
        let s = solve_discrete_lyapunov(&DenseMatrix::zeros(3, 3), &DenseMatrix::identity(3)).unwrap();
        assert_eq!(s, DenseMatrix::identity(3));
    }

    #[test]
    fn scalar_case() {
        let k = DenseMatrix::diagonal(&[0.5]);
        let s = solve_discrete_lyapunov(&k, &DenseMatrix::identity(1)).unwrap();
        assert!((s[(0, 0)] - 4.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn random_residual_small_and_symmetric() {
        for seed in 0..5 {
            let k = random_with_radius(5, 0.9, seed);
            let q = DenseMatrix::identity(5);
            let s = solve_discrete_lyapunov(&k, &q).unwrap();
            let residual = k.matmul(&s).matmul(&k.transpose()).sub(&s).add(&q);
            assert!(residual.max_abs() < 1e-10, "residual {}", residual.max_abs());
            assert!(s.is_symmetric(1e-12));
        }
    }

    #[test]
    fn matches_truncated_power_sum() {
        for seed in 10..15 {
            let k = random_with_radius(4, 0.9, seed);
            let q = DenseMatrix::from_fn(4, 4, |i, j| if i == j { 2.0 } else { 0.3 });
            let s = solve_discrete_lyapunov(&k, &q).unwrap();
            let oracle = truncated_sum(&k, &q, 200);
            assert!(s.max_abs_diff(&oracle) < 1e-8);
        }
    }

    #[test]
    fn unstable_is_rejected() {
        let k = DenseMatrix::diagonal(&[1.0, 0.2]);
        let err = solve_discrete_lyapunov(&k, &DenseMatrix::identity(2)).unwrap_err();
        assert!(matches!(err, Error::Stability(_)));
    }

    #[test]
    fn continuous_identity_case() {
        let s = solve_continuous_lyapunov(&DenseMatrix::identity(2).scale(-1.0), &DenseMatrix::identity(2))
            .unwrap();
        assert!(s.max_abs_diff(&DenseMatrix::identity(2).scale(0.5)) < 1e-14);
    }

    #[test]
    fn continuous_decoupled_case() {
        let m = DenseMatrix::diagonal(&[-1.0, -2.0]);
        let q = DenseMatrix::diagonal(&[2.0, 4.0]);
        let s = solve_continuous_lyapunov(&m, &q).unwrap();
        assert!(s.max_abs_diff(&DenseMatrix::identity(2)) < 1e-14);
    }

    #[test]
    fn continuous_residual_random() {
        let a = random_with_radius(6, 0.8, 99);
        let m = a.sub(&DenseMatrix::identity(6));
        let q = DenseMatrix::identity(6).scale(0.3);
        let s = solve_continuous_lyapunov(&m, &q).unwrap();
        let residual = m.matmul(&s).add(&s.matmul(&m.transpose())).add(&q);
        assert!(residual.max_abs() < 1e-9);
    }

    #[test]
    fn continuous_singular_system() {
        // eigenvalue 0 makes the Kronecker sum singular
        let m = DenseMatrix::diagonal(&[0.0, -1.0]);
        let err = solve_continuous_lyapunov(&m, &DenseMatrix::identity(2)).unwrap_err();
        assert!(matches!(err, Error::Stability(_)));
    }
}
