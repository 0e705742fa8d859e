use nalgebra::DMatrix;

use super::DenseMatrix;

const MIN_SQUARINGS: usize = 12;
const MAX_SQUARINGS: usize = 96;
const SETTLE_TOL: f64 = 1e-14;

/// Largest eigenvalue modulus of a square matrix.
///
/// Uses Gelfand's formula `rho = lim ||A^m||^(1/m)` with `m = 2^k`: the
/// matrix is squared and rescaled repeatedly while the log-norms are
/// accumulated. Unlike power iteration this does not stall on several
/// dominant eigenvalues of equal modulus (periodic or circulant graphs).
/// Matrices whose nonzero pattern has no directed cycle are nilpotent and
/// return exactly `0.0`.
pub fn spectral_radius(a: &DenseMatrix) -> f64 {
    assert!(a.is_square(), "spectral radius of a non-square matrix");
    let n = a.rows();
    if n == 0 || a.max_abs() == 0.0 || support_is_acyclic(a) {
        return 0.0;
    }
    let mut b: DMatrix<f64> = a.as_nalgebra().clone();
    // log ||A^(2^k)|| = sum_j 2^(k - j) log s_j, tracked as log_norm / 2^k
    let mut scaled_log = 0.0_f64;
    let mut weight = 1.0_f64;
    let mut previous = f64::NAN;
    let mut settled = 0;
    for k in 0..MAX_SQUARINGS {
        let s = b.norm();
        if s == 0.0 {
            return 0.0;
        }
        b /= s;
        scaled_log += weight * s.ln();
        let estimate = scaled_log.exp();
        if k >= MIN_SQUARINGS && (estimate - previous).abs() <= SETTLE_TOL * estimate {
            settled += 1;
            if settled == 2 {
                return estimate;
            }
        } else {
            settled = 0;
        }
        previous = estimate;
        b = &b * &b;
        weight *= 0.5;
    }
    previous
}

/// True when the directed graph with an edge `j -> i` for every nonzero
/// `a[(i, j)]` has no cycle (self-loops count as cycles).
pub(crate) fn support_is_acyclic(a: &DenseMatrix) -> bool {
    let n = a.rows();
    // Kahn's algorithm on the support pattern
    let mut indegree = vec![0usize; n];
    for i in 0..n {
        for j in 0..n {
            if a[(i, j)] != 0.0 {
                indegree[i] += 1;
            }
        }
    }
    let mut ready: Vec<usize> = (0..n).filter(|&i| indegree[i] == 0).collect();
    let mut removed = 0;
    while let Some(j) = ready.pop() {
        removed += 1;
        for i in 0..n {
            if a[(i, j)] != 0.0 {
                indegree[i] -= 1;
                if indegree[i] == 0 {
                    ready.push(i);
                }
            }
        }
    }
    removed == n
}
