use nalgebra::{DMatrix, DVector};

use super::{PemKind, PemMatrix};
use crate::dynamics::TimeSeries;
use crate::error::{Error, Result};
use crate::numerics::{ols_fit, DenseMatrix};

/// Bivariate linear Granger causality of order `order`.
///
/// For each ordered pair `j -> i`, `x_i` is regressed (with intercept) on its
/// own `order` past values, then additionally on `order` past values of
/// `x_j`. Entry `(i, j)` is `ln(restricted / unrestricted)` residual
/// variance, both taken as residual sum of squares over the number of fitted
/// rows. Rank-deficient fits leave the entry at 0 and are listed in
/// `failed_pairs`.
pub fn pem_gc(ts: &TimeSeries, order: u32) -> Result<PemMatrix> {
    if order == 0 {
        return Err(Error::Config("GC order must be at least 1".into()));
    }
    let p = order as usize;
    let len = ts.len();
    if len < 2 * p + 10 {
        return Err(Error::InsufficientData(format!(
            "GC of order {p} needs at least {} samples, have {len}",
            2 * p + 10
        )));
    }
    let n = ts.node_count();
    let rows = len - p;
    let cols: Vec<Vec<f64>> = (0..n).map(|i| ts.column(i)).collect();
    let lagged = |design: &mut DMatrix<f64>, offset: usize, series: &[f64]| {
        for r in 0..rows {
            for l in 0..p {
                design[(r, offset + l)] = series[p + r - 1 - l];
            }
        }
    };

    let mut values = DenseMatrix::zeros(n, n);
    let mut failed = Vec::new();
    for i in 0..n {
        let y = DVector::from_row_slice(&cols[i][p..]);
        let mut restricted = DMatrix::from_element(rows, 1 + p, 1.0);
        lagged(&mut restricted, 1, &cols[i]);
        let rss_restricted = match ols_fit(&y, &restricted) {
            Ok(fit) => fit.residual_variance * (rows - 1 - p) as f64,
            Err(Error::Singular(_)) => {
                failed.extend((0..n).filter(|&j| j != i).map(|j| (i, j)));
                continue;
            }
            Err(e) => return Err(e),
        };
        let mut full = DMatrix::from_element(rows, 1 + 2 * p, 1.0);
        full.view_mut((0, 0), (rows, 1 + p)).copy_from(&restricted);
        for j in 0..n {
            if j == i {
                continue;
            }
            lagged(&mut full, 1 + p, &cols[j]);
            match ols_fit(&y, &full) {
                Ok(fit) => {
                    let rss = fit.residual_variance * (rows - 1 - 2 * p) as f64;
                    // nested fits: the unrestricted residual cannot be larger
                    values[(i, j)] = (rss_restricted.ln() - rss.ln()).max(0.0);
                }
                Err(Error::Singular(_)) => failed.push((i, j)),
                Err(e) => return Err(e),
            }
        }
    }
    if values.as_nalgebra().iter().any(|v| !v.is_finite()) {
        return Err(Error::Numerical("non-finite GC value (zero residual)".into()));
    }
    let mut pem = PemMatrix::bare(PemKind::Gc, values);
    pem.order = Some(order);
    pem.delta_hat = order - 1;
    pem.failed_pairs = failed;
    Ok(pem)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Distribution, StandardNormal};

    fn normal(rng: &mut ChaCha8Rng) -> f64 {
        StandardNormal.sample(rng)
    }

    #[test]
    fn independent_noise_is_near_zero() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let len = 2000;
        let values: Vec<f64> = (0..2 * len).map(|_| normal(&mut rng)).collect();
        let ts = TimeSeries::new(2, 1.0, values).unwrap();
        let gc = pem_gc(&ts, 2).unwrap();
        // 2 ln-ratio * T is asymptotically chi^2 with 2 dof; 0.995 quantile ~10.6
        let limit = 10.6 / (2.0 * (len - 2) as f64);
        for (_, _, v) in gc.off_diagonal() {
            assert!((0.0..limit).contains(&v), "{v}");
        }
    }

    #[test]
    fn var_chain_direction() {
        let mut wins = 0;
        for seed in 0..100 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let len = 10_000;
            let mut values = vec![0.0; 2 * len];
            for t in 1..len {
                // x_1 drives x_0 with coefficient 0.9; x_1 is white
                values[2 * t] = 0.9 * values[2 * (t - 1) + 1] + normal(&mut rng);
                values[2 * t + 1] = normal(&mut rng);
            }
            let gc = pem_gc(&TimeSeries::new(2, 1.0, values).unwrap(), 1).unwrap();
            if gc.get(0, 1) > gc.get(1, 0) {
                wins += 1;
            }
        }
        assert!(wins >= 99, "{wins}");
    }

    #[test]
    fn rank_deficiency_flags_pairs() {
        // node 1 is an exact copy of node 0, so its lags duplicate the restricted design
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut values = Vec::new();
        for _ in 0..100 {
            let a = normal(&mut rng);
            values.extend([a, a, normal(&mut rng)]);
        }
        let gc = pem_gc(&TimeSeries::new(3, 1.0, values).unwrap(), 1).unwrap();
        assert!(gc.failed_pairs.contains(&(0, 1)));
        assert!(gc.failed_pairs.contains(&(1, 0)));
        assert_eq!(gc.get(0, 1), 0.0);
        assert!(!gc.failed_pairs.contains(&(2, 0)));
    }

    #[test]
    fn needs_enough_samples() {
        let ts = TimeSeries::new(1, 1.0, vec![0.0; 13]).unwrap();
        assert!(matches!(pem_gc(&ts, 2), Err(Error::InsufficientData(_))));
        assert!(pem_gc(&ts, 0).is_err());
    }

    #[test]
    fn entries_non_negative() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let values: Vec<f64> = (0..4 * 60).map(|_| normal(&mut rng)).collect();
        let gc = pem_gc(&TimeSeries::new(4, 1.0, values).unwrap(), 3).unwrap();
        assert!(gc.off_diagonal().all(|(_, _, v)| v >= 0.0));
        assert_eq!(gc.order, Some(3));
    }
}
