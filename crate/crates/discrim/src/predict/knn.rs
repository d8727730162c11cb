//! K-nearest-neighbor regression over z-score-normalized features.

use serde::{Deserialize, Serialize};

/// Learned state of the KNN predictor: the normalization moments and the
/// normalized training rows with their targets.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub(crate) struct KnnParams {
    pub k: usize,
    pub means: Vec<f64>,
    /// Per-feature population standard deviation; constant features store 1
    /// so normalization is a no-op for them.
    pub stds: Vec<f64>,
    pub rows: Vec<Vec<f64>>,
    pub targets: Vec<f64>,
}

impl KnnParams {
    pub(crate) fn fit(k: usize, raw_rows: &[Vec<f64>], targets: &[f64]) -> Self {
        let n = raw_rows.len();
        let p = raw_rows[0].len();
        let mut means = vec![0.0; p];
        for row in raw_rows {
            for (m, v) in means.iter_mut().zip(row) {
                *m += v;
            }
        }
        for m in &mut means {
            *m /= n as f64;
        }
        let mut stds = vec![0.0; p];
        for row in raw_rows {
            for j in 0..p {
                let d = row[j] - means[j];
                stds[j] += d * d;
            }
        }
        for s in &mut stds {
            *s = (*s / n as f64).sqrt();
            if *s == 0.0 {
                *s = 1.0;
            }
        }
        let rows = raw_rows
            .iter()
            .map(|row| {
                row.iter().zip(means.iter().zip(&stds)).map(|(v, (m, s))| (v - m) / s).collect()
            })
            .collect();
        Self { k, means, stds, rows, targets: targets.to_vec() }
    }

    pub(crate) fn predict(&self, raw_row: &[f64]) -> f64 {
        let query: Vec<f64> = raw_row
            .iter()
            .zip(self.means.iter().zip(&self.stds))
            .map(|(v, (m, s))| (v - m) / s)
            .collect();
        let mut scored: Vec<(f64, usize)> = self
            .rows
            .iter()
            .enumerate()
            .map(|(i, row)| {
                let d2: f64 =
                    row.iter().zip(&query).map(|(a, b)| (a - b) * (a - b)).sum();
                (d2, i)
            })
            .collect();
        scored.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap().then(a.1.cmp(&b.1)));
        let top = &scored[..self.k];
        top.iter().map(|&(_, i)| self.targets[i]).sum::<f64>() / self.k as f64
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn diagonal_fixture() -> KnnParams {
        let rows: Vec<Vec<f64>> = (0..5).map(|i| vec![i as f64, i as f64]).collect();
        let targets: Vec<f64> = (1..=5).map(|i| i as f64).collect();
        KnnParams::fit(2, &rows, &targets)
    }

    #[test]
    fn moments_use_population_std() {
        let p = diagonal_fixture();
        assert_eq!(p.means, [2.0, 2.0]);
        // Population variance of 0..4 is 2, not the sample value 2.5.
        assert_abs_diff_eq!(p.stds[0], 2.0f64.sqrt(), epsilon = 1e-12);
    }

    #[test]
    fn two_nearest_targets_average() {
        // Query (0.9, 0.2): closest normalized rows are (1,1) then (0,0),
        // whose targets are 2 and 1.
        let p = diagonal_fixture();
        assert_abs_diff_eq!(p.predict(&[0.9, 0.2]), 1.5, epsilon = 1e-12);
    }

    #[test]
    fn query_on_a_training_row_with_k1_returns_its_target() {
        let rows: Vec<Vec<f64>> = (0..5).map(|i| vec![i as f64, (i * i) as f64]).collect();
        let targets = vec![10.0, 20.0, 30.0, 40.0, 50.0];
        let p = KnnParams::fit(1, &rows, &targets);
        for (row, t) in rows.iter().zip(&targets) {
            assert_eq!(p.predict(row), *t);
        }
    }

    #[test]
    fn k_equal_to_rows_gives_the_global_mean() {
        let rows: Vec<Vec<f64>> = (0..4).map(|i| vec![i as f64]).collect();
        let targets = vec![1.0, 2.0, 3.0, 6.0];
        let p = KnnParams::fit(4, &rows, &targets);
        assert_eq!(p.predict(&[100.0]), 3.0);
    }

    #[test]
    fn distance_ties_break_by_row_index() {
        // Rows 0 and 1 are equidistant from the origin query.
        let rows = vec![vec![1.0, 0.0], vec![-1.0, 0.0], vec![5.0, 5.0]];
        let targets = vec![100.0, 200.0, 300.0];
        let p = KnnParams::fit(1, &rows, &targets);
        assert_eq!(p.predict(&[0.0, 0.0]), 100.0);
    }

    #[test]
    fn normalization_rescales_wide_features() {
        // Raw distance would pick row 1; z-scored distance picks row 0.
        let rows = vec![vec![1.0, 4000.0], vec![4.0, 100.0]];
        let targets = vec![10.0, 20.0];
        let p = KnnParams::fit(1, &rows, &targets);
        assert_eq!(p.predict(&[1.2, 500.0]), 10.0);
        let raw_d0 = (1.2f64 - 1.0).powi(2) + (500.0f64 - 4000.0).powi(2);
        let raw_d1 = (1.2f64 - 4.0).powi(2) + (500.0f64 - 100.0).powi(2);
        assert!(raw_d1 < raw_d0, "raw distance should favor row 1");
    }

    #[test]
    fn constant_feature_does_not_poison_distances() {
        let rows = vec![vec![7.0, 0.0], vec![7.0, 1.0], vec![7.0, 2.0]];
        let targets = vec![1.0, 2.0, 3.0];
        let p = KnnParams::fit(1, &rows, &targets);
        assert_eq!(p.predict(&[7.0, 1.9]), 3.0);
    }
}
