//! Gradient-boosted regression trees: stagewise least-squares fitting of
//! shallow trees to residuals.

use serde::{Deserialize, Serialize};

use super::tree::{grow_tree, TreeNode};

/// Minimum rows per leaf inside boosted trees.
const BOOST_MIN_LEAF: usize = 2;

/// Learned state of the boosted ensemble. The prediction is
/// `base + learning_rate * sum(tree_m(x))`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub(crate) struct GbdtParams {
    pub n_trees: usize,
    pub learning_rate: f64,
    pub max_depth: usize,
    /// Stage-zero prediction: the training-target mean.
    pub base: f64,
    pub trees: Vec<TreeNode>,
}

impl GbdtParams {
    pub(crate) fn fit(
        n_trees: usize,
        learning_rate: f64,
        max_depth: usize,
        rows: &[Vec<f64>],
        targets: &[f64],
    ) -> Self {
        let n = rows.len();
        let base = targets.iter().sum::<f64>() / n as f64;
        let indices: Vec<usize> = (0..n).collect();
        let mut predictions = vec![base; n];
        let mut trees = Vec::with_capacity(n_trees);
        for _ in 0..n_trees {
            let residuals: Vec<f64> =
                targets.iter().zip(&predictions).map(|(t, p)| t - p).collect();
            let tree = grow_tree(rows, &residuals, &indices, max_depth, BOOST_MIN_LEAF);
            for (i, row) in rows.iter().enumerate() {
                predictions[i] += learning_rate * tree.predict(row);
            }
            trees.push(tree);
        }
        Self { n_trees, learning_rate, max_depth, base, trees }
    }

    pub(crate) fn predict(&self, row: &[f64]) -> f64 {
        let boost: f64 = self.trees.iter().map(|t| t.predict(row)).sum();
        self.base + self.learning_rate * boost
    }
}
