//! Regression tree grown by greedy variance reduction, shared by the CART
//! and boosted-ensemble predictors.

use serde::{Deserialize, Serialize};

/// One node of a fitted regression tree. Rows with `value < threshold` go
/// left; everything else goes right.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "node", rename_all = "lowercase")]
pub(crate) enum TreeNode {
    Leaf { value: f64 },
    Split { feature: usize, threshold: f64, left: Box<TreeNode>, right: Box<TreeNode> },
}

impl TreeNode {
    pub(crate) fn predict(&self, row: &[f64]) -> f64 {
        match self {
            TreeNode::Leaf { value } => *value,
            TreeNode::Split { feature, threshold, left, right } => {
                if row[*feature] < *threshold {
                    left.predict(row)
                } else {
                    right.predict(row)
                }
            }
        }
    }

    /// Add this tree's split counts into `counts` (indexed by feature).
    pub(crate) fn count_splits(&self, counts: &mut [u64]) {
        if let TreeNode::Split { feature, left, right, .. } = self {
            counts[*feature] += 1;
            left.count_splits(counts);
            right.count_splits(counts);
        }
    }

    pub(crate) fn depth(&self) -> usize {
        match self {
            TreeNode::Leaf { .. } => 0,
            TreeNode::Split { left, right, .. } => 1 + left.depth().max(right.depth()),
        }
    }
}

/// Grow a tree on the given row indices.
///
/// At each node every feature is scanned in order, with candidate thresholds
/// at midpoints of consecutive distinct sorted values; the split with the
/// strictly largest sum-of-squares reduction wins, so earlier features and
/// lower thresholds win ties. A node becomes a leaf when it reaches
/// `max_depth`, when no split leaves `min_leaf` rows on both sides, or when
/// no split reduces the squared error.
pub(crate) fn grow_tree(
    rows: &[Vec<f64>],
    targets: &[f64],
    indices: &[usize],
    max_depth: usize,
    min_leaf: usize,
) -> TreeNode {
    let n = indices.len();
    let sum: f64 = indices.iter().map(|&i| targets[i]).sum();
    let mean = sum / n as f64;
    if max_depth == 0 || n < 2 * min_leaf.max(1) {
        return TreeNode::Leaf { value: mean };
    }
    let first = targets[indices[0]];
    if indices.iter().all(|&i| targets[i] == first) {
        return TreeNode::Leaf { value: mean };
    }
    let Some((feature, threshold)) = best_split(rows, targets, indices, min_leaf.max(1)) else {
        return TreeNode::Leaf { value: mean };
    };
    let (left_idx, right_idx): (Vec<usize>, Vec<usize>) =
        indices.iter().partition(|&&i| rows[i][feature] < threshold);
    TreeNode::Split {
        feature,
        threshold,
        left: Box::new(grow_tree(rows, targets, &left_idx, max_depth - 1, min_leaf)),
        right: Box::new(grow_tree(rows, targets, &right_idx, max_depth - 1, min_leaf)),
    }
}

fn best_split(
    rows: &[Vec<f64>],
    targets: &[f64],
    indices: &[usize],
    min_leaf: usize,
) -> Option<(usize, f64)> {
    let n = indices.len();
    let n_features = rows[indices[0]].len();
    let total_sum: f64 = indices.iter().map(|&i| targets[i]).sum();
    let total_ss: f64 = indices.iter().map(|&i| targets[i] * targets[i]).sum();
    let parent_sse = total_ss - total_sum * total_sum / n as f64;

    let mut best: Option<(usize, f64, f64)> = None;
    let mut order: Vec<usize> = Vec::with_capacity(n);
    for feature in 0..n_features {
        order.clear();
        order.extend_from_slice(indices);
        order.sort_by(|&a, &b| {
            rows[a][feature].partial_cmp(&rows[b][feature]).unwrap().then(a.cmp(&b))
        });
        let mut left_sum = 0.0;
        let mut left_ss = 0.0;
        for i in 1..n {
            let t = targets[order[i - 1]];
            left_sum += t;
            left_ss += t * t;
            let lo = rows[order[i - 1]][feature];
            let hi = rows[order[i]][feature];
            if lo == hi {
                continue;
            }
            if i < min_leaf || n - i < min_leaf {
                continue;
            }
            let threshold = (lo + hi) / 2.0;
            // Guard against midpoints that collapse onto an endpoint, which
            // would make the `< threshold` partition disagree with the scan.
            if !(lo < threshold && threshold <= hi) {
                continue;
            }
            let right_sum = total_sum - left_sum;
            let right_ss = total_ss - left_ss;
            let nl = i as f64;
            let nr = (n - i) as f64;
            let sse = (left_ss - left_sum * left_sum / nl) + (right_ss - right_sum * right_sum / nr);
            let reduction = parent_sse - sse;
            if reduction > 0.0 && best.map_or(true, |(_, _, r)| reduction > r) {
                best = Some((feature, threshold, reduction));
            }
        }
    }
    best.map(|(f, t, _)| (f, t))
}
