//! Regression and ranking evaluation: RMSE, NDCG with min-max-normalized
//! gains, and (mean) average precision over thresholded relevance.

use crate::error::{Error, Result};

/// Root mean squared error between predictions and gold values.
pub fn rmse(pred: &[f64], gold: &[f64]) -> Result<f64> {
    if pred.len() != gold.len() {
        return Err(Error::InvalidInput(format!(
            "length mismatch: {} predictions vs {} gold values",
            pred.len(),
            gold.len()
        )));
    }
    if pred.is_empty() {
        return Err(Error::InvalidInput("need at least 1 value".into()));
    }
    let mse = pred.iter().zip(gold).map(|(p, g)| (p - g) * (p - g)).sum::<f64>()
        / gold.len() as f64;
    Ok(mse.sqrt())
}

/// Normalized discounted cumulative gain of one ranked group.
///
/// The input is the members' TRUE targets arranged in predicted rank order.
/// Targets are min-max normalized within the group to [0, 1] gains, the DCG
/// discounts position `i` (1-based) by `log2(i + 1)`, and the result is
/// normalized by the DCG of the descending-gain order. A group whose targets
/// are all equal scores 1 for any order.
pub fn ndcg(true_targets_in_predicted_order: &[f64]) -> Result<f64> {
    let targets = true_targets_in_predicted_order;
    if targets.is_empty() {
        return Err(Error::InvalidInput("need at least 1 member".into()));
    }
    if targets.iter().any(|t| !t.is_finite()) {
        return Err(Error::InvalidInput("targets must be finite".into()));
    }
    let lo = targets.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = targets.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if lo == hi {
        return Ok(1.0);
    }
    let gains: Vec<f64> = targets.iter().map(|t| (t - lo) / (hi - lo)).collect();
    let dcg = discounted_sum(&gains);
    let mut ideal = gains.clone();
    ideal.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let idcg = discounted_sum(&ideal);
    if idcg == 0.0 {
        return Ok(1.0);
    }
    Ok(dcg / idcg)
}

fn discounted_sum(gains: &[f64]) -> f64 {
    gains
        .iter()
        .enumerate()
        .map(|(i, g)| g / ((i + 2) as f64).log2())
        .sum()
}

/// Average precision of one ranked group: the mean, over relevant positions,
/// of the precision at that position. A group with nothing relevant scores 1
/// (nothing to retrieve, nothing wrong).
pub fn average_precision(relevance_in_predicted_order: &[bool]) -> Result<f64> {
    let rel = relevance_in_predicted_order;
    if rel.is_empty() {
        return Err(Error::InvalidInput("need at least 1 member".into()));
    }
    let mut hits = 0u64;
    let mut sum = 0.0;
    for (i, &r) in rel.iter().enumerate() {
        if r {
            hits += 1;
            sum += hits as f64 / (i + 1) as f64;
        }
    }
    if hits == 0 {
        return Ok(1.0);
    }
    Ok(sum / hits as f64)
}

/// Mean average precision over several ranked groups.
pub fn mean_average_precision(groups: &[Vec<bool>]) -> Result<f64> {
    if groups.is_empty() {
        return Err(Error::InvalidInput("need at least 1 group".into()));
    }
    let mut total = 0.0;
    for g in groups {
        total += average_precision(g)?;
    }
    Ok(total / groups.len() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use itertools::Itertools;

    #[test]
    fn rmse_examples() {
        assert_eq!(rmse(&[1.0, 2.0, 3.0], &[1.0, 2.0, 3.0]).unwrap(), 0.0);
        assert_eq!(rmse(&[2.0, 3.0, 4.0], &[1.0, 2.0, 3.0]).unwrap(), 1.0);
        assert_abs_diff_eq!(
            rmse(&[0.0, 0.0], &[3.0, 4.0]).unwrap(),
            (25.0f64 / 2.0).sqrt(),
            epsilon = 1e-9
        );
        assert_abs_diff_eq!(rmse(&[0.0, 0.0], &[3.0, 4.0]).unwrap(), 3.5355, epsilon = 1e-4);
        assert!(rmse(&[1.0], &[1.0, 2.0]).is_err());
        assert!(rmse(&[], &[]).is_err());
    }

    #[test]
    fn ideal_order_scores_one() {
        assert_eq!(ndcg(&[9.0, 4.0, 2.0, 1.0]).unwrap(), 1.0);
    }

    #[test]
    fn two_item_worse_first_matches_hand_value() {
        let v = ndcg(&[0.0, 1.0]).unwrap();
        assert_abs_diff_eq!(v, 1.0 / 3.0f64.log2(), epsilon = 1e-9);
        assert_abs_diff_eq!(v, 0.6309, epsilon = 1e-4);
    }

    #[test]
    fn equal_gains_score_one_for_any_order() {
        assert_eq!(ndcg(&[5.0, 5.0, 5.0]).unwrap(), 1.0);
        assert_eq!(ndcg(&[5.0]).unwrap(), 1.0);
    }

    #[test]
    fn ndcg_is_scale_and_shift_invariant_in_targets() {
        let base = [3.0, 1.0, 4.0, 1.5];
        let moved: Vec<f64> = base.iter().map(|t| t * 12.0 - 7.0).collect();
        assert_abs_diff_eq!(
            ndcg(&base).unwrap(),
            ndcg(&moved).unwrap(),
            epsilon = 1e-12
        );
    }

    /// Oracle NDCG: the definition written out directly, no shared helpers.
    fn oracle_ndcg(order: &[f64]) -> f64 {
        let lo = order.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = order.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        if lo == hi {
            return 1.0;
        }
        let dcg = |xs: &[f64]| -> f64 {
            xs.iter()
                .enumerate()
                .map(|(i, t)| ((t - lo) / (hi - lo)) / ((i as f64) + 2.0).log2())
                .sum()
        };
        let mut ideal = order.to_vec();
        ideal.sort_by(|a, b| b.partial_cmp(a).unwrap());
        dcg(order) / dcg(&ideal)
    }

    #[test]
    fn ndcg_matches_oracle_on_all_short_permutations() {
        for values in [
            vec![0.3, 0.1],
            vec![1.0, 2.0, 3.0],
            vec![0.3, 0.1, 0.9, 0.5],
            vec![0.3, 0.1, 0.9, 0.5, 0.2],
            vec![1.0, 1.0, 2.0, 3.0, 3.0],
        ] {
            let n = values.len();
            let mut best = f64::NEG_INFINITY;
            for perm in values.iter().cloned().permutations(n) {
                let mine = ndcg(&perm).unwrap();
                assert_abs_diff_eq!(mine, oracle_ndcg(&perm), epsilon = 1e-9);
                assert!((0.0..=1.0 + 1e-12).contains(&mine));
                best = best.max(mine);
            }
            // The descending permutation attains the maximum.
            let mut ideal = values.clone();
            ideal.sort_by(|a, b| b.partial_cmp(a).unwrap());
            assert_abs_diff_eq!(ndcg(&ideal).unwrap(), best, epsilon = 1e-9);
            assert_abs_diff_eq!(best, 1.0, epsilon = 1e-9);
        }
    }

    #[test]
    fn average_precision_examples() {
        assert_eq!(average_precision(&[true, true, false]).unwrap(), 1.0);
        assert_eq!(average_precision(&[false, true]).unwrap(), 0.5);
        let v = average_precision(&[true, false, true]).unwrap();
        assert_abs_diff_eq!(v, (1.0 + 2.0 / 3.0) / 2.0, epsilon = 1e-9);
        assert_abs_diff_eq!(v, 0.8333, epsilon = 1e-4);
    }

    #[test]
    fn empty_relevance_scores_one() {
        assert_eq!(average_precision(&[false, false, false]).unwrap(), 1.0);
    }

    /// Oracle AP: the textbook sum written out directly.
    fn oracle_ap(rel: &[bool]) -> f64 {
        let total: usize = rel.iter().filter(|&&r| r).count();
        if total == 0 {
            return 1.0;
        }
        let mut sum = 0.0;
        for i in 0..rel.len() {
            if rel[i] {
                let seen = rel[..=i].iter().filter(|&&r| r).count();
                sum += seen as f64 / (i + 1) as f64;
            }
        }
        sum / total as f64
    }

    #[test]
    fn ap_matches_oracle_on_all_short_permutations() {
        for n in 1..=5usize {
            for bits in 0..(1u32 << n) {
                let rel: Vec<bool> = (0..n).map(|i| bits >> i & 1 == 1).collect();
                for perm in rel.iter().cloned().permutations(n) {
                    assert_abs_diff_eq!(
                        average_precision(&perm).unwrap(),
                        oracle_ap(&perm),
                        epsilon = 1e-9
                    );
                }
                // Relevant-first ordering is maximal.
                let mut sorted = rel.clone();
                sorted.sort_by_key(|r| !*r);
                let best = average_precision(&sorted).unwrap();
                for perm in rel.iter().cloned().permutations(n) {
                    assert!(average_precision(&perm).unwrap() <= best + 1e-12);
                }
                if rel.iter().any(|&r| r) {
                    assert_eq!(best, 1.0);
                }
            }
        }
    }

    #[test]
    fn map_averages_group_aps() {
        let groups = vec![vec![true, false], vec![false, true]];
        assert_abs_diff_eq!(
            mean_average_precision(&groups).unwrap(),
            (1.0 + 0.5) / 2.0,
            epsilon = 1e-12
        );
        assert!(mean_average_precision(&[]).is_err());
    }
}
