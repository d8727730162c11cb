//! Discrimination predictors: KNN, CART, and gradient-boosted regression
//! trees fitted on dataset feature tables, plus ranking by
//! regression-then-sort and the evaluation metrics for both tasks.

mod gbdt;
mod knn;
mod metrics;
mod tree;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::textprofile::FeatureVector;

pub use metrics::{average_precision, mean_average_precision, ndcg, rmse};

use gbdt::GbdtParams;
use knn::KnnParams;
use tree::{grow_tree, TreeNode};

/// Which λ column a table (and the models fitted on it) targets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TargetKind {
    Var,
    Sva,
}

impl std::str::FromStr for TargetKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "var" => Ok(TargetKind::Var),
            "sva" => Ok(TargetKind::Sva),
            other => Err(Error::InvalidInput(format!("unknown target kind `{}`", other))),
        }
    }
}

/// One training example: a dataset's features and both λ targets.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainRow {
    pub dataset_id: String,
    pub features: FeatureVector,
    pub target_var: f64,
    pub target_sva: f64,
}

/// Feature/target pairs for fitting, with a fixed feature order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainTable {
    pub feature_names: Vec<String>,
    pub rows: Vec<TrainRow>,
    pub target_kind: TargetKind,
}

impl TrainTable {
    /// Build a table, rejecting duplicate feature names, features outside the
    /// declared list, and non-finite values.
    pub fn new(
        feature_names: Vec<String>,
        rows: Vec<TrainRow>,
        target_kind: TargetKind,
    ) -> Result<Self> {
        let mut seen = std::collections::HashSet::new();
        for name in &feature_names {
            if name.is_empty() || !seen.insert(name.as_str()) {
                return Err(Error::InvalidInput(format!(
                    "feature name `{}` is empty or repeated",
                    name
                )));
            }
        }
        for row in &rows {
            if !row.target_var.is_finite() || !row.target_sva.is_finite() {
                return Err(Error::InvalidInput(format!(
                    "row `{}` has a non-finite target",
                    row.dataset_id
                )));
            }
            for (name, value) in row.features.iter() {
                if !seen.contains(name) {
                    return Err(Error::InvalidInput(format!(
                        "row `{}` has undeclared feature `{}`",
                        row.dataset_id, name
                    )));
                }
                if !value.is_finite() {
                    return Err(Error::InvalidInput(format!(
                        "row `{}` has non-finite feature `{}`",
                        row.dataset_id, name
                    )));
                }
            }
        }
        Ok(Self { feature_names, rows, target_kind })
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// The active target column, per `target_kind`.
    pub fn targets(&self) -> Vec<f64> {
        self.rows
            .iter()
            .map(|r| match self.target_kind {
                TargetKind::Var => r.target_var,
                TargetKind::Sva => r.target_sva,
            })
            .collect()
    }
}

/// A group of datasets ranked together.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankGroup {
    pub group_id: String,
    pub members: Vec<GroupMember>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupMember {
    pub dataset_id: String,
    pub features: FeatureVector,
    /// True discrimination value, used as the ranking gain.
    pub target: f64,
}

impl RankGroup {
    pub fn new(group_id: impl Into<String>, members: Vec<GroupMember>) -> Result<Self> {
        if members.len() < 2 {
            return Err(Error::InvalidInput("a rank group needs at least 2 members".into()));
        }
        Ok(Self { group_id: group_id.into(), members })
    }
}

/// Predictor family of a fitted model.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelKind {
    Knn,
    Cart,
    Gbdt,
}

impl std::fmt::Display for ModelKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            ModelKind::Knn => "knn",
            ModelKind::Cart => "cart",
            ModelKind::Gbdt => "gbdt",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum ModelParams {
    Knn(KnnParams),
    Cart { max_depth: usize, min_leaf: usize, tree: TreeNode },
    Gbdt(GbdtParams),
}

/// A fitted predictor: feature order, imputation medians, and the learned
/// parameters of one model family.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PredictorModel {
    pub feature_names: Vec<String>,
    /// Per-feature training median used to fill missing features, aligned
    /// with `feature_names`.
    pub medians: Vec<f64>,
    pub target_kind: TargetKind,
    params: ModelParams,
}

/// On-disk wrapper that pins the serialization format.
const MODEL_FORMAT: &str = "discrim-model/v1";

#[derive(Serialize, Deserialize)]
struct ModelFile {
    format: String,
    model: PredictorModel,
}

impl PredictorModel {
    pub fn kind(&self) -> ModelKind {
        match self.params {
            ModelParams::Knn(_) => ModelKind::Knn,
            ModelParams::Cart { .. } => ModelKind::Cart,
            ModelParams::Gbdt(_) => ModelKind::Gbdt,
        }
    }

    /// Predict one feature vector. Declared features that are absent fall
    /// back to the stored medians; features outside the model's list are
    /// ignored.
    pub fn predict(&self, features: &FeatureVector) -> f64 {
        let row = self.to_row(features);
        match &self.params {
            ModelParams::Knn(p) => p.predict(&row),
            ModelParams::Cart { tree, .. } => tree.predict(&row),
            ModelParams::Gbdt(p) => p.predict(&row),
        }
    }

    fn to_row(&self, features: &FeatureVector) -> Vec<f64> {
        self.feature_names
            .iter()
            .zip(&self.medians)
            .map(|(name, median)| features.get(name).unwrap_or(*median))
            .collect()
    }

    /// Split counts per feature across all trees; features never split map
    /// to 0. Only tree-based models have split counts.
    pub fn feature_importance(&self) -> Result<BTreeMap<String, u64>> {
        let mut counts = vec![0u64; self.feature_names.len()];
        match &self.params {
            ModelParams::Knn(_) => {
                return Err(Error::InvalidModelKind(
                    "knn has no split counts; feature importance needs a tree model".into(),
                ))
            }
            ModelParams::Cart { tree, .. } => tree.count_splits(&mut counts),
            ModelParams::Gbdt(p) => {
                for tree in &p.trees {
                    tree.count_splits(&mut counts);
                }
            }
        }
        Ok(self
            .feature_names
            .iter()
            .cloned()
            .zip(counts)
            .collect())
    }

    /// Serialize to the versioned JSON model format.
    pub fn to_json(&self) -> Result<String> {
        let file = ModelFile { format: MODEL_FORMAT.to_string(), model: self.clone() };
        Ok(serde_json::to_string_pretty(&file)?)
    }

    /// Parse the versioned JSON model format.
    pub fn from_json(text: &str) -> Result<Self> {
        let file: ModelFile =
            serde_json::from_str(text).map_err(|e| Error::Malformed(format!("model file: {}", e)))?;
        if file.format != MODEL_FORMAT {
            return Err(Error::Malformed(format!(
                "unsupported model format `{}` (expected `{}`)",
                file.format, MODEL_FORMAT
            )));
        }
        Ok(file.model)
    }
}

/// Materialize the table as a dense matrix, imputing absent features with
/// the per-feature training median (0 when a feature is absent everywhere).
fn design_matrix(t: &TrainTable) -> Result<(Vec<Vec<f64>>, Vec<f64>)> {
    if t.rows.is_empty() {
        return Err(Error::InvalidInput("cannot fit on an empty table".into()));
    }
    let medians: Vec<f64> = t
        .feature_names
        .iter()
        .map(|name| {
            let mut values: Vec<f64> =
                t.rows.iter().filter_map(|r| r.features.get(name)).collect();
            if values.is_empty() {
                return 0.0;
            }
            values.sort_by(|a, b| a.partial_cmp(b).unwrap());
            let n = values.len();
            if n % 2 == 1 {
                values[n / 2]
            } else {
                (values[n / 2 - 1] + values[n / 2]) / 2.0
            }
        })
        .collect();
    let rows = t
        .rows
        .iter()
        .map(|r| {
            t.feature_names
                .iter()
                .zip(&medians)
                .map(|(name, median)| r.features.get(name).unwrap_or(*median))
                .collect()
        })
        .collect();
    Ok((rows, medians))
}

/// Fit a k-nearest-neighbor regressor: features are z-score normalized with
/// training moments, prediction is the mean target of the `k` nearest rows
/// under Euclidean distance (distance ties broken by row index).
pub fn fit_knn(t: &TrainTable, k: usize) -> Result<PredictorModel> {
    if k == 0 {
        return Err(Error::InvalidInput("k must be at least 1".into()));
    }
    if k > t.rows.len() {
        return Err(Error::InvalidInput(format!(
            "k = {} exceeds the {} training rows",
            k,
            t.rows.len()
        )));
    }
    let (rows, medians) = design_matrix(t)?;
    let params = KnnParams::fit(k, &rows, &t.targets());
    Ok(PredictorModel {
        feature_names: t.feature_names.clone(),
        medians,
        target_kind: t.target_kind,
        params: ModelParams::Knn(params),
    })
}

/// Fit a single regression tree by greedy variance reduction.
pub fn fit_cart(t: &TrainTable, max_depth: usize, min_leaf: usize) -> Result<PredictorModel> {
    if min_leaf == 0 {
        return Err(Error::InvalidInput("min_leaf must be at least 1".into()));
    }
    let (rows, medians) = design_matrix(t)?;
    let indices: Vec<usize> = (0..rows.len()).collect();
    let tree = grow_tree(&rows, &t.targets(), &indices, max_depth, min_leaf);
    Ok(PredictorModel {
        feature_names: t.feature_names.clone(),
        medians,
        target_kind: t.target_kind,
        params: ModelParams::Cart { max_depth, min_leaf, tree },
    })
}

/// Fit a gradient-boosted tree ensemble: the stage-zero prediction is the
/// target mean, then each stage fits a depth-capped tree to the residuals
/// and is added at the learning rate.
pub fn fit_gbdt(
    t: &TrainTable,
    n_trees: usize,
    learning_rate: f64,
    max_depth: usize,
) -> Result<PredictorModel> {
    if !(learning_rate.is_finite() && learning_rate > 0.0) {
        return Err(Error::InvalidInput(format!(
            "learning rate must be positive, got {}",
            learning_rate
        )));
    }
    let (rows, medians) = design_matrix(t)?;
    let params = GbdtParams::fit(n_trees, learning_rate, max_depth, &rows, &t.targets());
    Ok(PredictorModel {
        feature_names: t.feature_names.clone(),
        medians,
        target_kind: t.target_kind,
        params: ModelParams::Gbdt(params),
    })
}

/// Rank a group's members with a fitted model: rank 1 is the member
/// predicted most discriminative; prediction ties keep input order. The
/// result is aligned with the members (`ranks[i]` is member `i`'s rank).
pub fn rank(m: &PredictorModel, g: &RankGroup) -> Result<Vec<usize>> {
    if g.members.len() < 2 {
        return Err(Error::InvalidInput("a rank group needs at least 2 members".into()));
    }
    let predictions: Vec<f64> = g.members.iter().map(|mem| m.predict(&mem.features)).collect();
    let mut order: Vec<usize> = (0..predictions.len()).collect();
    order.sort_by(|&a, &b| {
        predictions[b].partial_cmp(&predictions[a]).unwrap().then(a.cmp(&b))
    });
    let mut ranks = vec![0usize; predictions.len()];
    for (position, &member) in order.iter().enumerate() {
        ranks[member] = position + 1;
    }
    Ok(ranks)
}
