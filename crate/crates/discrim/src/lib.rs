//! Quantify how well a benchmark dataset separates top-scoring systems, and
//! predict that separation from intrinsic dataset features.
//!
//! The library is organized around four stages:
//!
//! * [`measures`] — discrimination measures over leaderboard-style score
//!   lists: performance variance, scaled performance variance, and a paired
//!   bootstrap hit rate, plus tie-aware Spearman correlation between them.
//! * [`textprofile`] — intrinsic features of a labeled text dataset (length,
//!   label balance, lexical richness, PMI, perplexity, readability, ...)
//!   with pluggable scorers for the model-backed features.
//! * [`predict`] — from-scratch KNN / CART / GBDT regressors mapping feature
//!   vectors to discrimination targets, ranked-list evaluation (NDCG, MAP),
//!   and split-count feature importance.
//! * [`corpusops`] — corpus construction: quantile splits of a dataset into
//!   sub-datasets, joining features with scores into training tables, rank
//!   groups, and holdout splits.
//!
//! File formats shared with the `discrim` CLI live in [`formats`].

pub mod corpusops;
pub mod error;
pub mod formats;
pub mod measures;
pub mod predict;
pub mod textprofile;

mod stats;

pub use error::{Error, Result};
