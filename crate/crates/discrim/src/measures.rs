//! Discrimination measures over top-system score lists: performance variance,
//! scaled performance variance, and the paired-bootstrap hit rate, plus the
//! tie-aware Spearman correlation used to compare them.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::stats;

/// Scores of `k` top systems on one dataset, with the metric's upper limit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PerformanceList {
    pub dataset_id: String,
    /// Scores in percentage points (e.g. accuracy in `[0, 100]`).
    pub scores: Vec<f64>,
    /// System identifiers aligned with `scores`.
    pub system_ids: Vec<String>,
    /// Upper limit `u` of the metric, same units as `scores`.
    pub upper_limit: f64,
}

impl PerformanceList {
    pub fn new(
        dataset_id: impl Into<String>,
        scores: Vec<f64>,
        system_ids: Vec<String>,
        upper_limit: f64,
    ) -> Result<Self> {
        if scores.len() != system_ids.len() {
            return Err(Error::InvalidInput(format!(
                "{} scores but {} system ids",
                scores.len(),
                system_ids.len()
            )));
        }
        if scores.len() < 2 {
            return Err(Error::InvalidInput("need at least 2 scores".into()));
        }
        if scores.iter().any(|s| !s.is_finite()) || !upper_limit.is_finite() {
            return Err(Error::InvalidInput("scores and upper limit must be finite".into()));
        }
        Ok(Self { dataset_id: dataset_id.into(), scores, system_ids, upper_limit })
    }
}

/// Per-sample correctness of `k` systems on one test set (cells are 0/1).
#[derive(Debug, Clone, PartialEq)]
pub struct PredictionMatrix {
    pub dataset_id: String,
    pub sample_ids: Vec<String>,
    pub system_ids: Vec<String>,
    /// Row-major `n x k` correctness cells.
    correctness: Vec<u8>,
}

impl PredictionMatrix {
    /// Build from per-sample rows; every cell must be 0 or 1, `n >= 1`, `k >= 2`.
    pub fn new(
        dataset_id: impl Into<String>,
        sample_ids: Vec<String>,
        system_ids: Vec<String>,
        rows: Vec<Vec<u8>>,
    ) -> Result<Self> {
        let n = sample_ids.len();
        let k = system_ids.len();
        if n == 0 {
            return Err(Error::InvalidInput("prediction matrix needs at least 1 sample".into()));
        }
        if k < 2 {
            return Err(Error::InvalidInput("prediction matrix needs at least 2 systems".into()));
        }
        if rows.len() != n {
            return Err(Error::InvalidInput(format!("{} sample ids but {} rows", n, rows.len())));
        }
        let mut correctness = Vec::with_capacity(n * k);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != k {
                return Err(Error::InvalidInput(format!(
                    "row {} has {} cells, expected {}",
                    i,
                    row.len(),
                    k
                )));
            }
            for &cell in row {
                if cell > 1 {
                    return Err(Error::InvalidInput(format!("cell value {} is not 0/1", cell)));
                }
                correctness.push(cell);
            }
        }
        Ok(Self { dataset_id: dataset_id.into(), sample_ids, system_ids, correctness })
    }

    pub fn n_samples(&self) -> usize {
        self.sample_ids.len()
    }

    pub fn n_systems(&self) -> usize {
        self.system_ids.len()
    }

    #[inline]
    pub fn correct(&self, sample: usize, system: usize) -> u8 {
        self.correctness[sample * self.n_systems() + system]
    }

    /// Number of samples the system gets right on the full test set.
    pub fn column_total(&self, system: usize) -> u64 {
        (0..self.n_samples()).map(|r| self.correct(r, system) as u64).sum()
    }

    /// Full-test-set accuracy of one system, in percentage points.
    pub fn accuracy(&self, system: usize) -> f64 {
        self.column_total(system) as f64 / self.n_samples() as f64 * 100.0
    }
}

/// Discrimination summary for one dataset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscriminationReport {
    pub dataset_id: String,
    pub lambda_var: f64,
    pub lambda_sva: f64,
    pub lambda_hit: Option<f64>,
    pub k: usize,
}

impl DiscriminationReport {
    /// Variance-based measures only; the hit rate can be attached later.
    pub fn from_performance(p: &PerformanceList) -> Result<Self> {
        Ok(Self {
            dataset_id: p.dataset_id.clone(),
            lambda_var: perf_variance(p)?,
            lambda_sva: scaled_perf_variance(p)?,
            lambda_hit: None,
            k: p.scores.len(),
        })
    }
}

/// Sample standard deviation (divisor `k - 1`) of the score list.
pub fn perf_variance(p: &PerformanceList) -> Result<f64> {
    let k = p.scores.len();
    if k < 2 {
        return Err(Error::InvalidInput("need at least 2 scores".into()));
    }
    let mean = p.scores.iter().sum::<f64>() / k as f64;
    let ss = p.scores.iter().map(|s| (s - mean) * (s - mean)).sum::<f64>();
    Ok((ss / (k - 1) as f64).sqrt())
}

/// Performance variance scaled by the headroom `u - Avg(v)`. The value is
/// passed through unmodified when the mean exceeds the upper limit, so it can
/// be negative.
pub fn scaled_perf_variance(p: &PerformanceList) -> Result<f64> {
    let var = perf_variance(p)?;
    let mean = p.scores.iter().sum::<f64>() / p.scores.len() as f64;
    Ok(var * (p.upper_limit - mean))
}

/// How subset ties between two systems are credited.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TiePolicy {
    /// A tied subset is a non-hit (literal reading of "frequency of wins").
    Zero,
    /// A tied subset counts 0.5, matching significance-test convention.
    Half,
}

impl std::str::FromStr for TiePolicy {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "zero" => Ok(TiePolicy::Zero),
            "half" => Ok(TiePolicy::Half),
            other => Err(Error::InvalidInput(format!("unknown tie policy `{}`", other))),
        }
    }
}

/// Resampling parameters for the hit-rate measures.
#[derive(Debug, Clone, PartialEq)]
pub struct BootstrapConfig {
    /// Fraction of the test set drawn per iteration, in `(0, 1]`.
    pub subset_ratio: f64,
    /// Number of resampling iterations `T`.
    pub iterations: u32,
    pub seed: u64,
    pub tie_policy: TiePolicy,
    /// Draw rows with replacement (bootstrap) or without (subsampling).
    pub with_replacement: bool,
}

impl Default for BootstrapConfig {
    fn default() -> Self {
        Self {
            subset_ratio: 0.8,
            iterations: 1000,
            seed: 42,
            tie_policy: TiePolicy::Zero,
            with_replacement: true,
        }
    }
}

impl BootstrapConfig {
    fn validate(&self) -> Result<()> {
        if !(self.subset_ratio > 0.0 && self.subset_ratio <= 1.0) {
            return Err(Error::InvalidInput(format!(
                "subset ratio must be in (0, 1], got {}",
                self.subset_ratio
            )));
        }
        if self.iterations == 0 {
            return Err(Error::InvalidInput("need at least 1 iteration".into()));
        }
        Ok(())
    }
}

/// One oriented pairwise comparison: `p` is the frequency with which the
/// full-set-better system also wins on resampled subsets.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairHit {
    /// Index of the full-set-better system.
    pub better: usize,
    /// Index of the full-set-worse system.
    pub worse: usize,
    pub p: f64,
}

/// Frequency over `T` paired resamples with which the system that is better
/// on the full set also wins on the subset.
///
/// The pair is oriented internally: the system with the higher full-set score
/// takes the "better" role; exact full-set ties are oriented by ascending
/// system id, so the argument order of `i` and `j` never matters. Each
/// iteration draws the same row indices for both systems and runs on its own
/// RNG stream derived from `(seed, iteration)`, so results are reproducible
/// and independent of evaluation order.
pub fn pairwise_hit(
    m: &PredictionMatrix,
    i: usize,
    j: usize,
    cfg: &BootstrapConfig,
) -> Result<f64> {
    let (_, _, p) = oriented_pairwise_hit(m, i, j, cfg)?;
    Ok(p)
}

fn oriented_pairwise_hit(
    m: &PredictionMatrix,
    i: usize,
    j: usize,
    cfg: &BootstrapConfig,
) -> Result<(usize, usize, f64)> {
    cfg.validate()?;
    let k = m.n_systems();
    if i >= k || j >= k {
        return Err(Error::InvalidInput(format!(
            "system index out of range: {} / {} with k = {}",
            i, j, k
        )));
    }
    if i == j {
        return Err(Error::InvalidInput("cannot compare a system with itself".into()));
    }

    let (ti, tj) = (m.column_total(i), m.column_total(j));
    let (better, worse) = if ti > tj {
        (i, j)
    } else if tj > ti {
        (j, i)
    } else if m.system_ids[i] <= m.system_ids[j] {
        (i, j)
    } else {
        (j, i)
    };

    let n = m.n_samples();
    let subset = (cfg.subset_ratio * n as f64).ceil() as usize;
    let base = ChaCha8Rng::seed_from_u64(cfg.seed);

    let mut wins = 0u64;
    let mut ties = 0u64;
    for t in 0..cfg.iterations {
        let mut rng = base.clone();
        rng.set_stream(t as u64);
        let (sum_b, sum_w) = if cfg.with_replacement {
            let mut sb = 0u64;
            let mut sw = 0u64;
            for _ in 0..subset {
                let r = rng.gen_range(0..n);
                sb += m.correct(r, better) as u64;
                sw += m.correct(r, worse) as u64;
            }
            (sb, sw)
        } else {
            let mut sb = 0u64;
            let mut sw = 0u64;
            for r in rand::seq::index::sample(&mut rng, n, subset) {
                sb += m.correct(r, better) as u64;
                sw += m.correct(r, worse) as u64;
            }
            (sb, sw)
        };
        // Paired draws share the subset size, so comparing sums is comparing means.
        if sum_b > sum_w {
            wins += 1;
        } else if sum_b == sum_w {
            ties += 1;
        }
    }

    let credit = match cfg.tie_policy {
        TiePolicy::Zero => 0.0,
        TiePolicy::Half => ties as f64 * 0.5,
    };
    Ok((better, worse, (wins as f64 + credit) / cfg.iterations as f64))
}

/// All `C(k, 2)` oriented pairwise hit frequencies. Each pair resamples under
/// its own seed derived from `(cfg.seed, pair index)`.
pub fn pairwise_hits(m: &PredictionMatrix, cfg: &BootstrapConfig) -> Result<Vec<PairHit>> {
    cfg.validate()?;
    let k = m.n_systems();
    let mut out = Vec::with_capacity(k * (k - 1) / 2);
    let mut pair_idx = 0u64;
    for i in 0..k {
        for j in (i + 1)..k {
            let pair_cfg = BootstrapConfig { seed: mix_seed(cfg.seed, pair_idx), ..cfg.clone() };
            let (better, worse, p) = oriented_pairwise_hit(m, i, j, &pair_cfg)?;
            out.push(PairHit { better, worse, p });
            pair_idx += 1;
        }
    }
    Ok(out)
}

/// Mean pairwise hit frequency over all unordered system pairs.
pub fn hit_rate(m: &PredictionMatrix, cfg: &BootstrapConfig) -> Result<f64> {
    let pairs = pairwise_hits(m, cfg)?;
    Ok(pairs.iter().map(|p| p.p).sum::<f64>() / pairs.len() as f64)
}

/// SplitMix64 step, used to derive independent per-pair seeds.
fn mix_seed(seed: u64, salt: u64) -> u64 {
    let mut z = seed.wrapping_add(salt.wrapping_mul(0x9E37_79B9_7F4A_7C15)).wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Tie-aware Spearman rank correlation with a two-sided t-approximation
/// p-value (`t = rho * sqrt((n-2)/(1-rho^2))`, `n - 2` degrees of freedom).
pub fn spearman(x: &[f64], y: &[f64]) -> Result<(f64, f64)> {
    if x.len() != y.len() {
        return Err(Error::InvalidInput(format!(
            "length mismatch: {} vs {}",
            x.len(),
            y.len()
        )));
    }
    if x.len() < 3 {
        return Err(Error::InvalidInput("need at least 3 observations".into()));
    }
    if x.iter().chain(y).any(|v| !v.is_finite()) {
        return Err(Error::InvalidInput("observations must be finite".into()));
    }
    let rx = stats::average_ranks(x);
    let ry = stats::average_ranks(y);
    let rho = stats::pearson(&rx, &ry)
        .ok_or_else(|| Error::UndefinedCorrelation("constant ranks on one side".into()))?;
    let rho = rho.clamp(-1.0, 1.0);

    let n = x.len() as f64;
    let p = if rho.abs() >= 1.0 {
        0.0
    } else {
        let t = rho * ((n - 2.0) / (1.0 - rho * rho)).sqrt();
        stats::t_two_sided_p(t, n - 2.0)
    };
    Ok((rho, p))
}
