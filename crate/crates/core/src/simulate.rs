//! Monte Carlo validation: iid draws from the rank model, ensemble MSE of the
//! plug-in entropy against the model entropy, and DKW coverage checks.
//!
//! Every (grid point, trial) pair draws from its own ChaCha8 stream seeded by
//! [`stream_seed`], and per-trial results are reduced in index order. The
//! output is therefore bit-identical for a given seed whatever the size of
//! the rayon pool running it.

use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dkw::{empirical_cdf_deviation, estimate_samples, EstimationMode};
use crate::entropy::{plugin_entropy, shannon_entropy, LogBase, SymbolSequence};
use crate::error::{Error, Result};
use crate::zipf::{RankDistribution, ZipfParams};

/// Points in the default grid.
pub const DEFAULT_GRID_POINTS: usize = 30;
pub const DEFAULT_ENSEMBLE: usize = 200;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed for the substream of trial `trial` at grid index `grid_index`.
pub fn stream_seed(master: u64, grid_index: u64, trial: u64) -> u64 {
    splitmix64(splitmix64(splitmix64(master) ^ grid_index) ^ trial)
}

/// `n` iid draws by inverse-CDF lookup. Symbol id `k` is rank `k + 1`.
pub fn sample_sequence(dist: &RankDistribution, n: usize, stream_seed: u64) -> Result<SymbolSequence> {
    if n == 0 {
        return Err(Error::domain("sample size must be at least 1"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(stream_seed);
    let cdf = dist.cdf();
    let symbols = (0..n)
        .map(|_| {
            let u: f64 = rng.random();
            cdf.partition_point(|&c| c <= u) as u32
        })
        .collect();
    SymbolSequence::new(symbols, dist.alphabet_size())
}

/// Grid axis scaling.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GridScale {
    Log,
    Lin,
}

/// `min,max,points,log|lin`, as taken by `simulate --grid`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub min: u64,
    pub max: u64,
    pub points: usize,
    pub scale: GridScale,
}

impl FromStr for GridSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let usage = |msg: &str| Error::Usage(format!("invalid grid {s:?}: {msg}"));
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        let [min, max, points, scale] = parts[..] else {
            return Err(usage("expected min,max,points,log|lin"));
        };
        let min: u64 = min.parse().map_err(|_| usage("min is not a positive integer"))?;
        let max: u64 = max.parse().map_err(|_| usage("max is not a positive integer"))?;
        let points: usize = points.parse().map_err(|_| usage("points is not a positive integer"))?;
        let scale = match scale {
            "log" => GridScale::Log,
            "lin" => GridScale::Lin,
            _ => return Err(usage("scale must be log or lin")),
        };
        if min < 1 || max < min {
            return Err(usage("need 1 <= min <= max"));
        }
        if points < 1 || (points == 1 && min != max) {
            return Err(usage("need at least two points unless min == max"));
        }
        if points > 100_000 {
            return Err(usage("at most 100000 points"));
        }
        Ok(GridSpec {
            min,
            max,
            points,
            scale,
        })
    }
}

impl GridSpec {
    /// Sample counts rounded to integers; duplicates produced by rounding are
    /// dropped, so the result is strictly increasing.
    pub fn values(&self) -> Vec<u64> {
        if self.points == 1 {
            return vec![self.min];
        }
        let (lo, hi) = (self.min as f64, self.max as f64);
        let steps = (self.points - 1) as f64;
        let mut out: Vec<u64> = (0..self.points)
            .map(|i| {
                let t = i as f64 / steps;
                let v = match self.scale {
                    GridScale::Log => lo * (hi / lo).powf(t),
                    GridScale::Lin => lo + (hi - lo) * t,
                };
                (v.round() as u64).clamp(self.min, self.max)
            })
            .collect();
        out[0] = self.min;
        out[self.points - 1] = self.max;
        out.dedup();
        out
    }

    /// Log grid from 10 to `10 N₀`.
    pub fn default_for(n0_marker: crate::dkw::Count) -> Self {
        let max = n0_marker.saturating_mul(10).clamp(10, u64::MAX as u128);
        GridSpec {
            min: 10,
            max: max as u64,
            points: DEFAULT_GRID_POINTS,
            scale: GridScale::Log,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub alphabet_size: usize,
    pub confidence: f64,
    pub mode: EstimationMode,
    pub ngram_order: usize,
    pub base: LogBase,
    pub n_grid: Vec<u64>,
    pub ensemble: usize,
    #[serde(with = "crate::decimal")]
    pub seed: u64,
}

impl SimConfig {
    fn validate(&self) -> Result<()> {
        if self.ngram_order < 1 {
            return Err(Error::domain("n-gram order must be at least 1"));
        }
        if self.ensemble < 1 {
            return Err(Error::domain("ensemble size must be at least 1"));
        }
        if self.n_grid.is_empty() {
            return Err(Error::domain("sample grid is empty"));
        }
        if self.n_grid.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::domain("sample grid must be strictly increasing"));
        }
        if self.n_grid[0] < self.ngram_order as u64 {
            return Err(Error::domain(format!(
                "every grid point must be at least the n-gram order {}",
                self.ngram_order
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MsePoint {
    pub n: u64,
    pub mse: f64,
    pub mean_estimate: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MseCurve {
    pub config: SimConfig,
    pub true_entropy: f64,
    pub points: Vec<MsePoint>,
    #[serde(with = "crate::decimal")]
    pub n0_marker: crate::dkw::Count,
}

impl MseCurve {
    /// CSV with header `n,mse,mean_estimate`, LF line endings, shortest
    /// round-trip float formatting.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,mse,mean_estimate\n");
        for p in &self.points {
            out.push_str(&format!("{},{:?},{:?}\n", p.n, p.mse, p.mean_estimate));
        }
        out
    }
}

/// Ensemble MSE of the plug-in entropy at every grid point.
///
/// The reference entropy is the model's single-symbol entropy. For iid draws
/// the conditional entropy of any order equals it.
pub fn mse_curve(config: &SimConfig) -> Result<MseCurve> {
    config.validate()?;
    let estimate = estimate_samples(config.alphabet_size, config.confidence, config.mode)?;
    let dist = RankDistribution::from_params(&ZipfParams::new(config.alphabet_size)?);
    let true_entropy = shannon_entropy(dist.probs(), config.base)?;

    let ensemble = config.ensemble;
    let jobs = config.n_grid.len() * ensemble;
    let estimates: Vec<f64> = (0..jobs)
        .into_par_iter()
        .map(|job| {
            let grid_index = job / ensemble;
            let trial = job % ensemble;
            let n = usize::try_from(config.n_grid[grid_index])
                .map_err(|_| Error::domain("grid point does not fit in memory"))?;
            let seed = stream_seed(config.seed, grid_index as u64, trial as u64);
            let seq = sample_sequence(&dist, n, seed)?;
            plugin_entropy(&seq, config.ngram_order, config.base)
        })
        .collect::<Result<_>>()?;

    let points = config
        .n_grid
        .iter()
        .zip(estimates.chunks(ensemble))
        .map(|(&n, hs)| {
            let t = hs.len() as f64;
            MsePoint {
                n,
                mse: hs.iter().map(|h| (h - true_entropy).powi(2)).sum::<f64>() / t,
                mean_estimate: hs.iter().sum::<f64>() / t,
            }
        })
        .collect();

    Ok(MseCurve {
        config: config.clone(),
        true_entropy,
        points,
        n0_marker: estimate.n_total,
    })
}

/// Fraction of `trials` samples of size `n` whose empirical CDF strays more
/// than `epsilon` from the model CDF.
pub fn dkw_violation_rate(
    dist: &RankDistribution,
    n: usize,
    epsilon: f64,
    trials: usize,
    seed: u64,
) -> Result<f64> {
    if n < 1 {
        return Err(Error::domain("sample size must be at least 1"));
    }
    if epsilon.is_nan() || epsilon <= 0.0 {
        return Err(Error::domain(format!("deviation bound must be positive, got {epsilon}")));
    }
    if trials < 1 {
        return Err(Error::domain("need at least one trial"));
    }
    let hits: Vec<bool> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let seq = sample_sequence(dist, n, stream_seed(seed, 0, t as u64))?;
            Ok(empirical_cdf_deviation(&seq, dist)? > epsilon)
        })
        .collect::<Result<_>>()?;
    Ok(hits.iter().filter(|&&h| h).count() as f64 / trials as f64)
}
