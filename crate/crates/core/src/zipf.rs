//! Normalized Zipf-Mandelbrot-Li rank model.
//!
//! For an alphabet of `M` symbols, random typing gives the rank law
//! `p(r) = γ / (r + β)^α` with the constants fixed by `M` alone:
//!
//! ```text
//!     α = log2(M + 1) / log2(M)
//!     β = M / (M + 1)
//!     γ = M^(α - 1) / (M - 1)^α
//! ```
//!
//! The raw law does not sum to one over `M` ranks, so `γ` is rescaled by
//! `κ = Σ_{r=1..M} γ / (r + β)^α`, giving `γ' = γ / κ`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::{ceil_snapped, neumaier_sum};

/// Model constants for one alphabet size.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZipfParams {
    pub alphabet_size: usize,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub kappa: f64,
    pub gamma_prime: f64,
}

impl ZipfParams {
    /// Derives the constants for an alphabet of `m` symbols. Fails for `m < 2`,
    /// where `α` has a zero denominator.
    pub fn new(m: usize) -> Result<Self> {
        if m < 2 {
            return Err(Error::domain(format!(
                "alphabet size must be at least 2, got {m}"
            )));
        }
        let mf = m as f64;
        let alpha = (mf + 1.0).log2() / mf.log2();
        let beta = mf / (mf + 1.0);
        let gamma = mf.powf(alpha - 1.0) / (mf - 1.0).powf(alpha);
        let kappa = gamma * neumaier_sum((1..=m).map(|r| rank_kernel(r, alpha, beta)));
        Ok(ZipfParams {
            alphabet_size: m,
            alpha,
            beta,
            gamma,
            kappa,
            gamma_prime: gamma / kappa,
        })
    }

    /// `γ' / (r + β)^α` for `1 <= r <= M`.
    pub fn rank_probability(&self, r: usize) -> Result<f64> {
        if r == 0 || r > self.alphabet_size {
            return Err(Error::domain(format!(
                "rank {r} is outside 1..={}",
                self.alphabet_size
            )));
        }
        Ok(self.gamma_prime * rank_kernel(r, self.alpha, self.beta))
    }
}

#[inline]
fn rank_kernel(r: usize, alpha: f64, beta: f64) -> f64 {
    (r as f64 + beta).powf(-alpha)
}

/// Free-function form of [`ZipfParams::new`].
pub fn derive_params(m: usize) -> Result<ZipfParams> {
    ZipfParams::new(m)
}

/// `λ = (M + 1)² / M`, the normalizer of the word-length law.
pub fn li_lambda(m: u64) -> Result<f64> {
    if m < 1 {
        return Err(Error::domain("alphabet size must be at least 1"));
    }
    let mf = m as f64;
    Ok((mf + 1.0) * (mf + 1.0) / mf)
}

/// Probability of one particular word of length `l` under random typing
/// over `m` letters plus a space: `1 / (M (M + 1)^L)`.
///
/// There are `M^L` such words, and `Σ_L M^L p(L) = 1`.
pub fn word_length_probability(m: u64, l: u32) -> Result<f64> {
    if m < 1 {
        return Err(Error::domain("alphabet size must be at least 1"));
    }
    if l < 1 {
        return Err(Error::domain("word length must be at least 1"));
    }
    let mf = m as f64;
    Ok(1.0 / (mf * (mf + 1.0).powf(l as f64)))
}

/// `⌈q M⌉` clamped to `[2, M]`, so that a gap between ranks always exists.
pub fn top_quantile_rank(m: usize, q: f64) -> Result<usize> {
    if m < 2 {
        return Err(Error::domain(format!(
            "alphabet size must be at least 2, got {m}"
        )));
    }
    if !(q > 0.0 && q <= 1.0) {
        return Err(Error::domain(format!("quantile must lie in (0, 1], got {q}")));
    }
    let r = ceil_snapped(q * m as f64) as usize;
    Ok(r.clamp(2, m))
}

/// Gap between two adjacent ranks, plus the probability the estimator
/// divides by.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GapResult {
    /// `p(rank_lo - 1) - p(rank_lo)`.
    pub delta0: f64,
    pub rank_lo: usize,
    /// `p(rank_lo)`.
    pub p0: f64,
}

/// A strictly decreasing probability vector over ranks `1..=M`.
#[derive(Debug, Clone, PartialEq)]
pub struct RankDistribution {
    params: Option<ZipfParams>,
    probs: Vec<f64>,
    cdf: Vec<f64>,
}

impl RankDistribution {
    /// Materializes the model over every rank.
    pub fn from_params(params: &ZipfParams) -> Self {
        let probs: Vec<f64> = (1..=params.alphabet_size)
            .map(|r| params.gamma_prime * rank_kernel(r, params.alpha, params.beta))
            .collect();
        let cdf = cumulative(&probs);
        RankDistribution {
            params: Some(*params),
            probs,
            cdf,
        }
    }

    /// Wraps an arbitrary ranked vector. The entries must be positive,
    /// strictly decreasing and sum to one within `1e-12`.
    pub fn from_probs(probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::domain("distribution must have at least one rank"));
        }
        if let Some(p) = probs.iter().find(|p| !(p.is_finite() && **p > 0.0)) {
            return Err(Error::domain(format!("probability {p} is not positive")));
        }
        if probs.windows(2).any(|w| w[0] <= w[1]) {
            return Err(Error::domain("probabilities must be strictly decreasing"));
        }
        let total = neumaier_sum(probs.iter().copied());
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::domain(format!(
                "probabilities sum to {total}, not 1"
            )));
        }
        let cdf = cumulative(&probs);
        Ok(RankDistribution {
            params: None,
            probs,
            cdf,
        })
    }

    /// `None` when built with [`RankDistribution::from_probs`].
    pub fn params(&self) -> Option<&ZipfParams> {
        self.params.as_ref()
    }

    /// Probabilities, index 0 holding rank 1.
    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    /// Running sums of [`probs`](Self::probs); the last entry is exactly 1.
    pub fn cdf(&self) -> &[f64] {
        &self.cdf
    }

    pub fn alphabet_size(&self) -> usize {
        self.probs.len()
    }

    /// Probability of rank `r`, 1-based.
    pub fn prob(&self, r: usize) -> Result<f64> {
        if r == 0 || r > self.probs.len() {
            return Err(Error::domain(format!(
                "rank {r} is outside 1..={}",
                self.probs.len()
            )));
        }
        Ok(self.probs[r - 1])
    }

    /// The smallest adjacent gap. Under the model it always sits between
    /// the two rarest ranks.
    pub fn min_gap(&self) -> Result<GapResult> {
        let m = self.probs.len();
        if m < 2 {
            return Err(Error::domain(format!(
                "alphabet size must be at least 2, got {m}"
            )));
        }
        Ok(self.gap_at(m))
    }

    /// Gap between ranks `mc - 1` and `mc` of the full distribution. The
    /// probabilities are not renormalized over the truncated alphabet.
    pub fn coarse_gap(&self, mc: usize) -> Result<GapResult> {
        let m = self.probs.len();
        if mc < 2 || mc > m {
            return Err(Error::domain(format!(
                "effective alphabet size must lie in 2..={m}, got {mc}"
            )));
        }
        Ok(self.gap_at(mc))
    }

    fn gap_at(&self, r: usize) -> GapResult {
        GapResult {
            delta0: self.probs[r - 2] - self.probs[r - 1],
            rank_lo: r,
            p0: self.probs[r - 1],
        }
    }
}

/// Free-function form of [`RankDistribution::from_params`].
pub fn build_distribution(params: &ZipfParams) -> RankDistribution {
    RankDistribution::from_params(params)
}

fn cumulative(probs: &[f64]) -> Vec<f64> {
    let mut acc = 0.0;
    let mut cdf: Vec<f64> = probs
        .iter()
        .map(|p| {
            acc += p;
            acc
        })
        .collect();
    if let Some(last) = cdf.last_mut() {
        *last = 1.0;
    }
    cdf
}
