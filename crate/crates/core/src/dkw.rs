//! Sample-count bounds from the Dvoretzky-Kiefer-Wolfowitz inequality with
//! Massart's constant, `P{sup |F_n - F| > ε} <= 2 exp(-2 n ε²)`.
//!
//! Setting the right side to `1 - ζ` and solving for `n` gives
//! `n = ln(2 / (1 - ζ)) / (2 ε²)`. Two adjacent ranked probabilities that
//! differ by `Δ₀` stay distinguishable when `ε = Δ₀ / 4`, which yields
//! `n₀ = (8 / Δ₀²) ln(2 / (1 - ζ))` events of the reference symbol and
//! `N₀ = n₀ / p₀` draws in total.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::entropy::SymbolSequence;
use crate::error::{Error, Result};
use crate::numeric::ceil_snapped;
use crate::zipf::{top_quantile_rank, RankDistribution, ZipfParams};

/// Confidence levels at or above this are rejected: `ln(2 / (1 - ζ))`
/// diverges as `ζ → 1`.
pub const MAX_CONFIDENCE: f64 = 1.0 - 1e-12;

fn check_confidence(confidence: f64) -> Result<()> {
    if confidence > 0.0 && confidence < MAX_CONFIDENCE {
        Ok(())
    } else {
        Err(Error::domain(format!(
            "confidence must lie in (0, 1 - 1e-12), got {confidence}"
        )))
    }
}

/// Counts are `u128`: the observation count grows roughly like `M⁵` and
/// leaves the `u64` range near `M = 1350`.
pub type Count = u128;

fn to_count(x: f64) -> Result<Count> {
    let c = ceil_snapped(x);
    // 2^128 is exactly representable; anything at or above it does not fit.
    if c.is_nan() || c >= 2f64.powi(128) {
        return Err(Error::domain(format!("sample count {x} does not fit in 128 bits")));
    }
    Ok(c as Count)
}

/// `ln(2 / (1 - ζ)) / (2 ε₀²)` before rounding.
pub fn dkw_sample_bound(epsilon: f64, confidence: f64) -> Result<f64> {
    if !(epsilon > 0.0 && epsilon.is_finite()) {
        return Err(Error::domain(format!("deviation bound must be positive, got {epsilon}")));
    }
    check_confidence(confidence)?;
    Ok((2.0 / (1.0 - confidence)).ln() / (2.0 * epsilon * epsilon))
}

/// Number of iid draws after which `sup |F_n - F| <= ε₀` holds with
/// probability at least `ζ`, rounded up.
pub fn dkw_sample_count(epsilon: f64, confidence: f64) -> Result<Count> {
    to_count(dkw_sample_bound(epsilon, confidence)?)
}

/// Discrimination radius `Δ₀ / 4`.
pub fn epsilon_from_gap(delta0: f64) -> Result<f64> {
    if !(delta0 > 0.0 && delta0.is_finite()) {
        return Err(Error::domain(format!("probability gap must be positive, got {delta0}")));
    }
    Ok(delta0 / 4.0)
}

fn check_gap(delta0: f64) -> Result<()> {
    if delta0 > 0.0 && delta0 < 1.0 {
        Ok(())
    } else {
        Err(Error::domain(format!("probability gap must lie in (0, 1), got {delta0}")))
    }
}

/// `(8 / Δ₀²) ln(2 / (1 - ζ))` before rounding.
pub fn event_count_real(delta0: f64, confidence: f64) -> Result<f64> {
    check_gap(delta0)?;
    dkw_sample_bound(epsilon_from_gap(delta0)?, confidence)
}

/// `⌈(8 / Δ₀²) ln(2 / (1 - ζ))⌉`.
pub fn event_count_bound(delta0: f64, confidence: f64) -> Result<Count> {
    to_count(event_count_real(delta0, confidence)?)
}

/// `⌈n₀ / p₀⌉`.
pub fn observation_count(n0: Count, p0: f64) -> Result<Count> {
    if n0 < 1 {
        return Err(Error::domain("event count must be at least 1"));
    }
    if !(p0 > 0.0 && p0 < 1.0) {
        return Err(Error::domain(format!("reference probability must lie in (0, 1), got {p0}")));
    }
    to_count(n0 as f64 / p0)
}

/// Which pair of adjacent ranks sets the gap.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EstimationMode {
    /// The two rarest ranks.
    Full,
    /// Ranks `mc - 1` and `mc`.
    Coarse { mc: usize },
    /// Ranks `r - 1` and `r` with `r = ⌈q M⌉`.
    TopQuantile { q: f64 },
}

impl fmt::Display for EstimationMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EstimationMode::Full => write!(f, "full"),
            EstimationMode::Coarse { mc } => write!(f, "coarse(mc={mc})"),
            EstimationMode::TopQuantile { q } => write!(f, "top-q(q={q})"),
        }
    }
}

/// Every intermediate of the estimator pipeline.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleEstimate {
    pub alphabet_size: usize,
    pub confidence: f64,
    pub mode: EstimationMode,
    pub params: ZipfParams,
    pub delta0: f64,
    pub rank_lo: usize,
    pub epsilon: f64,
    /// `n₀` before rounding up.
    pub n_bound: f64,
    #[serde(with = "crate::decimal")]
    pub n0: Count,
    pub p0: f64,
    #[serde(rename = "N0", with = "crate::decimal")]
    pub n_total: Count,
}

/// Runs the full chain: model constants, rank distribution, gap, event count
/// and observation count.
pub fn estimate_samples(m: usize, confidence: f64, mode: EstimationMode) -> Result<SampleEstimate> {
    check_confidence(confidence)?;
    let params = ZipfParams::new(m)?;
    let dist = RankDistribution::from_params(&params);
    let gap = match mode {
        EstimationMode::Full => dist.min_gap()?,
        EstimationMode::Coarse { mc } => dist.coarse_gap(mc)?,
        EstimationMode::TopQuantile { q } => dist.coarse_gap(top_quantile_rank(m, q)?)?,
    };
    let n_bound = event_count_real(gap.delta0, confidence)?;
    let n0 = to_count(n_bound)?;
    let n_total = observation_count(n0, gap.p0)?;
    Ok(SampleEstimate {
        alphabet_size: m,
        confidence,
        mode,
        params,
        delta0: gap.delta0,
        rank_lo: gap.rank_lo,
        epsilon: epsilon_from_gap(gap.delta0)?,
        n_bound,
        n0,
        p0: gap.p0,
        n_total,
    })
}

/// `sup_r |F_n(r) - F(r)|` over the rank atoms, with symbol id `k` read as
/// rank `k + 1`.
pub fn empirical_cdf_deviation(sample: &SymbolSequence, dist: &RankDistribution) -> Result<f64> {
    if sample.is_empty() {
        return Err(Error::domain("sample is empty"));
    }
    let m = dist.alphabet_size();
    let mut counts = vec![0u64; m];
    for &s in sample.symbols() {
        match counts.get_mut(s as usize) {
            Some(c) => *c += 1,
            None => {
                return Err(Error::OutOfAlphabet {
                    symbol: s,
                    alphabet_size: m,
                })
            }
        }
    }
    let n = sample.len() as f64;
    let mut running = 0u64;
    let mut sup = 0.0f64;
    for (count, model) in counts.iter().zip(dist.cdf()) {
        running += count;
        sup = sup.max((running as f64 / n - model).abs());
    }
    Ok(sup)
}

#[cfg(test)]
// Oracle literals keep every digit they were computed with.
#[allow(clippy::excessive_precision)]
mod tests {
    use super::*;

    #[test]
    fn sample_count_examples() {
        let n = dkw_sample_count(4.88e-4 / 4.0, 0.95).unwrap();
        assert!((n as f64 - 1.24e8).abs() / 1.24e8 < 0.01);

        let zeta = 1.0 - 2.0 / std::f64::consts::E;
        assert_eq!(dkw_sample_count(0.5, zeta).unwrap(), 2);

        let a = dkw_sample_bound(0.01, 0.9).unwrap();
        let b = dkw_sample_bound(0.005, 0.9).unwrap();
        assert_eq!(b, 4.0 * a);
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(dkw_sample_count(0.0, 0.9).is_err());
        assert!(dkw_sample_count(-1.0, 0.9).is_err());
        assert!(dkw_sample_count(0.1, 0.0).is_err());
        assert!(dkw_sample_count(0.1, 1.0).is_err());
        assert!(dkw_sample_count(0.1, 1.0 - 1e-13).is_err());
        assert!(dkw_sample_count(0.1, f64::NAN).is_err());
        assert!(epsilon_from_gap(0.0).is_err());
        assert!(event_count_bound(1.0, 0.5).is_err());
        assert!(observation_count(10, 1.0).is_err());
        assert!(observation_count(10, 0.0).is_err());
        assert!(observation_count(0, 0.5).is_err());
        assert!(dkw_sample_count(1e-300, 0.5).is_err());
        assert!(dkw_sample_count(1e-10, 0.5).unwrap() > u64::MAX as Count);
    }

    #[test]
    fn epsilon_examples() {
        assert!((epsilon_from_gap(0.223).unwrap() - 0.05575).abs() < 1e-15);
        assert_eq!(epsilon_from_gap(4.0).unwrap(), 1.0);
        assert!((epsilon_from_gap(4.88e-4).unwrap() - 1.22e-4).abs() < 1e-18);
    }

    #[test]
    fn event_count_examples() {
        // 0.223 is the gap rounded to three digits; the unrounded model gap
        // 0.22318473351372766 gives 333.97, i.e. 334 events.
        assert_eq!(event_count_bound(0.223_184_733_513_727_66, 0.75).unwrap(), 334);
        let rounded = event_count_real(0.223, 0.75).unwrap();
        assert!((rounded - 334.0).abs() < 1.0, "{rounded}");
        let n = event_count_bound(4.88e-4, 0.95).unwrap();
        assert!((n as f64 - 1.24e8).abs() / 1.24e8 < 0.01);
    }

    #[test]
    fn observation_count_examples() {
        assert_eq!(observation_count(334, 0.290_275_758_331_564_23).unwrap(), 1151);
        assert_eq!(observation_count(500, 1.0 - 1e-15).unwrap(), 500);
        let n = observation_count(124_000_000, 0.012_516_230_397_918_391).unwrap();
        assert!((n as f64 - 9.907e9).abs() / 9.9e9 < 1e-3);
    }

    #[test]
    fn worked_examples() {
        let e = estimate_samples(3, 0.75, EstimationMode::Coarse { mc: 2 }).unwrap();
        assert!((e.delta0 - 0.223).abs() < 1e-3);
        assert_eq!(e.n0, 334);
        assert_eq!(e.n_total, 1151);
        assert_eq!(e.epsilon, e.delta0 / 4.0);

        let e = estimate_samples(26, 0.95, EstimationMode::Full).unwrap();
        assert!((e.delta0 - 4.88e-4).abs() / 4.88e-4 < 0.01);
        assert!((e.n_bound - 1.24e8).abs() / 1.24e8 < 0.01);
        assert_eq!(e.rank_lo, 26);

        let e = estimate_samples(2, 0.5, EstimationMode::Full).unwrap();
        assert!(e.n_total >= e.n0 && e.n0 >= 1);
        assert!(e.p0 > 0.0 && e.p0 < 1.0);
    }

    #[test]
    fn top_quantile_mode() {
        let e = estimate_samples(26, 0.95, EstimationMode::TopQuantile { q: 0.25 }).unwrap();
        assert_eq!(e.rank_lo, 7);
        let c = estimate_samples(26, 0.95, EstimationMode::Coarse { mc: 7 }).unwrap();
        assert_eq!(e.n_total, c.n_total);
        assert!(estimate_samples(26, 0.95, EstimationMode::TopQuantile { q: 0.0 }).is_err());
        assert!(estimate_samples(26, 0.95, EstimationMode::Coarse { mc: 27 }).is_err());
    }

    #[test]
    fn deviation_examples() {
        let d2 = RankDistribution::from_params(&ZipfParams::new(2).unwrap());
        let one = SymbolSequence::new(vec![0], 2).unwrap();
        let dev = empirical_cdf_deviation(&one, &d2).unwrap();
        assert_eq!(dev, 1.0 - d2.probs()[0]);

        // Exactly matching frequencies.
        let d = RankDistribution::from_probs(vec![0.5, 0.3, 0.2]).unwrap();
        let s = SymbolSequence::new(vec![0, 0, 0, 0, 0, 1, 1, 1, 2, 2], 3).unwrap();
        let dev = empirical_cdf_deviation(&s, &d).unwrap();
        assert!(dev <= 1.0 / 10.0);
        assert!(dev < 1e-15);

        let wide = SymbolSequence::new(vec![0, 5], 6).unwrap();
        let err = empirical_cdf_deviation(&wide, &d).unwrap_err();
        assert!(err.to_string().contains("symbol 5"));
        assert!(empirical_cdf_deviation(&SymbolSequence::new(vec![], 4).unwrap(), &d).is_err());
    }

    #[test]
    fn json_counts_are_strings() {
        let e = estimate_samples(26, 0.95, EstimationMode::Full).unwrap();
        let v = serde_json::to_value(&e).unwrap();
        assert_eq!(v["N0"], serde_json::Value::String(e.n_total.to_string()));
        assert_eq!(v["n0"], serde_json::Value::String(e.n0.to_string()));
        assert_eq!(v["mode"]["kind"], "full");
        let back: SampleEstimate = serde_json::from_value(v).unwrap();
        assert_eq!(back, e);
    }
}
