//! How many observations are needed to estimate the Shannon entropy of a
//! ranked ("natural") symbol source?
//!
//! The source is modelled by the normalized Zipf-Mandelbrot-Li rank law
//! ([`zipf`]). The closest pair of adjacent rank probabilities sets a gap
//! `Δ₀`, and the Dvoretzky-Kiefer-Wolfowitz inequality turns that gap and a
//! confidence level into an event count and a total observation count
//! ([`dkw`]). The [`simulate`] module checks the estimate by Monte Carlo
//! against the plug-in entropy of [`entropy`].
//!
//! ```
//! use entropy_samples::{estimate_samples, EstimationMode};
//!
//! let est = estimate_samples(3, 0.75, EstimationMode::Coarse { mc: 2 }).unwrap();
//! assert_eq!(est.n0, 334);
//! assert_eq!(est.n_total, 1151);
//! ```

pub mod cli;
mod decimal;
pub mod dkw;
pub mod entropy;
mod error;
pub mod input;
mod numeric;
pub mod simulate;
pub mod zipf;

pub use dkw::{
    dkw_sample_bound, dkw_sample_count, empirical_cdf_deviation, epsilon_from_gap,
    estimate_samples, event_count_bound, event_count_real, observation_count, EstimationMode,
    Count, SampleEstimate,
};
pub use entropy::{
    build_ngram_table, empirical_distribution, ngram_entropy, plugin_entropy, shannon_entropy,
    LogBase, NgramTable, SymbolSequence,
};
pub use error::{Error, Result};
pub use simulate::{dkw_violation_rate, mse_curve, sample_sequence, MseCurve, SimConfig};
pub use zipf::{
    build_distribution, derive_params, li_lambda, top_quantile_rank, word_length_probability,
    GapResult, RankDistribution, ZipfParams,
};
