//! Plug-in Shannon entropy for distributions and symbol sequences.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::neumaier_sum;

/// Logarithm base for entropy values.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum LogBase {
    #[default]
    #[serde(rename = "2")]
    Two,
    #[serde(rename = "e")]
    E,
    #[serde(rename = "10")]
    Ten,
}

impl LogBase {
    pub fn log(self, x: f64) -> f64 {
        match self {
            LogBase::Two => x.log2(),
            LogBase::E => x.ln(),
            LogBase::Ten => x.log10(),
        }
    }
}

impl FromStr for LogBase {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "2" => Ok(LogBase::Two),
            "e" => Ok(LogBase::E),
            "10" => Ok(LogBase::Ten),
            _ => Err(Error::Usage(format!(
                "logarithm base must be one of 2, e, 10; got {s:?}"
            ))),
        }
    }
}

impl fmt::Display for LogBase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LogBase::Two => "2",
            LogBase::E => "e",
            LogBase::Ten => "10",
        })
    }
}

/// Symbols are ids in `0..alphabet_size`; id `k` stands for rank `k + 1`
/// when the sequence comes from a rank model.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymbolSequence {
    symbols: Vec<u32>,
    alphabet_size: usize,
}

impl SymbolSequence {
    pub fn new(symbols: Vec<u32>, alphabet_size: usize) -> Result<Self> {
        if let Some(&s) = symbols.iter().find(|&&s| s as usize >= alphabet_size) {
            return Err(Error::OutOfAlphabet {
                symbol: s,
                alphabet_size,
            });
        }
        Ok(SymbolSequence {
            symbols,
            alphabet_size,
        })
    }

    /// Raw bytes over the 256-symbol byte alphabet.
    pub fn from_bytes(bytes: &[u8]) -> Self {
        SymbolSequence {
            symbols: bytes.iter().map(|&b| b as u32).collect(),
            alphabet_size: 256,
        }
    }

    pub fn symbols(&self) -> &[u32] {
        &self.symbols
    }

    pub fn alphabet_size(&self) -> usize {
        self.alphabet_size
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }
}

/// `-Σ p log p` with `0 log 0 = 0`.
///
/// The input must be nonnegative and sum to one within `1e-9`.
pub fn shannon_entropy(probs: &[f64], base: LogBase) -> Result<f64> {
    if probs.is_empty() {
        return Err(Error::domain("probability vector is empty"));
    }
    if let Some(p) = probs.iter().find(|p| !(p.is_finite() && **p >= 0.0)) {
        return Err(Error::domain(format!("probability {p} is negative or not finite")));
    }
    let total = neumaier_sum(probs.iter().copied());
    if (total - 1.0).abs() > 1e-9 {
        return Err(Error::domain(format!("probabilities sum to {total}, not 1")));
    }
    Ok(entropy_terms(probs.iter().copied(), base))
}

fn entropy_terms(probs: impl Iterator<Item = f64>, base: LogBase) -> f64 {
    probs
        .filter(|&p| p > 0.0)
        .fold(0.0, |acc, p| acc + p * -base.log(p))
}

/// Symbol counts and relative frequencies over the declared alphabet.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalDistribution {
    pub counts: Vec<u64>,
    pub probs: Vec<f64>,
}

pub fn empirical_distribution(seq: &SymbolSequence) -> Result<EmpiricalDistribution> {
    if seq.is_empty() {
        return Err(Error::domain("cannot estimate a distribution from an empty sequence"));
    }
    let mut counts = vec![0u64; seq.alphabet_size()];
    for &s in seq.symbols() {
        counts[s as usize] += 1;
    }
    let n = seq.len() as f64;
    let probs = counts.iter().map(|&c| c as f64 / n).collect();
    Ok(EmpiricalDistribution { counts, probs })
}

/// Counts of overlapping N-grams and of their (N-1)-symbol prefixes.
///
/// Only windows that fit entirely inside the sequence are counted, so a
/// block at the very end with no successor contributes nothing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NgramTable {
    order: usize,
    block_counts: BTreeMap<Vec<u32>, u64>,
    joint_counts: BTreeMap<Vec<u32>, u64>,
    total_ngrams: u64,
}

impl NgramTable {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn block_counts(&self) -> &BTreeMap<Vec<u32>, u64> {
        &self.block_counts
    }

    pub fn joint_counts(&self) -> &BTreeMap<Vec<u32>, u64> {
        &self.joint_counts
    }

    pub fn total_ngrams(&self) -> u64 {
        self.total_ngrams
    }

    /// `H_N = -Σ p(b, x) log p(x | b)`.
    pub fn entropy(&self, base: LogBase) -> f64 {
        let total = self.total_ngrams as f64;
        let prefix = self.order - 1;
        self.joint_counts.iter().fold(0.0, |acc, (gram, &joint)| {
            let block = self.block_counts[&gram[..prefix]];
            let conditional = joint as f64 / block as f64;
            acc + (joint as f64 / total) * -base.log(conditional)
        })
    }
}

pub fn build_ngram_table(seq: &SymbolSequence, order: usize) -> Result<NgramTable> {
    if order < 1 {
        return Err(Error::domain("n-gram order must be at least 1"));
    }
    if seq.len() < order {
        return Err(Error::domain(format!(
            "sequence of length {} is shorter than the n-gram order {order}",
            seq.len()
        )));
    }
    let mut joint_counts: BTreeMap<Vec<u32>, u64> = BTreeMap::new();
    for window in seq.symbols().windows(order) {
        match joint_counts.get_mut(window) {
            Some(c) => *c += 1,
            None => {
                joint_counts.insert(window.to_vec(), 1);
            }
        }
    }
    let mut block_counts: BTreeMap<Vec<u32>, u64> = BTreeMap::new();
    for (gram, &count) in &joint_counts {
        let block = &gram[..order - 1];
        match block_counts.get_mut(block) {
            Some(c) => *c += count,
            None => {
                block_counts.insert(block.to_vec(), count);
            }
        }
    }
    Ok(NgramTable {
        order,
        block_counts,
        joint_counts,
        total_ngrams: (seq.len() - order + 1) as u64,
    })
}

pub fn ngram_entropy(table: &NgramTable, base: LogBase) -> Result<f64> {
    if table.total_ngrams == 0 {
        return Err(Error::domain("n-gram table is empty"));
    }
    Ok(table.entropy(base))
}

/// Entropy of the empirical N-gram statistics of `seq`, without any bias
/// correction.
pub fn plugin_entropy(seq: &SymbolSequence, order: usize, base: LogBase) -> Result<f64> {
    ngram_entropy(&build_ngram_table(seq, order)?, base)
}

#[cfg(test)]
// Oracle literals keep every digit they were computed with.
#[allow(clippy::excessive_precision)]
mod tests {
    use super::*;

    fn seq(symbols: &[u32], m: usize) -> SymbolSequence {
        SymbolSequence::new(symbols.to_vec(), m).unwrap()
    }

    #[test]
    fn uniform_and_deterministic() {
        assert_eq!(shannon_entropy(&[0.25; 4], LogBase::Two).unwrap(), 2.0);
        let h = shannon_entropy(&[1.0, 0.0, 0.0], LogBase::Two).unwrap();
        assert_eq!(h, 0.0);
        assert!(h.is_sign_positive());
    }

    #[test]
    fn zipf_three_entropy() {
        // 50-digit summation of the M = 3 model gives 1.47283019862752234 bits.
        let p = [
            0.513_460_491_845_291_89,
            0.290_275_758_331_564_23,
            0.196_263_749_823_143_88,
        ];
        let h = shannon_entropy(&p, LogBase::Two).unwrap();
        assert!((h - 1.472_830_198_627_522_3).abs() < 1e-14);
    }

    #[test]
    fn rejects_bad_vectors() {
        assert!(shannon_entropy(&[], LogBase::Two).is_err());
        assert!(shannon_entropy(&[0.5, 0.4], LogBase::Two).is_err());
        assert!(shannon_entropy(&[1.5, -0.5], LogBase::Two).is_err());
        assert!(shannon_entropy(&[f64::NAN, 1.0], LogBase::Two).is_err());
    }

    #[test]
    fn base_parsing() {
        assert_eq!("e".parse::<LogBase>().unwrap(), LogBase::E);
        assert_eq!("10".parse::<LogBase>().unwrap(), LogBase::Ten);
        assert!("3".parse::<LogBase>().is_err());
        assert_eq!(LogBase::Ten.to_string(), "10");
    }

    #[test]
    fn sequence_alphabet_check() {
        let err = SymbolSequence::new(vec![0, 3], 3).unwrap_err();
        assert!(matches!(err, Error::OutOfAlphabet { symbol: 3, alphabet_size: 3 }));
        assert_eq!(SymbolSequence::from_bytes(b"ab").symbols(), &[97, 98]);
    }

    #[test]
    fn empirical_frequencies() {
        let d = empirical_distribution(&seq(&[0, 0, 1, 1], 2)).unwrap();
        assert_eq!(d.probs, vec![0.5, 0.5]);
        let d = empirical_distribution(&seq(&[0, 0, 0, 1], 3)).unwrap();
        assert_eq!(d.probs, vec![0.75, 0.25, 0.0]);
        assert_eq!(d.counts, vec![3, 1, 0]);
        assert!(empirical_distribution(&seq(&[], 3)).is_err());
    }

    #[test]
    fn bigram_hand_count() {
        let t = build_ngram_table(&seq(&[0, 1, 0, 1, 0], 2), 2).unwrap();
        assert_eq!(t.total_ngrams(), 4);
        assert_eq!(t.joint_counts().len(), 2);
        assert_eq!(t.joint_counts()[&vec![0, 1]], 2);
        assert_eq!(t.joint_counts()[&vec![1, 0]], 2);
        assert_eq!(t.block_counts()[&vec![0]], 2);
        assert_eq!(t.block_counts()[&vec![1]], 2);
    }

    #[test]
    fn unigram_table_is_symbol_counts() {
        let s = seq(&[2, 0, 2, 1, 2], 3);
        let t = build_ngram_table(&s, 1).unwrap();
        assert_eq!(t.block_counts().len(), 1);
        assert_eq!(t.block_counts()[&Vec::<u32>::new()], 5);
        assert_eq!(t.joint_counts()[&vec![2]], 3);
        assert_eq!(t.joint_counts()[&vec![0]], 1);
    }

    #[test]
    fn table_errors() {
        assert!(build_ngram_table(&seq(&[0, 1], 2), 3).is_err());
        assert!(build_ngram_table(&seq(&[0, 1], 2), 0).is_err());
    }

    #[test]
    fn ngram_entropy_examples() {
        let alternating: Vec<u32> = (0..20).map(|i| i % 2).collect();
        assert_eq!(plugin_entropy(&seq(&alternating, 2), 2, LogBase::Two).unwrap(), 0.0);
        assert_eq!(plugin_entropy(&seq(&[0, 0, 1, 1], 2), 1, LogBase::Two).unwrap(), 1.0);

        let cyc: Vec<u32> = (0..12).map(|i| i % 3).collect();
        assert_eq!(plugin_entropy(&seq(&cyc, 3), 2, LogBase::Two).unwrap(), 0.0);
        let h1 = plugin_entropy(&seq(&cyc, 3), 1, LogBase::Two).unwrap();
        assert!((h1 - 3f64.log2()).abs() < 1e-15);

        assert_eq!(plugin_entropy(&seq(&[4; 9], 5), 3, LogBase::E).unwrap(), 0.0);
        assert_eq!(plugin_entropy(&seq(&[0, 1], 2), 1, LogBase::Two).unwrap(), 1.0);
    }
}
