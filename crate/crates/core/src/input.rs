//! Reading symbol sequences from files.
//!
//! Two encodings are supported. `tokens` expects one non-negative integer
//! symbol id per line (blank lines are skipped, surrounding whitespace and
//! CR are ignored). `bytes` reads every byte as a symbol of the 256-letter
//! byte alphabet.

use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::entropy::SymbolSequence;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Encoding {
    #[default]
    Tokens,
    Bytes,
}

impl FromStr for Encoding {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "tokens" => Ok(Encoding::Tokens),
            "bytes" => Ok(Encoding::Bytes),
            _ => Err(Error::Usage(format!("encoding must be tokens or bytes, got {s:?}"))),
        }
    }
}

fn line_of(data: &[u8], offset: usize) -> usize {
    data[..offset].iter().filter(|&&b| b == b'\n').count() + 1
}

/// Parses newline-delimited symbol ids.
///
/// With `alphabet_size` set, every id must be below it; otherwise the
/// alphabet is taken as the largest id plus one (at least 1).
pub fn parse_tokens(data: &[u8], alphabet_size: Option<usize>) -> Result<SymbolSequence> {
    let text = std::str::from_utf8(data).map_err(|e| Error::Parse {
        line: line_of(data, e.valid_up_to()),
        msg: "input is not valid UTF-8".into(),
    })?;
    let mut symbols = Vec::new();
    for (idx, raw) in text.split('\n').enumerate() {
        let token = raw.trim();
        if token.is_empty() {
            continue;
        }
        let line = idx + 1;
        if !token.bytes().all(|b| b.is_ascii_digit()) {
            return Err(Error::Parse {
                line,
                msg: format!("malformed symbol token {token:?}"),
            });
        }
        let symbol: u32 = token.parse().map_err(|_| Error::Parse {
            line,
            msg: format!("symbol id {token} is too large"),
        })?;
        if let Some(m) = alphabet_size {
            if symbol as usize >= m {
                return Err(Error::Parse {
                    line,
                    msg: format!("symbol {symbol} is outside the alphabet of size {m}"),
                });
            }
        }
        symbols.push(symbol);
    }
    let m = match alphabet_size {
        Some(m) => m,
        None => symbols.iter().max().map_or(1, |&s| s as usize + 1),
    };
    SymbolSequence::new(symbols, m)
}

/// Raw bytes as symbols. A declared alphabet smaller than 256 is enforced.
pub fn parse_bytes(data: &[u8], alphabet_size: Option<usize>) -> Result<SymbolSequence> {
    match alphabet_size {
        None => Ok(SymbolSequence::from_bytes(data)),
        Some(m) => {
            if let Some(pos) = data.iter().position(|&b| b as usize >= m) {
                return Err(Error::Parse {
                    line: line_of(data, pos),
                    msg: format!("byte {} is outside the alphabet of size {m}", data[pos]),
                });
            }
            SymbolSequence::new(data.iter().map(|&b| b as u32).collect(), m)
        }
    }
}

pub fn parse_symbols(data: &[u8], encoding: Encoding, alphabet_size: Option<usize>) -> Result<SymbolSequence> {
    match encoding {
        Encoding::Tokens => parse_tokens(data, alphabet_size),
        Encoding::Bytes => parse_bytes(data, alphabet_size),
    }
}

pub fn read_symbols(path: &Path, encoding: Encoding, alphabet_size: Option<usize>) -> Result<SymbolSequence> {
    let data = std::fs::read(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_symbols(&data, encoding, alphabet_size)
}
