#![no_main]

use entropy_samples::input::parse_bytes;
use entropy_samples::{build_ngram_table, plugin_entropy, LogBase};
use libfuzzer_sys::fuzz_target;

// The first byte picks the n-gram order (1..=8); the rest is a byte sequence
// over the full 256-symbol alphabet.
fuzz_target!(|data: &[u8]| {
    let Some((&head, body)) = data.split_first() else {
        return;
    };
    let order = (head % 8) as usize + 1;
    let Ok(seq) = parse_bytes(body, None) else {
        return;
    };
    let Ok(h) = plugin_entropy(&seq, order, LogBase::Two) else {
        return;
    };
    assert!(h.is_finite() && h >= -1e-9, "H = {h}");
    assert!(h <= (seq.alphabet_size() as f64).log2() + 1e-9, "H = {h}");
    let table = build_ngram_table(&seq, order).unwrap();
    assert_eq!(table.total_ngrams() as usize, seq.len() + 1 - order);
});
