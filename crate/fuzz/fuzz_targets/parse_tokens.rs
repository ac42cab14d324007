#![no_main]

use entropy_samples::input::parse_tokens;
use libfuzzer_sys::fuzz_target;

// The first byte picks an explicit alphabet size (0 = infer); the rest is the
// token file.
fuzz_target!(|data: &[u8]| {
    let Some((&head, body)) = data.split_first() else {
        return;
    };
    let alphabet_size = (head != 0).then_some(head as usize);
    if let Ok(seq) = parse_tokens(body, alphabet_size) {
        let m = seq.alphabet_size();
        assert!(m >= 1);
        if let Some(explicit) = alphabet_size {
            assert_eq!(m, explicit);
        }
        assert!(seq.symbols().iter().all(|&s| (s as usize) < m));
    }
});
