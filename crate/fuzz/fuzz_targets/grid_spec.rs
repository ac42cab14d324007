#![no_main]

use entropy_samples::simulate::GridSpec;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(spec) = text.parse::<GridSpec>() else {
        return;
    };
    let values = spec.values();
    assert!(!values.is_empty() && values.len() <= spec.points);
    assert_eq!(values[0], spec.min);
    assert_eq!(*values.last().unwrap(), spec.max);
    assert!(values.windows(2).all(|w| w[0] < w[1]));
});
