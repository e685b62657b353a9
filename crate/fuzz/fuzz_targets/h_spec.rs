#![no_main]

use libfuzzer_sys::fuzz_target;
use lts_cli::{resolve_h, HSpec};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(spec) = text.parse::<HSpec>() else { return };
    for (n, p) in [(9, 1), (30, 3), (2, 1), (1000, 10)] {
        if let Ok((h, _)) = resolve_h(Some(spec), n, p) {
            assert!(p <= h && h <= n);
        }
    }
});
