#![no_main]

use libfuzzer_sys::fuzz_target;
use lts_cli::{gen_instance, GenSpec};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(spec) = text.parse::<GenSpec>() else { return };
    assert!(spec.n > spec.p && spec.p >= 1);
    if spec.n * spec.p <= 4096 {
        let (a, beta) = gen_instance(&spec).unwrap();
        let (b, _) = gen_instance(&spec).unwrap();
        assert_eq!(a, b);
        assert_eq!(beta.len(), spec.p);
    }
});
