#![no_main]

use libfuzzer_sys::fuzz_target;
use lts_cli::Report;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(report) = Report::from_json(text) {
        let json = report.to_json().unwrap();
        let again = Report::from_json(&json).unwrap();
        assert_eq!(again.to_json().unwrap(), json);
        let _ = report.to_csv();
        let _ = report.to_text();
    }
});
