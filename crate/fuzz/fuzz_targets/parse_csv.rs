#![no_main]

use libfuzzer_sys::fuzz_target;
use lts_cli::{parse_csv, parse_table, write_csv, ResponseColumn};

// First byte: bit 0 sets the intercept, the rest picks the response column.
fuzz_target!(|data: &[u8]| {
    let Some((&ctl, body)) = data.split_first() else { return };
    let intercept = ctl & 1 == 1;
    let response = ResponseColumn::Ordinal(1 + (ctl >> 1) as usize % 4);
    if let Ok(table) = parse_table(body) {
        assert!(!table.rows.is_empty());
        assert!(table.rows.iter().all(|r| r.len() == table.cols() && r.iter().all(|v| v.is_finite())));
    }
    if let Ok(d) = parse_csv(body, &response, intercept) {
        let mut out = Vec::new();
        write_csv(&d, &mut out).unwrap();
        let again = parse_csv(&out, &ResponseColumn::Ordinal(1), intercept).unwrap();
        assert_eq!(again.y(), d.y());
        assert_eq!(again.x(), d.x());
    }
});
