#![no_main]
use libfuzzer_sys::fuzz_target;
use relaxlab::harness::parse_csv;

fuzz_target!(|data: &str| {
    if let Ok(t) = parse_csv(data) {
        for row in &t.rows {
            assert_eq!(row.len(), t.header.len());
        }
    }
});
