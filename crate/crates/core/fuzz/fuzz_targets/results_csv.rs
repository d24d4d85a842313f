#![no_main]

use libfuzzer_sys::fuzz_target;
use neuromat::experiment::{format_table, parse_results};

fuzz_target!(|data: &[u8]| {
    if let Ok(rows) = parse_results(data) {
        let _ = format_table(&rows);
    }
});
