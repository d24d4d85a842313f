#![no_main]

use libfuzzer_sys::fuzz_target;
use neuromat::structures::parse_dataset;

fuzz_target!(|data: &[u8]| {
    if let Ok(graphs) = parse_dataset(data, 6.0) {
        for g in &graphs {
            let _ = neuromat::spike::encode_graph(g);
        }
    }
});
