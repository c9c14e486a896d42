#![no_main]

use landmark_core::metric::io::{parse_labels_csv, write_labels_csv};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(c) = parse_labels_csv(text) {
        let again = parse_labels_csv(&write_labels_csv(&c)).expect("written labels parse");
        assert!(again.same_partition(&c));
    }
});
