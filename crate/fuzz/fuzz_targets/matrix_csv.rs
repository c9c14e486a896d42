#![no_main]

use landmark_core::metric::io::{parse_matrix_csv, write_matrix_csv};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(m) = parse_matrix_csv(text) {
        let again = parse_matrix_csv(&write_matrix_csv(&m)).expect("written matrix parses");
        assert_eq!(again, m);
    }
});
