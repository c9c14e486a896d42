#![no_main]

use landmark_core::metric::io::{parse_pairs_tsv, write_pairs_tsv};
use landmark_core::metric::{ingest_similarity, SymmetrizePolicy};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(file) = parse_pairs_tsv(text) else {
        return;
    };
    let again = parse_pairs_tsv(&write_pairs_tsv(&file)).expect("written pairs parse");
    assert_eq!(again, file);
    if file.len() <= 64 {
        for policy in [
            SymmetrizePolicy::MinDistance,
            SymmetrizePolicy::MaxDistance,
            SymmetrizePolicy::Mean,
        ] {
            let _ = ingest_similarity(file.len(), &file.pairs, policy);
        }
    }
});
