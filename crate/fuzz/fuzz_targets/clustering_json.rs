#![no_main]

use landmark_core::Clustering;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(c) = serde_json::from_slice::<Clustering>(data) {
        let text = serde_json::to_string(&c).expect("clustering serializes");
        let again: Clustering = serde_json::from_str(&text).expect("serialized clustering parses");
        assert_eq!(again, c);
    }
});
