//! Arbitrary bytes into the reader for `walk --format json` output.

#![no_main]

use libfuzzer_sys::fuzz_target;
use qwalk::cli::parse_walk_json;

fuzz_target!(|data: &[u8]| {
    if data.len() > 1 << 20 {
        return;
    }
    if let Ok(rec) = parse_walk_json(data) {
        let dist = rec.distribution().expect("accepted records are valid");
        assert_eq!(dist.len(), rec.probs.len());
    }
});
