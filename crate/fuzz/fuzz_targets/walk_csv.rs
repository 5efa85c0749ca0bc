#![no_main]

use libfuzzer_sys::fuzz_target;
use qwalk::cli::parse_walk_csv;

fuzz_target!(|input: &str| {
    if input.len() > 1 << 20 {
        return;
    }
    if let Ok(dist) = parse_walk_csv(input) {
        assert!(dist.positions().windows(2).all(|w| w[0] < w[1]));
        assert!(dist.probs().iter().all(|p| p.is_finite() && *p >= 0.0));
    }
});
