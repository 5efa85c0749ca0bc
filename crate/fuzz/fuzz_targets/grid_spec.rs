#![no_main]

use libfuzzer_sys::fuzz_target;
use qwalk::cli::{GridSpec, MAX_GRID_POINTS};

fuzz_target!(|input: &str| {
    if let Ok(grid) = input.parse::<GridSpec>() {
        let values = grid.values_deg();
        assert!(!values.is_empty());
        assert!(values.len() <= MAX_GRID_POINTS + 1);
        assert!(values.iter().all(|v| v.is_finite()));
        if input.contains(':') {
            assert!(values.windows(2).all(|w| w[0] < w[1]));
        }
    }
});
