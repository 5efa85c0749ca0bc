#![no_main]

use libfuzzer_sys::fuzz_target;
use qwalk::{make_coin, named_coin, NamedCoin};

fuzz_target!(|input: &str| {
    match input.parse::<NamedCoin>() {
        Ok(coin) => {
            assert!(coin.name().eq_ignore_ascii_case(input.trim()));
            assert!(make_coin(&coin.params()).is_unitary(1e-12));
        }
        Err(_) => assert!(named_coin(input).is_err()),
    }
});
