//! Command lines split on NUL bytes. Only parsing is exercised; running a
//! parsed command could legitimately allocate a huge lattice.

#![no_main]

use clap::Parser;
use libfuzzer_sys::fuzz_target;
use qwalk::cli::Cli;

fuzz_target!(|input: &str| {
    let args = std::iter::once("qwalk").chain(input.split('\0'));
    let _ = Cli::try_parse_from(args);
});
