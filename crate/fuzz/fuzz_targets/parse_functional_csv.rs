#![no_main]

use libfuzzer_sys::fuzz_target;
use seqroctm::io::{parse_functional_csv, write_functional_csv};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(y) = parse_functional_csv(text) {
        assert_eq!(parse_functional_csv(&write_functional_csv(&y)).unwrap(), y);
    }
});
