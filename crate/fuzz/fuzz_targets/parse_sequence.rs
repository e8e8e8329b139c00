#![no_main]

use libfuzzer_sys::fuzz_target;
use seqroctm::io::{parse_sequence, write_sequence};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(x) = parse_sequence(text) {
        assert_eq!(parse_sequence(&write_sequence(&x)).unwrap(), x);
    }
});
