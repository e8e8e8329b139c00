#![no_main]

use libfuzzer_sys::fuzz_target;
use seqroctm::io::{parse_emitters, write_emitters};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(set) = parse_emitters(text) {
        assert_eq!(parse_emitters(&write_emitters(&set)).unwrap(), set);
    }
});
