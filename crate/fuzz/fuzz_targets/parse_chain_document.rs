#![no_main]

use libfuzzer_sys::fuzz_target;
use seqroctm::io::{parse_chain_document, ChainDocument};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(chain) = parse_chain_document(text) {
        assert!(chain.violations().is_empty());
        let _ = ChainDocument::new(&chain).to_csv();
    }
});
