#![no_main]

use libfuzzer_sys::fuzz_target;
use seqroctm::io::{parse_tree_document, to_dot};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(doc) = parse_tree_document(text) {
        let (tree, table) = doc.model().expect("parsed documents are valid");
        let _ = to_dot(&tree, table.as_ref());
        assert_eq!(parse_tree_document(&doc.to_json()).unwrap(), doc);
    }
});
