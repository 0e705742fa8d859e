#![no_main]

use libfuzzer_sys::fuzz_target;
use netinfer::graphs::{parse_edge_list, write_edge_list};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(g) = parse_edge_list(text, "fuzz") {
        let written = write_edge_list(&g);
        let again = parse_edge_list(&written, "rewritten").expect("writer output parses");
        assert_eq!(g, again);
    }
});
