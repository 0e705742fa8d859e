#![no_main]

use libfuzzer_sys::fuzz_target;
use netinfer::pem::{parse_pem_matrix, write_pem_matrix};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(pem) = parse_pem_matrix(text, "fuzz") {
        let written = write_pem_matrix(&pem);
        let again = parse_pem_matrix(&written, "rewritten").expect("writer output parses");
        assert_eq!(written, write_pem_matrix(&again));
    }
});
