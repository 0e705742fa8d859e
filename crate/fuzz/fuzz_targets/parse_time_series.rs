#![no_main]

use libfuzzer_sys::fuzz_target;
use netinfer::dynamics::{parse_time_series, write_time_series};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(ts) = parse_time_series(text, "fuzz") {
        let written = write_time_series(&ts);
        let again = parse_time_series(&written, "rewritten").expect("writer output parses");
        assert_eq!(written, write_time_series(&again));
    }
});
