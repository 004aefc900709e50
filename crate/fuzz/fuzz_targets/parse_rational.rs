#![no_main]

use libfuzzer_sys::fuzz_target;

use degen_bell::rational::{format_rat, parse_rat};

// The parser must be total and, on success, canonicalizing: formatting the
// parsed value and parsing again is a fixed point.
fuzz_target!(|data: &[u8]| {
    // keep pathological bignum digit strings from dominating the run
    if data.len() > 512 {
        return;
    }
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(value) = parse_rat(text) {
        let canonical = format_rat(&value);
        let reparsed = parse_rat(&canonical).expect("canonical form must parse");
        assert_eq!(reparsed, value);
        assert_eq!(format_rat(&reparsed), canonical);
    }
});
