#![no_main]

use libfuzzer_sys::fuzz_target;

use degen_bell::table::TriangleTable;

// from_csv must never panic, and anything it accepts must survive an
// emit/parse round trip unchanged.
fuzz_target!(|data: &[u8]| {
    if data.len() > 4096 {
        return;
    }
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(table) = TriangleTable::from_csv(text) {
        let emitted = table.to_csv();
        let reparsed = TriangleTable::from_csv(&emitted).expect("emitted tables must parse");
        assert_eq!(reparsed, table);
    }
});
