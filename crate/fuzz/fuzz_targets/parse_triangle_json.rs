#![no_main]

use libfuzzer_sys::fuzz_target;

use degen_bell::table::TriangleTable;

fuzz_target!(|data: &[u8]| {
    if data.len() > 4096 {
        return;
    }
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(table) = TriangleTable::from_json(text) {
        let emitted = table.to_json();
        let reparsed = TriangleTable::from_json(&emitted).expect("emitted tables must parse");
        assert_eq!(reparsed, table);
    }
});
