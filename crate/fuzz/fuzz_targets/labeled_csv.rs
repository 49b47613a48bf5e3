//! The labeled dataset reader must never panic, and accepted inputs must
//! survive a write/parse round trip.

#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(rows) = failsvm::data::parse_labeled(text) {
        let rendered = failsvm::data::write_labeled(&rows);
        let back = failsvm::data::parse_labeled(&rendered).expect("writer output must re-parse");
        assert_eq!(rows, back);
    }
});
