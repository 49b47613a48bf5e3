//! The homogenized load-path CSV reader must never panic on arbitrary
//! bytes, and accepted inputs must survive a write/parse round trip.

#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(paths) = failsvm::data::parse_homogenized(text, 1e-8) {
        let rendered = failsvm::data::write_paths(&paths);
        let back =
            failsvm::data::parse_homogenized(&rendered, 1e-8).expect("writer output must re-parse");
        assert_eq!(paths.len(), back.len());
    }
});
