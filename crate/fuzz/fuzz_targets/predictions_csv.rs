//! The predictions-file parser used by the metrics stage must never panic.

#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(rows) = failsvm::pipeline::parse_predictions(text) {
        assert!(!rows.is_empty());
        for r in rows {
            assert!(r.y_true == 1.0 || r.y_true == -1.0);
            assert!(r.y_pred == 1.0 || r.y_pred == -1.0);
        }
    }
});
