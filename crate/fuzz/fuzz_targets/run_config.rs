//! The TOML run-config loader and its validator must never panic.

#![no_main]

use libfuzzer_sys::fuzz_target;
use std::path::Path;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(config) = failsvm::pipeline::RunConfig::from_toml_str(text, Path::new(".")) {
        let _ = config.validate();
    }
});
