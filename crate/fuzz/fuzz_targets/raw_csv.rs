//! The raw reference-DOF CSV reader (with on-the-fly homogenization) must
//! never panic on arbitrary bytes.

#![no_main]

use failsvm::data::PlateGeometry;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let geom = PlateGeometry::open_hole_6mm();
    let _ = failsvm::data::parse_raw(text, &geom, 1e-8);
});
