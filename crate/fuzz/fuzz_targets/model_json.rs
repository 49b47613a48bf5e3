//! The serialized-model loader must never panic and must reject
//! structurally inconsistent models.

#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(model) = failsvm::svm::SvmModel::from_json(text) {
        assert_eq!(model.alpha.len(), model.y_train.len());
        assert_eq!(model.alpha.len(), model.x_train.len());
        assert!(model.c > 0.0);
    }
});
