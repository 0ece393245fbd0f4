#![no_main]

use libfuzzer_sys::fuzz_target;
use polarbranch::BivariatePoly;

fuzz_target!(|data: &[u8]| {
    if let Ok(f) = serde_json::from_slice::<BivariatePoly>(data) {
        let again: BivariatePoly = serde_json::from_str(&serde_json::to_string(&f).unwrap()).unwrap();
        assert_eq!(f, again);
    }
});
