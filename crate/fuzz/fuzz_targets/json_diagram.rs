#![no_main]

use libfuzzer_sys::fuzz_target;
use polarbranch::NewtonDiagram;

fuzz_target!(|data: &[u8]| {
    if let Ok(d) = serde_json::from_slice::<NewtonDiagram>(data) {
        let again: NewtonDiagram = serde_json::from_str(&serde_json::to_string(&d).unwrap()).unwrap();
        assert_eq!(d, again);
        assert_eq!(d.canonical_rep(true).to_diagram(), d);
    }
});
