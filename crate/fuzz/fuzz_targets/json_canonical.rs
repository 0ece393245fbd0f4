#![no_main]

use libfuzzer_sys::fuzz_target;
use polarbranch::CanonicalRep;

fuzz_target!(|data: &[u8]| {
    if let Ok(c) = serde_json::from_slice::<CanonicalRep>(data) {
        let again: CanonicalRep = serde_json::from_str(&serde_json::to_string(&c).unwrap()).unwrap();
        assert_eq!(c, again);
        let d = c.to_diagram();
        assert_eq!(d.canonical_rep(c.is_long()).to_diagram(), d);
    }
});
