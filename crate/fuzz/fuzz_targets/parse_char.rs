#![no_main]

use libfuzzer_sys::fuzz_target;
use polarbranch::CharSequence;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(c) = s.parse::<CharSequence>() {
        let again: CharSequence = c.to_string().parse().unwrap();
        assert_eq!(c, again);
    }
});
