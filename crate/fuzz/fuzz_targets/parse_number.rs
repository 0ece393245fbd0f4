#![no_main]

use libfuzzer_sys::fuzz_target;
use polarbranch::num::{fmt_q, parse_int, parse_q};

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(q) = parse_q(s) {
        assert_eq!(parse_q(&fmt_q(&q)).unwrap(), q);
    }
    if let Some(n) = parse_int(s) {
        assert_eq!(parse_int(&n.to_string()), Some(n));
    }
});
