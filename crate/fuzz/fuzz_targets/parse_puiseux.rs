#![no_main]

use libfuzzer_sys::fuzz_target;
use polarbranch::PuiseuxSeries;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(a) = s.parse::<PuiseuxSeries>() {
        let again: PuiseuxSeries = a.to_string().parse().unwrap();
        assert_eq!(a.reduce(), again.reduce());
    }
});
