#![no_main]

use libfuzzer_sys::fuzz_target;
use monoqkd::adversary::{concavity_bound_check, guessing_probability, EveStrategy};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(s) = EveStrategy::from_json(text) else {
        return;
    };
    let back = EveStrategy::from_json(&s.to_json()).unwrap();
    assert_eq!(s, back);
    let pe = guessing_probability(&s).get();
    assert!((0.5..=1.0).contains(&pe));
    assert!(concavity_bound_check(&s).holds);
});
