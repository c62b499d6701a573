#![no_main]

use libfuzzer_sys::fuzz_target;
use monoqkd::figio::run;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let args: Vec<&str> = text.split_whitespace().collect();
    // keep the fuzzer away from the filesystem and the slow oracle
    if args.iter().any(|a| matches!(*a, "figure" | "strategy" | "oracle") || a.starts_with("--curve")) {
        return;
    }
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run(std::iter::once("monoqkd").chain(args), &mut out, &mut err);
    assert!(matches!(code, 0..=2));
});
