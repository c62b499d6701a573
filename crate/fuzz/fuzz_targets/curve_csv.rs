#![no_main]

use libfuzzer_sys::fuzz_target;
use monoqkd::monogamy::{evaluate, BetaValue, MonogamyModel, PiecewiseLinear};
use monoqkd::security::critical_beta;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(table) = PiecewiseLinear::from_csv_str(text) else {
        return;
    };
    let (lo, hi) = table.domain();
    let model = MonogamyModel::from_table(table);
    for x in [lo, (lo + hi) / 2.0, hi] {
        let f = evaluate(&model, BetaValue::new(x).unwrap()).unwrap();
        assert!((0.5..=1.0).contains(&f.get()));
    }
    let _ = critical_beta(&model, 1e-9);
});
