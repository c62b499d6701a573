//! End-to-end acceptance checks. Run with `--nocapture` to see the report.

use std::time::{Duration, Instant};

use monoqkd::adversary::{
    binary_counterexample_search, build_counterexample, concavity_bound_check, concavity_sweep,
    minimize_conditional_entropy, two_point_deviation, BinaryClass, ChannelModel, EveStrategy,
};
use monoqkd::entropy::{binary_entropy_of, Probability};
use monoqkd::figio::{render_svg, run, sample_figure};
use monoqkd::monogamy::{
    evaluate, eve_guess_from_beta, BetaValue, MonogamyModel, Theory, TSIRELSON_BOUND,
};
use monoqkd::numfmt::round_half_up;
use monoqkd::security::{check_condition, critical_beta};
use serde_json::Value;

type Check = (&'static str, fn() -> Outcome);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn cli_critical(theory: &str) -> (f64, Duration) {
    let start = Instant::now();
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run(
        ["monoqkd", "--json", "critical", "--theory", theory],
        &mut out,
        &mut err,
    );
    let elapsed = start.elapsed();
    assert_eq!(code, 0, "{}", String::from_utf8_lossy(&err));
    let v: Value = serde_json::from_slice(&out).unwrap();
    (v["beta_star"].as_f64().unwrap(), elapsed)
}

fn critical_value(theory: &str, expected: f64) -> Outcome {
    let (beta, elapsed) = cli_critical(theory);
    let err = (beta - expected).abs();
    outcome(
        err <= 2e-3 && elapsed < Duration::from_secs(1),
        format!("β* = {beta:.10}, |β* − {expected}| = {err:.2e}, {elapsed:.2?}"),
    )
}

fn ordering() -> Outcome {
    let qm = critical_beta(&MonogamyModel::quantum(), 1e-12)
        .unwrap()
        .beta_star
        .get();
    let ns = critical_beta(&MonogamyModel::no_signalling(), 1e-12)
        .unwrap()
        .beta_star
        .get();
    let t = TSIRELSON_BOUND;
    let shown = round_half_up(t, 3);
    outcome(
        qm < t && t < ns && shown == "0.854",
        format!("{qm:.6} < {t:.6} < {ns:.6}, T rounds to {shown}"),
    )
}

fn attainability() -> Outcome {
    let r = check_condition(BetaValue::MAX, &MonogamyModel::no_signalling()).unwrap();
    outcome(
        r.secure && r.lhs_bits == 0.0 && r.rhs_bits == 1.0,
        format!(
            "secure = {}, lhs = {}, rhs = {}",
            r.secure, r.lhs_bits, r.rhs_bits
        ),
    )
}

fn concavity() -> Outcome {
    let start = Instant::now();
    let sweep = concavity_sweep(100_000, 8, 0x5eed).unwrap();
    let elapsed = start.elapsed();

    // equality exactly on strategies supported on {1/2, 1}
    let tight = [
        EveStrategy::from_raw(vec![0.3, 0.7], vec![0.5, 1.0]).unwrap(),
        EveStrategy::from_raw(vec![0.2, 0.5, 0.3], vec![1.0, 0.5, 0.0]).unwrap(),
        EveStrategy::from_raw(vec![1.0], vec![0.5]).unwrap(),
        EveStrategy::from_raw(vec![0.4, 0.6], vec![0.0, 1.0]).unwrap(),
    ];
    let loose = [
        EveStrategy::from_raw(vec![0.3, 0.7], vec![0.6, 1.0]).unwrap(),
        EveStrategy::from_raw(vec![0.5, 0.5], vec![0.9, 0.1]).unwrap(),
    ];
    let exact = |s: &EveStrategy| concavity_bound_check(s).gap().abs() <= 1e-12;
    let two_point = |s: &EveStrategy| two_point_deviation(s) == 0.0;
    let detected = tight.iter().all(|s| exact(s) && two_point(s))
        && loose.iter().all(|s| !exact(s) && !two_point(s));

    outcome(
        sweep.violations == 0 && detected && elapsed < Duration::from_secs(10),
        format!(
            "{} samples, {} violations, min gap {:.3e}, equality detection {}, {elapsed:.2?}",
            sweep.samples,
            sweep.violations,
            sweep.min_gap,
            if detected { "ok" } else { "wrong" }
        ),
    )
}

fn oracle() -> Outcome {
    let start = Instant::now();
    let mut worst_value: f64 = 0.0;
    let mut worst_support: f64 = 0.0;
    let mut support_ok = true;
    for pe in [0.6, 0.775, 0.9] {
        for k in [2, 3, 4] {
            let r = minimize_conditional_entropy(Probability::new(pe).unwrap(), k, 200).unwrap();
            worst_value = worst_value.max((r.min_value - 2.0 * (1.0 - pe)).abs());
            let dev = two_point_deviation(&r.argmin);
            worst_support = worst_support.max(dev);
            support_ok &= dev <= r.resolution + 1e-12;
        }
    }
    let elapsed = start.elapsed();
    outcome(
        worst_value <= 0.02 && support_ok && elapsed < Duration::from_secs(60),
        format!(
            "max |min − 2(1−P_E)| = {worst_value:.4}, max support deviation {worst_support:.4}, {elapsed:.2?}"
        ),
    )
}

fn counterexamples() -> Outcome {
    let mut all = true;
    let mut min_guess = f64::INFINITY;
    let mut min_info = f64::INFINITY;
    for pb in [0.55, 0.65, 0.75, 0.85, 0.95, 0.99] {
        let p_b = Probability::new(pb).unwrap();
        let c = build_counterexample(p_b, 0.5).unwrap();
        let i_ab = ChannelModel::new(p_b).unwrap().bob_information();
        all &= c.p_e < pb && c.i_ae > i_ab && c.i_ae > c.i_ab;
        min_guess = min_guess.min(pb - c.p_e);
        min_info = min_info.min(c.i_ae - i_ab);
    }
    let binary = binary_counterexample_search(200, BinaryClass::Symmetric).unwrap();
    outcome(
        all && min_guess > 0.0 && min_info > 0.0 && binary.found == 0,
        format!(
            "min guess margin {min_guess:.4}, min information margin {min_info:.4}; \
             binary grid: {} checked, {} found",
            binary.checked, binary.found
        ),
    )
}

fn substitution() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut active = 0;
    for model in [MonogamyModel::quantum(), MonogamyModel::no_signalling()] {
        let (lo, hi) = (model.domain_lower(), model.domain_upper().get());
        for i in 0..10_000 {
            let x = lo + (hi - lo) * i as f64 / 9_999.0;
            let f = evaluate(&model, BetaValue::new(x).unwrap()).unwrap();
            let pe = eve_guess_from_beta(f).get();
            if !(0.5 < pe && pe < 1.0) {
                continue;
            }
            active += 1;
            let h = binary_entropy_of(x).unwrap();
            let pointwise = h - 2.0 * (1.0 - pe);
            let level = h - (3.0 - 4.0 * f.get());
            worst = worst.max((pointwise - level).abs());
        }
    }
    outcome(
        worst <= 1e-12 && active > 0,
        format!("{active} unclamped points, max discrepancy {worst:.2e}"),
    )
}

fn figure() -> Outcome {
    let data = sample_figure(201).unwrap();
    let p = data.point_p;
    let qm = data.intersection(Theory::Quantum).unwrap();
    let ns = data.intersection(Theory::NoSignalling).unwrap();
    let p_ok = (p.beta - 0.85355).abs() <= 1e-4 && (p.f - 0.59979).abs() <= 1e-4;
    let sides = qm.beta < p.beta && p.beta < ns.beta && qm.before_p && !ns.before_p;

    let svg = render_svg(&data).unwrap();
    let doc = roxmltree::Document::parse(&svg).unwrap();
    let cx = |id: &str| -> f64 {
        doc.descendants()
            .find(|n| n.attribute("id") == Some(id))
            .and_then(|n| n.attribute("cx"))
            .unwrap()
            .parse()
            .unwrap()
    };
    let svg_ok = cx("intersection-quantum") < cx("point-p")
        && cx("point-p") < cx("intersection-no-signalling");

    outcome(
        p_ok && sides && svg_ok,
        format!(
            "P = ({:.6}, {:.6}), QM crosses at {:.6}, NS at {:.6}, SVG markers {}",
            p.beta,
            p.f,
            qm.beta,
            ns.beta,
            if svg_ok { "ordered" } else { "misordered" }
        ),
    )
}

#[test]
fn acceptance() {
    let checks: [Check; 9] = [
        ("quantum critical value", || critical_value("qm", 0.841)),
        ("no-signalling critical value", || {
            critical_value("ns", 0.881)
        }),
        ("ordering around the Tsirelson bound", ordering),
        ("no-signalling attainability", attainability),
        ("concavity bound", concavity),
        ("oracle equivalence", oracle),
        ("counterexample family", counterexamples),
        ("substitution identity", substitution),
        ("figure geometry", figure),
    ];
    let mut failed = Vec::new();
    for (i, (name, check)) in checks.iter().enumerate() {
        let o = check();
        let tag = if o.pass { "PASS" } else { "FAIL" };
        println!("[{tag}] {} {name}: {}", i + 1, o.detail);
        if !o.pass {
            failed.push(i + 1);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
