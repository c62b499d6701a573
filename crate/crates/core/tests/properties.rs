use monoqkd::adversary::{
    build_counterexample, concavity_bound_check, guessing_probability, two_point_deviation,
    EveStrategy,
};
use monoqkd::entropy::{
    binary_entropy, binary_joint, conditional_entropy_given, mutual_information, shannon_entropy,
    FiniteDistribution, JointDistribution, Probability,
};
use monoqkd::figio::{render_csv, render_json, render_svg, sample_figure, FigureData};
use monoqkd::monogamy::{
    evaluate, eve_guess_from_beta, f_nosignalling, f_quantum, BetaValue, MonogamyModel,
    CLASSICAL_BOUND, TSIRELSON_BOUND,
};
use monoqkd::security::{
    check_condition, check_pointwise, condition_margin, critical_beta, tsirelson, CriticalStatus,
};
use proptest::prelude::*;

fn p(x: f64) -> Probability {
    Probability::new(x).unwrap()
}

fn b(x: f64) -> BetaValue {
    BetaValue::new(x).unwrap()
}

fn normalized(raw: &[f64]) -> Vec<f64> {
    let total: f64 = raw.iter().sum();
    raw.iter().map(|x| x / total).collect()
}

fn grid(lo: f64, hi: f64, points: usize) -> impl Iterator<Item = f64> {
    (0..points).map(move |k| {
        if k + 1 == points {
            hi
        } else {
            lo + (hi - lo) * k as f64 / (points - 1) as f64
        }
    })
}

fn models() -> [MonogamyModel; 2] {
    [MonogamyModel::quantum(), MonogamyModel::no_signalling()]
}

proptest! {
    #[test]
    fn binary_entropy_symmetric(x in 0.0f64..=1.0) {
        let d = binary_entropy(p(x)) - binary_entropy(p(1.0 - x));
        prop_assert!(d.abs() <= 1e-12);
    }

    #[test]
    fn binary_entropy_concave(x in 0.0f64..=1.0, y in 0.0f64..=1.0, lambda in 0.0f64..=1.0) {
        let mix = binary_entropy(p(lambda * x + (1.0 - lambda) * y));
        let chord = lambda * binary_entropy(p(x)) + (1.0 - lambda) * binary_entropy(p(y));
        prop_assert!(mix >= chord - 1e-12);
    }

    #[test]
    fn shannon_entropy_bounded(raw in prop::collection::vec(0.0f64..1.0, 1..8)) {
        prop_assume!(raw.iter().sum::<f64>() > 1e-3);
        let d = FiniteDistribution::new(normalized(&raw)).unwrap();
        let h = shannon_entropy(&d);
        prop_assert!(h >= 0.0 && h <= (d.len() as f64).log2() + 1e-12);
    }

    #[test]
    fn mutual_information_bounds(raw in prop::collection::vec(0.0f64..1.0, 6)) {
        prop_assume!(raw.iter().sum::<f64>() > 1e-3);
        let w = normalized(&raw);
        let j = JointDistribution::new(vec![w[..3].to_vec(), w[3..].to_vec()]).unwrap();
        let i = mutual_information(&j);
        let hr = shannon_entropy(&FiniteDistribution::new(j.row_marginal()).unwrap());
        let hc = shannon_entropy(&FiniteDistribution::new(j.col_marginal()).unwrap());
        prop_assert!(i >= -1e-12);
        prop_assert!(i <= hr.min(hc) + 1e-12);
    }

    #[test]
    fn mutual_information_vanishes_on_products(
        a in prop::collection::vec(0.01f64..1.0, 1..5),
        c in prop::collection::vec(0.01f64..1.0, 1..5),
    ) {
        let da = FiniteDistribution::new(normalized(&a)).unwrap();
        let dc = FiniteDistribution::new(normalized(&c)).unwrap();
        let j = JointDistribution::product(&da, &dc).unwrap();
        prop_assert!(mutual_information(&j).abs() <= 1e-12);
    }

    #[test]
    fn conditional_entropy_matches_joint(
        raw in prop::collection::vec(0.01f64..1.0, 1..6),
        conds in prop::collection::vec(0.0f64..=1.0, 6),
    ) {
        let w = FiniteDistribution::new(normalized(&raw)).unwrap();
        let c: Vec<Probability> = conds[..w.len()].iter().map(|&x| p(x)).collect();
        let direct = conditional_entropy_given(&w, &c).unwrap();
        let joint = binary_joint(&w, &c).unwrap();
        let h_e = shannon_entropy(&FiniteDistribution::new(joint.col_marginal()).unwrap());
        prop_assert!((direct - (joint.joint_entropy() - h_e)).abs() <= 1e-9);
    }

    #[test]
    fn concavity_equality_iff_two_point(
        raw in prop::collection::vec(0.01f64..1.0, 1..8),
        kinds in prop::collection::vec(0u8..4, 8),
        interior in prop::collection::vec(0.501f64..0.999, 8),
    ) {
        let weights = normalized(&raw);
        let conds: Vec<f64> = (0..weights.len())
            .map(|i| match kinds[i] {
                0 => 0.5,
                1 => 1.0,
                2 => 0.0,
                _ => interior[i],
            })
            .collect();
        let s = EveStrategy::from_raw(weights, conds).unwrap();
        let check = concavity_bound_check(&s);
        prop_assert!(check.holds);
        let tight = (check.lhs - check.rhs).abs() <= 1e-9;
        prop_assert_eq!(tight, two_point_deviation(&s) <= 1e-9);
    }

    #[test]
    fn counterexample_margins_positive(pb in 0.501f64..0.999, slack in 0.01f64..0.99) {
        let c = build_counterexample(p(pb), slack).unwrap();
        let h = binary_entropy(p(pb));
        let gap = h - 2.0 * (1.0 - pb);
        // P_B − P_E = slack·gap/2 and I(A:E) − I(A:B) = (1−slack)·gap
        prop_assert!((c.guess_margin() - slack * gap / 2.0).abs() <= 1e-12);
        prop_assert!((c.information_margin() - (1.0 - slack) * gap).abs() <= 1e-12);
        prop_assert!(c.guess_margin() > 0.0 && c.information_margin() > 0.0);
        prop_assert!((guessing_probability(&c.strategy).get() - c.p_e).abs() <= 1e-15);
    }

    #[test]
    fn strategy_json_round_trips(
        raw in prop::collection::vec(0.0f64..1.0, 1..6),
        conds in prop::collection::vec(0.0f64..=1.0, 6),
    ) {
        prop_assume!(raw.iter().sum::<f64>() > 1e-3);
        let w = normalized(&raw);
        let s = EveStrategy::from_raw(w.clone(), conds[..w.len()].to_vec()).unwrap();
        prop_assert_eq!(EveStrategy::from_json(&s.to_json()).unwrap(), s);
    }
}

#[test]
fn maximal_violation_decouples_eve() {
    assert!((f_quantum(tsirelson()).unwrap().get() - 0.5).abs() <= 1e-12);
    assert!((f_nosignalling(BetaValue::MAX).get() - 0.5).abs() <= 1e-12);
}

#[test]
fn curves_non_increasing_on_dense_grid() {
    for model in models() {
        let upper = model.domain_upper().get();
        let values: Vec<f64> = grid(0.5, upper, 10_000)
            .map(|x| evaluate(&model, b(x)).unwrap().get())
            .collect();
        for w in values.windows(2) {
            assert!(w[1] <= w[0], "{:?} increases", model.theory());
        }
    }
}

#[test]
fn nosignalling_dominates_quantum() {
    for x in grid(CLASSICAL_BOUND, TSIRELSON_BOUND, 10_000) {
        assert!(f_nosignalling(b(x)).get() >= f_quantum(b(x)).unwrap().get());
    }
}

#[test]
fn substitution_identity() {
    for model in models() {
        let mut active = 0;
        for x in grid(0.5, model.domain_upper().get(), 10_000) {
            let f = evaluate(&model, b(x)).unwrap();
            let pe = eve_guess_from_beta(f).get();
            if !(0.5 < pe && pe < 1.0) {
                continue;
            }
            active += 1;
            let lhs = 2.0 * (1.0 - pe);
            let rhs = 3.0 - 4.0 * f.get();
            assert!((lhs - rhs).abs() <= 1e-12, "β = {x}");
        }
        assert!(active > 1000);
    }
}

#[test]
fn pointwise_agrees_with_condition() {
    for model in models() {
        for x in grid(0.5, model.domain_upper().get(), 10_000) {
            let f = evaluate(&model, b(x)).unwrap();
            let pe = eve_guess_from_beta(f);
            if !(0.5 < pe.get() && pe.get() < 1.0) {
                continue;
            }
            let point = check_pointwise(p(x), pe).unwrap();
            let cond = check_condition(b(x), &model).unwrap();
            assert!((point.margin_bits - cond.margin_bits).abs() <= 1e-12);
            if cond.margin_bits.abs() > 1e-12 {
                assert_eq!(point.secure, cond.secure, "β = {x}");
            }
        }
    }
}

#[test]
fn margin_strictly_increasing_on_bracket() {
    for model in models() {
        let upper = model.domain_upper().get();
        let margins: Vec<f64> = grid(CLASSICAL_BOUND, upper, 10_000)
            .map(|x| condition_margin(b(x), &model).unwrap())
            .collect();
        let min_step = margins
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(f64::INFINITY, f64::min);
        assert!(min_step > 0.0, "{:?}: min step {min_step}", model.theory());
    }
}

#[test]
fn critical_ordering_chain() {
    let qm = critical_beta(&MonogamyModel::quantum(), 1e-12).unwrap();
    let ns = critical_beta(&MonogamyModel::no_signalling(), 1e-12).unwrap();
    assert!(qm.beta_star.get() < tsirelson().get());
    assert!(tsirelson().get() < ns.beta_star.get());
    assert!(ns.beta_star.get() < 1.0);
}

#[test]
fn margin_changes_sign_within_tolerance() {
    for tol in [1e-3, 1e-6, 1e-9] {
        for model in models() {
            let r = critical_beta(&model, tol).unwrap();
            assert_eq!(r.status, CriticalStatus::Root);
            let below = b(r.beta_star.get() - tol);
            let above = b(r.beta_star.get() + tol);
            assert!(condition_margin(below, &model).unwrap() <= 0.0);
            assert!(condition_margin(above, &model).unwrap() > 0.0);
            assert!(r.bracket.1 - r.bracket.0 <= tol);
        }
    }
}

#[test]
fn figure_json_round_trip_is_lossless() {
    let fig = sample_figure(257).unwrap();
    let back: FigureData = serde_json::from_str(&render_json(&fig)).unwrap();
    assert_eq!(back, fig);
}

#[test]
fn emitters_are_deterministic() {
    let a = sample_figure(101).unwrap();
    let b = sample_figure(101).unwrap();
    assert_eq!(render_csv(&a), render_csv(&b));
    assert_eq!(render_json(&a), render_json(&b));
    assert_eq!(render_svg(&a).unwrap(), render_svg(&b).unwrap());
}
