//! Worked examples for every operation, each checked against a value
//! computed by hand or by an independent batch formula.

use std::fs;

use fairstream::cli::{cmd_run, cmd_sweep, Mode, RunRequest, SweepParam};
use fairstream::drift::{self, DriftDetector, RecurrenceAction, RecurrenceStore};
use fairstream::fairness::{FairnessState, MitigationDirection};
use fairstream::harness::{compute_metrics, permutation, run_shuffled, run_stream, EvalReport, Prequential};
use fairstream::imbalance::ImbalanceState;
use fairstream::ingest::{self, DatasetManifest};
use fairstream::model::{GaussianStat, SensitiveCounts};
use fairstream::{Attribute, BinaryLabel, ModelError, MixedNaiveBayes, SensitiveGroup, StreamSchema, Variant, VariantConfig};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{close, record, rel_close, synthetic_stream, toy, toy_schema, Check};

pub const CHECKS: &[Check] = &[
    ("classify_group_examples", classify_group_examples),
    ("smoothed_prediction_example", smoothed_prediction_example),
    ("standard_normal_density", standard_normal_density),
    ("cold_start_predicts_negative", cold_start_predicts_negative),
    ("welford_examples", welford_examples),
    ("weighted_welford_matches_two_pass", weighted_welford_matches_two_pass),
    ("sensitive_count_examples", sensitive_count_examples),
    ("count_shift_examples", count_shift_examples),
    ("snapshot_examples", snapshot_examples),
    ("class_percentage_updates", class_percentage_updates),
    ("ocim_examples", ocim_examples),
    ("instance_weight_examples", instance_weight_examples),
    ("drift_detector_examples", drift_detector_examples),
    ("signature_examples", signature_examples),
    ("recurrence_store_examples", recurrence_store_examples),
    ("record_prediction_examples", record_prediction_examples),
    ("discrimination_examples", discrimination_examples),
    ("mitigation_decision_examples", mitigation_decision_examples),
    ("metric_examples", metric_examples),
    ("hand_simulated_prequential", hand_simulated_prequential),
    ("zero_lambda_matches_mitigation_off", zero_lambda_matches_mitigation_off),
    ("single_instance_stream", single_instance_stream),
    ("shuffle_examples", shuffle_examples),
    ("ingest_examples", ingest_examples),
    ("cli_fixture_matches_hand_simulation", cli_fixture_matches_hand_simulation),
    ("sweep_examples", sweep_examples),
];

pub fn classify_group_examples() {
    let schema = StreamSchema::new(
        vec![Attribute::nominal("gender"), Attribute::continuous("age"), Attribute::nominal("income")],
        "income",
        ">50K",
        "gender",
        "Female",
    )
    .unwrap();
    let f = record(&[("gender", "Female"), ("age", "30"), ("income", ">50K")]);
    let m = record(&[("gender", "Male"), ("age", "30"), ("income", ">50K")]);
    let none = record(&[("age", "30"), ("income", ">50K")]);
    assert_eq!(schema.classify_group(&f), Ok(SensitiveGroup::Protected));
    assert_eq!(schema.classify_group(&m), Ok(SensitiveGroup::NonProtected));
    assert!(schema.classify_group(&none).is_err());
}

pub fn smoothed_prediction_example() {
    // class counts {+:2, -:2}; color +{red:2}, -{red:1, blue:1}; sex constant
    let schema = hand_schema();
    let inst = |color: &str, y: &str| schema.instance(&record(&[("color", color), ("sex", "M"), ("y", y)])).unwrap();
    let mut m = MixedNaiveBayes::new(&schema);
    for (color, y) in [("red", "1"), ("red", "1"), ("red", "0"), ("blue", "0")] {
        m.train(&inst(color, y), 1.0).unwrap();
    }
    let p = m.predict(&inst("red", "1"));
    // prior 1/2 each; color 3/4 vs 2/4; sex (2+1)/(2+1) in both classes
    assert!(close(p.log_score_positive, 0.375f64.ln(), 1e-12), "{}", p.log_score_positive);
    assert!(close(p.log_score_negative, 0.25f64.ln(), 1e-12), "{}", p.log_score_negative);
    assert_eq!(p.predicted, BinaryLabel::Positive);
}

pub fn standard_normal_density() {
    let mut g = GaussianStat::new();
    g.update(-1.0, 1.0);
    g.update(1.0, 1.0);
    assert_eq!((g.mean(), g.variance()), (0.0, Some(1.0)));
    let density = g.log_density(0.0).exp();
    assert!(close(density, 1.0 / (2.0 * std::f64::consts::PI).sqrt(), 1e-15));
    assert!(close(density, 0.39894, 1e-5));
}

pub fn cold_start_predicts_negative() {
    let m = MixedNaiveBayes::new(&toy_schema());
    for inst in [toy("red", "F", 1.0, "1"), toy("blue", "M", -4.0, "0")] {
        assert_eq!(m.predict(&inst).predicted, BinaryLabel::Negative);
    }
}

pub fn welford_examples() {
    let mut g = GaussianStat::new();
    for x in [2.0, 4.0, 6.0] {
        g.update(x, 1.0);
    }
    assert_eq!((g.mean(), g.m2()), (4.0, 8.0));
    assert!(close(g.variance().unwrap(), 8.0 / 3.0, 1e-15));

    let mut one = GaussianStat::new();
    one.update(5.0, 1.0);
    assert_eq!((one.mean(), one.m2()), (5.0, 0.0));

    let mut w = GaussianStat::new();
    w.update(1.0, 2.0);
    w.update(4.0, 1.0);
    assert!(close(w.mean(), 2.0, 1e-15));
    assert!(close(w.variance().unwrap(), 2.0, 1e-15));
}

pub fn weighted_welford_matches_two_pass() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..300 {
        let n = rng.gen_range(1..400);
        let centre = rng.gen_range(-1e3..1e3);
        let spread = 10f64.powf(rng.gen_range(-3.0..3.0));
        let data: Vec<(f64, f64)> =
            (0..n).map(|_| (centre + spread * rng.gen_range(-1.0..1.0), rng.gen_range(0.01..10.0))).collect();
        let mut g = GaussianStat::new();
        for &(x, w) in &data {
            g.update(x, w);
        }
        let total: f64 = data.iter().map(|d| d.1).sum();
        let mean = data.iter().map(|&(x, w)| w * x).sum::<f64>() / total;
        let var = data.iter().map(|&(x, w)| w * (x - mean) * (x - mean)).sum::<f64>() / total;
        assert!(rel_close(g.mean(), mean, 1e-9), "mean {} vs {}", g.mean(), mean);
        let v = g.variance().unwrap();
        assert!((v - var).abs() <= 1e-9 * var.max(spread * spread * 1e-6), "variance {v} vs {var}");
    }
}

pub fn sensitive_count_examples() {
    let mut m = MixedNaiveBayes::new(&toy_schema());
    assert_eq!(m.sensitive_counts(), SensitiveCounts::new(0.0, 0.0, 0.0, 0.0));
    m.train(&toy("red", "F", 0.0, "1"), 1.0).unwrap();
    assert_eq!(m.sensitive_counts(), SensitiveCounts::new(1.0, 0.0, 0.0, 0.0));
    let mut w = MixedNaiveBayes::new(&toy_schema());
    w.train(&toy("red", "F", 0.0, "1"), 2.5).unwrap();
    assert_eq!(w.sensitive_counts(), SensitiveCounts::new(2.5, 0.0, 0.0, 0.0));
}

pub fn model_with_cells(cells: [f64; 4]) -> MixedNaiveBayes {
    let mut m = MixedNaiveBayes::new(&toy_schema());
    let layout = [("F", "1"), ("F", "0"), ("M", "1"), ("M", "0")];
    for ((sex, y), w) in layout.iter().zip(cells) {
        if w > 0.0 {
            m.train(&toy("red", sex, 0.0, y), w).unwrap();
        }
    }
    m
}

pub fn disadvantaging(group: SensitiveGroup, lambda: f64) -> FairnessState {
    let mut f = FairnessState::new(1.0, 1e-6, lambda);
    let (low, high) = match group {
        SensitiveGroup::Protected => (&mut f.pos_pred_protected, &mut f.pos_pred_non_protected),
        SensitiveGroup::NonProtected => (&mut f.pos_pred_non_protected, &mut f.pos_pred_protected),
    };
    *low = 1;
    *high = 7;
    f.seen_protected = 9;
    f.seen_non_protected = 9;
    f
}

pub fn count_shift_examples() {
    let mut m = model_with_cells([10.0, 90.0, 60.0, 40.0]);
    let f = disadvantaging(SensitiveGroup::Protected, 0.1);
    assert!(close(f.discrimination(), 0.6, 1e-15));
    let action = f.decide_mitigation(&m.sensitive_counts());
    m.apply_count_shift(&action.deltas).unwrap();
    let c = m.sensitive_counts();
    let got = c.as_array();
    for (g, want) in got.iter().zip([19.0, 81.0, 54.0, 46.0]) {
        assert!(close(*g, want, 1e-12), "{got:?}");
    }
    assert_eq!((c.protected_total(), c.non_protected_total()), (100.0, 100.0));

    let mut z = model_with_cells([10.0, 90.0, 60.0, 40.0]);
    let before = z.clone();
    let action = FairnessState { lambda: 0.0, ..f }.decide_mitigation(&z.sensitive_counts());
    z.apply_count_shift(&action.deltas).unwrap();
    assert_eq!(z.sensitive_counts(), before.sensitive_counts());

    let mut bad = model_with_cells([10.0, 0.5, 60.0, 40.0]);
    let snapshot = bad.clone();
    let err = bad.apply_count_shift(&SensitiveCounts::new(1.5, -1.5, 0.0, 0.0)).unwrap_err();
    assert!(matches!(err, ModelError::NegativeCell { .. }), "{err:?}");
    assert_eq!(bad.sensitive_counts(), snapshot.sensitive_counts());
    assert_eq!(bad.snapshot(), snapshot.snapshot());
}

pub fn snapshot_examples() {
    let mut m = MixedNaiveBayes::new(&toy_schema());
    m.train(&toy("red", "F", 1.0, "1"), 1.0).unwrap();
    m.train(&toy("blue", "M", 4.0, "0"), 2.0).unwrap();
    m.train(&toy("blue", "F", 3.0, "0"), 1.0).unwrap();
    let probes = [toy("red", "M", 2.0, "0"), toy("blue", "F", 1.0, "1"), toy("green", "M", 9.0, "1")];
    let snap = m.snapshot();
    assert_eq!(snap, m.snapshot());

    let mut copy = MixedNaiveBayes::new(&toy_schema());
    copy.restore(&snap);
    for p in &probes {
        assert_eq!(copy.predict(p), m.predict(p));
    }

    let before: Vec<_> = probes.iter().map(|p| m.predict(p)).collect();
    for _ in 0..25 {
        m.train(&toy("red", "M", 2.0, "1"), 3.0).unwrap();
    }
    assert_ne!(probes.iter().map(|p| m.predict(p)).collect::<Vec<_>>(), before);
    m.restore(&snap);
    assert_eq!(probes.iter().map(|p| m.predict(p)).collect::<Vec<_>>(), before);
}

pub fn class_percentage_updates() {
    let mut s = ImbalanceState::new(0.9);
    s.update(BinaryLabel::Positive);
    assert!(close(s.cp_positive(), 0.55, 1e-15) && close(s.cp_negative(), 0.45, 1e-15));
    assert!(close(s.ocim(), 0.10, 1e-15));

    let mut pos = ImbalanceState::with_percentages(0.9, 0.2, 0.8);
    let mut last = pos.cp_positive();
    for _ in 0..400 {
        pos.update(BinaryLabel::Positive);
        assert!(pos.cp_positive() >= last);
        last = pos.cp_positive();
    }
    assert!(close(pos.cp_positive(), 1.0, 1e-12));

    // the 2-cycle of the recurrence sits at 1/(1+a) and a/(1+a)
    let mut alt = ImbalanceState::new(0.9);
    for i in 0..2000 {
        alt.update(if i % 2 == 0 { BinaryLabel::Positive } else { BinaryLabel::Negative });
        if i > 200 {
            assert!((0.45..=0.55).contains(&alt.cp_positive()), "{}", alt.cp_positive());
        }
    }
    assert!(close(alt.cp_negative(), 1.0 / 1.9, 1e-12));
    assert!(close(alt.cp_positive(), 0.9 / 1.9, 1e-12));
}

pub fn ocim_examples() {
    assert_eq!(ImbalanceState::with_percentages(0.9, 0.5, 0.5).ocim(), 0.0);
    assert_eq!(ImbalanceState::with_percentages(0.9, 1.0, 0.0).ocim(), 1.0);
    assert!(close(ImbalanceState::with_percentages(0.9, 0.55, 0.45).ocim(), 0.10, 1e-15));
}

pub fn instance_weight_examples() {
    let s = ImbalanceState::with_percentages(0.9, 0.6, 0.4);
    assert!(close(s.class_weights().negative, 1.25, 1e-15));
    assert!(close(s.instance_weight(BinaryLabel::Negative), 1.5625, 1e-12));
    assert_eq!(s.instance_weight(BinaryLabel::Positive), 1.0);

    let balanced = ImbalanceState::with_percentages(0.9, 0.5, 0.5);
    assert_eq!(balanced.instance_weight(BinaryLabel::Positive), 1.0);
    assert_eq!(balanced.instance_weight(BinaryLabel::Negative), 1.0);

    let guard = ImbalanceState::with_percentages(0.9, 0.4, 0.6);
    assert_eq!(guard.instance_weight(BinaryLabel::Negative), 1.0);
    // mirrored branch: 1/(2*0.4) / (1 - 0.2)
    assert!(close(guard.instance_weight(BinaryLabel::Positive), 1.5625, 1e-12));
}

pub fn drift_detector_examples() {
    let mut constant = DriftDetector::new(1000, 0.02);
    assert!((0..5000).all(|_| constant.observe(0.3).is_none()));

    let mut fires = DriftDetector::new(1000, 0.02);
    assert!((0..1000).all(|_| fires.observe(0.0).is_none()));
    let event = fires.observe(0.05).expect("deviation 0.05 > 0.02");
    assert_eq!(event.ocim, 0.05);
    assert!(close(event.mean, 0.05 / 1000.0, 1e-15));

    let mut quiet = DriftDetector::new(1000, 0.10);
    assert!((0..1000).all(|_| quiet.observe(0.0).is_none()));
    assert!(quiet.observe(0.05).is_none());
}

pub fn signature_examples() {
    assert_eq!(drift::signature(0.12, 0.05), 2);
    assert_eq!(drift::signature(-0.01, 0.05), -1);
    assert_eq!(drift::signature(0.0, 0.05), 0);
}

pub fn recurrence_store_examples() {
    let mut store = RecurrenceStore::new();
    let mut live = MixedNaiveBayes::new(&toy_schema());
    live.train(&toy("red", "F", 1.0, "1"), 1.0).unwrap();
    assert_eq!(store.on_drift(2, &mut live), RecurrenceAction::Stored);
    assert_eq!(store.len(), 1);
    let stored = live.snapshot();

    live.train(&toy("blue", "M", 5.0, "0"), 4.0).unwrap();
    assert_ne!(live.snapshot(), stored);
    assert_eq!(store.on_drift(2, &mut live), RecurrenceAction::Restored);
    assert_eq!(live.snapshot(), stored);

    assert_eq!(store.on_drift(-1, &mut live), RecurrenceAction::Stored);
    assert_eq!(store.len(), 2);
}

pub fn record_prediction_examples() {
    let counts = |f: &FairnessState| (f.pos_pred_protected, f.seen_protected, f.pos_pred_non_protected, f.seen_non_protected);
    let mut a = FairnessState::new(1.0, 1e-6, 0.001);
    a.record_prediction(SensitiveGroup::Protected, BinaryLabel::Positive);
    assert_eq!(counts(&a), (1, 1, 0, 0));
    let mut b = FairnessState::new(1.0, 1e-6, 0.001);
    b.record_prediction(SensitiveGroup::NonProtected, BinaryLabel::Negative);
    assert_eq!(counts(&b), (0, 0, 0, 1));
    a.record_prediction(SensitiveGroup::NonProtected, BinaryLabel::Negative);
    assert_eq!(counts(&a), (1, 1, 0, 1));
}

pub fn discrimination_examples() {
    let mut f = FairnessState::new(1.0, 1e-6, 0.001);
    assert_eq!(f.discrimination(), 0.0);
    f.pos_pred_non_protected = 5;
    f.seen_non_protected = 10;
    f.pos_pred_protected = 2;
    f.seen_protected = 10;
    assert!(close(f.discrimination(), 3.0 / 11.0, 1e-15));
    assert!(close(f.discrimination(), 0.27273, 1e-5));
    let sym = FairnessState { pos_pred_protected: 5, ..f };
    assert_eq!(sym.discrimination(), 0.0);
}

pub fn mitigation_decision_examples() {
    let cells = SensitiveCounts::new(10.0, 90.0, 60.0, 40.0);
    let toward = disadvantaging(SensitiveGroup::Protected, 0.1).decide_mitigation(&cells);
    assert_eq!(toward.direction, MitigationDirection::TowardProtected);
    let d = toward.deltas.as_array();
    for (g, want) in d.iter().zip([9.0, -9.0, -6.0, 6.0]) {
        assert!(close(*g, want, 1e-12), "{d:?}");
    }

    let away = disadvantaging(SensitiveGroup::NonProtected, 0.1).decide_mitigation(&cells);
    assert_eq!(away.direction, MitigationDirection::TowardNonProtected);
    let shifted = cells.shifted(&away.deltas).as_array();
    for (g, want) in shifted.iter().zip([9.0, 91.0, 64.0, 36.0]) {
        assert!(close(*g, want, 1e-12), "{shifted:?}");
    }

    let fair = FairnessState::new(1.0, 1e-6, 0.1).decide_mitigation(&cells);
    assert_eq!(fair.direction, MitigationDirection::None);
    assert_eq!(fair.deltas.as_array(), [0.0; 4]);
}

pub fn metric_examples() {
    assert_eq!(compute_metrics(4, 0, 0, 4, 0.0).recall, 0.5);
    let perfect = compute_metrics(3, 0, 9, 0, 0.0);
    assert_eq!((perfect.balanced_accuracy, perfect.gmean), (1.0, 1.0));
    let m = compute_metrics(81, 51, 49, 19, 0.0);
    assert!(close(m.gmean, 0.3969f64.sqrt(), 1e-12) && close(m.gmean, 0.63, 1e-12));
    let empty = compute_metrics(0, 0, 0, 0, 0.0);
    assert_eq!((empty.tpr, empty.tnr), (0.0, 0.0));
}

fn hand_schema() -> StreamSchema {
    StreamSchema::new(
        vec![Attribute::nominal("color"), Attribute::nominal("sex"), Attribute::nominal("y")],
        "y",
        "1",
        "sex",
        "F",
    )
    .unwrap()
}

pub const HAND_ROWS: [(&str, &str, &str); 4] = [("red", "F", "1"), ("red", "F", "1"), ("blue", "M", "0"), ("red", "M", "0")];

pub fn hand_simulated_prequential() {
    let schema = hand_schema();
    let stream: Vec<_> = HAND_ROWS
        .iter()
        .map(|(c, s, y)| schema.instance(&record(&[("color", c), ("sex", s), ("y", y)])).unwrap())
        .collect();
    // (score+, score-) before training on each row, worked out by hand
    let expected: [(f64, f64); 4] = [(0.5, 0.5), (2.0 / 3.0, 1.0 / 3.0), (1.0 / 12.0, 1.0 / 4.0), (9.0 / 80.0, 4.0 / 45.0)];
    let predicted = [BinaryLabel::Negative, BinaryLabel::Positive, BinaryLabel::Negative, BinaryLabel::Positive];

    let config = VariantConfig::for_variant(Variant::Mnb);
    let mut run = Prequential::new(&schema, config).unwrap();
    for (i, inst) in stream.iter().enumerate() {
        let p = run.model().predict(inst);
        assert!(close(p.log_score_positive, expected[i].0.ln(), 1e-12), "step {i}");
        assert!(close(p.log_score_negative, expected[i].1.ln(), 1e-12), "step {i}");
        let rec = run.step(inst).unwrap();
        assert_eq!(rec.predicted, predicted[i], "step {i}");
        assert_eq!(rec.weight, 1.0);
    }
    let r = run_stream(&schema, &stream, &config, false).unwrap().report;
    assert_eq!((r.tp, r.fp, r.tn, r.fn_), (1, 1, 1, 1));
    assert_eq!((r.recall, r.tnr, r.balanced_accuracy), (0.5, 0.5, 0.5));
    assert_eq!(r.disc_score, 0.0);
    assert_eq!(r.steps, 4);
}

pub fn zero_lambda_matches_mitigation_off() {
    let (schema, data) = synthetic_stream(3000, 11);
    for variant in [Variant::Damnb, Variant::Dcamnb] {
        let mut with = VariantConfig::for_variant(variant);
        with.hyper.lambda = 0.0;
        let mut without = with;
        without.use_mitigation = false;
        let a = run_stream(&schema, &data, &with, true).unwrap();
        let b = run_stream(&schema, &data, &without, true).unwrap();
        assert_eq!(strip(a.report), strip(b.report));
        let preds = |t: &[fairstream::harness::StepRecord]| t.iter().map(|r| r.predicted).collect::<Vec<_>>();
        assert_eq!(preds(&a.trace), preds(&b.trace));
    }
}

fn strip(mut r: EvalReport) -> EvalReport {
    r.runtime_seconds = 0.0;
    r.mitigations = 0;
    r.per_shuffle = r.per_shuffle.map(|v| v.into_iter().map(strip).collect());
    r
}

pub fn single_instance_stream() {
    let schema = toy_schema();
    let one = [toy("red", "F", 1.0, "1")];
    for variant in Variant::ALL {
        let r = run_stream(&schema, &one, &VariantConfig::for_variant(variant), false).unwrap().report;
        assert_eq!(r.steps, 1);
        assert_eq!((r.tp, r.fn_), (0, 1));
    }
}

pub fn shuffle_examples() {
    let (schema, data) = synthetic_stream(500, 3);
    let config = VariantConfig::for_variant(Variant::Dcamnb).with_seed(42);
    let single = run_shuffled(&schema, &data, &config, 1, false).unwrap().report;
    let order = permutation(data.len(), 42);
    let direct = run_stream(&schema, order.iter().map(|&i| &data[i]), &config, false).unwrap().report;
    assert_eq!(strip(single.per_shuffle.clone().unwrap().remove(0)), strip(direct.clone()));
    assert_eq!(single.balanced_accuracy, direct.balanced_accuracy);

    let again = run_shuffled(&schema, &data, &config, 4, false).unwrap().report;
    let twice = run_shuffled(&schema, &data, &config, 4, false).unwrap().report;
    assert_eq!(strip(again.clone()), strip(twice));

    let base = strip(direct);
    let a = EvalReport { balanced_accuracy: 0.70, ..base.clone() };
    let b = EvalReport { balanced_accuracy: 0.80, ..base };
    assert!(close(EvalReport::average(vec![a, b]).balanced_accuracy, 0.75, 1e-15));
}

pub fn ingest_examples() {
    let dir = tempfile::tempdir().unwrap();
    let manifest = |csv: &str| {
        fs::write(dir.path().join("d.csv"), csv).unwrap();
        let text = r#"
path = "d.csv"
[label]
column = "y"
positive = "1"
[sensitive]
column = "sex"
protected = "F"
[[attributes]]
name = "sex"
kind = "nominal"
[[attributes]]
name = "x"
kind = "continuous"
[[attributes]]
name = "y"
kind = "nominal"
"#;
        DatasetManifest::from_toml_str(text, dir.path(), &dir.path().join("m.toml")).unwrap()
    };

    let d = ingest::load(&manifest("sex,x,y\nF,1,1\nM,?,0\nM,2,0\n")).unwrap();
    assert_eq!((d.instances.len(), d.stats.dropped), (2, 1));

    let d = ingest::load(&manifest("sex,x,y\nF,abc,1\nM,2,0\n")).unwrap();
    assert_eq!((d.instances.len(), d.stats.dropped), (1, 1));

    let err = ingest::load(&manifest("sex,y\nF,1\n")).unwrap_err();
    assert!(err.to_string().contains("`x`"), "{err}");
}

fn hand_fixture(dir: &std::path::Path) -> std::path::PathBuf {
    let mut csv = String::from("color,sex,y\n");
    for (c, s, y) in HAND_ROWS {
        csv.push_str(&format!("{c},{s},{y}\n"));
    }
    fs::write(dir.join("hand.csv"), csv).unwrap();
    let manifest = dir.join("hand.toml");
    fs::write(
        &manifest,
        r#"path = "hand.csv"
[label]
column = "y"
positive = "1"
[sensitive]
column = "sex"
protected = "F"
[[attributes]]
name = "color"
kind = "nominal"
[[attributes]]
name = "sex"
kind = "nominal"
[[attributes]]
name = "y"
kind = "nominal"
"#,
    )
    .unwrap();
    manifest
}

pub fn cli_fixture_matches_hand_simulation() {
    let dir = tempfile::tempdir().unwrap();
    let manifest = hand_fixture(dir.path());
    let mut req = RunRequest::new(&manifest, Variant::Mnb, dir.path().join("r.json"));
    req.mode = Mode::Stream;
    cmd_run(&req).unwrap();
    let doc: serde_json::Value = serde_json::from_str(&fs::read_to_string(dir.path().join("r.json")).unwrap()).unwrap();
    let r = &doc["report"];
    for key in ["tp", "fp", "tn", "fn"] {
        assert_eq!(r[key], 1, "{key}");
    }
    assert_eq!(r["balanced_accuracy"], 0.5);
    assert_eq!(r["steps"], 4);
}

pub fn sweep_examples() {
    let dir = tempfile::tempdir().unwrap();
    let manifest = hand_fixture(dir.path());
    let mut req = RunRequest::new(&manifest, Variant::Dcamnb, dir.path().join("s.json"));
    req.shuffles = 2;
    let summary = cmd_sweep(&req, SweepParam::Lambda, &[0.01]).unwrap();
    req.lambda = 0.01;
    req.report = dir.path().join("direct.json");
    let direct = cmd_run(&req).unwrap();
    assert_eq!(summary.rows.len(), 1);
    assert_eq!(summary.rows[0].balanced_accuracy, direct.report.balanced_accuracy);
    assert_eq!(summary.rows[0].disc_score, direct.report.disc_score);

    assert!("bogus".parse::<SweepParam>().is_err());
    let empty = cmd_sweep(&req, SweepParam::Lambda, &[]).unwrap_err();
    assert_eq!(empty.exit_code(), 2);
}
