use sweepout::builder::{
    build_witness, oscillation_trace, verify_witness, TraceOptions, VerifyMode, VerifyOptions,
    WitnessOptions,
};
use sweepout::error::Error;
use sweepout::exactreal::{rat, GeneratorBasis, Point, Rational};
use sweepout::measure::MeasureSequence;

fn geometric(count: usize) -> MeasureSequence {
    let b = GeneratorBasis::surds(&[2, 3]).unwrap();
    let atoms = [
        Point::generator(&b, 1, rat(1, 1)),
        Point::generator(&b, 2, rat(1, 1)),
    ];
    MeasureSequence::geometric(&atoms, &[rat(1, 2), rat(1, 2)], &rat(1, 4), count).unwrap()
}

fn trimmed() -> WitnessOptions {
    WitnessOptions {
        trim: Some((4, 4)),
        ..WitnessOptions::default()
    }
}

#[test]
fn small_witness_passes_explicit_oracle() {
    let seq = geometric(40);
    let w = build_witness(&seq, &rat(1, 12), &rat(1, 2), &trimmed())
        .unwrap()
        .witness;
    assert_eq!(w.m(), 3);
    let r = verify_witness(&w, &seq, VerifyMode::Explicit, &VerifyOptions::default()).unwrap();
    assert!(r.passed, "{:?}", r.failures().collect::<Vec<_>>());
    for name in [
        "explicit_counts",
        "explicit_disjoint",
        "explicit_measure",
        "explicit_sup",
        "level_set",
    ] {
        assert!(r.checks.iter().any(|c| c.name == name && c.pass), "{name}");
    }
}

#[test]
fn factored_witness_passes() {
    let seq = geometric(60);
    let w = build_witness(&seq, &rat(1, 4), &rat(1, 2), &WitnessOptions::default())
        .unwrap()
        .witness;
    assert_eq!(w.m(), 7);
    assert!(
        Rational::from_integer(w.e_count.clone())
            > rat(1, 4) * Rational::from_integer(w.g_count.clone())
    );
    let r = verify_witness(&w, &seq, VerifyMode::FactorExact, &VerifyOptions::default()).unwrap();
    assert!(r.passed);
    let sampled = verify_witness(
        &w,
        &seq,
        VerifyMode::Sampled,
        &VerifyOptions {
            samples: 200,
            ..Default::default()
        },
    )
    .unwrap();
    assert!(sampled.passed);
}

#[test]
fn moved_point_fails_named_check() {
    let seq = geometric(40);
    let mut w = build_witness(&seq, &rat(1, 12), &rat(1, 2), &trimmed())
        .unwrap()
        .witness;
    let g = w.factors[1].g.remove(0);
    w.factors[1].g.push(g.add_rational(&rat(1, 1000)));
    let r = verify_witness(&w, &seq, VerifyMode::FactorExact, &VerifyOptions::default()).unwrap();
    assert!(!r.passed);
    let failed = r.checks.iter().find(|c| c.name == "factor_sup[1]").unwrap();
    assert!(!failed.pass);
    assert!(failed.witness.as_ref().unwrap().starts_with("x = "));
}

#[test]
fn explicit_mode_respects_cap() {
    let seq = geometric(60);
    let w = build_witness(&seq, &rat(1, 4), &rat(1, 2), &WitnessOptions::default())
        .unwrap()
        .witness;
    let err =
        verify_witness(&w, &seq, VerifyMode::Explicit, &VerifyOptions::default()).unwrap_err();
    assert!(matches!(err, Error::BruteForceCap { .. }));
}

#[test]
fn trace_reaches_delta() {
    let seq = geometric(30);
    let opts = TraceOptions {
        witness: trimmed(),
        ..TraceOptions::default()
    };
    let t = oscillation_trace(
        &seq,
        &[(rat(1, 12), rat(1, 2)), (rat(1, 12), rat(3, 4))],
        &opts,
    )
    .unwrap();
    assert!(t.warnings.is_empty());
    assert_eq!(t.entries.len(), 2);
    assert!(t.entries[0].exceeds_delta);
    assert!(t.rows.iter().any(|r| r.entry == 0 && r.value > 0.5));
    assert!(t.rows.iter().any(|r| r.entry == 1 && r.value > 0.75));
    // far along the sequence the atoms are tiny and B sits away from A
    assert!(t.rows.iter().any(|r| r.entry == 0 && r.value == 0.0));
}

#[test]
fn short_sequence_truncates_trace() {
    let seq = geometric(4);
    let t = oscillation_trace(&seq, &[(rat(1, 12), rat(1, 2))], &TraceOptions::default()).unwrap();
    assert!(t.entries.is_empty());
    assert_eq!(t.warnings.len(), 1);
    assert!(t.warnings[0].contains("truncated"));
}
