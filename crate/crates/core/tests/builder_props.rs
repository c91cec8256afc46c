mod common;

use std::collections::HashSet;

use common::*;
use proptest::prelude::*;
use sweepout::builder::{
    build_eg, build_witness, certify_eg, separation_check, unique_sum_check, verify_witness,
    EGPair, EgOptions, MaxReading, SweepOutWitness, VerifyMode, VerifyOptions, WitnessOptions,
    WitnessRepr, DEFAULT_BRUTE_FORCE_CAP,
};
use sweepout::exactreal::{rat, Point};
use sweepout::measure::MeasureSequence;

/// 2 to 4 factor sets of up to 4 rational points, factor `k` drawn at scale
/// `s^-k` so that separation holds often but not always.
fn family() -> impl Strategy<Value = Vec<Vec<Point>>> {
    (2usize..=4, 2i64..=6).prop_flat_map(|(n, s)| {
        prop::collection::vec(prop::collection::btree_set(-12i64..=12, 1..=4), n).prop_map(
            move |sets| {
                let b = q();
                sets.into_iter()
                    .enumerate()
                    .map(|(k, set)| {
                        set.into_iter()
                            .map(|a| Point::rational(&b, rat(a, 12 * s.pow(k as u32))))
                            .collect()
                    })
                    .collect()
            },
        )
    })
}

fn sums(sets: &[Vec<Point>]) -> HashSet<Point> {
    let mut acc = vec![Point::zero(&q())];
    for s in sets {
        acc = acc
            .iter()
            .flat_map(|a| s.iter().map(move |x| a + x))
            .collect();
    }
    acc.into_iter().collect()
}

fn sequence(ratio_den: i64) -> MeasureSequence {
    let b = surds();
    let atoms = [
        Point::generator(&b, 1, rat(1, 1)),
        Point::generator(&b, 2, rat(1, 1)),
    ];
    MeasureSequence::geometric(&atoms, &[rat(1, 2), rat(1, 2)], &rat(1, ratio_den), 40).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn separation_implies_unique_sums(sets in family()) {
        prop_assume!(sets.iter().all(|s| s.len() > 1 || !s[0].is_zero()));
        let sep = separation_check(&sets, MaxReading::Absolute).unwrap();
        let unique = unique_sum_check(&sets, DEFAULT_BRUTE_FORCE_CAP).unwrap();
        if sep.holds {
            prop_assert!(unique.holds, "collision {:?}", unique.collision);
            let product: usize = sets.iter().map(Vec::len).product();
            prop_assert_eq!(sums(&sets).len(), product);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn pair_invariants_survive_serialization(c2 in 1i64..=4, c3 in 1i64..=4, e in prop::sample::select(vec![rat(1, 6), rat(1, 8)])) {
        let b = surds();
        let mu = sweepout::measure::DiscreteMeasure::new(
            vec![Point::generator(&b, 1, rat(c2, 16)), Point::generator(&b, 2, rat(c3, 16))],
            vec![rat(1, 2), rat(1, 2)],
        ).unwrap();
        let built = build_eg(&mu, 1, &e, &EgOptions::default()).unwrap();
        prop_assert!(built.certificate.holds());
        let json = serde_json::to_string(&built.pair.to_repr()).unwrap();
        let back = EGPair::from_repr(&b, &serde_json::from_str(&json).unwrap()).unwrap();
        prop_assert_eq!(&back, &built.pair);
        prop_assert_eq!(certify_eg(&back, &mu).unwrap(), built.certificate);
    }

    #[test]
    fn explicit_witness_counts(
        ratio in 4i64..=6,
        delta in prop::sample::select(vec![rat(1, 2), rat(2, 3)]),
        trim in (1usize..=2, 2usize..=4),
    ) {
        let seq = sequence(ratio);
        let opts = WitnessOptions { trim: Some(trim), ..WitnessOptions::default() };
        let w = build_witness(&seq, &rat(1, 12), &delta, &opts).unwrap().witness;
        let json = serde_json::to_string(&w.to_repr()).unwrap();
        let repr: WitnessRepr = serde_json::from_str(&json).unwrap();
        let back = SweepOutWitness::from_repr(&surds(), &repr).unwrap();
        let report = verify_witness(&back, &seq, VerifyMode::Explicit, &VerifyOptions::default()).unwrap();
        let failed: Vec<_> = report.failures().map(|c| c.name.clone()).collect();
        prop_assert!(report.passed, "failed checks {:?}", failed);
    }
}
