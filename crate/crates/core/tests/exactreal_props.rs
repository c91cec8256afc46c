mod common;

use std::cmp::Ordering;

use common::*;
use proptest::prelude::*;
use sweepout::exactreal::{int, min_gap, sort_dedup, IntervalSet, Point};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn canonicalize_is_idempotent(s in interval_set(q(), -32, 32, 16, 8)) {
        let raw = s.intervals().iter().map(|iv| (iv.lo.clone(), iv.hi.clone())).collect();
        prop_assert_eq!(IntervalSet::canonicalize(&q(), raw).unwrap(), s);
    }

    #[test]
    fn measure_is_additive(s in interval_set(q(), -32, 32, 16, 6), t in interval_set(q(), -32, 32, 16, 6)) {
        let b = q();
        let z = Point::zero(&b);
        let left = s.clip(&Point::rational(&b, int(-2)), &z).unwrap();
        let right = t.clip(&z, &Point::rational(&b, int(2))).unwrap();
        let u = left.union(&right).unwrap();
        prop_assert_eq!(u.measure(), &left.measure() + &right.measure());
    }

    #[test]
    fn compare_is_a_total_order(a in surd_point(surds()), b in surd_point(surds()), c in surd_point(surds())) {
        let ab = a.try_cmp(&b).unwrap();
        prop_assert_eq!(ab, b.try_cmp(&a).unwrap().reverse());
        prop_assert_eq!(ab == Ordering::Equal, a == b);
        let (fa, fb) = (a.to_f64(), b.to_f64());
        if (fa - fb).abs() > 1e-9 {
            prop_assert_eq!(ab, fa.partial_cmp(&fb).unwrap());
        }
        let bc = b.try_cmp(&c).unwrap();
        if ab != Ordering::Greater && bc != Ordering::Greater {
            prop_assert_ne!(a.try_cmp(&c).unwrap(), Ordering::Greater);
        }
    }

    #[test]
    fn min_gap_bounds_every_pair(mut pts in prop::collection::vec(surd_point(surds()), 2..=100)) {
        sort_dedup(&mut pts).unwrap();
        prop_assume!(pts.len() >= 2);
        let d = min_gap(&pts).unwrap();
        let mut attained = false;
        for i in 0..pts.len() {
            for j in i + 1..pts.len() {
                let diff = (&pts[i] - &pts[j]).abs().unwrap();
                prop_assert_ne!(d.try_cmp(&diff).unwrap(), Ordering::Greater);
                attained |= diff == d;
            }
        }
        prop_assert!(attained);
    }
}
