#![allow(dead_code)]

use std::sync::Arc;

use proptest::prelude::*;
use sweepout::exactreal::{rat, GeneratorBasis, IntervalSet, Point, Rational};
use sweepout::measure::DiscreteMeasure;

pub fn surds() -> Arc<GeneratorBasis> {
    GeneratorBasis::surds(&[2, 3]).unwrap()
}

pub fn q() -> Arc<GeneratorBasis> {
    GeneratorBasis::rational()
}

/// Rational `n / den` with `|n / den| <= bound`.
pub fn small_rational(bound: i64, den: i64) -> impl Strategy<Value = Rational> {
    (-bound * den..=bound * den).prop_map(move |n| rat(n, den))
}

/// Point `a + b sqrt2 + c sqrt3` with small rational coefficients.
pub fn surd_point(b: Arc<GeneratorBasis>) -> impl Strategy<Value = Point> {
    (-16i64..=16, -8i64..=8, -8i64..=8).prop_map(move |(a, x, y)| {
        Point::from_coeffs(&b, vec![rat(a, 16), rat(x, 16), rat(y, 16)]).unwrap()
    })
}

/// Union of up to `n` intervals with endpoints `k / den` in `[lo, hi]`.
pub fn interval_set(
    basis: Arc<GeneratorBasis>,
    lo: i64,
    hi: i64,
    den: i64,
    n: usize,
) -> impl Strategy<Value = IntervalSet> {
    prop::collection::vec((lo..hi, 1i64..=(hi - lo)), 0..=n).prop_map(move |raw| {
        let pairs = raw
            .into_iter()
            .map(|(a, len)| {
                let b = (a + len).min(hi);
                (
                    Point::rational(&basis, rat(a, den)),
                    Point::rational(&basis, rat(b.max(a + 1), den)),
                )
            })
            .collect();
        IntervalSet::canonicalize(&basis, pairs).unwrap()
    })
}

/// Measure with up to four rational atoms in `(0, 1)` and masses in `(0, 1]`.
pub fn rational_measure() -> impl Strategy<Value = DiscreteMeasure> {
    prop::collection::btree_map(1i64..64, 1i64..=8, 1..=4).prop_map(|atoms| {
        let b = q();
        let (pts, masses) = atoms
            .into_iter()
            .map(|(a, m)| (Point::rational(&b, rat(a, 64)), rat(m, 8)))
            .unzip();
        DiscreteMeasure::new(pts, masses).unwrap()
    })
}

/// Measure with up to three atoms `c sqrt2 / 16` or `c sqrt3 / 16` in `(0, 1)`.
pub fn surd_measure() -> impl Strategy<Value = DiscreteMeasure> {
    prop::collection::btree_set((1usize..=2, 1i64..=8), 1..=3).prop_map(|atoms| {
        let b = surds();
        let n = atoms.len() as i64;
        let pts = atoms
            .into_iter()
            .map(|(g, c)| Point::generator(&b, g, rat(c, 16)))
            .collect();
        DiscreteMeasure::new(pts, vec![rat(1, n); n as usize]).unwrap()
    })
}
