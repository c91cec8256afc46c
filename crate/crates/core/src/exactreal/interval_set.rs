use std::cmp::Ordering;
use std::sync::Arc;

use num_traits::One;

use super::basis::GeneratorBasis;
use super::point::Point;
use super::rational::{int, Rational};
use crate::error::{Error, Result};

/// Open interval `(lo, hi)` with `lo < hi`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OpenInterval {
    pub lo: Point,
    pub hi: Point,
}

impl OpenInterval {
    pub fn new(lo: Point, hi: Point) -> Result<Self> {
        if lo.try_cmp(&hi)? != Ordering::Less {
            return Err(Error::InvalidInterval {
                lo: lo.to_string(),
                hi: hi.to_string(),
            });
        }
        Ok(OpenInterval { lo, hi })
    }

    pub fn length(&self) -> Point {
        &self.hi - &self.lo
    }

    pub fn contains(&self, x: &Point) -> Result<bool> {
        Ok(self.lo.try_cmp(x)? == Ordering::Less && x.try_cmp(&self.hi)? == Ordering::Less)
    }

    pub fn midpoint(&self) -> Point {
        (&self.lo + &self.hi).scale(&Rational::new(1.into(), 2.into()))
    }
}

/// Finite union of pairwise disjoint open intervals, sorted and maximally
/// merged. Intervals that only touch at an endpoint stay separate, since the
/// shared endpoint is not in the set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntervalSet {
    basis: Arc<GeneratorBasis>,
    intervals: Vec<OpenInterval>,
}

impl IntervalSet {
    pub fn empty(basis: &Arc<GeneratorBasis>) -> Self {
        IntervalSet {
            basis: basis.clone(),
            intervals: Vec::new(),
        }
    }

    pub fn interval(lo: Point, hi: Point) -> Result<Self> {
        let basis = lo.basis().clone();
        Self::canonicalize(&basis, vec![(lo, hi)])
    }

    /// Builds the canonical form of a union of open intervals.
    pub fn canonicalize(basis: &Arc<GeneratorBasis>, raw: Vec<(Point, Point)>) -> Result<Self> {
        let mut items = raw
            .into_iter()
            .map(|(lo, hi)| {
                if !lo.basis().same_as(basis) || !hi.basis().same_as(basis) {
                    return Err(Error::BasisMismatch);
                }
                OpenInterval::new(lo, hi)
            })
            .collect::<Result<Vec<_>>>()?;
        let mut failure = None;
        items.sort_by(|a, b| {
            a.lo.try_cmp(&b.lo).unwrap_or_else(|e| {
                failure.get_or_insert(e);
                Ordering::Equal
            })
        });
        if let Some(e) = failure {
            return Err(e);
        }
        let mut merged: Vec<OpenInterval> = Vec::with_capacity(items.len());
        for iv in items {
            if let Some(last) = merged.last_mut() {
                if iv.lo.try_cmp(&last.hi)? == Ordering::Less {
                    if iv.hi.try_cmp(&last.hi)? == Ordering::Greater {
                        last.hi = iv.hi;
                    }
                    continue;
                }
            }
            merged.push(iv);
        }
        Ok(IntervalSet {
            basis: basis.clone(),
            intervals: merged,
        })
    }

    pub fn basis(&self) -> &Arc<GeneratorBasis> {
        &self.basis
    }

    pub fn intervals(&self) -> &[OpenInterval] {
        &self.intervals
    }

    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn measure(&self) -> Point {
        let mut total = Point::zero(&self.basis);
        for iv in &self.intervals {
            total = &total + &iv.length();
        }
        total
    }

    pub fn contains(&self, x: &Point) -> Result<bool> {
        // First interval whose upper end exceeds x.
        let (mut lo, mut hi) = (0usize, self.intervals.len());
        while lo < hi {
            let mid = (lo + hi) / 2;
            if self.intervals[mid].hi.try_cmp(x)? == Ordering::Greater {
                hi = mid;
            } else {
                lo = mid + 1;
            }
        }
        match self.intervals.get(lo) {
            Some(iv) => Ok(iv.lo.try_cmp(x)? == Ordering::Less),
            None => Ok(false),
        }
    }

    pub fn translate(&self, y: &Point) -> Self {
        let intervals = self
            .intervals
            .iter()
            .map(|iv| OpenInterval {
                lo: &iv.lo + y,
                hi: &iv.hi + y,
            })
            .collect();
        IntervalSet {
            basis: self.basis.clone(),
            intervals,
        }
    }

    /// Image under `x -> c x` for a nonzero rational `c`.
    pub fn scale(&self, c: &Rational) -> Result<Self> {
        if num_traits::Zero::is_zero(c) {
            return Err(Error::InvalidParameter(
                "scale factor must be nonzero".into(),
            ));
        }
        let mut intervals: Vec<OpenInterval> = self
            .intervals
            .iter()
            .map(|iv| {
                let (a, b) = (iv.lo.scale(c), iv.hi.scale(c));
                if num_traits::Signed::is_negative(c) {
                    OpenInterval { lo: b, hi: a }
                } else {
                    OpenInterval { lo: a, hi: b }
                }
            })
            .collect();
        if num_traits::Signed::is_negative(c) {
            intervals.reverse();
        }
        Ok(IntervalSet {
            basis: self.basis.clone(),
            intervals,
        })
    }

    pub fn union(&self, other: &IntervalSet) -> Result<Self> {
        let raw = self
            .intervals
            .iter()
            .chain(&other.intervals)
            .map(|iv| (iv.lo.clone(), iv.hi.clone()))
            .collect();
        Self::canonicalize(&self.basis, raw)
    }

    pub fn intersect(&self, other: &IntervalSet) -> Result<Self> {
        let mut out = Vec::new();
        let (mut i, mut j) = (0, 0);
        while i < self.intervals.len() && j < other.intervals.len() {
            let a = &self.intervals[i];
            let b = &other.intervals[j];
            let lo = if a.lo.try_cmp(&b.lo)? == Ordering::Less {
                &b.lo
            } else {
                &a.lo
            };
            let a_first = a.hi.try_cmp(&b.hi)? == Ordering::Less;
            let hi = if a_first { &a.hi } else { &b.hi };
            if lo.try_cmp(hi)? == Ordering::Less {
                out.push(OpenInterval {
                    lo: lo.clone(),
                    hi: hi.clone(),
                });
            }
            if a_first {
                i += 1;
            } else {
                j += 1;
            }
        }
        Ok(IntervalSet {
            basis: self.basis.clone(),
            intervals: out,
        })
    }

    pub fn clip(&self, lo: &Point, hi: &Point) -> Result<Self> {
        self.intersect(&IntervalSet::interval(lo.clone(), hi.clone())?)
    }

    /// Image on the torus, represented inside `[0, 1)`. Overlapping wraps merge.
    pub fn to_torus(&self) -> Result<Self> {
        let zero = Point::zero(&self.basis);
        let one = Point::rational(&self.basis, Rational::one());
        let mut raw = Vec::new();
        for iv in &self.intervals {
            // length exactly 1 still misses the point lo mod 1
            if iv.length().try_cmp(&one)? == Ordering::Greater {
                return Self::canonicalize(&self.basis, vec![(zero, one)]);
            }
            let k = iv.lo.floor()?;
            let shift = -Rational::from_integer(k);
            let lo = iv.lo.add_rational(&shift);
            let hi = iv.hi.add_rational(&shift);
            if hi.try_cmp(&one)? == Ordering::Greater {
                raw.push((lo, one.clone()));
                let wrapped = hi.add_rational(&-int(1));
                if wrapped.try_cmp(&zero)? == Ordering::Greater {
                    raw.push((zero.clone(), wrapped));
                }
            } else {
                raw.push((lo, hi));
            }
        }
        Self::canonicalize(&self.basis, raw)
    }

    /// All endpoints, ascending.
    pub fn endpoints(&self) -> Vec<Point> {
        self.intervals
            .iter()
            .flat_map(|iv| [iv.lo.clone(), iv.hi.clone()])
            .collect()
    }
}
