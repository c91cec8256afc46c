use std::cmp::Ordering;
use std::collections::HashMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactreal::{max_abs, max_point, min_gap, CertifiedRepr, Point, Rational};

/// How `max A_{k+1}` is read for sets containing negative points.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MaxReading {
    /// `max |x|`.
    Absolute,
    /// Plain `max x`.
    Signed,
}

#[derive(Clone, Debug, Serialize)]
pub struct SeparationStep {
    /// 0-based index `k` of the pair `(A_k, A_{k+1})`.
    pub k: usize,
    pub max_next: CertifiedRepr,
    pub quarter_gap: CertifiedRepr,
    pub holds: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct SeparationReport {
    pub reading: MaxReading,
    pub holds: bool,
    pub steps: Vec<SeparationStep>,
    /// First failing `k`.
    pub failure: Option<usize>,
}

/// `max A_{k+1} <= d(A_k) / 4` for each consecutive pair.
pub fn separation_check(sets: &[Vec<Point>], reading: MaxReading) -> Result<SeparationReport> {
    if sets.iter().any(|s| s.is_empty()) {
        return Err(Error::EmptySet);
    }
    let quarter = Rational::new(1.into(), 4.into());
    let mut steps = Vec::new();
    let mut failure = None;
    for k in 0..sets.len().saturating_sub(1) {
        let gap = min_gap(&sets[k])?.scale(&quarter);
        let next = match reading {
            MaxReading::Absolute => max_abs(&sets[k + 1])?,
            MaxReading::Signed => max_point(&sets[k + 1])?,
        };
        let holds = next.try_cmp(&gap)? != Ordering::Greater;
        if !holds && failure.is_none() {
            failure = Some(k);
        }
        steps.push(SeparationStep {
            k,
            max_next: CertifiedRepr::from(&next),
            quarter_gap: CertifiedRepr::from(&gap),
            holds,
        });
    }
    Ok(SeparationReport {
        reading,
        holds: failure.is_none(),
        steps,
        failure,
    })
}

#[derive(Clone, Debug)]
pub struct UniqueSumReport {
    pub holds: bool,
    pub sums: u128,
    /// Two index tuples with equal sums.
    pub collision: Option<(Vec<usize>, Vec<usize>)>,
}

pub const DEFAULT_BRUTE_FORCE_CAP: u128 = 1_000_000;

/// Checks that all `prod #A_k` sums `a_1 + ... + a_n` are distinct.
pub fn unique_sum_check(sets: &[Vec<Point>], cap: u128) -> Result<UniqueSumReport> {
    let first = sets.iter().flatten().next().ok_or(Error::EmptySet)?;
    let size = sets
        .iter()
        .try_fold(1u128, |acc, s| acc.checked_mul(s.len() as u128))
        .unwrap_or(u128::MAX);
    if size > cap {
        return Err(Error::BruteForceCap { size, cap });
    }
    if size == 0 {
        return Err(Error::EmptySet);
    }
    let mut seen: HashMap<Point, Vec<usize>> = HashMap::with_capacity(size as usize);
    let mut idx = vec![0usize; sets.len()];
    let zero = Point::zero(first.basis());
    loop {
        let mut s = zero.clone();
        for (set, &i) in sets.iter().zip(&idx) {
            s = s.try_add(&set[i])?;
        }
        if let Some(prev) = seen.insert(s, idx.clone()) {
            return Ok(UniqueSumReport {
                holds: false,
                sums: size,
                collision: Some((prev, idx)),
            });
        }
        let mut k = sets.len();
        loop {
            if k == 0 {
                return Ok(UniqueSumReport {
                    holds: true,
                    sums: size,
                    collision: None,
                });
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < sets[k].len() {
                break;
            }
            idx[k] = 0;
        }
    }
}
