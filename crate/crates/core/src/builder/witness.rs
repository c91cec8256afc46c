use std::cmp::Ordering;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::eg::{build_eg, trim_pair, EGPair, EGPairRepr, EgOptions};
use crate::error::{Error, Result};
use crate::exactreal::{
    format_decimal, format_rational, int, max_abs, min_gap, parse_rational, simplest_between,
    GeneratorBasis, Point, Rational,
};
use crate::measure::MeasureSequence;

#[derive(Clone, Debug)]
pub struct WitnessOptions {
    pub eg: EgOptions,
    /// Trim every factor to at most `(#E, #G)` points.
    pub trim: Option<(usize, usize)>,
    /// Largest number of factors allowed.
    pub m_cap: u64,
    /// `max |E ∪ G|` of the first factor must stay below this, so that the
    /// whole sumset fits inside `(-1/2, 1/2)` on the torus.
    pub first_extent: Rational,
    /// First sequence index considered (1-based).
    pub start_index: usize,
}

impl Default for WitnessOptions {
    fn default() -> Self {
        WitnessOptions {
            eg: EgOptions::default(),
            trim: None,
            m_cap: 64,
            first_extent: Rational::new(1.into(), 4.into()),
            start_index: 1,
        }
    }
}

/// Smallest integer `m > 12 Delta / (1 - delta)`.
pub fn factor_count(big_delta: &Rational, delta: &Rational) -> Result<u64> {
    check_witness_params(big_delta, delta)?;
    let bound = int(12) * big_delta / (Rational::one() - delta);
    let m: BigInt = bound.floor().to_integer() + 1;
    m.try_into()
        .map_err(|_| Error::InvalidParameter("factor count overflows".into()))
}

/// `eps = (1 - delta) / 3`.
pub fn epsilon_for(delta: &Rational) -> Rational {
    (Rational::one() - delta) / int(3)
}

fn check_witness_params(big_delta: &Rational, delta: &Rational) -> Result<()> {
    if !big_delta.is_positive() {
        return Err(Error::InvalidParameter(format!(
            "Delta = {} must be positive",
            format_rational(big_delta)
        )));
    }
    if !delta.is_positive() || *delta >= Rational::one() {
        return Err(Error::InvalidParameter(format!(
            "delta = {} must lie in the open range (0, 1)",
            format_rational(delta)
        )));
    }
    Ok(())
}

#[derive(Clone, Debug, Serialize)]
pub struct Candidate {
    pub index: usize,
    pub accepted: bool,
    pub max_abs: String,
    pub required_below: String,
}

#[derive(Clone, Debug)]
pub struct Selection {
    pub indices: Vec<usize>,
    pub factors: Vec<EGPair>,
    pub candidates: Vec<Candidate>,
}

/// Greedy choice of `n_1 < n_2 < ...`: a candidate is accepted when
/// `max |E ∪ G|` of its pair is below `d(E ∪ G) / 4` of the previously
/// accepted pair.
pub fn select_subsequence(
    seq: &MeasureSequence,
    eps: &Rational,
    m: usize,
    opts: &WitnessOptions,
) -> Result<Selection> {
    if seq.is_empty() {
        return Err(Error::InvalidParameter("measure sequence is empty".into()));
    }
    if m == 0 {
        return Err(Error::InvalidParameter(
            "at least one factor is required".into(),
        ));
    }
    let basis = seq.measures()[0].basis().clone();
    let quarter = Rational::new(1.into(), 4.into());
    let mut required = Point::rational(&basis, opts.first_extent.clone());
    let mut indices = Vec::new();
    let mut factors = Vec::new();
    let mut candidates = Vec::new();
    let mut n = opts.start_index.max(1);
    while factors.len() < m {
        let Some(mu) = seq.get(n) else {
            return Err(Error::SequenceExhausted {
                last_index: seq.len(),
                required: required.display_decimal(12),
            });
        };
        // Some x + x_k lies in G for each x in E, so max |E ∪ G| >= x_1 / 2.
        let floor_extent = mu.min_atom().scale(&Rational::new(1.into(), 2.into()));
        if !floor_extent.lt(&required)? {
            candidates.push(Candidate {
                index: n,
                accepted: false,
                max_abs: format!(">= {}", floor_extent.display_decimal(12)),
                required_below: required.display_decimal(12),
            });
            n += 1;
            continue;
        }
        let build = build_eg(mu, n, eps, &opts.eg)?;
        let pair = match opts.trim {
            Some((me, mg)) => trim_pair(&build.pair, mu, me, mg)?,
            None => build.pair,
        };
        let union = pair.union()?;
        let extent = max_abs(&union)?;
        let accepted = extent.try_cmp(&required)? == Ordering::Less;
        candidates.push(Candidate {
            index: n,
            accepted,
            max_abs: extent.display_decimal(12),
            required_below: required.display_decimal(12),
        });
        if accepted {
            required = min_gap(&union)?.scale(&quarter);
            indices.push(n);
            factors.push(pair);
        }
        n += 1;
    }
    Ok(Selection {
        indices,
        factors,
        candidates,
    })
}

/// `#G = prod #G_k`, `#F_k = #E_k prod_{i != k} #G_i`, `#E = sum #F_k`.
pub fn sumset_counts(factors: &[EGPair]) -> (BigInt, Vec<BigInt>, BigInt) {
    let g: BigInt = factors.iter().map(|f| BigInt::from(f.g.len())).product();
    let f: Vec<BigInt> = (0..factors.len())
        .map(|k| {
            factors
                .iter()
                .enumerate()
                .map(|(i, p)| BigInt::from(if i == k { p.e.len() } else { p.g.len() }))
                .product()
        })
        .collect();
    let e = f.iter().sum();
    (g, f, e)
}

/// `min_k (d(A_k) - 2 sum_{i>k} max |A_i|) / 2` with `A_k = E_k ∪ G_k`.
pub fn thickening_bound(factors: &[EGPair]) -> Result<Point> {
    let unions = factors
        .iter()
        .map(EGPair::union)
        .collect::<Result<Vec<_>>>()?;
    let maxes = unions
        .iter()
        .map(|u| max_abs(u))
        .collect::<Result<Vec<_>>>()?;
    let half = Rational::new(1.into(), 2.into());
    let mut best: Option<Point> = None;
    for k in 0..unions.len() {
        let mut v = min_gap(&unions[k])?;
        for m in &maxes[k + 1..] {
            v = &v - &m.scale(&int(2));
        }
        let v = v.scale(&half);
        best = Some(match best {
            Some(b) if b.try_cmp(&v)? != Ordering::Greater => b,
            _ => v,
        });
    }
    best.ok_or(Error::EmptySet)
}

/// A short positive rational not above `bound`.
fn rational_below(bound: &Point) -> Result<Rational> {
    if bound.sign()? != Ordering::Greater {
        return Err(Error::Inconsistent(format!(
            "sumset gap bound {} is not positive; the separation is too weak",
            bound.display_decimal(12)
        )));
    }
    if let Some(q) = bound.as_rational() {
        return Ok(simplest_between(&(q * Rational::new(63.into(), 64.into())), q).min(q.clone()));
    }
    let cap = bound.basis().precision_cap();
    let mut bits = 64;
    loop {
        let e = bound.enclose(bits);
        if e.lo.is_positive() && e.width() * int(64) < e.lo {
            return Ok(simplest_between(
                &(&e.lo * Rational::new(63.into(), 64.into())),
                &e.lo,
            ));
        }
        if bits >= cap {
            return Err(Error::PrecisionExhausted {
                value: bound.to_string(),
                bits: cap,
            });
        }
        bits = (bits * 2).min(cap);
    }
}

/// `sum_k max |A_k|`: every point of `G ∪ E` has absolute value at most this.
pub fn total_extent(factors: &[EGPair]) -> Result<Point> {
    let basis = factors.first().ok_or(Error::EmptySet)?.e[0].basis().clone();
    let mut acc = Point::zero(&basis);
    for f in factors {
        acc = &acc + &max_abs(&f.union()?)?;
    }
    Ok(acc)
}

/// Factored sumset witness: `G = G_1 + ... + G_m`, `F_k`, `E = ∪ F_k`,
/// thickened by `(-eps', eps')` into `A` and `B`.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepOutWitness {
    pub basis: Arc<GeneratorBasis>,
    pub big_delta: Rational,
    pub delta: Rational,
    pub epsilon: Rational,
    pub indices: Vec<usize>,
    pub factors: Vec<EGPair>,
    pub thickening: Rational,
    pub g_count: BigInt,
    pub f_counts: Vec<BigInt>,
    pub e_count: BigInt,
}

impl SweepOutWitness {
    pub fn m(&self) -> usize {
        self.factors.len()
    }
}

#[derive(Clone, Debug)]
pub struct WitnessBuild {
    pub witness: SweepOutWitness,
    pub selection: Vec<Candidate>,
}

pub fn build_witness(
    seq: &MeasureSequence,
    big_delta: &Rational,
    delta: &Rational,
    opts: &WitnessOptions,
) -> Result<WitnessBuild> {
    let m = factor_count(big_delta, delta)?;
    if m > opts.m_cap {
        return Err(Error::FactorCap { m, cap: opts.m_cap });
    }
    if seq.is_empty() {
        return Err(Error::InvalidParameter("measure sequence is empty".into()));
    }
    let eps = epsilon_for(delta);
    let sel = select_subsequence(seq, &eps, m as usize, opts)?;
    let bound = thickening_bound(&sel.factors)?;
    let thickening = rational_below(&bound)?;
    let extent = total_extent(&sel.factors)?.add_rational(&thickening);
    if extent.try_cmp(&Point::rational(
        extent.basis(),
        Rational::new(1.into(), 2.into()),
    ))? != Ordering::Less
    {
        return Err(Error::Inconsistent(format!(
            "sumset extent {} does not fit inside (-1/2, 1/2)",
            extent.display_decimal(12)
        )));
    }
    let (g_count, f_counts, e_count) = sumset_counts(&sel.factors);
    if Rational::from_integer(e_count.clone())
        <= big_delta * Rational::from_integer(g_count.clone())
    {
        return Err(Error::Inconsistent(format!(
            "#E = {e_count} is not above Delta #G with #G = {g_count}"
        )));
    }
    let witness = SweepOutWitness {
        basis: seq.measures()[0].basis().clone(),
        big_delta: big_delta.clone(),
        delta: delta.clone(),
        epsilon: eps,
        indices: sel.indices,
        factors: sel.factors,
        thickening,
        g_count,
        f_counts,
        e_count,
    };
    Ok(WitnessBuild {
        witness,
        selection: sel.candidates,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountsRepr {
    pub g: String,
    pub f: Vec<String>,
    pub e: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessRepr {
    pub basis: Vec<String>,
    pub precision_cap: u32,
    pub big_delta: String,
    pub delta: String,
    pub epsilon: String,
    pub m: usize,
    pub indices: Vec<usize>,
    pub thickening: String,
    pub thickening_decimal: String,
    pub counts: CountsRepr,
    pub factors: Vec<EGPairRepr>,
}

impl SweepOutWitness {
    pub fn to_repr(&self) -> WitnessRepr {
        WitnessRepr {
            basis: self.basis.labels(),
            precision_cap: self.basis.precision_cap(),
            big_delta: format_rational(&self.big_delta),
            delta: format_rational(&self.delta),
            epsilon: format_rational(&self.epsilon),
            m: self.m(),
            indices: self.indices.clone(),
            thickening: format_rational(&self.thickening),
            thickening_decimal: format_decimal(&self.thickening, 30, false),
            counts: CountsRepr {
                g: self.g_count.to_string(),
                f: self.f_counts.iter().map(|c| c.to_string()).collect(),
                e: self.e_count.to_string(),
            },
            factors: self.factors.iter().map(EGPair::to_repr).collect(),
        }
    }

    /// Reads a witness over `basis`; the generator labels must match.
    pub fn from_repr(basis: &Arc<GeneratorBasis>, r: &WitnessRepr) -> Result<Self> {
        if r.basis != basis.labels() {
            return Err(Error::BasisMismatch);
        }
        let parse_int = |s: &String| {
            s.parse::<BigInt>()
                .map_err(|_| Error::ParseRational(s.clone()))
        };
        let factors = r
            .factors
            .iter()
            .map(|f| EGPair::from_repr(basis, f))
            .collect::<Result<Vec<_>>>()?;
        if factors.len() != r.m || r.indices.len() != r.m {
            return Err(Error::Inconsistent(format!(
                "witness declares m = {} with {} factors and {} indices",
                r.m,
                factors.len(),
                r.indices.len()
            )));
        }
        if factors.iter().any(|f| f.e.is_empty() || f.g.is_empty()) {
            return Err(Error::EmptySet);
        }
        let thickening = parse_rational(&r.thickening)?;
        if !thickening.is_positive() || thickening.is_zero() {
            return Err(Error::InvalidParameter(
                "thickening must be positive".into(),
            ));
        }
        Ok(SweepOutWitness {
            basis: basis.clone(),
            big_delta: parse_rational(&r.big_delta)?,
            delta: parse_rational(&r.delta)?,
            epsilon: parse_rational(&r.epsilon)?,
            indices: r.indices.clone(),
            factors,
            thickening,
            g_count: parse_int(&r.counts.g)?,
            f_counts: r.counts.f.iter().map(parse_int).collect::<Result<_>>()?,
            e_count: parse_int(&r.counts.e)?,
        })
    }
}

/// `G_1 + ... + G_m + (-r, r)` with membership by nearest-element decoding,
/// exact as long as `r` does not exceed the sumset gap bound.
#[derive(Clone, Debug)]
pub struct ThickenedSumset {
    parts: Vec<Vec<Point>>,
    radius: Point,
}

impl ThickenedSumset {
    /// `A = G + (-eps', eps')`.
    pub fn of_g(w: &SweepOutWitness) -> Self {
        ThickenedSumset {
            parts: w.factors.iter().map(|f| f.g.clone()).collect(),
            radius: Point::rational(&w.basis, w.thickening.clone()),
        }
    }

    /// Membership of `y mod 1`; the set lies inside `(-1/2, 1/2)`.
    pub fn contains_torus(&self, y: &Point) -> Result<bool> {
        let mut r = y.frac()?;
        let half = Point::rational(r.basis(), Rational::new(1.into(), 2.into()));
        if r.try_cmp(&half)? != Ordering::Less {
            r = r.add_rational(&-Rational::one());
        }
        for part in &self.parts {
            let g = nearest(part, &r)?;
            r = &r - g;
        }
        r.abs()?.lt(&self.radius)
    }
}

/// Element of a sorted nonempty slice nearest to `x`.
fn nearest<'a>(sorted: &'a [Point], x: &Point) -> Result<&'a Point> {
    let (mut lo, mut hi) = (0usize, sorted.len());
    while lo < hi {
        let mid = (lo + hi) / 2;
        if sorted[mid].try_cmp(x)? == Ordering::Less {
            lo = mid + 1;
        } else {
            hi = mid;
        }
    }
    if lo == 0 {
        return sorted.first().ok_or(Error::EmptySet);
    }
    if lo == sorted.len() {
        return Ok(&sorted[lo - 1]);
    }
    let below = x - &sorted[lo - 1];
    let above = &sorted[lo] - x;
    Ok(if below.try_cmp(&above)? == Ordering::Greater {
        &sorted[lo]
    } else {
        &sorted[lo - 1]
    })
}
