use std::cmp::Ordering;
use std::collections::HashSet;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive};
use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::eg::certify_eg;
use super::sums::{separation_check, MaxReading};
use super::witness::{
    factor_count, sumset_counts, thickening_bound, total_extent, SweepOutWitness, ThickenedSumset,
};
use crate::error::{Error, Result};
use crate::exactreal::{format_rational, int, sort_dedup, IntervalSet, Point, Rational};
use crate::measure::{convolve_indicator, DiscreteMeasure, MeasureSequence, PointSet};
use crate::par;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum VerifyMode {
    FactorExact,
    Explicit,
    Sampled,
}

impl std::str::FromStr for VerifyMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "factor-exact" => Ok(VerifyMode::FactorExact),
            "explicit" | "explicit-brute-force" => Ok(VerifyMode::Explicit),
            "sampled" => Ok(VerifyMode::Sampled),
            _ => Err(Error::InvalidParameter(format!(
                "unknown verification mode `{s}`"
            ))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Exact,
    Sampled,
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub claim: String,
    pub computed: String,
    pub pass: bool,
    pub method: Method,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

impl Check {
    fn exact(
        name: impl Into<String>,
        claim: impl Into<String>,
        computed: impl Into<String>,
        pass: bool,
    ) -> Self {
        Check {
            name: name.into(),
            claim: claim.into(),
            computed: computed.into(),
            pass,
            method: Method::Exact,
            witness: None,
        }
    }

    fn with_witness(mut self, w: Option<String>) -> Self {
        self.witness = w;
        self
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub mode: VerifyMode,
    pub passed: bool,
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sample_count: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl VerificationReport {
    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }
}

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    /// Largest `#G + #E` enumerated in explicit mode.
    pub explicit_cap: u128,
    pub samples: usize,
    pub seed: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            explicit_cap: 100_000,
            samples: 1000,
            seed: 0,
        }
    }
}

fn measures_of<'a>(
    w: &SweepOutWitness,
    seq: &'a MeasureSequence,
) -> Result<Vec<&'a DiscreteMeasure>> {
    w.indices
        .iter()
        .map(|&n| {
            seq.get(n).ok_or_else(|| {
                Error::InvalidParameter(format!("witness index {n} is outside the sequence"))
            })
        })
        .collect()
}

pub fn verify_witness(
    w: &SweepOutWitness,
    seq: &MeasureSequence,
    mode: VerifyMode,
    opts: &VerifyOptions,
) -> Result<VerificationReport> {
    let mus = measures_of(w, seq)?;
    let mut checks = structural_checks(w, &mus)?;
    let mut sample_count = None;
    let mut seed = None;
    match mode {
        VerifyMode::FactorExact => {}
        VerifyMode::Explicit => checks.extend(explicit_checks(w, &mus, opts.explicit_cap)?),
        VerifyMode::Sampled => {
            checks.push(sampled_check(w, &mus, opts.samples, opts.seed)?);
            sample_count = Some(opts.samples);
            seed = Some(opts.seed);
        }
    }
    let passed = checks.iter().all(|c| c.pass);
    Ok(VerificationReport {
        mode,
        passed,
        checks,
        sample_count,
        seed,
    })
}

/// Checks that reduce to factor level; run in every mode.
fn structural_checks(w: &SweepOutWitness, mus: &[&DiscreteMeasure]) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    let bound = int(12) * &w.big_delta / (Rational::one() - &w.delta);
    let m_needed = factor_count(&w.big_delta, &w.delta)?;
    checks.push(Check::exact(
        "factor_count",
        format!("m > 12 Delta / (1 - delta) = {}", format_rational(&bound)),
        format!("m = {}", w.m()),
        Rational::from_integer(BigInt::from(w.m())) > bound && w.m() as u64 >= m_needed,
    ));
    let eps_expected = (Rational::one() - &w.delta) / int(3);
    let eps_ok = w.epsilon == eps_expected && w.factors.iter().all(|f| f.epsilon == w.epsilon);
    checks.push(Check::exact(
        "epsilon",
        format!(
            "eps = (1 - delta) / 3 = {} in every factor",
            format_rational(&eps_expected)
        ),
        format!("eps = {}", format_rational(&w.epsilon)),
        eps_ok,
    ));
    let increasing = w.indices.windows(2).all(|p| p[0] < p[1]);
    let labelled = w
        .factors
        .iter()
        .zip(&w.indices)
        .all(|(f, &n)| f.mu_index == n);
    checks.push(Check::exact(
        "indices",
        "n_1 < n_2 < ... and factor k belongs to mu_{n_k}",
        format!("{:?}", w.indices),
        increasing && labelled,
    ));

    for (k, (pair, mu)) in w.factors.iter().zip(mus).enumerate() {
        let cert = certify_eg(pair, mu)?;
        checks.push(
            Check::exact(
                format!("pair[{k}]"),
                format!(
                    "E ∩ G = ∅, #E > eps #G / 4, S 1_G > {} on E",
                    cert.threshold
                ),
                format!(
                    "#E = {}, #G = {}, min S 1_G = {}",
                    cert.e_count,
                    cert.g_count,
                    cert.min_convolution.clone().unwrap_or_else(|| "-".into())
                ),
                cert.holds(),
            )
            .with_witness(cert.failure.clone()),
        );
    }

    // S_{mu_{n_k}} 1_{G_k}(x) > delta for every k and x in E_k
    let work: Vec<(usize, &Point)> = w
        .factors
        .iter()
        .enumerate()
        .flat_map(|(k, f)| f.e.iter().map(move |x| (k, x)))
        .collect();
    let gsets = w
        .factors
        .iter()
        .map(|f| PointSet::new(f.g.clone()))
        .collect::<Result<Vec<_>>>()?;
    let values = par::try_map(&work, |(k, x)| convolve_indicator(mus[*k], &gsets[*k], x))?;
    for k in 0..w.m() {
        let mut min: Option<Rational> = None;
        let mut fail = None;
        for ((kk, x), v) in work.iter().zip(&values) {
            if *kk != k {
                continue;
            }
            if min.as_ref().is_none_or(|m| v < m) {
                min = Some(v.clone());
            }
            if *v <= w.delta && fail.is_none() {
                fail = Some(format!("x = {x} gives {}", format_rational(v)));
            }
        }
        checks.push(
            Check::exact(
                format!("factor_sup[{k}]"),
                format!(
                    "S_mu_{} 1_G_{k}(x) > delta = {} for all x in E_{k}",
                    w.indices[k],
                    format_rational(&w.delta)
                ),
                format!(
                    "min = {}",
                    min.as_ref()
                        .map(format_rational)
                        .unwrap_or_else(|| "-".into())
                ),
                fail.is_none() && min.is_some(),
            )
            .with_witness(fail),
        );
    }

    let unions = w
        .factors
        .iter()
        .map(|f| f.union())
        .collect::<Result<Vec<_>>>()?;
    let sep = separation_check(&unions, MaxReading::Absolute)?;
    checks.push(
        Check::exact(
            "separation",
            "max |A_{k+1}| <= d(A_k) / 4 with A_k = E_k ∪ G_k",
            sep.steps
                .iter()
                .map(|s| format!("{} <= {}", s.max_next.hi, s.quarter_gap.lo))
                .collect::<Vec<_>>()
                .join("; "),
            sep.holds,
        )
        .with_witness(sep.failure.map(|k| format!("pair ({k}, {})", k + 1))),
    );

    let (g, f, e) = sumset_counts(&w.factors);
    checks.push(Check::exact(
        "counts",
        format!(
            "#G = {}, #F_k = {:?}, #E = {}",
            w.g_count,
            w.f_counts.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
            w.e_count
        ),
        format!(
            "#G = {g}, #F_k = {:?}, #E = {e}",
            f.iter().map(|c| c.to_string()).collect::<Vec<_>>()
        ),
        g == w.g_count && f == w.f_counts && e == w.e_count,
    ));
    let lhs = Rational::from_integer(e.clone());
    let rhs = &w.big_delta * Rational::from_integer(g.clone());
    checks.push(Check::exact(
        "count_inequality",
        format!("#E > Delta #G = {}", format_rational(&rhs)),
        format!("#E = {e}"),
        lhs > rhs,
    ));

    let bound = thickening_bound(&w.factors)?;
    let radius = Point::rational(&w.basis, w.thickening.clone());
    checks.push(Check::exact(
        "thickening",
        format!("0 < eps' <= {}", bound.display_decimal(30)),
        format!("eps' = {}", format_rational(&w.thickening)),
        w.thickening.is_positive() && radius.try_cmp(&bound)? != Ordering::Greater,
    ));
    let extent = total_extent(&w.factors)?.add_rational(&w.thickening);
    checks.push(Check::exact(
        "torus_fit",
        "sum_k max |A_k| + eps' < 1/2",
        extent.display_decimal(12),
        extent.lt(&Point::rational(
            &w.basis,
            Rational::new(1.into(), 2.into()),
        ))?,
    ));
    let two_r = int(2) * &w.thickening;
    let b_measure = &two_r * Rational::from_integer(e);
    let a_measure = &two_r * Rational::from_integer(g);
    checks.push(Check::exact(
        "measure_inequality",
        format!(
            "|B| = 2 eps' #E > Delta |A| = {}",
            format_rational(&(&w.big_delta * &a_measure))
        ),
        format!("|B| = {}", format_rational(&b_measure)),
        b_measure > &w.big_delta * &a_measure,
    ));
    Ok(checks)
}

/// All sums `s_1 + ... + s_m` with `s_i` from `parts[i]`.
fn sumset(parts: &[&Vec<Point>]) -> Result<Vec<Point>> {
    let basis = parts[0][0].basis().clone();
    let mut acc = vec![Point::zero(&basis)];
    for part in parts {
        let mut next = Vec::with_capacity(acc.len() * part.len());
        for a in &acc {
            for p in part.iter() {
                next.push(a + p);
            }
        }
        acc = next;
    }
    Ok(acc)
}

fn explicit_checks(w: &SweepOutWitness, mus: &[&DiscreteMeasure], cap: u128) -> Result<Vec<Check>> {
    let size = w.g_count.clone() + &w.e_count;
    let size_u = size.to_u128().unwrap_or(u128::MAX);
    if size_u > cap {
        return Err(Error::BruteForceCap { size: size_u, cap });
    }
    let mut checks = Vec::new();
    let g_parts: Vec<&Vec<Point>> = w.factors.iter().map(|f| &f.g).collect();
    let g_all = sumset(&g_parts)?;
    let mut f_all = Vec::new();
    for k in 0..w.m() {
        let parts: Vec<&Vec<Point>> = w
            .factors
            .iter()
            .enumerate()
            .map(|(i, f)| if i == k { &f.e } else { &f.g })
            .collect();
        f_all.push(sumset(&parts)?);
    }
    let g_set: HashSet<&Point> = g_all.iter().collect();
    let mut e_set: HashSet<&Point> = HashSet::new();
    let mut collisions = 0usize;
    for fk in &f_all {
        for x in fk {
            if !e_set.insert(x) || g_set.contains(x) {
                collisions += 1;
            }
        }
    }
    let f_distinct: Vec<usize> = f_all
        .iter()
        .map(|fk| fk.iter().collect::<HashSet<_>>().len())
        .collect();
    let counts_ok = BigInt::from(g_set.len()) == w.g_count
        && BigInt::from(e_set.len()) == w.e_count
        && collisions == 0
        && f_distinct
            .iter()
            .zip(&w.f_counts)
            .all(|(a, b)| BigInt::from(*a) == *b);
    checks.push(Check::exact(
        "explicit_counts",
        format!(
            "#G = {}, #E = {}, F_k pairwise disjoint and disjoint from G",
            w.g_count, w.e_count
        ),
        format!(
            "#G = {}, #E = {}, #F_k = {:?}, collisions = {collisions}",
            g_set.len(),
            e_set.len(),
            f_distinct
        ),
        counts_ok,
    ));

    let radius = Point::rational(&w.basis, w.thickening.clone());
    let thicken = |pts: &[Point]| -> Result<IntervalSet> {
        IntervalSet::canonicalize(
            &w.basis,
            pts.iter().map(|p| (p - &radius, p + &radius)).collect(),
        )
    };
    let mut e_pts: Vec<Point> = f_all.into_iter().flatten().collect();
    sort_dedup(&mut e_pts)?;
    let a_set = thicken(&g_all)?;
    let b_set = thicken(&e_pts)?;
    let disjoint = a_set.len() == g_set.len()
        && b_set.len() == e_pts.len()
        && a_set.intersect(&b_set)?.is_empty();
    checks.push(Check::exact(
        "explicit_disjoint",
        "intervals of A and of B pairwise disjoint, A ∩ B = ∅",
        format!(
            "A: {} components, B: {} components",
            a_set.len(),
            b_set.len()
        ),
        disjoint,
    ));
    let (am, bm) = (a_set.measure(), b_set.measure());
    let target = am.scale(&w.big_delta);
    let measure_ok = bm.try_cmp(&target)? == Ordering::Greater;
    checks.push(Check::exact(
        "explicit_measure",
        format!("|B| > Delta |A| = {}", target.display_decimal(30)),
        format!(
            "|A| = {}, |B| = {}",
            am.display_decimal(30),
            bm.display_decimal(30)
        ),
        measure_ok,
    ));

    let results = par::try_map(b_set.intervals(), |iv| {
        component_sup(w, mus, &a_set, &iv.lo, &iv.hi)
    })?;
    let mut min: Option<Rational> = None;
    let mut fail = None;
    for (v, x) in &results {
        if min.as_ref().is_none_or(|m| v < m) {
            min = Some(v.clone());
        }
        if *v <= w.delta && fail.is_none() {
            fail = Some(format!("x = {x} gives {}", format_rational(v)));
        }
    }
    let sup_ok = fail.is_none();
    checks.push(
        Check::exact(
            "explicit_sup",
            format!(
                "sup_k S_mu_(n_k) 1_A(x) > delta = {} on every component of B",
                format_rational(&w.delta)
            ),
            format!(
                "{} components, min over cells = {}",
                b_set.len(),
                min.as_ref()
                    .map(format_rational)
                    .unwrap_or_else(|| "-".into())
            ),
            sup_ok,
        )
        .with_witness(fail),
    );
    checks.push(Check::exact(
        "level_set",
        "|{x : sup_k S_mu_(n_k) 1_A(x) > delta}| >= |B| > Delta |A|",
        format!(
            "{}",
            if sup_ok && measure_ok {
                "B ⊂ level set"
            } else {
                "not established"
            }
        ),
        sup_ok && measure_ok,
    ));
    Ok(checks)
}

fn sup_value(
    w: &SweepOutWitness,
    mus: &[&DiscreteMeasure],
    a_set: &IntervalSet,
    x: &Point,
) -> Result<Rational> {
    let mut best = Rational::from_integer(0.into());
    for mu in mus {
        let v = convolve_indicator(mu, a_set, x)?;
        if v > best {
            best = v;
        }
    }
    let _ = w;
    Ok(best)
}

/// Minimum of `sup_k S_k 1_A` over the open interval `(lo, hi)`, with a point
/// attaining it. The function is constant between the points where some
/// `x + x_j` crosses an endpoint of `A`, so cells and their ends suffice.
fn component_sup(
    w: &SweepOutWitness,
    mus: &[&DiscreteMeasure],
    a_set: &IntervalSet,
    lo: &Point,
    hi: &Point,
) -> Result<(Rational, Point)> {
    let ends = a_set.endpoints();
    let mut cuts = Vec::new();
    for mu in mus {
        for t in mu.atoms() {
            for z in [-1i64, 0, 1] {
                let shift = t.add_rational(&-int(z));
                let (a, b) = (lo + &shift, hi + &shift);
                let start = partition(&ends, &a)?;
                for e in &ends[start..] {
                    if e.try_cmp(&b)? != Ordering::Less {
                        break;
                    }
                    if a.lt(e)? {
                        cuts.push(e - &shift);
                    }
                }
            }
        }
    }
    sort_dedup(&mut cuts)?;
    let half = Rational::new(1.into(), 2.into());
    let mut probes = Vec::with_capacity(2 * cuts.len() + 1);
    let mut prev = lo.clone();
    for c in &cuts {
        probes.push((&prev + c).scale(&half));
        probes.push(c.clone());
        prev = c.clone();
    }
    probes.push((&prev + hi).scale(&half));
    let mut best: Option<(Rational, Point)> = None;
    for x in probes {
        let v = sup_value(w, mus, a_set, &x)?;
        if best.as_ref().is_none_or(|(b, _)| v < *b) {
            best = Some((v, x));
        }
    }
    Ok(best.expect("at least one probe"))
}

/// First index with `ends[i] >= x`.
fn partition(ends: &[Point], x: &Point) -> Result<usize> {
    let (mut lo, mut hi) = (0usize, ends.len());
    while lo < hi {
        let mid = (lo + hi) / 2;
        if ends[mid].try_cmp(x)? == Ordering::Less {
            lo = mid + 1;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}

/// Random points of `B` with their sup value, drawn with a seeded generator.
pub(crate) fn sample_b(w: &SweepOutWitness, count: usize, seed: u64) -> Result<Vec<Point>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let weights: Vec<f64> = w
        .f_counts
        .iter()
        .map(|c| c.to_f64().unwrap_or(f64::MAX))
        .collect();
    let pick = WeightedIndex::new(&weights)
        .map_err(|e| Error::Inconsistent(format!("sampling weights: {e}")))?;
    let resolution: u64 = 1 << 32;
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let k = pick.sample(&mut rng);
        let mut x = Point::zero(&w.basis);
        for (i, f) in w.factors.iter().enumerate() {
            let part = if i == k { &f.e } else { &f.g };
            x = &x + &part[rng.random_range(0..part.len())];
        }
        // offset in (-eps', eps')
        let u = rng.random_range(1..2 * resolution);
        let s = &w.thickening
            * Rational::new(
                BigInt::from(u) - BigInt::from(resolution),
                BigInt::from(resolution),
            );
        out.push(x.add_rational(&s));
    }
    Ok(out)
}

/// `sup_k S_{mu_{n_k}} 1_A(x)` using the factored form of `A`.
pub(crate) fn factored_value(
    mu: &DiscreteMeasure,
    a: &ThickenedSumset,
    x: &Point,
) -> Result<Rational> {
    let mut v = Rational::from_integer(0.into());
    for (t, m) in mu.atoms().iter().zip(mu.masses()) {
        if a.contains_torus(&(x + t))? {
            v += m;
        }
    }
    Ok(v)
}

fn sampled_check(
    w: &SweepOutWitness,
    mus: &[&DiscreteMeasure],
    samples: usize,
    seed: u64,
) -> Result<Check> {
    let points = sample_b(w, samples, seed)?;
    let a = ThickenedSumset::of_g(w);
    let values = par::try_map(&points, |x| -> Result<Rational> {
        let mut best = Rational::from_integer(0.into());
        for mu in mus {
            let v = factored_value(mu, &a, x)?;
            if v > best {
                best = v;
            }
        }
        Ok(best)
    })?;
    let mut min: Option<Rational> = None;
    let mut fail = None;
    for (x, v) in points.iter().zip(&values) {
        if min.as_ref().is_none_or(|m| v < m) {
            min = Some(v.clone());
        }
        if *v <= w.delta && fail.is_none() {
            fail = Some(format!("x = {x} gives {}", format_rational(v)));
        }
    }
    Ok(Check {
        name: "sampled_sup".into(),
        claim: format!(
            "sup_k S_mu_(n_k) 1_A(x) > delta = {} at sampled x in B",
            format_rational(&w.delta)
        ),
        computed: format!(
            "{samples} samples, min = {}",
            min.as_ref()
                .map(format_rational)
                .unwrap_or_else(|| "-".into())
        ),
        pass: fail.is_none() && samples > 0,
        method: Method::Sampled,
        witness: fail,
    })
}
