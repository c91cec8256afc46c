//! Discrete measures on the torus and the convolution operator on indicator
//! functions.

use std::cmp::Ordering;
use std::collections::HashSet;
use std::sync::Arc;

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactreal::{
    format_rational, int, sort_dedup, GeneratorBasis, IntervalSet, Point, Rational,
};

/// Anything with an exact membership test on the real line.
pub trait Indicator {
    fn contains_point(&self, x: &Point) -> Result<bool>;
}

impl Indicator for IntervalSet {
    fn contains_point(&self, x: &Point) -> Result<bool> {
        self.contains(x)
    }
}

/// Finite set of points with hashed exact membership.
#[derive(Clone, Debug)]
pub struct PointSet {
    points: Vec<Point>,
    index: HashSet<Point>,
}

impl PointSet {
    pub fn new(mut points: Vec<Point>) -> Result<Self> {
        sort_dedup(&mut points)?;
        let index = points.iter().cloned().collect();
        Ok(PointSet { points, index })
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn contains(&self, x: &Point) -> bool {
        self.index.contains(x)
    }
}

impl Indicator for PointSet {
    fn contains_point(&self, x: &Point) -> Result<bool> {
        Ok(self.index.contains(x))
    }
}

/// Membership of the torus point `y mod 1` in a set living in `(-1, 1)`.
pub fn torus_contains<S: Indicator + ?Sized>(set: &S, y: &Point) -> Result<bool> {
    let y0 = y.frac()?;
    if set.contains_point(&y0)? {
        return Ok(true);
    }
    set.contains_point(&y0.add_rational(&-int(1)))
}

/// `mu = sum_k m_k delta_{x_k}` with atoms in `(0, 1)` and positive masses.
#[derive(Clone, Debug, PartialEq)]
pub struct DiscreteMeasure {
    basis: Arc<GeneratorBasis>,
    atoms: Vec<Point>,
    masses: Vec<Rational>,
    total: Rational,
}

impl DiscreteMeasure {
    /// Sorts the atoms; repeated atoms have their masses added.
    pub fn new(atoms: Vec<Point>, masses: Vec<Rational>) -> Result<Self> {
        if atoms.is_empty() {
            return Err(Error::InvalidMeasure(
                "a measure needs at least one atom".into(),
            ));
        }
        if atoms.len() != masses.len() {
            return Err(Error::InvalidMeasure(format!(
                "{} atoms but {} masses",
                atoms.len(),
                masses.len()
            )));
        }
        let basis = atoms[0].basis().clone();
        let zero = Point::zero(&basis);
        let one = Point::rational(&basis, Rational::one());
        let mut pairs = Vec::with_capacity(atoms.len());
        for (x, m) in atoms.into_iter().zip(masses) {
            if !m.is_positive() {
                return Err(Error::InvalidMeasure(format!(
                    "mass {} is not positive",
                    format_rational(&m)
                )));
            }
            if x.try_cmp(&zero)? != Ordering::Greater || x.try_cmp(&one)? != Ordering::Less {
                return Err(Error::InvalidMeasure(format!(
                    "atom {x} is not inside (0, 1)"
                )));
            }
            pairs.push((x, m));
        }
        let mut failure = None;
        pairs.sort_by(|a, b| {
            a.0.try_cmp(&b.0).unwrap_or_else(|e| {
                failure.get_or_insert(e);
                Ordering::Equal
            })
        });
        if let Some(e) = failure {
            return Err(e);
        }
        let mut atoms: Vec<Point> = Vec::with_capacity(pairs.len());
        let mut masses: Vec<Rational> = Vec::with_capacity(pairs.len());
        for (x, m) in pairs {
            if atoms.last() == Some(&x) {
                *masses.last_mut().unwrap() += m;
            } else {
                atoms.push(x);
                masses.push(m);
            }
        }
        let total = masses.iter().fold(Rational::zero(), |acc, m| acc + m);
        Ok(DiscreteMeasure {
            basis,
            atoms,
            masses,
            total,
        })
    }

    pub fn dirac(x: Point) -> Result<Self> {
        Self::new(vec![x], vec![Rational::one()])
    }

    pub fn basis(&self) -> &Arc<GeneratorBasis> {
        &self.basis
    }

    pub fn atoms(&self) -> &[Point] {
        &self.atoms
    }

    pub fn masses(&self) -> &[Rational] {
        &self.masses
    }

    pub fn total_mass(&self) -> &Rational {
        &self.total
    }

    /// Largest atom `x_l`.
    pub fn max_atom(&self) -> &Point {
        self.atoms.last().unwrap()
    }

    /// Smallest atom `x_1`.
    pub fn min_atom(&self) -> &Point {
        &self.atoms[0]
    }

    /// `mu((-delta, delta))` on the torus.
    pub fn mass_near_zero(&self, delta: &Rational) -> Result<Rational> {
        let window = IntervalSet::interval(
            Point::rational(&self.basis, -delta.clone()),
            Point::rational(&self.basis, delta.clone()),
        )?;
        let mut total = Rational::zero();
        for (x, m) in self.atoms.iter().zip(&self.masses) {
            if torus_contains(&window, x)? {
                total += m;
            }
        }
        Ok(total)
    }
}

/// `S_mu 1_A (x) = sum_k m_k [x + x_k in A]`, with `x + x_k` taken mod 1.
pub fn convolve_indicator<S: Indicator + ?Sized>(
    mu: &DiscreteMeasure,
    set: &S,
    x: &Point,
) -> Result<Rational> {
    let mut total = Rational::zero();
    for (atom, m) in mu.atoms.iter().zip(&mu.masses) {
        if torus_contains(set, &(x + atom))? {
            total += m;
        }
    }
    Ok(total)
}

/// Ordered list `mu_1, mu_2, ...`; public indices are 1-based.
#[derive(Clone, Debug, PartialEq)]
pub struct MeasureSequence {
    measures: Vec<DiscreteMeasure>,
}

impl MeasureSequence {
    pub fn new(measures: Vec<DiscreteMeasure>) -> Result<Self> {
        if let Some(first) = measures.first() {
            if measures.iter().any(|m| !m.basis.same_as(&first.basis)) {
                return Err(Error::BasisMismatch);
            }
        }
        Ok(MeasureSequence { measures })
    }

    /// `mu_n = sum_k m_k delta_{x_k ratio^n}` for `n = 1..=count`; the base
    /// atoms need not lie in `(0, 1)` themselves.
    pub fn geometric(
        base_atoms: &[Point],
        masses: &[Rational],
        ratio: &Rational,
        count: usize,
    ) -> Result<Self> {
        if !ratio.is_positive() {
            return Err(Error::InvalidParameter(
                "geometric ratio must be positive".into(),
            ));
        }
        let mut factor = Rational::one();
        let mut measures = Vec::with_capacity(count);
        for _ in 0..count {
            factor *= ratio;
            let atoms = base_atoms.iter().map(|x| x.scale(&factor)).collect();
            measures.push(DiscreteMeasure::new(atoms, masses.to_vec())?);
        }
        Self::new(measures)
    }

    pub fn len(&self) -> usize {
        self.measures.len()
    }

    pub fn is_empty(&self) -> bool {
        self.measures.is_empty()
    }

    /// `mu_n`, 1-based.
    pub fn get(&self, n: usize) -> Option<&DiscreteMeasure> {
        n.checked_sub(1).and_then(|i| self.measures.get(i))
    }

    pub fn measures(&self) -> &[DiscreteMeasure] {
        &self.measures
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConditionOptions {
    /// A value counts as concentrated once it exceeds `(1 - gap) |mu_n|`.
    pub concentration_gap: Rational,
    /// Tolerance for `| |mu_n| - 1 |`.
    pub mass_tolerance: Rational,
}

impl Default for ConditionOptions {
    fn default() -> Self {
        ConditionOptions {
            concentration_gap: Rational::new(1.into(), 1000.into()),
            mass_tolerance: Rational::new(1.into(), 1000.into()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DeltaReport {
    pub delta: String,
    /// `mu_n((-delta, delta))` for `n = 1, 2, ...`.
    pub values: Vec<String>,
    /// First `n` after which every value exceeds the threshold.
    pub tail_index: Option<usize>,
    pub concentrated: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConditionReport {
    pub per_delta: Vec<DeltaReport>,
    pub total_masses: Vec<String>,
    /// First `n` after which `| |mu_n| - 1 |` stays within tolerance.
    pub mass_tail_index: Option<usize>,
    pub condition_a: bool,
    pub condition_one: bool,
}

fn tail_index(flags: &[bool]) -> Option<usize> {
    if !*flags.last()? {
        return None;
    }
    let last_fail = flags.iter().rposition(|&ok| !ok);
    Some(last_fail.map_or(1, |i| i + 2))
}

/// Tabulates `mu_n((-delta, delta))` and `|mu_n|` along the sequence.
pub fn check_condition_one(
    seq: &MeasureSequence,
    deltas: &[Rational],
    opts: &ConditionOptions,
) -> Result<ConditionReport> {
    if seq.is_empty() {
        return Err(Error::InvalidParameter("measure sequence is empty".into()));
    }
    let half = Rational::new(1.into(), 2.into());
    let mut per_delta = Vec::with_capacity(deltas.len());
    for delta in deltas {
        if !delta.is_positive() || *delta > half {
            return Err(Error::InvalidParameter(format!(
                "delta {} must lie in (0, 1/2]",
                format_rational(delta)
            )));
        }
        let mut values = Vec::with_capacity(seq.len());
        let mut flags = Vec::with_capacity(seq.len());
        for mu in &seq.measures {
            let v = mu.mass_near_zero(delta)?;
            let threshold = (Rational::one() - &opts.concentration_gap) * &mu.total;
            flags.push(v > threshold);
            values.push(format_rational(&v));
        }
        let tail = tail_index(&flags);
        per_delta.push(DeltaReport {
            delta: format_rational(delta),
            values,
            tail_index: tail,
            concentrated: tail.is_some(),
        });
    }
    let mass_flags: Vec<bool> = seq
        .measures
        .iter()
        .map(|mu| (&mu.total - Rational::one()).abs() <= opts.mass_tolerance)
        .collect();
    let mass_tail_index = tail_index(&mass_flags);
    let condition_one = per_delta.iter().all(|d| d.concentrated);
    Ok(ConditionReport {
        per_delta,
        total_masses: seq
            .measures
            .iter()
            .map(|mu| format_rational(&mu.total))
            .collect(),
        mass_tail_index,
        condition_a: mass_tail_index.is_some(),
        condition_one,
    })
}

#[derive(Clone, Debug)]
pub struct ChebyshevReport {
    /// `int_T S_mu 1_G`, summed exactly over the overlay cells.
    pub integral: Point,
    /// `|mu| |G|` with `|G|` the measure of the torus image of `G`.
    pub expected_integral: Point,
    pub identity_holds: bool,
    /// `{x in [0,1): S_mu 1_G(x) > eps}`.
    pub level_set: IntervalSet,
    pub level_measure: Point,
    /// `|mu| |G| / eps`.
    pub bound: Point,
    pub bound_holds: bool,
}

/// Overlay cells of the translates `G - x_k` on `[0, 1)`, each with the
/// constant value of `S_mu 1_G` on it.
pub fn overlay(mu: &DiscreteMeasure, g: &IntervalSet) -> Result<Vec<(Point, Point, Rational)>> {
    let basis = &mu.basis;
    let g_torus = g.to_torus()?;
    let mut cuts = vec![Point::zero(basis), Point::rational(basis, Rational::one())];
    for atom in &mu.atoms {
        cuts.extend(g_torus.translate(&-atom).to_torus()?.endpoints());
    }
    sort_dedup(&mut cuts)?;
    let mut cells = Vec::with_capacity(cuts.len());
    for w in cuts.windows(2) {
        let mid = (&w[0] + &w[1]).scale(&Rational::new(1.into(), 2.into()));
        let value = convolve_indicator(mu, &g_torus, &mid)?;
        cells.push((w[0].clone(), w[1].clone(), value));
    }
    Ok(cells)
}

/// Mass identity and the Chebyshev bound `|{S_mu 1_G > eps}| <= |mu||G|/eps`.
pub fn chebyshev_check(
    mu: &DiscreteMeasure,
    g: &IntervalSet,
    eps: &Rational,
) -> Result<ChebyshevReport> {
    if !eps.is_positive() {
        return Err(Error::InvalidParameter("eps must be positive".into()));
    }
    let basis = &mu.basis;
    let g_measure = g.to_torus()?.measure();
    let mut integral = Point::zero(basis);
    let mut level = Vec::new();
    for (lo, hi, value) in overlay(mu, g)? {
        integral = &integral + &(&hi - &lo).scale(&value);
        if value > *eps {
            level.push((lo, hi));
        }
    }
    let level_set = IntervalSet::canonicalize(basis, level)?;
    let level_measure = level_set.measure();
    let expected_integral = g_measure.scale(&mu.total);
    let bound = expected_integral.scale(&eps.recip());
    Ok(ChebyshevReport {
        identity_holds: integral == expected_integral,
        bound_holds: level_measure.try_cmp(&bound)? != Ordering::Greater,
        integral,
        expected_integral,
        level_set,
        level_measure,
        bound,
    })
}
