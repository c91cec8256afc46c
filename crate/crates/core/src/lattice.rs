//! Rational decomposition of a finite support and the lattice sets
//!
//! ```text
//! A_m = { (n_1 y_1 + ... + n_nu y_nu) / p : |n_i| <= m tau (i < nu), |n_nu| <= nu m tau + 1 }
//! ```
//!
//! Enumeration is the ground truth for every count; the density asymptotic is
//! only reported as a ratio.

use std::cmp::Ordering;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactreal::{
    points_from_repr, points_to_repr, sort_points, Approx, CertifiedRepr, Enclosure,
    GeneratorBasis, IntervalSet, OpenInterval, Point, PointRepr, Rational,
};
use crate::par;

/// Default cap on the number of coefficient tuples visited by one scan.
pub const DEFAULT_ENUMERATION_CAP: u128 = 10_000_000;

/// Echelon basis of a subspace of `Q^D`, used for independence tests.
#[derive(Clone, Debug, Default)]
struct Echelon {
    rows: Vec<(usize, Vec<Rational>)>,
}

impl Echelon {
    fn reduce(&self, v: &[Rational]) -> Vec<Rational> {
        let mut v = v.to_vec();
        for (pivot, row) in &self.rows {
            if v[*pivot].is_zero() {
                continue;
            }
            let f = v[*pivot].clone() / &row[*pivot];
            for (a, b) in v.iter_mut().zip(row) {
                *a -= &f * b;
            }
        }
        v
    }

    /// Adds `v` if it is independent of the current rows.
    fn insert(&mut self, v: &[Rational]) -> bool {
        let r = self.reduce(v);
        match r.iter().position(|c| !c.is_zero()) {
            Some(pivot) => {
                // keep rows mutually reduced at their pivots
                for (_, row) in self.rows.iter_mut() {
                    if !row[pivot].is_zero() {
                        let f = row[pivot].clone() / &r[pivot];
                        for (a, b) in row.iter_mut().zip(&r) {
                            *a -= &f * b;
                        }
                    }
                }
                self.rows.push((pivot, r));
                true
            }
            None => false,
        }
    }
}

/// Solves `x = sum_i r_i y_i` for points in the span of `y`.
#[derive(Clone, Debug)]
struct Coordinates {
    y: Vec<Vec<Rational>>,
    pivots: Vec<usize>,
    inverse: Vec<Vec<Rational>>,
}

impl Coordinates {
    fn new(y: &[Point]) -> Result<Self> {
        let vecs: Vec<Vec<Rational>> = y.iter().map(|p| p.coeffs().to_vec()).collect();
        let nu = vecs.len();
        let mut ech = Echelon::default();
        for v in &vecs {
            if !ech.insert(v) {
                return Err(Error::Inconsistent(
                    "lattice generators are rationally dependent".into(),
                ));
            }
        }
        let pivots: Vec<usize> = ech.rows.iter().map(|(p, _)| *p).collect();
        // M[j][i] = y_i[pivot_j]; solve M r = x[pivots].
        let mut a: Vec<Vec<Rational>> = (0..nu)
            .map(|j| {
                let mut row: Vec<Rational> = (0..nu).map(|i| vecs[i][pivots[j]].clone()).collect();
                row.extend((0..nu).map(|k| {
                    if k == j {
                        Rational::one()
                    } else {
                        Rational::zero()
                    }
                }));
                row
            })
            .collect();
        for col in 0..nu {
            let piv = (col..nu)
                .find(|&r| !a[r][col].is_zero())
                .ok_or_else(|| Error::Inconsistent("singular pivot block".into()))?;
            a.swap(col, piv);
            let inv = a[col][col].recip();
            for c in a[col].iter_mut() {
                *c *= &inv;
            }
            for r in 0..nu {
                if r != col && !a[r][col].is_zero() {
                    let f = a[r][col].clone();
                    let pivot_row = a[col].clone();
                    for (x, y) in a[r].iter_mut().zip(&pivot_row) {
                        *x -= &f * y;
                    }
                }
            }
        }
        let inverse = a.into_iter().map(|row| row[nu..].to_vec()).collect();
        Ok(Coordinates {
            y: vecs,
            pivots,
            inverse,
        })
    }

    fn solve(&self, x: &Point) -> Option<Vec<Rational>> {
        let xs = x.coeffs();
        let rhs: Vec<&Rational> = self.pivots.iter().map(|&p| &xs[p]).collect();
        let r: Vec<Rational> = self
            .inverse
            .iter()
            .map(|row| {
                row.iter()
                    .zip(&rhs)
                    .fold(Rational::zero(), |acc, (a, b)| acc + a * *b)
            })
            .collect();
        // membership in the span: the reconstruction must match every coordinate
        for (d, target) in xs.iter().enumerate() {
            let v = r
                .iter()
                .zip(&self.y)
                .fold(Rational::zero(), |acc, (ri, y)| acc + ri * &y[d]);
            if &v != target {
                return None;
            }
        }
        Some(r)
    }
}

/// Integer representation `x_k = (sum_i n^(k)_i y_i) / p` of a support.
#[derive(Clone, Debug)]
pub struct LatticeSpec {
    basis: Arc<GeneratorBasis>,
    y: Vec<Point>,
    coeffs: Vec<Vec<BigInt>>,
    p: BigInt,
    tau: u64,
    coords: Coordinates,
    steps: Vec<Point>,
    step_approx: Option<Vec<Approx>>,
}

impl LatticeSpec {
    fn assemble(y: Vec<Point>, coeffs: Vec<Vec<BigInt>>, p: BigInt, tau: u64) -> Result<Self> {
        if y.is_empty() {
            return Err(Error::EmptySet);
        }
        if !p.is_positive() {
            return Err(Error::InvalidParameter(
                "denominator p must be positive".into(),
            ));
        }
        let basis = y[0].basis().clone();
        let coords = Coordinates::new(&y)?;
        let inv_p = Rational::new(BigInt::one(), p.clone());
        let steps: Vec<Point> = y.iter().map(|yi| yi.scale(&inv_p)).collect();
        let step_approx = steps.iter().map(Point::approx).collect();
        Ok(LatticeSpec {
            basis,
            y,
            coeffs,
            p,
            tau,
            coords,
            steps,
            step_approx,
        })
    }

    /// Builds a spec from explicit parts and checks the reconstruction
    /// `x_k = (sum_i coeffs[k][i] y_i) / p` against `support`.
    pub fn from_parts(
        support: &[Point],
        y: Vec<Point>,
        coeffs: Vec<Vec<BigInt>>,
        p: BigInt,
    ) -> Result<Self> {
        let tau = max_abs_entry(&coeffs)?;
        let spec = Self::assemble(y, coeffs, p, tau)?;
        spec.check_reconstruction(support)?;
        Ok(spec)
    }

    /// Skips every consistency check; exists to exercise failure paths.
    pub fn from_parts_unchecked(
        y: Vec<Point>,
        coeffs: Vec<Vec<BigInt>>,
        p: BigInt,
        tau: u64,
    ) -> Result<Self> {
        Self::assemble(y, coeffs, p, tau)
    }

    pub fn basis(&self) -> &Arc<GeneratorBasis> {
        &self.basis
    }

    /// The independent subset `y_1 < ... < y_nu`.
    pub fn y(&self) -> &[Point] {
        &self.y
    }

    pub fn nu(&self) -> usize {
        self.y.len()
    }

    pub fn coeffs(&self) -> &[Vec<BigInt>] {
        &self.coeffs
    }

    pub fn p(&self) -> &BigInt {
        &self.p
    }

    pub fn tau(&self) -> u64 {
        self.tau
    }

    /// `y_nu / p`, the spacing of the last coordinate.
    pub fn last_step(&self) -> &Point {
        self.steps.last().unwrap()
    }

    /// Same lattice points as a subset, with `p` and the integer matrix
    /// multiplied by `factor`: the grid refines by `factor` in every direction.
    pub fn refine(&self, factor: u64) -> Result<Self> {
        if factor == 0 {
            return Err(Error::InvalidParameter(
                "refinement factor must be positive".into(),
            ));
        }
        let f = BigInt::from(factor);
        let coeffs = self
            .coeffs
            .iter()
            .map(|row| row.iter().map(|c| c * &f).collect())
            .collect();
        let tau = self
            .tau
            .checked_mul(factor)
            .ok_or_else(|| Error::InvalidParameter("refined tau overflows".into()))?;
        Self::assemble(self.y.clone(), coeffs, &self.p * &f, tau)
    }

    pub fn check_reconstruction(&self, support: &[Point]) -> Result<()> {
        if support.len() != self.coeffs.len() {
            return Err(Error::Inconsistent(format!(
                "support has {} points, matrix has {} rows",
                support.len(),
                self.coeffs.len()
            )));
        }
        for (x, row) in support.iter().zip(&self.coeffs) {
            let rebuilt = self.point_big(row);
            if &rebuilt != x {
                return Err(Error::Inconsistent(format!(
                    "row {row:?} rebuilds {rebuilt}, expected {x}"
                )));
            }
        }
        Ok(())
    }

    /// `gamma = (2 tau)^(nu-1) p / y_nu`.
    pub fn gamma(&self) -> Enclosure {
        let scale = Rational::from_integer(
            num_traits::pow(BigInt::from(2 * self.tau), self.nu() - 1) * &self.p,
        );
        let y_nu = self.y.last().unwrap().enclose_to(96);
        y_nu.recip().expect("y_nu is positive").scale(&scale)
    }

    /// Coordinate bounds `(b_1, ..., b_nu)` of `A_m`.
    pub fn bounds(&self, m: u64) -> Result<Vec<i64>> {
        let nu = self.nu() as u64;
        let overflow = || {
            Error::InvalidParameter(format!(
                "lattice level m = {m} overflows the coordinate range"
            ))
        };
        let inner = m.checked_mul(self.tau).ok_or_else(overflow)?;
        let last = nu
            .checked_mul(inner)
            .and_then(|v| v.checked_add(1))
            .ok_or_else(overflow)?;
        let cast = |v: u64| i64::try_from(v).map_err(|_| overflow());
        let mut b = vec![cast(inner)?; self.nu() - 1];
        b.push(cast(last)?);
        Ok(b)
    }

    /// Number of coefficient tuples of `A_m`, `(2 m tau + 1)^(nu-1) (2 (nu m tau + 1) + 1)`.
    pub fn tuple_count(&self, m: u64) -> Result<u128> {
        let mut total: u128 = 1;
        for b in self.bounds(m)? {
            total = total
                .checked_mul(2 * b as u128 + 1)
                .ok_or(Error::EnumerationCap {
                    needed: u128::MAX,
                    cap: u128::MAX,
                })?;
        }
        Ok(total)
    }

    /// `(sum_i n_i y_i) / p` for integer coordinates.
    pub fn point(&self, n: &[i64]) -> Point {
        let mut acc = Point::zero(&self.basis);
        for (ni, step) in n.iter().zip(&self.steps) {
            if *ni != 0 {
                acc = &acc + &step.scale(&Rational::from_integer(BigInt::from(*ni)));
            }
        }
        acc
    }

    fn point_big(&self, n: &[BigInt]) -> Point {
        let mut acc = Point::zero(&self.basis);
        for (ni, step) in n.iter().zip(&self.steps) {
            acc = &acc + &step.scale(&Rational::from_integer(ni.clone()));
        }
        acc
    }

    fn approx_value(&self, n: &[i64]) -> Option<Approx> {
        let steps = self.step_approx.as_ref()?;
        let mut acc = Approx::point(0.0);
        for (ni, s) in n.iter().zip(steps) {
            if *ni != 0 {
                acc = acc.add(s.mul(Approx::point(*ni as f64)));
            }
        }
        acc.is_finite().then_some(acc)
    }

    /// Integer coordinates of `x` on the `y/p` grid, if `x` lies on it.
    pub fn integer_coordinates(&self, x: &Point) -> Option<Vec<BigInt>> {
        let r = self.coords.solve(x)?;
        let p = Rational::from_integer(self.p.clone());
        r.into_iter()
            .map(|ri| {
                let n = ri * &p;
                n.is_integer().then(|| n.to_integer())
            })
            .collect()
    }

    /// Exact membership `x in A_m`.
    pub fn contains(&self, m: u64, x: &Point) -> Result<bool> {
        let Some(n) = self.integer_coordinates(x) else {
            return Ok(false);
        };
        let bounds = self.bounds(m)?;
        Ok(n.iter()
            .zip(&bounds)
            .all(|(ni, b)| ni.abs() <= BigInt::from(*b)))
    }

    /// Visits every tuple of `A_m` whose point passes `keep`, returning the
    /// kept points in tuple order. Parallel over the first coordinate.
    fn scan<F>(&self, m: u64, cap: u128, keep: F) -> Result<Vec<Point>>
    where
        F: Fn(&[i64], &dyn Fn() -> Point) -> Result<bool> + Sync,
    {
        let needed = self.tuple_count(m)?;
        if needed > cap {
            return Err(Error::EnumerationCap { needed, cap });
        }
        let bounds = self.bounds(m)?;
        let b0 = bounds[0];
        let chunks = par::try_map_range(-b0..b0 + 1, |n0| -> Result<Vec<Point>> {
            let mut out = Vec::new();
            let mut n: Vec<i64> = bounds.iter().map(|b| -b).collect();
            n[0] = n0;
            loop {
                let build = || self.point(&n);
                if keep(&n, &build)? {
                    out.push(build());
                }
                // odometer over coordinates 1..nu
                let mut i = n.len() - 1;
                loop {
                    if i == 0 {
                        return Ok(out);
                    }
                    if n[i] < bounds[i] {
                        n[i] += 1;
                        break;
                    }
                    n[i] = -bounds[i];
                    i -= 1;
                }
            }
        })?;
        Ok(chunks.into_iter().flatten().collect())
    }

    fn scan_in(&self, m: u64, set: &IntervalSet, cap: u128) -> Result<Vec<Point>> {
        let fast = FastSet::new(set);
        self.scan(m, cap, |n, build| {
            match self.approx_value(n).and_then(|a| fast.classify(a)) {
                Some(inside) => Ok(inside),
                None => set.contains(&build()),
            }
        })
    }
}

fn max_abs_entry(coeffs: &[Vec<BigInt>]) -> Result<u64> {
    let tau = coeffs
        .iter()
        .flatten()
        .map(|c| c.abs())
        .max()
        .unwrap_or_default();
    tau.to_u64()
        .ok_or_else(|| Error::InvalidParameter("tau does not fit in 64 bits".into()))
}

/// Approximate interval endpoints for a quick inside/outside decision.
struct FastSet {
    bounds: Option<Vec<(Approx, Approx)>>,
}

impl FastSet {
    fn new(set: &IntervalSet) -> Self {
        let bounds = set
            .intervals()
            .iter()
            .map(|iv| Some((iv.lo.approx()?, iv.hi.approx()?)))
            .collect();
        FastSet { bounds }
    }

    /// `Some(inside)` when the enclosure decides membership.
    fn classify(&self, v: Approx) -> Option<bool> {
        let bounds = self.bounds.as_ref()?;
        // first interval whose upper bound is not certainly below v
        let idx = bounds.partition_point(|(_, hi)| hi.hi < v.lo);
        match bounds.get(idx) {
            None => Some(false),
            Some((lo, hi)) => {
                if lo.hi < v.lo && v.hi < hi.lo {
                    Some(true)
                } else if v.hi < lo.lo {
                    Some(false)
                } else {
                    None
                }
            }
        }
    }
}

/// Maximal rationally independent subset of `support` containing its largest
/// element, and the integer representation of every support point over it.
pub fn decompose(support: &[Point]) -> Result<LatticeSpec> {
    let last = support.last().ok_or(Error::EmptySet)?;
    let basis = last.basis().clone();
    let zero = Point::zero(&basis);
    let one = Point::rational(&basis, Rational::one());
    for (i, x) in support.iter().enumerate() {
        if x.try_cmp(&zero)? != Ordering::Greater || x.try_cmp(&one)? != Ordering::Less {
            return Err(Error::InvalidParameter(format!(
                "support point {x} is not inside (0, 1)"
            )));
        }
        if i > 0 && support[i - 1].try_cmp(x)? == Ordering::Greater {
            return Err(Error::InvalidParameter(
                "support must be sorted ascending".into(),
            ));
        }
    }
    // Latest-first greedy: keeps x_l and prefers later elements.
    let mut ech = Echelon::default();
    let mut y = Vec::new();
    for x in support.iter().rev() {
        if ech.insert(x.coeffs()) {
            y.push(x.clone());
        }
    }
    sort_points(&mut y)?;
    let coords = Coordinates::new(&y)?;
    let mut rows = Vec::with_capacity(support.len());
    let mut p = BigInt::one();
    for x in support {
        let r = coords
            .solve(x)
            .ok_or_else(|| Error::Inconsistent(format!("{x} is outside the span")))?;
        for ri in &r {
            p = p.lcm(ri.denom());
        }
        rows.push(r);
    }
    let pr = Rational::from_integer(p.clone());
    let coeffs: Vec<Vec<BigInt>> = rows
        .into_iter()
        .map(|r| r.into_iter().map(|ri| (ri * &pr).to_integer()).collect())
        .collect();
    LatticeSpec::from_parts(support, y, coeffs, p)
}

/// All points of `A_m`, ascending.
pub fn enumerate_lattice(spec: &LatticeSpec, m: u64, cap: u128) -> Result<Vec<Point>> {
    if m == 0 {
        return Err(Error::InvalidParameter(
            "lattice level m must be at least 1".into(),
        ));
    }
    let mut pts = spec.scan(m, cap, |_, _| Ok(true))?;
    sort_points(&mut pts)?;
    pts.dedup();
    Ok(pts)
}

/// `A_m ∩ set`, ascending.
pub fn lattice_points_in(
    spec: &LatticeSpec,
    m: u64,
    set: &IntervalSet,
    cap: u128,
) -> Result<Vec<Point>> {
    if m == 0 {
        return Err(Error::InvalidParameter(
            "lattice level m must be at least 1".into(),
        ));
    }
    let mut pts = spec.scan_in(m, set, cap)?;
    sort_points(&mut pts)?;
    pts.dedup();
    Ok(pts)
}

/// Exact `#(A_m ∩ I)` for any `nu`, including the arithmetic-progression
/// case `nu = 1`.
pub fn count_in_interval(
    spec: &LatticeSpec,
    m: u64,
    interval: &OpenInterval,
    cap: u128,
) -> Result<u64> {
    let set = IntervalSet::interval(interval.lo.clone(), interval.hi.clone())?;
    Ok(lattice_points_in(spec, m, &set, cap)?.len() as u64)
}

#[derive(Clone, Debug)]
pub struct DensityReport {
    pub m: u64,
    pub count: u64,
    /// `gamma m^(nu-1) |I|`.
    pub predicted: Enclosure,
    /// `count / predicted`.
    pub ratio: Enclosure,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DensityRow {
    pub m: u64,
    pub count: u64,
    pub predicted: f64,
    pub ratio: f64,
}

impl DensityReport {
    pub fn row(&self) -> DensityRow {
        DensityRow {
            m: self.m,
            count: self.count,
            predicted: self.predicted.to_f64(),
            ratio: self.ratio.to_f64(),
        }
    }

    pub fn predicted_repr(&self) -> CertifiedRepr {
        CertifiedRepr::from(&self.predicted)
    }

    pub fn ratio_repr(&self) -> CertifiedRepr {
        CertifiedRepr::from(&self.ratio)
    }
}

/// Exact count of `A_m ∩ I` against the density prediction.
pub fn interval_count_ratio(
    spec: &LatticeSpec,
    m: u64,
    interval: &OpenInterval,
    cap: u128,
) -> Result<DensityReport> {
    if spec.nu() < 2 {
        return Err(Error::SingleGenerator);
    }
    let basis = spec.basis();
    let minus_one = Point::rational(basis, -Rational::one());
    let one = Point::rational(basis, Rational::one());
    if interval.lo.try_cmp(&minus_one)? == Ordering::Less
        || interval.hi.try_cmp(&one)? == Ordering::Greater
    {
        return Err(Error::InvalidParameter(
            "interval must lie in (-1, 1)".into(),
        ));
    }
    let len = interval.length();
    if len.try_cmp(spec.last_step())? == Ordering::Greater {
        return Err(Error::InvalidParameter(format!(
            "interval length {} exceeds y_nu / p = {}",
            len.display_decimal(6),
            spec.last_step().display_decimal(6)
        )));
    }
    let count = count_in_interval(spec, m, interval, cap)?;
    let mpow = Rational::from_integer(num_traits::pow(BigInt::from(m), spec.nu() - 1));
    let predicted = spec.gamma().mul(&len.enclose_to(96)).scale(&mpow);
    let ratio = Enclosure::exact(Rational::from_integer(count.into()))
        .div(&predicted)
        .ok_or_else(|| Error::Inconsistent("prediction straddles zero".into()))?;
    Ok(DensityReport {
        m,
        count,
        predicted,
        ratio,
    })
}

#[derive(Clone, Debug)]
pub struct ClosureReport {
    pub m: u64,
    pub holds: bool,
    /// Pairs `(x, x_k)` examined.
    pub checked: usize,
    /// `#(A_m ∩ (-x_l, 0))`.
    pub negative_points: usize,
    /// First violating pair, with the reason.
    pub violation: Option<(Point, Point, String)>,
}

/// Checks `A_m ∩ (-x_l, 0) + X ⊂ A_{m+1} ∩ (-x_l, x_l)` by exact membership.
pub fn shift_closure_check(
    spec: &LatticeSpec,
    support: &[Point],
    m: u64,
    cap: u128,
) -> Result<ClosureReport> {
    let x_l = support.last().ok_or(Error::EmptySet)?;
    let neg = -x_l;
    let window = IntervalSet::interval(neg.clone(), Point::zero(spec.basis()))?;
    let left = lattice_points_in(spec, m, &window, cap)?;
    let mut checked = 0;
    for x in &left {
        for xk in support {
            checked += 1;
            let s = x + xk;
            let inside = neg.try_cmp(&s)? == Ordering::Less && s.try_cmp(x_l)? == Ordering::Less;
            let reason = if !inside {
                Some(format!("{s} is outside (-x_l, x_l)"))
            } else if !spec.contains(m + 1, &s)? {
                Some(format!("{s} is not in A_{}", m + 1))
            } else {
                None
            };
            if let Some(reason) = reason {
                return Ok(ClosureReport {
                    m,
                    holds: false,
                    checked,
                    negative_points: left.len(),
                    violation: Some((x.clone(), xk.clone(), reason)),
                });
            }
        }
    }
    Ok(ClosureReport {
        m,
        holds: true,
        checked,
        negative_points: left.len(),
        violation: None,
    })
}

/// Wire form of a [`LatticeSpec`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeSpecRepr {
    pub y: Vec<PointRepr>,
    pub coeffs: Vec<Vec<String>>,
    pub p: String,
    pub tau: u64,
    pub gamma: Option<CertifiedRepr>,
}

impl LatticeSpec {
    pub fn to_repr(&self) -> LatticeSpecRepr {
        LatticeSpecRepr {
            y: points_to_repr(&self.y),
            coeffs: self
                .coeffs
                .iter()
                .map(|r| r.iter().map(|c| c.to_string()).collect())
                .collect(),
            p: self.p.to_string(),
            tau: self.tau,
            gamma: (self.nu() >= 2).then(|| CertifiedRepr::from(&self.gamma())),
        }
    }

    pub fn from_repr(
        basis: &Arc<GeneratorBasis>,
        support: &[Point],
        repr: &LatticeSpecRepr,
    ) -> Result<Self> {
        let y = points_from_repr(basis, &repr.y)?;
        let parse = |s: &String| {
            s.parse::<BigInt>()
                .map_err(|_| Error::ParseRational(s.clone()))
        };
        let coeffs = repr
            .coeffs
            .iter()
            .map(|r| r.iter().map(parse).collect::<Result<Vec<_>>>())
            .collect::<Result<_>>()?;
        let spec = LatticeSpec::from_parts(support, y, coeffs, parse(&repr.p)?)?;
        if spec.tau != repr.tau {
            return Err(Error::Inconsistent(format!(
                "tau {} does not match the matrix ({})",
                repr.tau, spec.tau
            )));
        }
        Ok(spec)
    }
}

impl std::fmt::Display for LatticeSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "nu = {}, p = {}, tau = {}, Y = [",
            self.nu(),
            self.p,
            self.tau
        )?;
        for (i, y) in self.y.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{y}")?;
        }
        write!(f, "], gamma ~ {:.6}", self.gamma().to_f64())
    }
}
