//! The scaling parameter `lambda`: the step function
//! `lambda -> sum_i m_i [ {x_i / lambda} in (eps, 1 - eps) ]` on `(0, r]`,
//! a deterministic choice of `lambda` from it, and the fractional-part
//! window sets `U_lambda`, `V_lambda`.
//!
//! `E_t = U_k (t/(k+1-eps), t/(k+eps))`, so walking `lambda` downwards the
//! atom `t` switches on at `t/(k+eps)` and off at `t/(k+1-eps)`.

use std::cmp::Ordering;
use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactreal::{
    format_rational, int, simplest_between, Approx, CertifiedRepr, Enclosure, IntervalSet, Point,
    Rational,
};
use crate::measure::DiscreteMeasure;

#[derive(Clone, Debug)]
pub struct ProfileOptions {
    /// `lambda_floor = r * floor_ratio`.
    pub floor_ratio: Rational,
    pub piece_cap: usize,
}

impl Default for ProfileOptions {
    fn default() -> Self {
        ProfileOptions {
            floor_ratio: Rational::new(1.into(), 10_000.into()),
            piece_cap: 1_000_000,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    /// `t/(k+eps)`: the atom becomes active below this point.
    Enter,
    /// `t/(k+1-eps)`: the atom becomes inactive below this point.
    Leave,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BreakKind {
    Cutoff,
    Floor,
    Atom { atom: usize, k: u64, side: Side },
}

/// Profile breakpoint, kept symbolic with a cached f64 enclosure.
#[derive(Clone, Copy, Debug)]
pub struct Breakpoint {
    pub kind: BreakKind,
    approx: Option<Approx>,
}

/// Shared data for exact breakpoint evaluation.
#[derive(Clone, Debug)]
struct Setup {
    atoms: Vec<Point>,
    atom_approx: Vec<Option<Approx>>,
    masses: Vec<Rational>,
    eps: Rational,
    one_minus_eps: Rational,
    eps_approx: Option<Approx>,
    one_minus_eps_approx: Option<Approx>,
    r: Point,
    floor: Point,
}

impl Setup {
    fn new(
        mu: &DiscreteMeasure,
        eps: &Rational,
        delta: &Rational,
        floor_ratio: &Rational,
    ) -> Result<Self> {
        if !eps.is_positive() || *eps >= Rational::new(1.into(), 3.into()) {
            return Err(Error::InvalidParameter(format!(
                "eps = {} must lie in (0, 1/3)",
                format_rational(eps)
            )));
        }
        if !delta.is_positive() {
            return Err(Error::InvalidParameter(format!(
                "delta = {} must be positive",
                format_rational(delta)
            )));
        }
        if !floor_ratio.is_positive() || *floor_ratio >= Rational::one() {
            return Err(Error::InvalidParameter(
                "floor ratio must lie in (0, 1)".into(),
            ));
        }
        let one_minus_eps = Rational::one() - eps;
        let r = cutoff(mu, eps, delta)?;
        let floor = r.scale(floor_ratio);
        Ok(Setup {
            atoms: mu.atoms().to_vec(),
            atom_approx: mu.atoms().iter().map(Point::approx).collect(),
            masses: mu.masses().to_vec(),
            eps_approx: Approx::of_rational(eps),
            one_minus_eps_approx: Approx::of_rational(&one_minus_eps),
            eps: eps.clone(),
            one_minus_eps,
            r,
            floor,
        })
    }

    fn denominator(&self, k: u64, side: Side) -> Rational {
        let k = Rational::from_integer(BigInt::from(k));
        match side {
            Side::Enter => k + &self.eps,
            Side::Leave => k + &self.one_minus_eps,
        }
    }

    fn atom_break(&self, atom: usize, k: u64, side: Side) -> Breakpoint {
        let c = match side {
            Side::Enter => self.eps_approx,
            Side::Leave => self.one_minus_eps_approx,
        };
        let approx = (|| {
            let d = Approx::point(k as f64).add(c?);
            self.atom_approx[atom]?.div(d)
        })();
        Breakpoint {
            kind: BreakKind::Atom { atom, k, side },
            approx,
        }
    }

    fn cutoff_break(&self) -> Breakpoint {
        Breakpoint {
            kind: BreakKind::Cutoff,
            approx: self.r.approx(),
        }
    }

    fn floor_break(&self) -> Breakpoint {
        Breakpoint {
            kind: BreakKind::Floor,
            approx: self.floor.approx(),
        }
    }

    fn point(&self, b: &Breakpoint) -> Point {
        match b.kind {
            BreakKind::Cutoff => self.r.clone(),
            BreakKind::Floor => self.floor.clone(),
            BreakKind::Atom { atom, k, side } => {
                self.atoms[atom].scale(&self.denominator(k, side).recip())
            }
        }
    }

    fn cmp(&self, a: &Breakpoint, b: &Breakpoint) -> Result<Ordering> {
        if let (Some(x), Some(y)) = (a.approx, b.approx) {
            if x.hi < y.lo {
                return Ok(Ordering::Less);
            }
            if x.lo > y.hi {
                return Ok(Ordering::Greater);
            }
        }
        self.point(a).try_cmp(&self.point(b))
    }

    fn cmp_point(&self, a: &Breakpoint, p: &Point) -> Result<Ordering> {
        if let (Some(x), Some(y)) = (a.approx, p.approx()) {
            if x.hi < y.lo {
                return Ok(Ordering::Less);
            }
            if x.lo > y.hi {
                return Ok(Ordering::Greater);
            }
        }
        self.point(a).try_cmp(p)
    }
}

/// `r = min(eps x_1 / (2 (1 - eps)), delta)`.
pub fn cutoff(mu: &DiscreteMeasure, eps: &Rational, delta: &Rational) -> Result<Point> {
    let c = eps / (int(2) * (Rational::one() - eps));
    let a = mu.min_atom().scale(&c);
    let d = Point::rational(mu.basis(), delta.clone());
    Ok(if a.try_cmp(&d)? == Ordering::Less {
        a
    } else {
        d
    })
}

fn next_break(side: Side, k: u64) -> (u64, Side) {
    match side {
        Side::Enter => (k, Side::Leave),
        Side::Leave => (k + 1, Side::Enter),
    }
}

/// Walks the pieces of the profile from `r` downwards, without end.
struct Walker<'a> {
    setup: &'a Setup,
    heads: Vec<Breakpoint>,
    active: Vec<bool>,
    value: Rational,
    top: Breakpoint,
}

impl<'a> Walker<'a> {
    fn new(setup: &'a Setup) -> Result<Self> {
        let top = setup.cutoff_break();
        let r_f = setup.r.to_f64();
        let mut heads = Vec::with_capacity(setup.atoms.len());
        let mut active = Vec::with_capacity(setup.atoms.len());
        let mut value = Rational::zero();
        for (i, t) in setup.atoms.iter().enumerate() {
            // first breakpoint strictly below r
            let u = t.to_f64() / r_f;
            let mut k = if u.is_finite() && u > 2.0 {
                u.floor() as u64 - 2
            } else {
                0
            };
            let mut side = Side::Enter;
            loop {
                let b = setup.atom_break(i, k, side);
                if setup.cmp(&b, &top)? == Ordering::Less {
                    // just above an Enter point the atom is off, above a Leave point it is on
                    let on = side == Side::Leave;
                    if on {
                        value += &setup.masses[i];
                    }
                    heads.push(b);
                    active.push(on);
                    break;
                }
                (k, side) = next_break(side, k);
            }
        }
        Ok(Walker {
            setup,
            heads,
            active,
            value,
            top,
        })
    }

    /// Next piece `(top, bottom, value)`.
    fn next_piece(&mut self) -> Result<(Breakpoint, Breakpoint, Rational)> {
        let mut best = 0;
        for i in 1..self.heads.len() {
            if self.setup.cmp(&self.heads[i], &self.heads[best])? == Ordering::Greater {
                best = i;
            }
        }
        let bottom = self.heads[best];
        let piece = (self.top, bottom, self.value.clone());
        for i in 0..self.heads.len() {
            if i != best && self.setup.cmp(&self.heads[i], &bottom)? != Ordering::Equal {
                continue;
            }
            let BreakKind::Atom { k, side, .. } = self.heads[i].kind else {
                unreachable!()
            };
            self.active[i] = !self.active[i];
            if self.active[i] {
                self.value += &self.setup.masses[i];
            } else {
                self.value -= &self.setup.masses[i];
            }
            let (k, side) = next_break(side, k);
            self.heads[i] = self.setup.atom_break(i, k, side);
        }
        self.top = bottom;
        Ok(piece)
    }
}

/// Step function on `(lambda_floor, r]`, pieces in descending order.
#[derive(Clone, Debug)]
pub struct LambdaProfile {
    setup: Setup,
    total_mass: Rational,
    /// `breaks[0] = r > breaks[1] > ... > breaks[n] = lambda_floor`.
    breaks: Vec<Breakpoint>,
    values: Vec<u32>,
    table: Vec<Rational>,
}

/// One piece `(lo, hi)` of the profile with its step value.
#[derive(Clone, Debug)]
pub struct Piece {
    pub lo: Point,
    pub hi: Point,
    pub value: Rational,
}

/// Plot row for the profile dump.
#[derive(Clone, Debug, Serialize)]
pub struct ProfileRow {
    pub lo: f64,
    pub hi: f64,
    pub value: String,
}

/// Certified bracket of `int_0^r profile` and the averaging bound.
#[derive(Clone, Debug)]
pub struct IntegralReport {
    /// Integral over the enumerated pieces, `(lambda_floor, r]`.
    pub explicit: Approx,
    /// Lower bound for the contribution of `(0, lambda_floor]`.
    pub tail_lower: Approx,
    /// Enclosure of the full integral over `(0, r]`.
    pub lower: f64,
    pub upper: f64,
    /// `(1 - 3 eps) r |mu|`.
    pub bound: Point,
    /// `lower >= bound`, certified.
    pub holds: bool,
}

pub fn lambda_profile(
    mu: &DiscreteMeasure,
    eps: &Rational,
    delta: &Rational,
    opts: &ProfileOptions,
) -> Result<LambdaProfile> {
    let setup = Setup::new(mu, eps, delta, &opts.floor_ratio)?;
    let floor = setup.floor_break();
    let mut walker = Walker::new(&setup)?;
    let mut breaks = vec![walker.top];
    let mut values = Vec::new();
    let mut table: Vec<Rational> = Vec::new();
    let mut index: HashMap<Rational, u32> = HashMap::new();
    loop {
        let (_, bottom, value) = walker.next_piece()?;
        let id = *index.entry(value.clone()).or_insert_with(|| {
            table.push(value);
            (table.len() - 1) as u32
        });
        values.push(id);
        if setup.cmp(&bottom, &floor)? != Ordering::Greater {
            breaks.push(floor);
            break;
        }
        breaks.push(bottom);
        if values.len() >= opts.piece_cap {
            return Err(Error::PieceCap {
                cap: opts.piece_cap,
            });
        }
    }
    Ok(LambdaProfile {
        setup: setup.clone(),
        total_mass: mu.total_mass().clone(),
        breaks,
        values,
        table,
    })
}

impl LambdaProfile {
    pub fn r(&self) -> &Point {
        &self.setup.r
    }

    pub fn floor(&self) -> &Point {
        &self.setup.floor
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn value(&self, i: usize) -> &Rational {
        &self.table[self.values[i] as usize]
    }

    /// Piece `i`, counted from the top.
    pub fn piece(&self, i: usize) -> Piece {
        Piece {
            lo: self.setup.point(&self.breaks[i + 1]),
            hi: self.setup.point(&self.breaks[i]),
            value: self.value(i).clone(),
        }
    }

    /// Distinct step values, ascending.
    pub fn distinct_values(&self) -> Vec<Rational> {
        let mut v = self.table.clone();
        v.sort();
        v
    }

    /// Step value at `lambda`; `None` outside `(lambda_floor, r]` or at a
    /// breakpoint.
    pub fn value_at(&self, lambda: &Rational) -> Result<Option<Rational>> {
        let x = Point::rational(self.setup.r.basis(), lambda.clone());
        let xb = Breakpoint {
            kind: BreakKind::Floor,
            approx: x.approx(),
        };
        let cmp = |b: &Breakpoint| -> Result<Ordering> {
            if let (Some(p), Some(q)) = (b.approx, xb.approx) {
                if p.hi < q.lo {
                    return Ok(Ordering::Less);
                }
                if p.lo > q.hi {
                    return Ok(Ordering::Greater);
                }
            }
            self.setup.point(b).try_cmp(&x)
        };
        if cmp(&self.breaks[0])? == Ordering::Less
            || cmp(self.breaks.last().unwrap())? != Ordering::Less
        {
            return Ok(None);
        }
        // first break strictly below x; breaks are descending
        let (mut lo, mut hi) = (0usize, self.breaks.len());
        while lo < hi {
            let mid = (lo + hi) / 2;
            if cmp(&self.breaks[mid])? == Ordering::Less {
                hi = mid;
            } else {
                lo = mid + 1;
            }
        }
        if cmp(&self.breaks[lo - 1])? == Ordering::Equal && lo - 1 != 0 {
            return Ok(None);
        }
        Ok(Some(self.value(lo - 1).clone()))
    }

    pub fn rows(&self) -> Vec<ProfileRow> {
        (0..self.len())
            .rev()
            .map(|i| ProfileRow {
                lo: approx_mid(&self.setup, &self.breaks[i + 1]),
                hi: approx_mid(&self.setup, &self.breaks[i]),
                value: format_rational(self.value(i)),
            })
            .collect()
    }

    /// Certified bracket of the integral over `(0, r]`.
    ///
    /// The tail below `lambda_floor` is bounded from below using
    /// `sum_{k >= K} 1/((k+eps)(k+1-eps)) >= 1/(K + 1/2)`.
    pub fn integral(&self) -> Result<IntegralReport> {
        let s = &self.setup;
        let mut explicit = Approx::point(0.0);
        let vals: Vec<Option<Approx>> = self.table.iter().map(Approx::of_rational).collect();
        for i in 0..self.len() {
            let v = vals[self.values[i] as usize]
                .ok_or_else(|| Error::Inconsistent("step value overflows".into()))?;
            if v.hi == 0.0 {
                continue;
            }
            let (hi, lo) = (
                bp_approx(s, &self.breaks[i])?,
                bp_approx(s, &self.breaks[i + 1])?,
            );
            let len = hi.sub(lo);
            let len = Approx {
                lo: len.lo.max(0.0),
                hi: len.hi,
            };
            explicit = explicit.add(len.mul(v));
        }
        let floor = bp_approx(s, &s.floor_break())?;
        let one_minus_two = Approx::of_rational(&(Rational::one() - int(2) * &s.eps)).unwrap();
        let mut tail = Approx::point(0.0);
        for (i, t) in s.atoms.iter().enumerate() {
            let ta = t
                .approx()
                .ok_or_else(|| Error::Inconsistent("atom overflows f64".into()))?;
            let big_k = (ta.hi / floor.lo).ceil() + 1.0;
            let denom = Approx::point(big_k).add(Approx::point(0.5));
            let m = Approx::of_rational(&s.masses[i]).unwrap();
            tail = tail.add(ta.mul(one_minus_two).div(denom).unwrap().mul(m));
        }
        let total = Approx::of_rational(&self.total_mass).unwrap();
        let lower = explicit.add(tail).lo;
        let upper = explicit.add(floor.mul(total)).hi;
        let bound =
            s.r.scale(&((Rational::one() - int(3) * &s.eps) * &self.total_mass));
        let holds = bound.approx().map(|b| b.hi <= lower).unwrap_or(false);
        Ok(IntegralReport {
            explicit,
            tail_lower: tail,
            lower,
            upper,
            bound,
            holds,
        })
    }
}

fn bp_approx(s: &Setup, b: &Breakpoint) -> Result<Approx> {
    match b.approx {
        Some(a) => Ok(a),
        None => {
            let e = s.point(b).enclose_to(64);
            let lo = Approx::of_rational(&e.lo)
                .ok_or_else(|| Error::Inconsistent("breakpoint overflows".into()))?;
            let hi = Approx::of_rational(&e.hi)
                .ok_or_else(|| Error::Inconsistent("breakpoint overflows".into()))?;
            Ok(Approx {
                lo: lo.lo,
                hi: hi.hi,
            })
        }
    }
}

fn approx_mid(s: &Setup, b: &Breakpoint) -> f64 {
    match b.approx {
        Some(a) => a.mid(),
        None => s.point(b).to_f64(),
    }
}

/// Side conditions on `lambda` beyond the profile inequality.
#[derive(Clone, Debug, Default)]
pub struct LambdaConstraints {
    /// Require `lambda < x_1`.
    pub below_min_atom: bool,
    /// Require `|U_lambda| > u_min`.
    pub u_min: Option<Point>,
    /// Require `|V_lambda| < v_max`.
    pub v_max: Option<Point>,
}

impl LambdaConstraints {
    /// `lambda < x_1`, `|V_lambda| < 2 x_l`, `|U_lambda| > eps x_l / 2`.
    pub fn witness_pair(mu: &DiscreteMeasure, eps: &Rational) -> Self {
        let x_l = mu.max_atom();
        LambdaConstraints {
            below_min_atom: true,
            u_min: Some(x_l.scale(&(eps / int(2)))),
            v_max: Some(x_l.scale(&int(2))),
        }
    }

    fn is_empty(&self) -> bool {
        !self.below_min_atom && self.u_min.is_none() && self.v_max.is_none()
    }
}

#[derive(Clone, Debug, Default)]
pub struct FindOptions {
    pub profile: ProfileOptions,
    pub constraints: LambdaConstraints,
    /// How many times `lambda_floor` may be divided by 10 when nothing qualifies.
    pub floor_lowerings: u32,
}

impl FindOptions {
    pub fn new(constraints: LambdaConstraints) -> Self {
        FindOptions {
            profile: ProfileOptions::default(),
            constraints,
            floor_lowerings: 3,
        }
    }
}

#[derive(Clone, Debug)]
pub struct LambdaChoice {
    pub lambda: Rational,
    /// Piece of the profile containing `lambda`.
    pub piece_lo: Point,
    pub piece_hi: Point,
    pub value: Rational,
    /// `(1 - 3 eps) |mu|`.
    pub threshold: Rational,
    pub r: Point,
    pub floor: Point,
    pub u_measure: Point,
    pub v_measure: Point,
    pub pieces_scanned: usize,
    pub floor_lowerings: u32,
}

/// Picks `lambda` from a piece of maximal value exceeding `(1 - 3 eps)|mu|`
/// that also satisfies the constraints; ties go to the largest `lambda`.
/// The returned value is the piece midpoint when rational, otherwise a short
/// rational certified strictly inside the piece.
pub fn find_lambda(
    mu: &DiscreteMeasure,
    eps: &Rational,
    delta: &Rational,
    opts: &FindOptions,
) -> Result<LambdaChoice> {
    let setup = Setup::new(mu, eps, delta, &opts.profile.floor_ratio)?;
    let mut floor = setup.floor.clone();
    let threshold = (Rational::one() - int(3) * eps) * mu.total_mass();
    let total = mu.total_mass().clone();
    let x_l = mu.max_atom().clone();
    let x_1 = mu.min_atom().clone();
    let mut walker = Walker::new(&setup)?;
    let mut best: Option<LambdaChoice> = None;
    let mut best_value = Rational::zero();
    let mut scanned = 0usize;
    let mut lowerings = 0u32;
    let mut rejected = 0usize;
    let mut qualifying = 0usize;
    loop {
        let (top, bottom, value) = walker.next_piece()?;
        scanned += 1;
        if value > threshold && (best.is_none() || value > best_value) {
            qualifying += 1;
            let lo = setup.point(&bottom);
            let hi = setup.point(&top);
            let lambda = interior_rational(&lo, &hi)?;
            let (u, v) = window_measures(&lambda, eps, &x_l)?;
            let lam = Point::rational(mu.basis(), lambda.clone());
            let ok = (!opts.constraints.below_min_atom || lam.try_cmp(&x_1)? == Ordering::Less)
                && match &opts.constraints.u_min {
                    Some(b) => u.try_cmp(b)? == Ordering::Greater,
                    None => true,
                }
                && match &opts.constraints.v_max {
                    Some(b) => v.try_cmp(b)? == Ordering::Less,
                    None => true,
                };
            if ok {
                best_value = value.clone();
                best = Some(LambdaChoice {
                    lambda,
                    piece_lo: lo,
                    piece_hi: hi,
                    value: value.clone(),
                    threshold: threshold.clone(),
                    r: setup.r.clone(),
                    floor: floor.clone(),
                    u_measure: u,
                    v_measure: v,
                    pieces_scanned: 0,
                    floor_lowerings: 0,
                });
                if value == total {
                    break;
                }
            } else {
                rejected += 1;
            }
        }
        if scanned >= opts.profile.piece_cap {
            return Err(Error::PieceCap {
                cap: opts.profile.piece_cap,
            });
        }
        if setup.cmp_point(&bottom, &floor)? != Ordering::Greater {
            if best.is_some() || lowerings >= opts.floor_lowerings {
                break;
            }
            lowerings += 1;
            floor = floor.scale(&Rational::new(1.into(), 10.into()));
        }
    }
    match best {
        Some(mut c) => {
            c.pieces_scanned = scanned;
            c.floor_lowerings = lowerings;
            c.floor = floor.clone();
            Ok(c)
        }
        None => Err(Error::LambdaNotFound(format!(
            "{scanned} pieces scanned down to {}, {qualifying} exceeded (1-3eps)|mu| = {}{}",
            floor.display_decimal(10),
            format_rational(&threshold),
            if opts.constraints.is_empty() {
                String::new()
            } else {
                format!(", {rejected} rejected by constraints")
            }
        ))),
    }
}

/// Rational strictly inside `(lo, hi)`: the midpoint when rational, else a
/// short rational near it.
pub fn interior_rational(lo: &Point, hi: &Point) -> Result<Rational> {
    let mid = (lo + hi).scale(&Rational::new(1.into(), 2.into()));
    if let Some(q) = mid.as_rational() {
        return Ok(q.clone());
    }
    let len = (hi - lo).enclose_to(64);
    let target = &len.lo / int(8);
    if !target.is_positive() {
        return Err(Error::Inconsistent("piece has no certified length".into()));
    }
    let mut bits = 64;
    let cap = mid.basis().precision_cap();
    loop {
        let e: Enclosure = mid.enclose(bits);
        if e.width() < target {
            let q = simplest_between(&(&e.lo - &target), &(&e.hi + &target));
            let qp = Point::rational(mid.basis(), q.clone());
            if lo.try_cmp(&qp)? == Ordering::Less && qp.try_cmp(hi)? == Ordering::Less {
                return Ok(q);
            }
            return Err(Error::Inconsistent(
                "interior rational left the piece".into(),
            ));
        }
        if bits >= cap {
            return Err(Error::PrecisionExhausted {
                value: mid.to_string(),
                bits: cap,
            });
        }
        bits = (bits * 2).min(cap);
    }
}

fn check_window_args(lambda: &Rational, eps: &Rational) -> Result<()> {
    if !lambda.is_positive() {
        return Err(Error::InvalidParameter("lambda must be positive".into()));
    }
    if !eps.is_positive() || *eps >= Rational::new(1.into(), 3.into()) {
        return Err(Error::InvalidParameter(format!(
            "eps = {} must lie in (0, 1/3)",
            format_rational(eps)
        )));
    }
    Ok(())
}

/// `(|U_lambda|, |V_lambda|)` in closed form. With `x_l / lambda = n + f`,
/// `|U| = lambda (n eps + max(0, f - 1 + eps))` and
/// `|V| = lambda (2 n (1 - eps) + max(0, f - eps) + min(f, 1 - eps))`.
pub fn window_measures(lambda: &Rational, eps: &Rational, x_l: &Point) -> Result<(Point, Point)> {
    check_window_args(lambda, eps)?;
    let basis = x_l.basis();
    let u = x_l.scale(&lambda.recip());
    let n = Rational::from_integer(u.floor()?);
    let f = u.add_rational(&-n.clone());
    let one_minus = Rational::one() - eps;
    let zero = Point::zero(basis);
    let max0 = |p: Point| -> Result<Point> {
        Ok(if p.sign()? == Ordering::Greater {
            p
        } else {
            zero.clone()
        })
    };
    let u_part = max0(f.add_rational(&-one_minus.clone()))?.add_rational(&(&n * eps));
    let cap = Point::rational(basis, one_minus.clone());
    let min_f = if f.try_cmp(&cap)? == Ordering::Less {
        f.clone()
    } else {
        cap
    };
    let v_part =
        (&max0(f.add_rational(&-eps.clone()))? + &min_f).add_rational(&(int(2) * &n * &one_minus));
    Ok((u_part.scale(lambda), v_part.scale(lambda)))
}

/// `U_lambda = {t in (-x_l, 0): {t/lambda} < eps}` and
/// `V_lambda = {t in (-x_l, x_l): {t/lambda} > eps}`, as open-interval unions.
pub fn frac_window_sets(
    lambda: &Rational,
    eps: &Rational,
    x_l: &Point,
) -> Result<(IntervalSet, IntervalSet)> {
    check_window_args(lambda, eps)?;
    let basis = x_l.basis();
    let neg = -x_l;
    let zero = Point::zero(basis);
    let u = x_l.scale(&lambda.recip());
    let n = u
        .floor()?
        .to_i64()
        .ok_or_else(|| Error::InvalidParameter("lambda too small for explicit windows".into()))?;
    let at = |j: i64, c: &Rational| Point::rational(basis, lambda * (int(j) + c));
    let zero_r = Rational::zero();
    let one = Rational::one();
    let mut u_raw = Vec::new();
    let mut v_raw = Vec::new();
    for j in -(n + 1)..=n {
        let (lo, hi) = (at(j, &zero_r), at(j, eps));
        if j < 0 {
            push_clipped(&mut u_raw, lo, hi, &neg, &zero)?;
        }
        push_clipped(&mut v_raw, at(j, eps), at(j, &one), &neg, x_l)?;
    }
    Ok((
        IntervalSet::canonicalize(basis, u_raw)?,
        IntervalSet::canonicalize(basis, v_raw)?,
    ))
}

fn push_clipped(
    out: &mut Vec<(Point, Point)>,
    lo: Point,
    hi: Point,
    a: &Point,
    b: &Point,
) -> Result<()> {
    let lo = if lo.try_cmp(a)? == Ordering::Less {
        a.clone()
    } else {
        lo
    };
    let hi = if hi.try_cmp(b)? == Ordering::Greater {
        b.clone()
    } else {
        hi
    };
    if lo.try_cmp(&hi)? == Ordering::Less {
        out.push((lo, hi));
    }
    Ok(())
}

/// Direct re-check of the chosen `lambda`: for sample points `x` in
/// `U_lambda`, `sum_i m_i [x + x_i in V_lambda] > (1 - 3 eps)|mu|`.
#[derive(Clone, Debug)]
pub struct LambdaRecheck {
    pub checked: usize,
    pub min_value: Rational,
    pub threshold: Rational,
    pub holds: bool,
    pub failure: Option<Point>,
}

pub fn recheck_lambda(
    mu: &DiscreteMeasure,
    eps: &Rational,
    lambda: &Rational,
    max_samples: usize,
) -> Result<LambdaRecheck> {
    let x_l = mu.max_atom();
    let (u_set, v_set) = frac_window_sets(lambda, eps, x_l)?;
    let threshold = (Rational::one() - int(3) * eps) * mu.total_mass();
    let n = u_set.len();
    let stride = n.div_ceil(max_samples.max(1)).max(1);
    let fractions = [
        Rational::new(1.into(), 4.into()),
        Rational::new(1.into(), 2.into()),
        Rational::new(3.into(), 4.into()),
    ];
    let mut min_value = mu.total_mass().clone();
    let mut checked = 0;
    for iv in u_set.intervals().iter().step_by(stride) {
        for s in &fractions {
            let x = (&iv.lo + &(&iv.hi - &iv.lo).scale(s)).clone();
            let mut value = Rational::zero();
            for (t, m) in mu.atoms().iter().zip(mu.masses()) {
                if v_set.contains(&(&x + t))? {
                    value += m;
                }
            }
            checked += 1;
            if value < min_value {
                min_value = value.clone();
            }
            if value <= threshold {
                return Ok(LambdaRecheck {
                    checked,
                    min_value,
                    threshold,
                    holds: false,
                    failure: Some(x),
                });
            }
        }
    }
    Ok(LambdaRecheck {
        checked,
        min_value,
        threshold,
        holds: checked > 0,
        failure: None,
    })
}

/// Serializable summary of a choice.
#[derive(Clone, Debug, Serialize)]
pub struct LambdaSummary {
    pub lambda: String,
    pub value: String,
    pub threshold: String,
    pub piece: [CertifiedRepr; 2],
    pub r: CertifiedRepr,
    pub floor: CertifiedRepr,
    pub u_measure: CertifiedRepr,
    pub v_measure: CertifiedRepr,
    pub pieces_scanned: usize,
    pub floor_lowerings: u32,
}

impl From<&LambdaChoice> for LambdaSummary {
    fn from(c: &LambdaChoice) -> Self {
        LambdaSummary {
            lambda: format_rational(&c.lambda),
            value: format_rational(&c.value),
            threshold: format_rational(&c.threshold),
            piece: [
                CertifiedRepr::from(&c.piece_lo),
                CertifiedRepr::from(&c.piece_hi),
            ],
            r: CertifiedRepr::from(&c.r),
            floor: CertifiedRepr::from(&c.floor),
            u_measure: CertifiedRepr::from(&c.u_measure),
            v_measure: CertifiedRepr::from(&c.v_measure),
            pieces_scanned: c.pieces_scanned,
            floor_lowerings: c.floor_lowerings,
        }
    }
}
