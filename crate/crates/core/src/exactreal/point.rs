use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Neg, Sub};
use std::sync::{Arc, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::basis::GeneratorBasis;
use super::rational::{
    floor, format_decimal, format_rational, int, parse_rational, Approx, Enclosure, Rational,
};
use crate::error::{Error, Result};

/// An element `c_0 + c_1 g_1 + ... + c_d g_d` of the rational module spanned
/// by `1` and the basis generators. Equality is coefficient equality.
#[derive(Clone)]
pub struct Point {
    basis: Arc<GeneratorBasis>,
    coeffs: Vec<Rational>,
    approx: OnceLock<Option<Approx>>,
}

impl Point {
    pub fn from_coeffs(basis: &Arc<GeneratorBasis>, coeffs: Vec<Rational>) -> Result<Point> {
        if coeffs.len() != basis.dim() {
            return Err(Error::DimensionMismatch {
                expected: basis.dim(),
                got: coeffs.len(),
            });
        }
        Ok(Point::raw(basis.clone(), coeffs))
    }

    pub(crate) fn raw(basis: Arc<GeneratorBasis>, coeffs: Vec<Rational>) -> Point {
        Point {
            basis,
            coeffs,
            approx: OnceLock::new(),
        }
    }

    pub fn parse_coeffs<S: AsRef<str>>(basis: &Arc<GeneratorBasis>, coeffs: &[S]) -> Result<Point> {
        let coeffs = coeffs
            .iter()
            .map(|s| parse_rational(s.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        Point::from_coeffs(basis, coeffs)
    }

    pub fn zero(basis: &Arc<GeneratorBasis>) -> Point {
        Point::raw(basis.clone(), vec![Rational::zero(); basis.dim()])
    }

    pub fn rational(basis: &Arc<GeneratorBasis>, q: Rational) -> Point {
        let mut coeffs = vec![Rational::zero(); basis.dim()];
        coeffs[0] = q;
        Point::raw(basis.clone(), coeffs)
    }

    /// `c * g_index` where `index` counts generators from 1.
    pub fn generator(basis: &Arc<GeneratorBasis>, index: usize, c: Rational) -> Point {
        assert!(
            index >= 1 && index < basis.dim(),
            "generator index out of range"
        );
        let mut coeffs = vec![Rational::zero(); basis.dim()];
        coeffs[index] = c;
        Point::raw(basis.clone(), coeffs)
    }

    pub fn basis(&self) -> &Arc<GeneratorBasis> {
        &self.basis
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(format_rational).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        self.coeffs[1..]
            .iter()
            .all(Zero::is_zero)
            .then(|| &self.coeffs[0])
    }

    fn check_basis(&self, other: &Point) -> Result<()> {
        if self.basis.same_as(&other.basis) {
            Ok(())
        } else {
            Err(Error::BasisMismatch)
        }
    }

    fn zip_with(&self, other: &Point, f: impl Fn(&Rational, &Rational) -> Rational) -> Point {
        assert!(
            self.basis.same_as(&other.basis),
            "points over different bases"
        );
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| f(a, b))
            .collect();
        Point::raw(self.basis.clone(), coeffs)
    }

    pub fn try_add(&self, other: &Point) -> Result<Point> {
        self.check_basis(other)?;
        Ok(self.zip_with(other, |a, b| a + b))
    }

    pub fn try_sub(&self, other: &Point) -> Result<Point> {
        self.check_basis(other)?;
        Ok(self.zip_with(other, |a, b| a - b))
    }

    pub fn scale(&self, c: &Rational) -> Point {
        Point::raw(
            self.basis.clone(),
            self.coeffs.iter().map(|a| a * c).collect(),
        )
    }

    pub fn add_rational(&self, q: &Rational) -> Point {
        let mut coeffs = self.coeffs.clone();
        coeffs[0] += q;
        Point::raw(self.basis.clone(), coeffs)
    }

    /// Certified f64 enclosure, cached; `None` if a coefficient overflows f64.
    pub fn approx(&self) -> Option<Approx> {
        *self.approx.get_or_init(|| {
            let mut acc = Approx::of_rational(&self.coeffs[0])?;
            for (c, g) in self.coeffs[1..].iter().zip(self.basis.generators()) {
                if c.is_zero() {
                    continue;
                }
                acc = acc.add(Approx::of_rational(c)?.mul(g.approx()));
            }
            acc.is_finite().then_some(acc)
        })
    }

    /// Rational enclosure using generator enclosures at `bits` bits.
    pub fn enclose(&self, bits: u32) -> Enclosure {
        let mut acc = Enclosure::exact(self.coeffs[0].clone());
        for (c, g) in self.coeffs[1..].iter().zip(self.basis.generators()) {
            if c.is_zero() {
                continue;
            }
            acc = acc.add(&g.enclose(bits).scale(c));
        }
        acc
    }

    /// Enclosure whose width is at most `2^-bits` when the generators allow it.
    pub fn enclose_to(&self, bits: u32) -> Enclosure {
        let target = Rational::new(BigInt::one(), super::rational::pow2(bits));
        let mut b = bits.max(32) + 8;
        loop {
            let e = self.enclose(b);
            if e.width() <= target || b >= self.basis.precision_cap() {
                return e;
            }
            b = (b * 2).min(self.basis.precision_cap());
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self.approx() {
            Some(a) => a.mid(),
            None => self.enclose(64).to_f64(),
        }
    }

    /// Certified sign, refining precision up to the basis cap.
    pub fn sign(&self) -> Result<Ordering> {
        if let Some(q) = self.as_rational() {
            return Ok(q.cmp(&Rational::zero()));
        }
        if let Some(s) = self.approx().and_then(|a| a.sign()) {
            return Ok(s);
        }
        let cap = self.basis.precision_cap();
        let mut bits = 64;
        loop {
            if let Some(s) = self.enclose(bits).sign() {
                return Ok(s);
            }
            if bits >= cap {
                return Err(Error::PrecisionExhausted {
                    value: self.to_string(),
                    bits: cap,
                });
            }
            bits = (bits * 2).min(cap);
        }
    }

    /// Total order on the reals. Equal coefficient vectors compare equal;
    /// otherwise the sign of the difference is certified numerically.
    pub fn try_cmp(&self, other: &Point) -> Result<Ordering> {
        self.check_basis(other)?;
        if self.coeffs == other.coeffs {
            return Ok(Ordering::Equal);
        }
        if let (Some(a), Some(b)) = (self.approx(), other.approx()) {
            if a.hi < b.lo {
                return Ok(Ordering::Less);
            }
            if a.lo > b.hi {
                return Ok(Ordering::Greater);
            }
        }
        self.zip_with(other, |a, b| a - b).sign()
    }

    pub fn lt(&self, other: &Point) -> Result<bool> {
        Ok(self.try_cmp(other)? == Ordering::Less)
    }

    pub fn abs(&self) -> Result<Point> {
        Ok(if self.sign()? == Ordering::Less {
            -self
        } else {
            self.clone()
        })
    }

    /// `floor` of the value.
    pub fn floor(&self) -> Result<BigInt> {
        if let Some(q) = self.as_rational() {
            return Ok(floor(q));
        }
        let guess = match self.approx() {
            Some(a) if a.mid().abs() < 1e15 => BigInt::from(a.mid().floor() as i64),
            _ => floor(&self.enclose(64).mid()),
        };
        // Adjust so that guess <= self < guess + 1.
        let mut k = guess;
        loop {
            let below = self.add_rational(&-Rational::from_integer(k.clone()));
            match below.sign()? {
                Ordering::Less => k -= 1,
                _ => {
                    let above = below.add_rational(&-int(1));
                    if above.sign()? != Ordering::Less {
                        k += 1;
                    } else {
                        return Ok(k);
                    }
                }
            }
        }
    }

    /// Representative in `[0, 1)`.
    pub fn frac(&self) -> Result<Point> {
        let k = self.floor()?;
        Ok(self.add_rational(&-Rational::from_integer(k)))
    }

    /// Value rounded to `digits` decimal places.
    pub fn display_decimal(&self, digits: usize) -> String {
        let e = self.enclose_to((digits as f64 * 3.33) as u32 + 8);
        let half = Rational::new(
            BigInt::from(5),
            num_traits::pow(BigInt::from(10), digits + 1),
        );
        format_decimal(&(e.mid() + half), digits, false)
    }
}

impl PartialEq for Point {
    fn eq(&self, other: &Point) -> bool {
        self.basis.same_as(&other.basis) && self.coeffs == other.coeffs
    }
}

impl Eq for Point {}

impl Hash for Point {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.coeffs.hash(state);
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Point({})", self)
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        let mut term =
            |f: &mut fmt::Formatter<'_>, c: &Rational, g: Option<String>| -> fmt::Result {
                if c.is_zero() {
                    return Ok(());
                }
                let sign = if c.is_negative() { "-" } else { "+" };
                if first {
                    if c.is_negative() {
                        write!(f, "-")?;
                    }
                } else {
                    write!(f, " {sign} ")?;
                }
                first = false;
                let a = c.abs();
                match g {
                    None => write!(f, "{}", format_rational(&a)),
                    Some(g) if a.is_one() => write!(f, "{g}"),
                    Some(g) => write!(f, "{}*{g}", format_rational(&a)),
                }
            };
        term(f, &self.coeffs[0], None)?;
        for (c, g) in self.coeffs[1..].iter().zip(self.basis.generators()) {
            term(f, c, Some(g.label()))?;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl Add for &Point {
    type Output = Point;
    fn add(self, rhs: &Point) -> Point {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl Sub for &Point {
    type Output = Point;
    fn sub(self, rhs: &Point) -> Point {
        self.zip_with(rhs, |a, b| a - b)
    }
}

impl Neg for &Point {
    type Output = Point;
    fn neg(self) -> Point {
        Point::raw(self.basis.clone(), self.coeffs.iter().map(|a| -a).collect())
    }
}

/// Sorts points ascending by certified comparison.
pub fn sort_points(points: &mut [Point]) -> Result<()> {
    let mut failure = None;
    points.sort_by(|a, b| match a.try_cmp(b) {
        Ok(o) => o,
        Err(e) => {
            failure.get_or_insert(e);
            Ordering::Equal
        }
    });
    match failure {
        Some(e) => Err(e),
        None => Ok(()),
    }
}

/// Sorts ascending and removes exact duplicates.
pub fn sort_dedup(points: &mut Vec<Point>) -> Result<()> {
    sort_points(points)?;
    points.dedup();
    Ok(())
}

/// Smallest and largest of a nonempty slice.
pub fn max_point(points: &[Point]) -> Result<Point> {
    let mut it = points.iter();
    let mut best = it.next().ok_or(Error::EmptySet)?.clone();
    for p in it {
        if p.try_cmp(&best)? == Ordering::Greater {
            best = p.clone();
        }
    }
    Ok(best)
}

/// `max |x|` over a nonempty set.
pub fn max_abs(points: &[Point]) -> Result<Point> {
    let abs = points.iter().map(Point::abs).collect::<Result<Vec<_>>>()?;
    max_point(&abs)
}

pub fn min_point(points: &[Point]) -> Result<Point> {
    let mut it = points.iter();
    let mut best = it.next().ok_or(Error::EmptySet)?.clone();
    for p in it {
        if p.try_cmp(&best)? == Ordering::Less {
            best = p.clone();
        }
    }
    Ok(best)
}

/// `d(A)`: the minimal distance between distinct points, or `|x|` for a
/// singleton. Duplicates collapse first.
pub fn min_gap(points: &[Point]) -> Result<Point> {
    let mut sorted = points.to_vec();
    if sorted.is_empty() {
        return Err(Error::EmptySet);
    }
    sort_dedup(&mut sorted)?;
    if sorted.len() == 1 {
        if sorted[0].is_zero() {
            return Err(Error::ZeroSingleton);
        }
        return sorted[0].abs();
    }
    let gaps: Vec<Point> = sorted.windows(2).map(|w| &w[1] - &w[0]).collect();
    min_point(&gaps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactreal::rational::rat;

    fn surds() -> Arc<GeneratorBasis> {
        GeneratorBasis::surds(&[2, 3]).unwrap()
    }

    #[test]
    fn equal_coefficients_compare_equal() {
        let b = surds();
        let a = Point::generator(&b, 1, rat(1, 2));
        assert_eq!(a.try_cmp(&a.clone()).unwrap(), Ordering::Equal);
        let third = Point::rational(&b, rat(1, 3));
        let same = Point::parse_coeffs(&b, &["1/3", "0", "0/5"]).unwrap();
        assert_eq!(third.try_cmp(&same).unwrap(), Ordering::Equal);
        assert_eq!(third, same);
    }

    #[test]
    fn surd_order() {
        let b = surds();
        let s2 = Point::generator(&b, 1, rat(1, 8));
        let s3 = Point::generator(&b, 2, rat(1, 4));
        assert_eq!(s2.try_cmp(&s3).unwrap(), Ordering::Less);
        assert_eq!(s3.try_cmp(&s2).unwrap(), Ordering::Greater);
    }

    #[test]
    fn tight_comparison_needs_refinement() {
        // 99/70 approximates sqrt(2) to ~7e-5; 665857/470832 to ~1.6e-12.
        let b = surds();
        let s2 = Point::generator(&b, 1, int(1));
        let q = Point::rational(&b, rat(665857, 470832));
        assert_eq!(s2.try_cmp(&q).unwrap(), Ordering::Less);
        // sqrt(2) - 1 vs its 40th convergent: gap ~1e-31, beyond f64.
        let (mut p, mut qd) = (BigInt::from(1), BigInt::from(1));
        for _ in 0..40 {
            let np = &p + 2 * &qd;
            let nq = &p + &qd;
            p = np;
            qd = nq;
        }
        let conv = Point::rational(&b, Rational::new(p, qd));
        assert_ne!(s2.try_cmp(&conv).unwrap(), Ordering::Equal);
    }

    #[test]
    fn declared_precision_exhausts() {
        let b = GeneratorBasis::parse(&["dec:1.5@20"], 256).unwrap();
        let g = Point::generator(&b, 1, int(1));
        let near = Point::rational(&b, rat(3, 2));
        assert!(matches!(
            g.try_cmp(&near),
            Err(Error::PrecisionExhausted { .. })
        ));
        let far = Point::rational(&b, int(2));
        assert_eq!(g.try_cmp(&far).unwrap(), Ordering::Less);
    }

    #[test]
    fn basis_mismatch_rejected() {
        let a = Point::rational(&surds(), int(1));
        let c = Point::rational(&GeneratorBasis::surds(&[5]).unwrap(), int(1));
        assert!(matches!(a.try_cmp(&c), Err(Error::BasisMismatch)));
    }

    #[test]
    fn floor_and_frac() {
        let b = surds();
        let x = Point::generator(&b, 1, int(-3)); // -4.24..
        assert_eq!(x.floor().unwrap(), BigInt::from(-5));
        let f = x.frac().unwrap();
        assert_eq!(f, x.add_rational(&int(5)));
        assert_eq!(
            Point::rational(&b, int(2)).floor().unwrap(),
            BigInt::from(2)
        );
        assert_eq!(
            Point::rational(&b, rat(-1, 2)).floor().unwrap(),
            BigInt::from(-1)
        );
    }

    #[test]
    fn min_gap_cases() {
        let b = GeneratorBasis::rational();
        let pts = |v: &[(i64, i64)]| {
            v.iter()
                .map(|&(p, q)| Point::rational(&b, rat(p, q)))
                .collect::<Vec<_>>()
        };
        assert_eq!(
            min_gap(&pts(&[(1, 4)])).unwrap(),
            Point::rational(&b, rat(1, 4))
        );
        assert_eq!(
            min_gap(&pts(&[(1, 8), (1, 4), (1, 2)])).unwrap(),
            Point::rational(&b, rat(1, 8))
        );
        assert_eq!(
            min_gap(&pts(&[(-1, 3)])).unwrap(),
            Point::rational(&b, rat(1, 3))
        );
        assert_eq!(
            min_gap(&pts(&[(1, 4), (1, 4)])).unwrap(),
            Point::rational(&b, rat(1, 4))
        );
        assert!(matches!(min_gap(&[]), Err(Error::EmptySet)));
        assert!(matches!(
            min_gap(&pts(&[(0, 1)])),
            Err(Error::ZeroSingleton)
        ));

        let s = surds();
        let d = min_gap(&[
            Point::generator(&s, 1, rat(1, 8)),
            Point::generator(&s, 2, rat(1, 4)),
        ])
        .unwrap();
        // sqrt(3)/4 - sqrt(2)/8 = 0.256236010...
        assert_eq!(d.display_decimal(8), "0.25623601");
    }

    #[test]
    fn display() {
        let b = surds();
        let p = Point::parse_coeffs(&b, &["1/3", "-1/8", "1"]).unwrap();
        assert_eq!(p.to_string(), "1/3 - 1/8*sqrt:2 + sqrt:3");
        assert_eq!(Point::zero(&b).to_string(), "0");
    }
}
