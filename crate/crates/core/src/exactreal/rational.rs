use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn rat(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `p/q`, an integer, or a plain decimal literal such as `-0.125` or `1e-3`.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let s = text.trim();
    let err = || Error::ParseRational(text.to_string());
    if s.is_empty() {
        return Err(err());
    }
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| err())?;
        let q: BigInt = q.trim().parse().map_err(|_| err())?;
        if q.is_zero() {
            return Err(err());
        }
        return Ok(Rational::new(p, q));
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().map_err(|_| err())?),
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (whole, frac) = digits.split_once('.').unwrap_or((digits, ""));
    if whole.is_empty() && frac.is_empty() {
        return Err(err());
    }
    if !whole
        .chars()
        .chain(frac.chars())
        .all(|c| c.is_ascii_digit())
    {
        return Err(err());
    }
    let all: BigInt = format!("0{whole}{frac}").parse().map_err(|_| err())?;
    let scale = exponent - frac.len() as i32;
    let ten = BigInt::from(10);
    let mut value = if scale >= 0 {
        Rational::from_integer(all * num_traits::pow(ten, scale as usize))
    } else {
        Rational::new(all, num_traits::pow(ten, (-scale) as usize))
    };
    if negative {
        value = -value;
    }
    Ok(value)
}

/// Canonical `p/q` form (`p` alone when the denominator is 1).
pub fn format_rational(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn floor(q: &Rational) -> BigInt {
    q.numer().div_floor(q.denom())
}

pub fn ceil(q: &Rational) -> BigInt {
    -((-q.numer()).div_floor(q.denom()))
}

pub fn pow2(bits: u32) -> BigInt {
    BigInt::one() << bits as usize
}

/// Decimal rendering of `q` with `digits` fractional digits, rounded toward
/// -inf (`up = false`) or +inf (`up = true`).
pub fn format_decimal(q: &Rational, digits: usize, up: bool) -> String {
    let scale = num_traits::pow(BigInt::from(10), digits);
    let scaled = q * Rational::from_integer(scale.clone());
    let n = if up { ceil(&scaled) } else { floor(&scaled) };
    let negative = n.sign() == Sign::Minus;
    let abs = n.abs();
    let (whole, frac) = abs.div_rem(&scale);
    let sign = if negative { "-" } else { "" };
    if digits == 0 {
        return format!("{sign}{whole}");
    }
    format!(
        "{sign}{whole}.{:0>width$}",
        frac.to_string(),
        width = digits
    )
}

/// Closed f64 interval with outward rounding; the cheap first stage of
/// certified evaluation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Approx {
    pub lo: f64,
    pub hi: f64,
}

impl Approx {
    pub fn point(v: f64) -> Self {
        Approx { lo: v, hi: v }
    }

    /// Encloses a rational; `None` when it overflows f64.
    pub fn of_rational(q: &Rational) -> Option<Self> {
        if q.is_zero() {
            return Some(Approx::point(0.0));
        }
        let v = q.to_f64()?;
        if !v.is_finite() {
            return None;
        }
        if v == 0.0 {
            return Some(if q.is_positive() {
                Approx {
                    lo: 0.0,
                    hi: f64::MIN_POSITIVE,
                }
            } else {
                Approx {
                    lo: -f64::MIN_POSITIVE,
                    hi: 0.0,
                }
            });
        }
        Some(Approx {
            lo: v.next_down(),
            hi: v.next_up(),
        })
    }

    pub fn add(self, o: Approx) -> Approx {
        Approx {
            lo: (self.lo + o.lo).next_down(),
            hi: (self.hi + o.hi).next_up(),
        }
    }

    pub fn neg(self) -> Approx {
        Approx {
            lo: -self.hi,
            hi: -self.lo,
        }
    }

    pub fn sub(self, o: Approx) -> Approx {
        self.add(o.neg())
    }

    pub fn mul(self, o: Approx) -> Approx {
        let c = [
            self.lo * o.lo,
            self.lo * o.hi,
            self.hi * o.lo,
            self.hi * o.hi,
        ];
        let lo = c.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = c.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Approx {
            lo: lo.next_down(),
            hi: hi.next_up(),
        }
    }

    /// Division by an interval that excludes zero.
    pub fn div(self, o: Approx) -> Option<Approx> {
        if o.lo <= 0.0 && o.hi >= 0.0 {
            return None;
        }
        let c = [
            self.lo / o.lo,
            self.lo / o.hi,
            self.hi / o.lo,
            self.hi / o.hi,
        ];
        let lo = c.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = c.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Some(Approx {
            lo: lo.next_down(),
            hi: hi.next_up(),
        })
    }

    pub fn is_finite(&self) -> bool {
        self.lo.is_finite() && self.hi.is_finite()
    }

    pub fn mid(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    /// Certified sign, if the interval excludes zero.
    pub fn sign(&self) -> Option<std::cmp::Ordering> {
        if !self.is_finite() {
            None
        } else if self.lo > 0.0 {
            Some(std::cmp::Ordering::Greater)
        } else if self.hi < 0.0 {
            Some(std::cmp::Ordering::Less)
        } else {
            None
        }
    }
}

/// Closed rational interval, the arbitrary-precision stage of certified
/// evaluation.
#[derive(Clone, Debug, PartialEq)]
pub struct Enclosure {
    pub lo: Rational,
    pub hi: Rational,
}

impl Enclosure {
    pub fn exact(q: Rational) -> Self {
        Enclosure {
            lo: q.clone(),
            hi: q,
        }
    }

    pub fn add(&self, o: &Enclosure) -> Enclosure {
        Enclosure {
            lo: &self.lo + &o.lo,
            hi: &self.hi + &o.hi,
        }
    }

    pub fn sub(&self, o: &Enclosure) -> Enclosure {
        Enclosure {
            lo: &self.lo - &o.hi,
            hi: &self.hi - &o.lo,
        }
    }

    pub fn scale(&self, c: &Rational) -> Enclosure {
        let a = &self.lo * c;
        let b = &self.hi * c;
        if c.is_negative() {
            Enclosure { lo: b, hi: a }
        } else {
            Enclosure { lo: a, hi: b }
        }
    }

    pub fn mul(&self, o: &Enclosure) -> Enclosure {
        let c = [
            &self.lo * &o.lo,
            &self.lo * &o.hi,
            &self.hi * &o.lo,
            &self.hi * &o.hi,
        ];
        let lo = c.iter().min().unwrap().clone();
        let hi = c.iter().max().unwrap().clone();
        Enclosure { lo, hi }
    }

    pub fn recip(&self) -> Option<Enclosure> {
        if !self.lo.is_positive() && !self.hi.is_negative() {
            return None;
        }
        Some(Enclosure {
            lo: self.hi.recip(),
            hi: self.lo.recip(),
        })
    }

    pub fn div(&self, o: &Enclosure) -> Option<Enclosure> {
        Some(self.mul(&o.recip()?))
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn mid(&self) -> Rational {
        (&self.lo + &self.hi) / int(2)
    }

    pub fn sign(&self) -> Option<std::cmp::Ordering> {
        if self.lo.is_positive() {
            Some(std::cmp::Ordering::Greater)
        } else if self.hi.is_negative() {
            Some(std::cmp::Ordering::Less)
        } else if self.lo.is_zero() && self.hi.is_zero() {
            Some(std::cmp::Ordering::Equal)
        } else {
            None
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.mid().to_f64().unwrap_or(f64::NAN)
    }

    /// Rounds the endpoints outward to `bits` binary digits, keeping the
    /// enclosure while bounding denominator growth.
    pub fn round_out(&self, bits: u32) -> Enclosure {
        let scale = Rational::from_integer(pow2(bits));
        let lo = floor(&(&self.lo * &scale));
        let hi = ceil(&(&self.hi * &scale));
        Enclosure {
            lo: Rational::new(lo, pow2(bits)),
            hi: Rational::new(hi, pow2(bits)),
        }
    }

    pub fn contains(&self, q: &Rational) -> bool {
        &self.lo <= q && q <= &self.hi
    }
}

/// The rational with the smallest denominator strictly inside `(lo, hi)`.
pub fn simplest_between(lo: &Rational, hi: &Rational) -> Rational {
    assert!(lo < hi, "empty interval");
    // Stern-Brocot descent on the continued fraction expansions.
    let fl = floor(lo);
    let candidate = Rational::from_integer(&fl + 1);
    if &candidate < hi {
        // An integer lies strictly inside unless lo is itself the integer below
        // a tight hi; prefer the smallest-magnitude one.
        if lo.is_negative() && hi.is_positive() {
            return Rational::zero();
        }
        if hi.is_negative() || hi.is_zero() {
            let top = ceil(hi) - 1;
            return Rational::from_integer(top);
        }
        return candidate;
    }
    // lo and hi share the integer part fl (hi may equal fl + 1).
    let base = Rational::from_integer(fl.clone());
    let a = lo - &base;
    let b = hi - &base;
    // 0 <= a < b <= 1: recurse on reciprocals.
    let inner = if a.is_zero() {
        // (0, b): pick 1/n with n the smallest integer > 1/b.
        let n = floor(&b.recip()) + 1;
        Rational::new(BigInt::one(), n)
    } else {
        simplest_between(&b.recip(), &a.recip()).recip()
    };
    base + inner
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_forms() {
        assert_eq!(parse_rational("3/6").unwrap(), rat(1, 2));
        assert_eq!(parse_rational("-0.125").unwrap(), rat(-1, 8));
        assert_eq!(parse_rational("1e-3").unwrap(), rat(1, 1000));
        assert_eq!(parse_rational("7").unwrap(), int(7));
        assert_eq!(parse_rational(".5").unwrap(), rat(1, 2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational("").is_err());
    }

    #[test]
    fn decimal_rounding_direction() {
        let third = rat(1, 3);
        assert_eq!(format_decimal(&third, 4, false), "0.3333");
        assert_eq!(format_decimal(&third, 4, true), "0.3334");
        assert_eq!(format_decimal(&-third, 4, false), "-0.3334");
        assert_eq!(format_rational(&rat(4, 2)), "2");
    }

    #[test]
    fn simplest_rational_inside() {
        assert_eq!(simplest_between(&rat(1, 27), &rat(1, 25)), rat(1, 26));
        assert_eq!(simplest_between(&rat(1, 3), &rat(1, 2)), rat(2, 5));
        assert_eq!(simplest_between(&rat(-1, 2), &rat(1, 2)), int(0));
        assert_eq!(simplest_between(&rat(3, 2), &rat(7, 2)), int(2));
        assert_eq!(simplest_between(&rat(-7, 2), &rat(-3, 2)), int(-2));
        let q = simplest_between(&rat(314, 100), &rat(315, 100));
        assert!(q > rat(314, 100) && q < rat(315, 100));
    }
}
