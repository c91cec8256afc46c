use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::basis::GeneratorBasis;
use super::point::Point;
use super::rational::{format_decimal, Enclosure};
use crate::error::Result;

/// Wire form of a [`Point`]: its coefficient vector as `"p/q"` strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointRepr {
    pub coeffs: Vec<String>,
}

impl From<&Point> for PointRepr {
    fn from(p: &Point) -> Self {
        PointRepr {
            coeffs: p.coeff_strings(),
        }
    }
}

impl PointRepr {
    pub fn to_point(&self, basis: &Arc<GeneratorBasis>) -> Result<Point> {
        Point::parse_coeffs(basis, &self.coeffs)
    }
}

pub fn points_to_repr(points: &[Point]) -> Vec<PointRepr> {
    points.iter().map(PointRepr::from).collect()
}

pub fn points_from_repr(basis: &Arc<GeneratorBasis>, reprs: &[PointRepr]) -> Result<Vec<Point>> {
    reprs.iter().map(|r| r.to_point(basis)).collect()
}

/// Wire form of a certified number: outward-rounded decimal bounds.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertifiedRepr {
    pub lo: String,
    pub hi: String,
}

pub const REPORT_DIGITS: usize = 12;

impl From<&Enclosure> for CertifiedRepr {
    fn from(e: &Enclosure) -> Self {
        CertifiedRepr {
            lo: format_decimal(&e.lo, REPORT_DIGITS, false),
            hi: format_decimal(&e.hi, REPORT_DIGITS, true),
        }
    }
}

impl From<&Point> for CertifiedRepr {
    fn from(p: &Point) -> Self {
        CertifiedRepr::from(&p.enclose_to(64))
    }
}
