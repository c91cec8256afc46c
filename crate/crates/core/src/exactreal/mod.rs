//! Exact arithmetic over a declared generator basis: rationals, points with
//! certified comparison, and open-interval sets.

mod basis;
mod interval_set;
mod point;
mod rational;
mod repr;

pub use basis::{Generator, GeneratorBasis, DEFAULT_PRECISION_CAP};
pub use interval_set::{IntervalSet, OpenInterval};
pub use point::{max_abs, max_point, min_gap, min_point, sort_dedup, sort_points, Point};
pub use rational::{
    ceil, floor, format_decimal, format_rational, int, parse_rational, rat, simplest_between,
    Approx, Enclosure, Rational,
};
pub use repr::{points_from_repr, points_to_repr, CertifiedRepr, PointRepr, REPORT_DIGITS};
