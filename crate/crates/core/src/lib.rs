//! Constructive witnesses for the strong sweeping-out property of convolution
//! operators `S_mu f(x) = sum_k m_k f(x + x_k)` of discrete measures on the
//! circle.
//!
//! The crate is organised bottom-up:
//!
//! * [`exactreal`] – rationals, points over a generator basis, certified
//!   comparison, interval sets;
//! * [`measure`] – discrete measures, the convolution operator on indicators,
//!   concentration and Chebyshev-type checks;
//! * [`lattice`] – rational decomposition of a support, the lattice sets
//!   `A_m`, density counts and the shift closure;
//! * [`lambda`] – the scaling parameter search and fractional-part windows;
//! * [`builder`] – witness pairs, unique-sum certification, subsequence
//!   selection, the sumset witness and its verification.
//!
//! With the `parallel` feature (default) the hot loops run on rayon.

pub mod builder;
pub mod error;
pub mod exactreal;
pub mod lambda;
pub mod lattice;
pub mod measure;
mod par;

pub use error::{Error, Result};
