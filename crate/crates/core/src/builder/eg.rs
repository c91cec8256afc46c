use std::cmp::Ordering;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactreal::{
    format_rational, int, parse_rational, points_from_repr, points_to_repr, sort_dedup,
    GeneratorBasis, Point, PointRepr, Rational,
};
use crate::lambda::{
    find_lambda, frac_window_sets, FindOptions, LambdaChoice, LambdaConstraints, ProfileOptions,
};
use crate::lattice::{
    decompose, lattice_points_in, shift_closure_check, ClosureReport, LatticeSpec,
    DEFAULT_ENUMERATION_CAP,
};
use crate::measure::{convolve_indicator, DiscreteMeasure, PointSet};
use crate::par;

#[derive(Clone, Debug)]
pub struct EgOptions {
    /// Largest lattice level tried; levels double from 1.
    pub m_max: u64,
    /// Upper limit for `lambda`.
    pub lambda_delta: Rational,
    pub enumeration_cap: u128,
    pub profile: ProfileOptions,
    pub floor_lowerings: u32,
}

impl Default for EgOptions {
    fn default() -> Self {
        EgOptions {
            m_max: 1024,
            lambda_delta: Rational::one(),
            enumeration_cap: DEFAULT_ENUMERATION_CAP,
            profile: ProfileOptions::default(),
            floor_lowerings: 3,
        }
    }
}

/// Disjoint finite sets `E, G` in `(-x_l, x_l)` with
/// `S_mu 1_G (x) > (1 - 3 eps)|mu|` on `E`.
#[derive(Clone, Debug, PartialEq)]
pub struct EGPair {
    /// 1-based index of the measure in its sequence.
    pub mu_index: usize,
    pub lambda: Rational,
    pub m: u64,
    pub epsilon: Rational,
    /// Grid refinement applied to the lattice (1 when none).
    pub refinement: u64,
    pub e: Vec<Point>,
    pub g: Vec<Point>,
}

impl EGPair {
    /// `E ∪ G`, ascending.
    pub fn union(&self) -> Result<Vec<Point>> {
        let mut all: Vec<Point> = self.e.iter().chain(&self.g).cloned().collect();
        sort_dedup(&mut all)?;
        Ok(all)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EGPairRepr {
    pub mu_index: usize,
    pub lambda: String,
    pub m: u64,
    pub epsilon: String,
    pub refinement: u64,
    pub e: Vec<PointRepr>,
    pub g: Vec<PointRepr>,
}

impl EGPair {
    pub fn to_repr(&self) -> EGPairRepr {
        EGPairRepr {
            mu_index: self.mu_index,
            lambda: format_rational(&self.lambda),
            m: self.m,
            epsilon: format_rational(&self.epsilon),
            refinement: self.refinement,
            e: points_to_repr(&self.e),
            g: points_to_repr(&self.g),
        }
    }

    pub fn from_repr(basis: &Arc<GeneratorBasis>, r: &EGPairRepr) -> Result<Self> {
        let mut e = points_from_repr(basis, &r.e)?;
        let mut g = points_from_repr(basis, &r.g)?;
        sort_dedup(&mut e)?;
        sort_dedup(&mut g)?;
        Ok(EGPair {
            mu_index: r.mu_index,
            lambda: parse_rational(&r.lambda)?,
            m: r.m,
            epsilon: parse_rational(&r.epsilon)?,
            refinement: r.refinement,
            e,
            g,
        })
    }
}

/// Outcome of the three pair invariants.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EgCertificate {
    pub e_count: usize,
    pub g_count: usize,
    /// `E ∩ G = ∅`.
    pub disjoint: bool,
    /// `E, G ⊂ (-x_l, x_l)`.
    pub inside_window: bool,
    /// `#E > eps #G / 4`.
    pub count_ok: bool,
    /// `S_mu 1_G (x) > (1 - 3 eps)|mu|` for all `x in E`.
    pub convolution_ok: bool,
    pub threshold: String,
    pub min_convolution: Option<String>,
    pub failure: Option<String>,
}

impl EgCertificate {
    pub fn holds(&self) -> bool {
        self.disjoint && self.inside_window && self.count_ok && self.convolution_ok
    }
}

pub fn certify_eg(pair: &EGPair, mu: &DiscreteMeasure) -> Result<EgCertificate> {
    let x_l = mu.max_atom();
    let neg = -x_l;
    let gset = PointSet::new(pair.g.clone())?;
    let mut failure = None;
    let disjoint = match pair.e.iter().find(|x| gset.contains(x)) {
        Some(x) => {
            failure = Some(format!("{x} lies in both E and G"));
            false
        }
        None => true,
    };
    let mut inside_window = true;
    for x in pair.e.iter().chain(&pair.g) {
        if !(neg.lt(x)? && x.lt(x_l)?) {
            inside_window = false;
            failure.get_or_insert_with(|| format!("{x} is outside (-x_l, x_l)"));
            break;
        }
    }
    let count_ok = Rational::from_integer(BigInt::from(4 * pair.e.len()))
        > &pair.epsilon * Rational::from_integer(BigInt::from(pair.g.len()));
    if !count_ok {
        failure.get_or_insert_with(|| {
            format!(
                "#E = {} is not above eps #G / 4 with #G = {}",
                pair.e.len(),
                pair.g.len()
            )
        });
    }
    let threshold = (Rational::one() - int(3) * &pair.epsilon) * mu.total_mass();
    let values = par::try_map(&pair.e, |x| convolve_indicator(mu, &gset, x))?;
    let mut convolution_ok = true;
    for (x, v) in pair.e.iter().zip(&values) {
        if *v <= threshold {
            convolution_ok = false;
            failure.get_or_insert_with(|| {
                format!(
                    "S_mu 1_G({x}) = {} is not above {}",
                    format_rational(v),
                    format_rational(&threshold)
                )
            });
            break;
        }
    }
    let min_convolution = values.iter().min().map(format_rational);
    Ok(EgCertificate {
        e_count: pair.e.len(),
        g_count: pair.g.len(),
        disjoint,
        inside_window,
        count_ok,
        convolution_ok,
        threshold: format_rational(&threshold),
        min_convolution,
        failure,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct EgAttempt {
    pub m: u64,
    pub e_count: usize,
    pub g_count: usize,
    pub count_ok: bool,
}

#[derive(Clone, Debug)]
pub struct EgBuild {
    pub pair: EGPair,
    pub lambda: LambdaChoice,
    pub spec: LatticeSpec,
    pub attempts: Vec<EgAttempt>,
    pub certificate: EgCertificate,
    pub closure: ClosureReport,
}

/// Smallest power of two `R` with `y / (p R) <= eps lambda / 2`, so that
/// every window of `U_lambda` holds a point of the refined progression.
fn progression_refinement(spec: &LatticeSpec, eps: &Rational, lambda: &Rational) -> Result<u64> {
    let target = Point::rational(spec.basis(), eps * lambda / int(2));
    let mut r: u64 = 1;
    loop {
        let step = spec
            .last_step()
            .scale(&Rational::new(BigInt::one(), BigInt::from(r)));
        if step.try_cmp(&target)? != Ordering::Greater {
            return Ok(r);
        }
        r = r
            .checked_mul(2)
            .filter(|v| *v <= 1 << 40)
            .ok_or_else(|| Error::InvalidParameter("progression refinement overflows".into()))?;
    }
}

/// Witness pair for `mu`: `E_m = A_m ∩ U_lambda`, `G_m = A_{m+1} ∩ V_lambda`
/// for the first `m` in `1, 2, 4, ...` meeting all three invariants.
///
/// A single generator (`nu = 1`) gives an arithmetic progression with no
/// point in `(-x_l, 0)`; the progression is then refined so its step fits in
/// every window of `U_lambda`.
pub fn build_eg(
    mu: &DiscreteMeasure,
    mu_index: usize,
    eps: &Rational,
    opts: &EgOptions,
) -> Result<EgBuild> {
    let mut spec = decompose(mu.atoms())?;
    let find = FindOptions {
        profile: opts.profile.clone(),
        constraints: LambdaConstraints::witness_pair(mu, eps),
        floor_lowerings: opts.floor_lowerings,
    };
    let choice = find_lambda(mu, eps, &opts.lambda_delta, &find)?;
    let lambda = choice.lambda.clone();
    let x_l = mu.max_atom();
    let (u_set, v_set) = frac_window_sets(&lambda, eps, x_l)?;
    let mut refinement = 1;
    if spec.nu() == 1 {
        refinement = progression_refinement(&spec, eps, &lambda)?;
        spec = spec.refine(refinement)?;
    }
    let mut attempts = Vec::new();
    let mut best: Option<(usize, usize)> = None;
    let mut m = 1u64;
    while m <= opts.m_max {
        let e = lattice_points_in(&spec, m, &u_set, opts.enumeration_cap)?;
        let g = lattice_points_in(&spec, m + 1, &v_set, opts.enumeration_cap)?;
        let count_ok = Rational::from_integer(BigInt::from(4 * e.len()))
            > eps * Rational::from_integer(BigInt::from(g.len()));
        attempts.push(EgAttempt {
            m,
            e_count: e.len(),
            g_count: g.len(),
            count_ok,
        });
        let better = match best {
            None => true,
            Some((be, bg)) => e.len() * bg.max(1) > be * g.len().max(1),
        };
        if better {
            best = Some((e.len(), g.len()));
        }
        if count_ok && !e.is_empty() {
            let pair = EGPair {
                mu_index,
                lambda: lambda.clone(),
                m,
                epsilon: eps.clone(),
                refinement,
                e,
                g,
            };
            let certificate = certify_eg(&pair, mu)?;
            if certificate.holds() {
                let closure = shift_closure_check(&spec, mu.atoms(), m, opts.enumeration_cap)?;
                return Ok(EgBuild {
                    pair,
                    lambda: choice,
                    spec,
                    attempts,
                    certificate,
                    closure,
                });
            }
        }
        m = match m.checked_mul(2) {
            Some(v) => v,
            None => break,
        };
    }
    let (be, bg) = best.unwrap_or((0, 0));
    Err(Error::MExhausted {
        m_max: opts.m_max,
        best_ratio: format!("{be}/{bg}"),
        needed: format_rational(&(eps / int(4))),
    })
}

/// Keeps a few points of `E` together with the translates `x + x_k` that lie
/// in `G`, then re-certifies the pair at the reduced sizes.
pub fn trim_pair(
    pair: &EGPair,
    mu: &DiscreteMeasure,
    max_e: usize,
    max_g: usize,
) -> Result<EGPair> {
    if max_e == 0 {
        return Err(Error::InvalidParameter(
            "trimmed E must keep at least one point".into(),
        ));
    }
    let gset = PointSet::new(pair.g.clone())?;
    // points of E nearest to 0 first
    let mut order: Vec<(Point, Point)> = pair
        .e
        .iter()
        .map(|x| Ok((x.abs()?, x.clone())))
        .collect::<Result<_>>()?;
    let mut failure = None;
    order.sort_by(|a, b| {
        a.0.try_cmp(&b.0).unwrap_or_else(|e| {
            failure.get_or_insert(e);
            Ordering::Equal
        })
    });
    if let Some(e) = failure {
        return Err(e);
    }
    let mut e_kept = Vec::new();
    let mut g_kept: Vec<Point> = Vec::new();
    for (_, x) in order {
        let translates: Vec<Point> = mu
            .atoms()
            .iter()
            .map(|t| &x + t)
            .filter(|y| gset.contains(y) && !g_kept.contains(y))
            .collect();
        if g_kept.len() + translates.len() > max_g {
            continue;
        }
        g_kept.extend(translates);
        e_kept.push(x);
        if e_kept.len() == max_e {
            break;
        }
    }
    sort_dedup(&mut e_kept)?;
    sort_dedup(&mut g_kept)?;
    let trimmed = EGPair {
        e: e_kept,
        g: g_kept,
        ..pair.clone()
    };
    let cert = certify_eg(&trimmed, mu)?;
    if !cert.holds() {
        return Err(Error::Inconsistent(format!(
            "trimmed pair fails re-certification: {}",
            cert.failure.unwrap_or_default()
        )));
    }
    Ok(trimmed)
}
