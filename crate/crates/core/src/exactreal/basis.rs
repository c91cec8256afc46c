use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::Signed;

use super::rational::{format_rational, parse_rational, pow2, Approx, Enclosure, Rational};
use crate::error::{Error, Result};

/// Default cap for adaptive precision doubling.
pub const DEFAULT_PRECISION_CAP: u32 = 1024;

/// A positive real generator of the coefficient module.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Generator {
    /// `sqrt(n)` for a squarefree integer `n > 1`.
    Sqrt(u64),
    /// A decimal literal known to within `2^-bits`.
    Decimal { value: Rational, bits: u32 },
}

impl Generator {
    pub fn parse(text: &str) -> Result<Generator> {
        let bad = |why: &str| Error::InvalidGenerator(text.to_string(), why.to_string());
        let (kind, body) = text
            .split_once(':')
            .ok_or_else(|| bad("expected `kind:value`"))?;
        match kind.trim() {
            "sqrt" => {
                let n: u64 = body.trim().parse().map_err(|_| bad("not a positive integer"))?;
                if n < 2 {
                    return Err(bad("sqrt of 0 or 1 is rational"));
                }
                if !is_squarefree(n) {
                    return Err(bad("radicand must be squarefree"));
                }
                Ok(Generator::Sqrt(n))
            }
            "dec" => {
                let (lit, bits) = body.split_once('@').ok_or_else(|| bad("expected `dec:<literal>@<bits>`"))?;
                let value = parse_rational(lit).map_err(|_| bad("bad decimal literal"))?;
                let bits: u32 = bits.trim().parse().map_err(|_| bad("bad precision"))?;
                if !value.is_positive() {
                    return Err(bad("generators must be positive"));
                }
                if bits == 0 || bits > 4096 {
                    return Err(bad("precision must be in 1..=4096 bits"));
                }
                Ok(Generator::Decimal { value, bits })
            }
            "rat" => Err(bad(
                "a rational generator is dependent on 1; put rational parts in the constant coordinate",
            )),
            _ => Err(bad("unknown generator kind")),
        }
    }

    /// Certified f64 enclosure.
    pub fn approx(&self) -> Approx {
        match self {
            Generator::Sqrt(n) => {
                let v = (*n as f64).sqrt();
                Approx {
                    lo: v.next_down(),
                    hi: v.next_up(),
                }
            }
            Generator::Decimal { value, bits } => {
                let base = Approx::of_rational(value).expect("decimal generator overflows f64");
                let unc = 2f64.powi(-(*bits as i32));
                Approx {
                    lo: (base.lo - unc).next_down(),
                    hi: (base.hi + unc).next_up(),
                }
            }
        }
    }

    /// Rational enclosure of width at most `2^-bits` (surds) or the declared
    /// uncertainty (decimals).
    pub fn enclose(&self, bits: u32) -> Enclosure {
        match self {
            Generator::Sqrt(n) => {
                let scaled = BigInt::from(*n) << (2 * bits as usize);
                let s = scaled.sqrt();
                Enclosure {
                    lo: Rational::new(s.clone(), pow2(bits)),
                    hi: Rational::new(s + 1, pow2(bits)),
                }
            }
            Generator::Decimal { value, bits } => {
                let unc = Rational::new(BigInt::from(1), pow2(*bits));
                Enclosure {
                    lo: value - &unc,
                    hi: value + &unc,
                }
            }
        }
    }

    pub fn label(&self) -> String {
        match self {
            Generator::Sqrt(n) => format!("sqrt:{n}"),
            Generator::Decimal { value, bits } => format!("dec:{}@{bits}", format_rational(value)),
        }
    }
}

fn is_squarefree(n: u64) -> bool {
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n % (d * d) == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Ordered generators `g_1..g_d`. Points carry `d + 1` coefficients, the
/// first one for the generator `1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GeneratorBasis {
    generators: Vec<Generator>,
    independence_certified: bool,
    precision_cap: u32,
}

impl GeneratorBasis {
    pub fn new(generators: Vec<Generator>, precision_cap: u32) -> Result<Arc<Self>> {
        for (i, g) in generators.iter().enumerate() {
            if generators[..i].contains(g) {
                return Err(Error::InvalidGenerator(
                    g.label(),
                    "duplicate generator".into(),
                ));
            }
        }
        if precision_cap < 64 {
            return Err(Error::InvalidParameter(
                "precision cap must be at least 64 bits".into(),
            ));
        }
        // Distinct squarefree surds are linearly independent over Q together with 1.
        let independence_certified = generators.iter().all(|g| matches!(g, Generator::Sqrt(_)));
        Ok(Arc::new(GeneratorBasis {
            generators,
            independence_certified,
            precision_cap,
        }))
    }

    pub fn parse<S: AsRef<str>>(specs: &[S], precision_cap: u32) -> Result<Arc<Self>> {
        let gens = specs
            .iter()
            .map(|s| Generator::parse(s.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        Self::new(gens, precision_cap)
    }

    /// The basis `{1}`: points are plain rationals.
    pub fn rational() -> Arc<Self> {
        Self::new(Vec::new(), DEFAULT_PRECISION_CAP).unwrap()
    }

    pub fn surds(radicands: &[u64]) -> Result<Arc<Self>> {
        let gens = radicands
            .iter()
            .map(|n| Generator::parse(&format!("sqrt:{n}")))
            .collect::<Result<Vec<_>>>()?;
        Self::new(gens, DEFAULT_PRECISION_CAP)
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    /// Number of coefficients per point (generators plus the constant).
    pub fn dim(&self) -> usize {
        self.generators.len() + 1
    }

    pub fn independence_certified(&self) -> bool {
        self.independence_certified
    }

    pub fn precision_cap(&self) -> u32 {
        self.precision_cap
    }

    pub fn with_precision_cap(&self, cap: u32) -> Result<Arc<Self>> {
        Self::new(self.generators.clone(), cap)
    }

    pub fn labels(&self) -> Vec<String> {
        self.generators.iter().map(Generator::label).collect()
    }

    pub(crate) fn same_as(self: &Arc<Self>, other: &Arc<Self>) -> bool {
        Arc::ptr_eq(self, other) || **self == **other
    }
}

impl fmt::Display for GeneratorBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[1")?;
        for g in &self.generators {
            write!(f, ", {}", g.label())?;
        }
        write!(f, "]")
    }
}
