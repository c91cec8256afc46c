//! Experiment configuration: one JSON file per run.

use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use sweepout::error::{Error, Result};
use sweepout::exactreal::{parse_rational, GeneratorBasis, Point, Rational, DEFAULT_PRECISION_CAP};
use sweepout::measure::{DiscreteMeasure, MeasureSequence};

/// A point as its coefficient vector over `[1, g_1, ..., g_d]`.
pub type PointSpec = Vec<String>;

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub basis: BasisConfig,
    pub measures: MeasuresConfig,
    /// Support for `decompose` and `lattice-count`; defaults to the atoms of
    /// the measure at `params.measure_index`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub support: Option<Vec<PointSpec>>,
    #[serde(default)]
    pub params: Params,
    #[serde(default)]
    pub outputs: Outputs,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BasisConfig {
    pub generators: Vec<String>,
    #[serde(default = "default_precision")]
    pub precision_cap: u32,
}

fn default_precision() -> u32 {
    DEFAULT_PRECISION_CAP
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeasureConfig {
    pub atoms: Vec<PointSpec>,
    pub masses: Vec<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum MeasuresConfig {
    Explicit {
        list: Vec<MeasureConfig>,
    },
    /// `mu_n = sum_k m_k delta_{x_k ratio^n}` for `n = 1..=count`.
    Geometric {
        atoms: Vec<PointSpec>,
        masses: Vec<String>,
        ratio: String,
        count: usize,
    },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Params {
    /// 1-based index of the measure used by single-measure commands.
    pub measure_index: usize,
    pub big_delta: String,
    pub delta: String,
    /// Overrides `(1 - delta) / 3` for `find-lambda` and `build-eg`.
    pub epsilon: Option<String>,
    /// Upper limit on lambda in `find-lambda`.
    pub lambda_delta: String,
    /// `lambda_floor = r * floor_ratio`.
    pub floor_ratio: String,
    pub m_values: Vec<u64>,
    pub interval: [String; 2],
    pub closure_m_max: u64,
    pub enumeration_cap: u64,
    pub m_max: u64,
    pub m_cap: u64,
    /// Trim each factor to at most `[#E, #G]` points.
    pub trim: Option<[usize; 2]>,
    pub verify_mode: String,
    pub samples: usize,
    pub explicit_cap: u64,
    pub schedule: Vec<[String; 2]>,
    pub trace_samples: usize,
    pub condition_deltas: Vec<String>,
    pub mass_tolerance: String,
    pub concentration_gap: String,
    pub chebyshev_eps: String,
}

impl Default for Params {
    fn default() -> Self {
        Params {
            measure_index: 1,
            big_delta: "1/12".into(),
            delta: "1/2".into(),
            epsilon: None,
            lambda_delta: "1/10".into(),
            floor_ratio: "1/10000".into(),
            m_values: vec![1, 2, 5, 10, 20, 50, 100, 200],
            interval: ["0".into(), "2/5".into()],
            closure_m_max: 20,
            enumeration_cap: 10_000_000,
            m_max: 1024,
            m_cap: 64,
            trim: None,
            verify_mode: "factor-exact".into(),
            samples: 1000,
            explicit_cap: 100_000,
            schedule: vec![["1/12".into(), "1/2".into()]],
            trace_samples: 16,
            condition_deltas: vec!["1/10".into(), "1/100".into()],
            mass_tolerance: "1/1000".into(),
            concentration_gap: "1/1000".into(),
            chebyshev_eps: "1/4".into(),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Outputs {
    /// Witness file, relative to the output directory unless absolute.
    pub witness: String,
    pub eg_pair: String,
}

impl Default for Outputs {
    fn default() -> Self {
        Outputs {
            witness: "witness.json".into(),
            eg_pair: "eg-pair.json".into(),
        }
    }
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| {
            Error::InvalidParameter(format!("cannot read config {}: {e}", path.display()))
        })?;
        serde_json::from_str(&text)
            .map_err(|e| Error::InvalidParameter(format!("config {}: {e}", path.display())))
    }

    pub fn basis(&self) -> Result<Arc<GeneratorBasis>> {
        GeneratorBasis::parse(&self.basis.generators, self.basis.precision_cap)
    }

    pub fn sequence(&self, basis: &Arc<GeneratorBasis>) -> Result<MeasureSequence> {
        match &self.measures {
            MeasuresConfig::Explicit { list } => {
                let ms = list
                    .iter()
                    .map(|m| measure(basis, m))
                    .collect::<Result<Vec<_>>>()?;
                MeasureSequence::new(ms)
            }
            MeasuresConfig::Geometric {
                atoms,
                masses,
                ratio,
                count,
            } => {
                let atoms = points(basis, atoms)?;
                let masses = rationals(masses)?;
                MeasureSequence::geometric(&atoms, &masses, &parse_rational(ratio)?, *count)
            }
        }
    }

    pub fn support(
        &self,
        basis: &Arc<GeneratorBasis>,
        seq: &MeasureSequence,
    ) -> Result<Vec<Point>> {
        match &self.support {
            Some(s) => points(basis, s),
            None => Ok(self.measure(seq)?.atoms().to_vec()),
        }
    }

    pub fn measure<'a>(&self, seq: &'a MeasureSequence) -> Result<&'a DiscreteMeasure> {
        let n = self.params.measure_index;
        seq.get(n).ok_or_else(|| {
            Error::InvalidParameter(format!("measure_index {n} outside 1..={}", seq.len()))
        })
    }
}

fn measure(basis: &Arc<GeneratorBasis>, m: &MeasureConfig) -> Result<DiscreteMeasure> {
    DiscreteMeasure::new(points(basis, &m.atoms)?, rationals(&m.masses)?)
}

pub fn points(basis: &Arc<GeneratorBasis>, specs: &[PointSpec]) -> Result<Vec<Point>> {
    specs
        .iter()
        .map(|c| Point::parse_coeffs(basis, c))
        .collect()
}

pub fn rationals(v: &[String]) -> Result<Vec<Rational>> {
    v.iter().map(|s| parse_rational(s)).collect()
}

pub fn rational(name: &str, s: &str) -> Result<Rational> {
    parse_rational(s)
        .map_err(|_| Error::InvalidParameter(format!("{name} = `{s}` is not a rational")))
}
