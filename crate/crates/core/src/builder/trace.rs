use serde::Serialize;

use super::verify::{factored_value, sample_b};
use super::witness::{build_witness, SweepOutWitness, ThickenedSumset, WitnessOptions};
use crate::error::{Error, Result};
use crate::exactreal::{format_rational, Point, Rational};
use crate::measure::MeasureSequence;
use crate::par;

#[derive(Clone, Debug)]
pub struct TraceOptions {
    pub witness: WitnessOptions,
    /// Sample points drawn from each `B_j`.
    pub samples: usize,
    pub seed: u64,
}

impl Default for TraceOptions {
    fn default() -> Self {
        TraceOptions {
            witness: WitnessOptions::default(),
            samples: 16,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct TraceRow {
    pub entry: usize,
    pub n: usize,
    pub sample: usize,
    pub value: f64,
    pub running_max: f64,
    pub running_min: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct EntrySummary {
    pub entry: usize,
    pub big_delta: String,
    pub delta: String,
    pub indices: Vec<usize>,
    /// Largest value reached, over all samples and `n`.
    pub max_value: String,
    /// Smallest running max over samples: every sample point exceeds this
    /// somewhere along the sequence.
    pub min_sample_max: String,
    /// Largest running min over samples.
    pub max_sample_min: String,
    /// Every sample reached a value above `delta`.
    pub exceeds_delta: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct Trace {
    pub rows: Vec<TraceRow>,
    pub entries: Vec<EntrySummary>,
    pub warnings: Vec<String>,
    #[serde(skip)]
    pub witnesses: Vec<SweepOutWitness>,
}

/// For each `(Delta_j, delta_j)` builds a witness `A_j`, draws fixed sample
/// points from `B_j` and evaluates `S_{mu_n} 1_{A_j}` for every `n` in the
/// sequence, keeping running max and min per point.
pub fn oscillation_trace(
    seq: &MeasureSequence,
    schedule: &[(Rational, Rational)],
    opts: &TraceOptions,
) -> Result<Trace> {
    if schedule.is_empty() {
        return Err(Error::InvalidParameter("trace schedule is empty".into()));
    }
    let mut rows = Vec::new();
    let mut entries = Vec::new();
    let mut warnings = Vec::new();
    let mut witnesses = Vec::new();
    for (j, (big_delta, delta)) in schedule.iter().enumerate() {
        let w = match build_witness(seq, big_delta, delta, &opts.witness) {
            Ok(b) => b.witness,
            Err(e @ Error::SequenceExhausted { .. }) => {
                warnings.push(format!("entry {j} truncated: {e}"));
                break;
            }
            Err(e) => return Err(e),
        };
        let points = sample_b(&w, opts.samples, opts.seed.wrapping_add(j as u64))?;
        let a = ThickenedSumset::of_g(&w);
        // values[n][s]
        let values = par::try_map(seq.measures(), |mu| -> Result<Vec<Rational>> {
            points
                .iter()
                .map(|x: &Point| factored_value(mu, &a, x))
                .collect()
        })?;
        let zero = Rational::from_integer(0.into());
        let mut run_max = vec![zero.clone(); points.len()];
        let mut run_min: Vec<Option<Rational>> = vec![None; points.len()];
        let mut top = zero.clone();
        for (i, row) in values.iter().enumerate() {
            for (s, v) in row.iter().enumerate() {
                if *v > run_max[s] {
                    run_max[s] = v.clone();
                }
                if run_min[s].as_ref().is_none_or(|m| v < m) {
                    run_min[s] = Some(v.clone());
                }
                if *v > top {
                    top = v.clone();
                }
                rows.push(TraceRow {
                    entry: j,
                    n: i + 1,
                    sample: s,
                    value: rational_f64(v),
                    running_max: rational_f64(&run_max[s]),
                    running_min: rational_f64(run_min[s].as_ref().expect("set above")),
                });
            }
        }
        let min_max = run_max.iter().min().cloned().unwrap_or(zero.clone());
        let max_min = run_min.iter().flatten().max().cloned().unwrap_or(zero);
        entries.push(EntrySummary {
            entry: j,
            big_delta: format_rational(big_delta),
            delta: format_rational(delta),
            indices: w.indices.clone(),
            max_value: format_rational(&top),
            min_sample_max: format_rational(&min_max),
            max_sample_min: format_rational(&max_min),
            exceeds_delta: !points.is_empty() && min_max > *delta,
        });
        witnesses.push(w);
    }
    Ok(Trace {
        rows,
        entries,
        warnings,
        witnesses,
    })
}

fn rational_f64(q: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    q.to_f64().unwrap_or(f64::NAN)
}
