//! EG pairs, sumset separation, sweep-out witnesses and their verification.

mod eg;
mod sums;
mod trace;
mod verify;
mod witness;

pub use eg::{
    build_eg, certify_eg, trim_pair, EGPair, EGPairRepr, EgAttempt, EgBuild, EgCertificate,
    EgOptions,
};
pub use sums::{
    separation_check, unique_sum_check, MaxReading, SeparationReport, SeparationStep,
    UniqueSumReport, DEFAULT_BRUTE_FORCE_CAP,
};
pub use trace::{oscillation_trace, EntrySummary, Trace, TraceOptions, TraceRow};
pub use verify::{verify_witness, Check, Method, VerificationReport, VerifyMode, VerifyOptions};
pub use witness::{
    build_witness, epsilon_for, factor_count, select_subsequence, sumset_counts, thickening_bound,
    total_extent, Candidate, CountsRepr, Selection, SweepOutWitness, ThickenedSumset, WitnessBuild,
    WitnessOptions, WitnessRepr,
};
