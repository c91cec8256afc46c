use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde_json::json;
use sweepout::builder::{
    build_eg, build_witness, epsilon_for, oscillation_trace, verify_witness, EgOptions,
    SweepOutWitness, TraceOptions, VerifyMode, VerifyOptions, WitnessOptions, WitnessRepr,
};
use sweepout::error::{Error, Result};
use sweepout::exactreal::{
    format_rational, points_to_repr, CertifiedRepr, GeneratorBasis, IntervalSet, OpenInterval,
    Point, Rational,
};
use sweepout::lambda::{
    find_lambda, lambda_profile, recheck_lambda, FindOptions, LambdaConstraints, LambdaSummary,
    ProfileOptions,
};
use sweepout::lattice::{count_in_interval, decompose, interval_count_ratio, shift_closure_check};
use sweepout::measure::{chebyshev_check, check_condition_one, ConditionOptions, MeasureSequence};

use crate::config::{rational, rationals, ExperimentConfig};
use crate::report::{to_value, Outcome, Table};

pub struct Ctx<'a> {
    pub config: &'a ExperimentConfig,
    pub basis: Arc<GeneratorBasis>,
    pub seq: MeasureSequence,
    pub out: PathBuf,
    pub seed: u64,
    pub explicit_cap: u64,
}

impl Ctx<'_> {
    fn p(&self) -> &crate::config::Params {
        &self.config.params
    }

    fn delta(&self) -> Result<Rational> {
        rational("delta", &self.p().delta)
    }

    /// `params.epsilon`, or `(1 - delta) / 3`.
    fn epsilon(&self) -> Result<Rational> {
        match &self.p().epsilon {
            Some(e) => rational("epsilon", e),
            None => {
                let d = self.delta()?;
                if d <= Rational::from_integer(0.into()) || d >= Rational::from_integer(1.into()) {
                    return Err(Error::InvalidParameter(format!(
                        "delta = {} must lie in the open range (0, 1)",
                        format_rational(&d)
                    )));
                }
                Ok(epsilon_for(&d))
            }
        }
    }

    fn profile(&self) -> Result<ProfileOptions> {
        Ok(ProfileOptions {
            floor_ratio: rational("floor_ratio", &self.p().floor_ratio)?,
            ..ProfileOptions::default()
        })
    }

    fn eg_options(&self) -> Result<EgOptions> {
        Ok(EgOptions {
            m_max: self.p().m_max,
            enumeration_cap: self.p().enumeration_cap as u128,
            profile: self.profile()?,
            ..EgOptions::default()
        })
    }

    fn witness_options(&self) -> Result<WitnessOptions> {
        Ok(WitnessOptions {
            eg: self.eg_options()?,
            trim: self.p().trim.map(|[e, g]| (e, g)),
            m_cap: self.p().m_cap,
            ..WitnessOptions::default()
        })
    }

    fn resolve(&self, name: &str) -> PathBuf {
        let p = Path::new(name);
        if p.is_absolute() {
            p.to_path_buf()
        } else {
            self.out.join(p)
        }
    }
}

fn f64_str(x: f64) -> String {
    format!("{x}")
}

pub fn decompose_cmd(ctx: &Ctx) -> Result<Outcome> {
    let support = ctx.config.support(&ctx.basis, &ctx.seq)?;
    let spec = decompose(&support)?;
    let mut out = Outcome::default();
    let rec = spec.check_reconstruction(&support);
    out.check(
        "reconstruction",
        "x_k = (sum_i n_i^(k) y_i) / p for every support point",
        match &rec {
            Ok(()) => "exact".to_string(),
            Err(e) => e.to_string(),
        },
        rec.is_ok(),
    );
    out.result = json!({
        "support": points_to_repr(&support),
        "nu": spec.nu(),
        "spec": spec.to_repr(),
        "summary": spec.to_string(),
    });
    Ok(out)
}

pub fn lattice_count_cmd(ctx: &Ctx) -> Result<Outcome> {
    let support = ctx.config.support(&ctx.basis, &ctx.seq)?;
    let spec = decompose(&support)?;
    let cap = ctx.p().enumeration_cap as u128;
    let [lo, hi] = &ctx.p().interval;
    let interval = OpenInterval::new(
        Point::rational(&ctx.basis, rational("interval", lo)?),
        Point::rational(&ctx.basis, rational("interval", hi)?),
    )?;
    let mut out = Outcome::default();
    let mut table = Table::new("lattice-count", &["m", "count", "predicted", "ratio"]);
    let mut rows = Vec::new();
    for &m in &ctx.p().m_values {
        if spec.nu() >= 2 {
            let r = interval_count_ratio(&spec, m, &interval, cap)?;
            let row = r.row();
            table.push([
                m.to_string(),
                r.count.to_string(),
                f64_str(row.predicted),
                f64_str(row.ratio),
            ]);
            rows.push(json!({"m": m, "count": r.count, "predicted": r.predicted_repr(), "ratio": r.ratio_repr()}));
        } else {
            let count = count_in_interval(&spec, m, &interval, cap)?;
            table.push([
                m.to_string(),
                count.to_string(),
                String::new(),
                String::new(),
            ]);
            rows.push(json!({"m": m, "count": count}));
        }
    }
    let mut closure = Vec::new();
    for m in 1..=ctx.p().closure_m_max {
        let r = shift_closure_check(&spec, &support, m, cap)?;
        let witness = r
            .violation
            .as_ref()
            .map(|(x, t, why)| format!("x = {x}, x_k = {t}: {why}"));
        out.check(
            format!("closure[{m}]"),
            format!("A_{m} ∩ (-x_l, 0) + X ⊂ A_{} ∩ (-x_l, x_l)", m + 1),
            format!("{} shifts of {} points", r.checked, r.negative_points),
            r.holds,
        );
        out.checks.last_mut().unwrap().witness = witness;
        closure.push(json!({"m": m, "holds": r.holds, "checked": r.checked, "negative_points": r.negative_points}));
    }
    out.result = json!({
        "nu": spec.nu(),
        "interval": [lo, hi],
        "gamma": CertifiedRepr::from(&spec.gamma()),
        "density": rows,
        "closure": closure,
    });
    out.tables.push(table);
    Ok(out)
}

pub fn find_lambda_cmd(ctx: &Ctx) -> Result<Outcome> {
    let mu = ctx.config.measure(&ctx.seq)?;
    let eps = ctx.epsilon()?;
    let limit = rational("lambda_delta", &ctx.p().lambda_delta)?;
    let opts = FindOptions {
        profile: ctx.profile()?,
        constraints: LambdaConstraints::default(),
        floor_lowerings: 3,
    };
    let choice = find_lambda(mu, &eps, &limit, &opts)?;
    let recheck = recheck_lambda(mu, &eps, &choice.lambda, 1000)?;
    let profile = lambda_profile(mu, &eps, &limit, &opts.profile)?;
    let integral = profile.integral()?;
    let mut out = Outcome::default();
    out.check(
        "lambda_range",
        format!("0 < lambda <= {}", format_rational(&limit)),
        format!("lambda = {}", format_rational(&choice.lambda)),
        choice.lambda > Rational::from_integer(0.into()) && choice.lambda <= limit,
    );
    out.check(
        "profile_value",
        format!(
            "sum_i m_i [{{x_i / lambda}} in (eps, 1 - eps)] > (1 - 3 eps)|mu| = {}",
            format_rational(&choice.threshold)
        ),
        format_rational(&choice.value),
        choice.value > choice.threshold,
    );
    out.check(
        "recheck",
        format!(
            "sum_i m_i [x + x_i in V_lambda] > {} for sampled x in U_lambda",
            format_rational(&recheck.threshold)
        ),
        format!(
            "{} samples, min = {}",
            recheck.checked,
            format_rational(&recheck.min_value)
        ),
        recheck.holds,
    );
    out.checks.last_mut().unwrap().witness = recheck.failure.as_ref().map(|x| format!("x = {x}"));
    out.check(
        "integral",
        format!(
            "integral over (0, r] >= (1 - 3 eps) r |mu| = {}",
            integral.bound.display_decimal(12)
        ),
        format!("certified lower bound {}", f64_str(integral.lower)),
        integral.holds,
    );
    let mut table = Table::new("profile", &["lo", "hi", "value"]);
    for r in profile.rows() {
        table.push([f64_str(r.lo), f64_str(r.hi), r.value]);
    }
    out.result = json!({
        "epsilon": format_rational(&eps),
        "choice": LambdaSummary::from(&choice),
        "profile_pieces": profile.len(),
        "integral": {
            "lower": f64_str(integral.lower),
            "upper": f64_str(integral.upper),
            "bound": CertifiedRepr::from(&integral.bound),
        },
    });
    out.tables.push(table);
    Ok(out)
}

pub fn build_eg_cmd(ctx: &Ctx) -> Result<Outcome> {
    let mu = ctx.config.measure(&ctx.seq)?;
    let eps = ctx.epsilon()?;
    let built = build_eg(mu, ctx.p().measure_index, &eps, &ctx.eg_options()?)?;
    let c = &built.certificate;
    let mut out = Outcome::default();
    out.check("disjoint", "E ∩ G = ∅", c.disjoint.to_string(), c.disjoint);
    out.check(
        "inside_window",
        "E, G ⊂ (-x_l, x_l)",
        c.inside_window.to_string(),
        c.inside_window,
    );
    out.check(
        "count",
        format!(
            "#E > eps #G / 4 = {}",
            format_rational(
                &(&eps * Rational::from_integer(c.g_count.into())
                    / Rational::from_integer(4.into()))
            )
        ),
        format!("#E = {}, #G = {}", c.e_count, c.g_count),
        c.count_ok,
    );
    out.check(
        "convolution",
        format!("S_mu 1_G(x) > {} for every x in E", c.threshold),
        format!(
            "min = {}",
            c.min_convolution.clone().unwrap_or_else(|| "-".into())
        ),
        c.convolution_ok,
    );
    out.checks.last_mut().unwrap().witness = c.failure.clone();
    let pair = serde_json::to_string_pretty(&built.pair.to_repr()).expect("pair serializes") + "\n";
    out.files.push((ctx.p_eg_name(), pair));
    out.result = json!({
        "epsilon": format_rational(&eps),
        "lambda": LambdaSummary::from(&built.lambda),
        "m": built.pair.m,
        "refinement": built.pair.refinement,
        "attempts": built.attempts,
        "certificate": c,
        "pair": built.pair.to_repr(),
    });
    Ok(out)
}

impl Ctx<'_> {
    fn p_eg_name(&self) -> String {
        self.resolve(&self.config.outputs.eg_pair)
            .to_string_lossy()
            .into_owned()
    }
}

fn witness_summary(w: &SweepOutWitness) -> serde_json::Value {
    let r = w.to_repr();
    json!({
        "m": r.m,
        "indices": r.indices,
        "epsilon": r.epsilon,
        "thickening": r.thickening,
        "thickening_decimal": r.thickening_decimal,
        "counts": r.counts,
        "factor_sizes": w.factors.iter().map(|f| [f.e.len(), f.g.len()]).collect::<Vec<_>>(),
    })
}

pub fn build_witness_cmd(ctx: &Ctx) -> Result<Outcome> {
    let big_delta = rational("big_delta", &ctx.p().big_delta)?;
    let delta = ctx.delta()?;
    let built = build_witness(&ctx.seq, &big_delta, &delta, &ctx.witness_options()?)?;
    let w = &built.witness;
    let report = verify_witness(
        w,
        &ctx.seq,
        VerifyMode::FactorExact,
        &VerifyOptions::default(),
    )?;
    let mut out = Outcome {
        checks: report.checks,
        ..Outcome::default()
    };
    let path = ctx.resolve(&ctx.config.outputs.witness);
    let text = serde_json::to_string_pretty(&w.to_repr()).expect("witness serializes") + "\n";
    out.files.push((path.to_string_lossy().into_owned(), text));
    out.result = json!({
        "witness": witness_summary(w),
        "witness_file": ctx.config.outputs.witness,
        "selection": built.selection,
    });
    Ok(out)
}

pub fn verify_cmd(ctx: &Ctx) -> Result<Outcome> {
    let path = ctx.resolve(&ctx.config.outputs.witness);
    let text = std::fs::read_to_string(&path).map_err(|e| {
        Error::InvalidParameter(format!("cannot read witness {}: {e}", path.display()))
    })?;
    let repr: WitnessRepr = serde_json::from_str(&text)
        .map_err(|e| Error::InvalidParameter(format!("witness {}: {e}", path.display())))?;
    let w = SweepOutWitness::from_repr(&ctx.basis, &repr)?;
    let mode: VerifyMode = ctx.p().verify_mode.parse()?;
    let opts = VerifyOptions {
        explicit_cap: ctx.explicit_cap as u128,
        samples: ctx.p().samples,
        seed: ctx.seed,
    };
    let report = verify_witness(&w, &ctx.seq, mode, &opts)?;
    let result = json!({
        "mode": report.mode,
        "sample_count": report.sample_count,
        "seed": report.seed,
        "witness": witness_summary(&w),
        "witness_file": ctx.config.outputs.witness,
    });
    Ok(Outcome {
        checks: report.checks,
        result,
        ..Outcome::default()
    })
}

pub fn trace_cmd(ctx: &Ctx) -> Result<Outcome> {
    let schedule = ctx
        .p()
        .schedule
        .iter()
        .map(|[a, b]| Ok((rational("schedule", a)?, rational("schedule", b)?)))
        .collect::<Result<Vec<_>>>()?;
    let opts = TraceOptions {
        witness: ctx.witness_options()?,
        samples: ctx.p().trace_samples,
        seed: ctx.seed,
    };
    let trace = oscillation_trace(&ctx.seq, &schedule, &opts)?;
    let mut out = Outcome::default();
    for e in &trace.entries {
        out.check(
            format!("oscillation[{}]", e.entry),
            format!(
                "every sampled x in B reaches S_mu_n 1_A(x) > {} for some n",
                e.delta
            ),
            format!("min over samples of max over n = {}", e.min_sample_max),
            e.exceeds_delta,
        );
    }
    let mut table = Table::new(
        "trace",
        &[
            "entry",
            "n",
            "sample",
            "value",
            "running_max",
            "running_min",
        ],
    );
    for r in &trace.rows {
        table.push([
            r.entry.to_string(),
            r.n.to_string(),
            r.sample.to_string(),
            f64_str(r.value),
            f64_str(r.running_max),
            f64_str(r.running_min),
        ]);
    }
    out.result = json!({
        "entries": trace.entries,
        "warnings": trace.warnings,
        "samples_per_entry": ctx.p().trace_samples,
    });
    out.tables.push(table);
    Ok(out)
}

pub fn check_conditions_cmd(ctx: &Ctx) -> Result<Outcome> {
    let deltas = rationals(&ctx.p().condition_deltas)?;
    let opts = ConditionOptions {
        concentration_gap: rational("concentration_gap", &ctx.p().concentration_gap)?,
        mass_tolerance: rational("mass_tolerance", &ctx.p().mass_tolerance)?,
    };
    let report = check_condition_one(&ctx.seq, &deltas, &opts)?;
    let mut out = Outcome::default();
    for d in &report.per_delta {
        out.check(
            format!("condition_one[{}]", d.delta),
            format!(
                "mu_n((-{0}, {0})) > (1 - {1}) |mu_n| for all large n",
                d.delta,
                ctx.p().concentration_gap
            ),
            match d.tail_index {
                Some(n) => format!("holds from n = {n}"),
                None => "no tail index".into(),
            },
            d.concentrated,
        );
    }
    out.check(
        "condition_a",
        format!(
            "| |mu_n| - 1 | <= {} for all large n",
            ctx.p().mass_tolerance
        ),
        match report.mass_tail_index {
            Some(n) => format!("holds from n = {n}"),
            None => "no tail index".into(),
        },
        report.condition_a,
    );
    // condition (b): |{S_mu 1_G > eps}| <= |mu||G|/eps < eps once |G| < eps^2/|mu|
    let eps = rational("chebyshev_eps", &ctx.p().chebyshev_eps)?;
    if eps <= Rational::from_integer(0.into()) {
        return Err(Error::InvalidParameter(
            "chebyshev_eps must be positive".into(),
        ));
    }
    let mut table = Table::new(
        "chebyshev",
        &["n", "g_measure", "level_measure", "bound", "integral"],
    );
    let mut all_ok = true;
    let mut first_fail = None;
    for (i, mu) in ctx.seq.measures().iter().enumerate() {
        let width = (&eps * &eps / mu.total_mass()) / Rational::from_integer(2.into());
        let width = width.min(Rational::new(1.into(), 2.into()));
        let g = IntervalSet::interval(
            Point::zero(&ctx.basis),
            Point::rational(&ctx.basis, width.clone()),
        )?;
        let r = chebyshev_check(mu, &g, &eps)?;
        let small = r
            .level_measure
            .lt(&Point::rational(&ctx.basis, eps.clone()))?;
        let ok = r.identity_holds && r.bound_holds && small;
        if !ok && first_fail.is_none() {
            first_fail = Some(i + 1);
        }
        all_ok &= ok;
        table.push([
            (i + 1).to_string(),
            format_rational(&width),
            r.level_measure.display_decimal(12),
            r.bound.display_decimal(12),
            r.integral.display_decimal(12),
        ]);
    }
    out.check(
        "condition_b",
        format!(
            "for |G| = eps^2 / (2 |mu_n|): integral of S 1_G = |mu_n||G| and |{{S 1_G > eps}}| <= |mu_n||G|/eps < eps = {}",
            format_rational(&eps)
        ),
        format!("{} measures checked", ctx.seq.len()),
        all_ok,
    );
    out.checks.last_mut().unwrap().witness = first_fail.map(|n| format!("n = {n}"));
    out.result = to_value(&report);
    out.tables.push(table);
    Ok(out)
}
