//! End-to-end acceptance run. Prints one line per criterion and exits
//! non-zero if any of them fails.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::path::Path;
use std::process::{Command, ExitCode};
use std::sync::Arc;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sweepout::builder::{
    build_eg, build_witness, certify_eg, separation_check, unique_sum_check, verify_witness,
    EgOptions, MaxReading, VerifyMode, VerifyOptions, WitnessOptions, DEFAULT_BRUTE_FORCE_CAP,
};
use sweepout::exactreal::{rat, GeneratorBasis, IntervalSet, OpenInterval, Point, Rational};
use sweepout::lambda::{find_lambda, lambda_profile, recheck_lambda, FindOptions, ProfileOptions};
use sweepout::lattice::{
    decompose, interval_count_ratio, shift_closure_check, LatticeSpec, DEFAULT_ENUMERATION_CAP,
};
use sweepout::measure::{
    chebyshev_check, check_condition_one, ConditionOptions, DiscreteMeasure, MeasureSequence,
};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn within(limit: Duration, start: Instant) -> Result<(), String> {
    let t = start.elapsed();
    ensure(t <= limit, format!("took {:.2?}, limit {:?}", t, limit))
}

fn surds() -> Arc<GeneratorBasis> {
    GeneratorBasis::surds(&[2, 3]).unwrap()
}

/// `{sqrt2 / 8, sqrt3 / 4}`.
fn support() -> Vec<Point> {
    let b = surds();
    vec![
        Point::generator(&b, 1, rat(1, 8)),
        Point::generator(&b, 2, rat(1, 4)),
    ]
}

/// `mu_n = (delta_{sqrt2 4^-n} + delta_{sqrt3 4^-n}) / 2`.
fn sequence(count: usize) -> MeasureSequence {
    let b = surds();
    let atoms = [
        Point::generator(&b, 1, rat(1, 1)),
        Point::generator(&b, 2, rat(1, 1)),
    ];
    MeasureSequence::geometric(&atoms, &[rat(1, 2), rat(1, 2)], &rat(1, 4), count).unwrap()
}

fn density() -> Outcome {
    let start = Instant::now();
    let x = support();
    let spec = decompose(&x).map_err(|e| e.to_string())?;
    let b = spec.basis().clone();
    let interval = OpenInterval::new(Point::zero(&b), Point::rational(&b, rat(2, 5))).unwrap();
    let r = interval_count_ratio(&spec, 200, &interval, DEFAULT_ENUMERATION_CAP)
        .map_err(|e| e.to_string())?;
    within(Duration::from_secs(10), start)?;

    // oracle: every tuple |n1| <= 200, |n2| <= 401 evaluated in f64
    let (s2, s3) = (2f64.sqrt() / 8.0, 3f64.sqrt() / 4.0);
    let mut count = 0u64;
    let mut margin = f64::INFINITY;
    for n1 in -200i64..=200 {
        for n2 in -401i64..=401 {
            let v = n1 as f64 * s2 + n2 as f64 * s3;
            if (n1, n2) != (0, 0) {
                margin = margin.min(v.abs()).min((v - 0.4).abs());
            }
            if v > 0.0 && v < 0.4 {
                count += 1;
            }
        }
    }
    ensure(
        margin > 1e-9,
        format!("oracle margin {margin:e} too small for f64"),
    )?;
    ensure(
        count == r.count,
        format!("count {} vs oracle {}", r.count, count),
    )?;
    let gamma = 8.0 / 3f64.sqrt();
    let oracle_ratio = count as f64 / (gamma * 200.0 * 0.4);
    let (lo, hi) = (r.ratio.lo.clone(), r.ratio.hi.clone());
    ensure(
        lo >= rat(9, 10) && hi <= rat(11, 10),
        format!("ratio enclosure [{lo}, {hi}] outside [0.9, 1.1]"),
    )?;
    ensure(
        (r.row().ratio - oracle_ratio).abs() < 1e-9,
        "ratio disagrees with oracle",
    )?;
    Ok(format!(
        "#(A_200 ∩ I) = {count}, ratio = {:.6}",
        oracle_ratio
    ))
}

fn closure() -> Outcome {
    let start = Instant::now();
    let x = support();
    let spec = decompose(&x).map_err(|e| e.to_string())?;
    for m in 1..=20 {
        let r = shift_closure_check(&spec, &x, m, DEFAULT_ENUMERATION_CAP)
            .map_err(|e| e.to_string())?;
        ensure(r.holds, format!("m = {m}: {:?}", r.violation))?;
    }
    let corrupt = LatticeSpec::from_parts_unchecked(
        spec.y().to_vec(),
        spec.coeffs().to_vec(),
        spec.p() * BigInt::from(2),
        spec.tau(),
    )
    .map_err(|e| e.to_string())?;
    let mut caught = None;
    for m in 1..=20 {
        let r = shift_closure_check(&corrupt, &x, m, DEFAULT_ENUMERATION_CAP)
            .map_err(|e| e.to_string())?;
        if !r.holds {
            caught = Some((m, r.violation));
            break;
        }
    }
    let (m, violation) = caught.ok_or("corrupted spec passed every level")?;
    ensure(violation.is_some(), "failure without a witness")?;
    within(Duration::from_secs(5), start)?;
    Ok(format!("m = 1..20 closed; doubled p fails at m = {m}"))
}

fn random_measure(rng: &mut ChaCha8Rng) -> DiscreteMeasure {
    if rng.random_bool(0.5) {
        let q = GeneratorBasis::rational();
        let mut atoms = BTreeMap::new();
        for _ in 0..rng.random_range(1..=4) {
            atoms.insert(rng.random_range(1i64..64), rng.random_range(1i64..=8));
        }
        let (pts, ms) = atoms
            .into_iter()
            .map(|(a, m)| (Point::rational(&q, rat(a, 64)), rat(m, 8)))
            .unzip();
        DiscreteMeasure::new(pts, ms).unwrap()
    } else {
        let b = surds();
        let mut atoms = BTreeSet::new();
        for _ in 0..rng.random_range(1..=3) {
            atoms.insert((rng.random_range(1usize..=2), rng.random_range(1i64..=8)));
        }
        let n = atoms.len() as i64;
        let pts = atoms
            .into_iter()
            .map(|(g, c)| Point::generator(&b, g, rat(c, 16)))
            .collect();
        DiscreteMeasure::new(pts, vec![rat(1, n); n as usize]).unwrap()
    }
}

fn lambda() -> Outcome {
    let start = Instant::now();
    let q = GeneratorBasis::rational();
    let mu = DiscreteMeasure::dirac(Point::rational(&q, rat(1, 4))).unwrap();
    let eps = rat(1, 4);
    let choice =
        find_lambda(&mu, &eps, &rat(1, 10), &FindOptions::default()).map_err(|e| e.to_string())?;
    ensure(
        choice.lambda <= rat(1, 24),
        format!("lambda = {} > 1/24", choice.lambda),
    )?;
    let re = recheck_lambda(&mu, &eps, &choice.lambda, 1000).map_err(|e| e.to_string())?;
    ensure(
        re.holds && re.min_value == rat(1, 1) && re.threshold == rat(1, 4),
        format!("recheck min {} vs {}", re.min_value, re.threshold),
    )?;

    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let opts = ProfileOptions {
        floor_ratio: rat(1, 100),
        ..ProfileOptions::default()
    };
    let epsilons = [rat(1, 10), rat(1, 8), rat(1, 6), rat(1, 4), rat(3, 10)];
    for i in 0..50 {
        let mu = random_measure(&mut rng);
        let eps = &epsilons[rng.random_range(0..epsilons.len())];
        let p =
            lambda_profile(&mu, eps, &rat(1, 10), &opts).map_err(|e| format!("case {i}: {e}"))?;
        let r = p.integral().map_err(|e| format!("case {i}: {e}"))?;
        ensure(
            r.holds,
            format!(
                "case {i}: integral >= {} < bound {}",
                r.lower,
                r.bound.to_f64()
            ),
        )?;
    }
    within(Duration::from_secs(10), start)?;
    Ok(format!(
        "lambda = {}, recheck value 1 > 1/4, 50/50 integral bounds",
        choice.lambda
    ))
}

fn eg_pair() -> Outcome {
    let start = Instant::now();
    let x = support();
    let mu = DiscreteMeasure::new(x, vec![rat(1, 2), rat(1, 2)]).unwrap();
    let eps = rat(1, 6);
    let built = build_eg(&mu, 1, &eps, &EgOptions::default()).map_err(|e| e.to_string())?;
    let pair = &built.pair;
    let g: HashSet<&Point> = pair.g.iter().collect();
    ensure(pair.e.iter().all(|x| !g.contains(x)), "E and G intersect")?;
    ensure(
        Rational::from_integer(pair.e.len().into())
            > Rational::from_integer(pair.g.len().into()) * rat(1, 24),
        format!("#E = {}, #G = {}", pair.e.len(), pair.g.len()),
    )?;
    let threshold = (rat(1, 1) - rat(3, 1) * &eps) * mu.total_mass();
    for x in &pair.e {
        let v: Rational = mu
            .atoms()
            .iter()
            .zip(mu.masses())
            .filter(|(t, _)| g.contains(&(x + *t)))
            .map(|(_, m)| m.clone())
            .sum();
        ensure(v > threshold, format!("S 1_G({x}) = {v} <= {threshold}"))?;
    }
    ensure(
        certify_eg(pair, &mu).map_err(|e| e.to_string())?.holds(),
        "certificate rejects the pair",
    )?;
    within(Duration::from_secs(60), start)?;
    Ok(format!(
        "m = {}, #E = {}, #G = {}",
        pair.m,
        pair.e.len(),
        pair.g.len()
    ))
}

fn sumset_oracle(sets: &[Vec<Point>]) -> bool {
    let mut acc = vec![Point::zero(sets[0][0].basis())];
    for s in sets {
        acc = acc
            .iter()
            .flat_map(|a| s.iter().map(move |x| a + x))
            .collect();
    }
    let n = acc.len();
    acc.into_iter().collect::<HashSet<_>>().len() == n
}

fn unique_sums() -> Outcome {
    let start = Instant::now();
    let q = GeneratorBasis::rational();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let (mut tried, mut separated) = (0, 0);
    while tried < 400 {
        let n = rng.random_range(2..=4);
        let s = rng.random_range(2i64..=6);
        let sets: Vec<Vec<Point>> = (0..n)
            .map(|k| {
                let size = rng.random_range(1..=4);
                let mut v: Vec<i64> = (0..size).map(|_| rng.random_range(-12i64..=12)).collect();
                v.sort();
                v.dedup();
                v.into_iter()
                    .map(|a| Point::rational(&q, rat(a, 12 * s.pow(k))))
                    .collect()
            })
            .collect();
        if sets.iter().any(|s| s.len() == 1 && s[0].is_zero()) {
            continue;
        }
        tried += 1;
        let sep = separation_check(&sets, MaxReading::Absolute).map_err(|e| e.to_string())?;
        let uniq = unique_sum_check(&sets, DEFAULT_BRUTE_FORCE_CAP).map_err(|e| e.to_string())?;
        ensure(
            uniq.holds == sumset_oracle(&sets),
            "unique_sum_check disagrees with the sumset oracle",
        )?;
        if sep.holds {
            separated += 1;
            ensure(
                uniq.holds,
                format!("separated family with a collision: {:?}", uniq.collision),
            )?;
        }
    }
    let known = [
        vec![
            Point::rational(&q, rat(1, 1)),
            Point::rational(&q, rat(2, 1)),
        ],
        vec![
            Point::rational(&q, rat(1, 2)),
            Point::rational(&q, rat(3, 2)),
        ],
    ];
    ensure(
        !separation_check(&known, MaxReading::Absolute)
            .unwrap()
            .holds,
        "separation accepts {1,2},{0.5,1.5}",
    )?;
    ensure(
        !unique_sum_check(&known, DEFAULT_BRUTE_FORCE_CAP)
            .unwrap()
            .holds,
        "unique sums accept {1,2},{0.5,1.5}",
    )?;
    within(Duration::from_secs(10), start)?;
    Ok(format!(
        "{tried} families, {separated} separated, 0 exceptions; known collision rejected"
    ))
}

fn explicit_witness() -> Outcome {
    let start = Instant::now();
    let seq = sequence(40);
    let opts = WitnessOptions {
        trim: Some((4, 4)),
        ..WitnessOptions::default()
    };
    let w = build_witness(&seq, &rat(1, 12), &rat(1, 2), &opts)
        .map_err(|e| e.to_string())?
        .witness;
    ensure(w.m() == 3, format!("m = {}", w.m()))?;
    ensure(
        w.factors.iter().all(|f| f.e.len() + f.g.len() <= 4),
        "factors not trimmed",
    )?;
    let r = verify_witness(&w, &seq, VerifyMode::Explicit, &VerifyOptions::default())
        .map_err(|e| e.to_string())?;
    let failed: Vec<&str> = r.failures().map(|c| c.name.as_str()).collect();
    ensure(r.passed, format!("failed checks {failed:?}"))?;
    for name in ["explicit_measure", "explicit_sup"] {
        ensure(
            r.checks.iter().any(|c| c.name == name && c.pass),
            format!("{name} missing"),
        )?;
    }
    within(Duration::from_secs(120), start)?;
    let sup = r.checks.iter().find(|c| c.name == "explicit_sup").unwrap();
    Ok(format!(
        "m = 3, #E = {}, #G = {}, {}",
        w.e_count, w.g_count, sup.computed
    ))
}

fn factored_witness() -> Outcome {
    let start = Instant::now();
    let seq = sequence(60);
    let big_delta = rat(1, 4);
    let w = build_witness(&seq, &big_delta, &rat(1, 2), &WitnessOptions::default())
        .map_err(|e| e.to_string())?
        .witness;
    ensure(w.m() == 7, format!("m = {}", w.m()))?;
    ensure(
        Rational::from_integer(w.e_count.clone())
            > &big_delta * Rational::from_integer(w.g_count.clone()),
        "#E <= Delta #G",
    )?;
    let r = verify_witness(&w, &seq, VerifyMode::FactorExact, &VerifyOptions::default())
        .map_err(|e| e.to_string())?;
    let failed: Vec<&str> = r.failures().map(|c| c.name.as_str()).collect();
    ensure(r.passed, format!("failed checks {failed:?}"))?;
    let sups = r
        .checks
        .iter()
        .filter(|c| c.name.starts_with("factor_sup["))
        .count();
    ensure(sups == 7, format!("{sups} factor_sup checks"))?;
    within(Duration::from_secs(120), start)?;
    Ok(format!(
        "m = 7, #E = {}, #G = {}, indices {:?}",
        w.e_count, w.g_count, w.indices
    ))
}

/// `S_mu 1_G` at `x`, straight from the definition on the torus.
fn convolution_oracle(
    atoms: &[(Rational, Rational)],
    g: &[(Rational, Rational)],
    x: &Rational,
) -> Rational {
    let mut v = rat(0, 1);
    for (a, m) in atoms {
        let y = x + a;
        let y = &y - Rational::from_integer(y.floor().to_integer());
        if g.iter().any(|(lo, hi)| *lo < y && y < *hi) {
            v += m;
        }
    }
    v
}

fn conditions() -> Outcome {
    let start = Instant::now();
    let seq = sequence(40);
    let deltas = [rat(1, 2), rat(1, 10), rat(1, 100), rat(1, 1000), rat(3, 7)];
    let r = check_condition_one(&seq, &deltas, &ConditionOptions::default())
        .map_err(|e| e.to_string())?;
    ensure(r.total_masses.iter().all(|m| m == "1"), "some |mu_n| != 1")?;
    ensure(r.mass_tail_index == Some(1), "mass tail index")?;
    let mut tails = Vec::new();
    for (d, report) in deltas.iter().zip(&r.per_delta) {
        let df = d.numer().to_string().parse::<f64>().unwrap()
            / d.denom().to_string().parse::<f64>().unwrap();
        // smallest n >= 1 with 1.733 4^-n < delta
        let expected = (1..).find(|&n| 1.733 * 4f64.powi(-n) < df).unwrap() as usize;
        ensure(
            report.tail_index == Some(expected),
            format!(
                "delta {d}: tail {:?}, closed form {expected}",
                report.tail_index
            ),
        )?;
        tails.push(format!("{d}->{expected}"));
    }

    let q = GeneratorBasis::rational();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for i in 0..50 {
        let mut atoms = BTreeMap::new();
        for _ in 0..rng.random_range(1..=4) {
            atoms.insert(rng.random_range(1i64..64), rng.random_range(1i64..=8));
        }
        let atoms: Vec<(Rational, Rational)> = atoms
            .into_iter()
            .map(|(a, m)| (rat(a, 64), rat(m, 8)))
            .collect();
        let mu = DiscreteMeasure::new(
            atoms
                .iter()
                .map(|(a, _)| Point::rational(&q, a.clone()))
                .collect(),
            atoms.iter().map(|(_, m)| m.clone()).collect(),
        )
        .unwrap();
        let mut g = Vec::new();
        for _ in 0..rng.random_range(1..=3) {
            let lo = rng.random_range(0i64..31);
            let hi = rng.random_range(lo + 1..=32);
            g.push((rat(lo, 32), rat(hi, 32)));
        }
        let gset = IntervalSet::canonicalize(
            &q,
            g.iter()
                .map(|(a, b)| {
                    (
                        Point::rational(&q, a.clone()),
                        Point::rational(&q, b.clone()),
                    )
                })
                .collect(),
        )
        .unwrap();
        let g: Vec<(Rational, Rational)> = gset
            .intervals()
            .iter()
            .map(|iv| {
                (
                    iv.lo.as_rational().unwrap().clone(),
                    iv.hi.as_rational().unwrap().clone(),
                )
            })
            .collect();
        let eps = rat(rng.random_range(1..16), 16);
        let report = chebyshev_check(&mu, &gset, &eps).map_err(|e| format!("case {i}: {e}"))?;
        // every cut is a multiple of 1/64, so cell midpoints decide the level set
        let cells = (0..64)
            .filter(|k| convolution_oracle(&atoms, &g, &rat(2 * k + 1, 128)) > eps)
            .count();
        let level = report
            .level_measure
            .as_rational()
            .cloned()
            .ok_or("irrational level measure")?;
        ensure(
            level == rat(cells as i64, 64),
            format!("case {i}: level {level} vs oracle {cells}/64"),
        )?;
        let bound = report.bound.as_rational().cloned().unwrap();
        ensure(
            level <= bound && report.bound_holds,
            format!("case {i}: {level} > {bound}"),
        )?;
    }
    within(Duration::from_secs(10), start)?;
    Ok(format!(
        "|mu_n| = 1, tails {}, 50/50 chebyshev cases",
        tails.join(" ")
    ))
}

fn snapshot(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    std::fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (
                e.file_name().to_string_lossy().into_owned(),
                std::fs::read(e.path()).unwrap(),
            )
        })
        .collect()
}

fn determinism() -> Outcome {
    let configs = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs");
    let runs: &[(&str, &[&str])] = &[
        (
            "geometric.json",
            &[
                "decompose",
                "lattice-count",
                "find-lambda",
                "build-eg",
                "build-witness",
                "verify",
                "trace",
                "check-conditions",
            ],
        ),
        ("factored.json", &["build-witness", "verify"]),
    ];
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut compared = 0;
    for (cfg, commands) in runs {
        let out = dir.path().join(cfg.trim_end_matches(".json"));
        let mut first = None;
        for _ in 0..2 {
            for cmd in *commands {
                let o = Command::new(env!("CARGO_BIN_EXE_sweepout"))
                    .args([*cmd, "--seed", "7", "--config"])
                    .arg(configs.join(cfg))
                    .arg("--out")
                    .arg(&out)
                    .output()
                    .map_err(|e| e.to_string())?;
                ensure(
                    o.status.success(),
                    format!("{cfg} {cmd} exited {:?}", o.status.code()),
                )?;
            }
            let snap = snapshot(&out);
            match &first {
                None => first = Some(snap),
                Some(prev) => {
                    for (name, bytes) in prev {
                        ensure(
                            snap.get(name) == Some(bytes),
                            format!("{cfg}: {name} differs between runs"),
                        )?;
                    }
                    compared += prev.len();
                }
            }
        }
    }
    Ok(format!(
        "{compared} output files byte-identical across two runs"
    ))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("lattice density at m = 200", density),
        ("shift closure up to m = 20", closure),
        ("lambda search and averaging bound", lambda),
        ("witness pair invariants", eg_pair),
        ("separation implies unique sums", unique_sums),
        ("explicit witness at m = 3", explicit_witness),
        ("factored witness at m = 7", factored_witness),
        ("concentration and chebyshev", conditions),
        ("deterministic reports", determinism),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        match f() {
            Ok(detail) => println!(
                "criterion {}: PASS {name}: {detail} ({:.2?})",
                i + 1,
                start.elapsed()
            ),
            Err(why) => {
                failed += 1;
                println!(
                    "criterion {}: FAIL {name}: {why} ({:.2?})",
                    i + 1,
                    start.elapsed()
                );
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
