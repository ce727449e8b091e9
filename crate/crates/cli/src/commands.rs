use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::{json, Value};

use monocorr::bounds::BoundReport;
use monocorr::cube::MAX_N;
use monocorr::families::{
    example31, example32, example32_within, example54, hamming_ball_mu, majority, tribes,
    FamilySpec,
};
use monocorr::verify::{
    check_comparison, check_harris, check_suf1, cormaj_score, run_property_suite, scan,
    CheckResult, PropertySuiteConfig, ScanGenerator, ScanTarget,
};
use monocorr::{Error, FunctionTable, TableFile, ValueKind};

use crate::error::{usage, CliError};
use crate::output::{csv_line, json, jsonl};
use crate::{Cli, Command, Common, Format, Inputs, PairArgs, ScanArgs, VerifyArgs, DEFAULT_N_CAP};

/// ε values of the noise-stability grid printed by `analyze`.
const NS_GRID: [f64; 6] = [0.01, 0.05, 0.1, 0.2, 0.3, 0.5];

/// Highest level printed by `analyze`.
const MAX_LEVEL: usize = 4;

pub struct Outcome {
    pub text: String,
    /// False when some check failed; the process then exits with 1.
    pub passed: bool,
}

impl Outcome {
    fn ok(text: String) -> Self {
        Outcome { text, passed: true }
    }
}

pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    let c = &cli.common;
    match &cli.command {
        Command::Analyze(inputs) => analyze(c, inputs),
        Command::Bounds(inputs) => bounds(c, inputs),
        Command::Pair(args) => pair(c, args),
        Command::Verify(args) => verify(c, args),
        Command::Scan(args) => run_scan(c, args),
    }
}

fn cap(c: &Common) -> usize {
    if c.allow_large {
        MAX_N
    } else {
        DEFAULT_N_CAP
    }
}

fn check_cap(c: &Common, n: usize) -> Result<(), CliError> {
    let cap = cap(c);
    if n > cap {
        return Err(Error::TooLarge { n, cap }.into());
    }
    Ok(())
}

fn load_inputs(c: &Common, inputs: &Inputs) -> Result<Vec<FunctionTable>, CliError> {
    let mut out = Vec::new();
    for s in &inputs.spec {
        let spec: FamilySpec = serde_json::from_str(s)
            .map_err(|e| Error::Input(format!("bad family spec `{s}`: {e}")))?;
        check_cap(c, spec.n())?;
        out.push(spec.materialize()?);
    }
    for path in &inputs.table {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        })?;
        let file = TableFile::from_json(&text)?;
        check_cap(c, file.n())?;
        out.push(file.into_table()?);
    }
    Ok(out)
}

fn exactly<const K: usize>(c: &Common, inputs: &Inputs) -> Result<[FunctionTable; K], CliError> {
    let tables = load_inputs(c, inputs)?;
    let got = tables.len();
    tables.try_into().map_err(|_| {
        usage(format!(
            "expected {K} function(s) from --spec/--table, got {got}"
        ))
    })
}

#[derive(Serialize)]
struct NsPoint {
    eps: f64,
    ns: f64,
}

#[derive(Serialize)]
struct Analysis {
    n: usize,
    kind: ValueKind,
    is_monotone: bool,
    mean: f64,
    influences: Vec<f64>,
    total_influence: f64,
    is_regular: bool,
    tau_regularity: f64,
    /// Spectral mass at levels 0..=min(4, n).
    level_weights: Vec<f64>,
    /// Computed on the ±1 form; empty for bounded tables.
    noise_stability: Vec<NsPoint>,
}

fn analyze(c: &Common, inputs: &Inputs) -> Result<Outcome, CliError> {
    let [f] = exactly::<1>(c, inputs)?;
    let profile = f.influences();
    let mut level_weights = f.spectrum().level_masses();
    level_weights.truncate(MAX_LEVEL.min(f.n()) + 1);
    let signed = match f.kind() {
        ValueKind::SignedPm1 => Some(f.clone()),
        ValueKind::Indicator01 => Some(f.to_signed()?),
        ValueKind::Bounded => None,
    };
    let noise_stability = match signed {
        Some(s) => NS_GRID
            .iter()
            .map(|&eps| {
                Ok(NsPoint {
                    eps,
                    ns: s.noise_stability(eps)?,
                })
            })
            .collect::<Result<_, Error>>()?,
        None => Vec::new(),
    };
    let a = Analysis {
        n: f.n(),
        kind: f.kind(),
        is_monotone: f.is_monotone(),
        mean: f.mean(),
        is_regular: profile.is_regular(),
        total_influence: profile.total,
        influences: profile.influences,
        tau_regularity: f.tau_regularity(),
        level_weights,
        noise_stability,
    };
    let text = match c.format {
        Format::Json => json(&a),
        Format::Csv => {
            let mut s = csv_line(["field", "value"]);
            s += &csv_line(["n".to_string(), a.n.to_string()]);
            s += &csv_line(["kind".to_string(), a.kind.to_string()]);
            s += &csv_line(["is_monotone".to_string(), a.is_monotone.to_string()]);
            s += &csv_line(["mean".to_string(), a.mean.to_string()]);
            for (i, v) in a.influences.iter().enumerate() {
                s += &csv_line([format!("influence_{i}"), v.to_string()]);
            }
            s += &csv_line(["total_influence".to_string(), a.total_influence.to_string()]);
            s += &csv_line(["is_regular".to_string(), a.is_regular.to_string()]);
            s += &csv_line(["tau_regularity".to_string(), a.tau_regularity.to_string()]);
            for (d, v) in a.level_weights.iter().enumerate() {
                s += &csv_line([format!("level_weight_{d}"), v.to_string()]);
            }
            for p in &a.noise_stability {
                s += &csv_line([format!("ns_{}", p.eps), p.ns.to_string()]);
            }
            s
        }
    };
    Ok(Outcome::ok(text))
}

fn report_csv(r: &BoundReport) -> String {
    format!("{}\n{}\n", BoundReport::csv_header(), r.csv_row())
}

fn bounds(c: &Common, inputs: &Inputs) -> Result<Outcome, CliError> {
    let [f, g] = exactly::<2>(c, inputs)?;
    let r = BoundReport::new(&f, &g)?;
    Ok(Outcome::ok(match c.format {
        Format::Json => json(&r),
        Format::Csv => report_csv(&r),
    }))
}

#[derive(Serialize)]
struct PairReport {
    name: String,
    params: BTreeMap<String, Value>,
    report: BoundReport,
    checks: Vec<CheckResult>,
}

fn pair(c: &Common, args: &PairArgs) -> Result<Outcome, CliError> {
    let a_or = |d: f64| args.a.unwrap_or(d);
    let n_or = |d: usize| args.n.unwrap_or(d);
    let mut params = BTreeMap::new();
    let (f, g, mut checks) = match args.name.as_str() {
        "talagrand_ball" => {
            let (n, a) = (n_or(20), a_or(0.05));
            check_cap(c, n)?;
            let ball = hamming_ball_mu(n, a)?;
            params.insert("t".into(), json!(ball.t));
            params.insert("mu".into(), json!(ball.mu));
            insert_na(&mut params, n, Some(a));
            let dual = ball.table.dual()?;
            let suf1 = check_suf1(&ball.table)?;
            (ball.table, dual, vec![suf1])
        }
        "tribes_dual" => {
            let (n, r) = (n_or(16), args.r.unwrap_or(4));
            check_cap(c, n)?;
            let t = tribes(n, r)?;
            params.insert("r".into(), json!(r));
            insert_na(&mut params, n, None);
            let dual = t.dual()?;
            let suf1 = check_suf1(&t)?;
            (t, dual, vec![suf1])
        }
        "example31" => {
            let (n, a) = (n_or(12), a_or(0.125));
            check_cap(c, n + 1)?;
            let e = example31(n, a)?;
            insert_na(&mut params, n, Some(a));
            params.insert("t_a".into(), json!(e.base.t));
            params.insert("mu_a".into(), json!(e.base.mu));
            params.insert("t_b".into(), json!(e.b_prime.t));
            params.insert("mu_b".into(), json!(e.b_prime.mu));
            (e.a_prime, e.b_prime.table, Vec::new())
        }
        "example32" => {
            let (n, a) = (n_or(12), a_or(0.125));
            let e = example32_within(n, a, cap(c))?;
            insert_na(&mut params, n, Some(a));
            params.insert("ell".into(), json!(e.ell));
            params.insert("influence_gap".into(), json!(e.influence_gap));
            params.insert("mu_a".into(), json!(e.base.mu));
            params.insert("mu_b".into(), json!(e.dual_ball.mu));
            params.insert("mu_c".into(), json!(e.c_ball.mu));
            (e.a_prime, e.b_prime, Vec::new())
        }
        "example54" => {
            let (n, a) = (n_or(13), a_or(0.25));
            check_cap(c, n)?;
            let e = example54(n, a)?;
            insert_na(&mut params, n, Some(a));
            params.insert("theta1".into(), json!(e.theta1));
            params.insert("theta2".into(), json!(e.theta2));
            params.insert("nested".into(), json!(e.nested));
            (e.f1, e.f2, Vec::new())
        }
        "cormaj" => {
            let (n, r) = (n_or(16), args.r.unwrap_or(4));
            check_cap(c, n + n.is_multiple_of(2) as usize)?;
            let t = tribes(n, r)?;
            let score = cormaj_score(&t)?;
            params.insert("r".into(), json!(r));
            insert_na(&mut params, n, None);
            params.insert(
                "cormaj".into(),
                serde_json::to_value(&score).expect("serializable"),
            );
            let t = if t.n() == score.m {
                t
            } else {
                t.extend(score.m)?
            };
            (t, majority(score.m)?, Vec::new())
        }
        other => {
            return Err(usage(format!(
                "unknown pair `{other}`; expected talagrand_ball, tribes_dual, example31, \
                 example32, example54 or cormaj"
            )))
        }
    };
    let report = BoundReport::new(&f, &g)?;
    checks.insert(0, check_harris(&f, &g)?);
    checks.insert(1, check_comparison(&f, &g)?);
    let passed = checks.iter().all(|r| r.passed);
    let text = match c.format {
        Format::Json => json(&PairReport {
            name: args.name.clone(),
            params,
            report,
            checks,
        }),
        Format::Csv => report_csv(&report),
    };
    Ok(Outcome { text, passed })
}

fn insert_na(params: &mut BTreeMap<String, Value>, n: usize, a: Option<f64>) {
    params.insert("n".into(), json!(n));
    if let Some(a) = a {
        params.insert("a".into(), json!(a));
    }
}

fn summary_csv(results: &[CheckResult]) -> String {
    let mut s = csv_line(["name", "passed", "implied_constant", "witness"]);
    for r in results {
        s += &csv_line([
            r.name.clone(),
            r.passed.to_string(),
            r.implied_constant
                .map(|v| v.to_string())
                .unwrap_or_default(),
            r.witness.clone().unwrap_or_default(),
        ]);
    }
    s
}

fn verify(c: &Common, args: &VerifyArgs) -> Result<Outcome, CliError> {
    if args.n_min < 1 || args.n_min > args.n_max {
        return Err(usage(format!(
            "need 1 <= n-min <= n-max, got {}..={}",
            args.n_min, args.n_max
        )));
    }
    if args.pairs == 0 {
        return Err(usage("--pairs must be at least 1"));
    }
    check_cap(c, args.n_max)?;
    let cfg = PropertySuiteConfig {
        seed: args.seed,
        n_min: args.n_min,
        n_max: args.n_max,
        pairs: args.pairs,
        ..PropertySuiteConfig::default()
    };
    let results = run_property_suite(&cfg)?;
    let passed = results.iter().all(|r| r.passed);
    let text = match c.format {
        Format::Json => jsonl(&results),
        Format::Csv => summary_csv(&results),
    };
    Ok(Outcome { text, passed })
}

fn generator_n(g: &ScanGenerator) -> usize {
    match g {
        ScanGenerator::RandomMonotonePairs { n_max, .. } => *n_max,
        ScanGenerator::Example31 { n, .. } | ScanGenerator::Example32 { n, .. } => n + 1,
    }
}

fn run_scan(c: &Common, args: &ScanArgs) -> Result<Outcome, CliError> {
    let target: ScanTarget = args.target.parse()?;
    let generator = match &args.generator {
        Some(s) => serde_json::from_str(s)
            .map_err(|e| Error::Input(format!("bad generator `{s}`: {e}")))?,
        None => ScanGenerator::RandomMonotonePairs {
            n_min: 4.min(args.n_max),
            n_max: args.n_max,
            k_max: 6,
        },
    };
    check_cap(c, generator_n(&generator))?;
    if let ScanGenerator::Example32 { n, a_grid } = &generator {
        // the block length search ranges up to the library maximum
        for &a in a_grid {
            check_cap(c, n + example32(*n, a)?.ell)?;
        }
    }
    let r = scan(&generator, target, args.budget, args.seed)?;
    let text = match c.format {
        Format::Json => json(&r),
        Format::Csv => summary_csv(std::slice::from_ref(&r)),
    };
    Ok(Outcome {
        passed: r.passed,
        text,
    })
}
