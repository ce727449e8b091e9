//! Seeded pair generators, the standard suites behind the implied-constant
//! fixtures, and the property suite run by `monocorr verify`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;

use super::{
    chang_constant, check_comparison, check_duality, check_harris, check_noise_monotone,
    check_or_extension, check_suf1, check_suf2, lemma_talagrand_constant, scalar_lemma_suite,
    CheckResult, ConstantTracker,
};
use crate::bounds::BoundReport;
use crate::cube::{FunctionTable, ValueKind};
use crate::error::Result;
use crate::families::{hamming_ball, majority, FamilySpec};

/// Two specs evaluated together, with a label for reports.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuitePair {
    pub label: String,
    pub f: FamilySpec,
    pub g: FamilySpec,
}

impl SuitePair {
    fn new(label: impl Into<String>, f: FamilySpec, g: FamilySpec) -> Self {
        SuitePair {
            label: label.into(),
            f,
            g,
        }
    }

    pub fn materialize(&self) -> Result<(FunctionTable, FunctionTable)> {
        Ok((self.f.materialize()?, self.g.materialize()?))
    }

    /// JSON object that replays this pair.
    pub fn witness(&self, seed: Option<u64>, index: Option<usize>) -> String {
        json!({"label": self.label, "f": self.f, "g": self.g, "seed": seed, "index": index})
            .to_string()
    }
}

fn random_side(rng: &mut ChaCha8Rng, n: usize, k_max: usize) -> FamilySpec {
    let base = FamilySpec::RandomMonotone {
        n,
        seed: rng.random(),
        k: rng.random_range(1..=k_max),
    };
    if rng.random_bool(0.5) {
        FamilySpec::DualOf {
            inner: Box::new(base),
        }
    } else {
        base
    }
}

/// Instance `index` of the random pair stream for `seed`: n uniform in
/// `n_min..=n_max`, each side a union of 1..=k_max upsets, dualized with
/// probability 1/2. Streams are independent per index, so any instance can be
/// regenerated alone.
pub fn random_pair_spec(
    seed: u64,
    index: u64,
    n_min: usize,
    n_max: usize,
    k_max: usize,
) -> SuitePair {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    let n = rng.random_range(n_min..=n_max);
    let f = random_side(&mut rng, n, k_max.max(1));
    let g = random_side(&mut rng, n, k_max.max(1));
    SuitePair::new(format!("random[{seed}:{index}]"), f, g)
}

pub fn random_pairs(
    seed: u64,
    count: usize,
    n_min: usize,
    n_max: usize,
    k_max: usize,
) -> Vec<SuitePair> {
    (0..count as u64)
        .map(|i| random_pair_spec(seed, i, n_min, n_max, k_max))
        .collect()
}

/// Seed of the random part of [`standard_suite`].
pub const STANDARD_SEED: u64 = 1729;

fn ball(n: usize, t: usize) -> FamilySpec {
    FamilySpec::HammingBall {
        n,
        t: Some(t),
        a: None,
    }
}

fn dual(s: FamilySpec) -> FamilySpec {
    FamilySpec::DualOf { inner: Box::new(s) }
}

/// Balls, tribes, threshold functions and seeded random pairs with n ≤ 12.
pub fn standard_suite() -> Vec<SuitePair> {
    let mut out = Vec::new();
    for n in [6, 9, 12] {
        for t in n / 2..n {
            out.push(SuitePair::new(
                format!("ball({n},{t})+dual"),
                ball(n, t),
                dual(ball(n, t)),
            ));
            out.push(SuitePair::new(
                format!("ball({n},{t})+self"),
                ball(n, t),
                ball(n, t),
            ));
            if t + 2 < n {
                out.push(SuitePair::new(
                    format!("ball({n},{t})+ball({n},{})", t + 2),
                    ball(n, t),
                    ball(n, t + 2),
                ));
            }
        }
    }
    for (n, r) in [(6, 2), (6, 3), (8, 2), (8, 4), (9, 3), (12, 3), (12, 4)] {
        let t = FamilySpec::Tribes { n, r };
        out.push(SuitePair::new(
            format!("tribes({n},{r})+dual"),
            t.clone(),
            dual(t.clone()),
        ));
        out.push(SuitePair::new(
            format!("tribes({n},{r})+self"),
            t.clone(),
            t.clone(),
        ));
        out.push(SuitePair::new(
            format!("tribes({n},{r})+ball"),
            t,
            ball(n, n / 2),
        ));
    }
    for n in [6, 9, 12] {
        let weights: Vec<f64> = (1..=n).map(|i| i as f64).collect();
        let total: f64 = weights.iter().sum();
        for (tag, frac) in [("half", 0.5), ("high", 0.7), ("top", 0.85)] {
            let l = FamilySpec::Ltf {
                weights: weights.clone(),
                theta: (total * frac).round(),
            };
            out.push(SuitePair::new(
                format!("ltf({n},{tag})+dual"),
                l.clone(),
                dual(l.clone()),
            ));
            out.push(SuitePair::new(format!("ltf({n},{tag})+self"), l.clone(), l));
        }
    }
    out.extend(random_pairs(STANDARD_SEED, 40, 4, 12, 6));
    out
}

/// Pairs expected to be tight for the Talagrand bound: tribes(16, 4) with its dual
/// and Hamming balls with their duals.
pub fn tightness_suite() -> Vec<SuitePair> {
    let mut out = vec![SuitePair::new(
        "tribes(16,4)+dual",
        FamilySpec::Tribes { n: 16, r: 4 },
        dual(FamilySpec::Tribes { n: 16, r: 4 }),
    )];
    for (n, ts) in [(16, 9..=13), (20, 11..=16)] {
        for t in ts {
            out.push(SuitePair::new(
                format!("ball({n},{t})+dual"),
                ball(n, t),
                dual(ball(n, t)),
            ));
        }
    }
    out
}

fn as_kind(t: &FunctionTable, kind: ValueKind) -> Result<FunctionTable> {
    Ok(match (t.kind(), kind) {
        (a, b) if a == b => t.clone(),
        (_, ValueKind::SignedPm1) => t.to_signed()?,
        _ => t.to_indicator()?,
    })
}

/// Extremal implied constants over [`standard_suite`] and [`tightness_suite`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ImpliedConstants {
    /// SW_2/(SW_1 log(e/SW_1)) on ±1 tables.
    pub talagrand_signed: ConstantTracker,
    /// The same ratio on 0/1 tables.
    pub talagrand_indicator: ConstantTracker,
    /// Σ f̂({i})²/(E|f|² log(e/E|f|)) on 0/1 tables with μ ≤ 1/2.
    pub chang: ConstantTracker,
    /// Smallest Cov/φ(W_1) over the tightness pairs.
    pub tightness_min: f64,
    pub tightness_argmin: String,
}

pub fn implied_constants() -> Result<ImpliedConstants> {
    let mut tal_s = ConstantTracker::default();
    let mut tal_i = ConstantTracker::default();
    let mut chang = ConstantTracker::default();
    for pair in standard_suite() {
        let (f, g) = pair.materialize()?;
        let (fs, gs) = (
            as_kind(&f, ValueKind::SignedPm1)?,
            as_kind(&g, ValueKind::SignedPm1)?,
        );
        let (fi, gi) = (
            as_kind(&f, ValueKind::Indicator01)?,
            as_kind(&g, ValueKind::Indicator01)?,
        );
        tal_s.push(&pair.label, lemma_talagrand_constant(&fs, &gs)?);
        tal_i.push(&pair.label, lemma_talagrand_constant(&fi, &gi)?);
        for (side, t) in [("f", &fi), ("g", &gi)] {
            if let Some(c) = chang_constant(t)? {
                chang.push(&format!("{}:{side}", pair.label), c);
            }
        }
    }
    let mut tightness_min = f64::INFINITY;
    let mut tightness_argmin = String::new();
    for pair in tightness_suite() {
        let (f, g) = pair.materialize()?;
        let r = BoundReport::new(&f, &g)?.ratios.talagrand;
        if r < tightness_min {
            tightness_min = r;
            tightness_argmin = pair.label.clone();
        }
    }
    Ok(ImpliedConstants {
        talagrand_signed: tal_s,
        talagrand_indicator: tal_i,
        chang,
        tightness_min,
        tightness_argmin,
    })
}

/// Parameters of [`run_property_suite`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PropertySuiteConfig {
    pub seed: u64,
    pub n_min: usize,
    pub n_max: usize,
    pub pairs: usize,
    pub k_max: usize,
}

impl Default for PropertySuiteConfig {
    fn default() -> Self {
        PropertySuiteConfig {
            seed: 0,
            n_min: 4,
            n_max: 10,
            pairs: 500,
            k_max: 6,
        }
    }
}

type PairCheck = fn(&FunctionTable, &FunctionTable) -> Result<CheckResult>;

/// Runs every pair checker over the seeded random pairs, then the scalar grids
/// and the exact construction identities. One result per checker, in a fixed order.
pub fn run_property_suite(cfg: &PropertySuiteConfig) -> Result<Vec<CheckResult>> {
    let pairs = random_pairs(cfg.seed, cfg.pairs, cfg.n_min, cfg.n_max, cfg.k_max);
    let checks: [(&str, PairCheck); 4] = [
        ("harris", check_harris),
        ("noise_monotone", check_noise_monotone),
        ("comparison_claims", check_comparison),
        ("duality", |f, _| check_duality(f)),
    ];
    let per_pair: Vec<Vec<CheckResult>> = pairs
        .par_iter()
        .map(|p| {
            let (f, g) = p.materialize()?;
            checks.iter().map(|(_, c)| c(&f, &g)).collect()
        })
        .collect::<Result<_>>()?;

    let mut out = Vec::new();
    for (k, (name, _)) in checks.iter().enumerate() {
        let first_fail = per_pair.iter().position(|rs| !rs[k].passed);
        let mut r = CheckResult::new(format!("random_pairs/{name}"), first_fail.is_none())
            .detail("pairs", pairs.len())
            .detail("seed", cfg.seed)
            .detail("n_min", cfg.n_min)
            .detail("n_max", cfg.n_max);
        if let Some(i) = first_fail {
            r = r.with_witness(pairs[i].witness(Some(cfg.seed), Some(i)));
            r.set_detail(
                "failures",
                per_pair.iter().filter(|rs| !rs[k].passed).count(),
            );
        }
        out.push(r);
    }
    out.extend(scalar_lemma_suite());

    let n = cfg.n_max.clamp(2, 20);
    let mut suf1 = CheckResult::new(format!("ball_dual_identity/n={n}"), true);
    for t in n.div_ceil(2)..n {
        let a = hamming_ball(n, t)?;
        let r = check_suf1(&a)?;
        let cov = r.details["cov"].as_f64().unwrap_or(f64::NAN);
        let mu = a.mean();
        if !r.passed || (cov - mu * mu).abs() > 1e-12 {
            suf1.passed = false;
            suf1 = suf1.with_witness(json!({"kind": "hamming_ball", "n": n, "t": t}).to_string());
            break;
        }
    }
    out.push(suf1);

    let f1 = hamming_ball(4, 2)?;
    let f2 = f1.dual()?;
    let maj3 = majority(3)?;
    out.push(check_suf2(&f1, &f2, &vec![maj3; 4])?);
    for t in 0..cfg.n_max.min(12) {
        let r = check_or_extension(&hamming_ball(cfg.n_max.min(12), t)?)?;
        if !r.passed {
            out.push(r);
            return Ok(out);
        }
    }
    out.push(CheckResult::new("or_extension", true).detail("n", cfg.n_max.min(12)));
    Ok(out)
}
