use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::suite::{random_pair_spec, SuitePair};
use super::{chang_constant, CheckResult};
use crate::bounds::BoundReport;
use crate::cube::ValueKind;
use crate::error::{Error, Result};
use crate::families::{FamilySpec, PairMember};

/// Per-instance values are listed in the details up to this many instances.
const MAX_LISTED: usize = 64;

/// Source of instances for [`scan`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ScanGenerator {
    RandomMonotonePairs {
        n_min: usize,
        n_max: usize,
        #[serde(default = "default_k_max")]
        k_max: usize,
    },
    /// One instance per entry of `a_grid`, in order.
    Example31 {
        n: usize,
        a_grid: Vec<f64>,
    },
    Example32 {
        n: usize,
        a_grid: Vec<f64>,
    },
}

fn default_k_max() -> usize {
    6
}

impl ScanGenerator {
    fn instance_count(&self, budget: usize) -> usize {
        match self {
            ScanGenerator::RandomMonotonePairs { .. } => budget,
            ScanGenerator::Example31 { a_grid, .. } | ScanGenerator::Example32 { a_grid, .. } => {
                a_grid.len().min(budget)
            }
        }
    }

    fn instance(&self, seed: u64, index: usize) -> SuitePair {
        match self {
            ScanGenerator::RandomMonotonePairs {
                n_min,
                n_max,
                k_max,
            } => random_pair_spec(seed, index as u64, *n_min, *n_max, *k_max),
            ScanGenerator::Example31 { n, a_grid } => {
                let a = a_grid[index];
                let spec = |member| FamilySpec::Example31 { n: *n, a, member };
                SuitePair {
                    label: format!("example31[a={a}]"),
                    f: spec(PairMember::First),
                    g: spec(PairMember::Second),
                }
            }
            ScanGenerator::Example32 { n, a_grid } => {
                let a = a_grid[index];
                let spec = |member| FamilySpec::Example32 { n: *n, a, member };
                SuitePair {
                    label: format!("example32[a={a}]"),
                    f: spec(PairMember::First),
                    g: spec(PairMember::Second),
                }
            }
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            ScanGenerator::RandomMonotonePairs {
                n_min,
                n_max,
                k_max,
            } => {
                if *n_min < 1 || n_min > n_max || *k_max < 1 {
                    return Err(Error::Input(format!(
                        "bad random generator: n_min {n_min}, n_max {n_max}, k_max {k_max}"
                    )));
                }
            }
            ScanGenerator::Example31 { a_grid, .. } | ScanGenerator::Example32 { a_grid, .. } => {
                if a_grid.is_empty() {
                    return Err(Error::Input("a_grid is empty".into()));
                }
            }
        }
        Ok(())
    }
}

/// Functional evaluated per instance, and the direction of the search.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScanTarget {
    /// Cov − Σ I_i(f)I_i(g), minimized; negative means the bound fails.
    Wrong2,
    /// Cov / rhs_statement33, minimized.
    Statement33,
    /// Chang ratio of f (0/1 form, skipped when μ > 1/2), maximized.
    ChangMax,
    /// Cov / φ(W_1), minimized.
    TightnessMin,
}

impl ScanTarget {
    pub const ALL: [ScanTarget; 4] = [
        ScanTarget::Wrong2,
        ScanTarget::Statement33,
        ScanTarget::ChangMax,
        ScanTarget::TightnessMin,
    ];

    fn name(self) -> &'static str {
        match self {
            ScanTarget::Wrong2 => "wrong2",
            ScanTarget::Statement33 => "statement33",
            ScanTarget::ChangMax => "chang_max",
            ScanTarget::TightnessMin => "tightness_min",
        }
    }

    fn maximize(self) -> bool {
        self == ScanTarget::ChangMax
    }

    fn evaluate(self, pair: &SuitePair) -> Result<Option<f64>> {
        let (f, g) = pair.materialize()?;
        if self == ScanTarget::ChangMax {
            let f = match f.kind() {
                ValueKind::SignedPm1 => f.to_indicator()?,
                _ => f,
            };
            return chang_constant(&f);
        }
        let r = BoundReport::new(&f, &g)?;
        Ok(Some(match self {
            ScanTarget::Wrong2 => r.cov - r.rhs.w1,
            ScanTarget::Statement33 => r.ratios.statement33,
            ScanTarget::TightnessMin => r.ratios.talagrand,
            ScanTarget::ChangMax => unreachable!(),
        }))
    }

    /// Whether the extremal value is consistent with the inequality at unit constant.
    fn holds(self, extremal: f64) -> bool {
        match self {
            ScanTarget::Wrong2 => extremal >= -1e-12,
            ScanTarget::ChangMax => extremal <= 1.0,
            ScanTarget::Statement33 | ScanTarget::TightnessMin => extremal >= 1.0,
        }
    }
}

impl fmt::Display for ScanTarget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ScanTarget {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ScanTarget::ALL
            .into_iter()
            .find(|t| t.name() == s)
            .ok_or_else(|| Error::Input(format!("unknown scan target `{s}`")))
    }
}

/// Evaluates `target` on up to `budget` instances and reports the extremal one.
///
/// Instances run in parallel; the reduction picks the extremal value with ties
/// going to the lowest index, so the result does not depend on scheduling.
/// `passed` says whether the inequality held with unit constant on every
/// evaluated instance, and `witness` always replays the extremal instance.
pub fn scan(
    generator: &ScanGenerator,
    target: ScanTarget,
    budget: usize,
    seed: u64,
) -> Result<CheckResult> {
    if budget == 0 {
        return Err(Error::Input("budget must be at least 1".into()));
    }
    generator.validate()?;
    let count = generator.instance_count(budget);
    let values: Vec<(SuitePair, Option<f64>)> = (0..count)
        .into_par_iter()
        .map(|i| {
            let pair = generator.instance(seed, i);
            let v = target.evaluate(&pair)?;
            Ok((pair, v))
        })
        .collect::<Result<_>>()?;

    let mut best: Option<(usize, f64)> = None;
    for (i, (_, v)) in values.iter().enumerate() {
        let Some(v) = *v else { continue };
        let better = match best {
            None => true,
            Some((_, b)) if target.maximize() => v > b,
            Some((_, b)) => v < b,
        };
        if better {
            best = Some((i, v));
        }
    }

    let evaluated = values.iter().filter(|(_, v)| v.is_some()).count();
    let mut r = CheckResult::new(format!("scan/{target}"), true)
        .detail("instances", count)
        .detail("evaluated", evaluated)
        .detail("seed", seed);
    if count <= MAX_LISTED {
        for (i, (pair, v)) in values.iter().enumerate() {
            r.set_detail(&format!("value[{i:03}] {}", pair.label), *v);
        }
    }
    if let Some((i, v)) = best {
        r.passed = target.holds(v);
        r.implied_constant = Some(v);
        r.witness = Some(values[i].0.witness(Some(seed), Some(i)));
        r.set_detail("extremal_index", i);
    }
    Ok(r)
}
