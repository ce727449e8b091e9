//! Deterministic constructors for the named families and pairs, plus a seeded
//! generator of random increasing families.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::cube::{FunctionTable, ValueKind, MAX_N};
use crate::error::{Error, Result};

/// Relative slack when comparing Σ a_i x_i against θ, so that sums which equal θ
/// in exact arithmetic count as ties (sign(0) = +1).
const LTF_TIE_SLACK: f64 = 1e-12;

fn binomial_tail(n: usize, t: usize) -> f64 {
    // P(Σx_i > t) for uniform x, as an exact count over 2^n
    let mut count: u64 = 0;
    let mut c: u64 = 1;
    for k in 0..=n {
        if k > t {
            count += c;
        }
        c = c * (n - k) as u64 / (k + 1) as u64;
    }
    count as f64 / (1u64 << n) as f64
}

/// Indicator of {x : Σ x_i > t}.
pub fn hamming_ball(n: usize, t: usize) -> Result<FunctionTable> {
    if t > n {
        return Err(Error::Input(format!("threshold {t} exceeds n = {n}")));
    }
    FunctionTable::from_fn(n, ValueKind::Indicator01, |m| {
        ((m.count_ones() as usize) > t) as u8 as f64
    })
}

/// A Hamming ball selected by target measure.
#[derive(Debug, Clone)]
pub struct BallChoice {
    pub table: FunctionTable,
    pub t: usize,
    pub mu: f64,
}

/// The threshold t ∈ 0..=n whose ball measure is closest to `a`; ties go to the smaller t.
pub fn ball_threshold_for(n: usize, a: f64) -> Result<(usize, f64)> {
    if !(a > 0.0 && a < 1.0) {
        return Err(Error::Domain {
            name: "a",
            value: a,
            domain: "(0, 1)".into(),
        });
    }
    let mut best = (0, binomial_tail(n, 0));
    for t in 1..=n {
        let mu = binomial_tail(n, t);
        if (mu - a).abs() < (best.1 - a).abs() {
            best = (t, mu);
        }
    }
    Ok(best)
}

/// m_a: the increasing Hamming ball whose measure is nearest `a`.
pub fn hamming_ball_mu(n: usize, a: f64) -> Result<BallChoice> {
    let (t, mu) = ball_threshold_for(n, a)?;
    Ok(BallChoice {
        table: hamming_ball(n, t)?,
        t,
        mu,
    })
}

/// {x : Σ x_i > n/2} for odd n.
pub fn majority(n: usize) -> Result<FunctionTable> {
    if n.is_multiple_of(2) {
        return Err(Error::Input(format!("majority needs odd n, got {n}")));
    }
    hamming_ball(n, n / 2)
}

/// Indicator of x_i = 1.
pub fn dictator(n: usize, coord: usize) -> Result<FunctionTable> {
    if coord >= n {
        return Err(Error::CoordinateOutOfRange { coord, n });
    }
    FunctionTable::from_fn(n, ValueKind::Indicator01, |m| ((m >> coord) & 1) as f64)
}

/// Parity of the weight; not monotone, kept for negative tests.
pub fn parity(n: usize) -> Result<FunctionTable> {
    FunctionTable::from_fn(n, ValueKind::Indicator01, |m| (m.count_ones() % 2) as f64)
}

/// OR of ANDs over the consecutive blocks {jr, …, jr + r − 1}.
pub fn tribes(n: usize, r: usize) -> Result<FunctionTable> {
    if r == 0 || !n.is_multiple_of(r) {
        return Err(Error::Input(format!(
            "tribe width {r} does not divide n = {n}"
        )));
    }
    let blocks: Vec<usize> = (0..n / r).map(|j| ((1usize << r) - 1) << (j * r)).collect();
    FunctionTable::from_fn(n, ValueKind::Indicator01, |m| {
        blocks.iter().any(|&b| (m & b) ^ b == 0) as u8 as f64
    })
}

/// Divisor of n nearest to round(log2 n − log2 log2 n); ties go to the smaller divisor.
pub fn tribes_width_hint(n: usize) -> usize {
    if n < 4 {
        return 1;
    }
    let x = n as f64;
    let target = (x.log2() - x.log2().log2()).round().max(1.0) as usize;
    (1..=n)
        .filter(|r| n.is_multiple_of(*r))
        .min_by_key(|r| (r.abs_diff(target), *r))
        .unwrap_or(1)
}

/// Increasing threshold function on {0,1}^n: +1 iff Σ a_i x_i − θ ≥ 0.
pub fn ltf(weights: &[f64], theta: f64) -> Result<FunctionTable> {
    if let Some(w) = weights.iter().find(|w| **w < 0.0 || !w.is_finite()) {
        return Err(Error::Input(format!(
            "weight {w} is negative or not finite; only increasing LTFs are built"
        )));
    }
    let scale = weights.iter().sum::<f64>().max(theta.abs()).max(1.0);
    let sums = weighted_sums(weights)?;
    let values = sums
        .iter()
        .map(|s| {
            if s - theta >= -LTF_TIE_SLACK * scale {
                1.0
            } else {
                -1.0
            }
        })
        .collect();
    FunctionTable::new(weights.len(), values, ValueKind::SignedPm1)
}

fn weighted_sums(weights: &[f64]) -> Result<Vec<f64>> {
    let n = weights.len();
    if n == 0 || n > MAX_N {
        return Err(Error::Input(format!(
            "LTF needs between 1 and {MAX_N} weights, got {n}"
        )));
    }
    let mut sums = vec![0.0; 1 << n];
    for (i, w) in weights.iter().enumerate() {
        let bit = 1usize << i;
        for m in bit..(bit << 1) {
            sums[m] = sums[m - bit] + w;
        }
    }
    Ok(sums)
}

/// f ∘ (g_1, …, g_n): inner i reads the bit block starting at Σ_{j<i} m_j.
pub fn compose(outer: &FunctionTable, inners: &[FunctionTable]) -> Result<FunctionTable> {
    if inners.len() != outer.n() {
        return Err(Error::Input(format!(
            "outer function has {} coordinates but {} inner functions were given",
            outer.n(),
            inners.len()
        )));
    }
    for g in inners {
        if g.kind() != ValueKind::Indicator01 {
            return Err(Error::Kind {
                expected: "indicator01",
                found: g.kind(),
            });
        }
    }
    let total: usize = inners.iter().map(|g| g.n()).sum();
    if total > MAX_N {
        return Err(Error::TooLarge {
            n: total,
            cap: MAX_N,
        });
    }
    let layout: Vec<(usize, usize)> = inners
        .iter()
        .scan(0, |off, g| {
            let here = *off;
            *off += g.n();
            Some((here, (1usize << g.n()) - 1))
        })
        .collect();
    let values = (0..1usize << total)
        .map(|x| {
            let y = inners
                .iter()
                .zip(&layout)
                .enumerate()
                .fold(0usize, |y, (i, (g, &(off, mask)))| {
                    y | ((g.get((x >> off) & mask) as usize) << i)
                });
            outer.get(y)
        })
        .collect();
    FunctionTable::new(total, values, outer.kind())
}

/// Union of the upsets of `k` uniformly random points; always increasing.
pub fn random_monotone(n: usize, seed: u64, k: usize) -> Result<FunctionTable> {
    if k == 0 {
        return Err(Error::Input(
            "random_monotone needs at least one generator".into(),
        ));
    }
    crate::cube::FunctionTable::constant(n, 0.0, ValueKind::Indicator01)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut up = vec![false; 1 << n];
    for _ in 0..k {
        up[rng.random_range(0..1usize << n)] = true;
    }
    // up-closure: superset zeta transform over OR
    for i in 0..n {
        let bit = 1usize << i;
        for m in 0..up.len() {
            if m & bit != 0 && up[m ^ bit] {
                up[m] = true;
            }
        }
    }
    FunctionTable::new(
        n,
        up.into_iter().map(|b| b as u8 as f64).collect(),
        ValueKind::Indicator01,
    )
}

/// OR with a fresh coordinate placed at bit `n`: (x ∈ A) ∨ (y = 1).
fn or_with_fresh_bit(a: &FunctionTable) -> Result<FunctionTable> {
    let n = a.n();
    FunctionTable::from_fn(n + 1, ValueKind::Indicator01, |m| {
        if m >> n & 1 == 1 {
            1.0
        } else {
            a.get(m)
        }
    })
}

/// A′ = A ∨ y and B′ = m_{1−a} on n + 1 coordinates, with A = m_a on the first n.
#[derive(Debug, Clone)]
pub struct Example31 {
    pub base: BallChoice,
    pub a_prime: FunctionTable,
    pub b_prime: BallChoice,
}

pub fn example31(n: usize, a: f64) -> Result<Example31> {
    if n + 1 > MAX_N {
        return Err(Error::TooLarge {
            n: n + 1,
            cap: MAX_N,
        });
    }
    let base = hamming_ball_mu(n, a)?;
    let a_prime = or_with_fresh_bit(&base.table)?;
    let b_prime = hamming_ball_mu(n + 1, 1.0 - a)?;
    Ok(Example31 {
        base,
        a_prime,
        b_prime,
    })
}

/// A′ = A ∨ y_1 and B′ = B ∧ C on n + ℓ coordinates, with A = m_a, B = m_{1−a}
/// on the x block and C = m_{1/2} on the ℓ-bit y block.
#[derive(Debug, Clone)]
pub struct Example32 {
    pub base: BallChoice,
    pub dual_ball: BallChoice,
    pub c_ball: BallChoice,
    pub ell: usize,
    /// |I(C) − I(B)| at the chosen ℓ; exact matching is rarely possible.
    pub influence_gap: f64,
    pub a_prime: FunctionTable,
    pub b_prime: FunctionTable,
}

pub fn example32(n: usize, a: f64) -> Result<Example32> {
    example32_within(n, a, MAX_N)
}

/// [`example32`] with the block length ℓ searched only up to `max_total − n`.
pub fn example32_within(n: usize, a: f64, max_total: usize) -> Result<Example32> {
    let max_total = max_total.min(MAX_N);
    if n + 1 > max_total {
        return Err(Error::TooLarge {
            n: n + 1,
            cap: max_total,
        });
    }
    let base = hamming_ball_mu(n, a)?;
    let dual_ball = hamming_ball_mu(n, 1.0 - a)?;
    let target = dual_ball.table.influence(0)?;
    let mut best: Option<(f64, usize, BallChoice)> = None;
    for ell in 1..=max_total - n {
        let c = hamming_ball_mu(ell, 0.5)?;
        let gap = (c.table.influence(0)? - target).abs();
        if best.as_ref().is_none_or(|(g, _, _)| gap < *g) {
            best = Some((gap, ell, c));
        }
    }
    let (influence_gap, ell, c_ball) = best.expect("at least one feasible block length");
    let total = n + ell;
    let low = (1usize << n) - 1;
    let a_prime = FunctionTable::from_fn(total, ValueKind::Indicator01, |m| {
        if m >> n & 1 == 1 {
            1.0
        } else {
            base.table.get(m & low)
        }
    })?;
    let b_prime = FunctionTable::from_fn(total, ValueKind::Indicator01, |m| {
        dual_ball.table.get(m & low) * c_ball.table.get(m >> n)
    })?;
    Ok(Example32 {
        base,
        dual_ball,
        c_ball,
        ell,
        influence_gap,
        a_prime,
        b_prime,
    })
}

/// Two threshold functions with shared weights, in 0/1 form: `f1` has measure
/// nearest 1 − a and `f2` = [Σ a_i x_i ≥ Σ a_i / 2] is the centred one.
#[derive(Debug, Clone)]
pub struct Example54 {
    pub f1: FunctionTable,
    pub f2: FunctionTable,
    pub theta1: f64,
    pub theta2: f64,
    /// Whether f2 ≤ f1 pointwise, which makes Cov(f1, f2) = E[f2](1 − E[f1]).
    pub nested: bool,
}

/// [`example54_weighted`] with all weights 1/√n.
pub fn example54(n: usize, a: f64) -> Result<Example54> {
    let w = 1.0 / (n as f64).sqrt();
    example54_weighted(&vec![w; n], a)
}

pub fn example54_weighted(weights: &[f64], a: f64) -> Result<Example54> {
    if !(a > 0.0 && a < 1.0) {
        return Err(Error::Domain {
            name: "a",
            value: a,
            domain: "(0, 1)".into(),
        });
    }
    let sums = weighted_sums(weights)?;
    let total: f64 = weights.iter().sum();
    let theta2 = total / 2.0;
    let f2 = ltf(weights, theta2)?.to_indicator()?;

    // candidate thresholds are the distinct achievable sums
    let mut sorted = sums.clone();
    sorted.sort_by(f64::total_cmp);
    let tol = LTF_TIE_SLACK * total.max(1.0);
    let mut candidates: Vec<f64> = Vec::new();
    for s in sorted {
        if candidates.last().is_none_or(|c| s - c > tol) {
            candidates.push(s);
        }
    }
    let size = sums.len() as f64;
    let target = 1.0 - a;
    let mut best: Option<(f64, f64)> = None;
    for &theta in &candidates {
        let mu = sums.iter().filter(|s| **s - theta >= -tol).count() as f64 / size;
        // candidates ascend, so strict improvement keeps the larger family on ties
        if best.is_none_or(|(_, bmu)| (mu - target).abs() < (bmu - target).abs()) {
            best = Some((theta, mu));
        }
    }
    let (theta1, _) = best.expect("at least one candidate threshold");
    let f1 = ltf(weights, theta1)?.to_indicator()?;
    let nested = f1.values().iter().zip(f2.values()).all(|(a, b)| b <= a);
    Ok(Example54 {
        f1,
        f2,
        theta1,
        theta2,
        nested,
    })
}

/// Which member of a two-family construction a [`FamilySpec`] refers to.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PairMember {
    #[default]
    First,
    Second,
}

/// Serializable description of a table, accepted by the CLI `--spec` flag.
///
/// JSON form: `{"kind": "<name>", ...fields}`. Coordinates (`i`) are 0-based bits.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FamilySpec {
    /// Exactly one of `t` (threshold, {Σx > t}) or `a` (target measure).
    HammingBall {
        n: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        t: Option<usize>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        a: Option<f64>,
    },
    Tribes {
        n: usize,
        r: usize,
    },
    Majority {
        n: usize,
    },
    Dictator {
        n: usize,
        i: usize,
    },
    Parity {
        n: usize,
    },
    /// ±1-valued threshold function.
    Ltf {
        weights: Vec<f64>,
        theta: f64,
    },
    Compose {
        outer: Box<FamilySpec>,
        inners: Vec<FamilySpec>,
    },
    DualOf {
        inner: Box<FamilySpec>,
    },
    Example31 {
        n: usize,
        a: f64,
        #[serde(default)]
        member: PairMember,
    },
    Example32 {
        n: usize,
        a: f64,
        #[serde(default)]
        member: PairMember,
    },
    Example54 {
        n: usize,
        a: f64,
        #[serde(default)]
        member: PairMember,
    },
    RandomMonotone {
        n: usize,
        seed: u64,
        k: usize,
    },
}

impl FamilySpec {
    pub fn materialize(&self) -> Result<FunctionTable> {
        use FamilySpec::*;
        match self {
            HammingBall { n, t, a } => match (t, a) {
                (Some(t), None) => hamming_ball(*n, *t),
                (None, Some(a)) => Ok(hamming_ball_mu(*n, *a)?.table),
                _ => Err(Error::Input(
                    "hamming_ball needs exactly one of `t` or `a`".into(),
                )),
            },
            Tribes { n, r } => tribes(*n, *r),
            Majority { n } => majority(*n),
            Dictator { n, i } => dictator(*n, *i),
            Parity { n } => parity(*n),
            Ltf { weights, theta } => ltf(weights, *theta),
            Compose { outer, inners } => {
                let outer = outer.materialize()?;
                let inners = inners
                    .iter()
                    .map(FamilySpec::materialize)
                    .collect::<Result<Vec<_>>>()?;
                compose(&outer, &inners)
            }
            DualOf { inner } => inner.materialize()?.dual(),
            Example31 { n, a, member } => {
                let ex = example31(*n, *a)?;
                Ok(match member {
                    PairMember::First => ex.a_prime,
                    PairMember::Second => ex.b_prime.table,
                })
            }
            Example32 { n, a, member } => {
                let ex = example32(*n, *a)?;
                Ok(match member {
                    PairMember::First => ex.a_prime,
                    PairMember::Second => ex.b_prime,
                })
            }
            Example54 { n, a, member } => {
                let ex = example54(*n, *a)?;
                Ok(match member {
                    PairMember::First => ex.f1,
                    PairMember::Second => ex.f2,
                })
            }
            RandomMonotone { n, seed, k } => random_monotone(*n, *seed, *k),
        }
    }

    /// False only for specs built for negative testing.
    pub fn is_monotone_spec(&self) -> bool {
        match self {
            FamilySpec::Parity { .. } => false,
            FamilySpec::Compose { outer, inners } => {
                outer.is_monotone_spec() && inners.iter().all(FamilySpec::is_monotone_spec)
            }
            FamilySpec::DualOf { inner } => inner.is_monotone_spec(),
            _ => true,
        }
    }

    /// Coordinate count of the materialized table, without building it.
    pub fn n(&self) -> usize {
        use FamilySpec::*;
        match self {
            HammingBall { n, .. }
            | Tribes { n, .. }
            | Majority { n }
            | Dictator { n, .. }
            | Parity { n }
            | RandomMonotone { n, .. }
            | Example54 { n, .. } => *n,
            Ltf { weights, .. } => weights.len(),
            Compose { inners, .. } => inners.iter().map(FamilySpec::n).sum(),
            DualOf { inner } => inner.n(),
            Example31 { n, .. } => n + 1,
            Example32 { n, a, .. } => example32(*n, *a).map(|e| n + e.ell).unwrap_or(*n),
        }
    }
}
