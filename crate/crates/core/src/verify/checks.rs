use serde_json::json;

use super::CheckResult;
use crate::bounds::{comparison_report, BoundReport};
use crate::cube::{level_weights, FunctionTable};
use crate::error::{Error, Result};
use crate::families::compose;

/// Number of evenly spaced ρ values in [0, 1] used by [`check_noise_monotone`].
pub const RHO_GRID_POINTS: usize = 21;

const HARRIS_TOL: f64 = 1e-12;
const H_STEP_TOL: f64 = 1e-12;
const H_PRIME_TOL: f64 = 1e-10;
const EXACT_TOL: f64 = 1e-12;

fn require_monotone(name: &str, t: &FunctionTable) -> Result<()> {
    if t.is_monotone() {
        Ok(())
    } else {
        Err(Error::Precondition(format!("{name} is not increasing")))
    }
}

fn require_pair(f: &FunctionTable, g: &FunctionTable) -> Result<()> {
    f.require_same_n(g)?;
    require_monotone("f", f)?;
    require_monotone("g", g)
}

/// Cov(f, g) ≥ −1e-12 for increasing f, g.
pub fn check_harris(f: &FunctionTable, g: &FunctionTable) -> Result<CheckResult> {
    require_pair(f, g)?;
    let cov = f.covariance(g)?;
    let passed = cov >= -HARRIS_TOL;
    let mut r = CheckResult::new("harris", passed).detail("cov", cov);
    if !passed {
        r = r.with_witness(format!("cov = {cov:e}"));
    }
    Ok(r)
}

/// ⟨Δ_i f, Δ_i g⟩ = 2^{-n} Σ_x ¼(f(x) − f(x⊕e_i))(g(x) − g(x⊕e_i)).
fn derivative_inners(f: &FunctionTable, g: &FunctionTable) -> Vec<f64> {
    let (fv, gv) = (f.values(), g.values());
    let len = fv.len() as f64;
    (0..f.n())
        .map(|i| {
            let bit = 1usize << i;
            let s: f64 = (0..fv.len())
                .filter(|m| m & bit == 0)
                .map(|m| (fv[m] - fv[m | bit]) * (gv[m] - gv[m | bit]))
                .sum();
            // each unordered edge stands for two points, each weighted ¼
            0.5 * s / len
        })
        .collect()
}

/// h(ρ) = ⟨T_ρ f, g⟩ is nondecreasing on the ρ grid, its polynomial derivative is
/// nonnegative there, and h′(1) = Σ_i ⟨Δ_i f, Δ_i g⟩ with every summand ≥ 0.
pub fn check_noise_monotone(f: &FunctionTable, g: &FunctionTable) -> Result<CheckResult> {
    require_pair(f, g)?;
    let lw = level_weights(f, g)?;
    let steps = RHO_GRID_POINTS - 1;
    let grid: Vec<f64> = (0..=steps).map(|k| k as f64 / steps as f64).collect();
    let h: Vec<f64> = grid.iter().map(|&r| lw.noise_correlation(r)).collect();

    let mut failures = Vec::new();
    for k in 1..h.len() {
        if h[k] < h[k - 1] - H_STEP_TOL {
            failures.push(format!(
                "h dropped between rho={} and rho={}",
                grid[k - 1],
                grid[k]
            ));
        }
    }
    let min_slope = grid
        .iter()
        .map(|&r| lw.noise_correlation_derivative(r))
        .fold(f64::INFINITY, f64::min);
    if min_slope < -H_PRIME_TOL {
        failures.push(format!("h' = {min_slope:e} on the grid"));
    }
    let terms = derivative_inners(f, g);
    let identity: f64 = terms.iter().sum();
    let h1 = lw.noise_correlation_derivative(1.0);
    if (identity - h1).abs() > H_PRIME_TOL {
        failures.push(format!(
            "h'(1) = {h1} but sum of derivative inners = {identity}"
        ));
    }
    if let Some((i, t)) = terms.iter().enumerate().find(|(_, t)| **t < -HARRIS_TOL) {
        failures.push(format!("derivative inner for coordinate {i} is {t:e}"));
    }

    let mut r = CheckResult::new("noise_monotone", failures.is_empty())
        .detail("h_prime_at_1", h1)
        .detail("sum_derivative_inners", identity)
        .detail("min_slope_on_grid", min_slope);
    if !failures.is_empty() {
        r = r.with_witness(failures.join("; "));
    }
    Ok(r)
}

/// Both comparison inequalities on the bound report of (f, g), with ±1 tables
/// read as the families {f = 1}.
pub fn check_comparison(f: &FunctionTable, g: &FunctionTable) -> Result<CheckResult> {
    let report = comparison_report(f, g)?;
    let (a, b) = report.comparison_claims_hold();
    let mut r = CheckResult::new("comparison_claims", a && b)
        .detail("rhs_similar", report.rhs.similar)
        .detail("rhs_talagrand", report.rhs.talagrand)
        .detail("rhs_kms", report.rhs.kms);
    if !(a && b) {
        r = r.with_witness(format!("part (a) holds: {a}, part (b) holds: {b}"));
    }
    Ok(r)
}

/// μ(A*) = 1 − μ(A), I_i(A*) = I_i(A) and A** = A, all exact.
pub fn check_duality(a: &FunctionTable) -> Result<CheckResult> {
    require_monotone("A", a)?;
    let d = a.dual()?;
    let mean_err = (d.mean() - (1.0 - a.mean())).abs();
    let infl_err = a
        .influence_vector()
        .iter()
        .zip(d.influence_vector())
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max);
    let involution = d.dual()? == *a;
    let monotone = d.is_monotone();
    let passed = mean_err <= EXACT_TOL && infl_err <= EXACT_TOL && involution && monotone;
    let mut r = CheckResult::new("duality", passed)
        .detail("mean_error", mean_err)
        .detail("influence_error", infl_err)
        .detail("involution", involution)
        .detail("dual_monotone", monotone);
    if !passed {
        r = r.with_witness("duality identity violated");
    }
    Ok(r)
}

/// A′ = A ∨ y on a fresh top coordinate: I_i(A′) = I_i(A)/2 and I_y(A′) = 1 − μ(A).
pub fn check_or_extension(a: &FunctionTable) -> Result<CheckResult> {
    require_monotone("A", a)?;
    let n = a.n();
    let ext = FunctionTable::from_fn(n + 1, a.kind(), |m| {
        if m >> n & 1 == 1 {
            1.0
        } else {
            a.get(m)
        }
    })?;
    let ia = a.influence_vector();
    let ie = ext.influence_vector();
    let low_err = ia
        .iter()
        .zip(&ie)
        .map(|(x, y)| (x / 2.0 - y).abs())
        .fold(0.0, f64::max);
    let top_err = (ie[n] - (1.0 - a.mean())).abs();
    let mean_err = (ext.mean() - (a.mean() + 1.0) / 2.0).abs();
    let passed = low_err <= EXACT_TOL && top_err <= EXACT_TOL && mean_err <= EXACT_TOL;
    let mut r = CheckResult::new("or_extension", passed)
        .detail("low_influence_error", low_err)
        .detail("top_influence_error", top_err)
        .detail("mean_error", mean_err);
    if !passed {
        r = r.with_witness("OR-extension influence law violated");
    }
    Ok(r)
}

/// For B the dual of A: Cov(A, B) ≤ min(μ(A), μ(B)), plus the tightness ratio
/// Cov/φ(W_1) and the first-level optimality score of A.
pub fn check_suf1(a: &FunctionTable) -> Result<CheckResult> {
    require_monotone("A", a)?;
    let a = a.to_indicator_if_signed()?;
    let b = a.dual()?;
    let report = BoundReport::new(&a, &b)?;
    let mu = a.mean();
    let mu_prime = mu.min(1.0 - mu);
    let passed = report.cov <= mu_prime + EXACT_TOL;
    let flo = super::first_level_optimality(&a).ok();
    let mut r = CheckResult::new("suf1", passed)
        .detail("cov", report.cov)
        .detail("mu_prime", mu_prime)
        .detail("rhs_talagrand", report.rhs.talagrand)
        .detail("tightness_ratio", report.ratios.talagrand)
        .detail("first_level_optimality", json!(flo));
    if !passed {
        r = r.with_witness(format!("cov {} exceeds mu' {}", report.cov, mu_prime));
    }
    Ok(r)
}

/// Composition with shared balanced inners: Cov, means and the influence
/// factorization I_{(i,j)} = I_i(f_ℓ)·I_j(g_i) are preserved exactly.
pub fn check_suf2(
    f1: &FunctionTable,
    f2: &FunctionTable,
    inners: &[FunctionTable],
) -> Result<CheckResult> {
    require_pair(f1, f2)?;
    for (i, g) in inners.iter().enumerate() {
        require_monotone(&format!("inner {i}"), g)?;
        if g.mean() != 0.5 {
            return Err(Error::Precondition(format!(
                "inner {i} has mean {} instead of 1/2",
                g.mean()
            )));
        }
    }
    let c1 = compose(f1, inners)?;
    let c2 = compose(f2, inners)?;
    let cov = f1.covariance(f2)?;
    let cov_c = c1.covariance(&c2)?;
    let cov_err = (cov - cov_c).abs();
    let mean_err = (c1.mean() - f1.mean())
        .abs()
        .max((c2.mean() - f2.mean()).abs());

    let mut fact_err: f64 = 0.0;
    for (outer, comp) in [(f1, &c1), (f2, &c2)] {
        let io = outer.influence_vector();
        let ic = comp.influence_vector();
        let mut off = 0;
        for (i, g) in inners.iter().enumerate() {
            for (j, ig) in g.influence_vector().iter().enumerate() {
                fact_err = fact_err.max((ic[off + j] - io[i] * ig).abs());
            }
            off += g.n();
        }
    }
    let before = BoundReport::new(f1, f2)?;
    let after = BoundReport::new(&c1, &c2)?;
    let min_inner_w1 = inners
        .iter()
        .map(|g| g.influences().sum_squares())
        .fold(f64::INFINITY, f64::min);

    let passed = cov_err <= EXACT_TOL && mean_err <= EXACT_TOL && fact_err <= EXACT_TOL;
    let mut r = CheckResult::new("suf2", passed)
        .detail("cov", cov)
        .detail("cov_composed", cov_c)
        .detail("cov_error", cov_err)
        .detail("mean_error", mean_err)
        .detail("factorization_error", fact_err)
        .detail("n_composed", c1.n())
        .detail("min_inner_w1", min_inner_w1)
        .detail("tightness_ratio_before", before.ratios.talagrand)
        .detail("tightness_ratio_after", after.ratios.talagrand);
    if !passed {
        r = r.with_witness("composition identity violated");
    }
    Ok(r)
}

impl FunctionTable {
    fn to_indicator_if_signed(&self) -> Result<FunctionTable> {
        match self.kind() {
            crate::cube::ValueKind::SignedPm1 => self.to_indicator(),
            _ => Ok(self.clone()),
        }
    }
}
