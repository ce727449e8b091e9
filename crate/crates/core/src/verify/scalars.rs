//! Grid checks for the scalar functions: monotonicity, convexity and the
//! mean-value inequalities.

use super::CheckResult;
use crate::bounds::{phi, psi2, psi_n};

const GRID: usize = 1000;
const SHAPE_TOL: f64 = 1e-9;
const MVI_TOL: f64 = 1e-12;

fn shape_and_mvi(
    name: &str,
    grid: &[f64],
    f: impl Fn(f64) -> f64,
    bound: impl Fn(f64, f64) -> f64,
) -> CheckResult {
    let vals: Vec<f64> = grid.iter().map(|&x| f(x)).collect();
    let min_first = vals
        .windows(2)
        .map(|w| w[1] - w[0])
        .fold(f64::INFINITY, f64::min);
    let min_second = vals
        .windows(3)
        .map(|w| w[2] - 2.0 * w[1] + w[0])
        .fold(f64::INFINITY, f64::min);

    // all pairs u ≤ v on the grid: f(v) ≤ f(u) + bound(u, v)
    let mut worst = f64::NEG_INFINITY;
    let mut worst_at = (0.0, 0.0);
    for (i, &u) in grid.iter().enumerate() {
        for (j, &v) in grid.iter().enumerate().skip(i) {
            let excess = vals[j] - vals[i] - bound(u, v);
            if excess > worst {
                worst = excess;
                worst_at = (u, v);
            }
        }
    }

    let increasing = min_first > -SHAPE_TOL;
    let convex = min_second >= -SHAPE_TOL;
    let mvi = worst <= MVI_TOL;
    let mut r = CheckResult::new(name, increasing && convex && mvi)
        .detail("grid_points", grid.len())
        .detail("min_first_difference", min_first)
        .detail("min_second_difference", min_second)
        .detail("max_mean_value_excess", worst);
    if !increasing {
        r = r.with_witness("not increasing on the grid");
    } else if !convex {
        r = r.with_witness("negative second difference on the grid");
    } else if !mvi {
        r = r.with_witness(format!(
            "mean-value inequality fails at u = {}, v = {}",
            worst_at.0, worst_at.1
        ));
    }
    r
}

fn unit_grid(top: f64) -> Vec<f64> {
    (1..=GRID).map(|k| top * k as f64 / GRID as f64).collect()
}

/// φ on (0, 1]: increasing, convex, φ(v) ≤ φ(u) + 2(v − u)/log(e/v).
pub fn check_phi_grid() -> CheckResult {
    shape_and_mvi(
        "scalar_phi",
        &unit_grid(1.0),
        |x| phi(x).expect("grid in domain"),
        |u, v| 2.0 * (v - u) / (1.0 - v.ln()),
    )
}

/// ψ_n on (0, 1/√n]: increasing, convex,
/// ψ_n(v) ≤ ψ_n(u) + 2(v − u)/√log(e³/(n m²)) with m = (u + v)/2.
pub fn check_psi_n_grid(n: usize) -> CheckResult {
    let nf = n as f64;
    let mut r = shape_and_mvi(
        &format!("scalar_psi_n_{n}"),
        &unit_grid(1.0 / nf.sqrt()),
        |x| psi_n(n, x).expect("grid in domain"),
        |u, v| {
            let m = (u + v) / 2.0;
            2.0 * (v - u) / (3.0 - (nf * m * m).ln()).sqrt()
        },
    );
    r.set_detail("n", n);
    r
}

/// ψ₂ on (0, 1]: increasing, convex, ψ₂(v) ≤ ψ₂(u) + 1.5(v − u)/√log(e²/m).
pub fn check_psi2_grid() -> CheckResult {
    shape_and_mvi(
        "scalar_psi2",
        &unit_grid(1.0),
        |x| psi2(x).expect("grid in domain"),
        |u, v| {
            let m = (u + v) / 2.0;
            1.5 * (v - u) / (2.0 - m.ln()).sqrt()
        },
    )
}

/// φ, ψ₂ and ψ_n for n ∈ {2, 8, 32}.
pub fn scalar_lemma_suite() -> Vec<CheckResult> {
    let mut out = vec![check_phi_grid()];
    out.extend([2, 8, 32].map(check_psi_n_grid));
    out.push(check_psi2_grid());
    out
}
