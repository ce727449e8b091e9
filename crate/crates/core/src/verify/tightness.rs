use serde::Serialize;

use crate::bounds::{gaussian_u, BoundReport};
use crate::cube::{FunctionTable, ValueKind};
use crate::error::{Error, Result};
use crate::families::majority;

/// Cov(f, g) / φ(W_1(f, g)); infinite when the bound vanishes.
pub fn tightness_ratio(f: &FunctionTable, g: &FunctionTable) -> Result<f64> {
    Ok(BoundReport::new(f, g)?.ratios.talagrand)
}

/// NS_ε(f)/√ε for a balanced ±1 table.
pub fn peres_ns_ratio(f: &FunctionTable, eps: f64) -> Result<f64> {
    f.require_kind(ValueKind::SignedPm1)?;
    if f.mean().abs() > 1e-12 {
        return Err(Error::Precondition(format!(
            "table is not balanced (mean {})",
            f.mean()
        )));
    }
    if !(eps > 0.0 && eps <= 1.0) {
        return Err(Error::Domain {
            name: "epsilon",
            value: eps,
            domain: "(0, 1]".into(),
        });
    }
    Ok(f.noise_stability(eps)? / eps.sqrt())
}

/// Comparison of the first-level weight of a threshold table with u(·).
///
/// `w1` is Σ_i f̂({i})² of the ±1 table and `u` is evaluated at the 0/1 mean
/// (1 + E[f])/2.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MorsGap {
    pub w1: f64,
    pub mean_prob: f64,
    pub u: f64,
    pub gap: f64,
    pub tau: f64,
    pub tau_pow: f64,
}

pub fn mors_gap(f: &FunctionTable) -> Result<MorsGap> {
    let f = match f.kind() {
        ValueKind::SignedPm1 => f.clone(),
        ValueKind::Indicator01 => f.to_signed()?,
        found => {
            return Err(Error::Kind {
                expected: "indicator01 or pm1",
                found,
            })
        }
    };
    let w1: f64 = f.spectrum().level_one().iter().map(|c| c * c).sum();
    let mean_prob = (1.0 + f.mean()) / 2.0;
    let u = gaussian_u(mean_prob)?;
    let tau = f.tau_regularity();
    Ok(MorsGap {
        w1,
        mean_prob,
        u,
        gap: (w1 - u).abs(),
        tau,
        tau_pow: tau.powf(1.0 / 6.0),
    })
}

/// Cov(A, MAJ)·√m/√log m against majority on m coordinates, where m = n for odd n
/// and A is padded with one dummy coordinate to m = n + 1 otherwise.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CormajScore {
    pub score: f64,
    pub cov: f64,
    pub m: usize,
    /// |μ(A) − 1/2|; the corollary assumes a balanced A.
    pub balance_deviation: f64,
    pub regular: bool,
}

pub fn cormaj_score(a: &FunctionTable) -> Result<CormajScore> {
    a.require_kind(ValueKind::Indicator01)?;
    if !a.is_monotone() {
        return Err(Error::Precondition("A is not increasing".into()));
    }
    let regular = a.influences().is_regular();
    let a = if a.n() % 2 == 1 {
        a.clone()
    } else {
        a.extend(a.n() + 1)?
    };
    let m = a.n();
    if m < 3 {
        return Err(Error::Input("cormaj needs at least 3 coordinates".into()));
    }
    let cov = a.covariance(&majority(m)?)?;
    let mf = m as f64;
    Ok(CormajScore {
        score: cov * mf.sqrt() / mf.ln().sqrt(),
        cov,
        m,
        balance_deviation: (a.mean() - 0.5).abs(),
        regular,
    })
}
