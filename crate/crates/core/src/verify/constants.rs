use serde::Serialize;

use crate::cube::{level_weights, FunctionTable, ValueKind};
use crate::error::{Error, Result};

fn require_monotone_pair(f: &FunctionTable, g: &FunctionTable) -> Result<()> {
    f.require_same_n(g)?;
    if !(f.is_monotone() && g.is_monotone()) {
        return Err(Error::Precondition("inputs must be increasing".into()));
    }
    Ok(())
}

/// SW_2(f,g) / (SW_1 log(e/SW_1)), with SW_d the spectral level sums of the tables
/// as given. Pass ±1 tables for the lemma's own normalization. Returns 0 when
/// SW_1 = 0.
pub fn lemma_talagrand_constant(f: &FunctionTable, g: &FunctionTable) -> Result<f64> {
    require_monotone_pair(f, g)?;
    if f.n() < 2 {
        return Ok(0.0);
    }
    let lw = level_weights(f, g)?;
    let w1 = lw.sw[1];
    if w1 <= 0.0 {
        return Ok(0.0);
    }
    Ok(lw.sw[2] / (w1 * (1.0 - w1.ln())))
}

/// C(d) = (5e/d)(2e/(d−1))^{d−1}.
pub fn talagrand_d_factor(d: usize) -> f64 {
    let e = std::f64::consts::E;
    let d = d as f64;
    5.0 * e / d * (2.0 * e / (d - 1.0)).powf(d - 1.0)
}

/// Level-d ratio against W_1 (log(d/W_1))^{d−1}, reported with and without C(d).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TalagrandD {
    pub d: usize,
    pub w1: f64,
    pub sw_d: f64,
    /// Whether 2 ≤ d ≤ log(e/W_1)/2; outside the range no ratio is computed.
    pub in_range: bool,
    pub ratio: Option<f64>,
    pub ratio_with_factor: Option<f64>,
    pub note: Option<String>,
}

pub fn lemma_talagrand_d_constant(
    f: &FunctionTable,
    g: &FunctionTable,
    d: usize,
) -> Result<TalagrandD> {
    require_monotone_pair(f, g)?;
    let lw = level_weights(f, g)?;
    let w1 = lw.sw[1];
    let sw_d = lw.sw.get(d).copied().unwrap_or(0.0);
    let mut out = TalagrandD {
        d,
        w1,
        sw_d,
        in_range: false,
        ratio: None,
        ratio_with_factor: None,
        note: None,
    };
    if w1 <= 0.0 {
        out.note = Some("W_1 = 0".into());
        out.ratio = Some(0.0);
        out.ratio_with_factor = Some(0.0);
        return Ok(out);
    }
    let upper = (1.0 - w1.ln()) / 2.0;
    if d < 2 || d as f64 > upper {
        out.note = Some(format!("d = {d} outside [2, {upper:.4}]"));
        return Ok(out);
    }
    out.in_range = true;
    let base = w1 * ((d as f64 / w1).ln()).powi(d as i32 - 1);
    out.ratio = Some(sw_d / base);
    out.ratio_with_factor = Some(sw_d / (talagrand_d_factor(d) * base));
    Ok(out)
}

/// Σ_i f̂({i})² / (E|f|² log(e/E|f|)); `None` when E|f| > 1/2. The zero
/// function gives 0.
pub fn chang_constant(f: &FunctionTable) -> Result<Option<f64>> {
    let m1 = f.values().iter().map(|v| v.abs()).sum::<f64>() / f.len() as f64;
    if m1 > 0.5 {
        return Ok(None);
    }
    if m1 == 0.0 {
        return Ok(Some(0.0));
    }
    let lhs: f64 = f.spectrum().level_one().iter().map(|c| c * c).sum();
    Ok(Some(lhs / (m1 * m1 * (1.0 - m1.ln()))))
}

/// Σ_{i≠k} f̂({i,k})² / (I_k² log(e/I_k)); `None` when I_k = 0.
pub fn chang_pair_constant(f: &FunctionTable, k: usize) -> Result<Option<f64>> {
    let ik = f.influence(k)?;
    if ik == 0.0 {
        return Ok(None);
    }
    let s = f.spectrum();
    let lhs: f64 = (0..f.n())
        .filter(|&i| i != k)
        .map(|i| s.coeff((1 << i) | (1 << k)).powi(2))
        .sum();
    Ok(Some(lhs / (ik * ik * (1.0 - ik.ln()))))
}

/// W_1(1_A) / (E′² log(e/E′)) with W_1(1_A) = Σ I_i(A)² and E′ = min(μ, 1 − μ).
pub fn first_level_optimality(a: &FunctionTable) -> Result<f64> {
    let a = match a.kind() {
        ValueKind::SignedPm1 => a.to_indicator()?,
        ValueKind::Indicator01 => a.clone(),
        found => {
            return Err(Error::Kind {
                expected: "indicator01 or pm1",
                found,
            })
        }
    };
    let mu = a.mean();
    let e = mu.min(1.0 - mu);
    if e == 0.0 {
        return Err(Error::Degenerate("constant family".into()));
    }
    Ok(a.influences().sum_squares() / (e * e * (1.0 - e.ln())))
}
