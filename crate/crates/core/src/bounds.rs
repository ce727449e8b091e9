//! Constant-free right-hand sides of the correlation lower bounds and the scalar
//! functions they are assembled from.
//!
//! Every W-quantity is taken in influence normalization, W_1(f,g) = Σ_i I_i(f)I_i(g),
//! so W_1(f,f) = Σ_i I_i(f)². Arguments that leave the domain of a scalar function are
//! clamped to its edge and the event is recorded on the report.

use std::fmt::Write as _;

use serde::Serialize;
use statrs::distribution::{Continuous, ContinuousCDF, Normal};

use crate::cube::{similarity_from_profiles, FunctionTable, InfluenceProfile, ValueKind};
use crate::error::{Error, Result};

/// Version tag embedded in JSON and CSV output.
pub const SCHEMA_VERSION: u32 = 1;

/// Raw arguments more than this factor past their domain edge indicate a
/// normalization mismatch rather than rounding.
const MISMATCH_FACTOR: f64 = 4.0;

/// Relative tolerance for declaring a pair similar.
const SIMILAR_TOL: f64 = 1e-12;

fn domain_err(name: &'static str, x: f64, domain: &str) -> Error {
    Error::Domain {
        name,
        value: x,
        domain: domain.into(),
    }
}

fn unit_arg(name: &'static str, x: f64) -> Result<()> {
    if (0.0..=1.0).contains(&x) {
        Ok(())
    } else {
        Err(domain_err(name, x, "[0, 1]"))
    }
}

/// φ(x) = x / log(e/x), extended by φ(0) = 0.
pub fn phi(x: f64) -> Result<f64> {
    unit_arg("phi argument", x)?;
    Ok(if x == 0.0 { 0.0 } else { x / (1.0 - x.ln()) })
}

/// ψ₁(x) = x / √log(e/x).
pub fn psi1(x: f64) -> Result<f64> {
    unit_arg("psi1 argument", x)?;
    Ok(if x == 0.0 {
        0.0
    } else {
        x / (1.0 - x.ln()).sqrt()
    })
}

/// ψ₂(x) = x / √log(e²/x).
pub fn psi2(x: f64) -> Result<f64> {
    unit_arg("psi2 argument", x)?;
    Ok(if x == 0.0 {
        0.0
    } else {
        x / (2.0 - x.ln()).sqrt()
    })
}

/// ψ_n(x) = x / √log(e³/(n x²)) on [0, 1/√n].
pub fn psi_n(n: usize, x: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::Input("psi_n needs n ≥ 1".into()));
    }
    let cap = psi_n_cap(n);
    if !(0.0..=cap).contains(&x) {
        return Err(domain_err("psi_n argument", x, &format!("[0, {cap}]")));
    }
    Ok(if x == 0.0 {
        0.0
    } else {
        x / (3.0 - (n as f64 * x * x).ln()).sqrt()
    })
}

fn psi_n_cap(n: usize) -> f64 {
    1.0 / (n as f64).sqrt()
}

/// u(x) = 2 φ_N(Φ⁻¹(x))², with φ_N and Φ the standard normal density and CDF.
pub fn gaussian_u(x: f64) -> Result<f64> {
    if !(x > 0.0 && x < 1.0) {
        return Err(domain_err("u argument", x, "(0, 1)"));
    }
    let normal = Normal::standard();
    let d = normal.pdf(normal.inverse_cdf(x));
    Ok(2.0 * d * d)
}

/// Records clamping while arguments are pushed into scalar domains.
#[derive(Debug, Default, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ClampFlags {
    pub clamped: bool,
    pub convention_mismatch: bool,
}

impl ClampFlags {
    fn clamp(&mut self, x: f64, cap: f64) -> f64 {
        if x > cap {
            self.clamped = true;
            if x > MISMATCH_FACTOR * cap {
                self.convention_mismatch = true;
            }
            cap
        } else {
            x.max(0.0)
        }
    }

    fn merge(&mut self, other: ClampFlags) {
        self.clamped |= other.clamped;
        self.convention_mismatch |= other.convention_mismatch;
    }
}

// The evaluators below work on influence profiles so that a report computes each
// profile once. Arguments are clamped before the scalar calls, so those never fail.

fn talagrand_p(w1_fg: f64, flags: &mut ClampFlags) -> f64 {
    phi(flags.clamp(w1_fg, 1.0)).expect("clamped")
}

fn kms_p(f: &InfluenceProfile, g: &InfluenceProfile, flags: &mut ClampFlags) -> f64 {
    f.influences
        .iter()
        .zip(&g.influences)
        .map(|(a, b)| {
            psi1(flags.clamp(*a, 1.0)).expect("clamped")
                * psi1(flags.clamp(*b, 1.0)).expect("clamped")
        })
        .sum()
}

fn log_e_over(x: f64) -> f64 {
    1.0 - x.ln()
}

fn similar_p(w_fg: f64, w_ff: f64, w_gg: f64, flags: &mut ClampFlags) -> f64 {
    if w_fg == 0.0 {
        return 0.0;
    }
    let w = flags.clamp(w_fg, 1.0);
    let lf = log_e_over(flags.clamp(w_ff, 1.0));
    let lg = log_e_over(flags.clamp(w_gg, 1.0));
    w / (lf * lg).sqrt()
}

fn regular_p(f: &InfluenceProfile, g: &InfluenceProfile, flags: &mut ClampFlags) -> f64 {
    let n = f.n() as f64;
    if f.total == 0.0 || g.total == 0.0 {
        return 0.0;
    }
    // log(en/I²) = log(e/x) with x = I²/n
    let xf = flags.clamp(f.total * f.total / n, 1.0);
    let xg = flags.clamp(g.total * g.total / n, 1.0);
    f.total * g.total / (n * (log_e_over(xf) * log_e_over(xg)).sqrt())
}

fn asymmetric_p(sym: &InfluenceProfile, other: &InfluenceProfile, flags: &mut ClampFlags) -> f64 {
    let n = sym.n();
    let cap = psi_n_cap(n);
    sym.influences
        .iter()
        .zip(&other.influences)
        .map(|(a, b)| {
            psi_n(n, flags.clamp(*a, cap)).expect("clamped")
                * psi2(flags.clamp(*b, 1.0)).expect("clamped")
        })
        .sum()
}

fn mu_form_p(mu_sym: f64, other: &InfluenceProfile, flags: &mut ClampFlags) -> f64 {
    let n = other.n() as f64;
    let s: f64 = other
        .influences
        .iter()
        .map(|a| psi1(flags.clamp(*a, 1.0)).expect("clamped"))
        .sum();
    mu_sym * (1.0 - mu_sym) / n.sqrt() * s
}

fn statement33_p(w_fg: f64, w_ff: f64, w_gg: f64, flags: &mut ClampFlags) -> f64 {
    if w_fg == 0.0 {
        return 0.0;
    }
    let prod = flags.clamp(w_ff, 1.0) * flags.clamp(w_gg, 1.0);
    w_fg / log_e_over(prod)
}

fn require_monotone_pair(f: &FunctionTable, g: &FunctionTable) -> Result<()> {
    f.require_same_n(g)?;
    for (name, t) in [("f", f), ("g", g)] {
        if !t.is_monotone() {
            return Err(Error::Precondition(format!("{name} is not increasing")));
        }
    }
    Ok(())
}

fn profiles(f: &FunctionTable, g: &FunctionTable) -> Result<(InfluenceProfile, InfluenceProfile)> {
    require_monotone_pair(f, g)?;
    Ok((f.influences(), g.influences()))
}

/// φ(W_1(f,g)).
pub fn rhs_talagrand(f: &FunctionTable, g: &FunctionTable) -> Result<f64> {
    let (pf, pg) = profiles(f, g)?;
    Ok(talagrand_p(pf.dot(&pg), &mut ClampFlags::default()))
}

/// Σ_i ψ₁(I_i(f)) ψ₁(I_i(g)).
pub fn rhs_kms(f: &FunctionTable, g: &FunctionTable) -> Result<f64> {
    let (pf, pg) = profiles(f, g)?;
    Ok(kms_p(&pf, &pg, &mut ClampFlags::default()))
}

/// W_1(f,g) / (√log(e/W_1(f,f)) · √log(e/W_1(g,g))).
pub fn rhs_similar(f: &FunctionTable, g: &FunctionTable) -> Result<f64> {
    let (pf, pg) = profiles(f, g)?;
    Ok(similar_p(
        pf.dot(&pg),
        pf.sum_squares(),
        pg.sum_squares(),
        &mut ClampFlags::default(),
    ))
}

/// I(f)I(g) / (n √log(en/I(f)²) √log(en/I(g)²)).
pub fn rhs_regular(f: &FunctionTable, g: &FunctionTable) -> Result<f64> {
    let (pf, pg) = profiles(f, g)?;
    Ok(regular_p(&pf, &pg, &mut ClampFlags::default()))
}

/// Σ_i ψ_n(I_i(sym)) ψ₂(I_i(other)); `sym` should be the fully symmetric side.
pub fn rhs_asymmetric(sym: &FunctionTable, other: &FunctionTable) -> Result<f64> {
    let (ps, po) = profiles(sym, other)?;
    Ok(asymmetric_p(&ps, &po, &mut ClampFlags::default()))
}

/// W_1(f,g) / log(e / (W_1(f,f) W_1(g,g))).
pub fn rhs_statement33(f: &FunctionTable, g: &FunctionTable) -> Result<f64> {
    let (pf, pg) = profiles(f, g)?;
    Ok(statement33_p(
        pf.dot(&pg),
        pf.sum_squares(),
        pg.sum_squares(),
        &mut ClampFlags::default(),
    ))
}

/// Σ_i I_i(f) I_i(g), unclamped.
pub fn rhs_w1(f: &FunctionTable, g: &FunctionTable) -> Result<f64> {
    let (pf, pg) = profiles(f, g)?;
    Ok(pf.dot(&pg))
}

/// One value per right-hand side, in the fixed column order.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RhsValues {
    pub talagrand: f64,
    pub kms: f64,
    pub similar: f64,
    pub regular: f64,
    pub asymmetric: f64,
    pub statement33: f64,
    pub w1: f64,
}

impl RhsValues {
    pub const NAMES: [&'static str; 7] = [
        "talagrand",
        "kms",
        "similar",
        "regular",
        "asymmetric",
        "statement33",
        "w1",
    ];

    pub fn as_array(&self) -> [f64; 7] {
        [
            self.talagrand,
            self.kms,
            self.similar,
            self.regular,
            self.asymmetric,
            self.statement33,
            self.w1,
        ]
    }

    fn map(&self, f: impl Fn(f64) -> f64) -> RhsValues {
        let [a, b, c, d, e, g, h] = self.as_array().map(f);
        RhsValues {
            talagrand: a,
            kms: b,
            similar: c,
            regular: d,
            asymmetric: e,
            statement33: g,
            w1: h,
        }
    }
}

/// Which argument fed the ψ_n slot of the asymmetric bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SymmetricSide {
    F,
    G,
    /// Neither table is fully symmetric; `g` was used anyway.
    None,
}

impl SymmetricSide {
    fn as_str(self) -> &'static str {
        match self {
            SymmetricSide::F => "f",
            SymmetricSide::G => "g",
            SymmetricSide::None => "none",
        }
    }
}

/// Covariance of a monotone pair next to every constant-free lower bound.
///
/// `ratios` holds cov / rhs and is infinite where the bound is 0 (written as
/// `null` in JSON and `inf` in CSV).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub schema_version: u32,
    pub n: usize,
    pub mu_f: f64,
    pub mu_g: f64,
    pub cov: f64,
    pub w1_fg: f64,
    pub w1_ff: f64,
    pub w1_gg: f64,
    pub rhs: RhsValues,
    /// μ(B)(1−μ(B))/√n · Σ ψ₁(I_i(A)) with B the symmetric side; display only.
    pub asymmetric_mu_form: f64,
    pub ratios: RhsValues,
    pub is_similar: bool,
    pub similarity_min: Option<f64>,
    pub similarity_max: Option<f64>,
    pub is_regular_f: bool,
    pub is_regular_g: bool,
    pub is_fully_symmetric_f: bool,
    pub is_fully_symmetric_g: bool,
    pub symmetric_side: SymmetricSide,
    pub clamped: bool,
    pub convention_mismatch: bool,
}

impl BoundReport {
    /// Builds the report; both tables must be increasing and share n.
    pub fn new(f: &FunctionTable, g: &FunctionTable) -> Result<Self> {
        let (pf, pg) = profiles(f, g)?;
        let mu_f = f.mean();
        let mu_g = g.mean();
        let cov = f.covariance(g)?;
        let (w_fg, w_ff, w_gg) = (pf.dot(&pg), pf.sum_squares(), pg.sum_squares());

        let sym_f = f.is_fully_symmetric();
        let sym_g = g.is_fully_symmetric();
        let side = if sym_g {
            SymmetricSide::G
        } else if sym_f {
            SymmetricSide::F
        } else {
            SymmetricSide::None
        };
        let (ps, po, mu_s) = match side {
            SymmetricSide::F => (&pf, &pg, mu_f),
            _ => (&pg, &pf, mu_g),
        };

        let mut flags = ClampFlags::default();
        let rhs = RhsValues {
            talagrand: talagrand_p(w_fg, &mut flags),
            kms: kms_p(&pf, &pg, &mut flags),
            similar: similar_p(w_fg, w_ff, w_gg, &mut flags),
            regular: regular_p(&pf, &pg, &mut flags),
            asymmetric: asymmetric_p(ps, po, &mut flags),
            statement33: statement33_p(w_fg, w_ff, w_gg, &mut flags),
            w1: w_fg,
        };
        let mut display_flags = ClampFlags::default();
        let asymmetric_mu_form = mu_form_p(mu_s, po, &mut display_flags);
        flags.merge(display_flags);

        let ratios = rhs.map(|r| if r > 0.0 { cov / r } else { f64::INFINITY });
        let (similarity_min, similarity_max, is_similar) = match similarity_from_profiles(&pf, &pg)
        {
            Ok((lo, hi)) => (Some(lo), Some(hi), hi - lo <= SIMILAR_TOL * hi.abs()),
            Err(_) => (None, None, false),
        };

        Ok(BoundReport {
            schema_version: SCHEMA_VERSION,
            n: f.n(),
            mu_f,
            mu_g,
            cov,
            w1_fg: w_fg,
            w1_ff: w_ff,
            w1_gg: w_gg,
            rhs,
            asymmetric_mu_form,
            ratios,
            is_similar,
            similarity_min,
            similarity_max,
            is_regular_f: pf.is_regular(),
            is_regular_g: pg.is_regular(),
            is_fully_symmetric_f: sym_f,
            is_fully_symmetric_g: sym_g,
            symmetric_side: side,
            clamped: flags.clamped,
            convention_mismatch: flags.convention_mismatch,
        })
    }

    /// Both comparison inequalities: similar ≥ talagrand and similar ≥ kms / 2.
    pub fn comparison_claims_hold(&self) -> (bool, bool) {
        const TOL: f64 = 1e-12;
        (
            self.rhs.similar >= self.rhs.talagrand - TOL,
            self.rhs.similar >= 0.5 * self.rhs.kms - TOL,
        )
    }

    /// CSV header: a schema comment line followed by the column names.
    pub fn csv_header() -> String {
        let mut cols: Vec<String> = ["n", "mu_f", "mu_g", "cov", "w1_fg", "w1_ff", "w1_gg"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        cols.extend(RhsValues::NAMES.iter().map(|s| format!("rhs_{s}")));
        cols.push("asymmetric_mu_form".into());
        cols.extend(RhsValues::NAMES.iter().map(|s| format!("ratio_{s}")));
        cols.extend(
            [
                "is_similar",
                "similarity_min",
                "similarity_max",
                "is_regular_f",
                "is_regular_g",
                "is_fully_symmetric_f",
                "is_fully_symmetric_g",
                "symmetric_side",
                "clamped",
                "convention_mismatch",
            ]
            .iter()
            .map(|s| s.to_string()),
        );
        format!(
            "# bound_report schema v{SCHEMA_VERSION}\n{}",
            cols.join(",")
        )
    }

    pub fn csv_row(&self) -> String {
        let mut row = String::new();
        let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
        let _ = write!(
            row,
            "{},{},{},{},{},{},{}",
            self.n, self.mu_f, self.mu_g, self.cov, self.w1_fg, self.w1_ff, self.w1_gg
        );
        for v in self.rhs.as_array() {
            let _ = write!(row, ",{v}");
        }
        let _ = write!(row, ",{}", self.asymmetric_mu_form);
        for v in self.ratios.as_array() {
            let _ = write!(row, ",{v}");
        }
        let _ = write!(
            row,
            ",{},{},{},{},{},{},{},{},{},{}",
            self.is_similar,
            opt(self.similarity_min),
            opt(self.similarity_max),
            self.is_regular_f,
            self.is_regular_g,
            self.is_fully_symmetric_f,
            self.is_fully_symmetric_g,
            self.symmetric_side.as_str(),
            self.clamped,
            self.convention_mismatch
        );
        row
    }
}

/// Shorthand for [`BoundReport::new`].
pub fn bound_report(f: &FunctionTable, g: &FunctionTable) -> Result<BoundReport> {
    BoundReport::new(f, g)
}

/// True when both comparison inequalities hold to 1e-12.
pub(crate) fn comparison_report(f: &FunctionTable, g: &FunctionTable) -> Result<BoundReport> {
    let family = |t: &FunctionTable| match t.kind() {
        ValueKind::SignedPm1 => t.to_indicator(),
        _ => Ok(t.clone()),
    };
    BoundReport::new(&family(f)?, &family(g)?)
}

/// The claims concern families, so ±1 tables are read as the indicator of
/// {f = 1}. Signed influences are doubled and can push W_1 past the clamp,
/// where the claims lose meaning; indicator pairs never reach it.
pub fn check_comparison_claims(f: &FunctionTable, g: &FunctionTable) -> Result<bool> {
    let (a, b) = comparison_report(f, g)?.comparison_claims_hold();
    Ok(a && b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cube::ValueKind;
    use crate::families::{dictator, hamming_ball, majority, tribes};

    const E: f64 = std::f64::consts::E;

    #[test]
    fn scalar_closed_forms() {
        assert_eq!(phi(1.0).unwrap(), 1.0);
        assert_eq!(psi1(1.0).unwrap(), 1.0);
        assert_eq!(psi2(1.0).unwrap(), 1.0 / 2f64.sqrt());
        assert!((phi(1.0 / E).unwrap() - 1.0 / (2.0 * E)).abs() < 1e-16);
        for z in [phi(0.0), psi1(0.0), psi2(0.0), psi_n(5, 0.0)] {
            assert_eq!(z.unwrap(), 0.0);
        }
        assert!((psi_n(4, 0.5).unwrap() - 0.5 / 3f64.sqrt()).abs() < 1e-16);
    }

    #[test]
    fn scalar_domains() {
        assert!(phi(1.5).is_err());
        assert!(psi1(-0.1).is_err());
        assert!(psi2(f64::NAN).is_err());
        assert!(psi_n(4, 0.51).is_err());
        assert!(psi_n(0, 0.1).is_err());
    }

    #[test]
    fn u_values() {
        assert!((gaussian_u(0.5).unwrap() - 1.0 / std::f64::consts::PI).abs() < 1e-12);
        for x in [0.1, 0.3, 0.45] {
            assert!((gaussian_u(x).unwrap() - gaussian_u(1.0 - x).unwrap()).abs() < 1e-12);
        }
        // reference from an independent normal-quantile implementation
        assert!((gaussian_u(0.9).unwrap() - 0.061_599_329_022_170_66).abs() < 1e-9);
        assert!(gaussian_u(0.0).is_err() && gaussian_u(1.0).is_err());
    }

    #[test]
    fn dictator_pair() {
        let d = dictator(3, 0).unwrap();
        let r = BoundReport::new(&d, &d).unwrap();
        assert_eq!(r.cov, 0.25);
        assert_eq!(r.rhs.talagrand, 1.0);
        assert_eq!(r.rhs.kms, 1.0);
        assert_eq!(r.rhs.w1, 1.0);
        assert_eq!(r.ratios.talagrand, 0.25);
        // I_1 = 1 sits above the ψ_n edge 1/√3, but within the mismatch factor
        assert!(r.clamped && !r.convention_mismatch);
        let d2 = dictator(3, 1).unwrap();
        let r = BoundReport::new(&d, &d2).unwrap();
        assert_eq!((r.cov, r.rhs.talagrand), (0.0, 0.0));
        assert_eq!(r.ratios.talagrand, f64::INFINITY);
    }

    #[test]
    fn majority_three_self() {
        let m = majority(3).unwrap();
        let r = BoundReport::new(&m, &m).unwrap();
        assert_eq!(r.w1_fg, 0.75);
        let phi34 = 0.75 / (1.0 + (4.0f64 / 3.0).ln());
        assert!((r.rhs.talagrand - phi34).abs() < 1e-15);
        assert!((r.rhs.talagrand - 0.582_441_905_533_39).abs() < 1e-12);
        // f = g collapses the two square roots into one log
        assert!((r.rhs.similar - phi34).abs() < 1e-15);
        assert!(r.is_similar && r.is_regular_f && r.is_fully_symmetric_g);
        assert_eq!(r.comparison_claims_hold(), (true, true));
        assert!(check_comparison_claims(&m, &m).unwrap());
    }

    #[test]
    fn signed_tables_trip_the_mismatch_flag() {
        let m = majority(5).unwrap().to_signed().unwrap();
        let r = BoundReport::new(&m, &m).unwrap();
        assert!(r.clamped && !r.convention_mismatch);
        let d = dictator(8, 0).unwrap().to_signed().unwrap();
        let r = BoundReport::new(&d, &d).unwrap();
        assert!(r.convention_mismatch);
    }

    #[test]
    fn asymmetric_orientation() {
        let a = tribes(4, 2).unwrap();
        let b = hamming_ball(4, 2).unwrap();
        let r = BoundReport::new(&a, &b).unwrap();
        assert_eq!(r.symmetric_side, SymmetricSide::G);
        assert_eq!(r.rhs.asymmetric, rhs_asymmetric(&b, &a).unwrap());
        let r = BoundReport::new(&b, &a).unwrap();
        assert_eq!(r.symmetric_side, SymmetricSide::F);
    }

    #[test]
    fn free_functions_match_report() {
        let a = tribes(6, 3).unwrap();
        let b = hamming_ball(6, 3).unwrap();
        let r = BoundReport::new(&a, &b).unwrap();
        assert_eq!(r.rhs.talagrand, rhs_talagrand(&a, &b).unwrap());
        assert_eq!(r.rhs.kms, rhs_kms(&a, &b).unwrap());
        assert_eq!(r.rhs.similar, rhs_similar(&a, &b).unwrap());
        assert_eq!(r.rhs.regular, rhs_regular(&a, &b).unwrap());
        assert_eq!(r.rhs.statement33, rhs_statement33(&a, &b).unwrap());
        assert_eq!(r.rhs.w1, rhs_w1(&a, &b).unwrap());
    }

    #[test]
    fn rejects_decreasing_input() {
        let m = majority(3).unwrap();
        let dec = FunctionTable::from_fn(3, ValueKind::Indicator01, |x| 1.0 - m.get(x)).unwrap();
        assert!(matches!(
            BoundReport::new(&m, &dec),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn csv_shape_is_stable() {
        let m = majority(3).unwrap();
        let r = BoundReport::new(&m, &m).unwrap();
        let header = BoundReport::csv_header();
        let cols = header.lines().nth(1).unwrap().split(',').count();
        assert!(header.starts_with("# bound_report schema v1\n"));
        assert_eq!(r.csv_row().split(',').count(), cols);
        let json = serde_json::to_value(&r).unwrap();
        assert_eq!(json["schema_version"], 1);
    }
}
