use serde::{Deserialize, Serialize};

use super::table::{check_coord, FunctionTable, ValueKind};
use super::transform::check_rho;
use crate::error::{Error, Result};

/// Per-coordinate influences of one table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InfluenceProfile {
    pub influences: Vec<f64>,
    pub total: f64,
    /// max_i I_i / min_i I_i; infinite when some influence vanishes.
    pub max_over_min: f64,
}

impl InfluenceProfile {
    pub fn from_influences(influences: Vec<f64>) -> Self {
        let total = influences.iter().sum();
        let max = influences.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let min = influences.iter().copied().fold(f64::INFINITY, f64::min);
        let max_over_min = if min > 0.0 { max / min } else { f64::INFINITY };
        InfluenceProfile {
            influences,
            total,
            max_over_min,
        }
    }

    pub fn n(&self) -> usize {
        self.influences.len()
    }

    /// All influences equal (and nonzero).
    pub fn is_regular(&self) -> bool {
        self.max_over_min == 1.0
    }

    pub fn max(&self) -> f64 {
        self.influences.iter().copied().fold(0.0, f64::max)
    }

    /// Σ_i I_i².
    pub fn sum_squares(&self) -> f64 {
        self.influences.iter().map(|v| v * v).sum()
    }

    /// Σ_i I_i(self)·I_i(other).
    pub fn dot(&self, other: &InfluenceProfile) -> f64 {
        self.influences
            .iter()
            .zip(&other.influences)
            .map(|(a, b)| a * b)
            .sum()
    }
}

impl FunctionTable {
    /// E[f] under the uniform measure.
    pub fn mean(&self) -> f64 {
        self.values().iter().sum::<f64>() / self.len() as f64
    }

    /// ⟨f, g⟩ = E[fg].
    pub fn inner(&self, other: &FunctionTable) -> Result<f64> {
        self.require_same_n(other)?;
        let s: f64 = self
            .values()
            .iter()
            .zip(other.values())
            .map(|(a, b)| a * b)
            .sum();
        Ok(s / self.len() as f64)
    }

    pub fn covariance(&self, other: &FunctionTable) -> Result<f64> {
        Ok(self.inner(other)? - self.mean() * other.mean())
    }

    /// ‖f‖₂ = √E[f²].
    pub fn norm2(&self) -> f64 {
        (self.values().iter().map(|v| v * v).sum::<f64>() / self.len() as f64).sqrt()
    }

    /// I_k(f) = E|f(x) − f(x ⊕ e_k)|. For a 0/1 table this is 2μ of the pivotal members.
    pub fn influence(&self, coord: usize) -> Result<f64> {
        check_coord(coord, self.n())?;
        Ok(self.influence_unchecked(coord))
    }

    fn influence_unchecked(&self, coord: usize) -> f64 {
        let bit = 1usize << coord;
        let v = self.values();
        let s: f64 = (0..v.len())
            .filter(|m| m & bit == 0)
            .map(|m| (v[m] - v[m | bit]).abs())
            .sum();
        // each unordered edge appears twice in the full average
        2.0 * s / v.len() as f64
    }

    pub(crate) fn influence_vector(&self) -> Vec<f64> {
        (0..self.n()).map(|i| self.influence_unchecked(i)).collect()
    }

    pub fn influences(&self) -> InfluenceProfile {
        InfluenceProfile::from_influences(self.influence_vector())
    }

    /// Δ_i f(x) = ½[f(x) − f(x ⊕ e_i)]; its expansion is Σ_{S∋i} f̂(S) v_S.
    pub fn derivative(&self, coord: usize) -> Result<FunctionTable> {
        check_coord(coord, self.n())?;
        let bit = 1usize << coord;
        let v = self.values();
        let values = (0..v.len()).map(|m| 0.5 * (v[m] - v[m ^ bit])).collect();
        Ok(FunctionTable::from_raw(
            self.n(),
            values,
            ValueKind::Bounded,
        ))
    }

    /// T_ρ f, computed by scaling level-d coefficients by ρ^d.
    pub fn noise(&self, rho: f64) -> Result<FunctionTable> {
        check_rho(rho)?;
        if rho == 1.0 {
            return Ok(self.as_bounded());
        }
        let factors: Vec<f64> = (0..=self.n()).map(|d| rho.powi(d as i32)).collect();
        Ok(self.spectrum().scale_levels(&factors).inverse())
    }

    /// NS_ε(f) = ½ − ½ Σ_S (1 − 2ε)^{|S|} f̂(S)², for ±1 tables.
    pub fn noise_stability(&self, eps: f64) -> Result<f64> {
        self.require_kind(ValueKind::SignedPm1)?;
        if !(0.0..=1.0).contains(&eps) {
            return Err(Error::Domain {
                name: "epsilon",
                value: eps,
                domain: "[0, 1]".into(),
            });
        }
        let masses = self.spectrum().level_masses();
        let r = 1.0 - 2.0 * eps;
        let stab = masses.iter().rev().fold(0.0, |acc, w| acc * r + w);
        Ok(0.5 - 0.5 * stab)
    }

    /// τ = max_i I_i(f) / ‖f‖₂; zero for the zero function.
    pub fn tau_regularity(&self) -> f64 {
        let norm = self.norm2();
        if norm == 0.0 {
            0.0
        } else {
            self.influences().max() / norm
        }
    }

    /// (min_i, max_i) of I_i(self)/I_i(other). The pair is similar iff min == max.
    pub fn similarity_ratio(&self, other: &FunctionTable) -> Result<(f64, f64)> {
        self.require_same_n(other)?;
        similarity_from_profiles(&self.influences(), &other.influences())
    }
}

pub(crate) fn similarity_from_profiles(
    f: &InfluenceProfile,
    g: &InfluenceProfile,
) -> Result<(f64, f64)> {
    if let Some(i) = g.influences.iter().position(|v| *v == 0.0) {
        return Err(Error::Degenerate(format!(
            "coordinate {i} has zero influence in the denominator"
        )));
    }
    let ratios = f.influences.iter().zip(&g.influences).map(|(a, b)| a / b);
    Ok(
        ratios.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), r| {
            (lo.min(r), hi.max(r))
        }),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn maj3() -> FunctionTable {
        FunctionTable::from_family(3, &[3, 5, 6, 7]).unwrap()
    }

    fn tribes_4_2() -> FunctionTable {
        FunctionTable::from_fn(4, ValueKind::Indicator01, |m| {
            ((m & 3 == 3) || (m & 12 == 12)) as u8 as f64
        })
        .unwrap()
    }

    #[test]
    fn moments() {
        let maj = maj3();
        assert_eq!(maj.mean(), 0.5);
        assert_eq!(maj.covariance(&maj).unwrap(), 0.25);
        let c = FunctionTable::constant(3, 1.0, ValueKind::Indicator01).unwrap();
        assert_eq!(maj.covariance(&c).unwrap(), 0.0);
        assert!(maj
            .inner(&FunctionTable::from_family(2, &[]).unwrap())
            .is_err());
        assert_eq!(maj.norm2(), 0.5f64.sqrt());
    }

    #[test]
    fn characters_are_orthonormal() {
        let n = 3;
        let chars: Vec<FunctionTable> = (0..1usize << n)
            .map(|s| {
                FunctionTable::from_fn(n, ValueKind::SignedPm1, |x| {
                    (0..n)
                        .filter(|i| s >> i & 1 == 1)
                        .map(|i| if x >> i & 1 == 1 { 1.0 } else { -1.0 })
                        .product()
                })
                .unwrap()
            })
            .collect();
        for (s, u) in chars.iter().enumerate() {
            for (t, v) in chars.iter().enumerate() {
                let expect = if s == t { 1.0 } else { 0.0 };
                assert_eq!(u.inner(v).unwrap(), expect);
            }
        }
    }

    #[test]
    fn influences_of_named_families() {
        let dict = FunctionTable::from_fn(3, ValueKind::Indicator01, |m| (m & 1) as f64).unwrap();
        assert_eq!(dict.influences().influences, vec![1.0, 0.0, 0.0]);
        assert_eq!(dict.influences().max_over_min, f64::INFINITY);
        let maj = maj3().influences();
        assert_eq!(maj.influences, vec![0.5; 3]);
        assert!(maj.is_regular());
        assert_eq!(maj.total, 1.5);
        let tribes = tribes_4_2().influences();
        assert_eq!(tribes.influences, vec![0.375; 4]);
        assert!(maj3().influence(3).is_err());
    }

    #[test]
    fn derivative_cases() {
        let dict = FunctionTable::new(1, vec![-1.0, 1.0], ValueKind::SignedPm1).unwrap();
        let d = dict.derivative(0).unwrap();
        assert_eq!(d.values(), &[-1.0, 1.0]);
        let f = FunctionTable::from_fn(2, ValueKind::Indicator01, |m| (m & 1) as f64).unwrap();
        assert!(f.derivative(1).unwrap().values().iter().all(|v| *v == 0.0));
        assert!(f.derivative(2).is_err());
    }

    #[test]
    fn derivative_spectrum_is_the_upper_half() {
        let maj = maj3();
        let s = maj.spectrum();
        for i in 0..3 {
            let ds = maj.derivative(i).unwrap().spectrum();
            for m in 0..8 {
                let expect = if m >> i & 1 == 1 { s.coeff(m) } else { 0.0 };
                assert_eq!(ds.coeff(m), expect, "coord {i} mask {m}");
            }
        }
    }

    #[test]
    fn noise_endpoints() {
        let maj = maj3();
        assert_eq!(maj.noise(1.0).unwrap().values(), maj.values());
        assert!(maj
            .noise(0.0)
            .unwrap()
            .values()
            .iter()
            .all(|v| *v == maj.mean()));
        let dict = FunctionTable::new(1, vec![-1.0, 1.0], ValueKind::SignedPm1).unwrap();
        assert_eq!(dict.noise(0.25).unwrap().values(), &[-0.25, 0.25]);
        assert!(maj.noise(1.01).is_err());
    }

    #[test]
    fn noise_stability_cases() {
        let dict = FunctionTable::new(1, vec![-1.0, 1.0], ValueKind::SignedPm1).unwrap();
        for eps in [0.0, 0.1, 0.25, 0.5] {
            assert!((dict.noise_stability(eps).unwrap() - eps).abs() < 1e-15);
        }
        assert!(matches!(
            maj3().noise_stability(0.1),
            Err(Error::Kind { .. })
        ));
    }

    #[test]
    fn tau_and_similarity() {
        let maj = maj3();
        assert_eq!(maj.tau_regularity(), 0.5 / 0.5f64.sqrt());
        let zero = FunctionTable::constant(3, 0.0, ValueKind::Indicator01).unwrap();
        assert_eq!(zero.tau_regularity(), 0.0);
        assert_eq!(maj.similarity_ratio(&maj).unwrap(), (1.0, 1.0));
        let dict = FunctionTable::from_fn(3, ValueKind::Indicator01, |m| (m & 1) as f64).unwrap();
        assert!(matches!(
            maj.similarity_ratio(&dict),
            Err(Error::Degenerate(_))
        ));
        let (lo, hi) = dict.similarity_ratio(&maj).unwrap();
        assert_eq!((lo, hi), (0.0, 2.0));
    }
}
