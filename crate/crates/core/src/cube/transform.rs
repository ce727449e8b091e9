//! Fourier–Walsh transform in the basis v_S(x) = Π_{i∈S} (2x_i − 1).
//!
//! With this sign choice the level-1 coefficients of an increasing function are
//! nonnegative. Every product f̂(S)ĝ(S) agrees with the (−1)^{|S∩T|} basis.

use serde::{Deserialize, Serialize};

use super::table::{FunctionTable, ValueKind};
use crate::error::{Error, Result};

/// All 2^n Fourier–Walsh coefficients, `coeffs[mask(S)] = f̂(S)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    n: usize,
    coeffs: Vec<f64>,
}

/// Unnormalized in-place butterfly: afterwards `data[S] = Σ_x data[x]·v_S(x)`.
///
/// Applying it twice multiplies by 2^n up to the sign pattern of the inverse; use
/// [`fwht_inverse_in_place`] for the synthesis direction.
pub fn fwht_in_place(data: &mut [f64]) {
    assert!(
        data.len().is_power_of_two(),
        "length must be a power of two"
    );
    let mut h = 1;
    while h < data.len() {
        for block in data.chunks_exact_mut(2 * h) {
            let (lo, hi) = block.split_at_mut(h);
            for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                let (x0, x1) = (*a, *b);
                *a = x0 + x1;
                *b = x1 - x0;
            }
        }
        h *= 2;
    }
}

/// Synthesis butterfly: afterwards `data[x] = Σ_S data[S]·v_S(x)`.
pub fn fwht_inverse_in_place(data: &mut [f64]) {
    assert!(
        data.len().is_power_of_two(),
        "length must be a power of two"
    );
    let mut h = 1;
    while h < data.len() {
        for block in data.chunks_exact_mut(2 * h) {
            let (lo, hi) = block.split_at_mut(h);
            for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                let (c0, c1) = (*a, *b);
                *a = c0 - c1;
                *b = c0 + c1;
            }
        }
        h *= 2;
    }
}

/// Forward transform, f̂(S) = 2^{-n} Σ_x f(x) v_S(x), in O(n·2^n).
pub fn wht_forward(f: &FunctionTable) -> Spectrum {
    let mut coeffs = f.values().to_vec();
    fwht_in_place(&mut coeffs);
    let scale = 1.0 / coeffs.len() as f64;
    coeffs.iter_mut().for_each(|c| *c *= scale);
    Spectrum { n: f.n(), coeffs }
}

/// Inverse transform; the result is labelled `Bounded`.
pub fn wht_inverse(s: &Spectrum) -> FunctionTable {
    let mut values = s.coeffs.clone();
    fwht_inverse_in_place(&mut values);
    FunctionTable::from_raw(s.n, values, ValueKind::Bounded)
}

impl Spectrum {
    pub fn new(n: usize, coeffs: Vec<f64>) -> Result<Self> {
        super::table::check_n(n)?;
        if coeffs.len() != 1 << n {
            return Err(Error::Input(format!(
                "spectrum for n = {n} needs {} coefficients, got {}",
                1usize << n,
                coeffs.len()
            )));
        }
        Ok(Spectrum { n, coeffs })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn coeff(&self, mask: usize) -> f64 {
        self.coeffs[mask]
    }

    /// The singleton coefficients f̂({i}), i = 0..n.
    pub fn level_one(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.coeffs[1 << i]).collect()
    }

    /// Σ_{|S|=d} f̂(S)² for every d.
    pub fn level_masses(&self) -> Vec<f64> {
        let mut w = vec![0.0; self.n + 1];
        for (m, c) in self.coeffs.iter().enumerate() {
            w[m.count_ones() as usize] += c * c;
        }
        w
    }

    pub fn inverse(&self) -> FunctionTable {
        wht_inverse(self)
    }

    /// Multiplies every level-d coefficient by `factors[d]`.
    pub(crate) fn scale_levels(&self, factors: &[f64]) -> Spectrum {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(m, c)| c * factors[m.count_ones() as usize])
            .collect();
        Spectrum { n: self.n, coeffs }
    }
}

impl FunctionTable {
    pub fn spectrum(&self) -> Spectrum {
        wht_forward(self)
    }
}

/// Spectral level correlations SW_d(f,g) = Σ_{|S|=d} f̂(S)ĝ(S), d = 0..=n.
///
/// `w1_influence` is the influence-normalized first level Σ_i I_i(f)I_i(g); for
/// monotone tables it equals 4·`sw[1]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelWeights {
    pub n: usize,
    pub sw: Vec<f64>,
    pub w1_influence: f64,
}

impl LevelWeights {
    /// Level sums from precomputed spectra, with the influence-normalized W_1 supplied.
    pub fn from_spectra(sf: &Spectrum, sg: &Spectrum, w1_influence: f64) -> Result<Self> {
        if sf.n != sg.n {
            return Err(Error::DimensionMismatch {
                left: sf.n,
                right: sg.n,
            });
        }
        let mut sw = vec![0.0; sf.n + 1];
        for (m, (a, b)) in sf.coeffs.iter().zip(&sg.coeffs).enumerate() {
            sw[m.count_ones() as usize] += a * b;
        }
        Ok(LevelWeights {
            n: sf.n,
            sw,
            w1_influence,
        })
    }

    /// h(ρ) = ⟨T_ρ f, g⟩ = Σ_d ρ^d SW_d(f,g).
    pub fn noise_correlation(&self, rho: f64) -> f64 {
        self.sw.iter().rev().fold(0.0, |acc, w| acc * rho + w)
    }

    /// h′(ρ) = Σ_d d·ρ^{d−1} SW_d(f,g).
    pub fn noise_correlation_derivative(&self, rho: f64) -> f64 {
        self.sw
            .iter()
            .enumerate()
            .skip(1)
            .rev()
            .fold(0.0, |acc, (d, w)| acc * rho + d as f64 * w)
    }

    /// Cov(f,g) = Σ_{d≥1} SW_d(f,g).
    pub fn covariance(&self) -> f64 {
        self.sw.iter().skip(1).sum()
    }
}

/// Computes [`LevelWeights`] for a pair of tables on the same cube.
pub fn level_weights(f: &FunctionTable, g: &FunctionTable) -> Result<LevelWeights> {
    f.require_same_n(g)?;
    let w1 = f
        .influence_vector()
        .iter()
        .zip(g.influence_vector())
        .map(|(a, b)| a * b)
        .sum();
    LevelWeights::from_spectra(&f.spectrum(), &g.spectrum(), w1)
}

/// ⟨T_ρ f, g⟩ evaluated as a polynomial in ρ from the level sums.
pub fn noise_correlation(f: &FunctionTable, g: &FunctionTable, rho: f64) -> Result<f64> {
    check_rho(rho)?;
    Ok(level_weights(f, g)?.noise_correlation(rho))
}

pub(crate) fn check_rho(rho: f64) -> Result<()> {
    if (0.0..=1.0).contains(&rho) {
        Ok(())
    } else {
        Err(Error::Domain {
            name: "rho",
            value: rho,
            domain: "[0, 1]".into(),
        })
    }
}
