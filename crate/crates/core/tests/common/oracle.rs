//! Slow reference implementations written straight from the definitions. They share
//! no code with the library beyond reading raw table values.

/// v_S(x) = Π_{i∈S} (2x_i − 1).
pub fn character(s: usize, x: usize) -> f64 {
    if (s & !x).count_ones().is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// f̂(S) = 2^{-n} Σ_x f(x) v_S(x).
pub fn coeff(values: &[f64], s: usize) -> f64 {
    let sum: f64 = values
        .iter()
        .enumerate()
        .map(|(x, v)| v * character(s, x))
        .sum();
    sum / values.len() as f64
}

/// All coefficients by direct summation, O(4^n).
pub fn spectrum(values: &[f64]) -> Vec<f64> {
    (0..values.len()).map(|s| coeff(values, s)).collect()
}

/// Σ_{|S|=d} f̂(S)ĝ(S) for d ≤ `max_level`, by direct summation.
pub fn low_level_sums(f: &[f64], g: &[f64], max_level: usize) -> Vec<f64> {
    let mut out = vec![0.0; max_level + 1];
    for s in 0..f.len() {
        let d = s.count_ones() as usize;
        if d <= max_level {
            out[d] += coeff(f, s) * coeff(g, s);
        }
    }
    out
}

pub fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

pub fn covariance(f: &[f64], g: &[f64]) -> f64 {
    let fg: f64 = f.iter().zip(g).map(|(a, b)| a * b).sum::<f64>() / f.len() as f64;
    fg - mean(f) * mean(g)
}

/// I_k = 2^{-n} Σ_x |f(x) − f(x ⊕ e_k)| over all x (each edge counted twice).
pub fn influences(values: &[f64], n: usize) -> Vec<f64> {
    (0..n)
        .map(|k| {
            values
                .iter()
                .enumerate()
                .map(|(x, v)| (v - values[x ^ (1 << k)]).abs())
                .sum::<f64>()
                / values.len() as f64
        })
        .collect()
}

/// E[f(N_ρ x)] by enumerating, for every coordinate, keep (prob ρ), reset to 0
/// or reset to 1 (prob (1−ρ)/2 each): 3^n patterns per point.
pub fn noise_direct(values: &[f64], n: usize, rho: f64) -> Vec<f64> {
    let probs = [rho, (1.0 - rho) / 2.0, (1.0 - rho) / 2.0];
    let patterns = 3usize.pow(n as u32);
    (0..values.len())
        .map(|x| {
            let mut acc = 0.0;
            for p in 0..patterns {
                let (mut y, mut w, mut code) = (0usize, 1.0, p);
                for i in 0..n {
                    let choice = code % 3;
                    code /= 3;
                    w *= probs[choice];
                    let bit = match choice {
                        0 => (x >> i) & 1,
                        1 => 0,
                        _ => 1,
                    };
                    y |= bit << i;
                }
                acc += w * values[y];
            }
            acc
        })
        .collect()
}

/// f(x) ≤ f(y) whenever x ⊆ y, checked over all comparable pairs.
pub fn is_monotone(values: &[f64]) -> bool {
    (0..values.len()).all(|x| {
        (0..values.len())
            .filter(|y| x & y == x)
            .all(|y| values[x] <= values[y])
    })
}
