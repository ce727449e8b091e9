use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported coordinate count. A table at this size holds 2^24 doubles (128 MiB).
pub const MAX_N: usize = 24;

/// What range the values of a [`FunctionTable`] are promised to lie in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ValueKind {
    /// Values in {0, 1}; the indicator of a family.
    #[serde(rename = "indicator01")]
    Indicator01,
    /// Values in {-1, +1}.
    #[serde(rename = "pm1")]
    SignedPm1,
    /// Values in [-1, 1].
    #[serde(rename = "bounded")]
    Bounded,
}

impl fmt::Display for ValueKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ValueKind::Indicator01 => "indicator01",
            ValueKind::SignedPm1 => "pm1",
            ValueKind::Bounded => "bounded",
        };
        f.write_str(s)
    }
}

impl ValueKind {
    fn admits(self, v: f64) -> bool {
        match self {
            ValueKind::Indicator01 => v == 0.0 || v == 1.0,
            ValueKind::SignedPm1 => v == -1.0 || v == 1.0,
            ValueKind::Bounded => (-1.0..=1.0).contains(&v),
        }
    }
}

/// Dense values of a real function on {0,1}^n.
///
/// `values[m]` is f at the point whose coordinate `i` is bit `i` of `m`
/// (coordinate 0 is the first coordinate x_1). Flipping coordinate `i` is `m ^ (1 << i)`.
#[derive(Debug, Clone, PartialEq)]
pub struct FunctionTable {
    n: usize,
    values: Vec<f64>,
    kind: ValueKind,
}

pub(crate) fn check_n(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::Input("a table needs at least one coordinate".into()));
    }
    if n > MAX_N {
        return Err(Error::TooLarge { n, cap: MAX_N });
    }
    Ok(())
}

pub(crate) fn check_coord(coord: usize, n: usize) -> Result<()> {
    if coord >= n {
        Err(Error::CoordinateOutOfRange { coord, n })
    } else {
        Ok(())
    }
}

impl FunctionTable {
    /// Builds a table, checking the length and that every value fits `kind`.
    pub fn new(n: usize, values: Vec<f64>, kind: ValueKind) -> Result<Self> {
        check_n(n)?;
        if values.len() != 1 << n {
            return Err(Error::Input(format!(
                "table for n = {n} needs {} values, got {}",
                1usize << n,
                values.len()
            )));
        }
        if let Some((m, v)) = values.iter().enumerate().find(|(_, v)| !kind.admits(**v)) {
            return Err(Error::Input(format!(
                "value {v} at mask {m} is not admissible for kind {kind}"
            )));
        }
        Ok(FunctionTable { n, values, kind })
    }

    /// Tabulates `f` over every mask and validates the result.
    pub fn from_fn(n: usize, kind: ValueKind, f: impl Fn(usize) -> f64) -> Result<Self> {
        check_n(n)?;
        let values = (0..1usize << n).map(f).collect();
        Self::new(n, values, kind)
    }

    /// Indicator of the family whose members are the given bitmasks.
    pub fn from_family(n: usize, members: &[usize]) -> Result<Self> {
        check_n(n)?;
        let mut values = vec![0.0; 1 << n];
        for &m in members {
            if m >= values.len() {
                return Err(Error::Input(format!("member {m} does not fit in {n} bits")));
            }
            values[m] = 1.0;
        }
        Ok(FunctionTable {
            n,
            values,
            kind: ValueKind::Indicator01,
        })
    }

    pub fn constant(n: usize, value: f64, kind: ValueKind) -> Result<Self> {
        check_n(n)?;
        Self::new(n, vec![value; 1 << n], kind)
    }

    /// Table produced by an internal computation (transform, noise, derivative).
    /// Values may differ from the `kind` range by floating-point rounding.
    pub(crate) fn from_raw(n: usize, values: Vec<f64>, kind: ValueKind) -> Self {
        debug_assert_eq!(values.len(), 1 << n);
        FunctionTable { n, values, kind }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn kind(&self) -> ValueKind {
        self.kind
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, mask: usize) -> f64 {
        self.values[mask]
    }

    /// Members of a 0/1 table as bitmasks, in increasing order.
    pub fn members(&self) -> Result<Vec<usize>> {
        self.require_kind(ValueKind::Indicator01)?;
        Ok(self
            .values
            .iter()
            .enumerate()
            .filter(|(_, v)| **v == 1.0)
            .map(|(m, _)| m)
            .collect())
    }

    pub(crate) fn require_kind(&self, kind: ValueKind) -> Result<()> {
        if self.kind == kind {
            Ok(())
        } else {
            Err(Error::Kind {
                expected: match kind {
                    ValueKind::Indicator01 => "indicator01",
                    ValueKind::SignedPm1 => "pm1",
                    ValueKind::Bounded => "bounded",
                },
                found: self.kind,
            })
        }
    }

    pub(crate) fn require_same_n(&self, other: &FunctionTable) -> Result<()> {
        if self.n == other.n {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                left: self.n,
                right: other.n,
            })
        }
    }

    /// The ±1 form F = 2f − 1 of an indicator. A ±1 table is returned unchanged.
    pub fn to_signed(&self) -> Result<FunctionTable> {
        match self.kind {
            ValueKind::SignedPm1 => Ok(self.clone()),
            ValueKind::Indicator01 => Ok(FunctionTable::from_raw(
                self.n,
                self.values.iter().map(|v| 2.0 * v - 1.0).collect(),
                ValueKind::SignedPm1,
            )),
            ValueKind::Bounded => Err(Error::Kind {
                expected: "indicator01 or pm1",
                found: self.kind,
            }),
        }
    }

    /// The 0/1 form f = (F + 1)/2 of a ±1 table. An indicator is returned unchanged.
    pub fn to_indicator(&self) -> Result<FunctionTable> {
        match self.kind {
            ValueKind::Indicator01 => Ok(self.clone()),
            ValueKind::SignedPm1 => Ok(FunctionTable::from_raw(
                self.n,
                self.values.iter().map(|v| (v + 1.0) / 2.0).collect(),
                ValueKind::Indicator01,
            )),
            ValueKind::Bounded => Err(Error::Kind {
                expected: "indicator01 or pm1",
                found: self.kind,
            }),
        }
    }

    /// Relabels the table as `Bounded`; the values are untouched.
    pub fn as_bounded(&self) -> FunctionTable {
        FunctionTable::from_raw(self.n, self.values.clone(), ValueKind::Bounded)
    }

    /// The same function viewed on `n_new >= n` coordinates; the extra ones are dummies.
    pub fn extend(&self, n_new: usize) -> Result<FunctionTable> {
        check_n(n_new)?;
        if n_new < self.n {
            return Err(Error::Input(format!(
                "cannot extend a table on {} coordinates to {n_new}",
                self.n
            )));
        }
        let low = (1usize << self.n) - 1;
        let values = (0..1usize << n_new).map(|m| self.values[m & low]).collect();
        Ok(FunctionTable::from_raw(n_new, values, self.kind))
    }

    /// Moves coordinate `i` to position `perm[i]`: the result g satisfies g(y) = f(x)
    /// where bit `perm[i]` of y equals bit `i` of x.
    pub fn permute(&self, perm: &[usize]) -> Result<FunctionTable> {
        if perm.len() != self.n {
            return Err(Error::Input(format!(
                "permutation has {} entries for n = {}",
                perm.len(),
                self.n
            )));
        }
        let mut seen = vec![false; self.n];
        for &p in perm {
            check_coord(p, self.n)?;
            if std::mem::replace(&mut seen[p], true) {
                return Err(Error::Input(format!("{perm:?} is not a permutation")));
            }
        }
        let mut values = vec![0.0; self.len()];
        for (x, &v) in self.values.iter().enumerate() {
            let mut y = 0;
            for (i, &p) in perm.iter().enumerate() {
                y |= ((x >> i) & 1) << p;
            }
            values[y] = v;
        }
        Ok(FunctionTable::from_raw(self.n, values, self.kind))
    }

    /// Exact coordinatewise monotonicity: f(m) ≤ f(m | e_i) for all m, i.
    pub fn is_monotone(&self) -> bool {
        self.is_monotone_within(0.0)
    }

    /// Monotonicity up to an absolute slack, for tables carrying rounding error.
    pub fn is_monotone_within(&self, tol: f64) -> bool {
        (0..self.n).all(|i| {
            let bit = 1 << i;
            self.values
                .iter()
                .enumerate()
                .filter(|(m, _)| m & bit == 0)
                .all(|(m, &v)| v <= self.values[m | bit] + tol)
        })
    }

    /// Invariance under every coordinate permutation, i.e. f depends on the Hamming weight only.
    pub fn is_fully_symmetric(&self) -> bool {
        let mut by_weight: Vec<Option<f64>> = vec![None; self.n + 1];
        self.values.iter().enumerate().all(|(m, &v)| {
            let w = m.count_ones() as usize;
            match by_weight[w] {
                Some(seen) => seen == v,
                None => {
                    by_weight[w] = Some(v);
                    true
                }
            }
        })
    }

    /// Dual family x ↦ 1 − f(x̄) for indicators, x ↦ −f(x̄) for ±1 tables.
    pub fn dual(&self) -> Result<FunctionTable> {
        let full = self.len() - 1;
        let values = match self.kind {
            ValueKind::Indicator01 => (0..self.len())
                .map(|m| 1.0 - self.values[!m & full])
                .collect(),
            ValueKind::SignedPm1 => (0..self.len()).map(|m| -self.values[!m & full]).collect(),
            ValueKind::Bounded => {
                return Err(Error::Kind {
                    expected: "indicator01 or pm1",
                    found: self.kind,
                })
            }
        };
        Ok(FunctionTable::from_raw(self.n, values, self.kind))
    }

    /// Fixes coordinate `coord` to `bit`, giving a table on n − 1 coordinates
    /// (the remaining coordinates keep their relative order).
    pub fn restrict(&self, coord: usize, bit: bool) -> Result<FunctionTable> {
        check_coord(coord, self.n)?;
        if self.n == 1 {
            return Err(Error::Input(
                "cannot restrict a one-coordinate table".into(),
            ));
        }
        let low = (1usize << coord) - 1;
        let fixed = (bit as usize) << coord;
        let values = (0..1usize << (self.n - 1))
            .map(|y| {
                let m = (y & low) | ((y & !low) << 1) | fixed;
                self.values[m]
            })
            .collect();
        Ok(FunctionTable::from_raw(self.n - 1, values, self.kind))
    }
}
