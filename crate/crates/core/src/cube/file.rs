use serde::{Deserialize, Serialize};

use super::{FunctionTable, ValueKind};
use crate::error::{Error, Result};

/// On-disk JSON form of a table: either dense values with their kind, or the
/// member bitmasks of a family. Bit `i` of a mask is coordinate `i`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TableFile {
    Dense {
        n: usize,
        kind: ValueKind,
        table: Vec<f64>,
    },
    Family {
        n: usize,
        family: Vec<usize>,
    },
}

impl TableFile {
    pub fn n(&self) -> usize {
        match self {
            TableFile::Dense { n, .. } | TableFile::Family { n, .. } => *n,
        }
    }

    pub fn into_table(self) -> Result<FunctionTable> {
        match self {
            TableFile::Dense { n, kind, table } => FunctionTable::new(n, table, kind),
            TableFile::Family { n, family } => FunctionTable::from_family(n, &family),
        }
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| {
            Error::Input(format!(
                "table file must be {{\"n\", \"kind\", \"table\"}} or {{\"n\", \"family\"}}: {e}"
            ))
        })
    }
}

impl From<&FunctionTable> for TableFile {
    fn from(t: &FunctionTable) -> Self {
        TableFile::Dense {
            n: t.n(),
            kind: t.kind(),
            table: t.values().to_vec(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn both_forms_parse() {
        let dense = TableFile::from_json(r#"{"n":2,"kind":"pm1","table":[-1,-1,-1,1]}"#).unwrap();
        let t = dense.into_table().unwrap();
        assert_eq!(t.kind(), ValueKind::SignedPm1);
        let fam = TableFile::from_json(r#"{"n":2,"family":[3]}"#).unwrap();
        assert_eq!(fam.into_table().unwrap(), t.to_indicator().unwrap());
    }

    #[test]
    fn round_trip_and_errors() {
        let t = FunctionTable::from_family(3, &[3, 5, 6, 7]).unwrap();
        let s = serde_json::to_string(&TableFile::from(&t)).unwrap();
        assert_eq!(
            s,
            r#"{"n":3,"kind":"indicator01","table":[0.0,0.0,0.0,1.0,0.0,1.0,1.0,1.0]}"#
        );
        assert_eq!(TableFile::from_json(&s).unwrap().into_table().unwrap(), t);
        assert!(TableFile::from_json(r#"{"n":2}"#).is_err());
        assert!(
            TableFile::from_json(r#"{"n":2,"kind":"pm1","table":[1,1]}"#)
                .unwrap()
                .into_table()
                .is_err()
        );
    }
}
