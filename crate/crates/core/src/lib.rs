//! Exact laboratory for correlation inequalities of monotone functions on the
//! discrete cube {0,1}^n.
//!
//! * [`cube`] holds dense function tables, the Fourier–Walsh transform, influences,
//!   derivatives and the noise operator.
//! * [`families`] builds Hamming balls, tribes, threshold functions, compositions and
//!   the two-family constructions used as counterexamples.
//! * [`bounds`] evaluates the correlation lower bounds without their universal constants.
//! * [`verify`] checks the exact identities and inequalities, estimates implied
//!   constants and scans for extremal instances.
//!
//! Coordinates are bit positions: coordinate `i` of the point `m` is bit `i` of `m`.

pub mod bounds;
pub mod cube;
pub mod error;
pub mod families;
pub mod verify;

pub use cube::{FunctionTable, InfluenceProfile, LevelWeights, Spectrum, TableFile, ValueKind};
pub use error::{Error, Result};
