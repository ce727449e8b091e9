//! Exact tables, Fourier–Walsh spectra, influences and the noise operator on {0,1}^n.

mod analysis;
mod file;
mod table;
mod transform;

pub(crate) use analysis::similarity_from_profiles;
pub use analysis::InfluenceProfile;
pub use file::TableFile;
pub use table::{FunctionTable, ValueKind, MAX_N};
pub use transform::{
    fwht_in_place, fwht_inverse_in_place, level_weights, noise_correlation, wht_forward,
    wht_inverse, LevelWeights, Spectrum,
};
