pub mod asymptotics;
pub mod error;
pub mod experiment;
pub mod families;
pub mod measure;
pub mod opuc;
pub mod outer;
pub mod rng;
pub mod scattering;
pub mod schur;
pub mod series;

mod dd;
mod spectral;

pub use error::{OpucError, Result};
