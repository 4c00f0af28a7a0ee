//! Geodesics, closure and spectra of the sub-Riemannian three-sphere in Hopf
//! coordinates.

pub mod classifier;
pub mod dynamics;
pub mod eigen;
mod error;
pub mod export;
pub mod hopf;
pub mod integrator;
pub mod par;
mod quad;
pub mod spectrum;
pub mod verify;

pub use error::{Error, Result};
