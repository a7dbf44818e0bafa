//! Numerics for covariant un-reduction of planar closed curves.

pub mod config;
pub mod curvegeo;
pub mod error;
pub mod hopf;
pub mod hypflow;
pub mod runner;
pub mod sigma;
pub mod sobolev;
pub mod spectral;
pub mod unreduction;
pub mod verify;

pub use error::{Error, Result};
