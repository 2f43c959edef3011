//! Quantum uncertainty of the width of paraxial optical beams.
//!
//! The beam width is measured by the intensity-weighted spatial variance
//! `W = (1 / N) sum_ij D_ij a_i^† a_j` over a transverse mode basis. This
//! crate evaluates the mode families, the moment matrices `D`, `F` (and
//! their angular-spectrum counterparts), the width noise for single-mode
//! photon statistics and for linearized bright multimode fields, and the
//! detection modes whose amplitude quadrature carries that noise.
//!
//! ```
//! use beamwidth::{modes::TransverseMode, noise, states::SingleModeState};
//!
//! let u0 = TransverseMode::hermite_gauss(0, 0, 1.0).unwrap();
//! let fock = SingleModeState::fock(5);
//! let ratio = noise::relative_width_noise(&u0, &fock).unwrap();
//! assert!((ratio - 0.5).abs() < 1e-12);
//! ```

// `!(x >= 0.0)` style guards are used on purpose so that NaN is rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod detection;
pub mod error;
pub mod modes;
pub mod moments;
pub mod noise;
pub mod optimize;
pub mod quadrature;
pub mod special;
pub mod states;

pub use error::{Error, Result};
pub use num_complex::Complex64;
