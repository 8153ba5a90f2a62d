//! Semiclassical band structure of finite periodic N-well potentials.
//!
//! The low-lying spectrum of a chain of N identical wells splits each
//! harmonic level into a band of N states. This crate computes those bands
//! in closed form from the barrier action between neighbouring wells, and
//! supplies independent numerical references (finite differences, Mathieu
//! characteristic values, tight-binding diagonalisation) to check them.
//!
//! ```
//! use nwell::potentials::{PotentialModel, SemiclassicalContext, Units};
//! use nwell::semiclassics::band_energies;
//!
//! let model = PotentialModel::cosine(25.0, 1.0, 4).unwrap();
//! let ctx = SemiclassicalContext::new(&model, Units::unit_energy_scale(1.0)).unwrap();
//! let band = band_energies(&model, &ctx, 0, 4).unwrap();
//! assert_eq!(band.energies.len(), 4);
//! assert!(band.width() < 1e-6);
//! ```

// `!(x > 0.0)` is used on purpose so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod error;
pub mod lattice;
pub mod oracle;
pub mod potentials;
pub mod semiclassics;

pub use error::{Error, Result};
pub use potentials::{PotentialModel, SemiclassicalContext, Units};
pub use semiclassics::{band_energies, hopping_delta, BandResult};
