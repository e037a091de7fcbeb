//! Desk-scale simulator for CHSH tests on two-photon polarization states
//! with colored (basis-preferred) noise.
//!
//! - [`state`]: two-qubit density matrices and the colored, white and mixed
//!   noise families.
//! - [`chsh`]: CHSH observables, Bell values and their maximization, with the
//!   Horodecki closed form as an independent check.
//! - [`source`]: trombone delay to Bell-state weight for a type-II
//!   down-conversion source.
//! - [`counting`]: analyzer projectors, multinomial coincidence counts and
//!   the correlation estimators.
//! - [`tomography`]: nine-basis linear-inversion tomography.
//!
//! Batch work (grids, sweeps, per-setting sampling) runs on rayon when the
//! default `parallel` feature is enabled and sequentially otherwise; outputs
//! are identical either way.

// `!(x > 0.0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod chsh;
pub mod counting;
pub mod error;
pub mod exec;
pub mod optim;
pub mod source;
pub mod state;
pub mod tomography;

pub use chsh::{BellResult, ChshSettings, MaximizeOptions, NoiseFamily};
pub use counting::{AnalyzerSetting, CorrelationEstimate, CountRecord, Shots};
pub use error::{Error, Result};
pub use source::{DelayPoint, PumpSpread, SourceParams};
pub use state::{DensityMatrix, NoiseKind, NoiseModel};
pub use tomography::{TomoResult, TomoSettings};
