//! Steady-state laser model built from the Tavis-Cummings system.
//!
//! * [`spectrum`]: exact diagonalization of the invariant `(r, c)` blocks of
//!   `N` two-level molecules coupled to one field mode, with the closed-form
//!   ground-state photon statistics and the linear eigenvalue ladder.
//! * [`thermal`]: Dicke multiplet degeneracies and thermal moments of the
//!   uncoupled molecules, with an exact enumeration oracle.
//! * [`frohlich`]: the pumped, bath-coupled steady state of the collective
//!   levels and its condensation into the lowest level above threshold.
//! * [`dense_oracle`]: brute-force product-space diagonalization used to
//!   cross-check the block construction.
//!
//! Numerical code is generic over [`Real`] (`f32`, `f64`); the aliases below
//! fix the scalar to `f64`.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod dense_oracle;
pub mod error;
pub mod export;
pub mod frohlich;
pub mod scalar;
pub mod spectrum;
pub mod thermal;
pub mod tridiag;

pub use error::{Error, Result};
pub use scalar::{sig17, HalfInt, Real};

pub type BlockIndex = spectrum::BlockIndex<f64>;
pub type HamiltonianBlock = spectrum::HamiltonianBlock<f64>;
pub type EigenSolution = spectrum::EigenSolution<f64>;
pub type PhotonStatistics = spectrum::PhotonStatistics<f64>;
pub type EnsembleParams = thermal::EnsembleParams<f64>;
pub type ThermalMoments = thermal::ThermalMoments<f64>;
pub type LevelLadder = frohlich::LevelLadder<f64>;
pub type BathParams = frohlich::BathParams<f64>;
pub type PumpParams = frohlich::PumpParams<f64>;
pub type SteadyStateSolution = frohlich::SteadyStateSolution<f64>;

pub type BlockIndex32 = spectrum::BlockIndex<f32>;
pub type EigenSolution32 = spectrum::EigenSolution<f32>;
pub type LevelLadder32 = frohlich::LevelLadder<f32>;
pub type SteadyStateSolution32 = frohlich::SteadyStateSolution<f32>;
