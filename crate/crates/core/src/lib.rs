//! Exact superpositions of Burgers plane waves for the isentropic Euler
//! equations `p = kρ^γ`, with finite-difference verification, a
//! finite-volume cross-check and snapshot export.
//!
//! Wave directions satisfy `v_i·v_j = −a`, `a = (γ−1)/2`; each wave profile
//! solves `f_t + (1+a) f f_s = 0` until it breaks.

pub mod burgers;
pub mod cli;
pub mod contour;
pub mod directions;
pub mod error;
pub mod export;
pub mod field;
pub mod fv;
pub mod gas;
pub mod grid;
pub mod scenario;
pub mod verify;

pub use burgers::{BurgersProfile, BurgersWave};
pub use directions::{build_directions, max_wave_count, DirectionSet};
pub use error::{Error, Result};
pub use field::{assemble, ExactField, FieldSample, TransverseMode};
pub use fv::FvState;
pub use gas::GasParams;
pub use grid::GridSpec;
pub use scenario::Scenario;
