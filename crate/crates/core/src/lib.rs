//! Mechanics, thermoelastic damping and intracavity optics of optically
//! trapped thin membranes.

// `!(x > 0.0)` is used on purpose so that NaN inputs fail validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cavity;
pub mod constants;
pub mod coupling;
pub mod error;
pub mod params;
pub mod plate;
pub mod roots;
pub mod special;
pub mod spring;
pub mod tether;
pub mod thermo;

pub use error::{Error, Result};
pub use params::{
    BathParams, DiskGeometry, IntensityProfile, MaterialParams, OpticalParams, TetherGeometry, ThicknessProfile,
};
pub use plate::{DiskProblem, ModeSolution, PlateOperator, RadialGrid};
pub use tether::{ModeClass, RigidTetherSystem, TetherMode};
pub use thermo::ThermoResult;
pub use spring::SpringConfig;
pub use cavity::{CavityModeResult, CavitySetup, CoherenceBudget, FieldProfile, HankelGrid};
