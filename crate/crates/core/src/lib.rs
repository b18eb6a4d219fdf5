//! Quantum-beat field mechanics as an executable model.
//!
//! Three layers, each usable on its own:
//!
//! * [`kinematics`] evaluates the closed-form beat relations of a massive
//!   particle (rest beat frequency, energy partition into irregular and
//!   regular tendencies, de Broglie quantities, weak-field clock rates).
//! * [`walker`] realizes the beat process as a seeded jump walk whose
//!   measured rates, drift and action ledger reproduce those closed forms.
//! * [`waves`] checks the differential quantization rules on plane waves,
//!   solves 1D stationary problems and evaluates the complexity balance.
//!
//! The [`checks`] module bundles every invariant into one runnable suite.
//! With the `parallel` feature (on by default) trajectory ensembles and the
//! suite fan out over rayon; without it everything runs sequentially and
//! produces identical numbers.

pub mod checks;
pub mod constants;
pub mod error;
pub mod fmt;
pub mod kinematics;
pub mod par;
pub mod walker;
pub mod waves;

pub use constants::{PhysicalConstants, UnitSystem};
pub use error::{Error, Result};
pub use kinematics::{
    action_increment, derive_kinematics, energy_partition, local_rest_frequency,
    weak_field_metric, GravityPoint, KinematicsReport, ParticleSpec, PartitionBreakdown,
};
