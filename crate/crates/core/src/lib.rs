//! Semiclassical simulation of momentum exchange between a light pulse and a
//! two-level atom.
//!
//! The atom's Bloch vector, the cycle-averaged (or carrier-resolved) force and
//! its centre-of-mass motion are integrated together, and every momentum
//! quantity is kept in a [`ledger::MomentumLedger`] so that the kinetic,
//! canonical, Abraham and Minkowski accounts can be compared on one run.

pub mod bloch;
pub mod config;
pub mod constants;
pub mod dynamics;
pub mod error;
pub mod fields;
pub mod forces;
pub mod ledger;
pub mod ode;
pub mod quadrature;
pub mod types;

pub use config::{default_config, parse_config, Fidelity, ForceForm, RegimeWarning, SimConfig};
pub use dynamics::{integrate_motion, measure_displacements, Simulation, TrajectoryRecord};
pub use error::{ConfigError, Result, SimError};
pub use ledger::{MomentumLedger, PhotonMomentumReport};
pub use types::{AtomParams, BlochState, Envelope, EnvelopeShape, PulseField};
