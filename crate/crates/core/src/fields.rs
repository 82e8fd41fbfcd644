//! Plane-wave pulse fields at the atom.
//!
//! E = 𝓔(φ) cos φ ê and B = ẑ × E / c with φ = ωt − kz. The envelope is a
//! function of the retarded time s = φ/ω only, so ∂𝓔/∂z = −(k/ω) ∂𝓔/∂t.

use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

use crate::config::SimConfig;
use crate::constants::C;
use crate::error::{Result, SimError};
use crate::quadrature::GaussLegendre;
use crate::types::PulseField;

/// Fields and envelope derivatives at one space-time point.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FieldSample {
    pub e_vec: Vector3<f64>,
    pub b_vec: Vector3<f64>,
    /// ∂E/∂z, the only non-vanishing spatial derivative of E.
    pub e_dz: Vector3<f64>,
    pub envelope_value: f64,
    /// ∂𝓔/∂z, V/m².
    pub envelope_space_gradient: f64,
    /// ∂𝓔/∂t at fixed z, V/(m·s).
    pub envelope_time_derivative: f64,
    /// Carrier phase φ = ωt − kz, rad.
    pub phase: f64,
}

impl FieldSample {
    /// d𝓔/dt seen by an atom moving along z at `velocity`.
    pub fn envelope_rate_along(&self, velocity: f64) -> f64 {
        self.envelope_time_derivative + velocity * self.envelope_space_gradient
    }
}

/// E and B including the carrier at (t, z).
pub fn sample_field(field: &PulseField, t: f64, z: f64) -> FieldSample {
    let k = field.wavenumber();
    let phase = field.omega * t - k * z;
    let (env, denv_ds) = field.envelope_at(t - z / C);
    let (sin, cos) = phase.sin_cos();
    let e_hat = field.polarization;
    let b_hat = Vector3::z().cross(&e_hat);
    let e_mag = env * cos;
    // ∂/∂z of 𝓔(s) cos φ with ∂s/∂z = −1/c, ∂φ/∂z = −k
    let de_dz = -denv_ds / C * cos + env * k * sin;
    FieldSample {
        e_vec: e_hat * e_mag,
        b_vec: b_hat * (e_mag / C),
        e_dz: e_hat * de_dz,
        envelope_value: env,
        envelope_space_gradient: -denv_ds / C,
        envelope_time_derivative: denv_ds,
        phase,
    }
}

/// Centre-of-mass motion of the atom along z.
pub trait Worldline {
    fn position(&self, t: f64) -> f64;
    fn velocity(&self, t: f64) -> f64;
}

/// Atom at rest.
#[derive(Clone, Copy, Debug)]
pub struct AtRest(pub f64);

impl Worldline for AtRest {
    fn position(&self, _t: f64) -> f64 {
        self.0
    }
    fn velocity(&self, _t: f64) -> f64 {
        0.0
    }
}

/// Uniform motion `z = z0 + v t`.
#[derive(Clone, Copy, Debug)]
pub struct Uniform {
    pub z0: f64,
    pub velocity: f64,
}

impl Worldline for Uniform {
    fn position(&self, t: f64) -> f64 {
        self.z0 + self.velocity * t
    }
    fn velocity(&self, _t: f64) -> f64 {
        self.velocity
    }
}

/// Speed above which the v ≪ c treatment is flagged.
pub const SLOW_ATOM_BOUND: f64 = 1e-3 * C;

/// Envelope on the atom's worldline.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EnvelopeOnWorldline {
    pub value: f64,
    /// Total derivative d𝓔/dt along the worldline.
    pub rate: f64,
    /// True when |v| exceeds `SLOW_ATOM_BOUND`.
    pub fast_atom: bool,
}

pub fn envelope_at_atom<W: Worldline>(field: &PulseField, worldline: &W, t: f64) -> Result<EnvelopeOnWorldline> {
    let z = worldline.position(t);
    let v = worldline.velocity(t);
    if v.abs() >= C {
        return Err(SimError::Superluminal { speed: v.abs() });
    }
    let (value, denv_ds) = field.envelope_at(t - z / C);
    Ok(EnvelopeOnWorldline {
        value,
        rate: denv_ds * (1.0 - v / C),
        fast_atom: v.abs() > SLOW_ATOM_BOUND,
    })
}

/// Landmark lab times for an atom starting at `initial_position`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Timeline {
    pub window_start: f64,
    pub pulse_start: f64,
    pub rise_end: f64,
    pub mid_plateau: f64,
    pub fall_start: f64,
    pub pulse_end: f64,
    pub window_end: f64,
}

/// Vacuum kept before and after the pulse, in units of 1/γ.
const PADDING_GAMMA: f64 = 2.0;

impl Timeline {
    pub fn new(config: &SimConfig) -> Self {
        let offset = config.initial_position / C;
        let [start, rise_end, fall_start, end] = config.field.effective_envelope().breakpoints();
        let pad = PADDING_GAMMA / config.atom.gamma;
        Timeline {
            window_start: start + offset - pad,
            pulse_start: start + offset,
            rise_end: rise_end + offset,
            mid_plateau: 0.5 * (rise_end + fall_start) + offset,
            fall_start: fall_start + offset,
            pulse_end: end + offset,
            window_end: end + offset + pad,
        }
    }

    /// Times the integrator must land on.
    pub fn stops(&self) -> Vec<f64> {
        vec![
            self.pulse_start,
            self.rise_end,
            self.mid_plateau,
            self.fall_start,
            self.pulse_end,
        ]
    }
}

/// |⟨E⟩| over one carrier period centred on `t` and the envelope change over
/// that period. For a slowly varying envelope the first is bounded by the second.
pub fn carrier_average_check(field: &PulseField, t: f64, z: f64) -> (f64, f64) {
    let period = 2.0 * std::f64::consts::PI / field.omega;
    let gl = GaussLegendre::new(16);
    let mean = gl.integrate_panels(
        |tt| sample_field(field, tt, z).e_vec.dot(&field.polarization),
        t - 0.5 * period,
        t + 0.5 * period,
        4,
    ) / period;
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..=64 {
        let tt = t - 0.5 * period + period * i as f64 / 64.0;
        let e = sample_field(field, tt, z).envelope_value;
        lo = lo.min(e);
        hi = hi.max(e);
    }
    (mean.abs(), hi - lo)
}
