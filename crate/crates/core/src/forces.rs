//! Forces on the atom.
//!
//! Three fidelities share the same physics:
//!
//! * the carrier-resolved Lorentz force (d·∇)E + ḋ×B built from
//!   ⟨d·ê⟩ = 2D(u cos φ − v sin φ), used as an oracle;
//! * the cycle average of d·∂_zE + ∂ₜ(d×B)_z ("gordon"):
//!   D(u ∂_z𝓔 − v k𝓔) + d/dt(Du𝓔/c);
//! * the cycle average of (d·∇)E + ḋ×B ("barnett"):
//!   D(u̇ 𝓔/c − v k𝓔).
//!
//! For a transverse plane wave (d·∇)E has no z component, so the whole
//! axial Lorentz force is magnetic.

use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

use crate::bloch::{obe_rhs, steady_state, steady_state_rate, BlochSolution};
use crate::config::SimConfig;
use crate::constants::C;
use crate::fields::{sample_field, FieldSample};
use crate::quadrature::GaussLegendre;
use crate::types::{rabi_frequency, BlochState, PulseField};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ForceTag {
    Gordon,
    Barnett,
    Oscillatory,
}

impl ForceTag {
    pub fn as_str(self) -> &'static str {
        match self {
            ForceTag::Gordon => "gordon",
            ForceTag::Barnett => "barnett",
            ForceTag::Oscillatory => "oscillatory",
        }
    }
}

/// Axial force split into its named parts. Parts that do not belong to the
/// tagged form are zero.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ForceSample {
    pub total_z: f64,
    /// D u ∂𝓔/∂z (gordon).
    pub gradient_z: f64,
    /// −D v k 𝓔 (both averaged forms).
    pub scattering_z: f64,
    /// ∂ₜ(d×B)_z averaged, D(u̇𝓔 + u d𝓔/dt)/c (gordon).
    pub dxb_rate_z: f64,
    /// D u̇ 𝓔/c (barnett).
    pub dudt_z: f64,
    pub form: ForceTag,
}

impl ForceSample {
    /// Everything but the absorptive part.
    pub fn dispersive_z(&self) -> f64 {
        self.total_z - self.scattering_z
    }

    /// The same sample with the ∂ₜ(d×B) contribution removed.
    pub fn without_dxb(mut self) -> ForceSample {
        match self.form {
            ForceTag::Gordon => {
                self.dxb_rate_z = 0.0;
            }
            ForceTag::Barnett | ForceTag::Oscillatory => {
                // barnett = gordon, so neglecting d×B leaves only the part a
                // gordon split would call gradient; callers supply it
            }
        }
        self.total_z = self.gradient_z + self.scattering_z + self.dxb_rate_z + self.dudt_z;
        self
    }
}

/// Cycle-averaged force in the gradient + ∂ₜ(d×B) decomposition.
///
/// `rate` is d/dt of the Bloch state and `velocity` the atom's speed, which
/// enters the total derivative of 𝓔 along the worldline.
pub fn gordon_avg_force(
    state: &BlochState,
    rate: &BlochState,
    sample: &FieldSample,
    velocity: f64,
    dipole: f64,
    k: f64,
) -> ForceSample {
    let env = sample.envelope_value;
    let gradient_z = dipole * state.u * sample.envelope_space_gradient;
    let scattering_z = -dipole * state.v * k * env;
    let dxb_rate_z = dipole * (rate.u * env + state.u * sample.envelope_rate_along(velocity)) / C;
    ForceSample {
        total_z: gradient_z + scattering_z + dxb_rate_z,
        gradient_z,
        scattering_z,
        dxb_rate_z,
        dudt_z: 0.0,
        form: ForceTag::Gordon,
    }
}

/// Cycle-averaged force in the Coulomb + ḋ×B decomposition.
pub fn barnett_avg_force(
    state: &BlochState,
    rate: &BlochState,
    sample: &FieldSample,
    dipole: f64,
    k: f64,
) -> ForceSample {
    let env = sample.envelope_value;
    let dudt_z = dipole * rate.u * env / C;
    let scattering_z = -dipole * state.v * k * env;
    ForceSample {
        total_z: dudt_z + scattering_z,
        gradient_z: 0.0,
        scattering_z,
        dxb_rate_z: 0.0,
        dudt_z,
        form: ForceTag::Barnett,
    }
}

/// The parenthesised rate γ(Ω²/2)/(δ² + γ² + Ω²/2), 1/s.
pub fn scattering_rate(delta: f64, gamma: f64, rabi: f64) -> f64 {
    debug_assert!(gamma > 0.0);
    let half = 0.5 * rabi * rabi;
    gamma * half / (delta * delta + gamma * gamma + half)
}

/// p₀ × scattering rate.
pub fn scattering_force(delta: f64, gamma: f64, rabi: f64, photon_momentum: f64) -> f64 {
    photon_momentum * scattering_rate(delta, gamma, rabi)
}

/// Instantaneous dipole moment and its time derivative.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DipoleSample {
    pub d: Vector3<f64>,
    pub d_dot: Vector3<f64>,
}

/// Rebuild d(t) = 2D(u cos φ − v sin φ) ê and ḋ by the chain rule through
/// u(t), v(t) and the carrier phase.
pub fn dipole_from_bloch(
    state: &BlochState,
    rate: &BlochState,
    phase: f64,
    phase_rate: f64,
    dipole: f64,
    polarization: &Vector3<f64>,
) -> DipoleSample {
    let (sin, cos) = phase.sin_cos();
    let d = 2.0 * dipole * (state.u * cos - state.v * sin);
    let d_dot = 2.0
        * dipole
        * (rate.u * cos - rate.v * sin - phase_rate * (state.u * sin + state.v * cos));
    DipoleSample {
        d: polarization * d,
        d_dot: polarization * d_dot,
    }
}

/// Carrier-resolved Lorentz force on a point dipole.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OscillatoryForce {
    /// (d·∇)E
    pub coulomb: Vector3<f64>,
    /// ḋ × B
    pub magnetic: Vector3<f64>,
}

impl OscillatoryForce {
    pub fn total(&self) -> Vector3<f64> {
        self.coulomb + self.magnetic
    }
}

pub fn oscillatory_force(dipole: &DipoleSample, field: &FieldSample) -> OscillatoryForce {
    // E depends on z only, so (d·∇)E = d_z ∂E/∂z
    let coulomb = field.e_dz * dipole.d.z;
    let magnetic = dipole.d_dot.cross(&field.b_vec);
    OscillatoryForce { coulomb, magnetic }
}

/// Source of (u, v, w) and their rates at arbitrary times.
pub trait BlochHistory {
    fn sample(&self, t: f64) -> (BlochState, BlochState);
}

/// Steady state slaved to the envelope at a fixed position.
pub struct AdiabaticHistory<'a> {
    pub config: &'a SimConfig,
    pub z: f64,
}

impl BlochHistory for AdiabaticHistory<'_> {
    fn sample(&self, t: f64) -> (BlochState, BlochState) {
        let cfg = self.config;
        let (env, denv) = cfg.field.envelope_at(t - self.z / C);
        let rabi = rabi_frequency(cfg.atom.dipole, env);
        let rabi_rate = rabi_frequency(cfg.atom.dipole, denv);
        let delta = cfg.detuning();
        (
            steady_state(delta, cfg.atom.gamma, rabi),
            steady_state_rate(delta, cfg.atom.gamma, rabi, rabi_rate),
        )
    }
}

/// Continuous output of a full Bloch integration at a fixed position.
pub struct ObeHistory<'a> {
    pub config: &'a SimConfig,
    pub solution: &'a BlochSolution,
    pub z: f64,
}

impl BlochHistory for ObeHistory<'_> {
    fn sample(&self, t: f64) -> (BlochState, BlochState) {
        let cfg = self.config;
        let state = self.solution.state_at(t);
        let env = cfg.field.envelope_at(t - self.z / C).0;
        let rate = obe_rhs(
            &state,
            cfg.detuning(),
            cfg.atom.gamma,
            rabi_frequency(cfg.atom.dipole, env),
        );
        (state, rate)
    }
}

/// Axial carrier-resolved force on an atom at rest at `z`.
pub fn oscillatory_force_z<H: BlochHistory>(history: &H, field: &PulseField, dipole: f64, t: f64, z: f64) -> f64 {
    let sample = sample_field(field, t, z);
    let (state, rate) = history.sample(t);
    let d = dipole_from_bloch(&state, &rate, sample.phase, field.omega, dipole, &field.polarization);
    let f = oscillatory_force(&d, &sample);
    debug_assert!(f.coulomb.z == 0.0);
    f.total().z
}

/// Slowly varying part of the carrier-resolved force at `t`.
///
/// Two nested one-period box averages (a triangular window of half-width one
/// period). A single box leaves a 2ω ripple proportional to the envelope
/// drift, of the same size as the dispersive force; the nested average
/// removes it to O((2π/ωτ)²).
pub fn cycle_averaged_oscillatory_force<H: BlochHistory>(
    history: &H,
    field: &PulseField,
    dipole: f64,
    t: f64,
    z: f64,
) -> f64 {
    let period = 2.0 * std::f64::consts::PI / field.omega;
    let gl = GaussLegendre::new(16);
    let f = |x: f64| oscillatory_force_z(history, field, dipole, t + x, z) * (1.0 - x.abs() / period);
    (gl.integrate_panels(f, -period, 0.0, 8) + gl.integrate_panels(f, 0.0, period, 8)) / period
}

/// ∫ F_z dt from `t_start` to `t_end` with carrier resolution, the upper
/// limit averaged over one period to suppress the endpoint ripple.
pub fn oscillatory_impulse<H: BlochHistory>(
    history: &H,
    field: &PulseField,
    dipole: f64,
    z: f64,
    t_start: f64,
    t_end: f64,
) -> f64 {
    let period = 2.0 * std::f64::consts::PI / field.omega;
    let gl = GaussLegendre::new(8);
    let body_end = t_end - period;
    let half = 0.5 * period;
    let panels = ((body_end - t_start) / half).ceil().max(1.0) as usize;
    let body = gl.integrate_panels(
        |t| oscillatory_force_z(history, field, dipole, t, z),
        t_start,
        body_end,
        panels,
    );
    let taper = gl.integrate_panels(
        |t| oscillatory_force_z(history, field, dipole, t, z) * (t_end - t) / period,
        body_end,
        t_end,
        8,
    );
    body + taper
}
