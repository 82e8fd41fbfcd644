//! Optical Bloch dynamics of the two-level atom in the rotating frame.
//!
//! Convention: with ρ_ge = (u + iv) e^{iφ} and w = ρ_ee − ρ_gg the rotating-wave
//! equations are
//!
//! ```text
//! du/dt = −γu + δv
//! dv/dt = −δu − γv − Ωw/2
//! dw/dt = 2Ωv − 2γ(w + 1)
//! ```
//!
//! whose fixed point is (u, v) = (δ, γ)·(Ω/2)/(δ² + γ² + Ω²/2) and
//! w = −(δ² + γ²)/(δ² + γ² + Ω²/2). The coherence decays at γ and the
//! population at 2γ.

use serde::{Deserialize, Serialize};

use crate::config::{Fidelity, SimConfig};
use crate::error::{Result, SimError};
use crate::fields::Timeline;
use crate::ode::{integrate, OdeOptions, OdeSolution};
use crate::types::{rabi_frequency, BlochState};

/// In-phase and quadrature steady-state dipole components.
pub fn steady_state_uv(delta: f64, gamma: f64, rabi: f64) -> (f64, f64) {
    debug_assert!(gamma > 0.0);
    let denom = delta * delta + gamma * gamma + 0.5 * rabi * rabi;
    let factor = 0.5 * rabi / denom;
    (delta * factor, gamma * factor)
}

/// Full steady state including the inversion.
pub fn steady_state(delta: f64, gamma: f64, rabi: f64) -> BlochState {
    let (u, v) = steady_state_uv(delta, gamma, rabi);
    let base = delta * delta + gamma * gamma;
    BlochState {
        u,
        v,
        w: -base / (base + 0.5 * rabi * rabi),
    }
}

/// Time derivative of the steady state when Ω changes at rate `rabi_rate`.
pub fn steady_state_rate(delta: f64, gamma: f64, rabi: f64, rabi_rate: f64) -> BlochState {
    let base = delta * delta + gamma * gamma;
    let s = base + 0.5 * rabi * rabi;
    let common = 0.5 * (s - rabi * rabi) / (s * s);
    BlochState {
        u: delta * common * rabi_rate,
        v: gamma * common * rabi_rate,
        w: base * rabi / (s * s) * rabi_rate,
    }
}

/// Right-hand side of the optical Bloch equations.
pub fn obe_rhs(state: &BlochState, delta: f64, gamma: f64, rabi: f64) -> BlochState {
    BlochState {
        u: -gamma * state.u + delta * state.v,
        v: -delta * state.u - gamma * state.v - 0.5 * rabi * state.w,
        w: 2.0 * rabi * state.v - 2.0 * gamma * (state.w + 1.0),
    }
}

/// Bloch states sampled along a run.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct BlochTrajectory {
    pub times: Vec<f64>,
    pub states: Vec<BlochState>,
    pub instantaneous_rabi: Vec<f64>,
}

impl BlochTrajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// State at the first sample at or after `t`.
    pub fn state_near(&self, t: f64) -> BlochState {
        let i = self.times.partition_point(|&x| x < t).min(self.len() - 1);
        self.states[i]
    }

    /// CSV with columns `t,u,v,w,Omega`.
    pub fn write_csv<W: std::io::Write>(&self, out: W) -> Result<()> {
        let mut wtr = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
        wtr.write_record(["t", "u", "v", "w", "Omega"])?;
        for ((t, s), om) in self.times.iter().zip(&self.states).zip(&self.instantaneous_rabi) {
            wtr.write_record([
                t.to_string(),
                s.u.to_string(),
                s.v.to_string(),
                s.w.to_string(),
                om.to_string(),
            ])?;
        }
        wtr.flush()?;
        Ok(())
    }
}

/// Solution of the Bloch equations under a prescribed Rabi drive.
#[derive(Clone, Debug)]
pub struct BlochSolution {
    pub trajectory: BlochTrajectory,
    pub dense: OdeSolution,
}

impl BlochSolution {
    pub fn state_at(&self, t: f64) -> BlochState {
        BlochState::from_slice(&self.dense.interpolate(t))
    }
}

/// Integrate the Bloch equations for a drive `rabi(t)` at fixed detuning.
#[allow(clippy::too_many_arguments)]
pub fn integrate_bloch<F>(
    rabi: F,
    delta: f64,
    gamma: f64,
    initial: BlochState,
    t_start: f64,
    t_end: f64,
    stops: &[f64],
    rtol: f64,
    atol: f64,
) -> Result<BlochSolution>
where
    F: Fn(f64) -> f64,
{
    let mut opts = OdeOptions::new(rtol, vec![atol; 3]);
    // resolve the fastest free oscillation
    opts.max_step = (t_end - t_start).min(0.5 / (delta.abs() + gamma));
    let dense = integrate(
        |t, y, dy| {
            let d = obe_rhs(&BlochState::from_slice(y), delta, gamma, rabi(t));
            dy.copy_from_slice(&d.to_array());
        },
        t_start,
        &initial.to_array(),
        t_end,
        stops,
        &opts,
    )?;
    let trajectory = BlochTrajectory {
        instantaneous_rabi: dense.times.iter().map(|&t| rabi(t)).collect(),
        states: dense.states.iter().map(|y| BlochState::from_slice(y)).collect(),
        times: dense.times.clone(),
    };
    Ok(BlochSolution { trajectory, dense })
}

/// Full optical Bloch integration for an atom held at its initial position,
/// from vacuum before the pulse to vacuum after it.
pub fn integrate_obe(config: &SimConfig) -> Result<BlochSolution> {
    if config.fidelity == Fidelity::Adiabatic {
        return Err(SimError::WrongFidelity("adiabatic"));
    }
    let timeline = Timeline::new(config);
    let field = &config.field;
    let z0 = config.initial_position;
    let dipole = config.atom.dipole;
    integrate_bloch(
        |t| rabi_frequency(dipole, field.envelope_at(t - z0 / crate::constants::C).0),
        config.detuning(),
        config.atom.gamma,
        BlochState::GROUND,
        timeline.window_start,
        timeline.window_end,
        &timeline.stops(),
        config.tolerances.rtol,
        config.tolerances.atol,
    )
}

/// Bloch states slaved to the instantaneous Rabi frequency at `times`.
pub fn adiabatic_states_at(config: &SimConfig, times: &[f64]) -> BlochTrajectory {
    let z0 = config.initial_position;
    let delta = config.detuning();
    let gamma = config.atom.gamma;
    let rabi: Vec<f64> = times
        .iter()
        .map(|&t| {
            rabi_frequency(
                config.atom.dipole,
                config.field.envelope_at(t - z0 / crate::constants::C).0,
            )
        })
        .collect();
    BlochTrajectory {
        times: times.to_vec(),
        states: rabi.iter().map(|&om| steady_state(delta, gamma, om)).collect(),
        instantaneous_rabi: rabi,
    }
}

/// Adiabatic states on a uniform grid of 4001 samples spanning the run window.
pub fn adiabatic_states(config: &SimConfig) -> BlochTrajectory {
    let tl = Timeline::new(config);
    let n = 4000;
    let times: Vec<f64> = (0..=n)
        .map(|i| tl.window_start + (tl.window_end - tl.window_start) * i as f64 / n as f64)
        .collect();
    adiabatic_states_at(config, &times)
}
