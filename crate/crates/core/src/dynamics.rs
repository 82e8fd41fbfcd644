//! Centre-of-mass motion of the atom through the pulse.
//!
//! The Bloch vector and the motion are one state vector on a shared adaptive
//! step:
//!
//! ```text
//! [u, v, w, z, p_disp, p_scatt, x_disp, x_scatt, j_grad]
//! ```
//!
//! `p_disp` and `p_scatt` are the kinetic momentum received through the
//! dispersive and absorptive parts of the force, `x_disp`, `x_scatt` the
//! displacement each produces, and `j_grad = ∫ D u ∂𝓔/∂z dt` the field-side
//! gradient impulse used by the ledger. In adiabatic mode the Bloch rows are
//! not integrated; (u, v, w) follow the instantaneous Rabi frequency.
//!
//! The detuning is fixed: Doppler shifts are O(v/c)·δ and dropped.

use serde::{Deserialize, Serialize};

use crate::bloch::{obe_rhs, steady_state, steady_state_rate, BlochTrajectory};
use crate::config::{Fidelity, ForceForm, RegimeWarning, SimConfig, ADIABATIC_RISE_BOUND};
use crate::constants::{C, EPSILON_0, HBAR};
use crate::error::{Result, SimError};
use crate::fields::{sample_field, Timeline, SLOW_ATOM_BOUND};
use crate::forces::{
    barnett_avg_force, dipole_from_bloch, gordon_avg_force, oscillatory_force, ForceSample, ForceTag,
};
use crate::ledger::MomentumLedger;
use crate::ode::{integrate, OdeOptions, OdeSolution};
use crate::quadrature::GaussLegendre;
use crate::types::{rabi_frequency, BlochState};

const U: usize = 0;
const Z: usize = 3;
const P_DISP: usize = 4;
const P_SCATT: usize = 5;
const X_DISP: usize = 6;
const X_SCATT: usize = 7;
const J_GRAD: usize = 8;
const DIM: usize = 9;

/// Everything derived from the state at one instant.
#[derive(Clone, Copy, Debug)]
struct Evaluation {
    bloch: BlochState,
    rate: BlochState,
    velocity: f64,
    force: ForceSample,
    /// D u ∂𝓔/∂z
    gradient_field: f64,
    /// D u 𝓔 / c
    dxb: f64,
}

/// Immutable per-run model: config plus derived constants.
struct Model<'a> {
    cfg: &'a SimConfig,
    delta: f64,
    k: f64,
    initial_momentum: f64,
}

impl<'a> Model<'a> {
    fn new(cfg: &'a SimConfig) -> Self {
        Model {
            cfg,
            delta: cfg.detuning(),
            k: cfg.field.wavenumber(),
            initial_momentum: cfg.atom.mass * cfg.initial_velocity,
        }
    }

    fn velocity(&self, y: &[f64]) -> f64 {
        (self.initial_momentum + y[P_DISP] + y[P_SCATT]) / self.cfg.atom.mass
    }

    fn evaluate(&self, t: f64, y: &[f64]) -> Evaluation {
        let cfg = self.cfg;
        let dipole = cfg.atom.dipole;
        let gamma = cfg.atom.gamma;
        let z = y[Z];
        let velocity = self.velocity(y);
        let sample = sample_field(&cfg.field, t, z);
        let env = sample.envelope_value;
        let rabi = rabi_frequency(dipole, env);

        let (bloch, rate) = match cfg.fidelity {
            Fidelity::Adiabatic => {
                let rabi_rate = rabi_frequency(dipole, sample.envelope_rate_along(velocity));
                (
                    steady_state(self.delta, gamma, rabi),
                    steady_state_rate(self.delta, gamma, rabi, rabi_rate),
                )
            }
            Fidelity::FullObe | Fidelity::OscillatoryOracle => {
                let b = BlochState::from_slice(&y[U..U + 3]);
                (b, obe_rhs(&b, self.delta, gamma, rabi))
            }
        };

        let force = match cfg.fidelity {
            Fidelity::OscillatoryOracle => {
                let d = dipole_from_bloch(
                    &bloch,
                    &rate,
                    sample.phase,
                    cfg.field.omega - self.k * velocity,
                    dipole,
                    &cfg.field.polarization,
                );
                let scattering_z = -dipole * bloch.v * self.k * env;
                let gradient_z = d.d.dot(&sample.e_dz);
                let total_z = if cfg.neglect_dxb {
                    gradient_z
                } else {
                    oscillatory_force(&d, &sample).total().z
                };
                ForceSample {
                    total_z,
                    gradient_z,
                    scattering_z,
                    dxb_rate_z: total_z - gradient_z - scattering_z,
                    dudt_z: 0.0,
                    form: ForceTag::Oscillatory,
                }
            }
            _ if cfg.neglect_dxb => {
                gordon_avg_force(&bloch, &rate, &sample, velocity, dipole, self.k).without_dxb()
            }
            _ => match cfg.force_form {
                ForceForm::Gordon => gordon_avg_force(&bloch, &rate, &sample, velocity, dipole, self.k),
                ForceForm::Barnett => barnett_avg_force(&bloch, &rate, &sample, dipole, self.k),
            },
        };

        let dxb = if cfg.neglect_dxb { 0.0 } else { dipole * bloch.u * env / C };
        Evaluation {
            bloch,
            rate,
            velocity,
            force,
            gradient_field: dipole * bloch.u * sample.envelope_space_gradient,
            dxb,
        }
    }

    fn rhs(&self, t: f64, y: &[f64], dy: &mut [f64]) {
        let e = self.evaluate(t, y);
        match self.cfg.fidelity {
            Fidelity::Adiabatic => dy[U..U + 3].fill(0.0),
            _ => dy[U..U + 3].copy_from_slice(&e.rate.to_array()),
        }
        let m = self.cfg.atom.mass;
        dy[Z] = e.velocity;
        dy[P_DISP] = e.force.dispersive_z();
        dy[P_SCATT] = e.force.scattering_z;
        dy[X_DISP] = y[P_DISP] / m;
        dy[X_SCATT] = y[P_SCATT] / m;
        dy[J_GRAD] = e.gradient_field;
    }

    fn ledger(&self, run_id: u64, t: f64, y: &[f64], e: &Evaluation, field_reference: f64) -> MomentumLedger {
        MomentumLedger::from_channels(
            run_id,
            t,
            self.initial_momentum,
            y[P_DISP],
            y[P_SCATT],
            y[J_GRAD],
            e.dxb,
            field_reference,
        )
    }

    fn options(&self, t_start: f64, t_end: f64) -> OdeOptions {
        let cfg = self.cfg;
        let tol = &cfg.tolerances;
        let gamma = cfg.atom.gamma;
        let momentum_scale = HBAR * (cfg.peak_rabi().abs() + gamma) / C * 1e-3;
        let mut atol = vec![tol.atol; DIM];
        for i in [P_DISP, P_SCATT, J_GRAD] {
            atol[i] = tol.atol * momentum_scale;
        }
        let mut opts = OdeOptions::new(tol.rtol, atol);
        // positions are quadratures of the momenta
        for i in [Z, X_DISP, X_SCATT] {
            opts.unchecked[i] = true;
        }
        if cfg.fidelity == Fidelity::Adiabatic {
            opts.unchecked[U..U + 3].fill(true);
        }

        let env = cfg.field.effective_envelope();
        let mut max_step = (t_end - t_start).min(env.total_duration() / 8.0);
        let shortest_edge = env.rise_time.min(env.fall_time);
        if shortest_edge > 0.0 {
            max_step = max_step.min(shortest_edge / 8.0);
        }
        match cfg.fidelity {
            Fidelity::Adiabatic => {}
            Fidelity::FullObe => max_step = max_step.min(0.5 / (self.delta.abs() + gamma)),
            Fidelity::OscillatoryOracle => {
                let period = 2.0 * std::f64::consts::PI / cfg.field.omega;
                max_step = max_step.min(0.5 / (self.delta.abs() + gamma)).min(period / 12.0);
            }
        }
        opts.max_step = max_step;
        opts
    }
}

/// Where and how the atom starts.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MotionStart {
    pub bloch: BlochState,
    pub z: f64,
    pub velocity: f64,
}

/// One integrated run.
#[derive(Clone, Debug)]
pub struct TrajectoryRecord {
    pub run_id: u64,
    pub config: SimConfig,
    pub timeline: Timeline,
    pub times: Vec<f64>,
    pub z_positions: Vec<f64>,
    pub velocities: Vec<f64>,
    pub bloch: Vec<BlochState>,
    pub forces: Vec<ForceSample>,
    pub ledger: Vec<MomentumLedger>,
    /// Displacement produced by the dispersive momentum.
    pub x_dispersive: Vec<f64>,
    /// Displacement produced by the absorbed momentum.
    pub x_scattered: Vec<f64>,
    pub max_speed_over_c: f64,
    pub warnings: Vec<RegimeWarning>,
    solution: OdeSolution,
}

pub type SimRecord = TrajectoryRecord;

/// Stable identifier of a configuration (FNV-1a over its canonical TOML).
pub fn run_id(config: &SimConfig) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in config.to_toml_string().bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

/// N ħk for the configured pulse.
fn field_reference(config: &SimConfig) -> f64 {
    let f = &config.field;
    let n = 0.5 * EPSILON_0 * f.peak_amplitude.powi(2) * f.mode_volume() / (HBAR * f.omega);
    n * f.photon_momentum()
}

pub struct Simulation {
    config: SimConfig,
    timeline: Timeline,
}

impl Simulation {
    pub fn new(config: SimConfig) -> Result<Self> {
        if config.initial_velocity.abs() >= C {
            return Err(SimError::Superluminal {
                speed: config.initial_velocity.abs(),
            });
        }
        let timeline = Timeline::new(&config);
        Ok(Simulation { config, timeline })
    }

    pub fn timeline(&self) -> &Timeline {
        &self.timeline
    }

    /// Full passage, from vacuum before the pulse to vacuum after it.
    pub fn run(&self) -> Result<TrajectoryRecord> {
        let start = MotionStart {
            bloch: BlochState::GROUND,
            z: self.config.initial_position,
            velocity: self.config.initial_velocity,
        };
        self.run_span(self.timeline.window_start, self.timeline.window_end, start)
    }

    /// Integrate between arbitrary times from a given start.
    pub fn run_span(&self, t_start: f64, t_end: f64, start: MotionStart) -> Result<TrajectoryRecord> {
        let mut cfg = self.config.clone();
        cfg.initial_velocity = start.velocity;
        let model = Model::new(&cfg);
        let id = run_id(&self.config);

        let mut y0 = [0.0; DIM];
        y0[U..U + 3].copy_from_slice(&start.bloch.to_array());
        y0[Z] = start.z;

        let stops: Vec<f64> = self.timeline.stops();
        let opts = model.options(t_start, t_end);
        let solution = integrate(|t, y, dy| model.rhs(t, y, dy), t_start, &y0, t_end, &stops, &opts)?;

        let reference = field_reference(&cfg);
        let n = solution.times.len();
        let mut record = TrajectoryRecord {
            run_id: id,
            config: cfg.clone(),
            timeline: self.timeline,
            times: solution.times.clone(),
            z_positions: Vec::with_capacity(n),
            velocities: Vec::with_capacity(n),
            bloch: Vec::with_capacity(n),
            forces: Vec::with_capacity(n),
            ledger: Vec::with_capacity(n),
            x_dispersive: Vec::with_capacity(n),
            x_scattered: Vec::with_capacity(n),
            max_speed_over_c: 0.0,
            warnings: cfg.warnings(),
            solution: solution.clone(),
        };
        for (&t, y) in solution.times.iter().zip(&solution.states) {
            let e = model.evaluate(t, y);
            record.z_positions.push(y[Z]);
            record.velocities.push(e.velocity);
            record.bloch.push(e.bloch);
            record.forces.push(e.force);
            record.ledger.push(model.ledger(id, t, y, &e, reference));
            record.x_dispersive.push(y[X_DISP]);
            record.x_scattered.push(y[X_SCATT]);
            record.max_speed_over_c = record.max_speed_over_c.max(e.velocity.abs() / C);
        }
        if record.max_speed_over_c >= 1.0 {
            return Err(SimError::Superluminal {
                speed: record.max_speed_over_c * C,
            });
        }
        if record.max_speed_over_c * C > SLOW_ATOM_BOUND {
            record.warnings.push(RegimeWarning::FastAtom {
                speed_over_c: record.max_speed_over_c,
            });
        }
        Ok(record)
    }
}

/// Full pulse passage for `config`.
pub fn integrate_motion(config: &SimConfig) -> Result<TrajectoryRecord> {
    Simulation::new(config.clone())?.run()
}

impl TrajectoryRecord {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Index of the recorded step at `t`; landmark times are hit exactly.
    pub fn index_at(&self, t: f64) -> Result<usize> {
        let (first, last) = (self.times[0], *self.times.last().unwrap());
        let slack = 1e-9 * (last - first);
        if t < first - slack || t > last + slack {
            return Err(SimError::IncompletePassage);
        }
        Ok(self.solution.index_at_or_after(t - slack))
    }

    /// Interpolated state vector at `t`.
    fn state_at(&self, t: f64) -> Vec<f64> {
        self.solution.interpolate(t)
    }

    /// Ledger at an arbitrary time. Carrier-resolved records are averaged
    /// over a triangular window two carrier periods wide.
    pub fn ledger_at(&self, t: f64) -> Result<MomentumLedger> {
        self.index_at(t)?;
        let model = Model::new(&self.config);
        let reference = field_reference(&self.config);
        let at = |s: f64| {
            let y = self.state_at(s);
            let e = model.evaluate(s, &y);
            model.ledger(self.run_id, s, &y, &e, reference)
        };
        if self.config.fidelity != Fidelity::OscillatoryOracle {
            return Ok(at(t));
        }
        let period = 2.0 * std::f64::consts::PI / self.config.field.omega;
        let gl = GaussLegendre::new(8);
        let avg = |f: &dyn Fn(&MomentumLedger) -> f64| {
            let g = |x: f64| f(&at(t + x)) * (1.0 - x.abs() / period);
            (gl.integrate_panels(g, -period, 0.0, 4) + gl.integrate_panels(g, 0.0, period, 4)) / period
        };
        let mut out = at(t);
        out.dispersive_kinetic = avg(&|l| l.dispersive_kinetic);
        out.scattered_momentum = avg(&|l| l.scattered_momentum);
        out.kinetic_atom = avg(&|l| l.kinetic_atom);
        out.dxb = avg(&|l| l.dxb);
        out.field_dispersive = avg(&|l| l.field_dispersive);
        out.canonical_atom = out.kinetic_atom - out.dxb;
        out.field_abraham = out.field_dispersive - out.scattered_momentum;
        out.field_minkowski = out.field_abraham + out.dxb;
        Ok(out)
    }

    /// Bloch state at an arbitrary time.
    pub fn bloch_at(&self, t: f64) -> Result<BlochState> {
        self.index_at(t)?;
        let model = Model::new(&self.config);
        let y = self.state_at(t);
        Ok(model.evaluate(t, &y).bloch)
    }

    /// Bloch states with the Rabi frequency seen along the worldline.
    pub fn bloch_trajectory(&self) -> BlochTrajectory {
        let dipole = self.config.atom.dipole;
        let rabi = self
            .times
            .iter()
            .zip(&self.z_positions)
            .map(|(&t, &z)| rabi_frequency(dipole, self.config.field.envelope_at(t - z / C).0))
            .collect();
        BlochTrajectory {
            times: self.times.clone(),
            states: self.bloch.clone(),
            instantaneous_rabi: rabi,
        }
    }

    /// Kinetic momentum M ż at each step.
    pub fn kinetic_momentum(&self) -> impl Iterator<Item = f64> + '_ {
        self.ledger.iter().map(|l| l.kinetic_atom)
    }

    /// CSV with columns `t,z,v,p_kinetic,p_canonical,F_total,F_scatt,F_disp`.
    pub fn write_csv<W: std::io::Write>(&self, out: W) -> Result<()> {
        let mut wtr = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(out);
        wtr.write_record(["t", "z", "v", "p_kinetic", "p_canonical", "F_total", "F_scatt", "F_disp"])?;
        for i in 0..self.len() {
            let l = &self.ledger[i];
            let f = &self.forces[i];
            wtr.write_record([
                self.times[i].to_string(),
                self.z_positions[i].to_string(),
                self.velocities[i].to_string(),
                l.kinetic_atom.to_string(),
                l.canonical_atom.to_string(),
                f.total_z.to_string(),
                f.scattering_z.to_string(),
                f.dispersive_z().to_string(),
            ])?;
        }
        wtr.flush()?;
        Ok(())
    }

    /// CSV with columns `t,F_total,F_grad,F_scatt,F_dxb_rate,form_tag`.
    pub fn write_forces_csv<W: std::io::Write>(&self, out: W) -> Result<()> {
        let mut wtr = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(out);
        wtr.write_record(["t", "F_total", "F_grad", "F_scatt", "F_dxb_rate", "form_tag"])?;
        for (t, f) in self.times.iter().zip(&self.forces) {
            wtr.write_record([
                t.to_string(),
                f.total_z.to_string(),
                f.gradient_z.to_string(),
                f.scattering_z.to_string(),
                (f.dxb_rate_z + f.dudt_z).to_string(),
                f.form.as_str().to_string(),
            ])?;
        }
        wtr.flush()?;
        Ok(())
    }

    /// Ledger time series as JSON.
    pub fn ledger_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&self.ledger)?)
    }
}

/// Predicted ratio of dispersive to absorptive displacement, (δ/ω)/(γτ).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DisplacementRatio {
    pub ratio: f64,
    /// Set when γτ < 10.
    pub short_pulse: bool,
}

pub fn displacement_ratio(delta: f64, omega: f64, gamma: f64, tau: f64) -> DisplacementRatio {
    let gamma_tau = gamma * tau;
    DisplacementRatio {
        ratio: delta / omega / gamma_tau,
        short_pulse: gamma_tau < ADIABATIC_RISE_BOUND,
    }
}

/// Displacements attributed to each force over one pulse passage.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Displacements {
    /// Dispersive momentum held at mid-plateau / M × τ.
    pub dx_dispersion: f64,
    /// Displacement produced by the absorbed momentum up to the end of the pulse.
    pub dx_absorption: f64,
    /// Integrated displacement from the dispersive momentum history.
    pub dx_dispersion_integrated: f64,
}

impl Displacements {
    pub fn ratio(&self) -> f64 {
        self.dx_dispersion / self.dx_absorption
    }
}

pub fn measure_displacements(record: &TrajectoryRecord) -> Result<Displacements> {
    let tl = &record.timeline;
    let i0 = record.index_at(tl.pulse_start)?;
    let i1 = record.index_at(tl.pulse_end)?;
    let mid = record.ledger_at(tl.mid_plateau)?;
    let m = record.config.atom.mass;
    let p_disp = mid.dispersive_kinetic - record.ledger[i0].dispersive_kinetic;
    Ok(Displacements {
        dx_dispersion: p_disp / m * record.config.pulse_duration_tau,
        dx_absorption: record.x_scattered[i1] - record.x_scattered[i0],
        dx_dispersion_integrated: record.x_dispersive[i1] - record.x_dispersive[i0],
    })
}
