//! Configuration documents.
//!
//! A config is a TOML document with `[atom]`, `[field]`, `[field.envelope]`,
//! optional `[scaled]`, `[simulation]` and `[output]` tables. Every physical
//! value is SI. The `[scaled]` table may replace some of them with
//! dimensionless inputs (δ/γ, |Ω₀|/γ, γτ, ...) which are converted to SI at
//! parse time; giving a quantity both ways is an error. See `docs/config.md`
//! at the repository root for the full schema.

use std::fmt;

use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

use crate::bloch::steady_state_uv;
use crate::constants::EPSILON_0;
use crate::error::ConfigError;
use crate::types::{amplitude_for_rabi, rabi_frequency, AtomParams, Envelope, EnvelopeShape, PulseField};

/// Which model of the atomic response and force is integrated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Fidelity {
    /// Bloch vector slaved to the instantaneous steady state.
    Adiabatic,
    /// Time-dependent optical Bloch equations.
    FullObe,
    /// Time-dependent Bloch equations plus the carrier-resolved Lorentz force.
    OscillatoryOracle,
}

impl Fidelity {
    pub fn as_str(self) -> &'static str {
        match self {
            Fidelity::Adiabatic => "adiabatic",
            Fidelity::FullObe => "full-obe",
            Fidelity::OscillatoryOracle => "oscillatory-oracle",
        }
    }
}

impl fmt::Display for Fidelity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Fidelity {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "adiabatic" => Ok(Fidelity::Adiabatic),
            "full-obe" => Ok(Fidelity::FullObe),
            "oscillatory-oracle" => Ok(Fidelity::OscillatoryOracle),
            other => Err(format!("unknown fidelity `{other}`")),
        }
    }
}

/// Cycle-averaged force decomposition used for the atom's equation of motion.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ForceForm {
    /// d·∂ᵢE + ∂ₜ(d×B)ᵢ
    Gordon,
    /// (d·∇)E + ḋ×B
    Barnett,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub rtol: f64,
    pub atol: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            rtol: 1e-10,
            atol: 1e-12,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutputSinks {
    pub csv: bool,
    pub json: bool,
}

impl Default for OutputSinks {
    fn default() -> Self {
        OutputSinks {
            csv: true,
            json: true,
        }
    }
}

/// A fully validated simulation setup. All values SI.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub atom: AtomParams,
    pub field: PulseField,
    /// Amplitude FWHM of the pulse as seen by the atom, s.
    pub pulse_duration_tau: f64,
    pub tolerances: Tolerances,
    pub fidelity: Fidelity,
    pub force_form: ForceForm,
    /// Drop the ∂ₜ(d×B) term from the force on the atom.
    pub neglect_dxb: bool,
    pub initial_position: f64,
    pub initial_velocity: f64,
    pub output: OutputSinks,
}

/// Lower bound on ω/γ for carrier-resolved work.
pub const MIN_CARRIER_RATIO: f64 = 1e3;
/// Upper bound on carrier cycles integrated in oscillatory-oracle mode.
pub const MAX_RESOLVED_CYCLES: f64 = 2e6;
/// γτ_r below which the adiabatic approximation is flagged.
pub const ADIABATIC_RISE_BOUND: f64 = 10.0;
/// Ω₀²/(δ²+γ²) at or above which linear response is flagged.
pub const LINEAR_RESPONSE_BOUND: f64 = 0.1;
/// |χ′| at or above which the 1/n ≈ 1 − χ′/2 chain is flagged.
pub const SUSCEPTIBILITY_BOUND: f64 = 0.1;

/// Non-fatal regime diagnostics.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum RegimeWarning {
    NonAdiabaticRamp { gamma_rise: f64 },
    ShortPulse { gamma_tau: f64 },
    Saturation { saturation: f64 },
    LargeSusceptibility { chi_prime: f64 },
    DefaultModeVolume { volume: f64 },
    SlowCarrier { omega_over_gamma: f64 },
    FastAtom { speed_over_c: f64 },
}

impl fmt::Display for RegimeWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RegimeWarning::NonAdiabaticRamp { gamma_rise } => write!(
                f,
                "adiabatic regime: shortest edge has gamma*tau_r = {gamma_rise:.3} < {ADIABATIC_RISE_BOUND} (need gamma*tau_r >> 1)"
            ),
            RegimeWarning::ShortPulse { gamma_tau } => write!(
                f,
                "pulse duration gamma*tau = {gamma_tau:.3} < {ADIABATIC_RISE_BOUND} (need gamma*tau >> 1)"
            ),
            RegimeWarning::Saturation { saturation } => write!(
                f,
                "linear response: Omega0^2/(delta^2+gamma^2) = {saturation:.3e} >= {LINEAR_RESPONSE_BOUND} (need Omega^2 << delta^2 + gamma^2)"
            ),
            RegimeWarning::LargeSusceptibility { chi_prime } => write!(
                f,
                "susceptibility |chi'| = {:.3e} >= {SUSCEPTIBILITY_BOUND}; 1/n ~ 1 - chi'/2 no longer holds",
                chi_prime.abs()
            ),
            RegimeWarning::DefaultModeVolume { volume } => write!(
                f,
                "mode volume defaulted to pulse length x 1 m^2 = {volume:.3e} m^3"
            ),
            RegimeWarning::FastAtom { speed_over_c } => write!(
                f,
                "atom speed reached {speed_over_c:.3e} c; the v << c treatment is no longer accurate"
            ),
            RegimeWarning::SlowCarrier { omega_over_gamma } => write!(
                f,
                "omega/gamma = {omega_over_gamma:.3e} < {MIN_CARRIER_RATIO:e}; carrier and envelope scales are not separated"
            ),
        }
    }
}

impl SimConfig {
    /// δ = ω − ω_at.
    pub fn detuning(&self) -> f64 {
        self.field.omega - self.atom.transition_frequency
    }

    /// Rabi frequency at the pulse peak.
    pub fn peak_rabi(&self) -> f64 {
        rabi_frequency(self.atom.dipole, self.field.peak_amplitude)
    }

    /// Ω₀²/(δ² + γ²).
    pub fn saturation(&self) -> f64 {
        let d = self.detuning();
        let g = self.atom.gamma;
        self.peak_rabi().powi(2) / (d * d + g * g)
    }

    /// χ′ = 2Du/(ε₀𝓔₀V) with u the steady state at the pulse peak.
    pub fn chi_prime(&self) -> f64 {
        if self.field.peak_amplitude == 0.0 {
            return 0.0;
        }
        let (u, _) = steady_state_uv(self.detuning(), self.atom.gamma, self.peak_rabi());
        2.0 * self.atom.dipole * u
            / (EPSILON_0 * self.field.peak_amplitude * self.field.mode_volume())
    }

    /// Regime diagnostics for this setup.
    pub fn warnings(&self) -> Vec<RegimeWarning> {
        let mut out = Vec::new();
        let env = self.field.effective_envelope();
        let gamma = self.atom.gamma;
        let gamma_rise = gamma * env.rise_time.min(env.fall_time);
        if gamma_rise < ADIABATIC_RISE_BOUND {
            out.push(RegimeWarning::NonAdiabaticRamp { gamma_rise });
        }
        let gamma_tau = gamma * self.pulse_duration_tau;
        if gamma_tau < ADIABATIC_RISE_BOUND {
            out.push(RegimeWarning::ShortPulse { gamma_tau });
        }
        let saturation = self.saturation();
        if saturation >= LINEAR_RESPONSE_BOUND {
            out.push(RegimeWarning::Saturation { saturation });
        }
        let chi_prime = self.chi_prime();
        if chi_prime.abs() >= SUSCEPTIBILITY_BOUND {
            out.push(RegimeWarning::LargeSusceptibility { chi_prime });
        }
        if self.field.mode_volume_is_default() {
            out.push(RegimeWarning::DefaultModeVolume {
                volume: self.field.mode_volume(),
            });
        }
        let omega_over_gamma = self.field.omega / gamma;
        if omega_over_gamma < MIN_CARRIER_RATIO {
            out.push(RegimeWarning::SlowCarrier { omega_over_gamma });
        }
        out
    }

    /// Canonical SI document for this config.
    pub fn to_document(&self) -> Document {
        let env = &self.field.envelope;
        Document {
            atom: AtomDoc {
                transition_frequency: Some(self.atom.transition_frequency),
                gamma: self.atom.gamma,
                dipole: self.atom.dipole,
                mass: self.atom.mass,
                magnetic_dipole: Some(vec3_to_array(&self.atom.magnetic_dipole)),
            },
            field: FieldDoc {
                carrier_frequency: Some(self.field.omega),
                polarization: Some(vec3_to_array(&self.field.polarization)),
                peak_amplitude: Some(self.field.peak_amplitude),
                mode_volume: self.field.mode_volume,
                group_velocity_factor: Some(self.field.group_velocity_factor),
                envelope: EnvelopeDoc {
                    shape: Some(env.shape),
                    rise_time: Some(env.rise_time),
                    plateau: Some(env.plateau),
                    fall_time: Some(env.fall_time),
                },
            },
            scaled: None,
            simulation: SimulationDoc {
                fidelity: Some(self.fidelity),
                force_form: Some(self.force_form),
                neglect_dxb: Some(self.neglect_dxb),
                rtol: Some(self.tolerances.rtol),
                atol: Some(self.tolerances.atol),
                initial_position: Some(self.initial_position),
                initial_velocity: Some(self.initial_velocity),
            },
            output: OutputDoc {
                csv: Some(self.output.csv),
                json: Some(self.output.json),
            },
        }
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(&self.to_document()).expect("config document always serialises")
    }
}

fn vec3_to_array(v: &Vector3<f64>) -> [f64; 3] {
    [v.x, v.y, v.z]
}

/// On-disk form of a config. Fields left `None` take defaults or come from `[scaled]`.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Document {
    pub atom: AtomDoc,
    pub field: FieldDoc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scaled: Option<ScaledDoc>,
    #[serde(default)]
    pub simulation: SimulationDoc,
    #[serde(default)]
    pub output: OutputDoc,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AtomDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub transition_frequency: Option<f64>,
    pub gamma: f64,
    pub dipole: f64,
    pub mass: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub magnetic_dipole: Option<[f64; 3]>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub carrier_frequency: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub polarization: Option<[f64; 3]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub peak_amplitude: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode_volume: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group_velocity_factor: Option<f64>,
    #[serde(default)]
    pub envelope: EnvelopeDoc,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnvelopeDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shape: Option<EnvelopeShape>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rise_time: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub plateau: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fall_time: Option<f64>,
}

/// Dimensionless inputs, all referenced to `atom.gamma`.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScaledDoc {
    /// ω/γ, replaces `field.carrier_frequency`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega_over_gamma: Option<f64>,
    /// δ/γ, replaces `atom.transition_frequency` (ω_at = ω − δ).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta_over_gamma: Option<f64>,
    /// |Ω₀|/γ, replaces `field.peak_amplitude`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rabi_over_gamma: Option<f64>,
    /// γτ_r, replaces `field.envelope.rise_time`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma_rise: Option<f64>,
    /// γτ_f, replaces `field.envelope.fall_time`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma_fall: Option<f64>,
    /// γ × plateau, replaces `field.envelope.plateau`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma_plateau: Option<f64>,
    /// γτ with τ the free-space amplitude FWHM; sets the plateau.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma_tau: Option<f64>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulationDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fidelity: Option<Fidelity>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub force_form: Option<ForceForm>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub neglect_dxb: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rtol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub atol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initial_position: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initial_velocity: Option<f64>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub csv: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub json: Option<bool>,
}

/// Parse and validate a TOML config document.
pub fn parse_config(text: &str) -> Result<SimConfig, ConfigError> {
    let doc: Document = toml::from_str(text).map_err(|e| ConfigError::Malformed(e.to_string()))?;
    resolve(doc)
}

/// Validate an already-parsed TOML tree (used when applying overrides).
pub fn parse_config_value(value: toml::Value) -> Result<SimConfig, ConfigError> {
    let doc: Document = value
        .try_into()
        .map_err(|e: toml::de::Error| ConfigError::Malformed(e.to_string()))?;
    resolve(doc)
}

fn finite(path: &str, x: f64) -> Result<f64, ConfigError> {
    if x.is_finite() {
        Ok(x)
    } else {
        Err(ConfigError::invalid(path, "must be finite"))
    }
}

fn positive(path: &str, x: f64) -> Result<f64, ConfigError> {
    finite(path, x)?;
    if x > 0.0 {
        Ok(x)
    } else {
        Err(ConfigError::invalid(path, format!("must be > 0, got {x}")))
    }
}

/// Exactly one of an SI value and its scaled counterpart.
fn either(
    si_path: &str,
    si: Option<f64>,
    scaled_path: &str,
    scaled: Option<f64>,
    convert: impl FnOnce(f64) -> f64,
) -> Result<Option<f64>, ConfigError> {
    match (si, scaled) {
        (Some(_), Some(_)) => Err(ConfigError::invalid(
            si_path,
            format!("given both here and as `{scaled_path}`"),
        )),
        (Some(x), None) => Ok(Some(finite(si_path, x)?)),
        (None, Some(x)) => Ok(Some(convert(finite(scaled_path, x)?))),
        (None, None) => Ok(None),
    }
}

fn required(path: &str, x: Option<f64>) -> Result<f64, ConfigError> {
    x.ok_or_else(|| ConfigError::invalid(path, "missing"))
}

fn resolve(doc: Document) -> Result<SimConfig, ConfigError> {
    let scaled = doc.scaled.clone().unwrap_or_default();

    let gamma = positive("atom.gamma", doc.atom.gamma)?;
    let dipole = finite("atom.dipole", doc.atom.dipole)?;
    let mass = positive("atom.mass", doc.atom.mass)?;

    let omega = either(
        "field.carrier_frequency",
        doc.field.carrier_frequency,
        "scaled.omega_over_gamma",
        scaled.omega_over_gamma,
        |x| x * gamma,
    )?;
    let omega = positive("field.carrier_frequency", required("field.carrier_frequency", omega)?)?;

    let omega_at = either(
        "atom.transition_frequency",
        doc.atom.transition_frequency,
        "scaled.delta_over_gamma",
        scaled.delta_over_gamma,
        |x| omega - x * gamma,
    )?;
    let omega_at = positive(
        "atom.transition_frequency",
        required("atom.transition_frequency", omega_at)?,
    )?;

    if let Some(r) = scaled.rabi_over_gamma {
        if r < 0.0 {
            return Err(ConfigError::invalid(
                "scaled.rabi_over_gamma",
                "is a magnitude and must be >= 0",
            ));
        }
        if r > 0.0 && dipole == 0.0 {
            return Err(ConfigError::invalid(
                "scaled.rabi_over_gamma",
                "cannot be converted to a field amplitude when atom.dipole = 0",
            ));
        }
    }
    let peak = either(
        "field.peak_amplitude",
        doc.field.peak_amplitude,
        "scaled.rabi_over_gamma",
        scaled.rabi_over_gamma,
        |x| {
            if x == 0.0 {
                0.0
            } else {
                amplitude_for_rabi(dipole, x * gamma)
            }
        },
    )?;
    let peak = required("field.peak_amplitude", peak)?;
    if peak < 0.0 {
        return Err(ConfigError::invalid(
            "field.peak_amplitude",
            format!("must be >= 0, got {peak}"),
        ));
    }

    let env_doc = &doc.field.envelope;
    let shape = env_doc.shape.unwrap_or(EnvelopeShape::RaisedCosine);
    let rise = either(
        "field.envelope.rise_time",
        env_doc.rise_time,
        "scaled.gamma_rise",
        scaled.gamma_rise,
        |x| x / gamma,
    )?;
    let rise = positive("field.envelope.rise_time", required("field.envelope.rise_time", rise)?)?;
    let fall = either(
        "field.envelope.fall_time",
        env_doc.fall_time,
        "scaled.gamma_fall",
        scaled.gamma_fall,
        |x| x / gamma,
    )?
    .unwrap_or(rise);
    let fall = positive("field.envelope.fall_time", fall)?;

    let plateau_from_tau = match scaled.gamma_tau {
        Some(gt) => {
            if scaled.gamma_plateau.is_some() || env_doc.plateau.is_some() {
                return Err(ConfigError::invalid(
                    "scaled.gamma_tau",
                    "given together with a plateau length",
                ));
            }
            Some(finite("scaled.gamma_tau", gt)? / gamma - 0.5 * (rise + fall))
        }
        None => None,
    };
    let plateau = match plateau_from_tau {
        Some(p) => Some(p),
        None => either(
            "field.envelope.plateau",
            env_doc.plateau,
            "scaled.gamma_plateau",
            scaled.gamma_plateau,
            |x| x / gamma,
        )?,
    };
    let plateau = required("field.envelope.plateau", plateau)?;
    if plateau < 0.0 {
        return Err(ConfigError::invalid(
            "field.envelope.plateau",
            format!("must be >= 0, got {plateau} (pulse shorter than its edges)"),
        ));
    }

    let polarization = doc.field.polarization.unwrap_or([1.0, 0.0, 0.0]);
    let polarization = Vector3::new(polarization[0], polarization[1], polarization[2]);
    if !polarization.iter().all(|x| x.is_finite()) {
        return Err(ConfigError::invalid("field.polarization", "must be finite"));
    }
    if (polarization.norm() - 1.0).abs() > 1e-12 {
        return Err(ConfigError::invalid(
            "field.polarization",
            format!("must be a unit vector, |e| = {}", polarization.norm()),
        ));
    }
    if polarization.z.abs() > 1e-12 {
        return Err(ConfigError::invalid(
            "field.polarization",
            "must be transverse to the propagation axis z",
        ));
    }

    let mode_volume = match doc.field.mode_volume {
        Some(v) => Some(positive("field.mode_volume", v)?),
        None => None,
    };
    let g = doc.field.group_velocity_factor.unwrap_or(1.0);
    finite("field.group_velocity_factor", g)?;
    if g < 1.0 {
        return Err(ConfigError::invalid(
            "field.group_velocity_factor",
            format!("c/v_g must be >= 1, got {g}"),
        ));
    }

    let magnetic = doc.atom.magnetic_dipole.unwrap_or([0.0; 3]);
    if !magnetic.iter().all(|x| x.is_finite()) {
        return Err(ConfigError::invalid("atom.magnetic_dipole", "must be finite"));
    }

    let sim = &doc.simulation;
    let tolerances = Tolerances {
        rtol: positive("simulation.rtol", sim.rtol.unwrap_or(Tolerances::default().rtol))?,
        atol: positive("simulation.atol", sim.atol.unwrap_or(Tolerances::default().atol))?,
    };
    let fidelity = sim.fidelity.unwrap_or(Fidelity::FullObe);
    let initial_position = finite("simulation.initial_position", sim.initial_position.unwrap_or(0.0))?;
    let initial_velocity = finite("simulation.initial_velocity", sim.initial_velocity.unwrap_or(0.0))?;
    if initial_velocity.abs() >= crate::constants::C {
        return Err(ConfigError::invalid(
            "simulation.initial_velocity",
            "must be below c",
        ));
    }

    let atom = AtomParams {
        transition_frequency: omega_at,
        gamma,
        dipole,
        mass,
        magnetic_dipole: Vector3::new(magnetic[0], magnetic[1], magnetic[2]),
    };
    let field = PulseField {
        omega,
        polarization,
        envelope: Envelope {
            shape,
            rise_time: rise,
            plateau,
            fall_time: fall,
        },
        peak_amplitude: peak,
        mode_volume,
        group_velocity_factor: g,
    };

    if fidelity == Fidelity::OscillatoryOracle {
        if omega / gamma < MIN_CARRIER_RATIO {
            return Err(ConfigError::invalid(
                "field.carrier_frequency",
                format!("oscillatory-oracle needs omega/gamma >= {MIN_CARRIER_RATIO:e}"),
            ));
        }
        let cycles = omega * field.effective_envelope().total_duration() / (2.0 * std::f64::consts::PI);
        if cycles > MAX_RESOLVED_CYCLES {
            return Err(ConfigError::invalid(
                "simulation.fidelity",
                format!(
                    "oscillatory-oracle would resolve {cycles:.3e} carrier cycles (limit {MAX_RESOLVED_CYCLES:e})"
                ),
            ));
        }
    }

    let pulse_duration_tau = field.pulse_duration();
    positive("field.envelope", pulse_duration_tau)?;

    Ok(SimConfig {
        atom,
        field,
        pulse_duration_tau,
        tolerances,
        fidelity,
        force_form: sim.force_form.unwrap_or(ForceForm::Barnett),
        neglect_dxb: sim.neglect_dxb.unwrap_or(false),
        initial_position,
        initial_velocity,
        output: OutputSinks {
            csv: doc.output.csv.unwrap_or(true),
            json: doc.output.json.unwrap_or(true),
        },
    })
}

/// Built-in setup: Rb-87 D2, δ = −5γ, |Ω₀| = 0.1γ, γτ_r = 100, plateau 200/γ.
pub const DEFAULT_CONFIG: &str = r#"# Rubidium-87 D2 line driven 5 linewidths to the red.
[atom]
gamma = 1.9058335e7         # rad/s, half the upper-state decay rate
dipole = 3.584e-29          # C m
mass = 1.443160648e-25      # kg

[field]
carrier_frequency = 2.4141720e15   # rad/s
polarization = [1.0, 0.0, 0.0]

[field.envelope]
shape = "raised-cosine"

[scaled]
delta_over_gamma = -5.0
rabi_over_gamma = 0.1
gamma_rise = 100.0
gamma_plateau = 200.0

[simulation]
fidelity = "full-obe"
force_form = "barnett"
"#;

pub fn default_config() -> SimConfig {
    parse_config(DEFAULT_CONFIG).expect("built-in config is valid")
}
