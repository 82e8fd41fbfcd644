//! Plain domain data shared by every module.
//!
//! Everything here is immutable after construction and `Send + Sync`.

use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

use crate::constants::{C, HBAR};

/// The two-level atom.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AtomParams {
    /// Transition angular frequency ω_at, rad/s.
    pub transition_frequency: f64,
    /// Coherence damping rate γ (half the upper-state population decay rate), rad/s.
    pub gamma: f64,
    /// Off-diagonal matrix element D of d·ê, C·m. Signed.
    pub dipole: f64,
    /// Mass M, kg.
    pub mass: f64,
    /// Magnetic dipole moment m, J/T.
    pub magnetic_dipole: Vector3<f64>,
}

impl AtomParams {
    /// Rubidium-87 D2 line, a convenient default.
    pub fn rubidium87_d2() -> Self {
        AtomParams {
            transition_frequency: 2.0 * std::f64::consts::PI * 384.230_484_468_5e12,
            gamma: 0.5 * 2.0 * std::f64::consts::PI * 6.0666e6,
            dipole: 3.584e-29,
            mass: 1.443_160_648e-25,
            magnetic_dipole: Vector3::zeros(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EnvelopeShape {
    /// `(1 - cos πx)/2` ramps; C¹ at the joins.
    RaisedCosine,
    /// Compactified tanh ramps, `(1 + tanh(β(x-½)/(x(1-x))))/2`; C^∞ at the joins.
    Tanh,
}

/// Steepness of the compactified tanh ramp.
const TANH_RAMP_STEEPNESS: f64 = 0.8;

impl EnvelopeShape {
    /// Unit ramp on `x ∈ [0, 1]` and its derivative.
    pub fn ramp(self, x: f64) -> (f64, f64) {
        if x <= 0.0 {
            return (0.0, 0.0);
        }
        if x >= 1.0 {
            return (1.0, 0.0);
        }
        match self {
            EnvelopeShape::RaisedCosine => {
                let arg = std::f64::consts::PI * x;
                (0.5 * (1.0 - arg.cos()), 0.5 * std::f64::consts::PI * arg.sin())
            }
            EnvelopeShape::Tanh => {
                let q = x * (1.0 - x);
                let a = (x - 0.5) / q;
                let da = (x * x - x + 0.5) / (q * q);
                let th = (TANH_RAMP_STEEPNESS * a).tanh();
                let sech2 = 1.0 - th * th;
                (0.5 * (1.0 + th), 0.5 * TANH_RAMP_STEEPNESS * sech2 * da)
            }
        }
    }
}

/// Rise / plateau / fall profile of the pulse, normalised to a unit peak.
///
/// The argument is the retarded time `s = φ/ω = t - z/c`; the pulse front
/// crosses `z = 0` at `t = 0`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Envelope {
    pub shape: EnvelopeShape,
    /// Duration of the leading edge, s.
    pub rise_time: f64,
    /// Duration of the flat top, s.
    pub plateau: f64,
    /// Duration of the trailing edge, s.
    pub fall_time: f64,
}

impl Envelope {
    pub fn symmetric(shape: EnvelopeShape, rise_time: f64, plateau: f64) -> Self {
        Envelope {
            shape,
            rise_time,
            plateau,
            fall_time: rise_time,
        }
    }

    pub fn total_duration(&self) -> f64 {
        self.rise_time + self.plateau + self.fall_time
    }

    /// Half-maximum to half-maximum duration of the amplitude.
    pub fn fwhm(&self) -> f64 {
        self.plateau + 0.5 * (self.rise_time + self.fall_time)
    }

    pub fn is_symmetric(&self) -> bool {
        self.rise_time == self.fall_time
    }

    /// Every duration multiplied by `factor`.
    pub fn stretched(&self, factor: f64) -> Envelope {
        Envelope {
            shape: self.shape,
            rise_time: self.rise_time * factor,
            plateau: self.plateau * factor,
            fall_time: self.fall_time * factor,
        }
    }

    /// Normalised profile and its derivative with respect to `s`.
    pub fn profile(&self, s: f64) -> (f64, f64) {
        let rise_end = self.rise_time;
        let fall_start = rise_end + self.plateau;
        let end = fall_start + self.fall_time;
        if s <= 0.0 || s >= end {
            (0.0, 0.0)
        } else if s < rise_end {
            let (f, df) = self.shape.ramp(s / self.rise_time);
            (f, df / self.rise_time)
        } else if s <= fall_start {
            (1.0, 0.0)
        } else {
            let (f, df) = self.shape.ramp((end - s) / self.fall_time);
            (f, -df / self.fall_time)
        }
    }

    /// Retarded times where the profile changes piece: start, end of rise,
    /// start of fall, end.
    pub fn breakpoints(&self) -> [f64; 4] {
        let rise_end = self.rise_time;
        let fall_start = rise_end + self.plateau;
        [0.0, rise_end, fall_start, fall_start + self.fall_time]
    }
}

/// The driving plane-wave pulse, travelling along +z.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PulseField {
    /// Carrier angular frequency ω, rad/s.
    pub omega: f64,
    /// Unit polarisation ê, transverse to ẑ.
    pub polarization: Vector3<f64>,
    /// Envelope in free-space (unstretched) time units.
    pub envelope: Envelope,
    /// Peak envelope amplitude 𝓔₀, V/m.
    pub peak_amplitude: f64,
    /// Quantisation volume for photon counting, m³. `None` means
    /// (free-space pulse length) × 1 m².
    pub mode_volume: Option<f64>,
    /// c / v_g ≥ 1. Stretches the envelope's transit time at fixed amplitude.
    pub group_velocity_factor: f64,
}

impl PulseField {
    /// k = ω/c.
    pub fn wavenumber(&self) -> f64 {
        self.omega / C
    }

    pub fn wavelength(&self) -> f64 {
        2.0 * std::f64::consts::PI / self.wavenumber()
    }

    /// Free-space photon momentum ħk.
    pub fn photon_momentum(&self) -> f64 {
        HBAR * self.wavenumber()
    }

    /// Envelope as seen by the atom, with slow-light stretching applied.
    pub fn effective_envelope(&self) -> Envelope {
        self.envelope.stretched(self.group_velocity_factor)
    }

    /// Envelope value 𝓔(s) in V/m and d𝓔/ds, at retarded time `s`.
    pub fn envelope_at(&self, s: f64) -> (f64, f64) {
        let (f, df) = self.effective_envelope().profile(s);
        (self.peak_amplitude * f, self.peak_amplitude * df)
    }

    /// Resolved mode volume, m³.
    pub fn mode_volume(&self) -> f64 {
        self.mode_volume
            .unwrap_or_else(|| C * self.envelope.total_duration() * 1.0)
    }

    pub fn mode_volume_is_default(&self) -> bool {
        self.mode_volume.is_none()
    }

    /// Pulse duration τ (amplitude FWHM) as experienced by the atom.
    pub fn pulse_duration(&self) -> f64 {
        self.effective_envelope().fwhm()
    }
}

/// Dipole quadratures and inversion.
///
/// `u`, `v` are the real and imaginary parts of ρ_ge e^{-iφ}, so that
/// ⟨d·ê⟩ = 2D(u cos φ − v sin φ); `w = ρ_ee − ρ_gg`. Physical states satisfy
/// u² + v² ≤ (1 − w²)/4, hence |u|, |v| ≤ ½.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct BlochState {
    pub u: f64,
    pub v: f64,
    pub w: f64,
}

impl BlochState {
    pub const GROUND: BlochState = BlochState {
        u: 0.0,
        v: 0.0,
        w: -1.0,
    };

    pub fn new(u: f64, v: f64, w: f64) -> Self {
        BlochState { u, v, w }
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.u, self.v, self.w]
    }

    pub fn from_slice(y: &[f64]) -> Self {
        BlochState {
            u: y[0],
            v: y[1],
            w: y[2],
        }
    }

    /// Inside the Bloch ball, up to `tol`.
    pub fn is_physical(&self, tol: f64) -> bool {
        self.u * self.u + self.v * self.v <= 0.25 * (1.0 - self.w * self.w) + tol
            && self.w.abs() <= 1.0 + tol
    }
}

/// Detuning and instantaneous Rabi frequency.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DetuningParams {
    /// δ = ω − ω_at, rad/s.
    pub delta: f64,
    /// Ω with ħΩ = −D𝓔, rad/s.
    pub rabi: f64,
}

impl DetuningParams {
    pub fn new(atom: &AtomParams, field: &PulseField, envelope: f64) -> Self {
        DetuningParams {
            delta: field.omega - atom.transition_frequency,
            rabi: rabi_frequency(atom.dipole, envelope),
        }
    }
}

/// Ω = −D𝓔/ħ.
pub fn rabi_frequency(dipole: f64, amplitude: f64) -> f64 {
    -dipole * amplitude / HBAR
}

/// Envelope amplitude giving Rabi frequency of magnitude |Ω| for dipole D.
pub fn amplitude_for_rabi(dipole: f64, rabi_magnitude: f64) -> f64 {
    HBAR * rabi_magnitude.abs() / dipole.abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rabi_zero_dipole() {
        assert_eq!(rabi_frequency(0.0, 1234.5), 0.0);
    }

    #[test]
    fn rabi_sign_follows_definition() {
        assert!(rabi_frequency(1e-29, 10.0) < 0.0);
        assert!(rabi_frequency(-1e-29, 10.0) > 0.0);
        assert!(rabi_frequency(-1e-29, -10.0) < 0.0);
    }

    #[test]
    fn rabi_rubidium_value() {
        // 3.584e-29 * 1e3 = 3.584e-26 ; / 1.054571817e-34
        let expected = -(3.584e-26 / 1.054_571_817e-34);
        let got = rabi_frequency(3.584e-29, 1e3);
        assert!((got - expected).abs() <= f64::EPSILON * expected.abs());
        // exact-rational evaluation: -339853573.00706244
        assert!((got + 339_853_573.007_062_44).abs() < 1e-6);
    }

    #[test]
    fn ramps_are_continuous_at_joins() {
        for shape in [EnvelopeShape::RaisedCosine, EnvelopeShape::Tanh] {
            let (f0, d0) = shape.ramp(1e-12);
            let (f1, d1) = shape.ramp(1.0 - 1e-12);
            assert!(f0 < 1e-9 && (1.0 - f1) < 1e-9, "{shape:?}");
            assert!(d0.abs() < 1e-6 && d1.abs() < 1e-6, "{shape:?}");
            let (fm, _) = shape.ramp(0.5);
            assert!((fm - 0.5).abs() < 1e-15);
        }
    }

    #[test]
    fn ramp_derivative_matches_finite_difference() {
        for shape in [EnvelopeShape::RaisedCosine, EnvelopeShape::Tanh] {
            for i in 1..20 {
                let x = i as f64 / 20.0;
                let h = 1e-6;
                let fd = (shape.ramp(x + h).0 - shape.ramp(x - h).0) / (2.0 * h);
                let (_, d) = shape.ramp(x);
                assert!((fd - d).abs() < 1e-7 * d.abs().max(1.0), "{shape:?} x={x}");
            }
        }
    }

    #[test]
    fn envelope_pieces() {
        let env = Envelope {
            shape: EnvelopeShape::RaisedCosine,
            rise_time: 2.0,
            plateau: 3.0,
            fall_time: 1.0,
        };
        assert_eq!(env.profile(-1.0), (0.0, 0.0));
        assert_eq!(env.profile(4.0), (1.0, 0.0));
        assert_eq!(env.profile(6.5), (0.0, 0.0));
        assert!((env.profile(1.0).0 - 0.5).abs() < 1e-15);
        assert!((env.profile(5.5).0 - 0.5).abs() < 1e-15);
        assert!(env.profile(5.5).1 < 0.0);
        assert_eq!(env.total_duration(), 6.0);
        assert_eq!(env.fwhm(), 4.5);
        assert_eq!(env.stretched(10.0).breakpoints(), [0.0, 20.0, 50.0, 60.0]);
    }

    #[test]
    fn ground_state_is_physical() {
        assert!(BlochState::GROUND.is_physical(0.0));
        assert!(!BlochState::new(0.6, 0.0, 0.0).is_physical(1e-12));
    }
}
