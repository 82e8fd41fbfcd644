mod common;

use nalgebra::Vector3;
use proptest::prelude::*;

use photon_momentum::bloch::{obe_rhs, steady_state, steady_state_rate, steady_state_uv};
use photon_momentum::config::{default_config, parse_config};
use photon_momentum::dynamics::displacement_ratio;
use photon_momentum::forces::scattering_rate;
use photon_momentum::ledger::{
    aharonov_casher_difference, conservation_residual, dxb_impulse, gradient_impulse_closed_form,
    net_dispersive_impulse, MomentumLedger,
};
use photon_momentum::types::{amplitude_for_rabi, rabi_frequency, Envelope, EnvelopeShape};

fn vec3() -> impl Strategy<Value = Vector3<f64>> {
    (-1e3..1e3f64, -1e3..1e3f64, -1e3..1e3f64).prop_map(|(x, y, z)| Vector3::new(x, y, z))
}

proptest! {
    #[test]
    fn steady_state_is_physical_and_stationary(delta in -50.0..50.0f64, gamma in 0.01..10.0f64, rabi in -50.0..50.0f64) {
        let s = steady_state(delta, gamma, rabi);
        prop_assert!(s.is_physical(1e-12));
        prop_assert!(s.u.abs() <= 0.5 && s.v.abs() <= 0.5);
        let d = obe_rhs(&s, delta, gamma, rabi);
        let scale = delta.abs() + gamma + rabi.abs();
        prop_assert!(d.u.abs() < 1e-13 * scale && d.v.abs() < 1e-13 * scale && d.w.abs() < 1e-13 * scale);
    }

    #[test]
    fn in_phase_component_is_odd_in_detuning(delta in -50.0..50.0f64, gamma in 0.01..10.0f64, rabi in -50.0..50.0f64) {
        let (u1, v1) = steady_state_uv(delta, gamma, rabi);
        let (u2, v2) = steady_state_uv(-delta, gamma, rabi);
        prop_assert_eq!(u1, -u2);
        prop_assert_eq!(v1, v2);
    }

    #[test]
    fn adiabatic_rate_is_chain_rule(delta in -5.0..5.0f64, gamma in 0.1..3.0f64, rabi in -5.0..5.0f64, rate in -3.0..3.0f64) {
        let r1 = steady_state_rate(delta, gamma, rabi, rate);
        let r2 = steady_state_rate(delta, gamma, rabi, 1.0);
        prop_assert!((r1.u - rate * r2.u).abs() <= 1e-14 * (1.0 + r1.u.abs()));
        prop_assert!((r1.w - rate * r2.w).abs() <= 1e-14 * (1.0 + r1.w.abs()));
    }

    #[test]
    fn scattering_rate_bounded_by_gamma(delta in -1e3..1e3f64, gamma in 1e-3..1e3f64, rabi in -1e6..1e6f64) {
        let r = scattering_rate(delta, gamma, rabi);
        prop_assert!(r >= 0.0 && r < gamma);
    }

    #[test]
    fn net_dispersive_sign_opposes_detuning(delta in -20.0..20.0f64, rabi in 0.001..2.0f64) {
        prop_assume!(delta.abs() > 1e-6);
        let gamma = 1.9e7;
        let d = 3.584e-29;
        let e0 = amplitude_for_rabi(d, rabi * gamma);
        let om0 = rabi_frequency(d, e0);
        let imp = net_dispersive_impulse(delta * gamma, gamma, om0, d, e0).impulse;
        prop_assert!(imp * delta < 0.0);
    }

    #[test]
    fn gradient_impulse_sign_follows_detuning(delta in -20.0..20.0f64, rabi in 0.001..5.0f64) {
        prop_assume!(delta.abs() > 1e-6);
        let g = gradient_impulse_closed_form(delta, 1.0, rabi);
        prop_assert!(g.exact * delta > 0.0);
    }

    #[test]
    fn dxb_to_gradient_ratio_tends_to_minus_two(delta in -20.0..-1.0f64, x in 1e-4..1e-2f64) {
        // Ω₀²/(δ² + γ²) = x
        let gamma = 1.0;
        let om0 = -(x * (delta * delta + gamma * gamma)).sqrt();
        let d = 1.0;
        let e0 = -om0 * 1.054571817e-34 / d;
        let (u, _) = steady_state_uv(delta, gamma, om0);
        let ratio = dxb_impulse(u, d, e0) / gradient_impulse_closed_form(delta, gamma, om0).exact;
        prop_assert!((ratio + 2.0).abs() < 2.0 * x);
    }

    #[test]
    fn ledger_two_formulations_agree(
        kin0 in -1e-25..1e-25f64, disp in -1e-36..1e-36f64, scatt in 0.0..1e-28f64,
        grad in -1e-36..1e-36f64, dxb in -1e-36..1e-36f64,
    ) {
        let l = MomentumLedger::from_channels(3, 0.0, kin0, disp, scatt, grad, dxb, 1.0);
        let ulp = f64::EPSILON * l.field_minkowski.abs().max(l.field_abraham.abs());
        prop_assert!((l.field_minkowski - l.field_abraham - l.dxb).abs() <= ulp);
        let lhs = l.kinetic_atom + l.field_abraham;
        let rhs = l.canonical_atom + l.field_minkowski;
        prop_assert!((lhs - rhs).abs() <= 4.0 * f64::EPSILON * l.kinetic_atom.abs().max(l.field_abraham.abs()));
        let r = conservation_residual(&l, &l).unwrap();
        prop_assert_eq!(r.kinetic_abraham, 0.0);
        prop_assert_eq!(r.canonical_minkowski, 0.0);
    }

    #[test]
    fn aharonov_casher_is_antisymmetric_and_orthogonal(m in vec3(), e in vec3()) {
        let f = aharonov_casher_difference(&m, &e);
        prop_assert_eq!(f, -aharonov_casher_difference(&e, &m));
        let scale = m.norm() * e.norm() * (m.norm() + e.norm()) + 1e-300;
        prop_assert!(f.dot(&m).abs() <= 1e-14 * scale / 8.98e16);
        prop_assert_eq!(aharonov_casher_difference(&m, &(m * 4.0)), Vector3::zeros());
    }

    #[test]
    fn aharonov_casher_is_bilinear(m1 in vec3(), m2 in vec3(), e in vec3(), a in -10.0..10.0f64) {
        let lhs = aharonov_casher_difference(&(m1 * a + m2), &e);
        let rhs = aharonov_casher_difference(&m1, &e) * a + aharonov_casher_difference(&m2, &e);
        let scale = (m1.norm() * a.abs() + m2.norm()) * e.norm() / 8.98e16;
        prop_assert!((lhs - rhs).norm() <= 1e-13 * scale + 1e-300);
    }

    #[test]
    fn displacement_ratio_scales_inversely_with_duration(delta in -1e14..1e14f64, tau in 1e-7..1e-4f64) {
        let a = displacement_ratio(delta, 2.4e15, 1.9e7, tau).ratio;
        let b = displacement_ratio(delta, 2.4e15, 1.9e7, 2.0 * tau).ratio;
        prop_assert!((a - 2.0 * b).abs() <= 1e-15 * a.abs());
    }

    #[test]
    fn envelope_profile_bounded_and_continuous(
        tanh in any::<bool>(), rise in 0.1..10.0f64, fall in 0.1..10.0f64, plateau in 0.0..10.0f64, x in -1.0..40.0f64,
    ) {
        let shape = if tanh { EnvelopeShape::Tanh } else { EnvelopeShape::RaisedCosine };
        let env = Envelope { shape, rise_time: rise, plateau, fall_time: fall };
        let (f, _) = env.profile(x);
        prop_assert!((0.0..=1.0).contains(&f));
        let h = 1e-9;
        let (f2, _) = env.profile(x + h);
        prop_assert!((f2 - f).abs() < 1e-6);
        for b in env.breakpoints() {
            let (lo, _) = env.profile(b - h);
            let (hi, _) = env.profile(b + h);
            prop_assert!((hi - lo).abs() < 1e-6);
        }
    }

    #[test]
    fn config_round_trip(delta in -20.0..20.0f64, rabi in 0.0..5.0f64, rise in 1.0..500.0f64, plateau in 0.0..500.0f64) {
        let s = common::Setup { delta, rabi, rise, plateau, ..Default::default() };
        let cfg = s.config();
        let again = parse_config(&cfg.to_toml_string()).unwrap();
        prop_assert_eq!(cfg, again);
    }
}

#[test]
fn default_config_round_trips() {
    let cfg = default_config();
    assert_eq!(parse_config(&cfg.to_toml_string()).unwrap(), cfg);
}
