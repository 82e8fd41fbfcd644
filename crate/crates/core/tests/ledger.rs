mod common;

use common::Setup;
use photon_momentum::constants::C;
use photon_momentum::dynamics::integrate_motion;
use photon_momentum::fields::Timeline;
use photon_momentum::forces::{
    barnett_avg_force, cycle_averaged_oscillatory_force, AdiabaticHistory, BlochHistory,
};
use photon_momentum::fields::sample_field;
use photon_momentum::ledger::{
    conservation_residual, gradient_impulse_closed_form, net_dispersive_impulse, photon_momentum_report,
    trailing_edge_cancellation, MomentumLedger,
};
use photon_momentum::{RegimeWarning, SimError};

#[test]
fn no_dipole_means_free_photon_momentum() {
    let mut cfg = Setup { rabi: 0.0, ..Default::default() }.config();
    cfg.atom.dipole = 0.0;
    cfg.field.peak_amplitude = 1e3;
    let r = photon_momentum_report(&integrate_motion(&cfg).unwrap()).unwrap();
    assert_eq!(r.measured_p_per_photon, r.p0);
    assert_eq!(r.n, 1.0);
}

#[test]
fn tiny_mode_volume_is_rejected() {
    let cfg = Setup { mode_volume: Some(1e-12), ..Default::default() }.config();
    let rec = integrate_motion(&cfg).unwrap();
    assert!(matches!(photon_momentum_report(&rec), Err(SimError::TooFewPhotons(_))));
}

#[test]
fn per_photon_result_is_independent_of_mode_volume() {
    let report = |v| {
        let cfg = Setup { mode_volume: v, ..Default::default() }.config();
        photon_momentum_report(&integrate_motion(&cfg).unwrap()).unwrap()
    };
    let a = report(Some(1.0));
    let b = report(Some(1e3));
    assert!((a.abraham_distance - b.abraham_distance).abs() < 1e-6);
    assert!(a.abraham_distance < 0.01);
    assert!(a.warnings.is_empty());
    let c = report(None);
    assert!(c.warnings.iter().any(|w| matches!(w, RegimeWarning::DefaultModeVolume { .. })));
}

#[test]
fn large_susceptibility_is_flagged() {
    // χ′N ~ |Ωu|/ω, so χ′ ≥ 0.1 with at least one photon needs a slow carrier
    let base = Setup { omega_over_gamma: Some(2.0), rabi: 3.0, mode_volume: Some(1.0), ..Default::default() };
    let chi_at_unit_volume = base.config().chi_prime().abs();
    let cfg = Setup { mode_volume: Some(chi_at_unit_volume / 0.2), ..base }.config();
    let r = photon_momentum_report(&integrate_motion(&cfg).unwrap()).unwrap();
    assert!(r.photon_count >= 1.0);
    assert!(r.chi_prime.abs() >= 0.1, "{}", r.chi_prime);
    assert!(r.warnings.iter().any(|w| matches!(w, RegimeWarning::LargeSusceptibility { .. })));
}

#[test]
fn neglecting_dxb_moves_to_minkowski_branch() {
    let cfg = Setup { neglect_dxb: true, mode_volume: Some(1.0), ..Default::default() }.config();
    let r = photon_momentum_report(&integrate_motion(&cfg).unwrap()).unwrap();
    assert!(r.neglect_dxb);
    assert!(r.minkowski_distance < 0.01);
    assert!(r.discrimination() < -0.98);
}

#[test]
fn full_obe_dispersive_impulse_approaches_closed_form() {
    let gap = |rise: f64| {
        let cfg = Setup { fidelity: "full-obe", rise, ..Default::default() }.config();
        let rec = integrate_motion(&cfg).unwrap();
        let sim = rec.ledger_at(rec.timeline.mid_plateau).unwrap().dispersive_kinetic;
        let closed = net_dispersive_impulse(
            cfg.detuning(),
            cfg.atom.gamma,
            cfg.peak_rabi(),
            cfg.atom.dipole,
            cfg.field.peak_amplitude,
        );
        assert!(closed.linear_regime);
        (sim - closed.impulse) / closed.impulse
    };
    let (slow, slower) = (gap(100.0), gap(1000.0));
    // the lag of u behind its steady state is first order in 1/(γτ_r)
    assert!(slower.abs() < 1e-3, "{slower}");
    assert!((slow / slower - 10.0).abs() < 0.1, "{slow} {slower}");
}

#[test]
fn gradient_impulse_by_quadrature() {
    // independent Gauss–Legendre quadrature of ∫ D u ∂𝓔/∂z dt over the rise
    let cfg = Setup::default().config();
    let tl = Timeline::new(&cfg);
    let h = AdiabaticHistory { config: &cfg, z: 0.0 };
    let gl = photon_momentum::quadrature::GaussLegendre::new(20);
    let j = gl.integrate_panels(
        |t| {
            let (s, _) = h.sample(t);
            let f = sample_field(&cfg.field, t, 0.0);
            cfg.atom.dipole * s.u * f.envelope_space_gradient
        },
        tl.pulse_start,
        tl.rise_end,
        16,
    );
    let g = gradient_impulse_closed_form(cfg.detuning(), cfg.atom.gamma, cfg.peak_rabi());
    assert!(((j - g.exact) / g.exact).abs() < 1e-4);
    assert!(g.relative_gap < 1e-3);
}

#[test]
fn cycle_averaged_carrier_force_matches_averaged_form() {
    let cfg = Setup { rise: 100.0, plateau: 20.0, omega_over_gamma: Some(1e3), ..Default::default() }.config();
    let tl = Timeline::new(&cfg);
    let h = AdiabaticHistory { config: &cfg, z: 0.0 };
    for frac in [0.3, 0.5, 0.7] {
        let t = tl.pulse_start + frac * (tl.rise_end - tl.pulse_start);
        let osc = cycle_averaged_oscillatory_force(&h, &cfg.field, cfg.atom.dipole, t, 0.0);
        let (s, r) = h.sample(t);
        let f = barnett_avg_force(&s, &r, &sample_field(&cfg.field, t, 0.0), cfg.atom.dipole, cfg.field.wavenumber());
        assert!(((osc - f.total_z) / f.total_z).abs() < 1e-4, "{osc} {}", f.total_z);
        // dispersive part alone, through the δ-odd combination
        let mut blue = cfg.clone();
        blue.atom.transition_frequency = cfg.field.omega + cfg.detuning();
        let hb = AdiabaticHistory { config: &blue, z: 0.0 };
        let osc_b = cycle_averaged_oscillatory_force(&hb, &blue.field, blue.atom.dipole, t, 0.0);
        let odd = 0.5 * (osc - osc_b);
        assert!(((odd - f.dudt_z) / f.dudt_z).abs() < 1e-4, "{odd} {}", f.dudt_z);
    }
}

#[test]
fn zero_field_cancellation_is_trivial() {
    let cfg = Setup { rabi: 0.0, ..Default::default() }.config();
    let e = trailing_edge_cancellation(&integrate_motion(&cfg).unwrap()).unwrap();
    assert_eq!((e.leading, e.trailing, e.final_dispersive), (0.0, 0.0, 0.0));
}

#[test]
fn residual_requires_same_run() {
    let a = integrate_motion(&Setup::default().config()).unwrap();
    let b = integrate_motion(&Setup { delta: -4.0, ..Default::default() }.config()).unwrap();
    assert!(matches!(
        conservation_residual(&a.ledger[0], &b.ledger[1]),
        Err(SimError::MismatchedRuns(..))
    ));
}

#[test]
fn ledger_series_exports_as_json() {
    let rec = integrate_motion(&Setup::default().config()).unwrap();
    let json = rec.ledger_json().unwrap();
    let back: Vec<MomentumLedger> = serde_json::from_str(&json).unwrap();
    assert_eq!(back, rec.ledger);
    let report = photon_momentum_report(&rec).unwrap();
    let value = serde_json::to_value(&report).unwrap();
    assert_eq!(value["neglect_dxb"], false);
    assert!(value["warnings"].is_array());
}

#[test]
fn dxb_is_the_minkowski_abraham_gap_at_every_step() {
    let rec = integrate_motion(&Setup { fidelity: "full-obe", ..Default::default() }.config()).unwrap();
    for l in &rec.ledger {
        let ulp = f64::EPSILON * l.field_minkowski.abs().max(l.field_abraham.abs());
        assert!((l.field_minkowski - l.field_abraham - l.dxb).abs() <= ulp);
    }
    let _ = C;
}
