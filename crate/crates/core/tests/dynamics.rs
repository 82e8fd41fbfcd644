mod common;

use common::Setup;
use photon_momentum::bloch::steady_state;
use photon_momentum::constants::C;
use photon_momentum::dynamics::{integrate_motion, measure_displacements, MotionStart, Simulation};
use photon_momentum::forces::scattering_force;
use photon_momentum::{RegimeWarning, SimError};

#[test]
fn zero_field_leaves_atom_at_rest() {
    let cfg = Setup { rabi: 0.0, ..Default::default() }.config();
    let rec = integrate_motion(&cfg).unwrap();
    assert!(rec.velocities.iter().all(|&v| v == 0.0));
    assert!(rec.z_positions.iter().all(|&z| z == 0.0));
    assert!(rec.ledger.iter().all(|l| l.kinetic_atom == 0.0 && l.dxb == 0.0));
}

#[test]
fn plateau_gives_uniform_acceleration() {
    let cfg = Setup::default().config();
    let sim = Simulation::new(cfg.clone()).unwrap();
    let tl = *sim.timeline();
    let (t0, t1) = (tl.rise_end, tl.fall_start);
    let bloch = steady_state(cfg.detuning(), cfg.atom.gamma, cfg.peak_rabi());
    let (z0, v0) = (0.0, 0.0);
    let rec = sim.run_span(t0, t1, MotionStart { bloch, z: z0, velocity: v0 }).unwrap();
    let a = scattering_force(cfg.detuning(), cfg.atom.gamma, cfg.peak_rabi(), cfg.field.photon_momentum()) / cfg.atom.mass;
    for (i, &t) in rec.times.iter().enumerate() {
        let dt = t - t0;
        let expected = 0.5 * a * dt * dt;
        let got = rec.z_positions[i] - z0 - v0 * dt;
        assert!((got - expected).abs() <= 1e-8 * expected.abs(), "t={dt} {got} {expected}");
        assert!((rec.x_scattered[i] - expected).abs() <= 1e-8 * expected.abs());
    }
}

#[test]
fn momentum_history_has_leading_bump_and_scattering_slope() {
    let cfg = Setup::default().config();
    let rec = integrate_motion(&cfg).unwrap();
    let tl = rec.timeline;
    let rise = rec.ledger_at(tl.rise_end).unwrap();
    let fall = rec.ledger_at(tl.fall_start).unwrap();
    let end = rec.ledger_at(tl.pulse_end).unwrap();
    assert!(rise.dispersive_kinetic > 0.0);
    assert!((fall.dispersive_kinetic - rise.dispersive_kinetic).abs() < 1e-6 * rise.dispersive_kinetic);
    let slope = (fall.scattered_momentum - rise.scattered_momentum) / (tl.fall_start - tl.rise_end);
    let f = scattering_force(cfg.detuning(), cfg.atom.gamma, cfg.peak_rabi(), cfg.field.photon_momentum());
    assert!(((slope - f) / f).abs() < 1e-9);
    assert!(end.dispersive_kinetic.abs() < 1e-6 * rise.dispersive_kinetic);
}

#[test]
fn kinematics_are_consistent() {
    let cfg = Setup { fidelity: "full-obe", ..Default::default() }.config();
    let rec = integrate_motion(&cfg).unwrap();
    let m = cfg.atom.mass;
    let mut impulse = 0.0;
    let mut travelled = 0.0;
    let z_scale = rec.z_positions.last().unwrap().abs();
    let p_scale = rec.ledger.last().unwrap().kinetic_atom.abs();
    for i in 1..rec.len() {
        let dt = rec.times[i] - rec.times[i - 1];
        impulse += 0.5 * dt * (rec.forces[i].total_z + rec.forces[i - 1].total_z);
        let p = rec.ledger[i].kinetic_atom;
        assert!((impulse - p).abs() <= 1e-6 * p_scale, "step {i}");
        travelled += 0.5 * dt * (rec.velocities[i] + rec.velocities[i - 1]);
        assert!((travelled - rec.z_positions[i]).abs() <= 1e-5 * z_scale, "step {i}");
        assert_eq!(rec.ledger[i].kinetic_atom / m, rec.velocities[i]);
    }
    assert!(rec.max_speed_over_c < 1e-3);
    assert!(!rec.warnings.iter().any(|w| matches!(w, RegimeWarning::FastAtom { .. })));
}

#[test]
fn fast_atom_is_flagged_and_superluminal_rejected() {
    let mut cfg = Setup::default().config();
    cfg.initial_velocity = 0.01 * C;
    let rec = integrate_motion(&cfg).unwrap();
    assert!(rec.warnings.iter().any(|w| matches!(w, RegimeWarning::FastAtom { .. })));
    cfg.initial_velocity = 1.5 * C;
    assert!(matches!(integrate_motion(&cfg), Err(SimError::Superluminal { .. })));
}

#[test]
fn resonant_drive_has_no_dispersive_displacement() {
    let cfg = Setup { delta: 0.0, ..Default::default() }.config();
    let d = measure_displacements(&integrate_motion(&cfg).unwrap()).unwrap();
    assert_eq!(d.dx_dispersion, 0.0);
    assert!(d.dx_absorption > 0.0);
}

#[test]
fn displacements_are_linear_in_intensity() {
    let dx = |rabi: f64| {
        let cfg = Setup { rabi, ..Default::default() }.config();
        measure_displacements(&integrate_motion(&cfg).unwrap()).unwrap()
    };
    let a = dx(0.01);
    let b = dx(0.01 * 2f64.sqrt());
    assert!((b.dx_dispersion / a.dx_dispersion - 2.0).abs() < 1e-3);
    assert!((b.dx_absorption / a.dx_absorption - 2.0).abs() < 1e-3);
}

#[test]
fn partial_record_is_rejected() {
    let cfg = Setup::default().config();
    let sim = Simulation::new(cfg.clone()).unwrap();
    let tl = *sim.timeline();
    let start = MotionStart { bloch: steady_state(cfg.detuning(), cfg.atom.gamma, cfg.peak_rabi()), z: 0.0, velocity: 0.0 };
    let rec = sim.run_span(tl.rise_end, tl.mid_plateau, start).unwrap();
    assert!(matches!(measure_displacements(&rec), Err(SimError::IncompletePassage)));
}

#[test]
fn csv_export_has_fixed_columns() {
    let rec = integrate_motion(&Setup::default().config()).unwrap();
    let mut buf = Vec::new();
    rec.write_csv(&mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    assert!(text.starts_with("t,z,v,p_kinetic,p_canonical,F_total,F_scatt,F_disp\n"));
    assert!(!text.contains('\r'));
    assert_eq!(text.lines().count(), rec.len() + 1);

    let mut buf = Vec::new();
    rec.write_forces_csv(&mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    assert!(text.starts_with("t,F_total,F_grad,F_scatt,F_dxb_rate,form_tag\n"));
    assert!(text.lines().nth(1).unwrap().ends_with(",barnett"));
}

#[test]
fn runs_are_deterministic() {
    let cfg = Setup { fidelity: "full-obe", ..Default::default() }.config();
    let a = integrate_motion(&cfg).unwrap();
    let b = integrate_motion(&cfg).unwrap();
    assert_eq!(a.run_id, b.run_id);
    assert_eq!(a.ledger, b.ledger);
}
