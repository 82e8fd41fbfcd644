//! `validate`: parse a config and report its regime.

use std::fmt::Write;

use photon_momentum::SimConfig;

/// Human-readable regime table followed by warning lines.
pub fn regime_report(cfg: &SimConfig) -> String {
    let gamma = cfg.atom.gamma;
    let env = cfg.field.effective_envelope();
    let rows = [
        ("gamma*tau_r", gamma * env.rise_time.min(env.fall_time)),
        ("gamma*tau", gamma * cfg.pulse_duration_tau),
        ("delta/gamma", cfg.detuning() / gamma),
        ("Omega0/gamma", cfg.peak_rabi().abs() / gamma),
        ("Omega0^2/(delta^2+gamma^2)", cfg.saturation()),
        ("|chi'|", cfg.chi_prime().abs()),
        ("omega/gamma", cfg.field.omega / gamma),
        ("v0/c", cfg.initial_velocity.abs() / photon_momentum::constants::C),
    ];
    let mut out = String::from("OK\n");
    for (name, value) in rows {
        let _ = writeln!(out, "  {name:<28} {value:.4e}");
    }
    for w in cfg.warnings() {
        let _ = writeln!(out, "warning: {w}");
    }
    out
}
