#![allow(dead_code)]

use photon_momentum::config::parse_config;
use photon_momentum::SimConfig;

/// Scaled setup on the Rb-87 D2 atom.
#[derive(Clone, Debug)]
pub struct Setup {
    pub delta: f64,
    pub rabi: f64,
    pub rise: f64,
    pub fall: Option<f64>,
    pub plateau: f64,
    /// Replaces `plateau` when set.
    pub gamma_tau: Option<f64>,
    pub omega_over_gamma: Option<f64>,
    pub fidelity: &'static str,
    pub force_form: &'static str,
    pub neglect_dxb: bool,
    pub group_velocity_factor: f64,
    pub mode_volume: Option<f64>,
    pub extra: String,
}

impl Default for Setup {
    fn default() -> Self {
        Setup {
            delta: -5.0,
            rabi: 0.1,
            rise: 100.0,
            fall: None,
            plateau: 200.0,
            gamma_tau: None,
            omega_over_gamma: None,
            fidelity: "adiabatic",
            force_form: "barnett",
            neglect_dxb: false,
            group_velocity_factor: 1.0,
            mode_volume: None,
            extra: String::new(),
        }
    }
}

impl Setup {
    pub fn toml(&self) -> String {
        let mut s = String::from(
            "[atom]\ngamma = 1.9058335e7\ndipole = 3.584e-29\nmass = 1.443160648e-25\n\n[field]\n",
        );
        if self.omega_over_gamma.is_none() {
            s += "carrier_frequency = 2.4141720e15\n";
        }
        s += &format!("group_velocity_factor = {:?}\n", self.group_velocity_factor);
        if let Some(v) = self.mode_volume {
            s += &format!("mode_volume = {v:e}\n");
        }
        s += "\n[field.envelope]\nshape = \"raised-cosine\"\n\n[scaled]\n";
        if let Some(r) = self.omega_over_gamma {
            s += &format!("omega_over_gamma = {r:?}\n");
        }
        s += &format!(
            "delta_over_gamma = {:?}\nrabi_over_gamma = {:?}\ngamma_rise = {:?}\n",
            self.delta, self.rabi, self.rise
        );
        match self.gamma_tau {
            Some(gt) => s += &format!("gamma_tau = {gt:?}\n"),
            None => s += &format!("gamma_plateau = {:?}\n", self.plateau),
        }
        if let Some(f) = self.fall {
            s += &format!("gamma_fall = {f:?}\n");
        }
        s += &format!(
            "\n[simulation]\nfidelity = \"{}\"\nforce_form = \"{}\"\nneglect_dxb = {}\n",
            self.fidelity, self.force_form, self.neglect_dxb
        );
        s += &self.extra;
        s
    }

    pub fn config(&self) -> SimConfig {
        parse_config(&self.toml()).unwrap_or_else(|e| panic!("{e}\n{}", self.toml()))
    }
}
