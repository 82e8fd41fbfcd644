//! Sweep specifications: overrides, axes and scenario defaults.

use std::fmt;

use clap::ValueEnum;
use photon_momentum::config::parse_config_value;
use photon_momentum::ConfigError;
use photon_momentum::SimConfig;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SpecError {
    #[error("cannot read {path}: {source}")]
    Read { path: String, source: std::io::Error },
    #[error("config: {0}")]
    Config(#[from] ConfigError),
    #[error("malformed override `{0}`, expected key=value")]
    Override(String),
    #[error("malformed sweep axis `{0}`: {1}")]
    Axis(String, String),
    #[error("cannot write output: {0}")]
    Output(#[from] std::io::Error),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Scenario {
    PulsePassage,
    DetuningSweep,
    SaturationSweep,
    AbrahamVsMinkowski,
    SlowLight,
}

impl Scenario {
    pub fn name(self) -> &'static str {
        match self {
            Scenario::PulsePassage => "pulse-passage",
            Scenario::DetuningSweep => "detuning-sweep",
            Scenario::SaturationSweep => "saturation-sweep",
            Scenario::AbrahamVsMinkowski => "abraham-vs-minkowski",
            Scenario::SlowLight => "slow-light",
        }
    }

    /// Axis swept when the user gives none.
    pub fn default_axis(self) -> Option<Axis> {
        let axis = |path: &str, values: Vec<toml::Value>| Axis {
            path: path.to_string(),
            values,
        };
        match self {
            Scenario::PulsePassage => None,
            Scenario::DetuningSweep => Some(axis(
                "scaled.delta_over_gamma",
                (0..21).map(|i| toml::Value::Float(-10.0 + i as f64)).collect(),
            )),
            Scenario::SaturationSweep => Some(axis(
                "scaled.rabi_over_gamma",
                log_range(0.01, 10.0, 7).into_iter().map(toml::Value::Float).collect(),
            )),
            Scenario::AbrahamVsMinkowski => Some(axis(
                "simulation.neglect_dxb",
                vec![toml::Value::Boolean(false), toml::Value::Boolean(true)],
            )),
            Scenario::SlowLight => Some(axis(
                "field.group_velocity_factor",
                vec![toml::Value::Float(1.0), toml::Value::Float(10.0)],
            )),
        }
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One swept parameter.
#[derive(Clone, Debug, PartialEq)]
pub struct Axis {
    pub path: String,
    pub values: Vec<toml::Value>,
}

fn linear_range(a: f64, b: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![a];
    }
    (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect()
}

fn log_range(a: f64, b: f64, n: usize) -> Vec<f64> {
    linear_range(a.ln(), b.ln(), n).into_iter().map(f64::exp).collect()
}

/// A bare TOML value; anything that does not parse is taken as a string.
pub fn parse_value(raw: &str) -> toml::Value {
    let raw = raw.trim();
    toml::from_str::<toml::Table>(&format!("v = {raw}"))
        .ok()
        .and_then(|mut t| t.remove("v"))
        .unwrap_or_else(|| toml::Value::String(raw.to_string()))
}

impl std::str::FromStr for Axis {
    type Err = SpecError;

    /// `path=v1,v2,...`, `path=lin:start:stop:n` or `path=log:start:stop:n`.
    fn from_str(s: &str) -> Result<Self, SpecError> {
        let bad = |why: &str| SpecError::Axis(s.to_string(), why.to_string());
        let (path, spec) = s.split_once('=').ok_or_else(|| bad("expected path=values"))?;
        let path = path.trim();
        if path.is_empty() {
            return Err(bad("empty parameter path"));
        }
        let values = if let Some(range) = spec.strip_prefix("lin:").map(|r| (r, false)).or(spec.strip_prefix("log:").map(|r| (r, true))) {
            let (body, log) = range;
            let parts: Vec<&str> = body.split(':').collect();
            if parts.len() != 3 {
                return Err(bad("range needs start:stop:count"));
            }
            let a: f64 = parts[0].trim().parse().map_err(|_| bad("range start is not a number"))?;
            let b: f64 = parts[1].trim().parse().map_err(|_| bad("range stop is not a number"))?;
            let n: usize = parts[2].trim().parse().map_err(|_| bad("range count is not an integer"))?;
            if n == 0 {
                return Err(bad("range is empty"));
            }
            if log && (a <= 0.0 || b <= 0.0) {
                return Err(bad("log range needs positive bounds"));
            }
            let xs = if log { log_range(a, b, n) } else { linear_range(a, b, n) };
            xs.into_iter().map(toml::Value::Float).collect()
        } else {
            spec.split(',').filter(|v| !v.trim().is_empty()).map(parse_value).collect::<Vec<_>>()
        };
        if values.is_empty() {
            return Err(bad("no values"));
        }
        Ok(Axis {
            path: path.to_string(),
            values,
        })
    }
}

/// Keys that describe the same quantity; setting one clears the others.
const ALTERNATES: &[(&str, &[&str])] = &[
    ("scaled.omega_over_gamma", &["field.carrier_frequency"]),
    ("field.carrier_frequency", &["scaled.omega_over_gamma"]),
    ("scaled.delta_over_gamma", &["atom.transition_frequency"]),
    ("atom.transition_frequency", &["scaled.delta_over_gamma"]),
    ("scaled.rabi_over_gamma", &["field.peak_amplitude"]),
    ("field.peak_amplitude", &["scaled.rabi_over_gamma"]),
    ("scaled.gamma_rise", &["field.envelope.rise_time"]),
    ("field.envelope.rise_time", &["scaled.gamma_rise"]),
    ("scaled.gamma_fall", &["field.envelope.fall_time"]),
    ("field.envelope.fall_time", &["scaled.gamma_fall"]),
    ("scaled.gamma_plateau", &["field.envelope.plateau", "scaled.gamma_tau"]),
    ("scaled.gamma_tau", &["field.envelope.plateau", "scaled.gamma_plateau"]),
    ("field.envelope.plateau", &["scaled.gamma_plateau", "scaled.gamma_tau"]),
];

fn remove_path(doc: &mut toml::Table, path: &str) {
    let mut parts: Vec<&str> = path.split('.').collect();
    let last = parts.pop().unwrap();
    let mut table = doc;
    for p in parts {
        match table.get_mut(p).and_then(toml::Value::as_table_mut) {
            Some(t) => table = t,
            None => return,
        }
    }
    table.remove(last);
}

/// Set `path` (dotted) to `value`, creating tables on the way.
pub fn set_path(doc: &mut toml::Table, path: &str, value: toml::Value) -> Result<(), ConfigError> {
    for (key, others) in ALTERNATES {
        if *key == path {
            for other in *others {
                remove_path(doc, other);
            }
        }
    }
    let mut parts: Vec<&str> = path.split('.').collect();
    let last = parts.pop().unwrap();
    let mut table = doc;
    for p in parts {
        let entry = table
            .entry(p.to_string())
            .or_insert_with(|| toml::Value::Table(toml::Table::new()));
        table = entry.as_table_mut().ok_or_else(|| ConfigError::Invalid {
            path: path.to_string(),
            reason: format!("`{p}` is not a table"),
        })?;
    }
    table.insert(last.to_string(), value);
    Ok(())
}

/// A fully specified batch of runs.
#[derive(Clone, Debug)]
pub struct SweepSpec {
    pub scenario: Scenario,
    pub base: toml::Table,
    pub axes: Vec<Axis>,
    pub out_dir: std::path::PathBuf,
    pub jobs: usize,
}

/// One point of the Cartesian product.
#[derive(Clone, Debug)]
pub struct SweepPoint {
    pub coordinates: Vec<(String, toml::Value)>,
    pub document: toml::Table,
}

impl SweepPoint {
    pub fn config(&self) -> Result<SimConfig, ConfigError> {
        parse_config_value(toml::Value::Table(self.document.clone()))
    }
}

impl SweepSpec {
    pub fn points(&self) -> Result<Vec<SweepPoint>, ConfigError> {
        let mut points = vec![SweepPoint {
            coordinates: Vec::new(),
            document: self.base.clone(),
        }];
        for axis in &self.axes {
            let mut next = Vec::with_capacity(points.len() * axis.values.len());
            for p in &points {
                for v in &axis.values {
                    let mut q = p.clone();
                    set_path(&mut q.document, &axis.path, v.clone())?;
                    q.coordinates.push((axis.path.clone(), v.clone()));
                    next.push(q);
                }
            }
            points = next;
        }
        Ok(points)
    }

    /// Reject paths that do not resolve into a config. Values that are out
    /// of range at some points are per-run failures instead.
    pub fn check_paths(&self) -> Result<(), ConfigError> {
        for axis in &self.axes {
            let mut doc = self.base.clone();
            set_path(&mut doc, &axis.path, axis.values[0].clone())?;
            match parse_config_value(toml::Value::Table(doc)) {
                Err(ConfigError::Malformed(m)) => return Err(ConfigError::Malformed(m)),
                _ => continue,
            }
        }
        Ok(())
    }
}
