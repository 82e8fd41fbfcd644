//! Executes sweep points and writes per-run artifacts and the summary.

use std::fs;
use std::io::BufWriter;
use std::path::Path;

use rayon::prelude::*;
use serde::Serialize;
use sha2::{Digest, Sha256};

use photon_momentum::dynamics::{displacement_ratio, integrate_motion, measure_displacements};
use photon_momentum::ledger::{net_dispersive_impulse, photon_momentum_report, trailing_edge_cancellation};
use photon_momentum::{SimConfig, SimError, TrajectoryRecord};

use crate::spec::{SpecError, SweepPoint, SweepSpec};

/// Observables of one successful run.
#[derive(Clone, Debug, Serialize)]
pub struct RunRow {
    pub run_dir: String,
    pub coordinates: Vec<(String, String)>,
    pub delta_over_gamma: f64,
    pub rabi_over_gamma: f64,
    pub gamma_tau: f64,
    pub group_velocity_factor: f64,
    pub fidelity: String,
    pub force_form: String,
    pub neglect_dxb: bool,
    pub gradient_impulse_leading: f64,
    pub dxb_at_plateau: f64,
    pub net_dispersive_impulse: f64,
    pub net_dispersive_closed_form: f64,
    pub final_kinetic: f64,
    pub scattered_momentum: f64,
    pub edge_mismatch: f64,
    pub p0: f64,
    pub abraham_shift: Option<f64>,
    pub minkowski_shift: Option<f64>,
    pub measured_shift: Option<f64>,
    pub abraham_distance: Option<f64>,
    pub minkowski_distance: Option<f64>,
    pub discrimination: Option<f64>,
    pub nearest_branch: Option<String>,
    pub dx_dispersion: f64,
    pub dx_absorption: f64,
    pub displacement_ratio: f64,
    pub ratio_formula: f64,
    pub max_speed_over_c: f64,
    pub warnings: Vec<String>,
    pub config: toml::Value,
}

#[derive(Clone, Debug, Serialize)]
pub struct RunFailure {
    pub coordinates: Vec<(String, String)>,
    pub error: String,
}

#[derive(Debug, Serialize)]
pub struct Summary {
    pub scenario: String,
    pub axes: Vec<String>,
    pub runs: Vec<RunRow>,
    pub failures: Vec<RunFailure>,
}

const FIXED_COLUMNS: &[&str] = &[
    "run_dir",
    "delta_over_gamma",
    "rabi_over_gamma",
    "gamma_tau",
    "group_velocity_factor",
    "fidelity",
    "force_form",
    "neglect_dxb",
    "gradient_impulse_leading",
    "dxb_at_plateau",
    "net_dispersive_impulse",
    "net_dispersive_closed_form",
    "final_kinetic",
    "scattered_momentum",
    "edge_mismatch",
    "p0",
    "abraham_shift",
    "minkowski_shift",
    "measured_shift",
    "abraham_distance",
    "minkowski_distance",
    "discrimination",
    "nearest_branch",
    "dx_dispersion",
    "dx_absorption",
    "displacement_ratio",
    "ratio_formula",
    "max_speed_over_c",
    "warnings",
];

fn num(x: f64) -> String {
    format!("{x:e}")
}

fn opt(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

impl RunRow {
    fn csv_fields(&self) -> Vec<String> {
        let mut out = vec![self.run_dir.clone()];
        out.extend(self.coordinates.iter().map(|(_, v)| v.clone()));
        out.extend([
            num(self.delta_over_gamma),
            num(self.rabi_over_gamma),
            num(self.gamma_tau),
            num(self.group_velocity_factor),
            self.fidelity.clone(),
            self.force_form.clone(),
            self.neglect_dxb.to_string(),
            num(self.gradient_impulse_leading),
            num(self.dxb_at_plateau),
            num(self.net_dispersive_impulse),
            num(self.net_dispersive_closed_form),
            num(self.final_kinetic),
            num(self.scattered_momentum),
            num(self.edge_mismatch),
            num(self.p0),
            opt(self.abraham_shift),
            opt(self.minkowski_shift),
            opt(self.measured_shift),
            opt(self.abraham_distance),
            opt(self.minkowski_distance),
            opt(self.discrimination),
            self.nearest_branch.clone().unwrap_or_default(),
            num(self.dx_dispersion),
            num(self.dx_absorption),
            num(self.displacement_ratio),
            num(self.ratio_formula),
            num(self.max_speed_over_c),
            self.warnings.join("; "),
        ]);
        out
    }
}

/// First 16 hex digits of SHA-256 over the canonical config.
pub fn config_hash(config: &SimConfig) -> String {
    let digest = Sha256::digest(config.to_toml_string().as_bytes());
    hex::encode(&digest[..8])
}

fn display_value(v: &toml::Value) -> String {
    match v {
        toml::Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn coordinates(point: &SweepPoint) -> Vec<(String, String)> {
    point
        .coordinates
        .iter()
        .map(|(k, v)| (k.clone(), display_value(v)))
        .collect()
}

fn run_point(point: &SweepPoint, out_dir: &Path) -> Result<RunRow, String> {
    let cfg = point.config().map_err(|e| e.to_string())?;
    let hash = config_hash(&cfg);
    let dir = out_dir.join(&hash);
    simulate(&cfg, &dir, &hash, coordinates(point)).map_err(|e| e.to_string())
}

fn simulate(cfg: &SimConfig, dir: &Path, hash: &str, coordinates: Vec<(String, String)>) -> Result<RunRow, SimError> {
    let rec = integrate_motion(cfg)?;
    let tl = rec.timeline;
    let gamma = cfg.atom.gamma;
    let start = rec.ledger_at(tl.pulse_start)?;
    let rise = rec.ledger_at(tl.rise_end)?;
    let mid = rec.ledger_at(tl.mid_plateau)?;
    let end = rec.ledger_at(tl.window_end)?;
    let edges = trailing_edge_cancellation(&rec)?;
    let displacements = measure_displacements(&rec)?;
    let closed = net_dispersive_impulse(
        cfg.detuning(),
        gamma,
        cfg.peak_rabi(),
        cfg.atom.dipole,
        cfg.field.peak_amplitude,
    );
    let formula = displacement_ratio(cfg.detuning(), cfg.field.omega, gamma, cfg.pulse_duration_tau);

    let mut warnings: Vec<String> = rec.warnings.iter().map(|w| w.to_string()).collect();
    let report = match photon_momentum_report(&rec) {
        Ok(r) => Some(r),
        Err(e) => {
            warnings.push(format!("no per-photon report: {e}"));
            None
        }
    };

    fs::create_dir_all(dir)?;
    fs::write(dir.join("config.toml"), cfg.to_toml_string())?;
    if cfg.output.csv {
        rec.write_csv(BufWriter::new(fs::File::create(dir.join("trajectory.csv"))?))?;
        rec.write_forces_csv(BufWriter::new(fs::File::create(dir.join("forces.csv"))?))?;
        write_bloch_csv(&rec, &dir.join("bloch.csv"))?;
    }
    if cfg.output.json {
        fs::write(dir.join("ledger.json"), rec.ledger_json()?)?;
        if let Some(r) = &report {
            fs::write(dir.join("report.json"), serde_json::to_string_pretty(r)?)?;
        }
    }

    Ok(RunRow {
        run_dir: hash.to_string(),
        coordinates,
        delta_over_gamma: cfg.detuning() / gamma,
        rabi_over_gamma: cfg.peak_rabi().abs() / gamma,
        gamma_tau: gamma * cfg.pulse_duration_tau,
        group_velocity_factor: cfg.field.group_velocity_factor,
        fidelity: cfg.fidelity.as_str().to_string(),
        force_form: format!("{:?}", cfg.force_form).to_lowercase(),
        neglect_dxb: cfg.neglect_dxb,
        gradient_impulse_leading: rise.gradient_impulse() - start.gradient_impulse(),
        dxb_at_plateau: mid.dxb,
        net_dispersive_impulse: mid.dispersive_kinetic - start.dispersive_kinetic,
        net_dispersive_closed_form: closed.impulse,
        final_kinetic: end.kinetic_atom,
        scattered_momentum: end.scattered_momentum,
        edge_mismatch: edges.relative_mismatch(),
        p0: cfg.field.photon_momentum(),
        abraham_shift: report.as_ref().map(|r| r.abraham_shift),
        minkowski_shift: report.as_ref().map(|r| r.minkowski_shift),
        measured_shift: report.as_ref().map(|r| r.measured_shift),
        abraham_distance: report.as_ref().map(|r| r.abraham_distance),
        minkowski_distance: report.as_ref().map(|r| r.minkowski_distance),
        discrimination: report.as_ref().map(|r| r.discrimination()),
        nearest_branch: report.as_ref().map(|r| {
            if r.abraham_distance <= r.minkowski_distance { "abraham" } else { "minkowski" }.to_string()
        }),
        dx_dispersion: displacements.dx_dispersion,
        dx_absorption: displacements.dx_absorption,
        displacement_ratio: displacements.ratio(),
        ratio_formula: formula.ratio,
        max_speed_over_c: rec.max_speed_over_c,
        warnings,
        config: toml::Value::try_from(cfg.to_document()).expect("document serializes"),
    })
}

fn write_bloch_csv(rec: &TrajectoryRecord, path: &Path) -> Result<(), SimError> {
    let traj = rec.bloch_trajectory();
    let mut wtr = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(BufWriter::new(fs::File::create(path)?));
    wtr.write_record(["t", "u", "v", "w", "rabi"])?;
    for ((t, s), r) in traj.times.iter().zip(&traj.states).zip(&traj.instantaneous_rabi) {
        wtr.write_record([num(*t), num(s.u), num(s.v), num(s.w), num(*r)])?;
    }
    wtr.flush()?;
    Ok(())
}

/// Run every point, in parallel up to `spec.jobs`, and write the summary.
pub fn run_sweep(spec: &SweepSpec) -> Result<Summary, SpecError> {
    let points = spec.points()?;
    fs::create_dir_all(&spec.out_dir)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(spec.jobs)
        .build()
        .map_err(|e| SpecError::Output(std::io::Error::other(e)))?;
    let results: Vec<Result<RunRow, String>> =
        pool.install(|| points.par_iter().map(|p| run_point(p, &spec.out_dir)).collect());

    let mut summary = Summary {
        scenario: spec.scenario.name().to_string(),
        axes: spec.axes.iter().map(|a| a.path.clone()).collect(),
        runs: Vec::new(),
        failures: Vec::new(),
    };
    for (point, result) in points.iter().zip(results) {
        match result {
            Ok(row) => summary.runs.push(row),
            Err(error) => summary.failures.push(RunFailure {
                coordinates: coordinates(point),
                error,
            }),
        }
    }
    write_summary(&summary, &spec.out_dir)?;
    Ok(summary)
}

fn write_summary(summary: &Summary, out_dir: &Path) -> Result<(), SpecError> {
    let mut wtr = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_path(out_dir.join("summary.csv"))
        .map_err(csv_error)?;
    let mut header: Vec<String> = vec![FIXED_COLUMNS[0].to_string()];
    header.extend(summary.axes.iter().cloned());
    header.extend(FIXED_COLUMNS[1..].iter().map(|s| s.to_string()));
    wtr.write_record(&header).map_err(csv_error)?;
    for row in &summary.runs {
        wtr.write_record(row.csv_fields()).map_err(csv_error)?;
    }
    wtr.flush()?;
    let json = serde_json::to_string_pretty(summary).map_err(|e| SpecError::Output(e.into()))?;
    fs::write(out_dir.join("summary.json"), json)?;
    Ok(())
}

fn csv_error(e: csv::Error) -> SpecError {
    SpecError::Output(std::io::Error::other(e))
}
