use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::PathBuf;

use serde_json::{json, Value};

use super::svg::plot_csv;
use super::{Experiment, ExperimentConfig};
use crate::corr::{AppendixKernel, BaseKernel, BathKernels, StateIndexedKernel};
use crate::engine::{assemble_series, Basis, Observable, QuadratureSpec, TimeSeriesResult, DEFAULT_GRID, DEFAULT_GRID_ORDER3};
use crate::envmode::{mode_rdm, ModeProbe};
use crate::error::validation;
use crate::model::{suppression_cutoffs, windowed_reorganization, OpenSystem, SpectralChannel};
use crate::oracle::{self, MAX_DIMENSION};
use crate::pathways::PathwayCache;
use crate::{Result, C64};

/// Files written by a run plus the values echoed into the manifest.
#[derive(Debug)]
pub struct Artifacts {
    pub dir: PathBuf,
    pub files: Vec<String>,
    pub derived: BTreeMap<String, Value>,
    pub overrides: BTreeMap<String, String>,
}

impl Artifacts {
    pub(super) fn new(dir: PathBuf, overrides: BTreeMap<String, String>) -> Result<Self> {
        std::fs::create_dir_all(&dir)?;
        Ok(Self { dir, files: Vec::new(), derived: BTreeMap::new(), overrides })
    }

    pub fn write(&mut self, name: &str, contents: &str) -> Result<()> {
        std::fs::write(self.dir.join(name), contents)?;
        self.files.push(name.to_string());
        Ok(())
    }

    pub fn record(&mut self, key: &str, value: Value) {
        self.derived.insert(key.to_string(), value);
    }

    /// Re-reads `csv` from disk and charts `cols`, so plots depend only on the CSV.
    fn plot(&mut self, svg: &str, csv: &str, cols: &[&str], title: &str, y_label: &str) -> Result<()> {
        let text = std::fs::read_to_string(self.dir.join(csv))?;
        let chart = plot_csv(&text, cols, title, y_label)?;
        self.write(svg, &chart)
    }

    pub(super) fn finish(&mut self, cfg: &ExperimentConfig) -> Result<()> {
        self.files.push("manifest.json".into());
        let units = cfg.system().map(|s| s.units).unwrap_or_default();
        let manifest = json!({
            "experiment": cfg.experiment.name(),
            "config": cfg,
            "overrides": self.overrides,
            "constants": { "hbar_cm_fs": units.hbar, "kb_cm_per_K": units.kb },
            "derived": self.derived,
            "files": self.files,
        });
        let text = serde_json::to_string_pretty(&manifest)? + "\n";
        std::fs::write(self.dir.join("manifest.json"), text)?;
        Ok(())
    }
}

fn spec(cfg: &ExperimentConfig, order: usize) -> Result<QuadratureSpec> {
    let grid = cfg.grid_points.unwrap_or(if order >= 3 { DEFAULT_GRID_ORDER3 } else { DEFAULT_GRID });
    QuadratureSpec::new(cfg.t_max(), grid, order)
}

fn max_order(cfg: &ExperimentConfig) -> usize {
    cfg.orders().into_iter().max().unwrap_or(0)
}

fn default_observables(m: usize) -> Vec<Observable> {
    let mut v = if m == 2 {
        vec![Observable::SigmaX, Observable::SigmaY, Observable::SigmaZ]
    } else {
        (0..m).map(Observable::Population).collect()
    };
    v.push(Observable::Purity);
    v
}

fn series_csv(series: &TimeSeriesResult, obs: &[Observable], prefix: &str) -> Result<String> {
    let mut buf = Vec::new();
    series.write_csv(&mut buf, obs, prefix)?;
    Ok(String::from_utf8(buf).expect("CSV output is ASCII"))
}

/// Joins CSV tables that share their first column row by row.
fn merge_csv(parts: &[String]) -> Result<String> {
    let tables: Vec<Vec<&str>> = parts.iter().map(|p| p.lines().collect()).collect();
    let rows = tables.first().map_or(0, Vec::len);
    if tables.iter().any(|t| t.len() != rows) {
        return validation("tables to merge differ in length");
    }
    let mut out = String::new();
    for r in 0..rows {
        let mut line = tables[0][r].to_string();
        for t in &tables[1..] {
            if let Some((_, rest)) = t[r].split_once(',') {
                line.push(',');
                line.push_str(rest);
            }
        }
        out.push_str(&line);
        out.push('\n');
    }
    Ok(out)
}

/// Fock sizes for the oracle: the configured ones, or the largest uniform
/// size up to 20 that respects the dimension guard.
fn oracle_fock(system: &OpenSystem, cfg: &ExperimentConfig) -> Result<Vec<usize>> {
    if !system.bath.is_discrete() {
        return validation("the oracle needs a model with a discrete bath");
    }
    let k: usize = system.bath.channels.iter().filter_map(SpectralChannel::modes).map(<[_]>::len).sum();
    if let Some(f) = &cfg.fock {
        return Ok(f.clone());
    }
    if k == 0 {
        return Ok(Vec::new());
    }
    let per = ((MAX_DIMENSION / system.dimension()) as f64).powf(1.0 / k as f64).floor() as usize;
    let d = per.min(20);
    if d < 2 {
        return validation("too many modes for the dense oracle");
    }
    Ok(vec![d; k])
}

fn oracle_csv(system: &OpenSystem, cfg: &ExperimentConfig, times: &[f64], obs: &[Observable], art: &mut Artifacts) -> Result<String> {
    let fock = oracle_fock(system, cfg)?;
    let traj = oracle::run_oracle(system, &fock, times)?;
    art.record("oracle_fock", json!(fock));
    let mut buf = Vec::new();
    traj.write_csv(&mut buf, obs)?;
    Ok(String::from_utf8(buf).expect("CSV output is ASCII"))
}

fn dump_pathways(cfg: &ExperimentConfig, system: &OpenSystem, art: &mut Artifacts) -> Result<()> {
    if cfg.dump_pathways {
        let text = PathwayCache::new(system.dimension(), max_order(cfg)).dump();
        art.write("pathways.txt", &text)?;
    }
    Ok(())
}

/// Bloch vector and purity per requested order, mode entropies on a
/// (time, frequency) grid, and charts.
pub fn run_qubit_decoherence(cfg: &ExperimentConfig, art: &mut Artifacts) -> Result<()> {
    let system = cfg.system()?;
    let obs = default_observables(system.dimension());
    for order in cfg.orders() {
        let sp = spec(cfg, order)?;
        let series = assemble_series(&system, sp, Basis::Local)?;
        let name = format!("series_order{order}.csv");
        let mut text = series_csv(&series, &obs, "")?;
        if cfg.oracle {
            text = merge_csv(&[text, oracle_csv(&system, cfg, &series.times, &obs, art)?])?;
        }
        art.write(&name, &text)?;
        art.record(&format!("dt_order{order}_fs"), json!(sp.dt()));
        art.record(&format!("hermiticity_defect_order{order}"), json!(series.hermiticity_defect(order)));
        art.plot(&format!("purity_order{order}.svg"), &name, &["purity_total"], &format!("Purity, order {order}"), "Tr ρ²")?;
        if system.dimension() == 2 {
            art.plot(
                &format!("bloch_order{order}.svg"),
                &name,
                &["sigma_x_total", "sigma_y_total", "sigma_z_total"],
                &format!("Bloch vector, order {order}"),
                "⟨σ⟩",
            )?;
        }
    }
    entropy_grid(cfg, &system, art)?;
    dump_pathways(cfg, &system, art)
}

fn entropy_grid(cfg: &ExperimentConfig, system: &OpenSystem, art: &mut Artifacts) -> Result<()> {
    if cfg.probe_frequencies.is_empty() {
        return Ok(());
    }
    let sp = spec(cfg, max_order(cfg).min(2))?;
    let idx: Vec<usize> = (0..sp.grid_points).step_by(cfg.entropy_stride).collect();
    let times = sp.times();
    let mut columns = Vec::new();
    for &w in &cfg.probe_frequencies {
        let probe = ModeProbe::at(system, 0, w)?;
        let rdms = mode_rdm(system, &probe, sp, &idx, cfg.n_max)?;
        let s = rdms.iter().map(|r| r.entropy()).collect::<Result<Vec<_>>>()?;
        columns.push((probe.omega, s));
    }
    let mut long = String::from("t_fs,omega_cm,entropy\n");
    let mut wide = String::from("t_fs");
    for (w, _) in &columns {
        let _ = write!(wide, ",S_w{w}");
    }
    wide.push('\n');
    for (r, &i) in idx.iter().enumerate() {
        let _ = write!(wide, "{:.6}", times[i]);
        for (w, s) in &columns {
            let _ = writeln!(long, "{:.6},{w},{:.12e}", times[i], s[r]);
            let _ = write!(wide, ",{:.12e}", s[r]);
        }
        wide.push('\n');
    }
    art.write("entropy.csv", &long)?;
    art.write("entropy_by_mode.csv", &wide)?;
    let names: Vec<String> = columns.iter().map(|(w, _)| format!("S_w{w}")).collect();
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    art.plot("entropy.svg", "entropy_by_mode.csv", &refs, "Mode entanglement entropy", "S_k")
}

/// Copy of `system` with every Drude-Lorentz window intersected with [lo, hi].
fn windowed(system: &OpenSystem, lo: f64, hi: f64) -> Result<OpenSystem> {
    let mut bath = system.bath.clone();
    for ch in &mut bath.channels {
        if let SpectralChannel::DrudeLorentz { window, .. } = ch {
            *window = (window.0.max(lo), window.1.min(hi));
        }
    }
    system.with_bath(bath)
}

fn total_reorganization(system: &OpenSystem) -> f64 {
    system
        .bath
        .channels
        .iter()
        .map(|c| match c {
            SpectralChannel::DrudeLorentz { lambda, omega_c, window } => windowed_reorganization(*lambda, *omega_c, window.0, window.1),
            other => other.reorganization(&system.units),
        })
        .sum()
}

/// Purity of the full, high-cut and low-cut baths.
pub fn run_suppression_scan(cfg: &ExperimentConfig, art: &mut Artifacts) -> Result<()> {
    let system = cfg.system()?;
    let (lambda, omega_c) = system
        .bath
        .channels
        .iter()
        .find_map(|c| match c {
            SpectralChannel::DrudeLorentz { lambda, omega_c, .. } => Some((*lambda, *omega_c)),
            _ => None,
        })
        .ok_or_else(|| crate::Error::Validation("suppression needs a Drude-Lorentz channel".into()))?;
    let (nu_h, nu_l) = suppression_cutoffs(lambda, omega_c, cfg.alpha)?;
    art.record("nu_high_cm", json!(nu_h));
    art.record("nu_low_cm", json!(nu_l));
    let variants = [
        ("full", system.clone()),
        ("high_cut", windowed(&system, 0.0, nu_h)?),
        ("low_cut", windowed(&system, nu_l, f64::INFINITY)?),
    ];
    let order = max_order(cfg);
    let sp = spec(cfg, order)?;
    let mut parts = Vec::new();
    for (name, sys) in &variants {
        art.record(&format!("reorganization_{name}_cm"), json!(total_reorganization(sys)));
        let series = assemble_series(sys, sp, Basis::Local)?;
        let purity = series.total_series(Observable::Purity, order)?;
        let mut t = format!("t_fs,purity_{name}\n");
        for (time, p) in series.times.iter().zip(purity) {
            let _ = writeln!(t, "{time:.6},{p:.12e}");
        }
        parts.push(t);
    }
    art.write("suppression.csv", &merge_csv(&parts)?)?;
    art.plot(
        "suppression.svg",
        "suppression.csv",
        &["purity_full", "purity_high_cut", "purity_low_cut"],
        &format!("Purity under bath suppression, order {order}"),
        "Tr ρ²",
    )?;
    dump_pathways(cfg, &system, art)
}

fn discretized(system: &OpenSystem, cfg: &ExperimentConfig) -> Result<OpenSystem> {
    if system.bath.is_discrete() {
        return Ok(system.clone());
    }
    let d = &cfg.discretization;
    system.with_bath(system.bath.discretized(d.modes, d.omega_max_factor, d.scheme, &system.units)?)
}

fn basis_observables(m: usize) -> Vec<Observable> {
    if m == 2 {
        vec![Observable::SigmaZ, Observable::ReElement(1, 0), Observable::ImElement(1, 0)]
    } else {
        (0..m).map(Observable::Population).collect()
    }
}

/// Local-basis and eigenbasis series side by side.
pub fn run_weak_coupling(cfg: &ExperimentConfig, art: &mut Artifacts) -> Result<()> {
    let system = cfg.system()?;
    let order = max_order(cfg);
    let sp = spec(cfg, order)?;
    let obs = basis_observables(system.dimension());
    let disc = discretized(&system, cfg)?;
    let local = assemble_series(&system, sp, Basis::Local)?;
    let eigen = assemble_series(&disc, sp, Basis::Eigen)?;
    let eig = disc.eigenbasis()?;
    art.record("eigen_vertical_energies_cm", json!(eig.vertical_energies));
    let mut parts = vec![series_csv(&local, &obs, "local_")?, series_csv(&eigen, &obs, "eigen_")?];
    if cfg.oracle {
        parts.push(oracle_csv(&system, cfg, &local.times, &obs, art)?);
    }
    art.write("weak_coupling.csv", &merge_csv(&parts)?)?;
    if system.dimension() == 2 {
        art.plot("sigma_z.svg", "weak_coupling.csv", &["local_sigma_z_total", "eigen_sigma_z_total"], "⟨σ_z⟩", "⟨σ_z⟩")?;
        art.plot(
            "coherence.svg",
            "weak_coupling.csv",
            &["local_re_rho21_total", "eigen_re_rho21_total", "local_im_rho21_total", "eigen_im_rho21_total"],
            "ρ21",
            "ρ21",
        )?;
    }
    dump_pathways(cfg, &system, art)
}

/// Copy of `system` with every off-diagonal coupling set to `delta`.
fn with_tunneling(system: &OpenSystem, delta: f64) -> Result<OpenSystem> {
    let m = system.dimension();
    let c = crate::CMatrix::from_fn(m, m, |i, j| if i == j { C64::ZERO } else { C64::new(delta, 0.0) });
    system.with_couplings(c)
}

/// Donor population for each configured coupling in both bases.
pub fn run_single_mode(cfg: &ExperimentConfig, art: &mut Artifacts) -> Result<()> {
    let base = cfg.system()?;
    let order = max_order(cfg);
    let sp = spec(cfg, order)?;
    let obs = [Observable::Population(0)];
    for &delta in &cfg.tunnelings {
        let system = with_tunneling(&base, delta)?;
        let disc = discretized(&system, cfg)?;
        let local = assemble_series(&system, sp, Basis::Local)?;
        let eigen = assemble_series(&disc, sp, Basis::Eigen)?;
        let mut parts = vec![series_csv(&local, &obs, "local_")?, series_csv(&eigen, &obs, "eigen_")?];
        let mut cols = vec!["local_pop1_total", "eigen_pop1_total"];
        if cfg.oracle {
            parts.push(oracle_csv(&system, cfg, &local.times, &obs, art)?);
            cols.push("oracle_pop1");
        }
        let name = format!("single_mode_delta{delta}.csv");
        art.write(&name, &merge_csv(&parts)?)?;
        art.plot(&format!("single_mode_delta{delta}.svg"), &name, &cols, &format!("Donor population, Δ = {delta} cm⁻¹"), "P_D")?;
    }
    dump_pathways(cfg, &base, art)
}

fn kernel_csv(times: &[f64], f: impl Fn(f64) -> Result<f64>) -> Result<String> {
    let mut s = String::from("t_fs,value\n");
    for &t in times {
        let _ = writeln!(s, "{t:.6},{:.12e}", f(t)?);
    }
    Ok(s)
}

/// Base and state-indexed kernels on the quadrature grid.
pub fn run_kernels(cfg: &ExperimentConfig, art: &mut Artifacts) -> Result<()> {
    debug_assert_eq!(cfg.experiment, Experiment::Kernels);
    let system = cfg.system()?;
    let sp = spec(cfg, 0)?;
    let times = sp.times();
    let kernels = BathKernels::new(&system.bath, &system.units, sp.t_max)?;
    for c in 0..system.bath.channels.len() {
        for (tag, k) in [("h", BaseKernel::H), ("dg", BaseKernel::DeltaG)] {
            let name = format!("kernel_{tag}_ch{c}.csv");
            art.write(&name, &kernel_csv(&times, |t| kernels.eval(c, k, t))?)?;
            art.plot(&format!("kernel_{tag}_ch{c}.svg"), &name, &["value"], &format!("{tag}, channel {c}"), "cm⁻¹")?;
        }
    }
    if system.dimension() >= 2 {
        let idx = StateIndexedKernel::local(&kernels, &system.system)?;
        for (a, b, c, d) in [(0, 1, 0, 1), (0, 0, 1, 1)] {
            let suffix = format!("{a}{b}{c}{d}");
            art.write(&format!("indexed_H_{suffix}.csv"), &kernel_csv(&times, |t| idx.h(a, b, c, d, t))?)?;
            art.write(&format!("indexed_DG_{suffix}.csv"), &kernel_csv(&times, |t| idx.g_delta(a, b, c, d, t))?)?;
        }
        if system.bath.is_discrete() {
            for tag in ["I", "J", "K", "L", "M"] {
                let k = AppendixKernel::parse(tag)?;
                let mut s = String::from("t_fs,value,value_im\n");
                for &t in &times {
                    let v = idx.appendix(k, (0, 1), (0, 1), t)?;
                    let _ = writeln!(s, "{t:.6},{:.12e},{:.12e}", v.re, v.im);
                }
                art.write(&format!("appendix_{tag}_0101.csv"), &s)?;
            }
        }
    }
    dump_pathways(cfg, &system, art)
}
