//! Parameter sweeps over the protocols, with CSV and manifest output.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::circuits::{LogicalBasis, Protocol, ProtocolKind};
use crate::codes::CodeKind;
use crate::noise::{
    fault_probabilities, nominal_hardware, physical_baseline, Encoding, HardwareParams, NoiseError, ParametricReadout,
    ReadoutCurve, ReadoutModel,
};
use crate::num::Real;
use crate::sampler::{run_subset_sampler, SamplerError, ShotPolicy, SubsetRun};

pub const CSV_HEADER: &str = "sweep_value,p_l_lower,p_l_upper,std_err,baseline_bare,baseline_echo,sampled_mass,wall_s";

/// Ratio of the echo coherence time to `T2*` used for the echo baseline.
pub const ECHO_FACTOR: f64 = 10.0;

/// Ratio of LD to ST readout duration in the readout-duration sweep.
pub const LD_ST_READOUT_RATIO: f64 = 10.0;

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("config error: {0}")]
    Config(String),
    #[error("{path}: {msg}")]
    Io { path: String, msg: String },
    #[error(transparent)]
    Noise(#[from] NoiseError),
    #[error(transparent)]
    Sampler(#[from] SamplerError),
}

impl ExperimentError {
    pub fn is_io(&self) -> bool {
        matches!(self, ExperimentError::Io { .. } | ExperimentError::Noise(NoiseError::Io { .. }))
    }
}

fn config_err(msg: impl Into<String>) -> ExperimentError {
    ExperimentError::Config(msg.into())
}

fn io_err(path: &Path, e: std::io::Error) -> ExperimentError {
    ExperimentError::Io { path: path.display().to_string(), msg: e.to_string() }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ExperimentId {
    QecStep,
    SurfacePrep,
    BsPrep,
}

impl ExperimentId {
    pub fn label(self) -> &'static str {
        match self {
            ExperimentId::QecStep => "qec-step",
            ExperimentId::SurfacePrep => "surface-prep",
            ExperimentId::BsPrep => "bs-prep",
        }
    }
}

impl FromStr for ExperimentId {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "qec-step" => Ok(ExperimentId::QecStep),
            "surface-prep" => Ok(ExperimentId::SurfacePrep),
            "bs-prep" => Ok(ExperimentId::BsPrep),
            _ => Err(format!("unknown experiment {s:?}")),
        }
    }
}

/// The quantity varied across grid points.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum SweepVar {
    /// ST integration time; readout infidelity follows the readout model.
    TInt,
    /// ST readout duration with LD locked at ten times it; constant infidelities.
    TReadout,
    /// LD `T2*`, with ST at `T2*/√2`; `inf` disables dephasing.
    T2Star,
    /// Any hardware key such as `st.p_1q` or `cross.p_cz`.
    Key(String),
}

impl SweepVar {
    pub fn label(&self) -> &str {
        match self {
            SweepVar::TInt => "t_int",
            SweepVar::TReadout => "t_readout",
            SweepVar::T2Star => "t2_star",
            SweepVar::Key(k) => k,
        }
    }

    /// Applies grid value `x` to `hw`.
    pub fn apply<T: Real>(&self, hw: &mut HardwareParams<T>, x: T) -> Result<(), ExperimentError> {
        match self {
            SweepVar::TInt => {
                if !(x > T::zero()) {
                    return Err(config_err(format!("t_int must be positive, got {x}")));
                }
                hw.st.t_int = x;
            }
            SweepVar::TReadout => {
                if x < T::zero() {
                    return Err(config_err(format!("t_readout must be non-negative, got {x}")));
                }
                for (q, scale) in [(&mut hw.st, T::one()), (&mut hw.ld, T::lit(LD_ST_READOUT_RATIO))] {
                    let p = q.p_readout()?;
                    q.readout = ReadoutModel::Constant(p);
                    q.t_ramp = T::zero();
                    q.t_int = x * scale;
                }
            }
            SweepVar::T2Star => {
                if !(x > T::zero()) {
                    return Err(config_err(format!("T2* must be positive, got {x}")));
                }
                hw.ld.t2_star = x;
                hw.st.t2_star = x / T::SQRT_2();
            }
            SweepVar::Key(k) => hw.set(k, &x.as_f64().to_string())?,
        }
        Ok(())
    }
}

impl FromStr for SweepVar {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "t_int" => SweepVar::TInt,
            "t_readout" => SweepVar::TReadout,
            "t2_star" | "t2" => SweepVar::T2Star,
            k => {
                let mut probe = nominal_hardware::<f64>();
                probe.set(k, "0.001").map_err(|e| e.to_string())?;
                SweepVar::Key(k.to_string())
            }
        })
    }
}

/// Parses `a,b,c`, `linspace:a:b:n` or `logspace:a:b:n` (endpoints inclusive).
pub fn parse_grid(s: &str) -> Result<Vec<f64>, String> {
    let spaced = |rest: &str, log: bool| -> Result<Vec<f64>, String> {
        let parts: Vec<&str> = rest.split(':').collect();
        if parts.len() != 3 {
            return Err(format!("expected start:stop:count in {s:?}"));
        }
        let a: f64 = parts[0].parse().map_err(|_| format!("bad start in {s:?}"))?;
        let b: f64 = parts[1].parse().map_err(|_| format!("bad stop in {s:?}"))?;
        let n: usize = parts[2].parse().map_err(|_| format!("bad count in {s:?}"))?;
        if n == 0 || (log && (a <= 0.0 || b <= 0.0)) {
            return Err(format!("invalid range {s:?}"));
        }
        Ok((0..n)
            .map(|i| {
                let f = if n == 1 { 0.0 } else { i as f64 / (n - 1) as f64 };
                if log {
                    (a.ln() + f * (b.ln() - a.ln())).exp()
                } else {
                    a + f * (b - a)
                }
            })
            .collect())
    };
    let grid = if let Some(rest) = s.strip_prefix("linspace:") {
        spaced(rest, false)?
    } else if let Some(rest) = s.strip_prefix("logspace:") {
        spaced(rest, true)?
    } else {
        s.split(',')
            .map(|v| v.trim().parse::<f64>().map_err(|_| format!("bad grid value {v:?}")))
            .collect::<Result<Vec<_>, _>>()?
    };
    validate_grid(&grid)?;
    Ok(grid)
}

fn validate_grid(grid: &[f64]) -> Result<(), String> {
    if grid.is_empty() {
        return Err("sweep grid is empty".into());
    }
    if grid.iter().any(|v| v.is_nan()) || grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err("sweep grid must be strictly increasing".into());
    }
    Ok(())
}

/// Source of the ST readout infidelity.
#[derive(Clone, Debug, PartialEq)]
pub enum ReadoutSelect {
    Fallback,
    Constant(f64),
    Curve(PathBuf),
}

impl FromStr for ReadoutSelect {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "fallback" {
            return Ok(ReadoutSelect::Fallback);
        }
        if let Some(p) = s.strip_prefix("const:") {
            let v: f64 = p.parse().map_err(|_| format!("bad constant readout {p:?}"))?;
            if !(0.0..=1.0).contains(&v) {
                return Err(format!("readout infidelity {v} outside [0, 1]"));
            }
            return Ok(ReadoutSelect::Constant(v));
        }
        Ok(ReadoutSelect::Curve(PathBuf::from(s)))
    }
}

impl std::fmt::Display for ReadoutSelect {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ReadoutSelect::Fallback => write!(f, "fallback"),
            ReadoutSelect::Constant(p) => write!(f, "const:{p}"),
            ReadoutSelect::Curve(p) => write!(f, "{}", p.display()),
        }
    }
}

impl ReadoutSelect {
    pub fn model<T: Real>(&self) -> Result<ReadoutModel<T>, ExperimentError> {
        Ok(match self {
            ReadoutSelect::Fallback => ReadoutModel::Parametric(ParametricReadout::fallback()),
            ReadoutSelect::Constant(p) => ReadoutModel::Constant(T::lit(*p)),
            ReadoutSelect::Curve(path) => ReadoutModel::Digitized(ReadoutCurve::load(path)?),
        })
    }
}

/// Parses `base[:cap[:rel_target]]` or `fixed:N`.
pub fn parse_shot_policy(s: &str) -> Result<ShotPolicy, String> {
    if let Some(n) = s.strip_prefix("fixed:") {
        let n: u64 = n.parse().map_err(|_| format!("bad shot count {n:?}"))?;
        if n == 0 {
            return Err("shots must be positive".into());
        }
        return Ok(ShotPolicy::fixed(n));
    }
    let parts: Vec<&str> = s.split(':').collect();
    let mut policy = ShotPolicy::default();
    let num = |v: &str| v.parse::<u64>().map_err(|_| format!("bad shot count {v:?}"));
    match parts.as_slice() {
        [b] => policy.base = num(b)?,
        [b, c] => (policy.base, policy.cap) = (num(b)?, num(c)?),
        [b, c, r] => {
            (policy.base, policy.cap) = (num(b)?, num(c)?);
            policy.rel_target = r.parse().map_err(|_| format!("bad relative target {r:?}"))?;
        }
        _ => return Err(format!("bad shot policy {s:?}")),
    }
    if policy.base == 0 || policy.cap < policy.base || !(policy.rel_target > 0.0) {
        return Err(format!("invalid shot policy {s:?}"));
    }
    Ok(policy)
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub experiment: ExperimentId,
    pub code: CodeKind,
    pub encoding: Encoding,
    /// Target of the surface-code preparation.
    pub basis: LogicalBasis,
    pub sweep: Option<(SweepVar, Vec<f64>)>,
    pub overrides: Vec<(String, String)>,
    pub readout: ReadoutSelect,
    pub seed: u64,
    pub policy: ShotPolicy,
    pub threshold: f64,
    pub time_budget: Option<Duration>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            experiment: ExperimentId::QecStep,
            code: CodeKind::Surface17,
            encoding: Encoding::Hybrid,
            basis: LogicalBasis::Plus,
            sweep: None,
            overrides: Vec::new(),
            readout: ReadoutSelect::Fallback,
            seed: 0,
            policy: ShotPolicy::default(),
            threshold: 1e-6,
            time_budget: None,
        }
    }
}

impl ExperimentConfig {
    pub fn protocol_kind(&self) -> Result<ProtocolKind, ExperimentError> {
        match (self.experiment, self.code) {
            (ExperimentId::QecStep, c) => Ok(ProtocolKind::QecStep(c)),
            (ExperimentId::SurfacePrep, CodeKind::Surface17) => Ok(ProtocolKind::SurfacePrep(self.basis)),
            (ExperimentId::BsPrep, CodeKind::BaconShor17) => Ok(ProtocolKind::BsPrep),
            (e, c) => Err(config_err(format!("experiment {} does not apply to {}", e.label(), c.label()))),
        }
    }

    /// Hardware parameters before the sweep value is applied.
    pub fn base_hardware<T: Real>(&self) -> Result<HardwareParams<T>, ExperimentError> {
        let mut hw = nominal_hardware::<T>();
        hw.st.readout = self.readout.model()?;
        for (k, v) in &self.overrides {
            hw.set(k, v)?;
        }
        hw.validate()?;
        Ok(hw)
    }

    pub fn grid(&self) -> Vec<f64> {
        match &self.sweep {
            Some((_, g)) => g.clone(),
            None => vec![f64::NAN],
        }
    }

    pub fn validate(&self) -> Result<(), ExperimentError> {
        self.protocol_kind()?;
        if let Some((_, grid)) = &self.sweep {
            validate_grid(grid).map_err(config_err)?;
        }
        if !(self.threshold > 0.0 && self.threshold < 1.0) {
            return Err(config_err(format!("threshold {} outside (0, 1)", self.threshold)));
        }
        self.base_hardware::<f64>()?;
        Ok(())
    }

    /// Canonical text form; its hash identifies the run.
    pub fn canonical(&self) -> String {
        let mut s = String::new();
        writeln!(s, "experiment={}", self.experiment.label()).unwrap();
        writeln!(s, "code={}", self.code.label()).unwrap();
        writeln!(s, "encoding={}", self.encoding.label()).unwrap();
        writeln!(s, "basis={:?}", self.basis).unwrap();
        match &self.sweep {
            Some((v, g)) => {
                let g: Vec<String> = g.iter().map(|x| x.to_string()).collect();
                writeln!(s, "sweep={}={}", v.label(), g.join(",")).unwrap();
            }
            None => writeln!(s, "sweep=").unwrap(),
        }
        for (k, v) in &self.overrides {
            writeln!(s, "set.{k}={v}").unwrap();
        }
        writeln!(s, "readout={}", self.readout).unwrap();
        writeln!(s, "seed={}", self.seed).unwrap();
        writeln!(s, "shots={}:{}:{}", self.policy.base, self.policy.cap, self.policy.rel_target).unwrap();
        writeln!(s, "threshold={}", self.threshold).unwrap();
        s
    }

    pub fn hash(&self) -> String {
        format!("{:x}", Sha256::digest(self.canonical().as_bytes()))
    }
}

/// One grid point of a sweep. Without a sweep the single row reports the
/// ST integration time as its `sweep_value`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SweepRow {
    pub sweep_value: f64,
    pub p_l_lower: f64,
    pub p_l_upper: f64,
    pub std_err: f64,
    pub baseline_bare: f64,
    pub baseline_echo: f64,
    pub sampled_mass: f64,
    pub wall_s: f64,
}

#[derive(Clone, Debug)]
pub struct PointResult<T> {
    pub row: SweepRow,
    pub run: SubsetRun<T>,
    pub probs: [T; 8],
}

#[derive(Clone, Debug)]
pub struct ExperimentResult<T> {
    pub config: ExperimentConfig,
    pub points: Vec<PointResult<T>>,
}

impl<T: Real> ExperimentResult<T> {
    pub fn rows(&self) -> Vec<SweepRow> {
        self.points.iter().map(|p| p.row).collect()
    }

    pub fn manifest(&self) -> String {
        let mut s = self.config.canonical();
        writeln!(s, "config_hash={}", self.config.hash()).unwrap();
        writeln!(s, "version={}", env!("CARGO_PKG_VERSION")).unwrap();
        for (i, p) in self.points.iter().enumerate() {
            writeln!(s, "point.{i}.value={}", p.row.sweep_value).unwrap();
            writeln!(s, "point.{i}.subsets={}", p.run.estimates.len()).unwrap();
            writeln!(s, "point.{i}.shots={}", p.run.total_shots()).unwrap();
            writeln!(s, "point.{i}.partial={}", p.run.partial).unwrap();
            let probs: Vec<String> = p.probs.iter().map(|x| x.as_f64().to_string()).collect();
            writeln!(s, "point.{i}.probs={}", probs.join(",")).unwrap();
        }
        s
    }
}

/// Evaluates one grid point.
pub fn run_point<T: Real>(config: &ExperimentConfig, x: f64) -> Result<PointResult<T>, ExperimentError> {
    let start = Instant::now();
    let mut hw = config.base_hardware::<T>()?;
    if let Some((var, _)) = &config.sweep {
        var.apply(&mut hw, T::lit(x))?;
    }
    hw.validate()?;
    let params = hw.noise(config.encoding);
    let protocol = Protocol::new(config.protocol_kind()?, &params);
    let probs = fault_probabilities(&params, &protocol)?;
    let deadline = config.time_budget.map(|b| start + b);
    let run = run_subset_sampler(&protocol, &probs, T::lit(config.threshold), config.policy, config.seed, deadline)?;
    let t_total = protocol.max_duration();
    let t2 = hw.ld.t2_star;
    let (bare, echo) = if t2.is_infinite() {
        (T::zero(), T::zero())
    } else {
        (physical_baseline(t_total, t2)?, physical_baseline(t_total, t2 * T::lit(ECHO_FACTOR))?)
    };
    let b = run.bounds;
    let row = SweepRow {
        sweep_value: if config.sweep.is_some() { x } else { hw.st.t_int.as_f64() },
        p_l_lower: b.lower.as_f64(),
        p_l_upper: b.upper.as_f64(),
        std_err: b.std_err.as_f64(),
        baseline_bare: bare.as_f64(),
        baseline_echo: echo.as_f64(),
        sampled_mass: b.sampled_mass.as_f64(),
        wall_s: start.elapsed().as_secs_f64(),
    };
    Ok(PointResult { row, run, probs })
}

/// Runs every grid point (in parallel) and collects them in grid order.
pub fn run_experiment<T: Real>(config: &ExperimentConfig) -> Result<ExperimentResult<T>, ExperimentError> {
    config.validate()?;
    let points = config.grid().par_iter().map(|&x| run_point::<T>(config, x)).collect::<Result<Vec<_>, _>>()?;
    Ok(ExperimentResult { config: config.clone(), points })
}

pub fn format_csv(rows: &[SweepRow]) -> String {
    let mut s = String::from(CSV_HEADER);
    s.push('\n');
    for r in rows {
        writeln!(
            s,
            "{},{},{},{},{},{},{},{}",
            r.sweep_value,
            r.p_l_lower,
            r.p_l_upper,
            r.std_err,
            r.baseline_bare,
            r.baseline_echo,
            r.sampled_mass,
            r.wall_s
        )
        .unwrap();
    }
    s
}

pub fn parse_csv(text: &str) -> Result<Vec<SweepRow>, String> {
    let mut lines = text.lines();
    if lines.next().map(str::trim) != Some(CSV_HEADER) {
        return Err("missing or wrong CSV header".into());
    }
    lines
        .filter(|l| !l.trim().is_empty())
        .enumerate()
        .map(|(i, l)| {
            let v: Vec<f64> = l
                .split(',')
                .map(|f| f.trim().parse::<f64>().map_err(|_| format!("row {}: bad number {f:?}", i + 1)))
                .collect::<Result<_, _>>()?;
            if v.len() != 8 {
                return Err(format!("row {}: expected 8 fields, got {}", i + 1, v.len()));
            }
            Ok(SweepRow {
                sweep_value: v[0],
                p_l_lower: v[1],
                p_l_upper: v[2],
                std_err: v[3],
                baseline_bare: v[4],
                baseline_echo: v[5],
                sampled_mass: v[6],
                wall_s: v[7],
            })
        })
        .collect()
}

pub fn emit_csv(rows: &[SweepRow], path: &Path) -> Result<(), ExperimentError> {
    std::fs::write(path, format_csv(rows)).map_err(|e| io_err(path, e))
}

pub fn emit_manifest<T: Real>(result: &ExperimentResult<T>, path: &Path) -> Result<(), ExperimentError> {
    std::fs::write(path, result.manifest()).map_err(|e| io_err(path, e))
}

/// Writes `results.csv`, `manifest.txt` and one `ledger_<i>.csv` per point.
pub fn write_outputs<T: Real>(result: &ExperimentResult<T>, dir: &Path) -> Result<(), ExperimentError> {
    std::fs::create_dir_all(dir).map_err(|e| io_err(dir, e))?;
    emit_csv(&result.rows(), &dir.join("results.csv"))?;
    emit_manifest(result, &dir.join("manifest.txt"))?;
    for (i, p) in result.points.iter().enumerate() {
        let path = dir.join(format!("ledger_{i}.csv"));
        std::fs::write(&path, p.run.ledger_csv()).map_err(|e| io_err(&path, e))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grids() {
        assert_eq!(parse_grid("1,2,3").unwrap(), vec![1.0, 2.0, 3.0]);
        let g = parse_grid("logspace:0.1:10:3").unwrap();
        assert!((g[1] - 1.0).abs() < 1e-12 && (g[2] - 10.0).abs() < 1e-12);
        assert_eq!(parse_grid("linspace:0:1:3").unwrap(), vec![0.0, 0.5, 1.0]);
        assert_eq!(parse_grid("1,inf").unwrap(), vec![1.0, f64::INFINITY]);
        assert!(parse_grid("2,1").is_err());
        assert!(parse_grid("").is_err());
        assert!(parse_grid("logspace:0:1:3").is_err());
    }

    #[test]
    fn sweep_vars() {
        assert_eq!("t_int".parse::<SweepVar>().unwrap(), SweepVar::TInt);
        assert_eq!("cross.p_cz".parse::<SweepVar>().unwrap(), SweepVar::Key("cross.p_cz".into()));
        assert!("nope".parse::<SweepVar>().is_err());
        let mut hw = nominal_hardware::<f64>();
        SweepVar::TReadout.apply(&mut hw, 1.0).unwrap();
        assert_eq!(hw.st.t_readout(), 1.0);
        assert_eq!(hw.ld.t_readout(), 10.0);
        assert!((hw.st.p_readout().unwrap() - 4e-4).abs() < 1e-12);
        assert_eq!(hw.ld.p_readout().unwrap(), 2.4e-3);
        SweepVar::T2Star.apply(&mut hw, f64::INFINITY).unwrap();
        assert!(hw.st.t2_star.is_infinite());
        assert!(SweepVar::T2Star.apply(&mut hw, 0.0).is_err());
    }

    #[test]
    fn shot_policies() {
        assert_eq!(parse_shot_policy("fixed:100").unwrap(), ShotPolicy::fixed(100));
        let p = parse_shot_policy("500:4000:0.1").unwrap();
        assert_eq!((p.base, p.cap, p.rel_target), (500, 4000, 0.1));
        assert!(parse_shot_policy("0").is_err());
        assert!(parse_shot_policy("100:10").is_err());
    }

    #[test]
    fn config_mismatch_rejected() {
        let c = ExperimentConfig { experiment: ExperimentId::BsPrep, code: CodeKind::Surface17, ..Default::default() };
        assert!(matches!(c.validate(), Err(ExperimentError::Config(_))));
        let c = ExperimentConfig { overrides: vec![("ld.nope".into(), "1".into())], ..Default::default() };
        assert!(c.validate().is_err());
    }

    #[test]
    fn csv_round_trip() {
        assert_eq!(format_csv(&[]), format!("{CSV_HEADER}\n"));
        let rows = vec![SweepRow {
            sweep_value: 0.1 + 0.2,
            p_l_lower: 1.0 / 3.0,
            p_l_upper: 2e-300,
            std_err: 0.0,
            baseline_bare: f64::INFINITY,
            baseline_echo: 1e-17,
            sampled_mass: 0.999999999,
            wall_s: 12.5,
        }];
        assert_eq!(parse_csv(&format_csv(&rows)).unwrap(), rows);
        assert!(parse_csv("a,b\n").is_err());
    }
}
