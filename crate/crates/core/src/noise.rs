//! Hardware parameters, the Gaussian dephasing law and the readout model.
//!
//! Times are in microseconds throughout.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use thiserror::Error;

use crate::num::Real;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NoiseError {
    #[error("duration must be non-negative, got {0}")]
    NegativeTime(f64),
    #[error("integration time must be positive, got {0}")]
    NonPositiveIntegration(f64),
    #[error("T2* must be positive, got {0}")]
    NonPositiveT2(f64),
    #[error("probability {name} = {value} outside [0, 1]")]
    Probability { name: String, value: f64 },
    #[error("readout curve needs at least 2 samples with strictly increasing t_int")]
    BadCurve,
    #[error("readout curve line {line}: {msg}")]
    CurveParse { line: usize, msg: String },
    #[error("unknown parameter key {0:?}")]
    UnknownKey(String),
    #[error("bad value for {key}: {value:?}")]
    BadValue { key: String, value: String },
    #[error("category {category} mixes probabilities {a} and {b}")]
    MixedCategory { category: usize, a: f64, b: f64 },
    #[error("{path}: {msg}")]
    Io { path: String, msg: String },
}

/// Idle dephasing probability `½(1 − exp(−(t/T2*)²))`.
pub fn p_idle<T: Real>(t: T, t2_star: T) -> Result<T, NoiseError> {
    if t < T::zero() {
        return Err(NoiseError::NegativeTime(t.as_f64()));
    }
    if !(t2_star > T::zero()) {
        return Err(NoiseError::NonPositiveT2(t2_star.as_f64()));
    }
    let r = t / t2_star;
    Ok(T::lit(0.5) * -(-(r * r)).exp_m1())
}

/// Total readout duration.
pub fn readout_time<T: Real>(t_ramp: T, t_int: T) -> T {
    t_ramp + t_int
}

/// Infidelity of an unprotected qubit in `|+⟩` after dephasing for `t_total`.
pub fn physical_baseline<T: Real>(t_total: T, t2: T) -> Result<T, NoiseError> {
    p_idle(t_total, t2)
}

/// Monotone piecewise-cubic interpolant through `(t_int, infidelity)` samples.
#[derive(Clone, Debug, PartialEq)]
pub struct ReadoutCurve<T> {
    t: Vec<T>,
    p: Vec<T>,
    slope: Vec<T>,
}

impl<T: Real> ReadoutCurve<T> {
    pub fn new(samples: &[(T, T)]) -> Result<Self, NoiseError> {
        if samples.len() < 2 || samples.windows(2).any(|w| !(w[1].0 > w[0].0)) {
            return Err(NoiseError::BadCurve);
        }
        for &(_, p) in samples {
            check_probability("infidelity", p)?;
        }
        let t: Vec<T> = samples.iter().map(|s| s.0).collect();
        let p: Vec<T> = samples.iter().map(|s| s.1).collect();
        let slope = fritsch_carlson(&t, &p);
        Ok(Self { t, p, slope })
    }

    pub fn samples(&self) -> impl Iterator<Item = (T, T)> + '_ {
        self.t.iter().copied().zip(self.p.iter().copied())
    }

    /// Evaluates the interpolant, clamping outside the sampled range.
    pub fn eval(&self, x: T) -> T {
        let n = self.t.len();
        if x <= self.t[0] {
            return self.p[0];
        }
        if x >= self.t[n - 1] {
            return self.p[n - 1];
        }
        let k = self.t.partition_point(|&ti| ti <= x) - 1;
        let h = self.t[k + 1] - self.t[k];
        let s = (x - self.t[k]) / h;
        let (s2, s3) = (s * s, s * s * s);
        let two = T::lit(2.0);
        let three = T::lit(3.0);
        let h00 = two * s3 - three * s2 + T::one();
        let h10 = s3 - two * s2 + s;
        let h01 = -two * s3 + three * s2;
        let h11 = s3 - s2;
        h00 * self.p[k] + h10 * h * self.slope[k] + h01 * self.p[k + 1] + h11 * h * self.slope[k + 1]
    }

    /// Parses `t_int_us,infidelity` CSV text.
    pub fn parse(text: &str) -> Result<Self, NoiseError> {
        let mut samples = Vec::new();
        let mut header_seen = false;
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split(',').map(str::trim).collect();
            if !header_seen {
                header_seen = true;
                if fields == ["t_int_us", "infidelity"] {
                    continue;
                }
                return Err(NoiseError::CurveParse { line: i + 1, msg: "expected header t_int_us,infidelity".into() });
            }
            if fields.len() != 2 {
                return Err(NoiseError::CurveParse {
                    line: i + 1,
                    msg: format!("expected 2 fields, got {}", fields.len()),
                });
            }
            let num = |s: &str| {
                s.parse::<f64>().map(T::lit).map_err(|e| NoiseError::CurveParse { line: i + 1, msg: e.to_string() })
            };
            samples.push((num(fields[0])?, num(fields[1])?));
        }
        Self::new(&samples)
    }

    pub fn load(path: &Path) -> Result<Self, NoiseError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| NoiseError::Io { path: path.display().to_string(), msg: e.to_string() })?;
        Self::parse(&text)
    }
}

fn fritsch_carlson<T: Real>(t: &[T], p: &[T]) -> Vec<T> {
    let n = t.len();
    let delta: Vec<T> = (0..n - 1).map(|k| (p[k + 1] - p[k]) / (t[k + 1] - t[k])).collect();
    let mut m = vec![T::zero(); n];
    m[0] = delta[0];
    m[n - 1] = delta[n - 2];
    for k in 1..n - 1 {
        m[k] = if delta[k - 1] * delta[k] <= T::zero() { T::zero() } else { (delta[k - 1] + delta[k]) / T::lit(2.0) };
    }
    let three = T::lit(3.0);
    for k in 0..n - 1 {
        if delta[k] == T::zero() {
            m[k] = T::zero();
            m[k + 1] = T::zero();
            continue;
        }
        let a = m[k] / delta[k];
        let b = m[k + 1] / delta[k];
        let r = a * a + b * b;
        if r > T::lit(9.0) {
            let tau = three / r.sqrt();
            m[k] = tau * a * delta[k];
            m[k + 1] = tau * b * delta[k];
        }
    }
    m
}

/// `p(t) = a·exp(−t/τ) + b·t`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ParametricReadout<T> {
    pub a: T,
    pub tau: T,
    pub b: T,
}

impl<T: Real> ParametricReadout<T> {
    /// Fits `τ` and `b` for a given `a = p(0)` so that `p(t_ref) = p_ref` and
    /// the minimum sits at `t_min`.
    pub fn calibrate(p0: T, t_ref: T, p_ref: T, t_min: T) -> Result<Self, NoiseError> {
        let model = |tau: T| {
            let b = p0 / tau * (-t_min / tau).exp();
            Self { a: p0, tau, b }
        };
        let resid = |tau: T| model(tau).eval(t_ref) - p_ref;
        // resid increases with tau on the bracket below.
        let (mut lo, mut hi) = (t_min / T::lit(200.0), t_min);
        if resid(lo) > T::zero() || resid(hi) < T::zero() {
            return Err(NoiseError::BadValue { key: "readout calibration".into(), value: format!("{p_ref}") });
        }
        for _ in 0..200 {
            let mid = (lo + hi) / T::lit(2.0);
            if resid(mid) > T::zero() {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Ok(model((lo + hi) / T::lit(2.0)))
    }

    /// Default calibration: `p(2.0) = 4e-4`, minimum at 1.4 µs, `p(0) = ½`.
    pub fn fallback() -> Self {
        Self::calibrate(T::lit(0.5), T::lit(2.0), T::lit(4e-4), T::lit(1.4)).expect("fallback calibration brackets")
    }

    pub fn eval(&self, t: T) -> T {
        self.a * (-t / self.tau).exp() + self.b * t
    }

    pub fn argmin(&self) -> T {
        self.tau * (self.a / (self.b * self.tau)).ln()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum ReadoutModel<T> {
    Constant(T),
    Parametric(ParametricReadout<T>),
    Digitized(ReadoutCurve<T>),
}

impl<T: Real> ReadoutModel<T> {
    pub fn infidelity(&self, t_int: T) -> Result<T, NoiseError> {
        if !(t_int > T::zero()) {
            if let ReadoutModel::Constant(p) = self {
                return Ok(*p);
            }
            return Err(NoiseError::NonPositiveIntegration(t_int.as_f64()));
        }
        let p = match self {
            ReadoutModel::Constant(p) => *p,
            ReadoutModel::Parametric(m) => m.eval(t_int),
            ReadoutModel::Digitized(c) => c.eval(t_int),
        };
        Ok(p.max(T::zero()).min(T::one()))
    }
}

impl<T: Real> fmt::Display for ReadoutModel<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ReadoutModel::Constant(p) => write!(f, "const:{p}"),
            ReadoutModel::Parametric(m) => write!(f, "fallback(a={},tau={},b={})", m.a, m.tau, m.b),
            ReadoutModel::Digitized(c) => write!(f, "curve({} samples)", c.t.len()),
        }
    }
}

/// Readout infidelity of a model at an integration time.
pub fn readout_infidelity<T: Real>(model: &ReadoutModel<T>, t_int: T) -> Result<T, NoiseError> {
    model.infidelity(t_int)
}

/// Parameters of one qubit flavour.
#[derive(Clone, Debug, PartialEq)]
pub struct QubitParams<T> {
    pub t2_star: T,
    pub p_1q: T,
    pub p_cz: T,
    pub t_cz: T,
    pub p_prep: T,
    pub t_prep: T,
    pub t_ramp: T,
    pub t_int: T,
    pub readout: ReadoutModel<T>,
}

impl<T: Real> QubitParams<T> {
    pub fn t_readout(&self) -> T {
        readout_time(self.t_ramp, self.t_int)
    }

    pub fn p_readout(&self) -> Result<T, NoiseError> {
        self.readout.infidelity(self.t_int)
    }

    pub fn validate(&self) -> Result<(), NoiseError> {
        for (name, p) in [("p_1q", self.p_1q), ("p_cz", self.p_cz), ("p_prep", self.p_prep)] {
            check_probability(name, p)?;
        }
        for t in [self.t_cz, self.t_prep, self.t_ramp, self.t_int] {
            if t < T::zero() {
                return Err(NoiseError::NegativeTime(t.as_f64()));
            }
        }
        if !(self.t2_star > T::zero()) {
            return Err(NoiseError::NonPositiveT2(self.t2_star.as_f64()));
        }
        check_probability("p_readout", self.p_readout()?)
    }
}

fn check_probability<T: Real>(name: &str, p: T) -> Result<(), NoiseError> {
    if p >= T::zero() && p <= T::one() {
        Ok(())
    } else {
        Err(NoiseError::Probability { name: name.into(), value: p.as_f64() })
    }
}

/// Nominal parameters for the two qubit flavours.
pub fn ld_defaults<T: Real>() -> QubitParams<T> {
    QubitParams {
        t2_star: T::lit(21.0),
        p_1q: T::lit(4e-4),
        p_cz: T::lit(2e-3),
        t_cz: T::lit(0.040),
        p_prep: T::lit(6.5e-3),
        t_prep: T::zero(),
        t_ramp: T::zero(),
        t_int: T::lit(24.0),
        readout: ReadoutModel::Constant(T::lit(2.4e-3)),
    }
}

pub fn st_defaults<T: Real>() -> QubitParams<T> {
    QubitParams {
        t2_star: T::lit(21.0) / T::SQRT_2(),
        p_1q: T::lit(4e-3),
        p_cz: T::lit(4e-3),
        t_cz: T::lit(0.040),
        p_prep: T::lit(4e-3),
        t_prep: T::zero(),
        t_ramp: T::lit(0.4),
        t_int: T::lit(2.0),
        readout: ReadoutModel::Parametric(ParametricReadout::fallback()),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Encoding {
    AllLd,
    Hybrid,
}

impl Encoding {
    pub fn label(self) -> &'static str {
        match self {
            Encoding::AllLd => "all-ld",
            Encoding::Hybrid => "hybrid",
        }
    }
}

impl FromStr for Encoding {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "all-ld" | "allld" | "ld" => Ok(Encoding::AllLd),
            "hybrid" => Ok(Encoding::Hybrid),
            _ => Err(format!("unknown encoding {s:?}")),
        }
    }
}

/// How a category whose locations have different probabilities is resolved.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MixedPolicy {
    /// Use the largest probability for every location of the category.
    Max,
    /// Reject with [`NoiseError::MixedCategory`].
    Strict,
}

/// Both qubit flavours plus the LD–ST two-qubit gate.
#[derive(Clone, Debug, PartialEq)]
pub struct HardwareParams<T> {
    pub ld: QubitParams<T>,
    pub st: QubitParams<T>,
    pub p_cz_cross: T,
    pub policy: MixedPolicy,
}

impl<T: Real> Default for HardwareParams<T> {
    fn default() -> Self {
        nominal_hardware()
    }
}

pub fn nominal_hardware<T: Real>() -> HardwareParams<T> {
    HardwareParams { ld: ld_defaults(), st: st_defaults(), p_cz_cross: T::lit(4e-3), policy: MixedPolicy::Max }
}

impl<T: Real> HardwareParams<T> {
    pub fn noise(&self, encoding: Encoding) -> NoiseParams<T> {
        let ancilla = match encoding {
            Encoding::AllLd => self.ld.clone(),
            Encoding::Hybrid => self.st.clone(),
        };
        let p_cz_cross = match encoding {
            Encoding::AllLd => self.ld.p_cz,
            Encoding::Hybrid => self.p_cz_cross,
        };
        NoiseParams { encoding, data: self.ld.clone(), ancilla, p_cz_cross, policy: self.policy }
    }

    /// Sets one `ld.` / `st.` / `cross.` key.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), NoiseError> {
        let bad = || NoiseError::BadValue { key: key.into(), value: value.into() };
        if key == "policy" {
            self.policy = match value {
                "max" => MixedPolicy::Max,
                "strict" => MixedPolicy::Strict,
                _ => return Err(bad()),
            };
            return Ok(());
        }
        let num = || -> Result<T, NoiseError> {
            match value.trim() {
                "inf" | "infinity" | "∞" => Ok(T::infinity()),
                v => v.parse::<f64>().map(T::lit).map_err(|_| bad()),
            }
        };
        if key == "cross.p_cz" {
            self.p_cz_cross = num()?;
            return Ok(());
        }
        let (prefix, field) = key.split_once('.').ok_or_else(|| NoiseError::UnknownKey(key.into()))?;
        let q = match prefix {
            "ld" => &mut self.ld,
            "st" => &mut self.st,
            _ => return Err(NoiseError::UnknownKey(key.into())),
        };
        match field {
            "t2_star" => q.t2_star = num()?,
            "p_1q" => q.p_1q = num()?,
            "p_cz" => q.p_cz = num()?,
            "t_cz" => q.t_cz = num()?,
            "p_prep" => q.p_prep = num()?,
            "t_prep" => q.t_prep = num()?,
            "t_ramp" => q.t_ramp = num()?,
            "t_int" => q.t_int = num()?,
            "p_readout" => q.readout = ReadoutModel::Constant(num()?),
            _ => return Err(NoiseError::UnknownKey(key.into())),
        }
        Ok(())
    }

    /// Applies a flat `key = value` text; `#` starts a comment.
    pub fn apply_config(&mut self, text: &str) -> Result<(), NoiseError> {
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| NoiseError::BadValue { key: format!("line {}", i + 1), value: raw.to_string() })?;
            self.set(k.trim(), v.trim())?;
        }
        self.validate()
    }

    pub fn load_config(&mut self, path: &Path) -> Result<(), NoiseError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| NoiseError::Io { path: path.display().to_string(), msg: e.to_string() })?;
        self.apply_config(&text)
    }

    pub fn validate(&self) -> Result<(), NoiseError> {
        self.ld.validate()?;
        self.st.validate()?;
        check_probability("cross.p_cz", self.p_cz_cross)
    }

    /// Flat listing of every key, in the format read by [`Self::apply_config`].
    pub fn to_config(&self) -> BTreeMap<String, String> {
        let mut out = BTreeMap::new();
        for (prefix, q) in [("ld", &self.ld), ("st", &self.st)] {
            for (k, v) in [
                ("t2_star", q.t2_star),
                ("p_1q", q.p_1q),
                ("p_cz", q.p_cz),
                ("t_cz", q.t_cz),
                ("p_prep", q.p_prep),
                ("t_prep", q.t_prep),
                ("t_ramp", q.t_ramp),
                ("t_int", q.t_int),
            ] {
                out.insert(format!("{prefix}.{k}"), format!("{v}"));
            }
            out.insert(format!("{prefix}.readout"), q.readout.to_string());
        }
        out.insert("cross.p_cz".into(), format!("{}", self.p_cz_cross));
        out.insert("policy".into(), format!("{:?}", self.policy).to_lowercase());
        out
    }
}

/// Parameters resolved for one encoding: data qubits are LD, ancillas are
/// LD or ST.
#[derive(Clone, Debug, PartialEq)]
pub struct NoiseParams<T> {
    pub encoding: Encoding,
    pub data: QubitParams<T>,
    pub ancilla: QubitParams<T>,
    pub p_cz_cross: T,
    pub policy: MixedPolicy,
}

impl<T: Real> NoiseParams<T> {
    pub fn nominal(encoding: Encoding) -> Self {
        nominal_hardware().noise(encoding)
    }

    /// CZ layer duration (the slower of the two flavours).
    pub fn t_cz(&self) -> T {
        self.data.t_cz.max(self.ancilla.t_cz)
    }

    pub fn t_prep(&self) -> T {
        self.ancilla.t_prep
    }

    pub fn t_readout(&self) -> T {
        self.ancilla.t_readout()
    }

    /// Duration of one syndrome round.
    pub fn round_duration(&self) -> T {
        T::lit(8.0) * self.t_cz() + self.t_readout() + self.t_prep()
    }

    pub fn qubit(&self, role: QubitRole) -> &QubitParams<T> {
        match role {
            QubitRole::Data => &self.data,
            QubitRole::Ancilla => &self.ancilla,
        }
    }

    pub fn p_cz_between(&self, a: QubitRole, b: QubitRole) -> T {
        match (a, b) {
            (QubitRole::Data, QubitRole::Data) => self.data.p_cz,
            (QubitRole::Ancilla, QubitRole::Ancilla) => self.ancilla.p_cz,
            _ => self.p_cz_cross,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum QubitRole {
    Data,
    Ancilla,
}

/// The eight independent fault parameters of the subset sampler.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FaultCategory {
    Prep = 0,
    Measure = 1,
    Gate1q = 2,
    Cz = 3,
    IdlePrep = 4,
    IdleMeasure = 5,
    IdleCzData = 6,
    IdleCzAncilla = 7,
}

pub const N_CATEGORIES: usize = 8;

impl FaultCategory {
    pub const ALL: [FaultCategory; N_CATEGORIES] = [
        FaultCategory::Prep,
        FaultCategory::Measure,
        FaultCategory::Gate1q,
        FaultCategory::Cz,
        FaultCategory::IdlePrep,
        FaultCategory::IdleMeasure,
        FaultCategory::IdleCzData,
        FaultCategory::IdleCzAncilla,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn is_idle(self) -> bool {
        self.index() >= 4
    }
}

/// Probability of a single fault location of the given category.
///
/// `roles` lists the qubits the location acts on; `duration` is the layer
/// duration for idle locations.
pub fn location_probability<T: Real>(
    params: &NoiseParams<T>,
    category: FaultCategory,
    roles: &[QubitRole],
    duration: T,
) -> Result<T, NoiseError> {
    let q = params.qubit(roles[0]);
    Ok(match category {
        FaultCategory::Prep => q.p_prep,
        FaultCategory::Measure => q.p_readout()?,
        FaultCategory::Gate1q => q.p_1q,
        FaultCategory::Cz => params.p_cz_between(roles[0], roles[1]),
        _ => p_idle(duration, q.t2_star)?,
    })
}

/// Resolves per-location probabilities into one value per category.
pub fn merge_category<T: Real>(
    policy: MixedPolicy,
    category: usize,
    probs: impl IntoIterator<Item = T>,
) -> Result<T, NoiseError> {
    let mut acc: Option<T> = None;
    for p in probs {
        acc = Some(match acc {
            None => p,
            Some(a) if a == p => a,
            Some(a) => match policy {
                MixedPolicy::Max => a.max(p),
                MixedPolicy::Strict => {
                    return Err(NoiseError::MixedCategory { category: category + 1, a: a.as_f64(), b: p.as_f64() })
                }
            },
        });
    }
    Ok(acc.unwrap_or_else(T::zero))
}

/// One probability per category for the locations of `protocol`.
pub fn fault_probabilities<T: Real>(
    params: &NoiseParams<T>,
    protocol: &crate::circuits::Protocol<T>,
) -> Result<[T; N_CATEGORIES], NoiseError> {
    let mut per_cat: Vec<Vec<T>> = vec![Vec::new(); N_CATEGORIES];
    for loc in &protocol.locations {
        let circuit = &protocol.segments[loc.segment];
        let roles: Vec<QubitRole> = loc.targets().iter().map(|&q| circuit.roles[q]).collect();
        let duration = circuit.layers[loc.layer].duration;
        per_cat[loc.category.index()].push(location_probability(params, loc.category, &roles, duration)?);
    }
    let mut out = [T::zero(); N_CATEGORIES];
    for (c, probs) in per_cat.into_iter().enumerate() {
        out[c] = merge_category(params.policy, c, probs)?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn p_idle_values() {
        assert_eq!(p_idle(0.0, 21.0).unwrap(), 0.0);
        assert_relative_eq!(p_idle(21.0, 21.0).unwrap(), 0.5 * (1.0 - (-1.0f64).exp()), max_relative = 1e-14);
        assert!(p_idle(-1.0, 21.0).is_err());
        assert!(p_idle(1.0, 0.0).is_err());
        assert_eq!(p_idle(5.0, f64::INFINITY).unwrap(), 0.0);
        assert!(p_idle(1e6f32, 1.0).unwrap() <= 0.5);
    }

    #[test]
    fn readout_time_sums() {
        assert_relative_eq!(readout_time(0.4, 2.0), 2.4);
        assert_eq!(readout_time(0.4, 0.0), 0.4);
    }

    #[test]
    fn fallback_calibration_hits_anchors() {
        let m = ParametricReadout::<f64>::fallback();
        assert_relative_eq!(m.eval(2.0), 4e-4, max_relative = 1e-9);
        assert_relative_eq!(m.argmin(), 1.4, max_relative = 1e-9);
        assert_relative_eq!(m.eval(0.0), 0.5);
    }

    #[test]
    fn curve_interpolates_and_clamps() {
        let c = ReadoutCurve::new(&[(0.5, 0.1), (1.0, 0.01), (2.0, 0.001), (3.0, 0.002)]).unwrap();
        for (t, p) in c.samples().collect::<Vec<_>>() {
            assert_eq!(c.eval(t), p);
        }
        assert_eq!(c.eval(0.1), 0.1);
        assert_eq!(c.eval(10.0), 0.002);
        let mid = c.eval(1.5);
        assert!(mid < 0.01 && mid > 0.001);
        assert!(ReadoutCurve::new(&[(1.0, 0.1)]).is_err());
        assert!(ReadoutCurve::new(&[(1.0, 0.1), (1.0, 0.2)]).is_err());
    }

    #[test]
    fn curve_parse() {
        let c = ReadoutCurve::<f64>::parse("t_int_us, infidelity\n 0.5 , 0.2\n1.0,0.1\n").unwrap();
        assert_eq!(c.eval(1.0), 0.1);
        assert!(ReadoutCurve::<f64>::parse("a,b\n1,2\n").is_err());
        assert!(ReadoutCurve::<f64>::parse("t_int_us,infidelity\n1,x\n2,0.1\n").is_err());
    }

    #[test]
    fn nominal_values() {
        let hw = nominal_hardware::<f64>();
        assert_eq!(hw.ld.t2_star, 21.0);
        assert_relative_eq!(hw.st.t2_star, 14.849, max_relative = 1e-4);
        assert_relative_eq!(hw.st.t_readout(), 2.4);
        assert_relative_eq!(hw.st.p_readout().unwrap(), 4e-4, max_relative = 1e-9);
        assert_eq!(hw.ld.p_readout().unwrap(), 2.4e-3);
        let ld = hw.noise(Encoding::AllLd);
        let hy = hw.noise(Encoding::Hybrid);
        assert_relative_eq!(ld.round_duration(), 24.32, max_relative = 1e-12);
        assert_relative_eq!(hy.round_duration(), 2.72, max_relative = 1e-12);
        assert_eq!(hy.p_cz_between(QubitRole::Data, QubitRole::Ancilla), 4e-3);
        assert_eq!(ld.p_cz_between(QubitRole::Data, QubitRole::Ancilla), 2e-3);
    }

    #[test]
    fn config_round_trip() {
        let mut hw = nominal_hardware::<f64>();
        hw.apply_config("# c\nld.t2_star = 30\nst.p_readout=1e-3\ncross.p_cz = 4e-4\npolicy=strict\n").unwrap();
        assert_eq!(hw.ld.t2_star, 30.0);
        assert_eq!(hw.st.p_readout().unwrap(), 1e-3);
        assert_eq!(hw.p_cz_cross, 4e-4);
        assert_eq!(hw.policy, MixedPolicy::Strict);
        assert!(matches!(hw.set("xx.p_1q", "1"), Err(NoiseError::UnknownKey(_))));
        assert!(matches!(hw.set("ld.bogus", "1"), Err(NoiseError::UnknownKey(_))));
        assert!(hw.apply_config("ld.p_1q = 2").is_err());
        hw.set("ld.t2_star", "inf").unwrap();
        assert!(hw.ld.t2_star.is_infinite());
        assert_eq!(hw.to_config()["cross.p_cz"], "0.0004");
    }

    #[test]
    fn merge_policies() {
        assert_eq!(merge_category(MixedPolicy::Max, 2, [4e-4, 4e-3, 4e-4]).unwrap(), 4e-3);
        assert!(matches!(
            merge_category(MixedPolicy::Strict, 2, [4e-4, 4e-3]),
            Err(NoiseError::MixedCategory { category: 3, .. })
        ));
        assert_eq!(merge_category::<f64>(MixedPolicy::Strict, 0, []).unwrap(), 0.0);
    }
}
