//! Flat `key = value` experiment configs with dotted namespaces.
//!
//! ```text
//! # comment
//! experiment = proj_prob_sweep
//! code.M = 2
//! code.alpha_sq = 4
//! noise.gamma_t = 0.1
//! sweep.param = code.alpha_sq
//! sweep.values = 1, 2, 4, 8
//! ```

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use rsbc::codes::{CodeSpec, LogicalCoeffs};
use rsbc::fock::{default_dim, C64};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Experiment {
    ProjProbSweep,
    TraceDistanceSweep,
    SeShotStudy,
    WignerPair,
    PhaseNoiseTruncation,
    OverheadTable,
}

impl Experiment {
    pub const ALL: [Experiment; 6] = [
        Experiment::ProjProbSweep,
        Experiment::TraceDistanceSweep,
        Experiment::SeShotStudy,
        Experiment::WignerPair,
        Experiment::PhaseNoiseTruncation,
        Experiment::OverheadTable,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Experiment::ProjProbSweep => "proj_prob_sweep",
            Experiment::TraceDistanceSweep => "trace_distance_sweep",
            Experiment::SeShotStudy => "se_shot_study",
            Experiment::WignerPair => "wigner_pair",
            Experiment::PhaseNoiseTruncation => "phase_noise_truncation",
            Experiment::OverheadTable => "overhead_table",
        }
    }

    fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|e| e.name() == s)
    }

    pub fn needs_code(self) -> bool {
        self != Experiment::OverheadTable
    }

    /// Experiments whose closed forms only exist for cat codes.
    fn cat_only(self) -> bool {
        matches!(
            self,
            Experiment::ProjProbSweep | Experiment::PhaseNoiseTruncation
        )
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Kind {
    Text,
    Int,
    Float,
    List,
}

/// Every recognized key, its type, and whether it may be swept.
const KEYS: &[(&str, Kind, &str)] = &[
    ("experiment", Kind::Text, "one of the six experiment names"),
    ("code.family", Kind::Text, "cat | binomial (default cat)"),
    ("code.M", Kind::Int, "rotation order M ≥ 1"),
    ("code.alpha_sq", Kind::Float, "cat amplitude |α|² > 0"),
    ("code.L", Kind::Int, "binomial truncation L ≥ 1"),
    ("code.D", Kind::Int, "Fock truncation (default ceil(n̄ + 8√n̄ + 20))"),
    ("code.state", Kind::Text, "zero | one | plus | minus | plus_i | t"),
    ("noise.kind", Kind::Text, "photon_loss | dephasing"),
    ("noise.gamma_t", Kind::Float, "dimensionless γt ≥ 0"),
    ("noise.kraus_cutoff", Kind::Int, "highest Kraus order kept (default: all)"),
    ("sweep.param", Kind::Text, "numeric key to sweep"),
    ("sweep.values", Kind::List, "comma-separated values"),
    ("shots", Kind::Int, "Monte Carlo shots per estimate (default 10000)"),
    ("seed", Kind::Int, "base RNG seed (default 0)"),
    ("output_path", Kind::Text, "CSV path (default: config path with .csv)"),
    ("wigner.extent", Kind::Float, "half-width of the x and p axes"),
    ("wigner.points", Kind::Int, "points per axis (default 101)"),
    ("phase.max_level", Kind::Int, "largest truncation level L (default 3)"),
    ("study.seeds", Kind::Int, "independent runs per point (default 1)"),
    ("study.variant", Kind::Text, "state_prep | measurement (default state_prep)"),
    ("overhead.n_bar", Kind::Float, "mean photon number n̄ (default 10)"),
    ("overhead.n_qem", Kind::Int, "number of mitigated operations (default 2)"),
    ("overhead.epsilon", Kind::Float, "target standard error (default 0.01)"),
];

fn key_kind(key: &str) -> Option<Kind> {
    KEYS.iter().find(|k| k.0 == key).map(|k| k.1)
}

pub fn is_sweepable(key: &str) -> bool {
    matches!(key_kind(key), Some(Kind::Int | Kind::Float)) && key != "seed" && key != "shots"
}

/// Key/value pairs exactly as written, before typing.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RawConfig {
    entries: BTreeMap<String, String>,
}

impl RawConfig {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut entries = BTreeMap::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((k, v)) = line.split_once('=') else {
                return Err(CliError::Config(format!("line {}: expected key = value", i + 1)));
            };
            let (k, v) = (k.trim(), v.trim());
            if k.is_empty() {
                return Err(CliError::Config(format!("line {}: empty key", i + 1)));
            }
            if entries.insert(k.to_string(), v.to_string()).is_some() {
                return Err(CliError::Config(format!("line {}: duplicate key {k}", i + 1)));
            }
        }
        Ok(Self { entries })
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(String::as_str)
    }

    pub fn set(&mut self, key: &str, value: impl Into<String>) {
        self.entries.insert(key.to_string(), value.into());
    }

    pub fn remove(&mut self, key: &str) {
        self.entries.remove(key);
    }

    /// Sorted `key=value` lines; the hashed identity of a run.
    pub fn canonical(&self) -> String {
        self.entries.iter().map(|(k, v)| format!("{k}={v}\n")).collect()
    }

    pub fn unknown_keys(&self) -> Vec<String> {
        self.entries
            .keys()
            .filter(|k| key_kind(k).is_none())
            .cloned()
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Cat,
    Binomial,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StateName {
    Zero,
    One,
    Plus,
    Minus,
    PlusI,
    T,
}

impl StateName {
    fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "zero" => Self::Zero,
            "one" => Self::One,
            "plus" => Self::Plus,
            "minus" => Self::Minus,
            "plus_i" => Self::PlusI,
            "t" => Self::T,
            _ => return None,
        })
    }

    pub fn coeffs(self) -> LogicalCoeffs {
        match self {
            Self::Zero => LogicalCoeffs::zero(),
            Self::One => LogicalCoeffs::one(),
            Self::Plus => LogicalCoeffs::plus(),
            Self::Minus => LogicalCoeffs::minus(),
            Self::PlusI => LogicalCoeffs::plus_i(),
            Self::T => LogicalCoeffs::magic_t(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NoiseKindName {
    PhotonLoss,
    Dephasing,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variant {
    StatePrep,
    Measurement,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Sweep {
    pub param: String,
    pub values: Vec<f64>,
}

/// Typed view of one sweep point.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    pub family: Family,
    pub order: usize,
    pub alpha_sq: f64,
    pub truncation: usize,
    pub dim: Option<usize>,
    pub state: StateName,
    pub noise_kind: NoiseKindName,
    pub gamma_t: f64,
    pub kraus_cutoff: Option<usize>,
    pub shots: usize,
    pub seed: u64,
    pub wigner_extent: Option<f64>,
    pub wigner_points: usize,
    pub phase_max_level: usize,
    pub study_seeds: usize,
    pub variant: Variant,
    pub n_bar: f64,
    pub n_qem: u32,
    pub epsilon: f64,
}

impl ExperimentConfig {
    pub fn code_spec(&self) -> Result<CodeSpec, CliError> {
        let spec = match self.family {
            Family::Cat => {
                let alpha = C64::new(self.alpha_sq.sqrt(), 0.0);
                match self.dim {
                    Some(d) => CodeSpec::cat(self.order, alpha, d),
                    None => CodeSpec::cat_auto(self.order, alpha),
                }
            }
            Family::Binomial => match self.dim {
                Some(d) => CodeSpec::binomial(self.order, self.truncation, d),
                None => CodeSpec::binomial_auto(self.order, self.truncation),
            },
        };
        spec.map_err(|e| CliError::Config(format!("code: {e}")))
    }

    /// Truncation the run will use.
    pub fn derived_dim(&self) -> Result<usize, CliError> {
        Ok(self.code_spec()?.dim())
    }

    pub fn mean_photons(&self) -> f64 {
        match self.family {
            Family::Cat => self.alpha_sq,
            Family::Binomial => (self.order * (self.truncation + 1)) as f64 / 2.0,
        }
    }
}

/// Problems found while typing a raw config.
#[derive(Debug, Default, Clone, PartialEq)]
pub struct Diagnostics {
    pub missing: Vec<String>,
    pub unknown: Vec<String>,
    pub invalid: Vec<String>,
}

impl Diagnostics {
    pub fn is_clean(&self) -> bool {
        self.missing.is_empty() && self.unknown.is_empty() && self.invalid.is_empty()
    }

    pub fn lines(&self) -> Vec<String> {
        let mut out = Vec::new();
        out.extend(self.missing.iter().map(|k| format!("missing required key: {k}")));
        out.extend(self.unknown.iter().map(|k| format!("unknown key: {k}")));
        out.extend(self.invalid.iter().map(|m| format!("invalid: {m}")));
        out
    }

    fn into_error(self) -> CliError {
        CliError::Config(self.lines().join("; "))
    }
}

struct Reader<'a> {
    raw: &'a RawConfig,
    diag: Diagnostics,
}

impl<'a> Reader<'a> {
    fn text(&self, key: &str) -> Option<&'a str> {
        self.raw.get(key)
    }

    fn required_text(&mut self, key: &str) -> Option<String> {
        let v = self.raw.get(key).map(str::to_string);
        if v.is_none() {
            self.diag.missing.push(key.to_string());
        }
        v
    }

    fn number<T: std::str::FromStr>(&mut self, key: &str) -> Option<T> {
        let s = self.raw.get(key)?;
        match s.parse::<T>() {
            Ok(v) => Some(v),
            Err(_) => {
                self.diag.invalid.push(format!("{key} = {s:?} is not a valid number"));
                None
            }
        }
    }

    fn float(&mut self, key: &str) -> Option<f64> {
        let v = self.number::<f64>(key)?;
        if !v.is_finite() {
            self.diag.invalid.push(format!("{key} must be finite"));
            return None;
        }
        Some(v)
    }

    /// Integers may be written as `4` or `4.0`, so swept values parse.
    fn int(&mut self, key: &str) -> Option<u64> {
        let s = self.raw.get(key)?;
        if let Ok(v) = s.parse::<u64>() {
            return Some(v);
        }
        match s.parse::<f64>() {
            Ok(v) if v >= 0.0 && v.fract() == 0.0 && v < 2f64.powi(53) => Some(v as u64),
            _ => {
                self.diag.invalid.push(format!("{key} = {s:?} is not a non-negative integer"));
                None
            }
        }
    }

    fn required_float(&mut self, key: &str) -> Option<f64> {
        if self.raw.get(key).is_none() {
            self.diag.missing.push(key.to_string());
            return None;
        }
        self.float(key)
    }

    fn required_int(&mut self, key: &str) -> Option<u64> {
        if self.raw.get(key).is_none() {
            self.diag.missing.push(key.to_string());
            return None;
        }
        self.int(key)
    }

    fn check(&mut self, ok: bool, msg: impl Into<String>) {
        if !ok {
            self.diag.invalid.push(msg.into());
        }
    }
}

/// Largest Fock truncation the CLI will build.
pub const MAX_DIM: usize = 400;

/// Type `raw`, collecting every problem rather than stopping at the first.
pub fn check(raw: &RawConfig) -> (Option<ExperimentConfig>, Diagnostics) {
    let mut r = Reader {
        raw,
        diag: Diagnostics {
            unknown: raw.unknown_keys(),
            ..Diagnostics::default()
        },
    };

    let experiment = match r.required_text("experiment") {
        Some(s) => {
            let e = Experiment::parse(&s);
            if e.is_none() {
                let names: Vec<_> = Experiment::ALL.iter().map(|e| e.name()).collect();
                r.diag.invalid.push(format!("experiment {s:?} is not one of {}", names.join(", ")));
            }
            e
        }
        None => None,
    };
    let needs_code = experiment.is_none_or(|e| e.needs_code());

    let family = match r.text("code.family").unwrap_or("cat") {
        "cat" => Some(Family::Cat),
        "binomial" => Some(Family::Binomial),
        other => {
            r.diag.invalid.push(format!("code.family {other:?} must be cat or binomial"));
            None
        }
    };
    if let (Some(e), Some(Family::Binomial)) = (experiment, family) {
        r.check(!e.cat_only(), format!("{e} needs code.family = cat"));
    }

    let (mut order, mut alpha_sq, mut truncation) = (1, 0.0, 1);
    if needs_code {
        if let Some(m) = r.required_int("code.M") {
            r.check((1..=16).contains(&m), "code.M must be in 1..=16");
            order = m as usize;
        }
        match family {
            Some(Family::Binomial) => {
                if let Some(l) = r.required_int("code.L") {
                    r.check((1..=64).contains(&l), "code.L must be in 1..=64");
                    truncation = l as usize;
                }
            }
            _ => {
                if let Some(a) = r.required_float("code.alpha_sq") {
                    r.check(a > 0.0, "code.alpha_sq must be > 0");
                    alpha_sq = a;
                }
            }
        }
    }
    let dim = r.int("code.D").map(|d| d as usize);
    if let Some(d) = dim {
        r.check((2..=MAX_DIM).contains(&d), format!("code.D must be in 2..={MAX_DIM}"));
    }
    let state = match r.text("code.state") {
        None => Some(StateName::Zero),
        Some(s) => {
            let st = StateName::parse(s);
            if st.is_none() {
                r.diag
                    .invalid
                    .push(format!("code.state {s:?} must be zero, one, plus, minus, plus_i or t"));
            }
            st
        }
    };

    let noise_kind = match r.text("noise.kind").unwrap_or("photon_loss") {
        "photon_loss" => Some(NoiseKindName::PhotonLoss),
        "dephasing" => Some(NoiseKindName::Dephasing),
        other => {
            r.diag
                .invalid
                .push(format!("noise.kind {other:?} must be photon_loss or dephasing"));
            None
        }
    };
    let gamma_t = r.required_float("noise.gamma_t").unwrap_or(0.0);
    r.check(gamma_t >= 0.0, "noise.gamma_t must be ≥ 0");
    let kraus_cutoff = r.int("noise.kraus_cutoff").map(|c| c as usize);
    if let Some(e) = experiment {
        let want = if e == Experiment::PhaseNoiseTruncation {
            NoiseKindName::Dephasing
        } else {
            NoiseKindName::PhotonLoss
        };
        if noise_kind.is_some_and(|k| k != want) && e != Experiment::OverheadTable {
            r.diag.invalid.push(format!(
                "{e} needs noise.kind = {}",
                if want == NoiseKindName::Dephasing { "dephasing" } else { "photon_loss" }
            ));
        }
    }

    let shots = r.int("shots").unwrap_or(10_000) as usize;
    r.check(shots >= 2, "shots must be ≥ 2");
    let seed = r.int("seed").unwrap_or(0);
    let wigner_extent = r.float("wigner.extent");
    if let Some(x) = wigner_extent {
        r.check(x > 0.0 && x <= 15.0, "wigner.extent must be in (0, 15]");
    }
    let wigner_points = r.int("wigner.points").unwrap_or(101) as usize;
    r.check((2..=1001).contains(&wigner_points), "wigner.points must be in 2..=1001");
    let phase_max_level = r.int("phase.max_level").unwrap_or(3) as usize;
    r.check(phase_max_level <= 20, "phase.max_level must be ≤ 20");
    let study_seeds = r.int("study.seeds").unwrap_or(1) as usize;
    r.check((1..=10_000).contains(&study_seeds), "study.seeds must be in 1..=10000");
    let variant = match r.text("study.variant").unwrap_or("state_prep") {
        "state_prep" => Some(Variant::StatePrep),
        "measurement" => Some(Variant::Measurement),
        other => {
            r.diag
                .invalid
                .push(format!("study.variant {other:?} must be state_prep or measurement"));
            None
        }
    };
    let n_bar = r.float("overhead.n_bar").unwrap_or(10.0);
    r.check(n_bar >= 0.0, "overhead.n_bar must be ≥ 0");
    let n_qem = r.int("overhead.n_qem").unwrap_or(2);
    r.check(n_qem <= 1_000_000, "overhead.n_qem is too large");
    let epsilon = r.float("overhead.epsilon").unwrap_or(0.01);
    r.check(epsilon > 0.0, "overhead.epsilon must be > 0");

    match (r.text("sweep.param").map(str::to_string), r.text("sweep.values")) {
        (Some(p), Some(v)) => {
            if !is_sweepable(&p) {
                r.diag.invalid.push(format!("sweep.param {p:?} is not a sweepable numeric key"));
            }
            if let Err(e) = parse_values(v) {
                r.diag.invalid.push(format!("sweep.values: {e}"));
            }
        }
        (None, None) => {}
        _ => r.diag.invalid.push("sweep.param and sweep.values must be given together".into()),
    }

    let (Some(experiment), Some(family), Some(state), Some(noise_kind), Some(variant)) =
        (experiment, family, state, noise_kind, variant)
    else {
        return (None, r.diag);
    };
    let cfg = ExperimentConfig {
        experiment,
        family,
        order,
        alpha_sq,
        truncation,
        dim,
        state,
        noise_kind,
        gamma_t,
        kraus_cutoff,
        shots,
        seed,
        wigner_extent,
        wigner_points,
        phase_max_level,
        study_seeds,
        variant,
        n_bar,
        n_qem: n_qem as u32,
        epsilon,
    };
    if r.diag.is_clean() && needs_code {
        match cfg.derived_dim() {
            Ok(d) if d > MAX_DIM => r.diag.invalid.push(format!(
                "derived truncation D = {d} exceeds {MAX_DIM}; lower code.alpha_sq or code.L"
            )),
            Ok(d) if experiment == Experiment::PhaseNoiseTruncation && d <= 2 * phase_max_level * order => {
                r.diag.invalid.push(format!(
                    "phase.max_level = {phase_max_level} needs D > {}, have {d}",
                    2 * phase_max_level * order
                ))
            }
            Ok(_) => {}
            Err(e) => r.diag.invalid.push(e.to_string()),
        }
    }
    if r.diag.is_clean() {
        (Some(cfg), r.diag)
    } else {
        (None, r.diag)
    }
}

/// Type `raw` or fail with every diagnostic joined into one message.
pub fn typed(raw: &RawConfig) -> Result<ExperimentConfig, CliError> {
    match check(raw) {
        (Some(cfg), _) => Ok(cfg),
        (None, diag) => Err(diag.into_error()),
    }
}

pub fn parse_values(list: &str) -> Result<Vec<f64>, CliError> {
    let values = list
        .split(',')
        .map(|s| {
            let s = s.trim();
            s.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| CliError::Config(format!("{s:?} is not a finite number")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    if values.is_empty() {
        return Err(CliError::Config("empty value list".into()));
    }
    Ok(values)
}

/// The config's own sweep, if any.
pub fn sweep_of(raw: &RawConfig) -> Result<Option<Sweep>, CliError> {
    match (raw.get("sweep.param"), raw.get("sweep.values")) {
        (Some(p), Some(v)) => Ok(Some(Sweep {
            param: p.to_string(),
            values: parse_values(v)?,
        })),
        _ => Ok(None),
    }
}

/// Format a sweep value for insertion back into a raw config.
pub fn value_text(v: f64) -> String {
    format!("{v}")
}

/// Default truncation rule, exposed for `validate`.
pub fn truncation_rule(n_bar: f64) -> usize {
    default_dim(n_bar)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn raw(text: &str) -> RawConfig {
        RawConfig::parse(text).unwrap()
    }

    #[test]
    fn parses_comments_and_whitespace() {
        let r = raw("# hi\n\n experiment = wigner_pair \ncode.M=2\n");
        assert_eq!(r.get("experiment"), Some("wigner_pair"));
        assert_eq!(r.get("code.M"), Some("2"));
        assert!(RawConfig::parse("a = 1\na = 2").is_err());
        assert!(RawConfig::parse("no equals sign").is_err());
    }

    #[test]
    fn empty_config_lists_required_keys() {
        let (cfg, diag) = check(&RawConfig::default());
        assert!(cfg.is_none());
        for key in ["experiment", "code.M", "code.alpha_sq", "noise.gamma_t"] {
            assert!(diag.missing.contains(&key.to_string()), "{key}");
        }
    }

    #[test]
    fn alpha_sq_four_derives_default_truncation() {
        let cfg = typed(&raw("experiment=proj_prob_sweep\ncode.M=2\ncode.alpha_sq=4\nnoise.gamma_t=0.1")).unwrap();
        assert_eq!(cfg.derived_dim().unwrap(), 40);
        assert_eq!(truncation_rule(4.0), 40);
    }

    #[test]
    fn range_violations_and_unknown_keys() {
        let (_, diag) = check(&raw(
            "experiment=proj_prob_sweep\ncode.M=2\ncode.alpha_sq=4\nnoise.gamma_t=-0.1\ncode.colour=red",
        ));
        assert!(diag.invalid.iter().any(|m| m.contains("gamma_t")));
        assert_eq!(diag.unknown, vec!["code.colour".to_string()]);
    }

    #[test]
    fn experiment_specific_rules() {
        let (_, diag) = check(&raw(
            "experiment=proj_prob_sweep\ncode.family=binomial\ncode.M=2\ncode.L=2\nnoise.gamma_t=0.1",
        ));
        assert!(!diag.is_clean());
        let (_, diag) = check(&raw(
            "experiment=phase_noise_truncation\ncode.M=2\ncode.alpha_sq=2\nnoise.gamma_t=0.1",
        ));
        assert!(diag.invalid.iter().any(|m| m.contains("dephasing")));
        let cfg = typed(&raw("experiment=overhead_table\nnoise.gamma_t=0.1")).unwrap();
        assert_eq!(cfg.n_qem, 2);
    }

    #[test]
    fn sweep_keys_are_checked() {
        let base = "experiment=proj_prob_sweep\ncode.M=2\ncode.alpha_sq=4\nnoise.gamma_t=0.1\n";
        assert!(typed(&raw(&format!("{base}sweep.param=code.alpha_sq\nsweep.values=1,2"))).is_ok());
        assert!(typed(&raw(&format!("{base}sweep.param=seed\nsweep.values=1,2"))).is_err());
        assert!(typed(&raw(&format!("{base}sweep.param=code.alpha_sq\nsweep.values=1,inf"))).is_err());
        assert!(typed(&raw(&format!("{base}sweep.param=code.alpha_sq"))).is_err());
        assert_eq!(parse_values(" 1, 2.5 ,3").unwrap(), vec![1.0, 2.5, 3.0]);
    }

    #[test]
    fn integers_accept_float_spelling() {
        let cfg = typed(&raw("experiment=overhead_table\nnoise.gamma_t=0.1\noverhead.n_qem=3.0")).unwrap();
        assert_eq!(cfg.n_qem, 3);
        assert!(typed(&raw("experiment=overhead_table\nnoise.gamma_t=0.1\noverhead.n_qem=2.5")).is_err());
    }

    #[test]
    fn canonical_form_is_sorted() {
        let r = raw("b = 2\na = 1");
        assert_eq!(r.canonical(), "a=1\nb=2\n");
    }
}
