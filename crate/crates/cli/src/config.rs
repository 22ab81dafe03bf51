//! Run configuration: a flat `key = value` format shared by config files and
//! command-line flags.
//!
//! | key          | default                         |
//! |--------------|---------------------------------|
//! | `mode`       | required                        |
//! | `two_j`      | required; positive integer `2j` |
//! | `h0`         | `0`                             |
//! | `hf`         | required for trace              |
//! | `hf_range`   | `min max count`; sweep modes    |
//! | `delta`      | `1`                             |
//! | `initial`    | `auto`                          |
//! | `t_factor`   | `1000`                          |
//! | `n_samples`  | 2000 (trace), 20000 (sweeps)    |
//! | `t_max`      | `10` (trace only)               |
//! | `horizon`    | `per-point`                     |
//! | `output`     | mode name                       |
//! | `workers`    | `0` (all cores)                 |
//! | `clip_floor` | `1e-280`                        |
//!
//! `initial = auto` selects the polarized `m = +j` state when `h0 = 0` and
//! the pre-quench ground state otherwise.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use lmg_texture::diagnostics::{uniform_fields, Horizon, InitialStateRule};
use lmg_texture::texture::DEFAULT_CLIP_FLOOR;

use crate::error::CliError;

pub const KEYS: [&str; 14] = [
    "mode", "two_j", "h0", "hf", "hf_range", "delta", "initial", "t_factor", "n_samples", "t_max", "horizon", "output", "workers",
    "clip_floor",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Trace,
    Sweep,
    Derivative,
    Predict,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Trace => "trace",
            Mode::Sweep => "sweep",
            Mode::Derivative => "derivative",
            Mode::Predict => "predict",
        }
    }
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "trace" => Ok(Mode::Trace),
            "sweep" => Ok(Mode::Sweep),
            "derivative" => Ok(Mode::Derivative),
            "predict" => Ok(Mode::Predict),
            _ => Err(format!("expected trace, sweep, derivative or predict, got {s:?}")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InitialChoice {
    Auto,
    Ground,
    DickeMax,
}

impl InitialChoice {
    pub fn as_str(self) -> &'static str {
        match self {
            InitialChoice::Auto => "auto",
            InitialChoice::Ground => "ground",
            InitialChoice::DickeMax => "dicke-max",
        }
    }

    pub fn resolve(self, h0: f64) -> InitialStateRule {
        match self {
            InitialChoice::Ground => InitialStateRule::GroundState,
            InitialChoice::DickeMax => InitialStateRule::DickeMax,
            InitialChoice::Auto if h0 == 0.0 => InitialStateRule::DickeMax,
            InitialChoice::Auto => InitialStateRule::GroundState,
        }
    }
}

impl FromStr for InitialChoice {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "auto" => Ok(InitialChoice::Auto),
            "ground" => Ok(InitialChoice::Ground),
            "dicke-max" => Ok(InitialChoice::DickeMax),
            _ => Err(format!("expected auto, ground or dicke-max, got {s:?}")),
        }
    }
}

fn horizon_str(h: Horizon) -> &'static str {
    match h {
        Horizon::PerPoint => "per-point",
        Horizon::GlobalMin => "global-min",
    }
}

fn parse_horizon(s: &str) -> Result<Horizon, String> {
    match s {
        "per-point" => Ok(Horizon::PerPoint),
        "global-min" => Ok(Horizon::GlobalMin),
        _ => Err(format!("expected per-point or global-min, got {s:?}")),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldRange {
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl FieldRange {
    pub fn values(&self) -> Vec<f64> {
        uniform_fields(self.min, self.max, self.count)
    }
}

/// Fully resolved configuration; every default has been filled in.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub mode: Mode,
    pub two_j: u32,
    pub h0: f64,
    pub hf: Option<f64>,
    pub hf_range: Option<FieldRange>,
    pub delta: f64,
    pub initial: InitialChoice,
    pub t_factor: f64,
    pub n_samples: usize,
    pub t_max: f64,
    pub horizon: Horizon,
    pub output: String,
    pub workers: usize,
    pub clip_floor: f64,
}

/// Raw `key → value` pairs in insertion-independent order.
pub type Pairs = BTreeMap<String, String>;

/// Parses the `key = value` text format. Blank lines and `#` comments are
/// skipped; repeated keys keep the last value.
pub fn parse_pairs(text: &str) -> Result<Pairs, CliError> {
    let mut pairs = Pairs::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(CliError::config(None, format!("line {}: expected key = value", n + 1)));
        };
        let key = key.trim();
        if !KEYS.contains(&key) {
            return Err(CliError::config(Some(key), format!("line {}: unknown key", n + 1)));
        }
        pairs.insert(key.to_string(), value.trim().to_string());
    }
    Ok(pairs)
}

fn parse_field<T: FromStr>(pairs: &Pairs, key: &'static str) -> Result<Option<T>, CliError>
where
    T::Err: fmt::Display,
{
    match pairs.get(key) {
        None => Ok(None),
        Some(v) => v.parse::<T>().map(Some).map_err(|e| CliError::config(Some(key), format!("invalid value {v:?}: {e}"))),
    }
}

fn non_negative(key: &'static str, v: f64) -> Result<f64, CliError> {
    if v.is_finite() && v >= 0.0 {
        Ok(v)
    } else {
        Err(CliError::config(Some(key), format!("must be finite and >= 0, got {v}")))
    }
}

fn positive(key: &'static str, v: f64) -> Result<f64, CliError> {
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(CliError::config(Some(key), format!("must be finite and > 0, got {v}")))
    }
}

impl RunConfig {
    /// Validates merged pairs and fills defaults.
    pub fn from_pairs(pairs: &Pairs) -> Result<Self, CliError> {
        if let Some(key) = pairs.keys().find(|k| !KEYS.contains(&k.as_str())) {
            return Err(CliError::config(Some(key), "unknown key".into()));
        }
        let mode: Mode = parse_field(pairs, "mode")?.ok_or_else(|| CliError::config(Some("mode"), "missing required field".into()))?;
        let two_j = match pairs.get("two_j") {
            None => return Err(CliError::config(Some("two_j"), "missing required field".into())),
            Some(v) => match v.parse::<u32>() {
                Ok(n) if n > 0 => n,
                _ => return Err(CliError::config(Some("two_j"), format!("2j must be a positive integer, got {v:?}"))),
            },
        };
        let h0 = non_negative("h0", parse_field(pairs, "h0")?.unwrap_or(0.0))?;
        let hf = parse_field::<f64>(pairs, "hf")?.map(|v| non_negative("hf", v)).transpose()?;
        let hf_range = match pairs.get("hf_range") {
            None => None,
            Some(v) => Some(parse_range(v)?),
        };
        let delta = non_negative("delta", parse_field(pairs, "delta")?.unwrap_or(1.0))?;
        let initial = parse_field(pairs, "initial")?.unwrap_or(InitialChoice::Auto);
        let t_factor = positive("t_factor", parse_field(pairs, "t_factor")?.unwrap_or(1e3))?;
        let default_samples = if mode == Mode::Trace { 2000 } else { 20_000 };
        let n_samples = parse_field::<usize>(pairs, "n_samples")?.unwrap_or(default_samples);
        let t_max = positive("t_max", parse_field(pairs, "t_max")?.unwrap_or(10.0))?;
        let horizon = match pairs.get("horizon") {
            None => Horizon::PerPoint,
            Some(v) => parse_horizon(v).map_err(|e| CliError::config(Some("horizon"), e))?,
        };
        let output = pairs.get("output").cloned().unwrap_or_else(|| mode.as_str().to_string());
        if output.is_empty() {
            return Err(CliError::config(Some("output"), "must not be empty".into()));
        }
        let workers = parse_field(pairs, "workers")?.unwrap_or(0);
        let clip_floor = positive("clip_floor", parse_field(pairs, "clip_floor")?.unwrap_or(DEFAULT_CLIP_FLOOR))?;

        match mode {
            Mode::Trace => {
                if hf.is_none() {
                    return Err(CliError::config(Some("hf"), "trace mode needs a single post-quench field".into()));
                }
                if hf_range.is_some() {
                    return Err(CliError::config(Some("hf_range"), "trace mode takes hf, not a range".into()));
                }
                if n_samples < 1 {
                    return Err(CliError::config(Some("n_samples"), "must be at least 1".into()));
                }
            }
            Mode::Sweep | Mode::Derivative | Mode::Predict => {
                if hf.is_some() == hf_range.is_some() {
                    return Err(CliError::config(Some("hf"), "give exactly one of hf or hf_range".into()));
                }
                if mode != Mode::Predict && n_samples < 2 {
                    return Err(CliError::config(Some("n_samples"), "sweeps need at least 2 samples".into()));
                }
                if mode == Mode::Derivative && hf_range.is_none_or(|r| r.count < 3) {
                    return Err(CliError::config(Some("hf_range"), "derivative mode needs a range of at least 3 points".into()));
                }
            }
        }
        if mode != Mode::Predict && delta == 0.0 && initial == InitialChoice::Ground {
            return Err(CliError::config(Some("initial"), "ground state needs delta > 0 or h0 > 0".into()));
        }
        if mode == Mode::Predict && delta == 0.0 {
            return Err(CliError::config(Some("delta"), "predictions need delta > 0".into()));
        }

        Ok(RunConfig { mode, two_j, h0, hf, hf_range, delta, initial, t_factor, n_samples, t_max, horizon, output, workers, clip_floor })
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        Self::from_pairs(&parse_pairs(text)?)
    }

    pub fn fields(&self) -> Vec<f64> {
        match (self.hf, self.hf_range) {
            (Some(h), _) => vec![h],
            (None, Some(r)) => r.values(),
            (None, None) => Vec::new(),
        }
    }

    /// Serializes every resolved field; floats use their shortest exact
    /// representation so that parsing the text back is lossless.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let mut put = |k: &str, v: String| {
            out.push_str(k);
            out.push_str(" = ");
            out.push_str(&v);
            out.push('\n');
        };
        put("mode", self.mode.as_str().into());
        put("two_j", self.two_j.to_string());
        put("h0", format!("{:?}", self.h0));
        if let Some(h) = self.hf {
            put("hf", format!("{h:?}"));
        }
        if let Some(r) = self.hf_range {
            put("hf_range", format!("{:?} {:?} {}", r.min, r.max, r.count));
        }
        put("delta", format!("{:?}", self.delta));
        put("initial", self.initial.as_str().into());
        put("t_factor", format!("{:?}", self.t_factor));
        put("n_samples", self.n_samples.to_string());
        put("t_max", format!("{:?}", self.t_max));
        put("horizon", horizon_str(self.horizon).into());
        put("output", self.output.clone());
        put("workers", self.workers.to_string());
        put("clip_floor", format!("{:?}", self.clip_floor));
        out
    }
}

fn parse_range(v: &str) -> Result<FieldRange, CliError> {
    let err = |m: String| CliError::config(Some("hf_range"), m);
    let parts: Vec<&str> = v.split_whitespace().collect();
    if parts.len() != 3 {
        return Err(err(format!("expected `min max count`, got {v:?}")));
    }
    let min: f64 = parts[0].parse().map_err(|_| err(format!("invalid min {:?}", parts[0])))?;
    let max: f64 = parts[1].parse().map_err(|_| err(format!("invalid max {:?}", parts[1])))?;
    let count: usize = parts[2].parse().map_err(|_| err(format!("invalid count {:?}", parts[2])))?;
    if !(min.is_finite() && max.is_finite() && min >= 0.0 && max >= min) {
        return Err(err(format!("need 0 <= min <= max, got {min} {max}")));
    }
    if count == 0 || (count > 1 && max == min) {
        return Err(err(format!("count {count} does not describe a grid on [{min}, {max}]")));
    }
    Ok(FieldRange { min, max, count })
}
