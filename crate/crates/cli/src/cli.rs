use std::fs;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::config::{parse_pairs, Pairs, RunConfig};
use crate::error::CliError;

#[derive(Debug, Parser)]
#[command(name = "lmg-texture", version, about = "Quench traces, order-parameter sweeps and critical predictions for the LMG model")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Option<Command>,
    #[command(flatten)]
    pub flags: Flags,
}

#[derive(Debug, Subcommand, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    /// Echo, rate function, rugosities and magnetization over time.
    Trace,
    /// Long-time averages over a range of post-quench fields.
    Sweep,
    /// Sweep plus finite-difference derivatives in h_f.
    Derivative,
    /// Mean-field critical fields and energies.
    Predict,
}

impl Command {
    fn as_str(self) -> &'static str {
        match self {
            Command::Trace => "trace",
            Command::Sweep => "sweep",
            Command::Derivative => "derivative",
            Command::Predict => "predict",
        }
    }
}

/// Every flag overrides the key of the same name (dashes as underscores) in
/// the config file.
#[derive(Debug, Args, Default)]
pub struct Flags {
    /// key = value config file; flags take precedence.
    #[arg(long, global = true, allow_negative_numbers = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    #[arg(long, global = true, allow_negative_numbers = true, value_name = "MODE")]
    pub mode: Option<String>,
    /// Twice the spin length, a positive integer.
    #[arg(long = "two-j", global = true, allow_negative_numbers = true, value_name = "2J")]
    pub two_j: Option<String>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub h0: Option<String>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub hf: Option<String>,
    #[arg(long = "hf-range", global = true, allow_negative_numbers = true, num_args = 3, value_names = ["MIN", "MAX", "COUNT"])]
    pub hf_range: Option<Vec<String>>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub delta: Option<String>,
    /// auto, ground or dicke-max.
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub initial: Option<String>,
    /// Averaging horizon in units of the inverse smallest Bohr frequency.
    #[arg(long = "t-factor", global = true, allow_negative_numbers = true)]
    pub t_factor: Option<String>,
    #[arg(long = "n-samples", global = true, allow_negative_numbers = true)]
    pub n_samples: Option<String>,
    /// Trace length.
    #[arg(long = "t-max", global = true, allow_negative_numbers = true)]
    pub t_max: Option<String>,
    /// per-point or global-min.
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub horizon: Option<String>,
    /// Output prefix; writes <PREFIX>.csv and <PREFIX>.json.
    #[arg(long, short, global = true, allow_negative_numbers = true, value_name = "PREFIX")]
    pub output: Option<String>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub workers: Option<String>,
    #[arg(long = "clip-floor", global = true, allow_negative_numbers = true)]
    pub clip_floor: Option<String>,
}

impl Flags {
    fn pairs(&self) -> Pairs {
        let mut p = Pairs::new();
        let mut put = |k: &str, v: &Option<String>| {
            if let Some(v) = v {
                p.insert(k.to_string(), v.clone());
            }
        };
        put("mode", &self.mode);
        put("two_j", &self.two_j);
        put("h0", &self.h0);
        put("hf", &self.hf);
        put("delta", &self.delta);
        put("initial", &self.initial);
        put("t_factor", &self.t_factor);
        put("n_samples", &self.n_samples);
        put("t_max", &self.t_max);
        put("horizon", &self.horizon);
        put("output", &self.output);
        put("workers", &self.workers);
        put("clip_floor", &self.clip_floor);
        if let Some(r) = &self.hf_range {
            p.insert("hf_range".into(), r.join(" "));
        }
        p
    }
}

impl Cli {
    /// Merges the optional config file, the flags and the subcommand.
    pub fn into_config(self) -> Result<RunConfig, CliError> {
        let mut pairs = match &self.flags.config {
            Some(path) => {
                let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
                parse_pairs(&text)?
            }
            None => Pairs::new(),
        };
        let flags = self.flags.pairs();
        if let (Some(cmd), Some(mode)) = (self.command, flags.get("mode")) {
            if cmd.as_str() != mode {
                return Err(CliError::config(Some("mode"), format!("subcommand {} conflicts with --mode {mode}", cmd.as_str())));
            }
        }
        pairs.extend(flags);
        if let Some(cmd) = self.command {
            pairs.insert("mode".into(), cmd.as_str().into());
        }
        RunConfig::from_pairs(&pairs)
    }
}
