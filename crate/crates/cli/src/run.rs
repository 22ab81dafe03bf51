use std::path::PathBuf;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use lmg_texture::diagnostics::{
    clip, critical_predictions, order_parameter_sweep, sweep_derivative, trace_from_setup, GridRule, QuenchSetup, QuenchSpec,
    SweepColumn, SweepTable, TimeGrid,
};
use lmg_texture::spectral::smallest_bohr_frequency;
use lmg_texture::texture::rugosity_density;

use crate::config::{Mode, RunConfig};
use crate::error::CliError;
use crate::output::{write_outputs, Cell, Metadata, Table};

pub struct RunOutput {
    pub table: Table,
    pub nu_used: Vec<Option<f64>>,
    pub nu_global_min: Option<f64>,
}

pub const TRACE_COLUMNS: [&str; 7] =
    ["t", "echo", "rate", "rugosity_prequench_density", "rugosity_fourier_density", "magnetization", "clipped"];
pub const SWEEP_COLUMNS: [&str; 4] = ["h_f", "avg_magnetization", "avg_rugosity_prequench", "nu_used"];
pub const DERIVATIVE_COLUMNS: [&str; 2] = ["d_avg_magnetization", "d_avg_rugosity_prequench"];
pub const PREDICT_COLUMNS: [&str; 8] =
    ["h_0", "h_f", "delta", "h_c_qpt", "e_c_esqpt_per_j", "e_injected_per_j", "h_f_dqpt", "consistency_residual"];

fn base_spec(config: &RunConfig, hf: f64) -> Result<QuenchSpec, CliError> {
    let rule = config.initial.resolve(config.h0);
    Ok(QuenchSpec::fields(config.two_j, config.h0, hf, config.delta, rule)?)
}

fn cell_unless(flagged: bool, value: f64) -> Cell {
    if flagged {
        Cell::Empty
    } else {
        Cell::Float(value)
    }
}

fn trace(config: &RunConfig) -> Result<RunOutput, CliError> {
    let spec = base_spec(config, config.hf.expect("validated"))?;
    let setup = QuenchSetup::new(&spec)?;
    let grid = TimeGrid::new(config.t_max, config.n_samples)?;
    let trace = trace_from_setup(&setup, &grid, config.clip_floor)?;
    let sector = spec.sector;
    let n = sector.n_particles() as f64;
    let mut table = Table::new(TRACE_COLUMNS.to_vec());
    for i in 0..trace.len() {
        let flags = trace.clipped[i];
        table.push(vec![
            Cell::Float(trace.times[i]),
            Cell::Float(trace.echo[i]),
            cell_unless(flags & clip::RATE != 0, trace.rate[i]),
            cell_unless(flags & clip::RUGOSITY_PREQUENCH != 0, rugosity_density(trace.rugosity_prequench[i], sector)),
            cell_unless(flags & clip::RUGOSITY_FOURIER != 0, trace.rugosity_fourier[i] / n),
            Cell::Float(trace.magnetization[i]),
            Cell::Int(flags as u64),
        ]);
    }
    let nu = smallest_bohr_frequency(setup.propagator.decomposition()).ok();
    Ok(RunOutput { table, nu_used: vec![nu], nu_global_min: nu })
}

fn sweep_table(config: &RunConfig) -> Result<SweepTable, CliError> {
    let fields = config.fields();
    let base = base_spec(config, fields[0])?;
    let rule = GridRule { t_factor: config.t_factor, n_samples: config.n_samples, horizon: config.horizon, clip_floor: config.clip_floor };
    let table = order_parameter_sweep(&fields, &base, rule)?;
    if let Some(row) = table.rows.iter().find(|r| r.outcome.is_err()) {
        return Err(row.outcome.clone().unwrap_err().into());
    }
    Ok(table)
}

fn sweep(config: &RunConfig, with_derivative: bool) -> Result<RunOutput, CliError> {
    let sweep = sweep_table(config)?;
    let mut columns = SWEEP_COLUMNS.to_vec();
    let derivatives = if with_derivative {
        columns.extend(DERIVATIVE_COLUMNS);
        Some((sweep_derivative(&sweep, SweepColumn::AvgMagnetization)?, sweep_derivative(&sweep, SweepColumn::AvgRugosityPrequench)?))
    } else {
        None
    };
    let mut table = Table::new(columns);
    let mut nu_used = Vec::with_capacity(sweep.rows.len());
    for (i, row) in sweep.rows.iter().enumerate() {
        let p = row.outcome.as_ref().expect("checked above");
        let mut cells = vec![Cell::Float(row.h_f), Cell::Float(p.avg_magnetization), Cell::Float(p.avg_rugosity_prequench), Cell::Float(p.nu_used)];
        if let Some((dm, dr)) = &derivatives {
            cells.push(Cell::Float(dm[i].1));
            cells.push(Cell::Float(dr[i].1));
        }
        table.push(cells);
        nu_used.push(Some(p.nu_used));
    }
    Ok(RunOutput { table, nu_used, nu_global_min: sweep.nu_global_min })
}

fn predict(config: &RunConfig) -> Result<RunOutput, CliError> {
    let mut table = Table::new(PREDICT_COLUMNS.to_vec());
    for hf in config.fields() {
        let p = critical_predictions(config.h0, hf, config.delta)?;
        table.push(
            [config.h0, hf, config.delta, p.h_c_qpt, p.e_c_esqpt_per_j, p.e_injected_per_j, p.h_f_dqpt, p.consistency_residual]
                .map(Cell::Float)
                .to_vec(),
        );
    }
    Ok(RunOutput { table, nu_used: Vec::new(), nu_global_min: None })
}

/// Computes the output table for `config` on a pool of `config.workers`
/// threads (0 selects the default width).
pub fn execute(config: &RunConfig) -> Result<RunOutput, CliError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.workers)
        .build()
        .map_err(|e| CliError::config(Some("workers"), e.to_string()))?;
    pool.install(|| match config.mode {
        Mode::Trace => trace(config),
        Mode::Sweep => sweep(config, false),
        Mode::Derivative => sweep(config, true),
        Mode::Predict => predict(config),
    })
}

/// Executes `config` and writes `<output>.csv` plus `<output>.json`.
pub fn run(config: &RunConfig) -> Result<(PathBuf, PathBuf), CliError> {
    let start = Instant::now();
    let out = execute(config)?;
    let meta = Metadata {
        software: env!("CARGO_PKG_NAME"),
        version: env!("CARGO_PKG_VERSION"),
        config: config.to_text(),
        data_file: format!("{}.csv", config.output),
        columns: out.table.columns.clone(),
        nu_used: out.nu_used,
        nu_global_min: out.nu_global_min,
        wall_clock_seconds: start.elapsed().as_secs_f64(),
        finished_unix_seconds: SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0),
    };
    write_outputs(&config.output, &out.table, &meta)
}
