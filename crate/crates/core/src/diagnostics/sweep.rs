use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;

use super::grid::{time_average, TimeGrid};
use super::quench::{prepare, prequench_reference, QuenchSpec};
use crate::error::{Error, Result};
use crate::spectral::{diagonalize, smallest_bohr_frequency, EigenDecomposition, Propagator, Summation};
use crate::spin::{build_jz, expectation, StateVector};
use crate::texture::{rugosity_with_floor, OrthonormalBasis, DEFAULT_CLIP_FLOOR};

/// Which smallest Bohr frequency fixes the averaging horizon `T = t_factor/ν`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Horizon {
    /// `ν` of the point's own post-quench spectrum.
    #[default]
    PerPoint,
    /// Minimum `ν` over every successfully diagonalized point of the sweep.
    GlobalMin,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridRule {
    pub t_factor: f64,
    pub n_samples: usize,
    pub horizon: Horizon,
    pub clip_floor: f64,
}

impl Default for GridRule {
    fn default() -> Self {
        GridRule { t_factor: 1e3, n_samples: 20_000, horizon: Horizon::PerPoint, clip_floor: DEFAULT_CLIP_FLOOR }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepPoint {
    pub avg_magnetization: f64,
    pub avg_rugosity_prequench: f64,
    /// `ν` of this point's spectrum.
    pub nu_point: f64,
    /// `ν` that set the horizon, per the grid rule.
    pub nu_used: f64,
    pub t_max: f64,
    pub clipped_samples: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub h_f: f64,
    pub outcome: Result<SweepPoint>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepTable {
    pub rows: Vec<SweepRow>,
    pub nu_global_min: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepColumn {
    AvgMagnetization,
    AvgRugosityPrequench,
}

impl SweepColumn {
    pub fn name(self) -> &'static str {
        match self {
            SweepColumn::AvgMagnetization => "avg_magnetization",
            SweepColumn::AvgRugosityPrequench => "avg_rugosity_prequench",
        }
    }

    fn get(self, p: &SweepPoint) -> f64 {
        match self {
            SweepColumn::AvgMagnetization => p.avg_magnetization,
            SweepColumn::AvgRugosityPrequench => p.avg_rugosity_prequench,
        }
    }
}

struct Diagonalized {
    post: Arc<EigenDecomposition>,
    nu: f64,
}

/// Time-averaged `⟨J_z⟩/j` and `R_ε` for each post-quench field.
///
/// Rows come back sorted by `h_f`; a failure at one point is stored in that
/// row and does not abort the others.
pub fn order_parameter_sweep(hf_values: &[f64], base: &QuenchSpec, rule: GridRule) -> Result<SweepTable> {
    if rule.n_samples < 2 {
        return Err(Error::TooFewSamples { required: 2, found: rule.n_samples });
    }
    if !(rule.t_factor.is_finite() && rule.t_factor > 0.0) {
        return Err(Error::InvalidParameter { name: "t_factor", reason: format!("must be finite and positive, got {}", rule.t_factor) });
    }
    let mut hf_sorted = hf_values.to_vec();
    hf_sorted.sort_by(f64::total_cmp);

    let (prequench, pre_dec) = prequench_reference(base)?;
    let pre_dec = pre_dec.map(Arc::new);

    let specs: Vec<Result<QuenchSpec>> = hf_sorted.iter().map(|&hf| base.with_post_field(hf)).collect();
    let diag: Vec<Result<(QuenchSpec, Diagonalized)>> = specs
        .into_par_iter()
        .map(|spec| {
            let spec = spec?;
            let post = diagonalize(&spec.post_hamiltonian(), spec.sector)?.gauge_fix();
            let nu = smallest_bohr_frequency(&post)?;
            Ok((spec, Diagonalized { post: Arc::new(post), nu }))
        })
        .collect();

    let nu_global_min = diag.iter().filter_map(|d| d.as_ref().ok().map(|(_, d)| d.nu)).reduce(f64::min);

    let rows: Vec<SweepRow> = diag
        .into_par_iter()
        .zip(hf_sorted.par_iter())
        .map(|(d, &h_f)| {
            let outcome = d.and_then(|(spec, d)| {
                let nu_used = match rule.horizon {
                    Horizon::PerPoint => d.nu,
                    Horizon::GlobalMin => nu_global_min.unwrap_or(d.nu),
                };
                evaluate_point(&spec, &prequench, pre_dec.as_deref(), d, nu_used, rule)
            });
            SweepRow { h_f, outcome }
        })
        .collect();

    Ok(SweepTable { rows, nu_global_min })
}

fn evaluate_point(
    spec: &QuenchSpec,
    prequench: &OrthonormalBasis,
    pre_dec: Option<&EigenDecomposition>,
    d: Diagonalized,
    nu_used: f64,
    rule: GridRule,
) -> Result<SweepPoint> {
    let t_max = rule.t_factor / nu_used;
    let grid = TimeGrid::new(t_max, rule.n_samples)?;
    let prepared = prepare(spec, pre_dec)?;
    let propagator = Propagator::new(d.post, &prepared.state)?;
    let sector = spec.sector;
    let jz = build_jz(sector);
    let j = sector.j();

    let samples: Vec<Result<(f64, f64, bool)>> = grid
        .times()
        .par_iter()
        .map(|&t| {
            let mut amps = vec![Complex64::new(0.0, 0.0); sector.dim()];
            propagator.evolve_into(t, Summation::Plain, &mut amps);
            let psi = StateVector::from_parts_unchecked(sector, amps);
            let r = rugosity_with_floor(&psi, prequench, rule.clip_floor)?;
            Ok((expectation(&psi, &jz)? / j, r.value, r.clipped))
        })
        .collect();

    let mut mag = Vec::with_capacity(samples.len());
    let mut rug = Vec::with_capacity(samples.len());
    let mut clipped_samples = 0;
    for s in samples {
        let (m, r, c) = s?;
        mag.push(m);
        rug.push(r);
        clipped_samples += c as usize;
    }
    Ok(SweepPoint {
        avg_magnetization: time_average(&mag, &grid)?,
        avg_rugosity_prequench: time_average(&rug, &grid)?,
        nu_point: d.nu,
        nu_used,
        t_max,
        clipped_samples,
    })
}

/// `(h_f, d column / d h_f)` for a sweep whose rows all succeeded.
pub fn sweep_derivative(table: &SweepTable, column: SweepColumn) -> Result<Vec<(f64, f64)>> {
    let mut xs = Vec::with_capacity(table.rows.len());
    let mut ys = Vec::with_capacity(table.rows.len());
    for row in &table.rows {
        match &row.outcome {
            Ok(p) => {
                xs.push(row.h_f);
                ys.push(column.get(p));
            }
            Err(e) => return Err(e.clone()),
        }
    }
    let dy = finite_difference(&xs, &ys)?;
    Ok(xs.into_iter().zip(dy).collect())
}

/// Central differences in the interior, first-order one-sided at the ends.
pub fn finite_difference(xs: &[f64], ys: &[f64]) -> Result<Vec<f64>> {
    let n = xs.len();
    if ys.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: ys.len() });
    }
    if n < 3 {
        return Err(Error::TooFewSamples { required: 3, found: n });
    }
    let h = (xs[n - 1] - xs[0]) / (n - 1) as f64;
    if !(h > 0.0) {
        return Err(Error::NonUniformSpacing { index: 1 });
    }
    for (i, w) in xs.windows(2).enumerate() {
        if ((w[1] - w[0]) - h).abs() > 1e-9 * h {
            return Err(Error::NonUniformSpacing { index: i + 1 });
        }
    }
    let mut dy = Vec::with_capacity(n);
    dy.push((ys[1] - ys[0]) / (xs[1] - xs[0]));
    for i in 1..n - 1 {
        dy.push((ys[i + 1] - ys[i - 1]) / (xs[i + 1] - xs[i - 1]));
    }
    dy.push((ys[n - 1] - ys[n - 2]) / (xs[n - 1] - xs[n - 2]));
    Ok(dy)
}

/// `n` uniform points on `[min, max]`, endpoints included.
pub fn uniform_fields(min: f64, max: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![min],
        _ => (0..n).map(|i| if i == n - 1 { max } else { min + (max - min) * (i as f64 / (n - 1) as f64) }).collect(),
    }
}
