use rayon::prelude::*;

use super::grid::TimeGrid;
use super::quench::{QuenchSetup, QuenchSpec};
use crate::compensated::cdot;
use crate::error::{Error, Result};
use crate::spin::{build_jz, expectation, StateVector};
use crate::texture::{neg_log_clipped, rugosity_with_floor, DEFAULT_CLIP_FLOOR, ORTHONORMAL_TOLERANCE};

/// Bit flags recording which quantities of a sample hit the clip floor.
pub mod clip {
    pub const RATE: u8 = 1;
    pub const RUGOSITY_PREQUENCH: u8 = 2;
    pub const RUGOSITY_FOURIER: u8 = 4;
}

/// Time series of one quench.
///
/// `rate` is `λ_t = −ln(L_t)/N`; both rugosities are raw `R` values (divide
/// by `N` for densities). Clipped entries hold the `−ln(floor)` bound and
/// are flagged in `clipped`.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagnosticTrace {
    pub times: Vec<f64>,
    pub echo: Vec<f64>,
    pub rate: Vec<f64>,
    pub rugosity_prequench: Vec<f64>,
    pub rugosity_fourier: Vec<f64>,
    pub magnetization: Vec<f64>,
    pub clipped: Vec<u8>,
}

impl DiagnosticTrace {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }
}

struct Sample {
    echo: f64,
    rate: f64,
    r_pre: f64,
    r_fourier: f64,
    magnetization: f64,
    clipped: u8,
}

pub fn loschmidt_trace(spec: &QuenchSpec, grid: &TimeGrid) -> Result<DiagnosticTrace> {
    let setup = QuenchSetup::new(spec)?;
    trace_from_setup(&setup, grid, DEFAULT_CLIP_FLOOR)
}

/// Evaluates every diagnostic on `grid`. Samples are independent and are
/// computed in parallel; the output order follows the grid.
pub fn trace_from_setup(setup: &QuenchSetup, grid: &TimeGrid, clip_floor: f64) -> Result<DiagnosticTrace> {
    let sector = setup.spec.sector;
    let n = sector.n_particles() as f64;
    let j = sector.j();
    let jz = build_jz(sector);
    let prop = &setup.propagator;

    let samples: Vec<Result<Sample>> = grid
        .times()
        .par_iter()
        .map(|&t| {
            let g = prop.loschmidt_amplitude(t);
            let echo = g.norm_sqr();
            let log_echo = neg_log_clipped(echo, clip_floor);
            let psi = prop.evolve(t);
            let r_pre = rugosity_with_floor(&psi, &setup.prequench, clip_floor)?;
            let r_fourier = rugosity_with_floor(&psi, &setup.fourier, clip_floor)?;
            let mut clipped = 0;
            if log_echo.clipped {
                clipped |= clip::RATE;
            }
            if r_pre.clipped {
                clipped |= clip::RUGOSITY_PREQUENCH;
            }
            if r_fourier.clipped {
                clipped |= clip::RUGOSITY_FOURIER;
            }
            Ok(Sample {
                echo,
                rate: log_echo.value / n,
                r_pre: r_pre.value,
                r_fourier: r_fourier.value,
                magnetization: expectation(&psi, &jz)? / j,
                clipped,
            })
        })
        .collect();

    let mut trace = DiagnosticTrace {
        times: grid.times().to_vec(),
        echo: Vec::with_capacity(grid.n_samples()),
        rate: Vec::with_capacity(grid.n_samples()),
        rugosity_prequench: Vec::with_capacity(grid.n_samples()),
        rugosity_fourier: Vec::with_capacity(grid.n_samples()),
        magnetization: Vec::with_capacity(grid.n_samples()),
        clipped: Vec::with_capacity(grid.n_samples()),
    };
    for s in samples {
        let s = s?;
        trace.echo.push(s.echo);
        trace.rate.push(s.rate);
        trace.rugosity_prequench.push(s.r_pre);
        trace.rugosity_fourier.push(s.r_fourier);
        trace.magnetization.push(s.magnetization);
        trace.clipped.push(s.clipped);
    }
    Ok(trace)
}

/// Return probability into a manifold of orthonormal states,
/// `Σ_g |⟨g|ψ_t⟩|²`.
pub fn loschmidt_echo_manifold(spec: &QuenchSpec, grid: &TimeGrid, manifold: &[StateVector]) -> Result<Vec<f64>> {
    let setup = QuenchSetup::new(spec)?;
    manifold_echo_from_setup(&setup, grid, manifold)
}

pub fn manifold_echo_from_setup(setup: &QuenchSetup, grid: &TimeGrid, manifold: &[StateVector]) -> Result<Vec<f64>> {
    let d = setup.spec.sector.dim();
    let mut worst: f64 = 0.0;
    for (a, ga) in manifold.iter().enumerate() {
        if ga.amplitudes().len() != d {
            return Err(Error::DimensionMismatch { expected: d, found: ga.amplitudes().len() });
        }
        for gb in &manifold[a..] {
            let target = if std::ptr::eq(ga, gb) { 1.0 } else { 0.0 };
            worst = worst.max((cdot(ga.amplitudes(), gb.amplitudes()) - target).norm());
        }
    }
    if worst > ORTHONORMAL_TOLERANCE {
        return Err(Error::NotOrthonormal { deviation: worst });
    }
    let prop = &setup.propagator;
    Ok(grid
        .times()
        .par_iter()
        .map(|&t| {
            let psi = prop.evolve(t);
            let total: f64 = manifold.iter().map(|g| cdot(g.amplitudes(), psi.amplitudes()).norm_sqr()).sum();
            total.min(1.0)
        })
        .collect())
}
