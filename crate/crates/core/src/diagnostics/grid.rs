use crate::compensated::Accumulator;
use crate::error::{Error, Result};

/// Uniform time grid `t_i = t_max · i / (n − 1)`, `i = 0..n`.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeGrid {
    t_max: f64,
    times: Vec<f64>,
}

impl TimeGrid {
    pub fn new(t_max: f64, n_samples: usize) -> Result<Self> {
        if n_samples == 0 {
            return Err(Error::TooFewSamples { required: 1, found: 0 });
        }
        if !(t_max.is_finite() && t_max >= 0.0) || (n_samples > 1 && t_max == 0.0) {
            return Err(Error::InvalidParameter { name: "t_max", reason: format!("must be finite and positive, got {t_max}") });
        }
        let times = if n_samples == 1 {
            vec![0.0]
        } else {
            let last = (n_samples - 1) as f64;
            (0..n_samples).map(|i| t_max * (i as f64 / last)).collect()
        };
        Ok(TimeGrid { t_max, times })
    }

    pub fn t_max(&self) -> f64 {
        self.t_max
    }

    pub fn n_samples(&self) -> usize {
        self.times.len()
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }
}

/// `(1/T) ∫_0^T f(t) dt` by the trapezoidal rule on the grid.
pub fn time_average(series: &[f64], grid: &TimeGrid) -> Result<f64> {
    let n = series.len();
    if n < 2 {
        return Err(Error::TooFewSamples { required: 2, found: n });
    }
    if n != grid.n_samples() {
        return Err(Error::DimensionMismatch { expected: grid.n_samples(), found: n });
    }
    let mut acc = Accumulator::ZERO;
    for &x in &series[1..n - 1] {
        acc.add(x);
    }
    acc.add(0.5 * series[0]);
    acc.add(0.5 * series[n - 1]);
    // uniform spacing T/(n−1) cancels against the 1/T normalization
    Ok(acc.value() / (n - 1) as f64)
}
