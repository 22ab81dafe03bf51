//! Diagonalization with a fixed eigenvector gauge, and exact propagation.

mod propagator;
mod tql;

pub use propagator::{diagonal_ensemble_average, Propagator, Summation};

use crate::error::{Error, Result};
use crate::spin::{SpinSector, SymTridiagonal};

/// Gaps at or below this fraction of the spectral range count as degenerate.
pub const DEGENERACY_RTOL: f64 = 1e-12;

/// Relative tolerance under which two entries compete for "largest" in the
/// gauge rule; the lower Dicke index wins.
pub const GAUGE_TIE_RTOL: f64 = 1e-10;

/// Spectral data of a real symmetric matrix.
///
/// Eigenvalues ascend; eigenvectors are stored column-major so that column
/// `k` is the contiguous slice `vectors[k*d..(k+1)*d]`.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenDecomposition {
    eigenvalues: Vec<f64>,
    vectors: Vec<f64>,
    sector: SpinSector,
    gauge_fixed: bool,
}

impl EigenDecomposition {
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn sector(&self) -> SpinSector {
        self.sector
    }

    pub fn is_gauge_fixed(&self) -> bool {
        self.gauge_fixed
    }

    pub fn vector(&self, k: usize) -> &[f64] {
        let d = self.dim();
        &self.vectors[k * d..(k + 1) * d]
    }

    /// Entry `(row, col)` of the eigenvector matrix.
    pub fn entry(&self, row: usize, col: usize) -> f64 {
        self.vectors[col * self.dim() + row]
    }

    /// All columns, column-major.
    pub fn vectors(&self) -> &[f64] {
        &self.vectors
    }

    pub fn spectral_range(&self) -> f64 {
        match (self.eigenvalues.first(), self.eigenvalues.last()) {
            (Some(lo), Some(hi)) => hi - lo,
            _ => 0.0,
        }
    }

    pub fn degeneracy_floor(&self) -> f64 {
        DEGENERACY_RTOL * self.spectral_range()
    }

    /// Replaces column `k` by its negative. Physics is unchanged; only the
    /// gauge is touched, so the result is no longer marked gauge-fixed.
    pub fn flip_column(mut self, k: usize) -> Self {
        let d = self.dim();
        for v in &mut self.vectors[k * d..(k + 1) * d] {
            *v = -*v;
        }
        self.gauge_fixed = false;
        self
    }

    /// Applies the gauge rule: in every column the entry of largest
    /// magnitude is made non-negative, ties going to the lowest index.
    pub fn gauge_fix(mut self) -> Self {
        let d = self.dim();
        for col in self.vectors.chunks_exact_mut(d) {
            let max = col.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
            let pivot = col.iter().position(|v| v.abs() >= max * (1.0 - GAUGE_TIE_RTOL)).unwrap_or(0);
            if col[pivot] < 0.0 {
                col.iter_mut().for_each(|v| *v = -*v);
            }
        }
        self.gauge_fixed = true;
        self
    }

    /// Builds a decomposition from precomputed data. Columns are expected to
    /// be orthonormal; the gauge is left untouched.
    pub fn from_parts(sector: SpinSector, eigenvalues: Vec<f64>, vectors: Vec<f64>) -> Result<Self> {
        let d = sector.dim();
        if eigenvalues.len() != d {
            return Err(Error::DimensionMismatch { expected: d, found: eigenvalues.len() });
        }
        if vectors.len() != d * d {
            return Err(Error::DimensionMismatch { expected: d * d, found: vectors.len() });
        }
        Ok(EigenDecomposition { eigenvalues, vectors, sector, gauge_fixed: false })
    }

    /// `max |VᵀV − I|`.
    pub fn orthonormality_error(&self) -> f64 {
        let d = self.dim();
        let mut worst: f64 = 0.0;
        for a in 0..d {
            for b in a..d {
                let dot: f64 = self.vector(a).iter().zip(self.vector(b)).map(|(x, y)| x * y).sum();
                let target = if a == b { 1.0 } else { 0.0 };
                worst = worst.max((dot - target).abs());
            }
        }
        worst
    }

    /// `max |HV − VΛ|`.
    pub fn residual(&self, h: &SymTridiagonal) -> f64 {
        use crate::spin::Observable;
        let d = self.dim();
        let mut hv = vec![0.0; d];
        let mut worst: f64 = 0.0;
        for k in 0..d {
            h.apply_real(self.vector(k), &mut hv);
            let lam = self.eigenvalues[k];
            for (x, v) in hv.iter().zip(self.vector(k)) {
                worst = worst.max((x - lam * v).abs());
            }
        }
        worst
    }
}

/// Full eigen-decomposition of a symmetric tridiagonal Hamiltonian. The
/// result is not yet gauge-fixed; chain [`EigenDecomposition::gauge_fix`].
pub fn diagonalize(h: &SymTridiagonal, sector: SpinSector) -> Result<EigenDecomposition> {
    let d = h.dim();
    if d != sector.dim() {
        return Err(Error::DimensionMismatch { expected: sector.dim(), found: d });
    }
    if let Some(index) = h.diag.iter().chain(&h.offdiag).position(|x| !x.is_finite()) {
        return Err(Error::NonFinite { index });
    }
    let mut eigenvalues = h.diag.clone();
    let mut vectors = vec![0.0; d * d];
    tql::tql2(&mut eigenvalues, &h.offdiag, &mut vectors)?;
    Ok(EigenDecomposition { eigenvalues, vectors, sector, gauge_fixed: false })
}

/// Smallest Bohr frequency `λ_m − λ_n` above `floor`, for ascending `eigenvalues`.
pub fn smallest_gap_above(eigenvalues: &[f64], floor: f64) -> Option<f64> {
    let mut best: Option<f64> = None;
    let mut k = 0;
    for (i, &lam) in eigenvalues.iter().enumerate() {
        k = k.max(i + 1);
        while k < eigenvalues.len() && eigenvalues[k] - lam <= floor {
            k += 1;
        }
        if k < eigenvalues.len() {
            let gap = eigenvalues[k] - lam;
            best = Some(best.map_or(gap, |b: f64| b.min(gap)));
        }
    }
    best
}

/// Smallest non-degenerate Bohr frequency of the spectrum, using the
/// relative degeneracy floor [`DEGENERACY_RTOL`].
pub fn smallest_bohr_frequency(decomposition: &EigenDecomposition) -> Result<f64> {
    smallest_gap_above(decomposition.eigenvalues(), decomposition.degeneracy_floor())
        .ok_or(Error::DegenerateSpectrum)
}
