//! Collective-spin operators and the LMG Hamiltonian in the Dicke basis.
//!
//! Basis convention: Dicke index `i = m + j`, ascending in `m`, so index 0
//! is `|m = -j⟩` and index `2j` is `|m = +j⟩`.

use num_complex::Complex64;

use crate::compensated::{cdot, ComplexAccumulator};
use crate::error::{Error, Result};

/// Tolerance on the Euclidean norm of a [`StateVector`].
pub const NORM_TOLERANCE: f64 = 1e-12;

/// Fully symmetric sector of `N = 2j` spin-1/2 particles.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SpinSector {
    two_j: u32,
}

impl SpinSector {
    pub fn new(two_j: u32) -> Result<Self> {
        if two_j == 0 {
            return Err(Error::InvalidSpin(0));
        }
        Ok(SpinSector { two_j })
    }

    pub fn two_j(&self) -> u32 {
        self.two_j
    }

    pub fn j(&self) -> f64 {
        self.two_j as f64 / 2.0
    }

    pub fn dim(&self) -> usize {
        self.two_j as usize + 1
    }

    pub fn n_particles(&self) -> u32 {
        self.two_j
    }

    /// Magnetic quantum number of Dicke index `i`.
    pub fn m(&self, index: usize) -> f64 {
        (2.0 * index as f64 - self.two_j as f64) / 2.0
    }

    pub fn m_values(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.dim()).map(move |i| self.m(i))
    }

    /// Index of `|m = +j⟩`.
    pub fn top_index(&self) -> usize {
        self.two_j as usize
    }
}

/// Transverse field `h` and interaction strength `delta`, both non-negative.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LmgParams {
    pub h: f64,
    pub delta: f64,
}

impl LmgParams {
    pub fn new(h: f64, delta: f64) -> Result<Self> {
        if !(h.is_finite() && h >= 0.0) {
            return Err(Error::InvalidParameter { name: "h", reason: format!("must be finite and >= 0, got {h}") });
        }
        if !(delta.is_finite() && delta >= 0.0) {
            return Err(Error::InvalidParameter {
                name: "delta",
                reason: format!("must be finite and >= 0, got {delta}"),
            });
        }
        Ok(LmgParams { h, delta })
    }
}

/// Operators usable in expectation values and diagonal-ensemble averages.
pub trait Observable {
    fn dim(&self) -> usize;

    /// `out = O x` for a real vector.
    fn apply_real(&self, x: &[f64], out: &mut [f64]);

    /// `⟨ψ|O|ψ⟩` as a complex number; the imaginary part is round-off only.
    fn quadratic_form(&self, psi: &[Complex64]) -> Complex64;
}

/// Real diagonal operator.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagonalOperator {
    pub diag: Vec<f64>,
}

impl DiagonalOperator {
    pub fn identity(dim: usize) -> Self {
        DiagonalOperator { diag: vec![1.0; dim] }
    }

    /// Entrywise square, e.g. `J_z²` from `J_z`.
    pub fn squared(&self) -> Self {
        DiagonalOperator { diag: self.diag.iter().map(|x| x * x).collect() }
    }
}

impl Observable for DiagonalOperator {
    fn dim(&self) -> usize {
        self.diag.len()
    }

    fn apply_real(&self, x: &[f64], out: &mut [f64]) {
        for ((o, &d), &xi) in out.iter_mut().zip(&self.diag).zip(x) {
            *o = d * xi;
        }
    }

    fn quadratic_form(&self, psi: &[Complex64]) -> Complex64 {
        let mut acc = ComplexAccumulator::default();
        for (&d, z) in self.diag.iter().zip(psi) {
            acc.add(Complex64::new(d * z.norm_sqr(), 0.0));
        }
        acc.value()
    }
}

/// Real symmetric tridiagonal matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SymTridiagonal {
    pub diag: Vec<f64>,
    pub offdiag: Vec<f64>,
}

impl SymTridiagonal {
    pub fn new(diag: Vec<f64>, offdiag: Vec<f64>) -> Result<Self> {
        if diag.is_empty() || offdiag.len() + 1 != diag.len() {
            return Err(Error::DimensionMismatch { expected: diag.len().saturating_sub(1), found: offdiag.len() });
        }
        if let Some(index) = diag.iter().chain(&offdiag).position(|x| !x.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        Ok(SymTridiagonal { diag, offdiag })
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    pub fn is_diagonal(&self) -> bool {
        self.offdiag.iter().all(|&e| e == 0.0)
    }

    /// Row-major dense copy. Only meant for building test oracles.
    pub fn to_dense(&self) -> Vec<f64> {
        let n = self.dim();
        let mut a = vec![0.0; n * n];
        for i in 0..n {
            a[i * n + i] = self.diag[i];
        }
        for (i, &e) in self.offdiag.iter().enumerate() {
            a[i * n + i + 1] = e;
            a[(i + 1) * n + i] = e;
        }
        a
    }

    /// `y = H x` for complex `x`.
    pub fn apply_complex(&self, x: &[Complex64], out: &mut [Complex64]) {
        let n = self.dim();
        for i in 0..n {
            let mut y = x[i] * self.diag[i];
            if i > 0 {
                y += x[i - 1] * self.offdiag[i - 1];
            }
            if i + 1 < n {
                y += x[i + 1] * self.offdiag[i];
            }
            out[i] = y;
        }
    }

    /// Smallest and largest eigenvalue bounds from Gershgorin discs.
    pub fn gershgorin_range(&self) -> (f64, f64) {
        let n = self.dim();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let mut r = 0.0;
            if i > 0 {
                r += self.offdiag[i - 1].abs();
            }
            if i + 1 < n {
                r += self.offdiag[i].abs();
            }
            lo = lo.min(self.diag[i] - r);
            hi = hi.max(self.diag[i] + r);
        }
        (lo, hi)
    }
}

impl Observable for SymTridiagonal {
    fn dim(&self) -> usize {
        self.diag.len()
    }

    fn apply_real(&self, x: &[f64], out: &mut [f64]) {
        let n = self.dim();
        for i in 0..n {
            let mut y = self.diag[i] * x[i];
            if i > 0 {
                y += self.offdiag[i - 1] * x[i - 1];
            }
            if i + 1 < n {
                y += self.offdiag[i] * x[i + 1];
            }
            out[i] = y;
        }
    }

    fn quadratic_form(&self, psi: &[Complex64]) -> Complex64 {
        let mut hpsi = vec![Complex64::new(0.0, 0.0); psi.len()];
        self.apply_complex(psi, &mut hpsi);
        cdot(psi, &hpsi)
    }
}

/// Normalized pure state in the Dicke basis.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amplitudes: Vec<Complex64>,
    sector: SpinSector,
}

impl StateVector {
    pub fn new(sector: SpinSector, amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.len() != sector.dim() {
            return Err(Error::DimensionMismatch { expected: sector.dim(), found: amplitudes.len() });
        }
        let norm = cdot(&amplitudes, &amplitudes).re.sqrt();
        if !norm.is_finite() || (norm - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::NotNormalized { norm });
        }
        Ok(StateVector { amplitudes, sector })
    }

    /// Normalizes `amplitudes` before wrapping them.
    pub fn normalized(sector: SpinSector, mut amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.len() != sector.dim() {
            return Err(Error::DimensionMismatch { expected: sector.dim(), found: amplitudes.len() });
        }
        let norm = cdot(&amplitudes, &amplitudes).re.sqrt();
        if !(norm.is_finite() && norm > 0.0) {
            return Err(Error::NotNormalized { norm });
        }
        for a in &mut amplitudes {
            *a /= norm;
        }
        Self::new(sector, amplitudes)
    }

    pub fn from_real(sector: SpinSector, amplitudes: &[f64]) -> Result<Self> {
        Self::new(sector, amplitudes.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    /// Dicke state `|m⟩` at basis index `index`.
    pub fn dicke(sector: SpinSector, index: usize) -> Result<Self> {
        if index >= sector.dim() {
            return Err(Error::DimensionMismatch { expected: sector.dim(), found: index + 1 });
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); sector.dim()];
        amplitudes[index] = Complex64::new(1.0, 0.0);
        Ok(StateVector { amplitudes, sector })
    }

    pub(crate) fn from_parts_unchecked(sector: SpinSector, amplitudes: Vec<Complex64>) -> Self {
        debug_assert_eq!(amplitudes.len(), sector.dim());
        StateVector { amplitudes, sector }
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn sector(&self) -> SpinSector {
        self.sector
    }

    pub fn norm(&self) -> f64 {
        cdot(&self.amplitudes, &self.amplitudes).re.sqrt()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &StateVector) -> Result<Complex64> {
        if self.amplitudes.len() != other.amplitudes.len() {
            return Err(Error::DimensionMismatch { expected: self.amplitudes.len(), found: other.amplitudes.len() });
        }
        Ok(cdot(&self.amplitudes, &other.amplitudes))
    }

    /// Multiplies every amplitude by `e^{iθ}`.
    pub fn with_global_phase(&self, theta: f64) -> StateVector {
        let phase = Complex64::from_polar(1.0, theta);
        StateVector { amplitudes: self.amplitudes.iter().map(|a| a * phase).collect(), sector: self.sector }
    }
}

pub fn build_jz(sector: SpinSector) -> DiagonalOperator {
    DiagonalOperator { diag: sector.m_values().collect() }
}

fn ladder_coupling(j: f64, m: f64) -> f64 {
    // ⟨m+1|J_x|m⟩ = (1/2)√(j(j+1) − m(m+1))
    0.5 * (j * (j + 1.0) - m * (m + 1.0)).max(0.0).sqrt()
}

pub fn build_jx(sector: SpinSector) -> SymTridiagonal {
    let j = sector.j();
    let d = sector.dim();
    SymTridiagonal {
        diag: vec![0.0; d],
        offdiag: (0..d - 1).map(|i| ladder_coupling(j, sector.m(i))).collect(),
    }
}

/// `H = −h J_x − (δ/2j) J_z²`.
pub fn build_lmg_hamiltonian(sector: SpinSector, params: LmgParams) -> SymTridiagonal {
    let j = sector.j();
    let d = sector.dim();
    let scale = params.delta / (2.0 * j);
    SymTridiagonal {
        diag: sector.m_values().map(|m| -scale * m * m).collect(),
        offdiag: (0..d - 1).map(|i| -params.h * ladder_coupling(j, sector.m(i))).collect(),
    }
}

/// `⟨ψ|O|ψ⟩` for a Hermitian operator.
pub fn expectation<O: Observable + ?Sized>(state: &StateVector, op: &O) -> Result<f64> {
    if op.dim() != state.amplitudes.len() {
        return Err(Error::DimensionMismatch { expected: state.amplitudes.len(), found: op.dim() });
    }
    let value = op.quadratic_form(&state.amplitudes);
    debug_assert!(value.im.abs() <= 1e-12 * value.re.abs().max(1.0), "imaginary part {}", value.im);
    Ok(value.re)
}
