//! Flat states, conjugate bases and rugosity of pure states.
//!
//! The rugosity of `|ψ⟩` relative to an orthonormal basis `{|b_k⟩}` is
//! `R = −ln |⟨ω|ψ⟩|²`, where `|ω⟩ = d^{-1/2} Σ_k |b_k⟩` is the flat state of
//! that basis. Every basis carries its flat state, computed once at
//! construction with the most accurate route available for its kind.

use std::fmt;
use std::sync::{Arc, OnceLock};

use num_complex::Complex64;

use crate::compensated::{cdot, roots_of_unity, ComplexAccumulator, DoubleDouble};
use crate::error::{Error, Result};
use crate::spectral::{diagonalize, EigenDecomposition};
use crate::spin::{SpinSector, StateVector, SymTridiagonal};

/// Squared overlaps below this are reported as clipped instead of producing
/// huge or infinite logarithms.
pub const DEFAULT_CLIP_FLOOR: f64 = 1e-280;

/// Orthonormality tolerance for user-supplied bases.
pub const ORTHONORMAL_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BasisLabel {
    Dicke,
    PrequenchEigen,
    FourierConjugate,
    Custom,
}

impl fmt::Display for BasisLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BasisLabel::Dicke => "dicke",
            BasisLabel::PrequenchEigen => "prequench-eigen",
            BasisLabel::FourierConjugate => "fourier-conjugate",
            BasisLabel::Custom => "custom",
        })
    }
}

#[derive(Debug, Clone)]
enum Kind {
    Identity,
    Dense(Arc<Vec<Complex64>>),
    /// Discrete-Fourier basis over `frame` (Dicke basis when `None`),
    /// phased so that its flat state is frame vector `anchor`.
    Fourier { anchor: usize, frame: Option<Arc<OrthonormalBasis>> },
}

/// Orthonormal basis of the symmetric sector, columns in the Dicke basis.
#[derive(Debug, Clone)]
pub struct OrthonormalBasis {
    sector: SpinSector,
    label: BasisLabel,
    kind: Kind,
    flat: Vec<Complex64>,
    dense: OnceLock<Arc<Vec<Complex64>>>,
}

impl OrthonormalBasis {
    pub fn dicke(sector: SpinSector) -> Self {
        let d = sector.dim();
        let a = 1.0 / (d as f64).sqrt();
        OrthonormalBasis {
            sector,
            label: BasisLabel::Dicke,
            kind: Kind::Identity,
            flat: vec![Complex64::new(a, 0.0); d],
            dense: OnceLock::new(),
        }
    }

    /// Wraps column-major complex columns after checking orthonormality.
    pub fn from_columns(sector: SpinSector, columns: Vec<Complex64>, label: BasisLabel) -> Result<Self> {
        let d = sector.dim();
        if columns.len() != d * d {
            return Err(Error::DimensionMismatch { expected: d * d, found: columns.len() });
        }
        let deviation = orthonormality_deviation(&columns, d);
        if deviation > ORTHONORMAL_TOLERANCE {
            return Err(Error::NotOrthonormal { deviation });
        }
        let flat = column_sum_flat(&columns, d);
        Ok(OrthonormalBasis { sector, label, kind: Kind::Dense(Arc::new(columns)), flat, dense: OnceLock::new() })
    }

    /// Real orthonormal columns, e.g. eigenvectors of a real Hamiltonian.
    pub fn from_decomposition(decomposition: &EigenDecomposition, label: BasisLabel) -> Result<Self> {
        let columns = decomposition.vectors().iter().map(|&v| Complex64::new(v, 0.0)).collect();
        Self::from_columns(decomposition.sector(), columns, label)
    }

    pub fn sector(&self) -> SpinSector {
        self.sector
    }

    pub fn dim(&self) -> usize {
        self.sector.dim()
    }

    pub fn label(&self) -> BasisLabel {
        self.label
    }

    /// Column-major `d × d` matrix; column `k` is `|b_k⟩`.
    pub fn vectors(&self) -> Arc<Vec<Complex64>> {
        Arc::clone(self.dense.get_or_init(|| Arc::new(self.materialize())))
    }

    pub fn column(&self, k: usize) -> Vec<Complex64> {
        let d = self.dim();
        self.vectors()[k * d..(k + 1) * d].to_vec()
    }

    /// Flat-state amplitudes in the Dicke basis.
    pub fn flat_amplitudes(&self) -> &[Complex64] {
        &self.flat
    }

    /// Expresses this basis in rotated coordinates: returns `{U|b_k⟩}`.
    pub fn transformed(&self, unitary: &OrthonormalBasis) -> Result<OrthonormalBasis> {
        let d = self.dim();
        if unitary.dim() != d {
            return Err(Error::DimensionMismatch { expected: d, found: unitary.dim() });
        }
        let u = unitary.vectors();
        let b = self.vectors();
        let mut columns = vec![Complex64::new(0.0, 0.0); d * d];
        for k in 0..d {
            let out = &mut columns[k * d..(k + 1) * d];
            matvec(&u, d, &b[k * d..(k + 1) * d], out);
        }
        OrthonormalBasis::from_columns(self.sector, columns, BasisLabel::Custom)
    }

    fn materialize(&self) -> Vec<Complex64> {
        let d = self.dim();
        match &self.kind {
            Kind::Identity => {
                let mut m = vec![Complex64::new(0.0, 0.0); d * d];
                for i in 0..d {
                    m[i * d + i] = Complex64::new(1.0, 0.0);
                }
                m
            }
            Kind::Dense(cols) => cols.as_ref().clone(),
            Kind::Fourier { anchor, frame } => {
                let f = fourier_columns(d, *anchor);
                match frame {
                    None => f,
                    Some(frame) => {
                        let u = frame.vectors();
                        let mut out = vec![Complex64::new(0.0, 0.0); d * d];
                        for k in 0..d {
                            matvec(&u, d, &f[k * d..(k + 1) * d], &mut out[k * d..(k + 1) * d]);
                        }
                        out
                    }
                }
            }
        }
    }
}

fn matvec(u: &[Complex64], d: usize, x: &[Complex64], out: &mut [Complex64]) {
    let mut acc = vec![ComplexAccumulator::default(); d];
    for (col, &xk) in u.chunks_exact(d).zip(x) {
        if xk.re == 0.0 && xk.im == 0.0 {
            continue;
        }
        for (a, &ui) in acc.iter_mut().zip(col) {
            a.add_real_prod(ui.re, xk);
            a.add_real_prod(-ui.im, Complex64::new(xk.im, -xk.re));
        }
    }
    for (o, a) in out.iter_mut().zip(acc) {
        *o = a.value();
    }
}

fn orthonormality_deviation(columns: &[Complex64], d: usize) -> f64 {
    let mut worst: f64 = 0.0;
    for a in 0..d {
        let ca = &columns[a * d..(a + 1) * d];
        for b in a..d {
            let g = cdot(ca, &columns[b * d..(b + 1) * d]);
            let target = if a == b { 1.0 } else { 0.0 };
            worst = worst.max((g - target).norm());
        }
    }
    worst
}

fn column_sum_flat(columns: &[Complex64], d: usize) -> Vec<Complex64> {
    let scale = 1.0 / (d as f64).sqrt();
    let mut acc = vec![ComplexAccumulator::default(); d];
    for col in columns.chunks_exact(d) {
        for (a, &z) in acc.iter_mut().zip(col) {
            a.add(z);
        }
    }
    acc.into_iter().map(|a| a.value() * scale).collect()
}

/// Column `k`, row `m`: `d^{-1/2} exp(−i (m − anchor) 2πk/d)`.
fn fourier_columns(d: usize, anchor: usize) -> Vec<Complex64> {
    let scale = 1.0 / (d as f64).sqrt();
    let roots: Vec<Complex64> = roots_of_unity(d).into_iter().map(|(c, s)| Complex64::new(c.to_f64(), s.to_f64())).collect();
    let mut m = vec![Complex64::new(0.0, 0.0); d * d];
    for k in 0..d {
        for row in 0..d {
            let r = residue(row, anchor, k, d);
            m[k * d + row] = roots[r] * scale;
        }
    }
    m
}

/// `((row − anchor) k) mod d`, in exact integer arithmetic.
fn residue(row: usize, anchor: usize, k: usize, d: usize) -> usize {
    let shift = (row + d - anchor % d) % d;
    (shift * k) % d
}

/// Flat state of the Fourier basis, `(1/d) Σ_k exp(−i (m − anchor) 2πk/d)`,
/// summed in double-double arithmetic so that the off-anchor entries come
/// out at the 1e-30 level rather than at double round-off.
fn fourier_flat(d: usize, anchor: usize) -> Vec<Complex64> {
    let roots = roots_of_unity(d);
    (0..d)
        .map(|row| {
            let (mut re, mut im) = (DoubleDouble::ZERO, DoubleDouble::ZERO);
            for k in 0..d {
                let (c, s) = roots[residue(row, anchor, k, d)];
                re = re + c;
                im = im + s;
            }
            Complex64::new(re.div_f64(d as f64).to_f64(), im.div_f64(d as f64).to_f64())
        })
        .collect()
}

/// Equal-weight superposition of a basis.
#[derive(Debug, Clone, PartialEq)]
pub struct FlatState {
    pub state: StateVector,
    pub basis_label: BasisLabel,
}

pub fn flat_state(basis: &OrthonormalBasis) -> FlatState {
    FlatState {
        state: StateVector::from_parts_unchecked(basis.sector, basis.flat.clone()),
        basis_label: basis.label,
    }
}

/// Rugosity value; `clipped` marks overlaps below the clip floor, in which
/// case `value` is the bound `−ln(floor)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rugosity {
    pub value: f64,
    pub clipped: bool,
}

/// `−ln p` for a probability-like quantity, with the clip rule applied.
pub fn neg_log_clipped(p: f64, floor: f64) -> Rugosity {
    if !(p >= floor) || p == 0.0 {
        Rugosity { value: -floor.max(f64::MIN_POSITIVE).ln(), clipped: true }
    } else {
        Rugosity { value: (-p.ln()).max(0.0), clipped: false }
    }
}

/// `⟨ω|ψ⟩` for the flat state of `basis`.
pub fn flat_overlap(state: &StateVector, basis: &OrthonormalBasis) -> Result<Complex64> {
    if state.amplitudes().len() != basis.dim() {
        return Err(Error::DimensionMismatch { expected: basis.dim(), found: state.amplitudes().len() });
    }
    Ok(cdot(&basis.flat, state.amplitudes()))
}

pub fn rugosity(state: &StateVector, basis: &OrthonormalBasis) -> Result<Rugosity> {
    rugosity_with_floor(state, basis, DEFAULT_CLIP_FLOOR)
}

pub fn rugosity_with_floor(state: &StateVector, basis: &OrthonormalBasis, floor: f64) -> Result<Rugosity> {
    let ov = flat_overlap(state, basis)?;
    Ok(neg_log_clipped(ov.norm_sqr(), floor))
}

/// Discrete-Fourier basis conjugate to the Dicke basis, anchored so that its
/// flat state is exactly the Dicke vector `anchor_index`.
pub fn fourier_conjugate_basis(anchor_index: usize, sector: SpinSector) -> Result<OrthonormalBasis> {
    let d = sector.dim();
    if anchor_index >= d {
        return Err(Error::DimensionMismatch { expected: d, found: anchor_index + 1 });
    }
    Ok(OrthonormalBasis {
        sector,
        label: BasisLabel::FourierConjugate,
        kind: Kind::Fourier { anchor: anchor_index, frame: None },
        flat: fourier_flat(d, anchor_index),
        dense: OnceLock::new(),
    })
}

/// Fourier basis built over an arbitrary frame `{|f_m⟩}` instead of the
/// Dicke basis: `|φ_k⟩ = d^{-1/2} Σ_m e^{−i(m − anchor)φ_k} |f_m⟩`. Its flat
/// state is `|f_anchor⟩`.
pub fn fourier_conjugate_in_frame(frame: Arc<OrthonormalBasis>, anchor_index: usize) -> Result<OrthonormalBasis> {
    let d = frame.dim();
    if anchor_index >= d {
        return Err(Error::DimensionMismatch { expected: d, found: anchor_index + 1 });
    }
    let local = fourier_flat(d, anchor_index);
    let mut flat = vec![Complex64::new(0.0, 0.0); d];
    matvec(&frame.vectors(), d, &local, &mut flat);
    Ok(OrthonormalBasis {
        sector: frame.sector,
        label: BasisLabel::FourierConjugate,
        kind: Kind::Fourier { anchor: anchor_index, frame: Some(frame) },
        flat,
        dense: OnceLock::new(),
    })
}

/// Eigenbasis of the pre-quench Hamiltonian. A diagonal `H_0` (zero
/// transverse field) yields the Dicke basis itself, which fixes the choice
/// inside its `m ↔ −m` doublets.
pub fn prequench_basis(h0: &SymTridiagonal, sector: SpinSector) -> Result<OrthonormalBasis> {
    if h0.dim() != sector.dim() {
        return Err(Error::DimensionMismatch { expected: sector.dim(), found: h0.dim() });
    }
    if h0.is_diagonal() {
        return Ok(OrthonormalBasis::dicke(sector));
    }
    let dec = diagonalize(h0, sector)?.gauge_fix();
    OrthonormalBasis::from_decomposition(&dec, BasisLabel::PrequenchEigen)
}

/// `R / N` with `N = 2j`.
pub fn rugosity_density(r: f64, sector: SpinSector) -> f64 {
    r / sector.n_particles() as f64
}
