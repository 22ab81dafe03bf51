use std::sync::Arc;

use num_complex::Complex64;

use super::EigenDecomposition;
use crate::compensated::{Accumulator, ComplexAccumulator};
use crate::error::{Error, Result};
use crate::spin::{Observable, StateVector, NORM_TOLERANCE};

/// How the eigenbasis expansion is summed back into the Dicke basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Summation {
    /// Error-free products and compensated sums. Entries keep full relative
    /// accuracy even when they result from heavy cancellation.
    #[default]
    Compensated,
    /// Plain floating-point accumulation; a few times faster, absolute
    /// accuracy only. Used for long-time averages.
    Plain,
}

/// Exact time evolution `e^{−iH_f t}|ψ_0⟩` through the spectral decomposition
/// of `H_f`.
#[derive(Debug, Clone)]
pub struct Propagator {
    decomposition: Arc<EigenDecomposition>,
    coefficients: Vec<Complex64>,
}

impl Propagator {
    pub fn new(decomposition: Arc<EigenDecomposition>, initial: &StateVector) -> Result<Self> {
        let d = decomposition.dim();
        if initial.amplitudes().len() != d {
            return Err(Error::DimensionMismatch { expected: d, found: initial.amplitudes().len() });
        }
        let psi0 = initial.amplitudes();
        let coefficients: Vec<Complex64> = (0..d)
            .map(|n| {
                let mut acc = ComplexAccumulator::default();
                for (&v, &a) in decomposition.vector(n).iter().zip(psi0) {
                    if a.re != 0.0 || a.im != 0.0 {
                        acc.add_real_prod(v, a);
                    }
                }
                acc.value()
            })
            .collect();
        let mut weight = Accumulator::ZERO;
        for c in &coefficients {
            weight.add_prod(c.re, c.re);
            weight.add_prod(c.im, c.im);
        }
        if (weight.value() - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::NotNormalized { norm: weight.value().sqrt() });
        }
        Ok(Propagator { decomposition, coefficients })
    }

    pub fn decomposition(&self) -> &EigenDecomposition {
        &self.decomposition
    }

    pub fn shared_decomposition(&self) -> Arc<EigenDecomposition> {
        Arc::clone(&self.decomposition)
    }

    /// `c_n = ⟨n|ψ_0⟩` in the post-quench eigenbasis.
    pub fn coefficients(&self) -> &[Complex64] {
        &self.coefficients
    }

    /// `c_n e^{−iλ_n t}`.
    pub fn phased_coefficients(&self, t: f64) -> Vec<Complex64> {
        self.decomposition.eigenvalues().iter().zip(&self.coefficients).map(|(&lam, &c)| c * phase(lam, t)).collect()
    }

    /// Loschmidt amplitude `G_t = ⟨ψ_0|ψ_t⟩ = Σ_n |c_n|² e^{−iλ_n t}`.
    pub fn loschmidt_amplitude(&self, t: f64) -> Complex64 {
        let mut acc = ComplexAccumulator::default();
        for (&lam, &c) in self.decomposition.eigenvalues().iter().zip(&self.coefficients) {
            // conj(c_n) · (c_n e^{−iλ_n t}) shares its rounding with `evolve`
            acc.add_conj_prod(c, c * phase(lam, t));
        }
        acc.value()
    }

    pub fn evolve(&self, t: f64) -> StateVector {
        self.evolve_with(t, Summation::Compensated)
    }

    pub fn evolve_with(&self, t: f64, summation: Summation) -> StateVector {
        let mut out = vec![Complex64::new(0.0, 0.0); self.decomposition.dim()];
        self.evolve_into(t, summation, &mut out);
        StateVector::from_parts_unchecked(self.decomposition.sector(), out)
    }

    /// Writes `ψ_t` into `out` without allocating a state wrapper.
    pub fn evolve_into(&self, t: f64, summation: Summation, out: &mut [Complex64]) {
        let z = self.phased_coefficients(t);
        self.expand(&z, summation, out);
    }

    /// `out = Σ_n z_n v_n`.
    pub fn expand(&self, z: &[Complex64], summation: Summation, out: &mut [Complex64]) {
        let d = self.decomposition.dim();
        assert_eq!(out.len(), d);
        let vectors = self.decomposition.vectors();
        match summation {
            Summation::Plain => {
                let mut re = vec![0.0; d];
                let mut im = vec![0.0; d];
                for (col, zn) in vectors.chunks_exact(d).zip(z) {
                    if zn.re == 0.0 && zn.im == 0.0 {
                        continue;
                    }
                    for ((r, i), &v) in re.iter_mut().zip(im.iter_mut()).zip(col) {
                        *r += v * zn.re;
                        *i += v * zn.im;
                    }
                }
                for ((o, r), i) in out.iter_mut().zip(re).zip(im) {
                    *o = Complex64::new(r, i);
                }
            }
            Summation::Compensated => {
                let mut re = vec![Accumulator::ZERO; d];
                let mut im = vec![Accumulator::ZERO; d];
                for (col, zn) in vectors.chunks_exact(d).zip(z) {
                    if zn.re == 0.0 && zn.im == 0.0 {
                        continue;
                    }
                    for ((r, i), &v) in re.iter_mut().zip(im.iter_mut()).zip(col) {
                        r.add_prod(v, zn.re);
                        i.add_prod(v, zn.im);
                    }
                }
                for ((o, r), i) in out.iter_mut().zip(re).zip(im) {
                    *o = Complex64::new(r.value(), i.value());
                }
            }
        }
    }
}

#[inline]
fn phase(lam: f64, t: f64) -> Complex64 {
    let (s, c) = (lam * t).sin_cos();
    Complex64::new(c, -s)
}

/// Infinite-time average of `op` in the diagonal ensemble, keeping
/// coherences inside near-degenerate blocks (gaps at or below the
/// degeneracy floor).
pub fn diagonal_ensemble_average<O: Observable + ?Sized>(prop: &Propagator, op: &O) -> Result<f64> {
    let dec = prop.decomposition();
    let d = dec.dim();
    if op.dim() != d {
        return Err(Error::DimensionMismatch { expected: d, found: op.dim() });
    }
    let floor = dec.degeneracy_floor();
    let lam = dec.eigenvalues();
    let c = prop.coefficients();
    let mut ov = vec![0.0; d];
    let mut total = ComplexAccumulator::default();
    for m in 0..d {
        if c[m].norm_sqr() == 0.0 {
            continue;
        }
        op.apply_real(dec.vector(m), &mut ov);
        let lo = (0..=m).rev().take_while(|&n| lam[m] - lam[n] <= floor).last().unwrap_or(m);
        let hi = (m..d).take_while(|&n| lam[n] - lam[m] <= floor).last().unwrap_or(m);
        for n in lo..=hi {
            let mut o_nm = Accumulator::ZERO;
            for (&a, &b) in dec.vector(n).iter().zip(&ov) {
                o_nm.add_prod(a, b);
            }
            // conj(c_n) c_m O_nm
            let w = c[n].conj() * c[m];
            total.add(w * o_nm.value());
        }
    }
    Ok(total.value().re)
}
