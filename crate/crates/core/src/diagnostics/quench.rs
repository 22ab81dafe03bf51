use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::spectral::{diagonalize, EigenDecomposition, Propagator};
use crate::spin::{build_lmg_hamiltonian, LmgParams, SpinSector, StateVector, SymTridiagonal};
use crate::texture::{fourier_conjugate_basis, fourier_conjugate_in_frame, BasisLabel, OrthonormalBasis};

#[derive(Debug, Clone, PartialEq)]
pub enum InitialStateRule {
    /// Lowest eigenvector of `H(h_0)`; fails if the lowest doublet is
    /// degenerate within the floor.
    GroundState,
    /// Fully polarized `|m = +j⟩`.
    DickeMax,
    Explicit(StateVector),
}

/// Sudden quench of the transverse field `h_0 → h_f` at fixed `δ`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuenchSpec {
    pub sector: SpinSector,
    pub pre: LmgParams,
    pub post: LmgParams,
    pub initial: InitialStateRule,
}

impl QuenchSpec {
    pub fn new(sector: SpinSector, pre: LmgParams, post: LmgParams, initial: InitialStateRule) -> Result<Self> {
        if pre.delta != post.delta {
            return Err(Error::InvalidParameter {
                name: "delta",
                reason: format!("pre- and post-quench interaction differ ({} vs {})", pre.delta, post.delta),
            });
        }
        if let InitialStateRule::Explicit(state) = &initial {
            if state.sector() != sector {
                return Err(Error::DimensionMismatch { expected: sector.dim(), found: state.sector().dim() });
            }
        }
        Ok(QuenchSpec { sector, pre, post, initial })
    }

    /// Convenience constructor: `h_0 → h_f` at interaction `delta`.
    pub fn fields(two_j: u32, h0: f64, hf: f64, delta: f64, initial: InitialStateRule) -> Result<Self> {
        Self::new(SpinSector::new(two_j)?, LmgParams::new(h0, delta)?, LmgParams::new(hf, delta)?, initial)
    }

    pub fn with_post_field(&self, hf: f64) -> Result<Self> {
        Self::new(self.sector, self.pre, LmgParams::new(hf, self.post.delta)?, self.initial.clone())
    }

    pub fn pre_hamiltonian(&self) -> SymTridiagonal {
        build_lmg_hamiltonian(self.sector, self.pre)
    }

    pub fn post_hamiltonian(&self) -> SymTridiagonal {
        build_lmg_hamiltonian(self.sector, self.post)
    }
}

/// Where the initial state sits, which determines the conjugate basis in
/// which it is flat.
#[derive(Debug, Clone)]
pub(crate) enum Anchor {
    Dicke(usize),
    Frame(Arc<OrthonormalBasis>, usize),
}

pub(crate) struct PreparedState {
    pub state: StateVector,
    pub anchor: Anchor,
}

pub fn prepare_initial_state(spec: &QuenchSpec) -> Result<StateVector> {
    let pre = if spec.initial == InitialStateRule::GroundState { Some(pre_decomposition(spec)?) } else { None };
    Ok(prepare(spec, pre.as_ref())?.state)
}

pub(crate) fn pre_decomposition(spec: &QuenchSpec) -> Result<EigenDecomposition> {
    Ok(diagonalize(&spec.pre_hamiltonian(), spec.sector)?.gauge_fix())
}

pub(crate) fn prepare(spec: &QuenchSpec, pre: Option<&EigenDecomposition>) -> Result<PreparedState> {
    let sector = spec.sector;
    match &spec.initial {
        InitialStateRule::DickeMax => {
            let index = sector.top_index();
            Ok(PreparedState { state: StateVector::dicke(sector, index)?, anchor: Anchor::Dicke(index) })
        }
        InitialStateRule::GroundState => {
            let owned;
            let dec = match pre {
                Some(d) => d,
                None => {
                    owned = pre_decomposition(spec)?;
                    &owned
                }
            };
            let lam = dec.eigenvalues();
            if lam.len() > 1 {
                let gap = lam[1] - lam[0];
                let floor = dec.degeneracy_floor();
                if gap <= floor {
                    return Err(Error::DegenerateGroundState { gap, floor });
                }
            }
            let state = StateVector::from_real(sector, dec.vector(0))?;
            let frame = OrthonormalBasis::from_decomposition(dec, BasisLabel::PrequenchEigen)?;
            Ok(PreparedState { state, anchor: Anchor::Frame(Arc::new(frame), 0) })
        }
        InitialStateRule::Explicit(state) => {
            if let Some(index) = dicke_index(state) {
                return Ok(PreparedState { state: state.clone(), anchor: Anchor::Dicke(index) });
            }
            let frame = householder_frame(state)?;
            Ok(PreparedState { state: state.clone(), anchor: Anchor::Frame(Arc::new(frame), 0) })
        }
    }
}

fn dicke_index(state: &StateVector) -> Option<usize> {
    let amps = state.amplitudes();
    let index = amps.iter().position(|z| z.norm() != 0.0)?;
    let rest_zero = amps.iter().enumerate().all(|(i, z)| i == index || z.norm() == 0.0);
    (rest_zero && amps[index] == Complex64::new(1.0, 0.0)).then_some(index)
}

/// Unitary frame whose first column is `ψ` up to a global phase.
fn householder_frame(state: &StateVector) -> Result<OrthonormalBasis> {
    let sector = state.sector();
    let d = sector.dim();
    let psi = state.amplitudes();
    // rotate ψ so that its first entry is real and non-negative
    let phase = if psi[0].norm() > 0.0 { psi[0].conj() / psi[0].norm() } else { Complex64::new(1.0, 0.0) };
    let y: Vec<Complex64> = psi.iter().map(|z| z * phase).collect();
    let mut u: Vec<Complex64> = y.iter().map(|z| -z).collect();
    u[0] += 1.0;
    let unorm2: f64 = u.iter().map(|z| z.norm_sqr()).sum();
    let mut cols = vec![Complex64::new(0.0, 0.0); d * d];
    for k in 0..d {
        for i in 0..d {
            let delta = if i == k { 1.0 } else { 0.0 };
            cols[k * d + i] = if unorm2 > 0.0 { Complex64::new(delta, 0.0) - u[i] * u[k].conj() * (2.0 / unorm2) } else { Complex64::new(delta, 0.0) };
        }
    }
    OrthonormalBasis::from_columns(sector, cols, BasisLabel::Custom)
}

/// Everything one quench needs: both Hamiltonians' spectral data, the
/// initial state, and the reference bases for rugosity.
pub struct QuenchSetup {
    pub spec: QuenchSpec,
    pub initial: StateVector,
    pub propagator: Propagator,
    pub prequench: Arc<OrthonormalBasis>,
    pub fourier: OrthonormalBasis,
}

impl QuenchSetup {
    pub fn new(spec: &QuenchSpec) -> Result<Self> {
        let (prequench, pre_dec) = prequench_reference(spec)?;
        let post = Arc::new(diagonalize(&spec.post_hamiltonian(), spec.sector)?.gauge_fix());
        Self::with_parts(spec, prequench, pre_dec.as_ref(), post)
    }

    pub(crate) fn with_parts(
        spec: &QuenchSpec,
        prequench: Arc<OrthonormalBasis>,
        pre_dec: Option<&EigenDecomposition>,
        post: Arc<EigenDecomposition>,
    ) -> Result<Self> {
        let prepared = prepare(spec, pre_dec)?;
        let fourier = match prepared.anchor {
            Anchor::Dicke(i) => fourier_conjugate_basis(i, spec.sector)?,
            Anchor::Frame(frame, i) => fourier_conjugate_in_frame(frame, i)?,
        };
        let propagator = Propagator::new(post, &prepared.state)?;
        Ok(QuenchSetup { spec: spec.clone(), initial: prepared.state, propagator, prequench, fourier })
    }
}

/// Pre-quench basis plus, when `H_0` is not diagonal, its decomposition.
pub(crate) fn prequench_reference(spec: &QuenchSpec) -> Result<(Arc<OrthonormalBasis>, Option<EigenDecomposition>)> {
    let h0 = spec.pre_hamiltonian();
    if h0.is_diagonal() {
        return Ok((Arc::new(OrthonormalBasis::dicke(spec.sector)), None));
    }
    let dec = pre_decomposition(spec)?;
    let basis = OrthonormalBasis::from_decomposition(&dec, BasisLabel::PrequenchEigen)?;
    Ok((Arc::new(basis), Some(dec)))
}
