use crate::compensated::Accumulator;
use crate::error::{Error, Result};
use crate::spectral::diagonalize;
use crate::spin::{build_jz, build_lmg_hamiltonian, LmgParams, SpinSector, StateVector};

/// Mean-field critical quantities for a quench `h_0 → h_f`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriticalPredictions {
    /// Equilibrium critical field, `δ`.
    pub h_c_qpt: f64,
    /// Separatrix energy per spin length at `h_f`, `−h_f`.
    pub e_c_esqpt_per_j: f64,
    /// Energy of the pre-quench minimum under `H(h_f)`, `−δ/2 − h_f h_0/δ`.
    pub e_injected_per_j: f64,
    /// `(δ + h_0)/2`.
    pub h_f_dqpt: f64,
    /// `e_injected_per_j(h_f_dqpt) + h_f_dqpt`. Zero for `h_0 = 0`; nonzero
    /// otherwise, since the injected-energy formula is used verbatim.
    pub consistency_residual: f64,
}

/// Classical energy density `−h√(1−z²)cos φ − (δ/2)z²`.
pub fn classical_energy(z: f64, phi: f64, params: LmgParams) -> Result<f64> {
    if !(z.abs() <= 1.0) {
        return Err(Error::OutOfDomain { name: "z", value: z, reason: "requires |z| <= 1" });
    }
    Ok(-params.h * (1.0 - z * z).sqrt() * phi.cos() - 0.5 * params.delta * z * z)
}

pub fn critical_predictions(h0: f64, hf: f64, delta: f64) -> Result<CriticalPredictions> {
    if !(delta.is_finite() && delta > 0.0) {
        return Err(Error::OutOfDomain { name: "delta", value: delta, reason: "requires delta > 0" });
    }
    for (name, v) in [("h0", h0), ("hf", hf)] {
        if !(v.is_finite() && v >= 0.0) {
            return Err(Error::OutOfDomain { name, value: v, reason: "requires a finite field >= 0" });
        }
    }
    let injected = |h: f64| -0.5 * delta - h * h0 / delta;
    let h_f_dqpt = 0.5 * (delta + h0);
    Ok(CriticalPredictions {
        h_c_qpt: delta,
        e_c_esqpt_per_j: -hf,
        e_injected_per_j: injected(hf),
        h_f_dqpt,
        consistency_residual: injected(h_f_dqpt) + h_f_dqpt,
    })
}

/// The two mean-field magnetizations `±√(1 − h²/δ²)` of the broken phase.
pub fn symmetry_broken_magnetization(h: f64, delta: f64) -> Result<(f64, f64)> {
    if !(delta.is_finite() && delta > 0.0) {
        return Err(Error::OutOfDomain { name: "delta", value: delta, reason: "requires delta > 0" });
    }
    if !(h >= 0.0 && h < delta) {
        return Err(Error::OutOfDomain { name: "h", value: h, reason: "requires 0 <= h < delta (broken phase)" });
    }
    let r = h / delta;
    let m = (1.0 - r * r).sqrt();
    Ok((m, -m))
}

/// Ground state with definite sign of magnetization: the `⟨J_z⟩ > 0`
/// eigenvector of `J_z` restricted to the two lowest levels of `H(h, δ)`.
pub fn symmetry_resolved_ground_state(sector: SpinSector, params: LmgParams) -> Result<StateVector> {
    let dec = diagonalize(&build_lmg_hamiltonian(sector, params), sector)?.gauge_fix();
    if sector.dim() < 2 {
        return StateVector::from_real(sector, dec.vector(0));
    }
    let jz = build_jz(sector);
    let (v0, v1) = (dec.vector(0), dec.vector(1));
    let form = |a: &[f64], b: &[f64]| {
        let mut acc = Accumulator::ZERO;
        for ((&x, &y), &m) in a.iter().zip(b).zip(&jz.diag) {
            acc.add_prod(x * m, y);
        }
        acc.value()
    };
    let (a, b, c) = (form(v0, v0), form(v0, v1), form(v1, v1));
    // larger eigenvector of [[a, b], [b, c]]
    let theta = 0.5 * (2.0 * b).atan2(a - c);
    let (s, co) = theta.sin_cos();
    let amps: Vec<f64> = v0.iter().zip(v1).map(|(&x, &y)| co * x + s * y).collect();
    let state = StateVector::from_real(sector, &amps).or_else(|_| {
        let norm = amps.iter().map(|x| x * x).sum::<f64>().sqrt();
        StateVector::from_real(sector, &amps.iter().map(|x| x / norm).collect::<Vec<_>>())
    })?;
    Ok(state)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spin::expectation;

    fn params(h: f64, delta: f64) -> LmgParams {
        LmgParams::new(h, delta).unwrap()
    }

    #[test]
    fn energy_at_poles_and_equator() {
        assert_eq!(classical_energy(0.0, 0.0, params(0.37, 1.0)).unwrap(), -0.37);
        for phi in [0.0, 1.3, -2.9] {
            assert_eq!(classical_energy(1.0, phi, params(0.8, 1.4)).unwrap(), -0.7);
            assert_eq!(classical_energy(-1.0, phi, params(0.8, 1.4)).unwrap(), -0.7);
        }
        assert!(classical_energy(1.0 + 1e-12, 0.0, params(0.5, 1.0)).is_err());
    }

    #[test]
    fn broken_minima_are_stationary() {
        for (h, delta) in [(0.3, 1.0), (0.6, 1.0), (0.7, 2.0)] {
            let p = params(h, delta);
            let (z0, _) = symmetry_broken_magnetization(h, delta).unwrap();
            for z in [z0, -z0] {
                let eps = 1e-6;
                let dz = (classical_energy(z + eps, 0.0, p).unwrap() - classical_energy(z - eps, 0.0, p).unwrap()) / (2.0 * eps);
                let dphi = (classical_energy(z, eps, p).unwrap() - classical_energy(z, -eps, p).unwrap()) / (2.0 * eps);
                assert!(dz.abs() <= 1e-8, "dz {dz}");
                assert!(dphi.abs() <= 1e-8, "dphi {dphi}");
            }
        }
    }

    #[test]
    fn predictions_match_closed_forms() {
        let p = critical_predictions(0.0, 0.8, 1.0).unwrap();
        assert_eq!(p.h_f_dqpt, 0.5);
        assert_eq!(p.h_c_qpt, 1.0);
        assert_eq!(p.e_injected_per_j, -0.5);
        assert_eq!(p.e_c_esqpt_per_j, -0.8);
        assert!(p.consistency_residual.abs() <= 1e-14);

        let p = critical_predictions(0.2, 0.6, 1.0).unwrap();
        assert!((p.h_f_dqpt - 0.6).abs() < 1e-15);
        assert!((p.e_injected_per_j + 0.62).abs() < 1e-15);
        assert!((p.e_c_esqpt_per_j + 0.6).abs() < 1e-15);
        assert!((p.consistency_residual + 0.02).abs() < 1e-15);

        assert!(critical_predictions(0.0, 0.5, 0.0).is_err());
    }

    #[test]
    fn magnetization_pairs() {
        assert_eq!(symmetry_broken_magnetization(0.0, 1.0).unwrap(), (1.0, -1.0));
        assert_eq!(symmetry_broken_magnetization(0.6, 1.0).unwrap(), (0.8, -0.8));
        assert!(symmetry_broken_magnetization(1.0, 1.0).is_err());
        assert!(symmetry_broken_magnetization(1.5, 1.0).is_err());
    }

    #[test]
    fn resolved_ground_state_is_magnetized() {
        let sector = SpinSector::new(400).unwrap();
        let psi = symmetry_resolved_ground_state(sector, params(0.3, 1.0)).unwrap();
        let mz = expectation(&psi, &build_jz(sector)).unwrap() / sector.j();
        let (target, _) = symmetry_broken_magnetization(0.3, 1.0).unwrap();
        assert!((mz - target).abs() <= 0.05, "mz {mz}");
    }
}
