//! Cross-checks against dense linear algebra built independently in the
//! test code.

use lmg_texture::diagnostics::{prepare_initial_state, InitialStateRule, QuenchSetup, QuenchSpec};
use lmg_texture::spectral::{diagonalize, smallest_bohr_frequency, DEGENERACY_RTOL};
use lmg_texture::spin::{build_jx, build_jz, build_lmg_hamiltonian, expectation, LmgParams, SpinSector, StateVector};
mod common;

use common::{c, dense_h, expm, ladder, CMat};
use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn dense_eigenvalues(m: DMatrix<f64>) -> Vec<f64> {
    let mut ev: Vec<f64> = SymmetricEigen::new(m).eigenvalues.iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev
}

fn random_state(rng: &mut ChaCha8Rng, sector: SpinSector) -> StateVector {
    let amps = (0..sector.dim()).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
    StateVector::normalized(sector, amps).unwrap()
}

#[test]
fn commutator_of_dense_spin_operators() {
    for two_j in 1..=10 {
        let (jp, jm, jz) = ladder(two_j);
        let jx = (&jp + &jm) * c(0.5);
        let jy = (&jp - &jm) * Complex64::new(0.0, -0.5);
        let comm = &jx * &jy - &jy * &jx;
        let target = &jz * Complex64::new(0.0, 1.0);
        assert!((comm - target).iter().all(|z| z.norm() <= 1e-12), "2j = {two_j}");

        // the tridiagonal builder agrees with the ladder construction
        let sector = SpinSector::new(two_j).unwrap();
        assert!(build_jx(sector).to_dense().iter().zip(jx.transpose().iter()).all(|(a, b)| (a - b.re).abs() <= 1e-15));
        assert!(build_jz(sector).diag.iter().enumerate().all(|(i, &v)| v == jz[(i, i)].re));
    }
}

#[test]
fn jx_on_flat_vector_matches_dense_product() {
    for two_j in [1, 2, 7, 40] {
        let sector = SpinSector::new(two_j).unwrap();
        let d = sector.dim();
        let (jp, jm, _) = ladder(two_j);
        let jx = (jp + jm) * c(0.5);
        let flat = vec![c(1.0 / (d as f64).sqrt()); d];
        let mut out = vec![c(0.0); d];
        build_jx(sector).apply_complex(&flat, &mut out);
        let dense = &jx * nalgebra::DVector::from_vec(flat.clone());
        for i in 0..d {
            assert!((out[i] - dense[i]).norm() <= 1e-14);
        }
    }
}

#[test]
fn hamiltonian_matches_dense_construction() {
    for (two_j, h, delta) in [(1, 2.0, 0.0), (2, 1.0, 1.0), (9, 0.3, 1.7), (20, 0.8, 1.0)] {
        let sector = SpinSector::new(two_j).unwrap();
        let tri = build_lmg_hamiltonian(sector, LmgParams::new(h, delta).unwrap()).to_dense();
        let dense = dense_h(two_j, h, delta);
        let d = sector.dim();
        for r in 0..d {
            for col in 0..d {
                assert!((tri[r * d + col] - dense[(r, col)]).abs() <= 1e-14);
                assert_eq!(tri[r * d + col], tri[col * d + r]);
            }
        }
    }
}

#[test]
fn eigenvalues_match_dense_solver() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut cases = vec![(2u32, 1.0, 1.0)];
    for _ in 0..12 {
        cases.push((rng.gen_range(1..60), rng.gen_range(0.0..2.0), rng.gen_range(0.0..2.0)));
    }
    for (two_j, h, delta) in cases {
        let sector = SpinSector::new(two_j).unwrap();
        let dec = diagonalize(&build_lmg_hamiltonian(sector, LmgParams::new(h, delta).unwrap()), sector).unwrap();
        let oracle = dense_eigenvalues(dense_h(two_j, h, delta));
        let scale = dec.spectral_range().max(1.0);
        for (a, b) in dec.eigenvalues().iter().zip(&oracle) {
            assert!((a - b).abs() <= 1e-12 * scale, "2j={two_j} h={h} delta={delta}: {a} vs {b}");
        }
        assert!(dec.orthonormality_error() <= 1e-10);
    }
}

#[test]
fn bohr_frequency_matches_dense_spectrum() {
    let sector = SpinSector::new(2).unwrap();
    let dec = diagonalize(&build_lmg_hamiltonian(sector, LmgParams::new(1.0, 1.0).unwrap()), sector).unwrap();
    let ev = dense_eigenvalues(dense_h(2, 1.0, 1.0));
    let floor = DEGENERACY_RTOL * (ev[2] - ev[0]);
    let mut oracle = f64::INFINITY;
    for a in 0..3 {
        for b in a + 1..3 {
            let gap = (ev[b] - ev[a]).abs();
            if gap > floor {
                oracle = oracle.min(gap);
            }
        }
    }
    assert!((smallest_bohr_frequency(&dec).unwrap() - oracle).abs() <= 1e-12);
}

#[test]
fn random_expectations_match_dense_quadratic_forms() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let sector = SpinSector::new(4).unwrap();
    let (jp, jm, jz) = ladder(4);
    let jx = (&jp + &jm) * c(0.5);
    let params = LmgParams::new(0.7, 1.3).unwrap();
    let h = dense_h(4, 0.7, 1.3).map(c);
    for _ in 0..20 {
        let psi = random_state(&mut rng, sector);
        let v = nalgebra::DVector::from_vec(psi.amplitudes().to_vec());
        let form = |m: &CMat| (v.adjoint() * m * &v)[(0, 0)].re;
        assert!((expectation(&psi, &build_jz(sector)).unwrap() - form(&jz)).abs() <= 1e-12);
        assert!((expectation(&psi, &build_jx(sector)).unwrap() - form(&jx)).abs() <= 1e-12);
        assert!((expectation(&psi, &build_lmg_hamiltonian(sector, params)).unwrap() - form(&h)).abs() <= 1e-12);
    }
}

#[test]
fn evolution_matches_matrix_exponential() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for rule in [InitialStateRule::DickeMax, InitialStateRule::GroundState] {
        let h0 = if rule == InitialStateRule::GroundState { 0.4 } else { 0.0 };
        let spec = QuenchSpec::fields(4, h0, 0.9, 1.0, rule).unwrap();
        let setup = QuenchSetup::new(&spec).unwrap();
        let hf = dense_h(4, 0.9, 1.0).map(c);
        let psi0 = nalgebra::DVector::from_vec(setup.initial.amplitudes().to_vec());
        for _ in 0..10 {
            let t = rng.gen_range(0.0..50.0);
            let oracle = expm(&(&hf * Complex64::new(0.0, -t))) * &psi0;
            let psi = setup.propagator.evolve(t);
            for (a, b) in psi.amplitudes().iter().zip(oracle.iter()) {
                assert!((a - b).norm() <= 1e-10, "t = {t}");
            }
        }
    }
}

#[test]
fn symmetric_phase_ground_state_matches_dense_solver() {
    let spec = QuenchSpec::fields(2, 2.0, 0.5, 1.0, InitialStateRule::GroundState).unwrap();
    let psi = prepare_initial_state(&spec).unwrap();
    let sector = spec.sector;
    assert!(expectation(&psi, &build_jx(sector)).unwrap() > 0.0);
    let eig = SymmetricEigen::new(dense_h(2, 2.0, 1.0));
    let k = eig.eigenvalues.iter().enumerate().min_by(|a, b| a.1.total_cmp(b.1)).unwrap().0;
    let v = eig.eigenvectors.column(k);
    let overlap: f64 = psi.amplitudes().iter().zip(v.iter()).map(|(a, b)| a.re * b).sum();
    assert!((overlap.abs() - 1.0).abs() <= 1e-12);
}

#[test]
fn large_sector_residuals() {
    for (two_j, h) in [(400u32, 0.3), (400, 0.5), (400, 1.4)] {
        let sector = SpinSector::new(two_j).unwrap();
        let ham = build_lmg_hamiltonian(sector, LmgParams::new(h, 1.0).unwrap());
        let dec = diagonalize(&ham, sector).unwrap().gauge_fix();
        let range = dec.spectral_range();
        assert!(dec.residual(&ham) <= 1e-10 * range, "residual {}", dec.residual(&ham));
        assert!(dec.orthonormality_error() <= 1e-10);
        assert!(dec.eigenvalues().windows(2).all(|w| w[0] <= w[1]));
        let again = diagonalize(&ham, sector).unwrap().gauge_fix();
        assert_eq!(dec.eigenvalues(), again.eigenvalues());
        assert_eq!(dec.vectors(), again.vectors());
    }
}
