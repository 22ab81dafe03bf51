//! Dense reference constructions shared by the integration tests.
#![allow(dead_code)]

use nalgebra::DMatrix;
use num_complex::Complex64;

pub type CMat = DMatrix<Complex64>;

pub fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// `J_+`, `J_-`, `J_z` from the ladder formula `J_± |m⟩ = √(j(j+1) − m(m±1)) |m±1⟩`.
pub fn ladder(two_j: u32) -> (CMat, CMat, CMat) {
    let j = two_j as f64 / 2.0;
    let d = two_j as usize + 1;
    let m = |i: usize| i as f64 - j;
    let mut jp = CMat::zeros(d, d);
    let mut jz = CMat::zeros(d, d);
    for i in 0..d {
        jz[(i, i)] = c(m(i));
        if i + 1 < d {
            jp[(i + 1, i)] = c((j * (j + 1.0) - m(i) * (m(i) + 1.0)).sqrt());
        }
    }
    let jm = jp.adjoint();
    (jp, jm, jz)
}

pub fn dense_h(two_j: u32, h: f64, delta: f64) -> DMatrix<f64> {
    let (jp, jm, jz) = ladder(two_j);
    let jx = (&jp + &jm) * c(0.5);
    let j = two_j as f64 / 2.0;
    let hc = jx * c(-h) - &jz * &jz * c(delta / (2.0 * j));
    hc.map(|z| z.re)
}

/// `e^{A}` by Taylor series with scaling and squaring.
pub fn expm(a: &CMat) -> CMat {
    let norm: f64 = a.iter().map(|z| z.norm()).sum();
    let s = norm.log2().ceil().max(0.0) as i32 + 1;
    let scaled = a * c(0.5f64.powi(s));
    let d = a.nrows();
    let mut term = CMat::identity(d, d);
    let mut sum = CMat::identity(d, d);
    for k in 1..40 {
        term = &term * &scaled * c(1.0 / k as f64);
        sum += &term;
    }
    for _ in 0..s {
        sum = &sum * &sum;
    }
    sum
}

