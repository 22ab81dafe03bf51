//! Implicit-shift QL iteration for symmetric tridiagonal matrices
//! (Bowdler, Martin, Reinsch and Wilkinson, the EISPACK `tql2` scheme).

use crate::error::{Error, Result};

const MAX_SWEEPS_PER_EIGENVALUE: usize = 60;

/// Eigen-decomposes the tridiagonal matrix given by `diag` / `offdiag`.
///
/// On success `diag` holds the eigenvalues in ascending order and `vectors`
/// (column-major, `n × n`) the corresponding orthonormal eigenvectors.
pub(crate) fn tql2(diag: &mut [f64], offdiag: &[f64], vectors: &mut [f64]) -> Result<()> {
    let n = diag.len();
    debug_assert_eq!(vectors.len(), n * n);
    vectors.iter_mut().for_each(|v| *v = 0.0);
    for i in 0..n {
        vectors[i * n + i] = 1.0;
    }
    if n == 1 {
        return Ok(());
    }

    let d = diag;
    let mut e = vec![0.0; n];
    e[..n - 1].copy_from_slice(offdiag);

    let eps = f64::EPSILON;
    let mut f = 0.0;
    let mut tst1: f64 = 0.0;

    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n - 1 {
            if e[m].abs() <= eps * tst1 {
                break;
            }
            m += 1;
        }

        if m > l {
            let mut iter = 0;
            loop {
                iter += 1;
                if iter > MAX_SWEEPS_PER_EIGENVALUE {
                    return Err(Error::NonConvergence { index: l });
                }

                // Wilkinson-style shift from the leading 2×2 block
                let g = d[l];
                let mut p = (d[l + 1] - g) / (2.0 * e[l]);
                let mut r = p.hypot(1.0);
                if p < 0.0 {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let mut h = g - d[l];
                for di in d.iter_mut().skip(l + 2) {
                    *di -= h;
                }
                f += h;

                p = d[m];
                let mut c = 1.0;
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = 0.0;
                let mut s2 = 0.0;
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    let g = c * e[i];
                    h = c * p;
                    r = p.hypot(e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);

                    let (left, right) = vectors.split_at_mut((i + 1) * n);
                    let col_i = &mut left[i * n..];
                    let col_i1 = &mut right[..n];
                    for (vi, vi1) in col_i.iter_mut().zip(col_i1.iter_mut()) {
                        let hk = *vi1;
                        *vi1 = s * *vi + c * hk;
                        *vi = c * *vi - s * hk;
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;

                if e[l].abs() <= eps * tst1 {
                    break;
                }
            }
        }
        d[l] += f;
        e[l] = 0.0;
    }

    // selection sort keeps the permutation deterministic
    for i in 0..n - 1 {
        let mut k = i;
        let mut p = d[i];
        for (jj, &dj) in d.iter().enumerate().skip(i + 1) {
            if dj < p {
                k = jj;
                p = dj;
            }
        }
        if k != i {
            d[k] = d[i];
            d[i] = p;
            let (left, right) = vectors.split_at_mut(k * n);
            left[i * n..(i + 1) * n].swap_with_slice(&mut right[..n]);
        }
    }
    Ok(())
}
