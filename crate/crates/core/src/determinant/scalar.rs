use nalgebra::DMatrix;
use num_complex::Complex64;

use super::gaudin::{varphi_prime_matrix, varphi_prime_raw};
use super::slavnov::ON_SHELL_TOL;
use super::util::{sinh_nz, ONE};
use crate::algebra::LatticeSpec;
use crate::bethe::BetheRootSet;
use crate::error::{Error, Result};

/// Rows replacing the Gaudin rows of removed roots:
/// `psi_{ij} = sinh(eta) / (sinh(lambda_j - w_i - eta/2) sinh(lambda_j - w_i + eta/2))`.
pub(crate) fn window_rows(
    lambdas: &[Complex64],
    window: &[Complex64],
    spec: &LatticeSpec,
) -> Result<DMatrix<Complex64>> {
    let eta = spec.gamma().eta();
    let half = eta * 0.5;
    let mut rows = DMatrix::zeros(window.len(), lambdas.len());
    for (i, &w) in window.iter().enumerate() {
        for (j, &l) in lambdas.iter().enumerate() {
            let a = sinh_nz(l - w - half, "psi' (root at mu + eta/2)")?;
            let b = sinh_nz(l - w + half, "psi' (root at mu - eta/2)")?;
            rows[(i, j)] = eta.sinh() / (a * b);
        }
    }
    Ok(rows)
}

/// `Y = psi_window phi'^{-1}`, one linear solve against `phi'^T`.
pub(crate) fn rows_times_inverse(
    phi: &DMatrix<Complex64>,
    rows: &DMatrix<Complex64>,
) -> Result<DMatrix<Complex64>> {
    let x = phi
        .transpose()
        .lu()
        .solve(&rows.transpose())
        .ok_or_else(|| Error::singular("Gaudin matrix phi'"))?;
    if x.iter().any(|z| !z.is_finite()) {
        return Err(Error::singular("Gaudin matrix phi'"));
    }
    Ok(x.transpose())
}

/// `psi'`: the Gaudin matrix with its last `n` rows replaced by the rows of
/// the window `w_1..w_n`.
pub fn psi_prime_matrix(roots: &BetheRootSet, window: &[Complex64]) -> Result<DMatrix<Complex64>> {
    let n = window.len();
    let big_n = roots.len();
    if n > big_n {
        return Err(Error::input("window longer than the number of roots"));
    }
    let mut psi = varphi_prime_matrix(roots)?;
    let rows = window_rows(&roots.rapidities(), window, &roots.lattice())?;
    for i in 0..n {
        psi.set_row(big_n - n + i, &rows.row(i));
    }
    Ok(psi)
}

/// Rows `i` of `psi' phi'^{-1}` belonging to the window (an `n x N` matrix);
/// the remaining rows are unit vectors.
pub fn psi_phi_inverse_rows(roots: &BetheRootSet, window: &[Complex64]) -> Result<DMatrix<Complex64>> {
    let phi = varphi_prime_matrix(roots)?;
    let rows = window_rows(&roots.rapidities(), window, &roots.lattice())?;
    rows_times_inverse(&phi, &rows)
}

/// Ratio `S_I = <N| prod_{k not in I} B(lambda_k) prod_j B(w_j + eta/2) |up> / <N|N>`
/// from the precomputed rows `y = psi_window phi'^{-1}`; root `I_j` is
/// replaced by `w_j`.
pub(crate) fn ratio_from_rows(
    lambdas: &[Complex64],
    y: &DMatrix<Complex64>,
    indices: &[usize],
    window: &[Complex64],
    spec: &LatticeSpec,
) -> Result<Complex64> {
    let n = indices.len();
    if n == 0 {
        return Ok(ONE);
    }
    let eta = spec.gamma().eta();
    let half = eta * 0.5;
    let rem: Vec<Complex64> = indices.iter().map(|&i| lambdas[i]).collect();
    let mut pref = ONE;
    for i in 0..n {
        for j in i + 1..n {
            pref *= (rem[j] - rem[i]).sinh() / sinh_nz(window[j] - window[i], "degenerate window")?;
        }
    }
    for (i, &l) in lambdas.iter().enumerate() {
        let kept = !indices.contains(&i);
        for j in 0..n {
            if kept {
                pref *= (l - rem[j]).sinh() / sinh_nz(l - window[j] - half, "root at mu + eta/2")?;
            }
            pref *= (l - window[j] + half).sinh() / sinh_nz(l - rem[j] + eta, "root difference at -eta")?;
        }
    }
    let block = DMatrix::from_fn(n, n, |a, b| y[(a, indices[b])]);
    Ok(pref * small_det(&block))
}

pub(crate) fn small_det(m: &DMatrix<Complex64>) -> Complex64 {
    match m.nrows() {
        0 => ONE,
        1 => m[(0, 0)],
        2 => m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)],
        3 => {
            m[(0, 0)] * (m[(1, 1)] * m[(2, 2)] - m[(1, 2)] * m[(2, 1)])
                - m[(0, 1)] * (m[(1, 0)] * m[(2, 2)] - m[(1, 2)] * m[(2, 0)])
                + m[(0, 2)] * (m[(1, 0)] * m[(2, 1)] - m[(1, 1)] * m[(2, 0)])
        }
        _ => m.clone().determinant(),
    }
}

/// Scalar-product ratio with the last `n` roots replaced by `w_j + eta/2`,
/// `n = window.len()`.
pub fn scalar_product_ratio(roots: &BetheRootSet, window: &[Complex64]) -> Result<Complex64> {
    roots.require_solved(ON_SHELL_TOL)?;
    let n = window.len();
    let big_n = roots.len();
    if n > big_n {
        return Err(Error::input("window longer than the number of roots"));
    }
    if n == 0 {
        return Ok(ONE);
    }
    let lambdas = roots.rapidities();
    let spec = roots.lattice();
    let phi = varphi_prime_raw(&lambdas, &spec)?;
    let y = rows_times_inverse(&phi, &window_rows(&lambdas, window, &spec)?)?;
    let idx: Vec<usize> = (big_n - n..big_n).collect();
    ratio_from_rows(&lambdas, &y, &idx, window, &spec)
}
