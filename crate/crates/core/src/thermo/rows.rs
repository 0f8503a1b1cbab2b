use num_complex::Complex64;

use super::source::DensitySource;
use crate::bethe::BetheRootSet;
use crate::determinant::{psi_phi_inverse_rows, psi_prime_matrix, varphi_prime_matrix};
use crate::error::{Error, Result};

/// `max_{i,j} M |(psi' phi'^{-1})_{N-n+i, j} - rho~_tot(lambda_j - mu_i) / (M rho_tot(lambda_j))|`:
/// the exact window rows against their thermodynamic prediction, scaled by
/// `M` so that the entries are of order one.
pub fn varphi_prime_thermo_row_check(
    roots: &BetheRootSet,
    window: &[f64],
    density: &dyn DensitySource,
) -> Result<f64> {
    if window.is_empty() {
        return Ok(0.0);
    }
    let w: Vec<Complex64> = window.iter().map(|&m| Complex64::new(m, 0.0)).collect();
    let y = psi_phi_inverse_rows(roots, &w)?;
    let m = roots.sites as f64;
    let rho = density.rho_tot(&roots.roots)?;
    let mut worst: f64 = 0.0;
    for (i, &mu) in window.iter().enumerate() {
        let rt = density.rho_tilde(mu, &roots.roots)?;
        for j in 0..roots.len() {
            let pred = rt[j] / (m * rho[j]);
            worst = worst.max(m * (y[(i, j)] - pred).norm());
        }
    }
    Ok(worst)
}

/// Largest deviation of the first `N - n` rows of `psi' phi'^{-1}` from
/// unit rows.
pub fn kept_rows_identity_defect(roots: &BetheRootSet, window: &[f64]) -> Result<f64> {
    let w: Vec<Complex64> = window.iter().map(|&m| Complex64::new(m, 0.0)).collect();
    let psi = psi_prime_matrix(roots, &w)?;
    let phi = varphi_prime_matrix(roots)?;
    // X phi' = psi'  <=>  phi'^T X^T = psi'^T
    let x = phi
        .transpose()
        .lu()
        .solve(&psi.transpose())
        .ok_or_else(|| Error::singular("Gaudin matrix phi'"))?
        .transpose();
    let kept = roots.len() - window.len();
    let mut worst: f64 = 0.0;
    for i in 0..kept {
        for j in 0..roots.len() {
            let e = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((x[(i, j)] - e).norm());
        }
    }
    Ok(worst)
}
