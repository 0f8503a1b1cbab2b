use nalgebra::DMatrix;
use num_complex::Complex64;

use super::source::DensitySource;
use crate::anisotropy::AnisotropyParam;
use crate::bethe::SpectralPoint;
use crate::determinant::{require_distinct, small_det};
use crate::error::{Error, Result};

/// `H` from a given matrix `S~_{ij} = rho~_tot(lambda_j - mu_i)`:
/// `det S~ / prod_{l<m} sinh(lambda_m - lambda_l - i gamma)`
/// `x prod_l prod_{m<l} sinh(lambda_l - mu_m - i gamma/2) prod_{m>l} sinh(lambda_l - mu_m + i gamma/2)`.
pub fn h_from_matrix(
    lambdas: &[Complex64],
    window: &[f64],
    s_tilde: &DMatrix<Complex64>,
    gamma: AnisotropyParam,
) -> Result<Complex64> {
    let n = lambdas.len();
    if window.len() != n || s_tilde.shape() != (n, n) {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: window.len(),
        });
    }
    let ig = Complex64::new(0.0, gamma.gamma());
    let mut h = small_det(s_tilde);
    for l in 0..n {
        for m in l + 1..n {
            h /= (lambdas[m] - lambdas[l] - ig).sinh();
        }
        for (m, &mu) in window.iter().enumerate() {
            if m < l {
                h *= (lambdas[l] - mu - ig * 0.5).sinh();
            } else if m > l {
                h *= (lambdas[l] - mu + ig * 0.5).sinh();
            }
        }
    }
    Ok(h)
}

/// `H(lambda_1..lambda_n)` with local densities from `density`.
pub fn h_function(
    lambdas: &[SpectralPoint],
    window: &[f64],
    density: &dyn DensitySource,
) -> Result<Complex64> {
    let z: Vec<Complex64> = lambdas.iter().map(SpectralPoint::to_complex).collect();
    require_distinct(&z, "H arguments")?;
    let n = lambdas.len();
    if window.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: window.len(),
        });
    }
    let mut s = DMatrix::zeros(n, n);
    for (i, &mu) in window.iter().enumerate() {
        for (j, v) in density.rho_tilde(mu, lambdas)?.into_iter().enumerate() {
            s[(i, j)] = Complex64::new(v, 0.0);
        }
    }
    h_from_matrix(&z, window, &s, density.gamma())
}
