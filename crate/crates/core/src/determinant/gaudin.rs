use nalgebra::DMatrix;
use num_complex::Complex64;

use super::slavnov::ON_SHELL_TOL;
use super::util::{coth, require_distinct, sinh_nz};
use crate::algebra::LatticeSpec;
use crate::bethe::BetheRootSet;
use crate::error::Result;

/// `phi'_{ij} = d phi(lambda_i) / d lambda_j` for arbitrary complex
/// rapidities; equals `2 pi i [M rho(lambda_i) delta_ij + K_2(lambda_i - lambda_j)]`.
pub fn varphi_prime_raw(lambdas: &[Complex64], spec: &LatticeSpec) -> Result<DMatrix<Complex64>> {
    require_distinct(lambdas, "Bethe roots")?;
    let eta = spec.gamma().eta();
    let half = eta * 0.5;
    let n = lambdas.len();
    let mut f = DMatrix::zeros(n, n);
    for i in 0..n {
        let li = lambdas[i];
        let mut diag = Complex64::new(0.0, 0.0);
        for &m in spec.mu() {
            sinh_nz(li - m - half, "phi' (root on a pole)")?;
            diag += coth(li - m - half) - coth(li - m + half);
        }
        for (j, &lj) in lambdas.iter().enumerate() {
            if i != j {
                let x = li - lj;
                let k2 = coth(eta + x) + coth(eta - x);
                diag += k2;
                f[(i, j)] = -k2;
            }
        }
        f[(i, i)] = diag;
    }
    Ok(f)
}

/// The Gaudin matrix of an on-shell root set.
pub fn varphi_prime_matrix(roots: &BetheRootSet) -> Result<DMatrix<Complex64>> {
    roots.require_solved(ON_SHELL_TOL)?;
    varphi_prime_raw(&roots.rapidities(), &roots.lattice())
}

/// Norm `<N|N>` of an on-shell Bethe state (bilinear, no conjugation).
pub fn gaudin_norm(roots: &BetheRootSet) -> Result<Complex64> {
    let f = varphi_prime_matrix(roots)?;
    let lambdas = roots.rapidities();
    let eta = roots.gamma.eta();
    let mut pref = eta.sinh().powu(lambdas.len() as u32);
    for (i, &a) in lambdas.iter().enumerate() {
        for (j, &b) in lambdas.iter().enumerate() {
            if i != j {
                pref *= (a - b + eta).sinh() / (a - b).sinh();
            }
        }
    }
    Ok(pref * f.determinant())
}
