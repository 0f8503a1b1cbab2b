use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::algebra::POLE_EPS;
use crate::error::{Error, Result};

/// `V_ij = 1 / sinh(xi_i - lambda_j)`.
pub fn v_matrix(xi: &[Complex64], lambdas: &[Complex64]) -> Result<DMatrix<Complex64>> {
    if xi.len() != lambdas.len() {
        return Err(Error::DimensionMismatch {
            expected: xi.len(),
            got: lambdas.len(),
        });
    }
    let n = xi.len();
    let mut v = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let s = (xi[i] - lambdas[j]).sinh();
            if s.norm() < POLE_EPS {
                return Err(Error::singular(format!(
                    "V matrix: xi_{} coincides with lambda_{}",
                    i + 1,
                    j + 1
                )));
            }
            v[(i, j)] = s.inv();
        }
    }
    Ok(v)
}

fn has_coincidence(points: &[Complex64]) -> bool {
    points.iter().enumerate().any(|(j, a)| {
        points[..j]
            .iter()
            .any(|b| (a - b).sinh().norm() < POLE_EPS)
    })
}

/// Relative difference between the two sides of
/// `det V prod_{k,l} sinh(xi_k - lambda_l) = prod_{k<l} sinh(lambda_k - lambda_l) sinh(xi_l - xi_k)`.
///
/// Repeated `xi` (or `lambda`) make both sides vanish identically; that case
/// returns `0` without evaluating the numerically ill-defined left side.
pub fn cauchy_det_check(xi: &[Complex64], lambdas: &[Complex64]) -> Result<f64> {
    let v = v_matrix(xi, lambdas)?;
    if has_coincidence(xi) || has_coincidence(lambdas) {
        return Ok(0.0);
    }
    let n = xi.len();
    let mut lhs = v.full_piv_lu().determinant();
    for k in 0..n {
        for l in 0..n {
            lhs *= (xi[k] - lambdas[l]).sinh();
        }
    }
    let mut rhs = Complex64::new(1.0, 0.0);
    for k in 0..n {
        for l in k + 1..n {
            rhs *= (lambdas[k] - lambdas[l]).sinh() * (xi[l] - xi[k]).sinh();
        }
    }
    let scale = lhs.norm().max(rhs.norm());
    Ok(if scale == 0.0 { 0.0 } else { (lhs - rhs).norm() / scale })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_pair_is_trivial() {
        let r = cauchy_det_check(&[Complex64::new(0.3, 0.1)], &[Complex64::new(-0.2, 0.0)]).unwrap();
        assert!(r < 1e-15);
    }

    #[test]
    fn repeated_xi_is_exact_zero() {
        let xi = [Complex64::new(0.3, 0.0), Complex64::new(0.3, 0.0)];
        let la = [Complex64::new(0.1, 0.0), Complex64::new(-0.4, 0.0)];
        assert_eq!(cauchy_det_check(&xi, &la).unwrap(), 0.0);
    }

    #[test]
    fn singular_pair_rejected() {
        let xi = [Complex64::new(0.3, 0.0)];
        assert!(cauchy_det_check(&xi, &xi).is_err());
    }
}
