//! Polynomial extrapolation to zero step size (Neville's scheme).

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Value at `h = 0` of the interpolating polynomial through `(h_i, f_i)`.
pub fn neville_at_zero(h: &[f64], f: &[Complex64]) -> Result<Complex64> {
    if h.is_empty() || h.len() != f.len() {
        return Err(Error::input("extrapolation needs matching, non-empty samples"));
    }
    let mut p = f.to_vec();
    let n = h.len();
    for level in 1..n {
        for i in 0..n - level {
            let (hi, hj) = (h[i], h[i + level]);
            if hi == hj {
                return Err(Error::input("extrapolation steps must be distinct"));
            }
            p[i] = (p[i + 1] * hi - p[i] * hj) / (hi - hj);
        }
    }
    Ok(p[0])
}

/// Richardson extrapolation of `F(eps) -> F(0)` for `F` even in `eps`,
/// i.e. polynomial extrapolation in `eps^2`.
pub fn richardson_even(eps: &[f64], f: &[Complex64]) -> Result<Complex64> {
    let h: Vec<f64> = eps.iter().map(|e| e * e).collect();
    neville_at_zero(&h, f)
}

/// Extrapolation in `eps` itself, for samples without a parity symmetry.
pub fn richardson_linear(eps: &[f64], f: &[Complex64]) -> Result<Complex64> {
    neville_at_zero(eps, f)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn exact_for_quadratic_in_eps_squared() {
        let eps: [f64; 3] = [0.1, 0.05, 0.025];
        let f: Vec<Complex64> = eps
            .iter()
            .map(|e| c(2.0 + 3.0 * e * e - 7.0 * e.powi(4)))
            .collect();
        let v = richardson_even(&eps, &f).unwrap();
        assert!((v - c(2.0)).norm() < 1e-12);
    }

    #[test]
    fn linear_extrapolation_of_line() {
        let v = richardson_linear(&[0.2, 0.1], &[c(1.2), c(1.1)]).unwrap();
        assert!((v - c(1.0)).norm() < 1e-14);
    }

    #[test]
    fn rejects_repeated_steps() {
        assert!(richardson_even(&[0.1, -0.1], &[c(1.0), c(1.0)]).is_err());
    }
}
