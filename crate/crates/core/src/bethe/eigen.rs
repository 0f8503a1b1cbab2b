use std::f64::consts::PI;

use num_complex::Complex64;

use crate::algebra::{bethe_state, LatticeSpec, Monodromy, MAX_VECTOR_SITES};
use crate::bethe::solver::flip_eigenvalue;
use crate::error::{Error, Result};

/// Distance below which `t(lambda)` is evaluated through a contour average
/// instead of the (cancelling) pole form.
const NEAR_ROOT: f64 = 1e-6;
const CIRCLE_POINTS: usize = 16;

fn t_direct(lambda: Complex64, roots: &[Complex64], spec: &LatticeSpec) -> Result<Complex64> {
    let eta = spec.gamma().eta();
    let d = spec.d_eigenvalue(lambda)?;
    let mut first = Complex64::new(1.0, 0.0);
    let mut second = Complex64::new(1.0, 0.0);
    for &r in roots {
        // b^{-1}(x + eta/2) = sinh(x + eta) / sinh(x)
        let u = r - lambda;
        let den_first = u.sinh();
        let den_second = (-u).sinh();
        if den_first.norm() < 1e-300 {
            return Err(Error::Pole {
                what: "transfer eigenvalue",
                at: lambda,
            });
        }
        first *= (u + eta).sinh() / den_first;
        second *= (-u + eta).sinh() / den_second;
    }
    Ok(first + d * second)
}

/// Transfer-matrix eigenvalue
/// `t(lambda) = prod_i b^{-1}(lambda_i - lambda + eta/2) + d(lambda) prod_i b^{-1}(lambda - lambda_i + eta/2)`.
///
/// The two terms have cancelling poles at the roots when the Bethe
/// equations hold; within `1e-6` of a root the value is taken as the mean
/// over a small circle, which is exact to high order for the analytic sum.
pub fn eigenvalue_t(lambda: Complex64, roots: &[Complex64], spec: &LatticeSpec) -> Result<Complex64> {
    let near = roots
        .iter()
        .map(|&r| (lambda - r).sinh().norm())
        .fold(f64::INFINITY, f64::min);
    if near >= NEAR_ROOT {
        return t_direct(lambda, roots, spec);
    }
    // radius below a quarter of the distance to any other singular point
    let eta = spec.gamma().eta();
    let mut others = f64::INFINITY;
    for &r in roots {
        let s = (lambda - r).sinh().norm();
        if s >= NEAR_ROOT {
            others = others.min(s);
        }
    }
    for &m in spec.mu() {
        others = others.min((lambda - m + eta * 0.5).sinh().norm());
    }
    let radius = (0.25 * others).min(1e-3);
    let mut acc = Complex64::new(0.0, 0.0);
    for k in 0..CIRCLE_POINTS {
        let theta = 2.0 * PI * (k as f64 + 0.5) / CIRCLE_POINTS as f64;
        acc += t_direct(lambda + Complex64::from_polar(radius, theta), roots, spec)?;
    }
    Ok(acc / CIRCLE_POINTS as f64)
}

/// Result of checking `|N>` against the transfer matrix and the flip.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenCheck {
    /// `||T(lambda)|N> - t(lambda)|N>|| / |||N>||`.
    pub residual: f64,
    /// Rayleigh quotient of `R` on `|N>`.
    pub r_value: Complex64,
    /// `||R|N> - r|N>|| / |||N>||`.
    pub r_residual: f64,
}

impl EigenCheck {
    /// `+-1` when `r_value` is within `tol` of it.
    pub fn r_sign(&self, tol: f64) -> Option<i8> {
        let s = if self.r_value.re >= 0.0 { 1 } else { -1 };
        ((self.r_value - s as f64).norm() < tol && self.r_residual < tol).then_some(s)
    }
}

/// Brute-force eigenstate check of `|N>` at spectral parameter `lambda`.
pub fn eigenvalue_residual(
    roots: &[Complex64],
    spec: &LatticeSpec,
    lambda: Complex64,
) -> Result<EigenCheck> {
    if spec.sites() > MAX_VECTOR_SITES {
        return Err(Error::input(format!(
            "eigenstate check limited to M <= {MAX_VECTOR_SITES}"
        )));
    }
    let v = bethe_state(roots, spec)?;
    let tv = Monodromy::new(lambda, spec)?.apply_transfer(&v)?;
    let t = eigenvalue_t(lambda, roots, spec)?;
    let nrm = v.norm();
    if nrm == 0.0 {
        return Err(Error::singular("Bethe state vanishes"));
    }
    let residual = tv.sub(&v.scaled(t)).norm() / nrm;
    let (r_value, r_residual) = flip_eigenvalue(roots, spec)?;
    Ok(EigenCheck {
        residual,
        r_value,
        r_residual,
    })
}
