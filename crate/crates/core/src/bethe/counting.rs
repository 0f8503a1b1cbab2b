use std::f64::consts::PI;

use num_complex::Complex64;

use crate::algebra::LatticeSpec;
use crate::anisotropy::AnisotropyParam;
use crate::bethe::spectral::{Branch, SpectralPoint};
use crate::error::{Error, Result};

/// Branch function
/// `p_n(lambda) = 2 arctan(tanh(x) cot(n gamma / 2))` on the real line and
/// `-2 arctan(tanh(x) tan(n gamma / 2))` on the shifted line.
///
/// Written with `atan2` so it stays total (and continuous along each line)
/// even at `gamma = 0`.
pub fn p_n(lambda: SpectralPoint, n: u32, gamma: AnisotropyParam) -> f64 {
    let half = n as f64 * gamma.gamma() / 2.0;
    let t = lambda.x.tanh();
    match lambda.branch {
        Branch::Real => 2.0 * (t * half.cos()).atan2(half.sin()),
        Branch::Shifted => -2.0 * (t * half.sin()).atan2(half.cos()),
    }
}

/// `d p_n / d lambda`, equal to `2 pi K_n(lambda)`.
pub fn p_n_derivative(lambda: SpectralPoint, n: u32, gamma: AnisotropyParam) -> f64 {
    let a = n as f64 * gamma.gamma() / 2.0;
    let s2 = a.sin().powi(2);
    match lambda.branch {
        Branch::Real => (2.0 * a).sin() / (lambda.x.sinh().powi(2) + s2),
        Branch::Shifted => -(2.0 * a).sin() / (lambda.x.cosh().powi(2) - s2),
    }
}

pub(crate) fn phi_raw(
    lambda: SpectralPoint,
    roots: &[SpectralPoint],
    mu: &[f64],
    gamma: AnisotropyParam,
) -> f64 {
    let drive: f64 = mu.iter().map(|&m| p_n(lambda.minus_real(m), 1, gamma)).sum();
    let scatter: f64 = roots.iter().map(|r| p_n(lambda.minus(r), 2, gamma)).sum();
    drive - scatter
}

pub(crate) fn phi_derivative_raw(
    lambda: SpectralPoint,
    roots: &[SpectralPoint],
    mu: &[f64],
    gamma: AnisotropyParam,
) -> f64 {
    let drive: f64 = mu
        .iter()
        .map(|&m| p_n_derivative(lambda.minus_real(m), 1, gamma))
        .sum();
    let scatter: f64 = roots
        .iter()
        .map(|r| p_n_derivative(lambda.minus(r), 2, gamma))
        .sum();
    drive - scatter
}

fn check_gamma(gamma: AnisotropyParam) -> Result<()> {
    gamma.require_nondegenerate(1)
}

/// Counting function `phi(lambda) = sum_k p_1(lambda - mu_k) - sum_j p_2(lambda - lambda_j)`.
/// On a solution, `phi(lambda_i) = 2 pi n_i`.
pub fn counting_function(
    lambda: SpectralPoint,
    roots: &[SpectralPoint],
    spec: &LatticeSpec,
) -> Result<f64> {
    check_gamma(spec.gamma())?;
    let mu = spec.real_mu()?;
    Ok(phi_raw(lambda, roots, &mu, spec.gamma()))
}

/// `d phi / d lambda` along the branch of `lambda`; divided by `2 pi M` this
/// is the finite-size vacancy density.
pub fn counting_derivative(
    lambda: SpectralPoint,
    roots: &[SpectralPoint],
    spec: &LatticeSpec,
) -> Result<f64> {
    check_gamma(spec.gamma())?;
    let mu = spec.real_mu()?;
    Ok(phi_derivative_raw(lambda, roots, &mu, spec.gamma()))
}

/// Logarithmic phase of the Bethe equations in principal-branch form,
/// `i ln d(lambda) + i sum_k ln(-sinh(eta + lambda - lambda_k) / sinh(eta - lambda + lambda_k))`.
///
/// It equals `-phi(lambda)` modulo `pi`; on a uniform-parity solution it is
/// `pi` modulo `2 pi`.
pub fn log_phase(lambda: Complex64, roots: &[Complex64], spec: &LatticeSpec) -> Result<Complex64> {
    let i = Complex64::new(0.0, 1.0);
    let eta = spec.gamma().eta();
    let mut acc = i * spec.d_eigenvalue(lambda)?.ln();
    for &r in roots {
        let den = (eta - lambda + r).sinh();
        if den.norm() < 1e-300 {
            return Err(Error::Pole {
                what: "logarithmic Bethe phase",
                at: lambda,
            });
        }
        acc += i * (-(eta + lambda - r).sinh() / den).ln();
    }
    Ok(acc)
}

/// Distance of `x` from the nearest multiple of `period`.
pub fn distance_mod(x: f64, period: f64) -> f64 {
    let r = x.rem_euclid(period);
    r.min(period - r)
}

/// `p_n(+inf)` on the real line, `pi - n gamma` for `0 < n gamma < pi`.
pub fn p_n_limit_real(n: u32, gamma: AnisotropyParam) -> f64 {
    PI - n as f64 * gamma.gamma()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(x: f64) -> AnisotropyParam {
        AnisotropyParam::new(x).unwrap()
    }

    #[test]
    fn p_vanishes_at_origin() {
        assert_eq!(p_n(SpectralPoint::real(0.0), 1, g(0.6)), 0.0);
    }

    #[test]
    fn p_limit_at_infinity() {
        for n in [1, 2] {
            let v = p_n(SpectralPoint::real(40.0), n, g(0.6));
            assert!((v - p_n_limit_real(n, g(0.6))).abs() < 1e-14);
        }
    }

    #[test]
    fn p_is_odd_on_real_line() {
        for x in [0.1, 0.7, 3.0] {
            for n in [1, 2] {
                let a = p_n(SpectralPoint::real(x), n, g(1.1));
                let b = p_n(SpectralPoint::real(-x), n, g(1.1));
                assert!((a + b).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn monotonicity_matches_branch() {
        // increasing on the real line, decreasing on the shifted line, sin(n gamma) > 0
        for gamma in [0.2, 0.6, 1.0, 1.5] {
            for n in [1, 2] {
                for branch in [Branch::Real, Branch::Shifted] {
                    let vals: Vec<f64> = (0..1000)
                        .map(|i| -10.0 + 20.0 * i as f64 / 999.0)
                        .map(|x| p_n(SpectralPoint { x, branch }, n, g(gamma)))
                        .collect();
                    let ok = vals.windows(2).all(|w| match branch {
                        Branch::Real => w[1] > w[0] || (w[1] - w[0]).abs() < 1e-15,
                        Branch::Shifted => w[1] < w[0] || (w[1] - w[0]).abs() < 1e-15,
                    });
                    assert!(ok, "gamma {gamma} n {n} {branch:?}");
                }
            }
        }
    }

    #[test]
    fn derivative_matches_finite_difference() {
        let h = 1e-6;
        for branch in [Branch::Real, Branch::Shifted] {
            for x in [-1.3, 0.0, 0.4, 2.2] {
                for n in [1, 2] {
                    let f = |y: f64| p_n(SpectralPoint { x: y, branch }, n, g(0.7));
                    let fd = (f(x + h) - f(x - h)) / (2.0 * h);
                    let an = p_n_derivative(SpectralPoint { x, branch }, n, g(0.7));
                    assert!((fd - an).abs() < 1e-8, "{branch:?} {x} {n}: {fd} vs {an}");
                }
            }
        }
    }

    #[test]
    fn distance_mod_wraps() {
        assert!((distance_mod(2.0 * PI - 1e-3, PI) - 1e-3).abs() < 1e-12);
        assert!(distance_mod(-3.0 * PI, PI) < 1e-12);
    }
}
