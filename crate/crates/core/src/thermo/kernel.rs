use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::algebra::POLE_EPS;
use crate::anisotropy::AnisotropyParam;
use crate::bethe::{p_n_derivative, SpectralPoint};
use crate::error::{Error, Result};

fn half_shift(n: u32, gamma: AnisotropyParam) -> Complex64 {
    Complex64::new(0.0, n as f64 * gamma.gamma() / 2.0)
}

/// `K_n(lambda) = sin(n gamma) / (2 pi sinh(lambda - i n gamma/2) sinh(lambda + i n gamma/2))`.
pub fn kernel_k(n: u32, lambda: Complex64, gamma: AnisotropyParam) -> Result<Complex64> {
    let a = half_shift(n, gamma);
    let den = (lambda - a).sinh() * (lambda + a).sinh();
    if (lambda - a).sinh().norm() < POLE_EPS || (lambda + a).sinh().norm() < POLE_EPS {
        return Err(Error::Pole {
            what: "kernel K_n",
            at: lambda,
        });
    }
    Ok(Complex64::new((n as f64 * gamma.gamma()).sin() / (2.0 * PI), 0.0) / den)
}

/// `d K_n / d lambda = -K_n(lambda) [coth(lambda - i n gamma/2) + coth(lambda + i n gamma/2)]`.
pub fn kernel_k_derivative(n: u32, lambda: Complex64, gamma: AnisotropyParam) -> Result<Complex64> {
    let a = half_shift(n, gamma);
    let k = kernel_k(n, lambda, gamma)?;
    let coth = |z: Complex64| z.cosh() / z.sinh();
    Ok(-k * (coth(lambda - a) + coth(lambda + a)))
}

/// `K_n` at a point of the contour; real on both branches.
#[inline]
pub fn kernel_on(n: u32, lambda: SpectralPoint, gamma: AnisotropyParam) -> f64 {
    p_n_derivative(lambda, n, gamma) / (2.0 * PI)
}

/// Distribution of inhomogeneities entering `K_1^tot`: the average over a
/// finite list of real values. The homogeneous case is the single value 0.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MuDistribution {
    points: Vec<f64>,
}

impl MuDistribution {
    pub fn homogeneous() -> Self {
        Self { points: vec![0.0] }
    }

    pub fn single(mu: f64) -> Self {
        Self { points: vec![mu] }
    }

    pub fn from_points(points: Vec<f64>) -> Result<Self> {
        if points.is_empty() || points.iter().any(|m| !m.is_finite()) {
            return Err(Error::input("mu distribution needs finite values"));
        }
        Ok(Self { points })
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn is_homogeneous(&self) -> bool {
        self.points.iter().all(|&m| m == 0.0)
    }
}

/// `K_1^tot(lambda) = (1/M) sum_k K_1(lambda - mu_k)`.
pub fn k1_tot(lambda: Complex64, mu: &MuDistribution, gamma: AnisotropyParam) -> Result<Complex64> {
    let mut acc = Complex64::new(0.0, 0.0);
    for &m in &mu.points {
        acc += kernel_k(1, lambda - m, gamma)?;
    }
    Ok(acc / mu.points.len() as f64)
}

/// [`k1_tot`] at a point of the contour.
pub fn k1_tot_on(lambda: SpectralPoint, mu: &MuDistribution, gamma: AnisotropyParam) -> f64 {
    let s: f64 = mu
        .points
        .iter()
        .map(|&m| kernel_on(1, lambda.minus_real(m), gamma))
        .sum();
    s / mu.points.len() as f64
}
