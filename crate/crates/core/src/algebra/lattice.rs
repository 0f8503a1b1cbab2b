use num_complex::Complex64;

use crate::algebra::weights::weight_b;
use crate::anisotropy::AnisotropyParam;
use crate::error::{Error, Result};

/// Lattice size and column inhomogeneities `mu_1..mu_M`.
///
/// Any number of columns is accepted so that single-column operator checks
/// are possible; routines that need the half-filled sector call
/// [`LatticeSpec::half`], which insists on an even `M`.
#[derive(Debug, Clone, PartialEq)]
pub struct LatticeSpec {
    gamma: AnisotropyParam,
    mu: Vec<Complex64>,
}

impl LatticeSpec {
    pub fn new(gamma: AnisotropyParam, mu: Vec<Complex64>) -> Result<Self> {
        if let Some(k) = mu.iter().position(|m| !(m.re.is_finite() && m.im.is_finite())) {
            return Err(Error::input(format!("mu_{} is not finite", k + 1)));
        }
        Ok(Self { gamma, mu })
    }

    pub fn from_real(gamma: AnisotropyParam, mu: &[f64]) -> Result<Self> {
        Self::new(gamma, mu.iter().map(|&m| Complex64::new(m, 0.0)).collect())
    }

    pub fn homogeneous(gamma: AnisotropyParam, sites: usize) -> Self {
        Self {
            gamma,
            mu: vec![Complex64::new(0.0, 0.0); sites],
        }
    }

    #[inline]
    pub fn gamma(&self) -> AnisotropyParam {
        self.gamma
    }

    #[inline]
    pub fn sites(&self) -> usize {
        self.mu.len()
    }

    #[inline]
    pub fn mu(&self) -> &[Complex64] {
        &self.mu
    }

    /// `N = M / 2`; errors for odd `M`.
    pub fn half(&self) -> Result<usize> {
        if self.mu.len() % 2 != 0 {
            return Err(Error::input(format!(
                "lattice size M = {} must be even",
                self.mu.len()
            )));
        }
        Ok(self.mu.len() / 2)
    }

    /// Real parts of the inhomogeneities, provided they are all real.
    pub fn real_mu(&self) -> Result<Vec<f64>> {
        self.mu
            .iter()
            .enumerate()
            .map(|(k, m)| {
                if m.im.abs() > 1e-14 {
                    Err(Error::input(format!("mu_{} = {m} is not real", k + 1)))
                } else {
                    Ok(m.re)
                }
            })
            .collect()
    }

    /// Reference-state eigenvalue of `D`: `d(lambda) = prod_k b(lambda - mu_k)`.
    pub fn d_eigenvalue(&self, lambda: Complex64) -> Result<Complex64> {
        self.mu.iter().enumerate().try_fold(
            Complex64::new(1.0, 0.0),
            |acc, (k, &m)| match weight_b(lambda - m, self.gamma) {
                Ok(b) => Ok(acc * b),
                Err(_) => Err(Error::ColumnPole {
                    column: k + 1,
                    at: lambda - m,
                }),
            },
        )
    }

    /// Copy with every inhomogeneity shifted by `delta`.
    pub fn shifted(&self, delta: Complex64) -> Self {
        Self {
            gamma: self.gamma,
            mu: self.mu.iter().map(|m| m + delta).collect(),
        }
    }
}
