use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Anisotropy of the massless regime, `eta = i * gamma` with
/// `0 <= gamma < pi/2`, so that `Delta = cos(gamma)` lies in `(0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct AnisotropyParam {
    gamma: f64,
}

impl AnisotropyParam {
    pub fn new(gamma: f64) -> Result<Self> {
        if !gamma.is_finite() || !(0.0..FRAC_PI_2).contains(&gamma) {
            return Err(Error::input(format!(
                "gamma = {gamma} outside the massless window [0, pi/2)"
            )));
        }
        Ok(Self { gamma })
    }

    #[inline]
    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// `eta = i * gamma`.
    #[inline]
    pub fn eta(&self) -> Complex64 {
        Complex64::new(0.0, self.gamma)
    }

    /// `Delta = cosh(eta) = cos(gamma)`.
    #[inline]
    pub fn delta(&self) -> f64 {
        self.gamma.cos()
    }

    /// Errors unless `sin(n * gamma) > 0`, the condition under which the
    /// branch functions `p_n` are strictly monotone and the kernels `K_n`
    /// are non-degenerate.
    pub fn require_nondegenerate(&self, n: u32) -> Result<()> {
        if (n as f64 * self.gamma).sin() <= 0.0 {
            return Err(Error::input(format!(
                "sin({n} * gamma) must be positive (gamma = {})",
                self.gamma
            )));
        }
        Ok(())
    }
}

impl TryFrom<f64> for AnisotropyParam {
    type Error = Error;

    fn try_from(gamma: f64) -> Result<Self> {
        Self::new(gamma)
    }
}

impl From<AnisotropyParam> for f64 {
    fn from(p: AnisotropyParam) -> f64 {
        p.gamma
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn window_edges() {
        assert!(AnisotropyParam::new(0.0).is_ok());
        assert!(AnisotropyParam::new(FRAC_PI_2).is_err());
        assert!(AnisotropyParam::new(-1e-9).is_err());
        assert!(AnisotropyParam::new(f64::NAN).is_err());
    }

    #[test]
    fn delta_in_unit_interval() {
        for g in [0.0, 0.3, 1.0, 1.5] {
            let d = AnisotropyParam::new(g).unwrap().delta();
            assert!(d > 0.0 && d <= 1.0);
        }
    }

    #[test]
    fn degenerate_kernel_rejected() {
        let p = AnisotropyParam::new(0.0).unwrap();
        assert!(p.require_nondegenerate(1).is_err());
        assert!(AnisotropyParam::new(0.4).unwrap().require_nondegenerate(2).is_ok());
    }
}
