use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which line of the contour a point lies on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    /// `Im lambda = 0`, traversed left to right.
    Real,
    /// `Im lambda = pi/2`, traversed right to left.
    Shifted,
}

impl Branch {
    /// Branch of a difference of two points (imaginary parts add mod `i pi`).
    #[inline]
    pub fn combine(self, other: Branch) -> Branch {
        if self == other {
            Branch::Real
        } else {
            Branch::Shifted
        }
    }

    #[inline]
    pub fn parity(self) -> i8 {
        match self {
            Branch::Real => 1,
            Branch::Shifted => -1,
        }
    }

    pub fn from_parity(v: i8) -> Result<Branch> {
        match v {
            1 => Ok(Branch::Real),
            -1 => Ok(Branch::Shifted),
            _ => Err(Error::input(format!("parity must be +1 or -1, got {v}"))),
        }
    }
}

/// A point `x + i pi (1 - v) / 4` on the contour.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralPoint {
    pub x: f64,
    pub branch: Branch,
}

impl SpectralPoint {
    pub fn real(x: f64) -> Self {
        Self {
            x,
            branch: Branch::Real,
        }
    }

    pub fn shifted(x: f64) -> Self {
        Self {
            x,
            branch: Branch::Shifted,
        }
    }

    pub fn from_parity(x: f64, v: i8) -> Result<Self> {
        Ok(Self {
            x,
            branch: Branch::from_parity(v)?,
        })
    }

    /// `v = 1 - (4/pi) Im lambda`.
    #[inline]
    pub fn parity(&self) -> i8 {
        self.branch.parity()
    }

    pub fn to_complex(&self) -> Complex64 {
        match self.branch {
            Branch::Real => Complex64::new(self.x, 0.0),
            Branch::Shifted => Complex64::new(self.x, FRAC_PI_2),
        }
    }

    /// `self - other`, reduced modulo `i pi`.
    #[inline]
    pub fn minus(&self, other: &SpectralPoint) -> SpectralPoint {
        SpectralPoint {
            x: self.x - other.x,
            branch: self.branch.combine(other.branch),
        }
    }

    /// `self - mu` for a real shift.
    #[inline]
    pub fn minus_real(&self, mu: f64) -> SpectralPoint {
        SpectralPoint {
            x: self.x - mu,
            branch: self.branch,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parity_round_trip() {
        for v in [1i8, -1] {
            let p = SpectralPoint::from_parity(0.7, v).unwrap();
            let from_im = 1.0 - 4.0 / std::f64::consts::PI * p.to_complex().im;
            assert_eq!(from_im.round() as i8, v);
        }
        assert!(SpectralPoint::from_parity(0.0, 0).is_err());
    }

    #[test]
    fn difference_of_two_shifted_is_real() {
        let d = SpectralPoint::shifted(1.0).minus(&SpectralPoint::shifted(0.25));
        assert_eq!(d, SpectralPoint::real(0.75));
        let e = SpectralPoint::real(1.0).minus(&SpectralPoint::shifted(0.25));
        assert_eq!(e.branch, Branch::Shifted);
    }
}
