use nalgebra::Matrix4;
use num_complex::Complex64;

use crate::anisotropy::AnisotropyParam;
use crate::error::{Error, Result};

/// Absolute threshold below which a `sinh` denominator is treated as a pole.
pub const POLE_EPS: f64 = 1e-13;

/// Vertex weights `a`, `b`, `c` at one rapidity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Weights {
    pub a: Complex64,
    pub b: Complex64,
    pub c: Complex64,
}

/// `a = 1`, `b = sinh(lambda - eta/2) / sinh(lambda + eta/2)`,
/// `c = sinh(eta) / sinh(lambda + eta/2)`.
pub fn boltzmann_weights(lambda: Complex64, gamma: AnisotropyParam) -> Result<Weights> {
    let half = gamma.eta() * 0.5;
    let den = (lambda + half).sinh();
    if den.norm() < POLE_EPS {
        return Err(Error::Pole {
            what: "Boltzmann weights",
            at: lambda,
        });
    }
    Ok(Weights {
        a: Complex64::new(1.0, 0.0),
        b: (lambda - half).sinh() / den,
        c: gamma.eta().sinh() / den,
    })
}

/// The `L`-operator on auxiliary ⊗ physical space, basis order
/// `|up up>, |up down>, |down up>, |down down>`.
pub fn l_matrix(lambda: Complex64, gamma: AnisotropyParam) -> Result<Matrix4<Complex64>> {
    let w = boltzmann_weights(lambda, gamma)?;
    let one = Complex64::new(1.0, 0.0);
    let mut m = Matrix4::zeros();
    m[(0, 0)] = one;
    m[(1, 1)] = w.b;
    m[(1, 2)] = w.c;
    m[(2, 1)] = w.c;
    m[(2, 2)] = w.b;
    m[(3, 3)] = one;
    Ok(m)
}

/// `b(lambda)` alone, the building block of `d(lambda)`.
pub(crate) fn weight_b(lambda: Complex64, gamma: AnisotropyParam) -> Result<Complex64> {
    boltzmann_weights(lambda, gamma).map(|w| w.b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g() -> AnisotropyParam {
        AnisotropyParam::new(0.6).unwrap()
    }

    fn close(a: Complex64, b: Complex64) -> bool {
        (a - b).norm() < 1e-14
    }

    #[test]
    fn a_is_one_everywhere() {
        for lam in [Complex64::new(0.3, 0.1), Complex64::new(-2.0, 1.2)] {
            assert_eq!(boltzmann_weights(lam, g()).unwrap().a, Complex64::new(1.0, 0.0));
        }
    }

    #[test]
    fn b_vanishes_at_half_eta() {
        let w = boltzmann_weights(g().eta() * 0.5, g()).unwrap();
        assert!(w.b.norm() < 1e-15);
        assert!(close(w.c, Complex64::new(1.0, 0.0)));
    }

    #[test]
    fn b_at_origin_is_minus_one() {
        let w = boltzmann_weights(Complex64::new(0.0, 0.0), g()).unwrap();
        assert!(close(w.b, Complex64::new(-1.0, 0.0)));
    }

    #[test]
    fn pole_detected_modulo_i_pi() {
        let at = -g().eta() * 0.5;
        assert!(matches!(boltzmann_weights(at, g()), Err(Error::Pole { .. })));
        let shifted = at + Complex64::new(0.0, std::f64::consts::PI);
        assert!(boltzmann_weights(shifted, g()).is_err());
    }

    #[test]
    fn l_matrix_at_half_eta_is_permutation() {
        let l = l_matrix(g().eta() * 0.5, g()).unwrap();
        assert!(l[(1, 1)].norm() < 1e-15 && l[(2, 2)].norm() < 1e-15);
        assert!(close(l[(1, 2)], Complex64::new(1.0, 0.0)));
        assert!(close(l[(2, 1)], Complex64::new(1.0, 0.0)));
    }

    #[test]
    fn l_matrix_at_origin_entrywise() {
        // direct substitution into the weights at lambda = 0
        let gamma = g().gamma();
        let l = l_matrix(Complex64::new(0.0, 0.0), g()).unwrap();
        let c0 = Complex64::new(0.0, gamma.sin()) / Complex64::new(0.0, (gamma / 2.0).sin());
        assert!(close(l[(1, 1)], Complex64::new(-1.0, 0.0)));
        assert!(close(l[(1, 2)], c0));
        assert!(close(c0, Complex64::new(2.0 * (gamma / 2.0).cos(), 0.0)));
        for i in 0..4 {
            for j in 0..4 {
                let corner_or_middle = (i == j) || (i == 1 && j == 2) || (i == 2 && j == 1);
                if !corner_or_middle {
                    assert_eq!(l[(i, j)], Complex64::new(0.0, 0.0));
                }
            }
        }
        assert_eq!(l[(0, 0)], Complex64::new(1.0, 0.0));
        assert_eq!(l[(3, 3)], Complex64::new(1.0, 0.0));
    }
}
