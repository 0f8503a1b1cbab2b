use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::algebra::{bethe_state, LatticeSpec, MAX_VECTOR_SITES};
use crate::anisotropy::AnisotropyParam;
use crate::bethe::counting::{p_n_derivative, phi_derivative_raw, phi_raw};
use crate::bethe::spectral::{Branch, SpectralPoint};
use crate::error::{Error, Result};

/// Default residual tolerance of [`solve_bae`].
pub const DEFAULT_TOL: f64 = 1e-12;
const MAX_NEWTON: usize = 200;
const COLLISION: f64 = 1e-8;

/// A solved set of 1-string Bethe roots together with the lattice it
/// belongs to.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BetheRootSet {
    pub gamma: AnisotropyParam,
    #[serde(rename = "M")]
    pub sites: usize,
    pub mu: Vec<f64>,
    pub roots: Vec<SpectralPoint>,
    #[serde(rename = "n")]
    pub quantum_numbers: Vec<f64>,
    #[serde(rename = "v")]
    pub parities: Vec<i8>,
    pub residuals: Vec<f64>,
    /// Eigenvalue of the flip operator on `|N>`, when it was determined.
    pub r_sign: Option<i8>,
}

impl BetheRootSet {
    #[inline]
    pub fn len(&self) -> usize {
        self.roots.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    pub fn rapidities(&self) -> Vec<Complex64> {
        self.roots.iter().map(SpectralPoint::to_complex).collect()
    }

    pub fn lattice(&self) -> LatticeSpec {
        LatticeSpec::from_real(self.gamma, &self.mu).expect("finite inhomogeneities")
    }

    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().copied().fold(0.0, f64::max)
    }

    /// Errors unless every residual is below `tol`.
    pub fn require_solved(&self, tol: f64) -> Result<()> {
        let r = self.max_residual();
        if r >= tol {
            return Err(Error::Precondition(format!(
                "Bethe residual {r:e} is not below {tol:e}"
            )));
        }
        Ok(())
    }
}

/// Ground-state quantum numbers `n_j = j - (N + 1) / 2`, all parities `+1`.
pub fn ground_state_numbers(n: usize) -> (Vec<f64>, Vec<i8>) {
    let q = (1..=n).map(|j| j as f64 - (n as f64 + 1.0) / 2.0).collect();
    (q, vec![1; n])
}

/// Checks quantum numbers against the branch-resolved Bethe equations.
///
/// With `s_j` the number of other roots on the same line as root `j`, the
/// equations require `2 n_j = s_j (mod 2)`. For a uniform parity this is
/// "integers for odd `N`, half-integers for even `N`".
pub fn check_admissible(quantum_numbers: &[f64], parities: &[i8]) -> Result<()> {
    if quantum_numbers.len() != parities.len() {
        return Err(Error::DimensionMismatch {
            expected: quantum_numbers.len(),
            got: parities.len(),
        });
    }
    for &v in parities {
        Branch::from_parity(v)?;
    }
    for (j, (&n, &v)) in quantum_numbers.iter().zip(parities).enumerate() {
        let twice = 2.0 * n;
        if !twice.is_finite() || (twice - twice.round()).abs() > 1e-9 {
            return Err(Error::input(format!("n_{} = {n} is not a half-integer", j + 1)));
        }
        let same = parities.iter().filter(|&&w| w == v).count() - 1;
        if (twice.round() as i64 - same as i64).rem_euclid(2) != 0 {
            return Err(Error::input(format!(
                "n_{} = {n} has the wrong integrality for {same} other roots of parity {v}",
                j + 1
            )));
        }
        for (i, (&m, &w)) in quantum_numbers[..j].iter().zip(parities).enumerate() {
            if w == v && (m - n).abs() < 1e-9 {
                return Err(Error::input(format!(
                    "roots {} and {} share quantum number {n} and parity {v}",
                    i + 1,
                    j + 1
                )));
            }
        }
    }
    Ok(())
}

struct System<'a> {
    targets: Vec<f64>,
    branches: &'a [Branch],
    mu: &'a [f64],
    gamma: AnisotropyParam,
}

impl System<'_> {
    fn points(&self, x: &[f64]) -> Vec<SpectralPoint> {
        x.iter()
            .zip(self.branches)
            .map(|(&x, &branch)| SpectralPoint { x, branch })
            .collect()
    }

    fn residual(&self, x: &[f64]) -> Vec<f64> {
        let pts = self.points(x);
        pts.iter()
            .zip(&self.targets)
            .map(|(p, t)| phi_raw(*p, &pts, self.mu, self.gamma) - t)
            .collect()
    }

    fn jacobian(&self, x: &[f64]) -> DMatrix<f64> {
        let pts = self.points(x);
        let n = pts.len();
        DMatrix::from_fn(n, n, |i, j| {
            if i == j {
                // the j = i scattering term is constant (p_2(0) = 0)
                let self_term = p_n_derivative(SpectralPoint::real(0.0), 2, self.gamma);
                phi_derivative_raw(pts[i], &pts, self.mu, self.gamma) + self_term
            } else {
                p_n_derivative(pts[i].minus(&pts[j]), 2, self.gamma)
            }
        })
    }

    /// Solves one equation for coordinate `i` with the others frozen.
    fn solve_coordinate(&self, x: &mut [f64], i: usize) {
        let f = |x: &mut [f64], xi: f64| {
            x[i] = xi;
            let pts = self.points(x);
            phi_raw(pts[i], &pts, self.mu, self.gamma) - self.targets[i]
        };
        // scan outward from the current value for a sign change
        let start = x[i];
        let f0 = f(x, start);
        if f0 == 0.0 {
            return;
        }
        let mut bracket = None;
        let mut step = 0.05;
        while step < 64.0 && bracket.is_none() {
            for cand in [start + step, start - step] {
                let fc = f(x, cand);
                if fc.signum() != f0.signum() {
                    bracket = Some(if cand > start { (start, cand) } else { (cand, start) });
                    break;
                }
            }
            step *= 1.6;
        }
        let Some((mut lo, mut hi)) = bracket else {
            x[i] = start;
            return;
        };
        let mut flo = f(x, lo);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            let fm = f(x, mid);
            if fm.signum() == flo.signum() {
                lo = mid;
                flo = fm;
            } else {
                hi = mid;
            }
            if hi - lo < 1e-15 * (1.0 + mid.abs()) {
                break;
            }
        }
        x[i] = 0.5 * (lo + hi);
    }
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

fn newton(sys: &System, x: &mut Vec<f64>, tol: f64) -> f64 {
    let mut res = max_abs(&sys.residual(x));
    for _ in 0..MAX_NEWTON {
        if res < tol {
            break;
        }
        let r = DVector::from_vec(sys.residual(x));
        let Some(step) = sys.jacobian(x).lu().solve(&(-r)) else {
            break;
        };
        let mut t = 1.0;
        let mut improved = false;
        for _ in 0..40 {
            let trial: Vec<f64> = x.iter().zip(step.iter()).map(|(a, d)| a + t * d).collect();
            let tr = max_abs(&sys.residual(&trial));
            if tr < res {
                *x = trial;
                res = tr;
                improved = true;
                break;
            }
            t *= 0.5;
        }
        if !improved {
            break;
        }
    }
    res
}

/// Solves `phi(lambda_i) = 2 pi n_i` for roots on the lines selected by the
/// parities `v_i`.
///
/// Damped Newton with the analytic Jacobian, started from
/// `x_i = 2 gamma n_i / M`; when Newton stalls, coordinate-wise bracketing
/// sweeps refine the start and Newton is retried. For `M <= 12` the flip
/// eigenvalue of the resulting state is recorded in `r_sign`.
pub fn solve_bae(
    quantum_numbers: &[f64],
    parities: &[i8],
    spec: &LatticeSpec,
    tol: f64,
) -> Result<BetheRootSet> {
    if !(tol > 0.0) {
        return Err(Error::input("tolerance must be positive"));
    }
    let n = spec.half()?;
    if quantum_numbers.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: quantum_numbers.len(),
        });
    }
    check_admissible(quantum_numbers, parities)?;
    let gamma = spec.gamma();
    gamma.require_nondegenerate(2)?;
    let mu = spec.real_mu()?;
    let branches: Vec<Branch> = parities
        .iter()
        .map(|&v| Branch::from_parity(v))
        .collect::<Result<_>>()?;
    let m = spec.sites() as f64;
    let mean_mu = if mu.is_empty() { 0.0 } else { mu.iter().sum::<f64>() / m };
    let sys = System {
        targets: quantum_numbers.iter().map(|q| 2.0 * PI * q).collect(),
        branches: &branches,
        mu: &mu,
        gamma,
    };

    let mut x: Vec<f64> = quantum_numbers
        .iter()
        .map(|q| mean_mu + 2.0 * gamma.gamma() * q / m.max(1.0))
        .collect();
    let mut res = newton(&sys, &mut x, tol);
    let mut sweeps = 0;
    while res >= tol && sweeps < MAX_NEWTON {
        for i in 0..x.len() {
            sys.solve_coordinate(&mut x, i);
        }
        sweeps += 1;
        let r = max_abs(&sys.residual(&x));
        if r < 1e-6 || sweeps % 10 == 0 {
            res = newton(&sys, &mut x, tol);
        } else {
            res = r;
        }
    }
    if res >= tol {
        return Err(Error::NoConvergence {
            iterations: MAX_NEWTON,
            best_residual: res,
        });
    }

    let roots = sys.points(&x);
    for j in 0..roots.len() {
        for i in 0..j {
            if roots[i].branch == roots[j].branch && (roots[i].x - roots[j].x).abs() < COLLISION {
                return Err(Error::RootCollision {
                    first: i + 1,
                    second: j + 1,
                });
            }
        }
    }

    let rapidities: Vec<Complex64> = roots.iter().map(SpectralPoint::to_complex).collect();
    let prod_d = rapidities
        .iter()
        .try_fold(Complex64::new(1.0, 0.0), |acc, &l| {
            spec.d_eigenvalue(l).map(|d| acc * d)
        })?;
    if (prod_d - 1.0).norm() > 1e-8 {
        return Err(Error::Precondition(format!(
            "product of d(lambda_j) is {prod_d}, not 1"
        )));
    }

    let residuals = sys.residual(&x).iter().map(|r| r.abs()).collect();
    let r_sign = if spec.sites() <= MAX_VECTOR_SITES {
        flip_sign(&rapidities, spec)?
    } else {
        None
    };
    Ok(BetheRootSet {
        gamma,
        sites: spec.sites(),
        mu,
        roots,
        quantum_numbers: quantum_numbers.to_vec(),
        parities: parities.to_vec(),
        residuals,
        r_sign,
    })
}

/// `r` with `R|N> = r|N>`, when `r` is `+-1` to `1e-8`.
pub(crate) fn flip_sign(rapidities: &[Complex64], spec: &LatticeSpec) -> Result<Option<i8>> {
    let (r, residual) = flip_eigenvalue(rapidities, spec)?;
    let sign = if r.re >= 0.0 { 1i8 } else { -1 };
    Ok(((r - sign as f64).norm() < 1e-8 && residual < 1e-8).then_some(sign))
}

/// Rayleigh quotient of `R` on `|N>` and the relative eigen-residual.
pub(crate) fn flip_eigenvalue(
    rapidities: &[Complex64],
    spec: &LatticeSpec,
) -> Result<(Complex64, f64)> {
    let v = bethe_state(rapidities, spec)?;
    let rv = v.flipped();
    let nrm2: f64 = v.amplitudes().iter().map(|a| a.norm_sqr()).sum();
    if nrm2 == 0.0 {
        return Err(Error::singular("Bethe state vanishes"));
    }
    let r: Complex64 = v
        .amplitudes()
        .iter()
        .zip(rv.amplitudes())
        .map(|(a, b)| a.conj() * b)
        .sum::<Complex64>()
        / nrm2;
    let residual = rv.sub(&v.scaled(r)).norm() / nrm2.sqrt();
    Ok((r, residual))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gamma() -> AnisotropyParam {
        AnisotropyParam::new(0.6).unwrap()
    }

    #[test]
    fn single_root_sits_at_origin() {
        let spec = LatticeSpec::homogeneous(gamma(), 2);
        let set = solve_bae(&[0.0], &[1], &spec, DEFAULT_TOL).unwrap();
        assert!(set.roots[0].x.abs() < 1e-14);
        assert_eq!(set.r_sign.map(i8::abs), Some(1));
    }

    #[test]
    fn admissibility_rules() {
        assert!(check_admissible(&[-0.5, 0.5], &[1, 1]).is_ok());
        assert!(check_admissible(&[0.0, 1.0], &[1, 1]).is_err());
        assert!(check_admissible(&[0.5, 0.5], &[1, 1]).is_err());
        // one real and one shifted root: each has no same-line partner
        assert!(check_admissible(&[0.0, 0.0], &[1, -1]).is_ok());
        assert!(check_admissible(&[0.3], &[1]).is_err());
        assert!(check_admissible(&[0.0], &[2]).is_err());
    }

    #[test]
    fn wrong_count_rejected() {
        let spec = LatticeSpec::homogeneous(gamma(), 4);
        assert!(matches!(
            solve_bae(&[0.0], &[1], &spec, DEFAULT_TOL),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(solve_bae(&[-0.5, 0.5], &[1, 1], &spec, 0.0).is_err());
    }

    #[test]
    fn ground_state_numbers_are_centered() {
        let (q, v) = ground_state_numbers(4);
        assert_eq!(q, vec![-1.5, -0.5, 0.5, 1.5]);
        assert!(v.iter().all(|&p| p == 1));
    }

    #[test]
    fn json_field_names() {
        let spec = LatticeSpec::homogeneous(gamma(), 2);
        let set = solve_bae(&[0.0], &[1], &spec, DEFAULT_TOL).unwrap();
        let json = serde_json::to_value(&set).unwrap();
        for key in ["gamma", "M", "mu", "roots", "n", "v", "residuals", "r_sign"] {
            assert!(json.get(key).is_some(), "missing {key}");
        }
        assert_eq!(json["roots"][0]["branch"], "real");
        let back: BetheRootSet = serde_json::from_value(json).unwrap();
        assert_eq!(back, set);
    }
}
