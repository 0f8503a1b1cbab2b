use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::daction::g_coefficient;
use super::gaudin::varphi_prime_raw;
use super::scalar::{ratio_from_rows, rows_times_inverse, window_rows};
use super::slavnov::ON_SHELL_TOL;
use super::util::{ordered_tuples, require_distinct};
use crate::algebra::{weight_b, LatticeSpec};
use crate::bethe::{solve_bae, BetheRootSet};
use crate::error::{Error, Result};
use crate::extrapolate::richardson_even;

/// Run of `n` consecutive columns starting at column `k` (1-based), i.e.
/// columns `k, k+1, ..., k+n-1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct EfpRequest {
    pub k: usize,
    pub n: usize,
}

impl EfpRequest {
    pub fn new(k: usize, n: usize, sites: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::input("run length n must be at least 1"));
        }
        if k == 0 || k + n - 1 > sites {
            return Err(Error::input(format!(
                "columns {k}..{} do not fit in M = {sites}",
                k + n - 1
            )));
        }
        Ok(Self { k, n })
    }

    /// The 1-based columns of the run.
    pub fn columns(&self) -> Vec<usize> {
        (self.k..self.k + self.n).collect()
    }

    fn window(&self, spec: &LatticeSpec) -> Vec<Complex64> {
        spec.mu()[self.k - 1..self.k - 1 + self.n].to_vec()
    }
}

/// Emptiness formation probability of the requested run via the
/// determinant representation (complex value; the imaginary part is
/// round-off for physical states).
///
/// The window inhomogeneities must be pairwise distinct; see
/// [`efp_finite_split`] for coinciding ones.
pub fn efp_finite_complex(req: EfpRequest, roots: &BetheRootSet) -> Result<Complex64> {
    roots.require_solved(ON_SHELL_TOL)?;
    let spec = roots.lattice();
    EfpRequest::new(req.k, req.n, spec.sites())?;
    let window = req.window(&spec);
    require_distinct(&window, "inhomogeneities of the window (use the split limit)")?;
    let lambdas = roots.rapidities();
    let big_n = lambdas.len();
    let gamma = spec.gamma();
    let eta = gamma.eta();

    let mut tinv = Complex64::new(1.0, 0.0);
    for &w in &window {
        for &l in &lambdas {
            tinv *= weight_b(l - w, gamma)?;
        }
    }
    let phi = varphi_prime_raw(&lambdas, &spec)?;
    let y = rows_times_inverse(&phi, &window_rows(&lambdas, &window, &spec)?)?;
    let extended: Vec<Complex64> = lambdas
        .iter()
        .copied()
        .chain(window.iter().map(|w| w + eta * 0.5))
        .collect();

    let tuples = ordered_tuples(req.n, |_| big_n);
    let terms: Vec<Complex64> = tuples
        .par_iter()
        .map(|idx| {
            let g = g_coefficient(idx, &extended, &spec)?;
            let s = ratio_from_rows(&lambdas, &y, idx, &window, &spec)?;
            Ok(g * s)
        })
        .collect::<Result<_>>()?;
    let sum: Complex64 = terms.iter().sum();
    Ok(tinv * sum)
}

/// Real part of [`efp_finite_complex`].
pub fn efp_finite(req: EfpRequest, roots: &BetheRootSet) -> Result<f64> {
    efp_finite_complex(req, roots).map(|z| z.re)
}

/// Default splitting schedule for coinciding window inhomogeneities.
pub const DEFAULT_EPS_SCHEDULE: [f64; 3] = [0.04, 0.02, 0.01];

/// Result of an `eps -> 0` extrapolation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SplitEstimate {
    pub value: f64,
    pub imag: f64,
    /// `(eps, value at eps)` for each step of the schedule.
    pub samples: Vec<(f64, f64)>,
}

/// Finite-lattice EFP when window inhomogeneities coincide (e.g. the
/// homogeneous lattice): the window is split as
/// `mu_{k+l-1} + (l - (n+1)/2) eps`, the Bethe equations are re-solved for
/// each `eps`, and the values are extrapolated in `eps^2`.
///
/// The EFP is invariant under permuting the window inhomogeneities, so the
/// split value is even in `eps`.
pub fn efp_finite_split(
    req: EfpRequest,
    spec: &LatticeSpec,
    quantum_numbers: &[f64],
    parities: &[i8],
    eps: &[f64],
    tol: f64,
) -> Result<SplitEstimate> {
    EfpRequest::new(req.k, req.n, spec.sites())?;
    if eps.is_empty() || eps.iter().any(|e| !(*e > 0.0)) {
        return Err(Error::input("splitting schedule must be positive and non-empty"));
    }
    let mut values = Vec::with_capacity(eps.len());
    for &e in eps {
        let mut mu = spec.mu().to_vec();
        for l in 0..req.n {
            mu[req.k - 1 + l] += (l as f64 - (req.n as f64 - 1.0) / 2.0) * e;
        }
        let split = LatticeSpec::new(spec.gamma(), mu)?;
        let roots = solve_bae(quantum_numbers, parities, &split, tol)?;
        values.push(efp_finite_complex(req, &roots)?);
    }
    let v = richardson_even(eps, &values)?;
    Ok(SplitEstimate {
        value: v.re,
        imag: v.im,
        samples: eps.iter().zip(&values).map(|(&e, z)| (e, z.re)).collect(),
    })
}
