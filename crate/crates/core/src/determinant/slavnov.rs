use nalgebra::DMatrix;
use num_complex::Complex64;

use super::cauchy::v_matrix;
use super::util::{coth, require_distinct, sinh_nz, ONE};
use crate::algebra::LatticeSpec;
use crate::bethe::BetheRootSet;
use crate::error::{Error, Result};

/// Residual bound required of Bethe roots entering the determinant formulas.
pub const ON_SHELL_TOL: f64 = 1e-10;

/// Arguments of the Slavnov scalar product `<up| prod C(xi_j) prod B(lambda_j) |up>`.
#[derive(Debug, Clone)]
pub struct SlavnovInput<'a> {
    pub xi: Vec<Complex64>,
    pub roots: &'a BetheRootSet,
}

impl<'a> SlavnovInput<'a> {
    pub fn new(xi: Vec<Complex64>, roots: &'a BetheRootSet) -> Result<Self> {
        if xi.len() != roots.len() {
            return Err(Error::DimensionMismatch {
                expected: roots.len(),
                got: xi.len(),
            });
        }
        Ok(Self { xi, roots })
    }
}

/// The two products of the transfer-matrix eigenvalue,
/// `t(xi) = T1 + T2` with `a = 1`.
fn eigen_terms(xi: Complex64, lambdas: &[Complex64], spec: &LatticeSpec) -> Result<(Complex64, Complex64)> {
    let eta = spec.gamma().eta();
    let mut t1 = ONE;
    let mut t2 = spec.d_eigenvalue(xi)?;
    for &l in lambdas {
        t1 *= (l - xi + eta).sinh() / sinh_nz(l - xi, "transfer eigenvalue")?;
        t2 *= (xi - l + eta).sinh() / sinh_nz(xi - l, "transfer eigenvalue")?;
    }
    Ok((t1, t2))
}

/// `t'_{ij} = d t(xi_i) / d lambda_j`, differentiated analytically.
pub fn t_prime_matrix(
    xi: &[Complex64],
    lambdas: &[Complex64],
    spec: &LatticeSpec,
) -> Result<DMatrix<Complex64>> {
    let eta = spec.gamma().eta();
    let n = xi.len();
    let mut m = DMatrix::zeros(n, lambdas.len());
    for i in 0..n {
        let (t1, t2) = eigen_terms(xi[i], lambdas, spec)?;
        for (j, &l) in lambdas.iter().enumerate() {
            m[(i, j)] = t1 * (coth(l - xi[i] + eta) - coth(l - xi[i]))
                + t2 * (coth(xi[i] - l) - coth(xi[i] - l + eta));
        }
    }
    Ok(m)
}

/// `<up| prod C(xi_j) prod B(lambda_j) |up> = det t' / det V` for on-shell
/// `lambda` and arbitrary `xi`.
pub fn slavnov_scalar_product(input: &SlavnovInput<'_>) -> Result<Complex64> {
    let roots = input.roots;
    roots.require_solved(ON_SHELL_TOL)?;
    let lambdas = roots.rapidities();
    if input.xi.is_empty() {
        return Ok(ONE);
    }
    let v = v_matrix(&input.xi, &lambdas)?;
    require_distinct(&input.xi, "Slavnov xi")?;
    let det_v = v.determinant();
    if det_v.norm() == 0.0 || !det_v.is_finite() {
        return Err(Error::singular("V matrix"));
    }
    let tp = t_prime_matrix(&input.xi, &lambdas, &roots.lattice())?;
    Ok(tp.determinant() / det_v)
}
