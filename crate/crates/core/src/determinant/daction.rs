use num_complex::Complex64;

use super::util::{ordered_tuples, sinh_nz, ONE};
use crate::algebra::{b_product, Entry, LatticeSpec, Monodromy};
use crate::error::{Error, Result};

/// Coefficient `G_I` of `prod_{k not in I} B(lambda_k) |up>` in
/// `prod_l D(lambda_{N+l}) prod_{k<=N} B(lambda_k) |up>`.
///
/// `extended` holds `lambda_1..lambda_N` followed by the `n = indices.len()`
/// arguments of the `D` operators; indices are 0-based and must satisfy
/// `i_l <= N + l`.
pub fn g_coefficient(indices: &[usize], extended: &[Complex64], spec: &LatticeSpec) -> Result<Complex64> {
    let n = indices.len();
    if n > extended.len() {
        return Err(Error::input("more indices than extended roots"));
    }
    let big_n = extended.len() - n;
    for (l, &i) in indices.iter().enumerate() {
        if i > big_n + l {
            return Err(Error::IndexOutOfRange {
                index: i + 1,
                max: big_n + l + 1,
            });
        }
        if indices[..l].contains(&i) {
            return Err(Error::input(format!("index {} repeated", i + 1)));
        }
    }
    let eta = spec.gamma().eta();
    let mut g = ONE;
    for (l, &i) in indices.iter().enumerate() {
        let li = extended[i];
        let d = spec.d_eigenvalue(li)?;
        if d.norm() == 0.0 {
            return Ok(Complex64::new(0.0, 0.0));
        }
        g *= d * eta.sinh() / sinh_nz(li - extended[big_n + l] + eta, "c weight")?;
        for (k, &lk) in extended[..=big_n + l].iter().enumerate() {
            if indices[..=l].contains(&k) {
                continue;
            }
            let x = li - lk;
            g *= (x + eta).sinh() / sinh_nz(x, "inverse b weight (coincident rapidities)")?;
        }
    }
    Ok(g)
}

/// Applies `prod D(extra_l)` to `prod B(roots) |up>` by brute force and
/// returns the max-norm discrepancy with the expansion in `G_I`, relative to
/// the largest amplitude of the brute-force vector.
pub fn d_action_check(roots: &[Complex64], spec: &LatticeSpec, extra: &[Complex64]) -> Result<f64> {
    let big_n = roots.len();
    let mut lhs = b_product(roots, spec)?;
    for &e in extra {
        lhs = Monodromy::new(e, spec)?.apply(Entry::D, &lhs)?;
    }
    let extended: Vec<Complex64> = roots.iter().chain(extra).copied().collect();
    let mut rhs = crate::algebra::StateVector::zeros(spec.sites());
    for idx in ordered_tuples(extra.len(), |l| big_n + l + 1) {
        let g = g_coefficient(&idx, &extended, spec)?;
        let rest: Vec<Complex64> = (0..extended.len())
            .filter(|k| !idx.contains(k))
            .map(|k| extended[k])
            .collect();
        rhs.add_assign_scaled(&b_product(&rest, spec)?, g);
    }
    let scale = lhs.max_abs();
    let diff = lhs.sub(&rhs).max_abs();
    Ok(if scale > 0.0 { diff / scale } else { diff })
}
