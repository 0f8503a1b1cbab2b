use num_complex::Complex64;

use crate::algebra::lattice::LatticeSpec;
use crate::algebra::monodromy::{bethe_state, dual_bethe_state, Entry, Monodromy};
use crate::algebra::operator::{check_matrix_size, site_mask, QuantumOperator};
use crate::error::{Error, Result};

/// `Z_M = <N| R |N>`, the domain-wall partition function for the doubled
/// rapidities `{lambda_1..lambda_N, lambda_1..lambda_N}`.
pub fn partition_bruteforce(roots: &[Complex64], spec: &LatticeSpec) -> Result<Complex64> {
    let ket = bethe_state(roots, spec)?;
    let bra = dual_bethe_state(roots, spec)?;
    Ok(bra.bilinear(&ket.flipped()))
}

fn check_column(k: usize, sites: usize) -> Result<()> {
    if k == 0 || k > sites {
        return Err(Error::IndexOutOfRange {
            index: k,
            max: sites,
        });
    }
    Ok(())
}

/// `pi_k = (1 - sigma^z_k) / 2`, the projector onto a down arrow in column `k`.
pub fn projector_pi(k: usize, spec: &LatticeSpec) -> Result<QuantumOperator> {
    check_column(k, spec.sites())?;
    check_matrix_size(spec.sites())?;
    let mask = site_mask(spec.sites(), k);
    QuantumOperator::from_linear_map(spec.sites(), |v| {
        let mut out = v.clone();
        for (i, a) in out.amplitudes_mut().iter_mut().enumerate() {
            if i & mask == 0 {
                *a = Complex64::new(0.0, 0.0);
            }
        }
        Ok(out)
    })
}

/// `pi_k` reconstructed from the monodromy entries:
/// `prod_{l<k} T(xi_l) D(xi_k) prod_{l>k} T(xi_l)` with `xi_l = mu_l + eta/2`.
pub fn qism_pi(k: usize, spec: &LatticeSpec) -> Result<QuantumOperator> {
    check_column(k, spec.sites())?;
    check_matrix_size(spec.sites())?;
    let half_eta = spec.gamma().eta() * 0.5;
    let factors = (1..=spec.sites())
        .map(|l| Monodromy::new(spec.mu()[l - 1] + half_eta, spec).map(|t| (l, t)))
        .collect::<Result<Vec<_>>>()?;
    QuantumOperator::from_linear_map(spec.sites(), |v| {
        // rightmost factor acts first
        factors.iter().rev().try_fold(v.clone(), |w, (l, t)| {
            if *l == k {
                t.apply(Entry::D, &w)
            } else {
                t.apply_transfer(&w)
            }
        })
    })
}

/// `<N| R pi_{k_1} ... pi_{k_n} |N> / <N| R |N>` by direct state algebra.
pub fn correlator_bruteforce(
    roots: &[Complex64],
    spec: &LatticeSpec,
    columns: &[usize],
) -> Result<Complex64> {
    for (i, &k) in columns.iter().enumerate() {
        check_column(k, spec.sites())?;
        if columns[..i].contains(&k) {
            return Err(Error::input(format!("column {k} listed twice")));
        }
    }
    let ket = bethe_state(roots, spec)?;
    let bra = dual_bethe_state(roots, spec)?;
    let z = bra.bilinear(&ket.flipped());
    let scale = bra.norm() * ket.norm();
    if z.norm() <= 1e-13 * scale {
        return Err(Error::singular("partition function <N|R|N> vanishes"));
    }
    let projected = columns
        .iter()
        .try_fold(ket, |v, &k| v.project_down(k))?;
    Ok(bra.bilinear(&projected.flipped()) / z)
}
