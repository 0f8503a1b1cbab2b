use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Largest lattice for which state vectors are built.
pub const MAX_VECTOR_SITES: usize = 12;
/// Largest lattice for which dense operators are materialized.
pub const MAX_MATRIX_SITES: usize = 8;

/// Bit mask of column `k` (1-based) in a basis index.
///
/// Column 1 is the most significant bit, so integer order of basis indices
/// is lexicographic order of the spin strings `s_1 s_2 ... s_M`; a set bit
/// is a down spin.
#[inline]
pub fn site_mask(sites: usize, k: usize) -> usize {
    1 << (sites - k)
}

pub(crate) fn check_vector_size(sites: usize) -> Result<()> {
    if sites > MAX_VECTOR_SITES {
        return Err(Error::input(format!(
            "brute force is limited to M <= {MAX_VECTOR_SITES} (got {sites})"
        )));
    }
    Ok(())
}

pub(crate) fn check_matrix_size(sites: usize) -> Result<()> {
    if sites > MAX_MATRIX_SITES {
        return Err(Error::input(format!(
            "dense operators are limited to M <= {MAX_MATRIX_SITES} (got {sites})"
        )));
    }
    Ok(())
}

/// A vector in the `2^M`-dimensional physical space.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    sites: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    pub fn zeros(sites: usize) -> Self {
        Self {
            sites,
            amps: vec![Complex64::new(0.0, 0.0); 1 << sites],
        }
    }

    pub fn basis(sites: usize, index: usize) -> Self {
        let mut v = Self::zeros(sites);
        v.amps[index] = Complex64::new(1.0, 0.0);
        v
    }

    /// `|up>`: every spin up.
    pub fn all_up(sites: usize) -> Self {
        Self::basis(sites, 0)
    }

    /// `|down>`: every spin down.
    pub fn all_down(sites: usize) -> Self {
        Self::basis(sites, (1 << sites) - 1)
    }

    pub fn from_amplitudes(sites: usize, amps: Vec<Complex64>) -> Result<Self> {
        if amps.len() != 1 << sites {
            return Err(Error::DimensionMismatch {
                expected: 1 << sites,
                got: amps.len(),
            });
        }
        Ok(Self { sites, amps })
    }

    #[inline]
    pub fn sites(&self) -> usize {
        self.sites
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    #[inline]
    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    #[inline]
    pub fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amps
    }

    /// Bilinear pairing `sum_i u_i v_i` (no complex conjugation), the
    /// pairing between dual states built from `C` and states built from `B`.
    pub fn bilinear(&self, other: &StateVector) -> Complex64 {
        self.amps.iter().zip(&other.amps).map(|(a, b)| a * b).sum()
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.amps.iter().map(|a| a.norm()).fold(0.0, f64::max)
    }

    pub fn scaled(&self, s: Complex64) -> Self {
        Self {
            sites: self.sites,
            amps: self.amps.iter().map(|a| a * s).collect(),
        }
    }

    pub fn sub(&self, other: &StateVector) -> Self {
        Self {
            sites: self.sites,
            amps: self.amps.iter().zip(&other.amps).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn add_assign_scaled(&mut self, other: &StateVector, s: Complex64) {
        for (a, b) in self.amps.iter_mut().zip(&other.amps) {
            *a += b * s;
        }
    }

    /// Image under the flip operator `R = prod_k sigma^x_k`.
    pub fn flipped(&self) -> Self {
        let full = self.amps.len() - 1;
        let mut out = Self::zeros(self.sites);
        for (i, a) in self.amps.iter().enumerate() {
            out.amps[full ^ i] = *a;
        }
        out
    }

    /// Image under the projector `pi_k` onto a down spin in column `k`.
    pub fn project_down(&self, k: usize) -> Result<Self> {
        if k == 0 || k > self.sites {
            return Err(Error::IndexOutOfRange {
                index: k,
                max: self.sites,
            });
        }
        let mask = site_mask(self.sites, k);
        let mut out = self.clone();
        for (i, a) in out.amps.iter_mut().enumerate() {
            if i & mask == 0 {
                *a = Complex64::new(0.0, 0.0);
            }
        }
        Ok(out)
    }

    /// Numbers of down spins carrying non-negligible amplitude.
    pub fn down_counts(&self, threshold: f64) -> Vec<u32> {
        let mut counts: Vec<u32> = self
            .amps
            .iter()
            .enumerate()
            .filter(|(_, a)| a.norm() > threshold)
            .map(|(i, _)| i.count_ones())
            .collect();
        counts.sort_unstable();
        counts.dedup();
        counts
    }

    pub(crate) fn as_dvector(&self) -> DVector<Complex64> {
        DVector::from_column_slice(&self.amps)
    }
}

/// Dense operator on the physical space.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumOperator {
    sites: usize,
    mat: DMatrix<Complex64>,
}

impl QuantumOperator {
    pub fn from_matrix(sites: usize, mat: DMatrix<Complex64>) -> Result<Self> {
        let dim = 1 << sites;
        if mat.nrows() != dim || mat.ncols() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: mat.nrows(),
            });
        }
        Ok(Self { sites, mat })
    }

    pub fn identity(sites: usize) -> Self {
        let dim = 1 << sites;
        Self {
            sites,
            mat: DMatrix::identity(dim, dim),
        }
    }

    /// Builds the dense matrix column by column from a linear map.
    pub fn from_linear_map<F>(sites: usize, mut f: F) -> Result<Self>
    where
        F: FnMut(&StateVector) -> Result<StateVector>,
    {
        check_matrix_size(sites)?;
        let dim = 1 << sites;
        let mut mat = DMatrix::zeros(dim, dim);
        for j in 0..dim {
            let col = f(&StateVector::basis(sites, j))?;
            for (i, a) in col.amplitudes().iter().enumerate() {
                mat[(i, j)] = *a;
            }
        }
        Ok(Self { sites, mat })
    }

    /// The flip operator `R = prod_k sigma^x_k`.
    pub fn flip(sites: usize) -> Result<Self> {
        Self::from_linear_map(sites, |v| Ok(v.flipped()))
    }

    #[inline]
    pub fn sites(&self) -> usize {
        self.sites
    }

    #[inline]
    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.mat
    }

    pub fn apply(&self, v: &StateVector) -> StateVector {
        let out = &self.mat * v.as_dvector();
        StateVector {
            sites: self.sites,
            amps: out.as_slice().to_vec(),
        }
    }

    pub fn mul(&self, other: &QuantumOperator) -> QuantumOperator {
        QuantumOperator {
            sites: self.sites,
            mat: &self.mat * &other.mat,
        }
    }

    pub fn add(&self, other: &QuantumOperator) -> QuantumOperator {
        QuantumOperator {
            sites: self.sites,
            mat: &self.mat + &other.mat,
        }
    }

    pub fn sub(&self, other: &QuantumOperator) -> QuantumOperator {
        QuantumOperator {
            sites: self.sites,
            mat: &self.mat - &other.mat,
        }
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.mat.iter().map(|a| a.norm()).fold(0.0, f64::max)
    }

    /// `max|[X, Y]|`.
    pub fn commutator_norm(&self, other: &QuantumOperator) -> f64 {
        self.mul(other).sub(&other.mul(self)).max_abs()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flip_maps_up_to_down() {
        assert_eq!(StateVector::all_up(3).flipped(), StateVector::all_down(3));
    }

    #[test]
    fn site_one_is_most_significant() {
        assert_eq!(site_mask(4, 1), 0b1000);
        assert_eq!(site_mask(4, 4), 0b0001);
    }

    #[test]
    fn projector_out_of_range() {
        assert!(StateVector::all_up(2).project_down(3).is_err());
        assert!(StateVector::all_up(2).project_down(0).is_err());
    }

    #[test]
    fn dense_cap() {
        assert!(QuantumOperator::flip(MAX_MATRIX_SITES + 1).is_err());
    }
}
