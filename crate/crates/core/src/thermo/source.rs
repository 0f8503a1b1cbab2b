use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector, Dyn, LU};

use super::density::{profile_from, DensityProfile, DensitySolver, FermiWeight};
use super::grid::ContourGrid;
use super::kernel::{kernel_on, MuDistribution};
use crate::anisotropy::AnisotropyParam;
use crate::bethe::{counting_derivative, BetheRootSet, SpectralPoint};
use crate::error::{Error, Result};

/// Supplier of the vacancy density `rho_tot` and the local densities
/// `rho~_tot(. ; mu)` entering the `H` function.
pub trait DensitySource: Sync {
    fn gamma(&self) -> AnisotropyParam;

    /// `rho_tot` at the given points.
    fn rho_tot(&self, points: &[SpectralPoint]) -> Result<Vec<f64>>;

    /// `rho~_tot(lambda - mu)` at the given points.
    fn rho_tilde(&self, mu: f64, points: &[SpectralPoint]) -> Result<Vec<f64>>;
}

/// Thermodynamic densities from the Nyström solution on a contour grid.
#[derive(Debug, Clone)]
pub struct ThermoDensity {
    solver: DensitySolver,
    profile: DensityProfile,
}

impl ThermoDensity {
    pub fn new(
        theta: &FermiWeight,
        grid: &ContourGrid,
        mu: &MuDistribution,
        gamma: AnisotropyParam,
    ) -> Result<Self> {
        let solver = DensitySolver::new(theta, grid, gamma)?;
        let profile = profile_from(&solver, mu)?;
        Ok(Self { solver, profile })
    }

    pub fn solver(&self) -> &DensitySolver {
        &self.solver
    }

    pub fn profile(&self) -> &DensityProfile {
        &self.profile
    }
}

impl DensitySource for ThermoDensity {
    fn gamma(&self) -> AnisotropyParam {
        self.solver.gamma()
    }

    fn rho_tot(&self, points: &[SpectralPoint]) -> Result<Vec<f64>> {
        Ok(points.iter().map(|&p| self.profile.rho_tot_at(p)).collect())
    }

    fn rho_tilde(&self, mu: f64, points: &[SpectralPoint]) -> Result<Vec<f64>> {
        let local = self.solver.local(mu)?;
        Ok(points.iter().map(|&p| local.at(p)).collect())
    }
}

/// Exact finite-lattice densities built from a solved root set:
/// `rho_tot = phi' / (2 pi M)` and `rho~_tot` from the discrete equation
/// `rho~(lambda) + (1/M) sum_l K_2(lambda - lambda_l) rho~(lambda_l) / rho_tot(lambda_l) = K_1(lambda - mu)`.
///
/// With these, the finite sum over roots reproduces the determinant-path EFP
/// identically.
#[derive(Debug, Clone)]
pub struct RootDensity {
    roots: BetheRootSet,
    rho: Vec<f64>,
    lu: LU<f64, Dyn, Dyn>,
}

impl RootDensity {
    pub fn new(roots: &BetheRootSet) -> Result<Self> {
        let spec = roots.lattice();
        let m = roots.sites as f64;
        let pts = &roots.roots;
        let rho = pts
            .iter()
            .map(|&p| counting_derivative(p, pts, &spec).map(|d| d / (2.0 * PI * m)))
            .collect::<Result<Vec<f64>>>()?;
        if rho.iter().any(|r| r.abs() < 1e-300) {
            return Err(Error::singular("vanishing root density"));
        }
        let n = pts.len();
        let a = DMatrix::from_fn(n, n, |j, l| {
            let d = if j == l { 1.0 } else { 0.0 };
            d + kernel_on(2, pts[j].minus(&pts[l]), roots.gamma) / (m * rho[l])
        });
        let lu = a.lu();
        if !lu.is_invertible() {
            return Err(Error::singular("discrete density equation"));
        }
        Ok(Self {
            roots: roots.clone(),
            rho,
            lu,
        })
    }

    /// `rho_tot` at the roots.
    pub fn at_roots(&self) -> &[f64] {
        &self.rho
    }
}

impl DensitySource for RootDensity {
    fn gamma(&self) -> AnisotropyParam {
        self.roots.gamma
    }

    fn rho_tot(&self, points: &[SpectralPoint]) -> Result<Vec<f64>> {
        let spec = self.roots.lattice();
        let m = self.roots.sites as f64;
        points
            .iter()
            .map(|&p| counting_derivative(p, &self.roots.roots, &spec).map(|d| d / (2.0 * PI * m)))
            .collect()
    }

    fn rho_tilde(&self, mu: f64, points: &[SpectralPoint]) -> Result<Vec<f64>> {
        let g = self.roots.gamma;
        let m = self.roots.sites as f64;
        let pts = &self.roots.roots;
        let drive = DVector::from_iterator(pts.len(), pts.iter().map(|p| kernel_on(1, p.minus_real(mu), g)));
        let at_roots = self
            .lu
            .solve(&drive)
            .ok_or_else(|| Error::singular("discrete density equation"))?;
        Ok(points
            .iter()
            .map(|&p| {
                let s: f64 = pts
                    .iter()
                    .enumerate()
                    .map(|(l, q)| kernel_on(2, p.minus(q), g) * at_roots[l] / self.rho[l])
                    .sum();
                kernel_on(1, p.minus_real(mu), g) - s / m
            })
            .collect())
    }
}
