use std::io::Write;

use nalgebra::{DMatrix, DVector, Dyn, LU};
use serde::Serialize;

use super::grid::ContourGrid;
use super::kernel::{k1_tot_on, kernel_on, MuDistribution};
use crate::anisotropy::AnisotropyParam;
use crate::bethe::{Branch, SpectralPoint};
use crate::error::{Error, Result};

/// Doubling the grid may change `rho_tot(0)` by at most this much.
pub const GRID_TOL: f64 = 1e-6;

/// Fermi weight `theta = rho_p / rho_tot` on the contour.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum FermiWeight {
    /// Ground state: `1` on the real line, `0` on the shifted line.
    Ground,
    /// No particles anywhere.
    Empty,
    /// Constant on each branch.
    Branchwise { real: f64, shifted: f64 },
    /// Arbitrary values at the nodes of a specific grid.
    Nodes(Vec<f64>),
}

impl FermiWeight {
    fn on(&self, p: SpectralPoint) -> Option<f64> {
        match self {
            FermiWeight::Ground => Some(if p.branch == Branch::Real { 1.0 } else { 0.0 }),
            FermiWeight::Empty => Some(0.0),
            FermiWeight::Branchwise { real, shifted } => Some(match p.branch {
                Branch::Real => *real,
                Branch::Shifted => *shifted,
            }),
            FermiWeight::Nodes(_) => None,
        }
    }

    /// Values at the grid nodes, validated to lie in `[0, 1]`.
    pub fn at_nodes(&self, grid: &ContourGrid) -> Result<Vec<f64>> {
        let vals = match self {
            FermiWeight::Nodes(v) => {
                if v.len() != grid.len() {
                    return Err(Error::DimensionMismatch {
                        expected: grid.len(),
                        got: v.len(),
                    });
                }
                v.clone()
            }
            _ => grid.nodes.iter().map(|&p| self.on(p).expect("analytic")).collect(),
        };
        if let Some(t) = vals.iter().find(|t| !(0.0..=1.0).contains(*t)) {
            return Err(Error::input(format!("Fermi weight {t} outside [0, 1]")));
        }
        Ok(vals)
    }
}

/// Factored Nyström discretization of
/// `rho(lambda) + int_C K_2(lambda - nu) theta(nu) rho(nu) dnu = driving(lambda)`.
///
/// The matrix depends only on `theta` and the grid, so one factorization
/// serves every driving term.
#[derive(Debug, Clone)]
pub struct DensitySolver {
    gamma: AnisotropyParam,
    grid: ContourGrid,
    theta: Vec<f64>,
    lu: LU<f64, Dyn, Dyn>,
}

impl DensitySolver {
    pub fn new(theta: &FermiWeight, grid: &ContourGrid, gamma: AnisotropyParam) -> Result<Self> {
        gamma.require_nondegenerate(1)?;
        let th = theta.at_nodes(grid)?;
        let n = grid.len();
        let nodes = &grid.nodes;
        let a = DMatrix::from_fn(n, n, |i, j| {
            let d = if i == j { 1.0 } else { 0.0 };
            let c = grid.weights[j] * th[j];
            if c == 0.0 {
                d
            } else {
                d + c * kernel_on(2, nodes[i].minus(&nodes[j]), gamma)
            }
        });
        let lu = a.lu();
        if !lu.is_invertible() {
            return Err(Error::singular("Nystrom matrix (pathological Fermi weight)"));
        }
        Ok(Self {
            gamma,
            grid: grid.clone(),
            theta: th,
            lu,
        })
    }

    pub fn gamma(&self) -> AnisotropyParam {
        self.gamma
    }

    pub fn grid(&self) -> &ContourGrid {
        &self.grid
    }

    pub fn theta(&self) -> &[f64] {
        &self.theta
    }

    /// Solution at the nodes for driving values given at the nodes.
    pub fn solve_nodes(&self, driving: &[f64]) -> Result<Vec<f64>> {
        if driving.len() != self.grid.len() {
            return Err(Error::DimensionMismatch {
                expected: self.grid.len(),
                got: driving.len(),
            });
        }
        let x = self
            .lu
            .solve(&DVector::from_column_slice(driving))
            .ok_or_else(|| Error::singular("Nystrom matrix"))?;
        if x.iter().any(|v| !v.is_finite()) {
            return Err(Error::singular("Nystrom matrix"));
        }
        Ok(x.iter().copied().collect())
    }

    /// Density driven by `K_1^tot` of the given distribution.
    pub fn density(&self, mu: &MuDistribution) -> Result<LocalDensity> {
        let driving: Vec<f64> = self
            .grid
            .nodes
            .iter()
            .map(|&p| k1_tot_on(p, mu, self.gamma))
            .collect();
        let values = self.solve_nodes(&driving)?;
        let coef = values
            .iter()
            .zip(&self.theta)
            .zip(&self.grid.weights)
            .map(|((r, t), w)| r * t * w)
            .collect();
        Ok(LocalDensity {
            mu: mu.clone(),
            gamma: self.gamma,
            nodes: self.grid.nodes.clone(),
            values,
            coef,
        })
    }

    /// `rho~_tot` centred at `mu`: driving term `K_1(lambda - mu)`.
    pub fn local(&self, mu: f64) -> Result<LocalDensity> {
        self.density(&MuDistribution::single(mu))
    }
}

/// A solution of the density equation, with Nyström interpolation off the
/// grid.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalDensity {
    mu: MuDistribution,
    gamma: AnisotropyParam,
    nodes: Vec<SpectralPoint>,
    values: Vec<f64>,
    coef: Vec<f64>,
}

impl LocalDensity {
    pub fn mu(&self) -> &MuDistribution {
        &self.mu
    }

    /// Values at the grid nodes.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Value anywhere on the contour.
    pub fn at(&self, p: SpectralPoint) -> f64 {
        let scatter: f64 = self
            .nodes
            .iter()
            .zip(&self.coef)
            .filter(|(_, c)| **c != 0.0)
            .map(|(q, c)| c * kernel_on(2, p.minus(q), self.gamma))
            .sum();
        k1_tot_on(p, &self.mu, self.gamma) - scatter
    }
}

/// Total, particle and hole densities on the grid.
#[derive(Debug, Clone, Serialize)]
pub struct DensityProfile {
    pub gamma: AnisotropyParam,
    pub grid: ContourGrid,
    pub nodes: Vec<SpectralPoint>,
    pub rho_tot: Vec<f64>,
    pub rho_p: Vec<f64>,
    pub rho_h: Vec<f64>,
    pub theta: Vec<f64>,
    /// `int_C rho_p`, the filling `N / M`.
    pub filling: f64,
    #[serde(skip)]
    total: LocalDensity,
}

impl DensityProfile {
    /// `rho_tot` anywhere on the contour.
    pub fn rho_tot_at(&self, p: SpectralPoint) -> f64 {
        self.total.at(p)
    }

    /// CSV with columns `branch, x, rho_tot, rho_p, theta`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["branch", "x", "rho_tot", "rho_p", "theta"])
            .map_err(Error::io)?;
        for i in 0..self.nodes.len() {
            let p = self.nodes[i];
            let branch = match p.branch {
                Branch::Real => "real",
                Branch::Shifted => "shifted",
            };
            w.write_record([
                branch.to_string(),
                format!("{:.17e}", p.x),
                format!("{:.17e}", self.rho_tot[i]),
                format!("{:.17e}", self.rho_p[i]),
                format!("{:.17e}", self.theta[i]),
            ])
            .map_err(Error::io)?;
        }
        w.flush().map_err(Error::io)
    }
}

/// Solves the density equation with driving term `K_1^tot`.
pub fn solve_density(
    theta: &FermiWeight,
    grid: &ContourGrid,
    mu: &MuDistribution,
    gamma: AnisotropyParam,
) -> Result<DensityProfile> {
    let solver = DensitySolver::new(theta, grid, gamma)?;
    profile_from(&solver, mu)
}

pub(crate) fn profile_from(solver: &DensitySolver, mu: &MuDistribution) -> Result<DensityProfile> {
    let total = solver.density(mu)?;
    let th = solver.theta().to_vec();
    let rho_tot = total.values().to_vec();
    let rho_p: Vec<f64> = rho_tot.iter().zip(&th).map(|(r, t)| r * t).collect();
    let rho_h: Vec<f64> = rho_tot.iter().zip(&rho_p).map(|(r, p)| r - p).collect();
    let grid = solver.grid().clone();
    let filling = rho_p.iter().zip(&grid.weights).map(|(r, w)| r * w).sum();
    Ok(DensityProfile {
        gamma: solver.gamma(),
        nodes: grid.nodes.clone(),
        grid,
        rho_tot,
        rho_p,
        rho_h,
        theta: th,
        filling,
        total,
    })
}

/// Local density `rho~_tot` centred at `mu`.
pub fn local_density(
    mu: f64,
    theta: &FermiWeight,
    grid: &ContourGrid,
    gamma: AnisotropyParam,
) -> Result<LocalDensity> {
    DensitySolver::new(theta, grid, gamma)?.local(mu)
}

/// `|rho_tot^(m)(0) - rho_tot^(2m)(0)|` for a Fermi weight defined off the
/// grid.
pub fn grid_doubling_change(
    theta: &FermiWeight,
    grid: &ContourGrid,
    mu: &MuDistribution,
    gamma: AnisotropyParam,
) -> Result<f64> {
    if matches!(theta, FermiWeight::Nodes(_)) {
        return Err(Error::input("grid doubling needs a Fermi weight defined off the grid"));
    }
    let origin = SpectralPoint::real(0.0);
    let a = solve_density(theta, grid, mu, gamma)?.rho_tot_at(origin);
    let b = solve_density(theta, &grid.doubled(), mu, gamma)?.rho_tot_at(origin);
    Ok((a - b).abs())
}
