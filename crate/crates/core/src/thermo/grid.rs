use nalgebra::{DMatrix, SymmetricEigen};
use serde::Serialize;

use crate::bethe::{Branch, SpectralPoint};
use crate::error::{Error, Result};

/// Nodes per Gauss–Legendre panel.
pub const PANEL_ORDER: usize = 8;
/// Default number of nodes on each branch.
pub const DEFAULT_POINTS: usize = 256;
const GRADING: f64 = 4.0;

/// Gauss–Legendre rule on `[-1, 1]` (Golub–Welsch), nodes ascending.
pub fn gauss_legendre(order: usize) -> (Vec<f64>, Vec<f64>) {
    let mut jac = DMatrix::<f64>::zeros(order, order);
    for k in 1..order {
        let b = k as f64 / ((4 * k * k - 1) as f64).sqrt();
        jac[(k, k - 1)] = b;
        jac[(k - 1, k)] = b;
    }
    let eig = SymmetricEigen::new(jac);
    let mut pairs: Vec<(f64, f64)> = (0..order)
        .map(|i| (eig.eigenvalues[i], 2.0 * eig.eigenvectors[(0, i)].powi(2)))
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    pairs.into_iter().unzip()
}

/// Discretization of the directed contour: the real line traversed left to
/// right and the line `Im = pi/2` traversed right to left, both truncated to
/// `[-cutoff, cutoff]`.
///
/// Each branch carries composite Gauss–Legendre panels whose boundaries are
/// graded as `cutoff sinh(4 t) / sinh(4)`, concentrating nodes near the
/// origin. Weights on the shifted line are negative, encoding its direction.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ContourGrid {
    pub cutoff: f64,
    pub points_per_branch: usize,
    #[serde(skip)]
    pub nodes: Vec<SpectralPoint>,
    #[serde(skip)]
    pub weights: Vec<f64>,
}

impl ContourGrid {
    pub fn new(cutoff: f64, points_per_branch: usize) -> Result<Self> {
        if !(cutoff > 0.0) || !cutoff.is_finite() {
            return Err(Error::input("cutoff must be positive"));
        }
        if points_per_branch == 0 || points_per_branch % PANEL_ORDER != 0 {
            return Err(Error::input(format!(
                "points per branch must be a positive multiple of {PANEL_ORDER}"
            )));
        }
        let panels = points_per_branch / PANEL_ORDER;
        let (gx, gw) = gauss_legendre(PANEL_ORDER);
        let bounds: Vec<f64> = (0..=panels)
            .map(|p| {
                let t = -1.0 + 2.0 * p as f64 / panels as f64;
                cutoff * (GRADING * t).sinh() / GRADING.sinh()
            })
            .collect();
        let mut xs = Vec::with_capacity(points_per_branch);
        let mut ws = Vec::with_capacity(points_per_branch);
        for win in bounds.windows(2) {
            let (mid, half) = ((win[0] + win[1]) / 2.0, (win[1] - win[0]) / 2.0);
            for (x, w) in gx.iter().zip(&gw) {
                xs.push(mid + half * x);
                ws.push(half * w);
            }
        }
        let mut nodes: Vec<SpectralPoint> = xs.iter().map(|&x| SpectralPoint::real(x)).collect();
        let mut weights = ws.clone();
        for (x, w) in xs.iter().zip(&ws).rev() {
            nodes.push(SpectralPoint::shifted(*x));
            weights.push(-w);
        }
        Ok(Self {
            cutoff,
            points_per_branch,
            nodes,
            weights,
        })
    }

    /// Default cutoff `20 max(1, gamma)`.
    pub fn default_cutoff(gamma: f64) -> f64 {
        20.0 * gamma.max(1.0)
    }

    pub fn default_for(gamma: f64) -> Self {
        Self::new(Self::default_cutoff(gamma), DEFAULT_POINTS).expect("valid defaults")
    }

    /// Same cutoff, twice the nodes.
    pub fn doubled(&self) -> Self {
        Self::new(self.cutoff, 2 * self.points_per_branch).expect("valid grid")
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Sum of weights on one branch.
    pub fn branch_weight(&self, branch: Branch) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .filter(|(p, _)| p.branch == branch)
            .map(|(_, w)| w)
            .sum()
    }

    /// `sum_a w_a f(lambda_a)`, the directed contour integral.
    pub fn integrate(&self, f: impl Fn(SpectralPoint) -> f64) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&p, w)| w * f(p)).sum()
    }
}
