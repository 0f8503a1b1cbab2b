//! Thermodynamic limit: kernels, the density equation on the directed
//! contour, local densities, the `H` function and the multiple-integral
//! emptiness formation probability.
//!
//! The contour is the real line traversed left to right together with the
//! line `Im lambda = pi/2` traversed right to left; integrals over it carry
//! negative weights on the second branch.

mod density;
mod efp;
mod grid;
mod hfunc;
mod kernel;
mod rows;
mod source;

pub use density::{
    grid_doubling_change, local_density, solve_density, DensityProfile, DensitySolver,
    FermiWeight, LocalDensity, GRID_TOL,
};
pub use efp::{
    efp_sum_finite, efp_thermo, EfpThermoOptions, EfpThermoResult, Quadrature, DEGENERATE_TOL,
    IMAG_FLAG, MAX_TENSOR_N,
};
pub use grid::{gauss_legendre, ContourGrid, DEFAULT_POINTS, PANEL_ORDER};
pub use hfunc::{h_from_matrix, h_function};
pub use kernel::{k1_tot, k1_tot_on, kernel_k, kernel_k_derivative, kernel_on, MuDistribution};
pub use rows::{kept_rows_identity_defect, varphi_prime_thermo_row_check};
pub use source::{DensitySource, RootDensity, ThermoDensity};
