//! Logarithmic Bethe equations for 1-string roots, their solver, and the
//! transfer-matrix eigenvalue.

mod counting;
mod eigen;
mod solver;
mod spectral;

pub use counting::{
    counting_derivative, counting_function, distance_mod, log_phase, p_n, p_n_derivative,
    p_n_limit_real,
};
pub use eigen::{eigenvalue_residual, eigenvalue_t, EigenCheck};
pub use solver::{
    check_admissible, ground_state_numbers, solve_bae, BetheRootSet, DEFAULT_TOL,
};
pub use spectral::{Branch, SpectralPoint};

