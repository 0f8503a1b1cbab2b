//! Determinant representations of scalar products and the finite-lattice
//! emptiness formation probability.

mod cauchy;
mod daction;
mod efp;
mod gaudin;
mod scalar;
mod slavnov;
mod util;

pub use cauchy::{cauchy_det_check, v_matrix};
pub use daction::{d_action_check, g_coefficient};
pub use efp::{
    efp_finite, efp_finite_complex, efp_finite_split, EfpRequest, SplitEstimate,
    DEFAULT_EPS_SCHEDULE,
};
pub use gaudin::{gaudin_norm, varphi_prime_matrix, varphi_prime_raw};
pub use scalar::{psi_phi_inverse_rows, psi_prime_matrix, scalar_product_ratio};
pub use slavnov::{slavnov_scalar_product, t_prime_matrix, SlavnovInput, ON_SHELL_TOL};

pub(crate) use scalar::small_det;
pub(crate) use util::{ordered_tuples, require_distinct};
