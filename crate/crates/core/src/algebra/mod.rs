//! Finite-lattice operator algebra: weights, monodromy entries, transfer
//! matrix, Bethe states and brute-force correlators.
//!
//! Basis convention: a basis index is the bit string `s_1 s_2 ... s_M` read
//! as a binary number, column 1 most significant, with `0` = up arrow and
//! `1` = down arrow. `L(lambda - mu_1)` is the rightmost factor of the
//! monodromy product, so it acts first on the auxiliary space.

mod correlator;
mod lattice;
mod monodromy;
mod operator;
mod weights;

pub use correlator::{correlator_bruteforce, partition_bruteforce, projector_pi, qism_pi};
pub use lattice::LatticeSpec;
pub use monodromy::{
    b_product, bethe_state, c_product_dual, dual_bethe_state, monodromy, r_check, rtt_residual,
    transfer, Entry, Monodromy, MonodromyBlocks,
};
pub use operator::{
    site_mask, QuantumOperator, StateVector, MAX_MATRIX_SITES, MAX_VECTOR_SITES,
};
pub use weights::{boltzmann_weights, l_matrix, Weights, POLE_EPS};

pub(crate) use weights::weight_b;
