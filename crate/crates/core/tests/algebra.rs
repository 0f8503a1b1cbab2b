mod common;

use common::{gamma, random_complex, random_mu, rel};
use num_complex::Complex64;
use svdwbc::algebra::{
    b_product, bethe_state, correlator_bruteforce, dual_bethe_state, l_matrix,
    partition_bruteforce, projector_pi, qism_pi, rtt_residual, Entry, LatticeSpec, Monodromy,
    StateVector,
};
use svdwbc::AnisotropyParam;

/// Sum over all six-vertex configurations of an `n x M` lattice with the
/// bottom row all up, the top row all down, the auxiliary line entering
/// each row down and leaving it up. Vertex weights are read off the
/// `L`-matrix entry by entry; the row with `rapidities[n-1]` is the lowest.
fn vertex_sum(rapidities: &[Complex64], mu: &[f64], g: AnisotropyParam) -> Complex64 {
    let m = mu.len();
    fn row(
        col: usize,
        aux: usize,
        below: &[usize],
        above: &mut Vec<usize>,
        l: &[nalgebra::Matrix4<Complex64>],
        out: &mut Vec<(Vec<usize>, Complex64)>,
        w: Complex64,
    ) {
        if col == below.len() {
            if aux == 0 {
                out.push((above.clone(), w));
            }
            return;
        }
        for a_out in 0..2 {
            for p_out in 0..2 {
                let x = l[col][(2 * a_out + p_out, 2 * aux + below[col])];
                if x == Complex64::new(0.0, 0.0) {
                    continue;
                }
                above.push(p_out);
                row(col + 1, a_out, below, above, l, out, w * x);
                above.pop();
            }
        }
    }
    let mut layer = vec![(vec![0usize; m], Complex64::new(1.0, 0.0))];
    for &lam in rapidities.iter().rev() {
        let l: Vec<_> = mu
            .iter()
            .map(|&mk| l_matrix(lam - mk, g).unwrap())
            .collect();
        let mut next = Vec::new();
        for (below, w) in &layer {
            row(0, 1, below, &mut Vec::new(), &l, &mut next, *w);
        }
        layer = next;
    }
    layer
        .into_iter()
        .filter(|(s, _)| s.iter().all(|&p| p == 1))
        .map(|(_, w)| w)
        .sum()
}

#[test]
fn dwbc_partition_function_by_enumeration() {
    for (m, seed) in [(2usize, 1u64), (4, 2), (6, 3)] {
        let g = gamma(0.6);
        let mu = random_mu(m, 0.3, seed);
        let spec = LatticeSpec::from_real(g, &mu).unwrap();
        let half = random_complex(m / 2, 10 + seed);
        let all: Vec<Complex64> = half.iter().chain(&half).copied().collect();
        let z_vertex = vertex_sum(&all, &mu, g);
        let z_ops = b_product(&all, &spec).unwrap().amplitudes()[(1 << m) - 1];
        let z_flip = partition_bruteforce(&half, &spec).unwrap();
        assert!(rel(z_vertex, z_ops) < 1e-12, "M={m}: {z_vertex} vs {z_ops}");
        assert!(rel(z_vertex, z_flip) < 1e-12, "M={m}: {z_vertex} vs {z_flip}");
    }
}

#[test]
fn dwbc_generic_rows_by_enumeration() {
    let g = gamma(1.1);
    let mu = random_mu(4, 0.5, 7);
    let spec = LatticeSpec::from_real(g, &mu).unwrap();
    let lam = random_complex(4, 8);
    let z_vertex = vertex_sum(&lam, &mu, g);
    let z_ops = b_product(&lam, &spec).unwrap().amplitudes()[15];
    assert!(rel(z_vertex, z_ops) < 1e-12);
}

#[test]
fn rtt_relation_small_lattices() {
    for m in [1usize, 2, 3] {
        let spec = LatticeSpec::from_real(gamma(0.8), &random_mu(m, 0.4, m as u64)).unwrap();
        let z = random_complex(2 * 25, 100 + m as u64);
        for p in z.chunks(2) {
            let r = rtt_residual(p[0], p[1], &spec).unwrap();
            assert!(r < 1e-12, "M={m}: {r}");
        }
    }
}

#[test]
fn qism_reconstructs_projectors() {
    for m in [2usize, 4] {
        let spec = LatticeSpec::from_real(gamma(0.6), &random_mu(m, 0.3, 40 + m as u64)).unwrap();
        for k in 1..=m {
            let d = qism_pi(k, &spec).unwrap().sub(&projector_pi(k, &spec).unwrap());
            assert!(d.max_abs() < 1e-10, "M={m} k={k}: {}", d.max_abs());
        }
    }
}

#[test]
fn b_operators_commute() {
    let spec = LatticeSpec::from_real(gamma(0.7), &random_mu(4, 0.3, 5)).unwrap();
    let z = random_complex(2, 6);
    let ab = b_product(&[z[0], z[1]], &spec).unwrap();
    let ba = b_product(&[z[1], z[0]], &spec).unwrap();
    assert!(ab.sub(&ba).max_abs() < 1e-12 * ab.max_abs());
}

#[test]
fn d_on_reference_state_is_d_eigenvalue() {
    let spec = LatticeSpec::from_real(gamma(0.5), &random_mu(5, 0.3, 3)).unwrap();
    let lam = Complex64::new(0.2, 0.1);
    let up = StateVector::all_up(5);
    let d = Monodromy::new(lam, &spec).unwrap().apply(Entry::D, &up).unwrap();
    let expect = up.scaled(spec.d_eigenvalue(lam).unwrap());
    assert!(d.sub(&expect).max_abs() < 1e-13);
    let a = Monodromy::new(lam, &spec).unwrap().apply(Entry::A, &up).unwrap();
    assert!(a.sub(&up).max_abs() < 1e-13);
}

#[test]
fn bethe_states_have_n_down_spins() {
    let spec = LatticeSpec::from_real(gamma(0.6), &random_mu(6, 0.3, 2)).unwrap();
    let lam = random_complex(3, 9);
    let ket = bethe_state(&lam, &spec).unwrap();
    for (i, a) in ket.amplitudes().iter().enumerate() {
        if (i as u32).count_ones() != 3 {
            assert_eq!(*a, Complex64::new(0.0, 0.0));
        }
    }
    let bra = dual_bethe_state(&lam, &spec).unwrap();
    assert!(bra.norm() > 0.0);
}

#[test]
fn projector_sum_counts_down_spins() {
    // sum_k <pi_k> = N on any state with N down spins
    let mu = random_mu(4, 0.3, 11);
    let spec = LatticeSpec::from_real(gamma(0.6), &mu).unwrap();
    let lam = random_complex(2, 12);
    let total: Complex64 = (1..=4)
        .map(|k| correlator_bruteforce(&lam, &spec, &[k]).unwrap())
        .sum();
    assert!((total - 2.0).norm() < 1e-12);
}

#[test]
fn repeated_column_rejected() {
    let spec = LatticeSpec::homogeneous(gamma(0.6), 2);
    assert!(correlator_bruteforce(&random_complex(1, 1), &spec, &[1, 1]).is_err());
}
