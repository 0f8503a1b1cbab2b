mod common;

use common::*;
use num_complex::Complex64;
use svdwbc::algebra::{b_product, c_product_dual, correlator_bruteforce, dual_bethe_state, bethe_state, LatticeSpec};
use svdwbc::determinant::*;

/// Random points in generic position: every pair at least 0.1 apart, so
/// the Cauchy matrix is not close to singular.
fn separated_pair(n: usize, seed: u64) -> (Vec<Complex64>, Vec<Complex64>) {
    let mut s = seed * 1000;
    loop {
        s += 1;
        let all = random_complex(2 * n, s);
        let ok = (0..2 * n).all(|i| (0..i).all(|j| (all[i] - all[j]).norm() > 0.1));
        if ok {
            return (all[..n].to_vec(), all[n..].to_vec());
        }
    }
}

#[test]
fn cauchy_identity_random() {
    for n in 1..=8 {
        let (xi, la) = separated_pair(n, n as u64);
        let r = cauchy_det_check(&xi, &la).unwrap();
        assert!(r < 1e-11, "N={n}: {r}");
    }
}

#[test]
fn slavnov_matches_operator_application() {
    for (m, seed) in [(2, 1u64), (4, 2), (6, 3)] {
        let mu = random_mu(m, 0.3, seed);
        let roots = ground_state(0.7, &mu);
        let spec = roots.lattice();
        for trial in 0..20 {
            let xi = random_complex(m / 2, 1000 * seed + trial);
            let brute = c_product_dual(&xi, &spec)
                .unwrap()
                .bilinear(&b_product(&roots.rapidities(), &spec).unwrap());
            let det = slavnov_scalar_product(&SlavnovInput::new(xi, &roots).unwrap()).unwrap();
            assert!(rel(brute, det) < 1e-8, "M={m}: {brute} vs {det}");
        }
    }
}

#[test]
fn slavnov_single_root_at_origin() {
    let roots = ground_state(0.5, &[0.0, 0.0]);
    assert!(roots.roots[0].x.abs() < 1e-12);
    let spec = roots.lattice();
    let xi = vec![Complex64::new(0.23, -0.11)];
    let brute = c_product_dual(&xi, &spec)
        .unwrap()
        .bilinear(&b_product(&roots.rapidities(), &spec).unwrap());
    let det = slavnov_scalar_product(&SlavnovInput::new(xi, &roots).unwrap()).unwrap();
    assert!(rel(brute, det) < 1e-10);
}

#[test]
fn slavnov_permutation_invariant() {
    let roots = ground_state(0.6, &random_mu(6, 0.3, 9));
    let xi = random_complex(3, 77);
    let mut swapped = xi.clone();
    swapped.swap(0, 2);
    let a = slavnov_scalar_product(&SlavnovInput::new(xi, &roots).unwrap()).unwrap();
    let b = slavnov_scalar_product(&SlavnovInput::new(swapped, &roots).unwrap()).unwrap();
    assert!(rel(a, b) < 1e-12);
}

#[test]
fn gaudin_norm_matches_bruteforce_and_has_sign_of_n() {
    for (m, seed) in [(2, 5u64), (4, 6), (6, 7), (8, 8)] {
        let roots = ground_state(0.9, &random_mu(m, 0.2, seed));
        let spec = roots.lattice();
        let lam = roots.rapidities();
        let brute = dual_bethe_state(&lam, &spec).unwrap().bilinear(&bethe_state(&lam, &spec).unwrap());
        let g = gaudin_norm(&roots).unwrap();
        assert!(rel(brute, g) < 1e-9, "M={m}");
        // bilinear norm: real, with sign (-1)^N
        let signed = if (m / 2) % 2 == 0 { g.re } else { -g.re };
        assert!(signed > 0.0 && g.im.abs() < 1e-9 * signed, "M={m}: {g}");
    }
}

#[test]
fn gaudin_is_limit_of_slavnov() {
    let roots = ground_state(0.6, &random_mu(4, 0.3, 12));
    let lam = roots.rapidities();
    let eps = [1e-3, 1e-4, 1e-5];
    let dir = Complex64::new(0.6, 0.8);
    let vals: Vec<Complex64> = eps
        .iter()
        .map(|&e| {
            let xi = lam.iter().map(|l| l + dir * e).collect();
            slavnov_scalar_product(&SlavnovInput::new(xi, &roots).unwrap()).unwrap()
        })
        .collect();
    let lim = svdwbc::extrapolate::richardson_linear(&eps, &vals).unwrap();
    assert!(rel(lim, gaudin_norm(&roots).unwrap()) < 1e-6);
}

#[test]
fn varphi_prime_matches_finite_differences() {
    let roots = ground_state(0.7, &random_mu(6, 0.3, 4));
    let spec = roots.lattice();
    let lam = roots.rapidities();
    let f = varphi_prime_matrix(&roots).unwrap();
    // log-form phase: its derivative equals phi' up to the overall factor i
    let h = 1e-6;
    for j in 0..lam.len() {
        let mut p = lam.clone();
        let mut q = lam.clone();
        p[j] += h;
        q[j] -= h;
        for i in 0..lam.len() {
            let fp = svdwbc::bethe::log_phase(p[i], &p, &spec).unwrap();
            let fq = svdwbc::bethe::log_phase(q[i], &q, &spec).unwrap();
            let d = (fp - fq) / (2.0 * h);
            assert!((d * Complex64::i() - f[(i, j)]).norm() < 1e-6 * (1.0 + f[(i, j)].norm())
                || (d * -Complex64::i() - f[(i, j)]).norm() < 1e-6 * (1.0 + f[(i, j)].norm()),
                "({i},{j}): {d} vs {}", f[(i, j)]);
        }
    }
}

#[test]
fn d_action_expansion() {
    let spec2 = LatticeSpec::from_real(gamma(0.6), &[0.1, -0.2]).unwrap();
    let r = d_action_check(&random_complex(1, 3), &spec2, &random_complex(1, 4)).unwrap();
    assert!(r < 1e-11, "{r}");
    let spec4 = LatticeSpec::from_real(gamma(0.6), &random_mu(4, 0.3, 1)).unwrap();
    let r = d_action_check(&random_complex(2, 5), &spec4, &random_complex(2, 6)).unwrap();
    assert!(r < 1e-9, "{r}");
    let spec6 = LatticeSpec::from_real(gamma(1.1), &random_mu(6, 0.3, 2)).unwrap();
    let r = d_action_check(&random_complex(3, 7), &spec6, &random_complex(3, 8)).unwrap();
    assert!(r < 1e-9, "{r}");
}

#[test]
fn g_vanishes_on_shifted_inhomogeneity() {
    let spec = LatticeSpec::from_real(gamma(0.6), &[0.1, -0.2]).unwrap();
    let eta = spec.gamma().eta();
    let ext = vec![Complex64::new(0.1, 0.0) + eta * 0.5, Complex64::new(0.3, 0.2)];
    assert_eq!(g_coefficient(&[0], &ext, &spec).unwrap(), Complex64::new(0.0, 0.0));
}

#[test]
fn scalar_ratio_matches_bruteforce() {
    let roots = ground_state(0.6, &random_mu(4, 0.3, 21));
    let spec = roots.lattice();
    let lam = roots.rapidities();
    let eta = spec.gamma().eta();
    let norm = gaudin_norm(&roots).unwrap();
    for k in 0..4 {
        let w = spec.mu()[k];
        let s = scalar_product_ratio(&roots, &[w]).unwrap();
        let brute = dual_bethe_state(&lam, &spec)
            .unwrap()
            .bilinear(&b_product(&[lam[0], w + eta * 0.5], &spec).unwrap())
            / norm;
        assert!(rel(s, brute) < 1e-9, "k={k}: {s} vs {brute}");
    }
    assert_eq!(scalar_product_ratio(&roots, &[]).unwrap(), Complex64::new(1.0, 0.0));
}

#[test]
fn psi_prime_keeps_gaudin_rows() {
    let roots = ground_state(0.6, &random_mu(8, 0.3, 22));
    let f = varphi_prime_matrix(&roots).unwrap();
    let mu = roots.lattice().mu().to_vec();
    let psi = psi_prime_matrix(&roots, &mu[2..4]).unwrap();
    for i in 0..2 {
        assert_eq!(psi.row(i), f.row(i));
    }
    assert_ne!(psi.row(3), f.row(3));
    let rows = psi_phi_inverse_rows(&roots, &mu[2..4]).unwrap();
    assert_eq!(rows.shape(), (2, 4));
}

#[test]
fn efp_single_column_two_sites() {
    let roots = ground_state(0.8, &[0.0, 0.0]);
    let v = efp_finite(EfpRequest::new(1, 1, 2).unwrap(), &roots).unwrap();
    assert!((v - 0.5).abs() < 1e-12);
}

#[test]
fn efp_matches_bruteforce_every_window() {
    for (m, seed) in [(2usize, 31u64), (4, 32), (6, 33)] {
        let roots = ground_state(0.6, &random_mu(m, 0.3, seed));
        let spec = roots.lattice();
        for n in 1..=m {
            for k in 1..=m + 1 - n {
                let req = EfpRequest::new(k, n, m).unwrap();
                let det = efp_finite_complex(req, &roots).unwrap();
                let brute = correlator_bruteforce(&roots.rapidities(), &spec, &req.columns()).unwrap();
                assert!((det - brute).norm() < 1e-8, "M={m} k={k} n={n}: {det} vs {brute}");
            }
        }
    }
}

#[test]
fn efp_homogeneous_split_limit() {
    let g = gamma(0.6);
    let spec = LatticeSpec::homogeneous(g, 6);
    let (q, v) = svdwbc::bethe::ground_state_numbers(3);
    let roots = svdwbc::bethe::solve_bae(&q, &v, &spec, 1e-13).unwrap();
    let lam = roots.rapidities();
    let mut prev = 1.0;
    for n in 1..=3 {
        let req = EfpRequest::new(2, n, 6).unwrap();
        let brute = correlator_bruteforce(&lam, &spec, &req.columns()).unwrap();
        let est = if n == 1 {
            efp_finite(req, &roots).unwrap()
        } else {
            assert!(efp_finite(req, &roots).is_err());
            efp_finite_split(req, &spec, &q, &v, &DEFAULT_EPS_SCHEDULE, 1e-13).unwrap().value
        };
        assert!((est - brute.re).abs() < 1e-7, "n={n}: {est} vs {brute}");
        assert!(est <= prev + 1e-12 && est >= 0.0);
        prev = est;
    }
}
