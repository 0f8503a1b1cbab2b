mod common;

use common::{gamma, random_mu};
use num_complex::Complex64;
use svdwbc::algebra::LatticeSpec;
use svdwbc::bethe::{
    counting_function, eigenvalue_residual, ground_state_numbers, solve_bae, DEFAULT_TOL,
};

#[test]
fn ground_states_homogeneous() {
    for g in [0.3, 0.6, 1.0] {
        for n in [2usize, 4, 8] {
            let spec = LatticeSpec::homogeneous(gamma(g), 2 * n);
            let (q, v) = ground_state_numbers(n);
            let roots = solve_bae(&q, &v, &spec, DEFAULT_TOL).unwrap();
            assert!(roots.max_residual() < 1e-12, "g={g} N={n}");
            // symmetric under lambda -> -lambda
            let mut xs: Vec<f64> = roots.roots.iter().map(|p| p.x).collect();
            xs.sort_by(f64::total_cmp);
            for i in 0..n {
                assert!((xs[i] + xs[n - 1 - i]).abs() < 1e-10);
            }
            if 2 * n <= 8 {
                let lam = roots.rapidities();
                let e = eigenvalue_residual(&lam, &spec, Complex64::new(0.31, 0.17)).unwrap();
                assert!(e.residual < 1e-8, "g={g} N={n}: {}", e.residual);
                assert!(e.r_sign(1e-10).is_some(), "g={g} N={n}: r = {}", e.r_value);
            }
        }
    }
}

#[test]
fn counting_function_hits_quantum_numbers() {
    let mu = random_mu(8, 0.3, 4);
    let spec = LatticeSpec::from_real(gamma(0.7), &mu).unwrap();
    let (q, v) = ground_state_numbers(4);
    let roots = solve_bae(&q, &v, &spec, DEFAULT_TOL).unwrap();
    for (p, n) in roots.roots.iter().zip(&q) {
        let phi = counting_function(*p, &roots.roots, &spec).unwrap();
        assert!((phi - 2.0 * std::f64::consts::PI * n).abs() < 1e-10, "{phi} vs {n}");
    }
}

#[test]
fn roots_shift_with_inhomogeneities() {
    let mu = random_mu(6, 0.3, 8);
    let shifted: Vec<f64> = mu.iter().map(|m| m + 0.25).collect();
    let (q, v) = ground_state_numbers(3);
    let a = solve_bae(&q, &v, &LatticeSpec::from_real(gamma(0.6), &mu).unwrap(), 1e-13).unwrap();
    let b = solve_bae(&q, &v, &LatticeSpec::from_real(gamma(0.6), &shifted).unwrap(), 1e-13)
        .unwrap();
    for (x, y) in a.roots.iter().zip(&b.roots) {
        assert!((y.x - x.x - 0.25).abs() < 1e-10);
    }
}

#[test]
fn json_round_trip() {
    let spec = LatticeSpec::homogeneous(gamma(0.6), 4);
    let (q, v) = ground_state_numbers(2);
    let roots = solve_bae(&q, &v, &spec, DEFAULT_TOL).unwrap();
    let s = serde_json::to_string(&roots).unwrap();
    let back: svdwbc::bethe::BetheRootSet = serde_json::from_str(&s).unwrap();
    assert_eq!(roots, back);
    assert!(s.contains("\"M\":4"));
}

#[test]
fn inadmissible_requests_rejected() {
    let spec = LatticeSpec::homogeneous(gamma(0.6), 4);
    let (q, v) = ground_state_numbers(2);
    assert!(solve_bae(&q[..1], &v[..1], &spec, DEFAULT_TOL).is_err());
    assert!(solve_bae(&q, &v, &spec, 0.0).is_err());
    assert!(solve_bae(&[0.5, 0.5], &v, &spec, DEFAULT_TOL).is_err());
}
