#![allow(dead_code)]

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use svdwbc::algebra::LatticeSpec;
use svdwbc::bethe::{ground_state_numbers, solve_bae, BetheRootSet};
use svdwbc::AnisotropyParam;

pub fn gamma(g: f64) -> AnisotropyParam {
    AnisotropyParam::new(g).unwrap()
}

pub fn random_mu(m: usize, spread: f64, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..m).map(|_| rng.gen_range(-spread..spread)).collect()
}

pub fn random_complex(n: usize, seed: u64) -> Vec<Complex64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| Complex64::new(rng.gen_range(-0.6..0.6), rng.gen_range(-0.4..0.4)))
        .collect()
}

pub fn ground_state(g: f64, mu: &[f64]) -> BetheRootSet {
    let spec = LatticeSpec::from_real(gamma(g), mu).unwrap();
    let (q, v) = ground_state_numbers(mu.len() / 2);
    solve_bae(&q, &v, &spec, 1e-13).unwrap()
}

pub fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / a.norm().max(b.norm()).max(1e-300)
}
