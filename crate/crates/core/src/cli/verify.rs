use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::algebra::{
    bethe_state, c_product_dual, b_product, correlator_bruteforce, dual_bethe_state,
    projector_pi, qism_pi, rtt_residual, LatticeSpec, MAX_MATRIX_SITES, MAX_VECTOR_SITES,
};
use crate::bethe::{eigenvalue_residual, DEFAULT_TOL};
use crate::determinant::{
    d_action_check, efp_finite_complex, efp_finite_split, gaudin_norm, slavnov_scalar_product,
    EfpRequest, SlavnovInput,
};
use crate::error::{Error, Result};
use crate::extrapolate::richardson_linear;

use super::config::RunConfig;

/// One line of the verification report.
#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    /// Worst residual found; `None` when skipped.
    pub residual: Option<f64>,
    pub tolerance: f64,
    pub pass: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub config: RunConfig,
    pub checks: Vec<Check>,
    pub all_pass: bool,
    pub first_failure: Option<String>,
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / a.norm().max(b.norm()).max(1e-300)
}

fn complex_draws(rng: &mut ChaCha8Rng, n: usize) -> Vec<Complex64> {
    (0..n)
        .map(|_| Complex64::new(rng.gen_range(-0.6..0.6), rng.gen_range(-0.4..0.4)))
        .collect()
}

struct Battery<'a> {
    cfg: &'a RunConfig,
    checks: Vec<Check>,
}

impl Battery<'_> {
    fn tol(&self, default: f64) -> f64 {
        self.cfg.tol.unwrap_or(default)
    }

    fn record(&mut self, name: &str, residual: f64, tolerance: f64, detail: String) {
        self.checks.push(Check {
            name: name.to_string(),
            residual: Some(residual),
            tolerance,
            pass: residual.is_finite() && residual < tolerance,
            detail,
        });
    }

    fn skip(&mut self, name: &str, tolerance: f64, detail: String) {
        self.checks.push(Check {
            name: name.to_string(),
            residual: None,
            tolerance,
            pass: true,
            detail,
        });
    }
}

/// Runs every brute-force cross-check on the configured lattice.
pub fn run_verify(cfg: &RunConfig) -> Result<VerifyReport> {
    let m = cfg.m;
    if m > MAX_VECTOR_SITES {
        return Err(Error::input(format!("verify needs M <= {MAX_VECTOR_SITES}")));
    }
    let spec = LatticeSpec::from_real(cfg.anisotropy(), &cfg.mu)?;
    // `--tol` tightens the checks, not the root solve
    let roots = super::commands::solve_roots_to(cfg, &spec, DEFAULT_TOL)?;
    let lam = roots.rapidities();
    let nroots = lam.len();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut b = Battery {
        cfg,
        checks: Vec::new(),
    };

    // Yang-Baxter / RTT relation on random spectral parameters
    let tol = b.tol(1e-12);
    if m <= MAX_MATRIX_SITES {
        let draws = if m <= 4 { 100 } else { 10 };
        let mut worst: f64 = 0.0;
        for _ in 0..draws {
            let z = complex_draws(&mut rng, 2);
            worst = worst.max(rtt_residual(z[0], z[1], &spec)?);
        }
        b.record("rtt", worst, tol, format!("{draws} random (lambda, mu) pairs"));
    } else {
        b.skip("rtt", tol, format!("operator matrices limited to M <= {MAX_MATRIX_SITES}"));
    }

    // Slavnov determinant against the operator product
    let tol = b.tol(1e-8);
    let bket = b_product(&lam, &spec)?;
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let xi = complex_draws(&mut rng, nroots);
        let brute = c_product_dual(&xi, &spec)?.bilinear(&bket);
        let det = slavnov_scalar_product(&SlavnovInput::new(xi, &roots)?)?;
        worst = worst.max(rel(brute, det));
    }
    b.record("slavnov", worst, tol, "20 random off-shell sets".into());

    // Gaudin norm: brute force, then as the on-shell limit of Slavnov
    let tol = b.tol(1e-8);
    let gaudin = gaudin_norm(&roots)?;
    let brute = dual_bethe_state(&lam, &spec)?.bilinear(&bethe_state(&lam, &spec)?);
    b.record("gaudin", rel(brute, gaudin), tol, format!("norm = {:.12e}", gaudin.re));

    let tol = b.tol(1e-6);
    let eps = [1e-3, 1e-4, 1e-5];
    let dir = Complex64::new(0.6, 0.8);
    let vals = eps
        .iter()
        .map(|&e| {
            let xi = lam.iter().map(|l| l + dir * e).collect();
            slavnov_scalar_product(&SlavnovInput::new(xi, &roots)?)
        })
        .collect::<Result<Vec<_>>>()?;
    let lim = richardson_linear(&eps, &vals)?;
    b.record("gaudin-limit", rel(lim, gaudin), tol, "eps = 1e-3, 1e-4, 1e-5".into());

    // projector reconstructed from the monodromy
    let tol = b.tol(1e-10);
    if m <= MAX_MATRIX_SITES {
        let mut worst: f64 = 0.0;
        for k in 1..=m {
            let diff = qism_pi(k, &spec)?.sub(&projector_pi(k, &spec)?);
            worst = worst.max(diff.max_abs());
        }
        b.record("qism", worst, tol, format!("columns 1..={m}"));
    } else {
        b.skip("qism", tol, format!("operator matrices limited to M <= {MAX_MATRIX_SITES}"));
    }

    // D-operators acting on off-shell B-products
    let tol = b.tol(1e-9);
    let mut worst: f64 = 0.0;
    let mut detail = Vec::new();
    for n in 1..=2.min(m) {
        let off = complex_draws(&mut rng, nroots);
        let extra = complex_draws(&mut rng, n);
        worst = worst.max(d_action_check(&off, &spec, &extra)?);
        detail.push(n.to_string());
    }
    b.record("d-action", worst, tol, format!("n = {}", detail.join(",")));

    // EFP from determinants against the brute-force correlator
    let tol = b.tol(1e-8);
    let split_tol = b.tol(1e-6);
    let mut worst: f64 = 0.0;
    let mut worst_split: f64 = 0.0;
    let mut windows = 0;
    let mut split_windows = 0;
    let (q, v) = (roots.quantum_numbers.clone(), roots.parities.clone());
    for n in 1..=m {
        for k in 1..=m + 1 - n {
            let req = EfpRequest::new(k, n, m)?;
            let brute = correlator_bruteforce(&lam, &spec, &req.columns())?;
            let window = &cfg.mu[k - 1..k - 1 + n];
            if distinct(window) {
                let det = efp_finite_complex(req, &roots)?;
                worst = worst.max((det - brute).norm());
                windows += 1;
            } else {
                let est = efp_finite_split(req, &spec, &q, &v, &cfg.eps, 1e-13)?;
                worst_split = worst_split.max((Complex64::new(est.value, est.imag) - brute).norm());
                split_windows += 1;
            }
        }
    }
    if windows > 0 {
        b.record("efp", worst, tol, format!("{windows} consecutive windows"));
    }
    if split_windows > 0 {
        b.record(
            "efp-split",
            worst_split,
            split_tol,
            format!("{split_windows} windows with coinciding inhomogeneities"),
        );
    }

    // Bethe state is an eigenvector of the transfer matrix and of the flip
    let tol = b.tol(1e-8);
    let at = complex_draws(&mut rng, 1)[0];
    let eig = eigenvalue_residual(&lam, &spec, at)?;
    b.record("eigenstate", eig.residual, tol, format!("lambda = {at}"));
    let tol = b.tol(1e-10);
    let sign = if eig.r_value.re >= 0.0 { 1.0 } else { -1.0 };
    let r_res = (eig.r_value - sign).norm().max(eig.r_residual);
    b.record("flip-eigenvalue", r_res, tol, format!("r = {sign:+}"));

    let first_failure = b.checks.iter().find(|c| !c.pass).map(|c| c.name.clone());
    Ok(VerifyReport {
        config: cfg.clone(),
        all_pass: first_failure.is_none(),
        first_failure,
        checks: b.checks,
    })
}

fn distinct(w: &[f64]) -> bool {
    w.iter()
        .enumerate()
        .all(|(i, a)| w[..i].iter().all(|b| (a - b).abs() > 1e-9))
}

