use num_complex::Complex64;
use serde::Serialize;

use crate::algebra::{correlator_bruteforce, partition_bruteforce, LatticeSpec, MAX_VECTOR_SITES};
use crate::bethe::{ground_state_numbers, solve_bae, BetheRootSet, DEFAULT_TOL};
use crate::determinant::{efp_finite_complex, efp_finite_split, EfpRequest, SplitEstimate};
use crate::error::{Error, Result};
use crate::thermo::{
    efp_thermo, grid_doubling_change, solve_density, ContourGrid, EfpThermoOptions,
    EfpThermoResult, FermiWeight, MuDistribution,
};
use crate::bethe::SpectralPoint;

use super::config::RunConfig;

/// Rendered output of a command and whether it counts as success.
#[derive(Debug, Clone)]
pub struct Output {
    pub body: String,
    pub success: bool,
}

fn json<T: Serialize>(value: &T) -> Result<Output> {
    let mut body = serde_json::to_string_pretty(value).map_err(Error::io)?;
    body.push('\n');
    Ok(Output {
        body,
        success: true,
    })
}

/// Solves for the configured state (ground state unless `--qn` is given).
pub fn solve_roots(cfg: &RunConfig, spec: &LatticeSpec) -> Result<BetheRootSet> {
    solve_roots_to(cfg, spec, cfg.tol.unwrap_or(DEFAULT_TOL))
}

pub(crate) fn solve_roots_to(cfg: &RunConfig, spec: &LatticeSpec, tol: f64) -> Result<BetheRootSet> {
    let (q, v) = state_numbers(cfg, spec)?;
    solve_bae(&q, &v, spec, tol)
}

fn state_numbers(cfg: &RunConfig, spec: &LatticeSpec) -> Result<(Vec<f64>, Vec<i8>)> {
    let n = spec.half()?;
    let (q0, v0) = ground_state_numbers(n);
    let q = cfg.quantum_numbers.clone().unwrap_or(q0);
    let v = cfg.parities.clone().unwrap_or(v0);
    if q.len() != n || v.len() != n {
        return Err(Error::input(format!("need {n} quantum numbers and parities")));
    }
    Ok((q, v))
}

fn lattice(cfg: &RunConfig) -> Result<LatticeSpec> {
    LatticeSpec::from_real(cfg.anisotropy(), &cfg.mu)
}

fn grid(cfg: &RunConfig) -> Result<ContourGrid> {
    ContourGrid::new(cfg.cutoff, cfg.points)
}

pub fn solve_bae_cmd(cfg: &RunConfig) -> Result<Output> {
    #[derive(Serialize)]
    struct Out<'a> {
        config: &'a RunConfig,
        #[serde(flatten)]
        roots: &'a BetheRootSet,
    }
    let roots = solve_roots(cfg, &lattice(cfg)?)?;
    json(&Out {
        config: cfg,
        roots: &roots,
    })
}

pub fn partition_cmd(cfg: &RunConfig) -> Result<Output> {
    #[derive(Serialize)]
    struct Out<'a> {
        config: &'a RunConfig,
        rapidities: Vec<[f64; 2]>,
        z: [f64; 2],
    }
    let spec = lattice(cfg)?;
    let lam: Vec<Complex64> = match &cfg.lambda {
        Some(l) => {
            let n = spec.half()?;
            if l.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: l.len(),
                });
            }
            l.iter().map(|&x| Complex64::new(x, 0.0)).collect()
        }
        None => solve_roots(cfg, &spec)?.rapidities(),
    };
    let z = partition_bruteforce(&lam, &spec)?;
    json(&Out {
        config: cfg,
        rapidities: lam.iter().map(|l| [l.re, l.im]).collect(),
        z: [z.re, z.im],
    })
}

pub fn efp_finite_cmd(cfg: &RunConfig) -> Result<Output> {
    #[derive(Serialize)]
    struct Out<'a> {
        config: &'a RunConfig,
        columns: Vec<usize>,
        method: &'static str,
        value: f64,
        imag: f64,
        split: Option<SplitEstimate>,
        bruteforce: Option<f64>,
        abs_error: Option<f64>,
    }
    let spec = lattice(cfg)?;
    let req = EfpRequest::new(cfg.k, cfg.n, cfg.m)?;
    let window = &cfg.mu[cfg.k - 1..cfg.k - 1 + cfg.n];
    let degenerate = window
        .iter()
        .enumerate()
        .any(|(i, a)| window[..i].iter().any(|b| (a - b).abs() <= 1e-9));
    let roots = solve_roots(cfg, &spec)?;
    let (method, value, split) = if degenerate {
        let (q, v) = state_numbers(cfg, &spec)?;
        let tol = cfg.tol.unwrap_or(DEFAULT_TOL);
        let est = efp_finite_split(req, &spec, &q, &v, &cfg.eps, tol)?;
        ("split-extrapolated", Complex64::new(est.value, est.imag), Some(est))
    } else {
        ("determinant", efp_finite_complex(req, &roots)?, None)
    };
    let bruteforce = if cfg.m <= MAX_VECTOR_SITES {
        Some(correlator_bruteforce(&roots.rapidities(), &spec, &req.columns())?.re)
    } else {
        None
    };
    json(&Out {
        config: cfg,
        columns: req.columns(),
        method,
        value: value.re,
        imag: value.im,
        split,
        bruteforce,
        abs_error: bruteforce.map(|b| (b - value.re).abs()),
    })
}

pub fn density_cmd(cfg: &RunConfig) -> Result<Output> {
    let g = grid(cfg)?;
    let gamma = cfg.anisotropy();
    let mu = if cfg.mu.iter().all(|&m| m == 0.0) {
        MuDistribution::homogeneous()
    } else {
        MuDistribution::from_points(cfg.mu.clone())?
    };
    let profile = solve_density(&cfg.theta, &g, &mu, gamma)?;
    let change = grid_doubling_change(&cfg.theta, &g, &mu, gamma)?;
    let mut body = String::new();
    let config = serde_json::to_string(cfg).map_err(Error::io)?;
    body.push_str(&format!("# config = {config}\n"));
    body.push_str(&format!(
        "# rho_tot(0) = {:.17e}\n",
        profile.rho_tot_at(SpectralPoint::real(0.0))
    ));
    body.push_str(&format!("# filling = {:.17e}\n", profile.filling));
    body.push_str(&format!("# grid_doubling_change = {change:.3e}\n"));
    let mut csv = Vec::new();
    profile.write_csv(&mut csv)?;
    body.push_str(&String::from_utf8(csv).map_err(Error::io)?);
    Ok(Output {
        body,
        success: true,
    })
}

pub fn efp_thermo_cmd(cfg: &RunConfig) -> Result<Output> {
    #[derive(Serialize)]
    struct Out<'a> {
        config: &'a RunConfig,
        #[serde(flatten)]
        result: EfpThermoResult,
    }
    let options = EfpThermoOptions {
        eps_schedule: cfg.eps.clone(),
        mc_samples: cfg.samples,
        seed: cfg.seed,
        check_grid: true,
        ..Default::default()
    };
    if matches!(cfg.theta, FermiWeight::Nodes(_)) {
        return Err(Error::input("efp-thermo needs a Fermi weight defined off the grid"));
    }
    let result = efp_thermo(&cfg.mu, &cfg.theta, &grid(cfg)?, cfg.anisotropy(), &options)?;
    json(&Out {
        config: cfg,
        result,
    })
}
