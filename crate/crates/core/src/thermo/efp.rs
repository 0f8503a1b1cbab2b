use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::density::{grid_doubling_change, DensitySolver, FermiWeight, GRID_TOL};
use super::grid::ContourGrid;
use super::hfunc::h_from_matrix;
use super::kernel::MuDistribution;
use super::source::DensitySource;
use crate::anisotropy::AnisotropyParam;
use crate::bethe::{BetheRootSet, SpectralPoint};
use crate::determinant::{ordered_tuples, DEFAULT_EPS_SCHEDULE};
use crate::error::{Error, Result};
use crate::extrapolate::{richardson_even, richardson_linear};

/// Window inhomogeneities closer than this are treated as coinciding.
pub const DEGENERATE_TOL: f64 = 1e-6;
/// Imaginary parts above this are flagged in results.
pub const IMAG_FLAG: f64 = 1e-6;
/// Largest `n` evaluated by tensor-product quadrature.
pub const MAX_TENSOR_N: usize = 3;

/// Numerical options of [`efp_thermo`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EfpThermoOptions {
    /// Splitting steps for coinciding window inhomogeneities.
    pub eps_schedule: Vec<f64>,
    /// Allow the `eps -> 0` extrapolation; otherwise coinciding window
    /// values are an error.
    pub extrapolate: bool,
    /// Largest `n` integrated by tensor-product quadrature; Monte Carlo above.
    pub tensor_max_n: usize,
    /// Monte Carlo samples.
    pub mc_samples: usize,
    pub seed: u64,
    /// Fail unless doubling the grid changes `rho_tot(0)` by less than
    /// [`GRID_TOL`].
    pub check_grid: bool,
}

impl Default for EfpThermoOptions {
    fn default() -> Self {
        Self {
            eps_schedule: DEFAULT_EPS_SCHEDULE.to_vec(),
            extrapolate: true,
            tensor_max_n: MAX_TENSOR_N,
            mc_samples: 200_000,
            seed: 42,
            check_grid: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Quadrature {
    Tensor,
    MonteCarlo,
}

/// Multiple-integral EFP with every numerical parameter recorded.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EfpThermoResult {
    pub n: usize,
    pub window: Vec<f64>,
    pub value: f64,
    pub imag: f64,
    /// `|imag| > 1e-6`.
    pub imag_flagged: bool,
    pub quadrature: Quadrature,
    /// Monte Carlo standard error (after extrapolation, propagated linearly).
    pub std_error: Option<f64>,
    pub cutoff: f64,
    pub points_per_branch: usize,
    /// Schedule used when the window had to be split, with the value at each step.
    pub eps_schedule: Option<Vec<f64>>,
    pub eps_samples: Vec<(f64, f64)>,
    pub grid_change: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Split {
    None,
    Even,
    Linear,
}

fn classify(window: &[f64]) -> Split {
    let n = window.len();
    let close = |a: f64, b: f64| (a - b).abs() < DEGENERATE_TOL;
    let any = (0..n).any(|i| (0..i).any(|j| close(window[i], window[j])));
    if !any {
        Split::None
    } else if window.iter().all(|&m| close(m, window[0])) {
        Split::Even
    } else {
        Split::Linear
    }
}

fn split_window(window: &[f64], eps: f64) -> Vec<f64> {
    let c = (window.len() as f64 - 1.0) / 2.0;
    window
        .iter()
        .enumerate()
        .map(|(l, &m)| m + (l as f64 - c) * eps)
        .collect()
}

fn vandermonde_sinh(window: &[f64]) -> f64 {
    let mut p = 1.0;
    for l in 0..window.len() {
        for m in l + 1..window.len() {
            p *= (window[l] - window[m]).sinh();
        }
    }
    p
}

/// Evaluates `F(eps)` on the schedule (or once when no split is needed) and
/// extrapolates. `f` returns a value and an optional standard error.
fn with_splitting(
    window: &[f64],
    eps: &[f64],
    extrapolate: bool,
    mut f: impl FnMut(&[f64]) -> Result<(Complex64, Option<f64>)>,
) -> Result<(Complex64, Option<f64>, Option<Vec<f64>>, Vec<(f64, f64)>)> {
    let kind = classify(window);
    if kind == Split::None {
        let (v, e) = f(window)?;
        return Ok((v, e, None, Vec::new()));
    }
    if !extrapolate {
        return Err(Error::input(
            "window inhomogeneities coincide; enable the eps extrapolation",
        ));
    }
    if eps.is_empty() || eps.iter().any(|e| !(*e > 0.0)) {
        return Err(Error::input("splitting schedule must be positive and non-empty"));
    }
    let mut vals = Vec::with_capacity(eps.len());
    let mut errs = Vec::with_capacity(eps.len());
    for &e in eps {
        let (v, se) = f(&split_window(window, e))?;
        vals.push(v);
        errs.push(se);
    }
    let v = match kind {
        Split::Even => richardson_even(eps, &vals)?,
        _ => richardson_linear(eps, &vals)?,
    };
    // Propagate independent errors through the (linear) extrapolation
    // weights, obtained by extrapolating unit vectors.
    let std_error = if errs.iter().all(Option::is_some) {
        let mut var = 0.0;
        for (i, se) in errs.iter().enumerate() {
            let mut unit = vec![Complex64::new(0.0, 0.0); eps.len()];
            unit[i] = Complex64::new(1.0, 0.0);
            let w = match kind {
                Split::Even => richardson_even(eps, &unit)?,
                _ => richardson_linear(eps, &unit)?,
            };
            var += (w.re * se.unwrap()).powi(2);
        }
        Some(var.sqrt())
    } else {
        None
    };
    let samples = eps.iter().zip(&vals).map(|(&e, v)| (e, v.re)).collect();
    Ok((v, std_error, Some(eps.to_vec()), samples))
}

/// Tables shared by every integrand evaluation for a fixed, distinct window.
struct Integrand {
    n: usize,
    /// Active node indices (`w theta != 0`).
    coef: Vec<f64>,
    lam: Vec<Complex64>,
    /// `rho~_i` at active nodes, row-major `[i][a]`.
    rt: Vec<Vec<f64>>,
    /// `sinh(lambda_a - mu_l - i gamma/2)` and `... + i gamma/2`.
    sm: Vec<Vec<Complex64>>,
    sp: Vec<Vec<Complex64>>,
    /// `1 / sinh(lambda_b - lambda_a - i gamma)` at `[a * len + b]`.
    pair: Vec<Complex64>,
}

const MAX_N: usize = 8;

fn det_real(m: &[[f64; MAX_N]; MAX_N], n: usize) -> f64 {
    match n {
        1 => m[0][0],
        2 => m[0][0] * m[1][1] - m[0][1] * m[1][0],
        3 => {
            m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
                - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
                + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
        }
        _ => nalgebra::DMatrix::from_fn(n, n, |i, j| m[i][j]).determinant(),
    }
}

impl Integrand {
    fn new(solver: &DensitySolver, window: &[f64]) -> Result<Self> {
        let grid = solver.grid();
        let active: Vec<usize> = (0..grid.len())
            .filter(|&a| grid.weights[a] * solver.theta()[a] != 0.0)
            .collect();
        let coef = active
            .iter()
            .map(|&a| grid.weights[a] * solver.theta()[a])
            .collect();
        let lam: Vec<Complex64> = active.iter().map(|&a| grid.nodes[a].to_complex()).collect();
        let mut rt = Vec::with_capacity(window.len());
        for &mu in window {
            let local = solver.local(mu)?;
            rt.push(active.iter().map(|&a| local.values()[a]).collect());
        }
        if window.len() > MAX_N {
            return Err(Error::input(format!("at most {MAX_N} columns are supported")));
        }
        let g = solver.gamma().gamma();
        let ig = Complex64::new(0.0, g);
        let half = ig * 0.5;
        let len = lam.len();
        let mut pair = vec![Complex64::new(0.0, 0.0); if window.len() > 1 { len * len } else { 0 }];
        if window.len() > 1 {
            for a in 0..len {
                for b in 0..len {
                    if a != b {
                        pair[a * len + b] = (lam[b] - lam[a] - ig).sinh().inv();
                    }
                }
            }
        }
        let table = |s: Complex64| -> Vec<Vec<Complex64>> {
            window
                .iter()
                .map(|&mu| lam.iter().map(|&l| (l - mu + s).sinh()).collect())
                .collect()
        };
        Ok(Self {
            n: window.len(),
            coef,
            sm: table(-half),
            sp: table(half),
            lam,
            rt,
            pair,
        })
    }

    fn len(&self) -> usize {
        self.coef.len()
    }

    /// `prod w theta * H` at active-node tuple `idx` (distinct).
    fn eval(&self, idx: &[usize]) -> Complex64 {
        let n = self.n;
        let len = self.lam.len();
        let mut s = [[0.0; MAX_N]; MAX_N];
        for (i, row) in s.iter_mut().enumerate().take(n) {
            for (j, &a) in idx.iter().enumerate() {
                row[j] = self.rt[i][a];
            }
        }
        let mut h = Complex64::new(det_real(&s, n), 0.0);
        for l in 0..n {
            let a = idx[l];
            h *= self.coef[a];
            for &b in &idx[l + 1..] {
                h *= self.pair[a * len + b];
            }
            for m in 0..n {
                if m < l {
                    h *= self.sm[m][a];
                } else if m > l {
                    h *= self.sp[m][a];
                }
            }
        }
        h
    }

    fn tensor(&self) -> Complex64 {
        let a_len = self.len();
        let partial: Vec<Complex64> = (0..a_len)
            .into_par_iter()
            .map(|a| match self.n {
                1 => self.eval(&[a]),
                2 => {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for b in 0..a_len {
                        if b != a {
                            acc += self.eval(&[a, b]);
                        }
                    }
                    acc
                }
                _ => {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for b in 0..a_len {
                        if b == a {
                            continue;
                        }
                        for c in 0..a_len {
                            if c != a && c != b {
                                acc += self.eval(&[a, b, c]);
                            }
                        }
                    }
                    acc
                }
            })
            .collect();
        partial.iter().sum()
    }

    /// Importance-sampled, first-coordinate-stratified Monte Carlo estimate
    /// and its standard error.
    fn monte_carlo(&self, samples: usize, seed: u64) -> Result<(Complex64, f64)> {
        if samples < 2 {
            return Err(Error::input("Monte Carlo needs at least two samples"));
        }
        let a_len = self.len();
        let mut p: Vec<f64> = (0..a_len)
            .map(|a| self.coef[a].abs() * self.rt.iter().map(|r| r[a].abs()).sum::<f64>())
            .collect();
        let total: f64 = p.iter().sum();
        if !(total > 0.0) {
            return Ok((Complex64::new(0.0, 0.0), 0.0));
        }
        p.iter_mut().for_each(|v| *v /= total);
        let mut cdf = Vec::with_capacity(a_len);
        let mut acc = 0.0;
        for v in &p {
            acc += v;
            cdf.push(acc);
        }
        let pick = |u: f64| cdf.partition_point(|&c| c < u * acc).min(a_len - 1);
        const CHUNK: usize = 4096;
        let chunks = samples.div_ceil(CHUNK);
        let sums: Vec<(Complex64, f64)> = (0..chunks)
            .into_par_iter()
            .map(|c| {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(c as u64);
                let mut s = Complex64::new(0.0, 0.0);
                let mut s2 = 0.0;
                let mut idx = vec![0usize; self.n];
                for k in c * CHUNK..((c + 1) * CHUNK).min(samples) {
                    let u0 = (k as f64 + rng.gen::<f64>()) / samples as f64;
                    idx[0] = pick(u0);
                    for slot in idx.iter_mut().skip(1) {
                        *slot = pick(rng.gen::<f64>());
                    }
                    let distinct = (0..self.n).all(|i| (0..i).all(|j| idx[i] != idx[j]));
                    let x = if distinct {
                        let q: f64 = idx.iter().map(|&a| p[a]).product();
                        self.eval(&idx) / q
                    } else {
                        Complex64::new(0.0, 0.0)
                    };
                    s += x;
                    s2 += x.norm_sqr();
                }
                (s, s2)
            })
            .collect();
        let (s, s2) = sums
            .iter()
            .fold((Complex64::new(0.0, 0.0), 0.0), |(a, b), (c, d)| (a + c, b + d));
        let nf = samples as f64;
        let mean = s / nf;
        let var = (s2 / nf - mean.norm_sqr()).max(0.0) * nf / (nf - 1.0);
        Ok((mean, (var / nf).sqrt()))
    }
}

/// Multiple-integral emptiness formation probability
/// `(prod_{l<m} sinh(mu_l - mu_m))^{-1} int_C ... int_C H prod theta(lambda_l) dlambda_l`
/// for `n = window.len()` consecutive columns with inhomogeneities `window`.
///
/// `n <= 3` uses the tensor product of the contour rule; larger `n` uses
/// Monte Carlo. Coinciding window values are split and extrapolated.
pub fn efp_thermo(
    window: &[f64],
    theta: &FermiWeight,
    grid: &ContourGrid,
    gamma: AnisotropyParam,
    options: &EfpThermoOptions,
) -> Result<EfpThermoResult> {
    let n = window.len();
    if window.iter().any(|m| !m.is_finite()) {
        return Err(Error::input("window inhomogeneities must be finite"));
    }
    let grid_change = if options.check_grid {
        let c = grid_doubling_change(theta, grid, &MuDistribution::homogeneous(), gamma)?;
        if c > GRID_TOL {
            return Err(Error::GridNotConverged {
                quantity: "rho_tot(0)",
                change: c,
            });
        }
        Some(c)
    } else {
        None
    };
    if options.tensor_max_n > MAX_TENSOR_N {
        return Err(Error::input(format!(
            "tensor quadrature is limited to n <= {MAX_TENSOR_N}"
        )));
    }
    let quadrature = if n <= options.tensor_max_n {
        Quadrature::Tensor
    } else {
        Quadrature::MonteCarlo
    };
    let (v, std_error, eps_schedule, eps_samples) = if n == 0 {
        (Complex64::new(1.0, 0.0), None, None, Vec::new())
    } else {
        let solver = DensitySolver::new(theta, grid, gamma)?;
        with_splitting(window, &options.eps_schedule, options.extrapolate, |w| {
            let integrand = Integrand::new(&solver, w)?;
            let (raw, se) = match quadrature {
                Quadrature::Tensor => (integrand.tensor(), None),
                Quadrature::MonteCarlo => {
                    let (m, e) = integrand.monte_carlo(options.mc_samples, options.seed)?;
                    (m, Some(e))
                }
            };
            let pre = vandermonde_sinh(w);
            Ok((raw / pre, se.map(|e| e / pre.abs())))
        })?
    };
    Ok(EfpThermoResult {
        n,
        window: window.to_vec(),
        value: v.re,
        imag: v.im,
        imag_flagged: v.im.abs() > IMAG_FLAG,
        quadrature,
        std_error,
        cutoff: grid.cutoff,
        points_per_branch: grid.points_per_branch,
        eps_schedule,
        eps_samples,
        grid_change,
    })
}

/// Finite-lattice sum over roots
/// `(M^n prod_{l<m} sinh(mu_l - mu_m))^{-1} sum_{I} H(lambda_I) prod_l rho_tot(lambda_{i_l})^{-1}`
/// over ordered tuples of distinct roots. With [`super::RootDensity`] this
/// equals the determinant-path EFP; with [`super::ThermoDensity`] it
/// approaches the multiple integral as `M` grows.
///
/// Coinciding window values are split (the roots stay fixed) and
/// extrapolated over `eps`.
pub fn efp_sum_finite(
    roots: &BetheRootSet,
    window: &[f64],
    density: &dyn DensitySource,
    eps: &[f64],
) -> Result<Complex64> {
    let n = window.len();
    if n == 0 {
        return Ok(Complex64::new(1.0, 0.0));
    }
    let pts: &[SpectralPoint] = &roots.roots;
    let lam = roots.rapidities();
    let rho = density.rho_tot(pts)?;
    let m = roots.sites as f64;
    let tuples = ordered_tuples(n, |_| pts.len());
    let gamma = density.gamma();
    let (v, _, _, _) = with_splitting(window, eps, true, |w| {
        let rt = w
            .iter()
            .map(|&mu| density.rho_tilde(mu, pts))
            .collect::<Result<Vec<_>>>()?;
        let terms: Vec<Complex64> = tuples
            .par_iter()
            .map(|idx| {
                let s = nalgebra::DMatrix::from_fn(n, n, |i, j| Complex64::new(rt[i][idx[j]], 0.0));
                let z: Vec<Complex64> = idx.iter().map(|&i| lam[i]).collect();
                let h = h_from_matrix(&z, w, &s, gamma)?;
                let r: f64 = idx.iter().map(|&i| rho[i]).product();
                Ok(h / r)
            })
            .collect::<Result<_>>()?;
        let sum: Complex64 = terms.iter().sum();
        Ok((sum / (m.powi(n as i32) * vandermonde_sinh(w)), None))
    })?;
    Ok(v)
}
