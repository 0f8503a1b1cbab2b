use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use clap::Args;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::anisotropy::AnisotropyParam;
use crate::determinant::DEFAULT_EPS_SCHEDULE;
use crate::error::{Error, Result};
use crate::thermo::{ContourGrid, FermiWeight, DEFAULT_POINTS};

/// Flags shared by every subcommand. Each may also be given in a
/// `key = value` config file (`--config`); flags take precedence.
#[derive(Debug, Clone, Default, Args)]
pub struct Flags {
    /// Anisotropy gamma, 0 <= gamma < pi/2 (Delta = cos gamma).
    #[arg(long)]
    pub gamma: Option<f64>,
    /// Lattice size M (even).
    #[arg(long = "M")]
    pub m: Option<usize>,
    /// Number of roots N = M/2.
    #[arg(long = "N")]
    pub big_n: Option<usize>,
    /// Inhomogeneities: `homogeneous`, `random`, a comma list, or `@file`.
    #[arg(long)]
    pub mu: Option<String>,
    /// Number of consecutive columns.
    #[arg(long)]
    pub n: Option<usize>,
    /// First column of the run (1-based).
    #[arg(long)]
    pub k: Option<usize>,
    /// Contour cutoff Lambda.
    #[arg(long)]
    pub cutoff: Option<f64>,
    /// Quadrature points per contour branch (multiple of 8).
    #[arg(long)]
    pub points: Option<usize>,
    /// Solver tolerance; for `verify`, overrides every check threshold.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Seed for every random choice.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Worker threads (default: all cores).
    #[arg(long)]
    pub threads: Option<usize>,
    /// Output file (default: stdout).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Fermi weight: `ground`, `empty`, or `REAL,SHIFTED`.
    #[arg(long)]
    pub theta: Option<String>,
    /// Splitting schedule for coinciding inhomogeneities (comma list).
    #[arg(long)]
    pub eps: Option<String>,
    /// Monte Carlo samples (n > 3).
    #[arg(long)]
    pub samples: Option<usize>,
    /// Quantum numbers n_j (comma list); default: ground state.
    #[arg(long)]
    pub qn: Option<String>,
    /// Root parities v_j = +-1 (comma list); default: all +1.
    #[arg(long)]
    pub parity: Option<String>,
    /// Explicit rapidities for `partition` (comma list of reals).
    #[arg(long)]
    pub lambda: Option<String>,
    /// Flat `key = value` file with defaults for any of the flags above.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

const KEYS: &[&str] = &[
    "gamma", "M", "N", "mu", "n", "k", "cutoff", "points", "tol", "seed", "threads", "out",
    "theta", "eps", "samples", "qn", "parity", "lambda",
];

/// Reads a flat `key = value` file; `#` starts a comment.
pub fn read_config_file(path: &Path) -> Result<BTreeMap<String, String>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_config_text(&text)
}

pub fn parse_config_text(text: &str) -> Result<BTreeMap<String, String>> {
    let mut map = BTreeMap::new();
    for (no, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::input(format!("config line {}: expected key = value", no + 1)))?;
        let (k, v) = (k.trim().trim_start_matches("--"), v.trim());
        if !KEYS.contains(&k) {
            return Err(Error::input(format!("config line {}: unknown key `{k}`", no + 1)));
        }
        map.insert(k.to_string(), v.to_string());
    }
    Ok(map)
}

fn parse<T: std::str::FromStr>(key: &str, s: &str) -> Result<T> {
    s.trim()
        .parse()
        .map_err(|_| Error::input(format!("cannot parse {key} = `{s}`")))
}

fn parse_list<T: std::str::FromStr>(key: &str, s: &str) -> Result<Vec<T>> {
    s.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| parse(key, t))
        .collect()
}

impl Flags {
    /// Fills unset flags from a config map.
    pub fn merge_file(mut self, file: &BTreeMap<String, String>) -> Result<Self> {
        macro_rules! fill {
            ($field:ident, $key:literal) => {
                if self.$field.is_none() {
                    if let Some(v) = file.get($key) {
                        self.$field = Some(parse($key, v)?);
                    }
                }
            };
        }
        fill!(gamma, "gamma");
        fill!(m, "M");
        fill!(big_n, "N");
        fill!(mu, "mu");
        fill!(n, "n");
        fill!(k, "k");
        fill!(cutoff, "cutoff");
        fill!(points, "points");
        fill!(tol, "tol");
        fill!(seed, "seed");
        fill!(threads, "threads");
        fill!(out, "out");
        fill!(theta, "theta");
        fill!(eps, "eps");
        fill!(samples, "samples");
        fill!(qn, "qn");
        fill!(parity, "parity");
        fill!(lambda, "lambda");
        Ok(self)
    }
}

/// Which subcommand a configuration is resolved for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CommandKind {
    Verify,
    SolveBae,
    Partition,
    EfpFinite,
    Density,
    EfpThermo,
}

impl CommandKind {
    fn needs_lattice(self) -> bool {
        !matches!(self, CommandKind::Density | CommandKind::EfpThermo)
    }
}

/// Fully resolved run configuration, embedded in every output.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub command: CommandKind,
    pub gamma: f64,
    #[serde(rename = "M")]
    pub m: usize,
    /// Source of the inhomogeneities as given.
    pub mu_source: String,
    /// Resolved inhomogeneities: the lattice for finite-size commands, the
    /// column window for `efp-thermo`, the kernel average for `density`.
    pub mu: Vec<f64>,
    pub n: usize,
    pub k: usize,
    pub cutoff: f64,
    pub points: usize,
    pub tol: Option<f64>,
    pub seed: u64,
    pub theta: FermiWeight,
    pub eps: Vec<f64>,
    pub samples: usize,
    pub quantum_numbers: Option<Vec<f64>>,
    pub parities: Option<Vec<i8>>,
    pub lambda: Option<Vec<f64>>,
    #[serde(skip)]
    pub threads: Option<usize>,
    #[serde(skip)]
    pub out: Option<PathBuf>,
}

fn resolve_mu(source: &str, count: usize, seed: u64) -> Result<Vec<f64>> {
    let s = source.trim();
    let values: Vec<f64> = if s == "homogeneous" {
        vec![0.0; count]
    } else if s == "random" {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..count).map(|_| rng.gen_range(-0.3..0.3)).collect()
    } else if let Some(path) = s.strip_prefix('@') {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{path}: {e}")))?;
        parse_list("mu", &text)?
    } else {
        parse_list("mu", s)?
    };
    if values.iter().any(|m| !m.is_finite()) {
        return Err(Error::input("inhomogeneities must be finite"));
    }
    Ok(values)
}

fn parse_theta(s: &str) -> Result<FermiWeight> {
    match s.trim() {
        "ground" => Ok(FermiWeight::Ground),
        "empty" => Ok(FermiWeight::Empty),
        other => {
            let v: Vec<f64> = parse_list("theta", other)?;
            if v.len() != 2 {
                return Err(Error::input("theta must be ground, empty, or REAL,SHIFTED"));
            }
            Ok(FermiWeight::Branchwise {
                real: v[0],
                shifted: v[1],
            })
        }
    }
}

impl RunConfig {
    /// Applies defaults and validates.
    pub fn resolve(command: CommandKind, flags: &Flags) -> Result<Self> {
        let gamma = flags.gamma.unwrap_or(0.6);
        AnisotropyParam::new(gamma)?;
        let seed = flags.seed.unwrap_or(42);
        let n = flags.n.unwrap_or(1);
        let k = flags.k.unwrap_or(1);
        let default_mu = if command == CommandKind::Verify { "random" } else { "homogeneous" };
        let mu_source = flags.mu.clone().unwrap_or_else(|| default_mu.to_string());
        let explicit_len = {
            let s = mu_source.trim();
            if s == "homogeneous" || s == "random" {
                None
            } else {
                Some(resolve_mu(s, 0, seed)?.len())
            }
        };

        let m = match (flags.m, flags.big_n) {
            (Some(m), Some(nn)) if m != 2 * nn => {
                return Err(Error::input(format!("M = {m} but N = {nn}; need M = 2N")))
            }
            (Some(m), _) => m,
            (None, Some(nn)) => 2 * nn,
            (None, None) => match (command, explicit_len) {
                (CommandKind::EfpThermo, _) | (_, None) => 4,
                (_, Some(len)) => len,
            },
        };
        if command.needs_lattice() && m % 2 == 1 {
            return Err(Error::input(format!("M = {m} must be even")));
        }
        let count = if command == CommandKind::EfpThermo { n } else { m };
        let mu = resolve_mu(&mu_source, count, seed)?;
        if mu.len() != count {
            let what = if command == CommandKind::EfpThermo { "n" } else { "M" };
            return Err(Error::input(format!(
                "{} inhomogeneities given but {what} = {count}",
                mu.len()
            )));
        }
        if command == CommandKind::Density && mu.is_empty() {
            return Err(Error::input("density needs at least one inhomogeneity"));
        }

        let cutoff = flags.cutoff.unwrap_or_else(|| ContourGrid::default_cutoff(gamma));
        let points = flags.points.unwrap_or(DEFAULT_POINTS);
        if let Some(t) = flags.tol {
            if !(t > 0.0) {
                return Err(Error::input("tolerance must be positive"));
            }
        }
        let theta = parse_theta(flags.theta.as_deref().unwrap_or("ground"))?;
        let eps = match &flags.eps {
            Some(s) => parse_list("eps", s)?,
            None => DEFAULT_EPS_SCHEDULE.to_vec(),
        };
        if eps.is_empty() || eps.iter().any(|e| !(*e > 0.0)) {
            return Err(Error::input("eps schedule must be positive"));
        }
        let quantum_numbers = flags.qn.as_deref().map(|s| parse_list("qn", s)).transpose()?;
        let parities = flags.parity.as_deref().map(|s| parse_list("parity", s)).transpose()?;
        let lambda = flags.lambda.as_deref().map(|s| parse_list("lambda", s)).transpose()?;
        if flags.threads == Some(0) {
            return Err(Error::input("threads must be at least 1"));
        }
        Ok(Self {
            command,
            gamma,
            m,
            mu_source,
            mu,
            n,
            k,
            cutoff,
            points,
            tol: flags.tol,
            seed,
            theta,
            eps,
            samples: flags.samples.unwrap_or(200_000),
            quantum_numbers,
            parities,
            lambda,
            threads: flags.threads,
            out: flags.out.clone(),
        })
    }

    pub fn anisotropy(&self) -> AnisotropyParam {
        AnisotropyParam::new(self.gamma).expect("validated")
    }
}
