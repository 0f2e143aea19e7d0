use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use pt_lattice::models::Variant;
use pt_lattice::{Error, Lattice};
use serde::{Deserialize, Serialize};

#[derive(Parser, Debug)]
#[command(
    name = "ptlattice",
    version,
    about = "Spectra, time evolution, and phase-locking analysis of gain/loss lattices"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Eigenvalues of the lattice Hamiltonian (JSON)
    Spectrum(JobArgs),
    /// Propagate a seeded random state; CSV of log-norm, parity product, bond phases
    Evolve(JobArgs),
    /// Scan gamma for the symmetry-breaking thresholds (JSON)
    Threshold(JobArgs),
    /// Detect phase locking on the trailing window (JSON)
    Lock(JobArgs),
    /// Basis of conserved quadratic forms (JSON)
    Intertwiners(JobArgs),
    /// Locking reports over a seed x gamma grid (JSON array)
    Sweep(JobArgs),
}

impl Command {
    pub fn job(&self) -> &JobArgs {
        match self {
            Command::Spectrum(j)
            | Command::Evolve(j)
            | Command::Threshold(j)
            | Command::Lock(j)
            | Command::Intertwiners(j)
            | Command::Sweep(j) => j,
        }
    }
}

/// One flat parameter surface shared by all subcommands; each command reads
/// the fields it needs and the full resolved set is echoed in the output
/// header, so any output can be replayed through --config.
#[derive(Args, Debug, Default)]
pub struct JobArgs {
    /// Lattice model: dimer | trimer | chain | ssh | aah | pst | ring
    #[arg(long)]
    pub model: Option<String>,
    /// Number of sites (implied for dimer and trimer)
    #[arg(long)]
    pub n: Option<usize>,
    /// Tunneling amplitude J
    #[arg(long)]
    pub j: Option<f64>,
    /// Gain/loss strength gamma
    #[arg(long)]
    pub gamma: Option<f64>,
    /// 1-indexed gain site; the loss site mirrors it
    #[arg(long)]
    pub gain_site: Option<usize>,
    /// Bond alternation in [0, 1] (ssh)
    #[arg(long)]
    pub delta: Option<f64>,
    /// Comma-separated repeating bond profile (aah), e.g. 1,0.8,0.4
    #[arg(long)]
    pub profile: Option<String>,
    /// Weak-bond amplitude J' (ring)
    #[arg(long)]
    pub jprime: Option<f64>,
    /// Seed for the random initial state
    #[arg(long)]
    pub seed: Option<u64>,
    /// Evolution horizon t_max
    #[arg(long)]
    pub tmax: Option<f64>,
    /// Evolution time step
    #[arg(long)]
    pub dt: Option<f64>,
    /// Upper end of the threshold scan
    #[arg(long)]
    pub gamma_max: Option<f64>,
    /// Bisection tolerance of the threshold scan
    #[arg(long)]
    pub tol: Option<f64>,
    /// Trailing-window fraction for locking detection
    #[arg(long)]
    pub window_fraction: Option<f64>,
    /// Saturation tolerance in pi units
    #[arg(long)]
    pub lock_tol: Option<f64>,
    /// Comma-separated seeds (sweep); defaults to --seed
    #[arg(long)]
    pub seeds: Option<String>,
    /// Comma-separated gammas (sweep); defaults to --gamma
    #[arg(long)]
    pub gammas: Option<String>,
    /// JSON config file; explicit flags override its keys
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Output path; '-' or absent writes to stdout
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also write the intertwiner basis matrices to this path
    #[arg(long)]
    pub basis_out: Option<PathBuf>,
}

/// Keys accepted in a --config file. Every key matches the long flag with
/// dashes replaced by underscores; unknown keys are rejected.
#[derive(Deserialize, Debug, Default)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub model: Option<String>,
    pub n: Option<usize>,
    pub j: Option<f64>,
    pub gamma: Option<f64>,
    pub gain_site: Option<usize>,
    pub delta: Option<f64>,
    pub profile: Option<Vec<f64>>,
    pub jprime: Option<f64>,
    pub seed: Option<u64>,
    pub tmax: Option<f64>,
    pub dt: Option<f64>,
    pub gamma_max: Option<f64>,
    pub tol: Option<f64>,
    pub window_fraction: Option<f64>,
    pub lock_tol: Option<f64>,
    pub seeds: Option<Vec<u64>>,
    pub gammas: Option<Vec<f64>>,
}

/// Fully resolved parameters: defaults overlaid by the config file, overlaid
/// by explicit flags. Serialized verbatim into every output header.
#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct Resolved {
    pub model: String,
    pub n: usize,
    pub j: f64,
    pub gamma: f64,
    pub gain_site: usize,
    pub delta: f64,
    pub profile: Vec<f64>,
    pub jprime: f64,
    pub seed: u64,
    pub tmax: f64,
    pub dt: f64,
    pub gamma_max: f64,
    pub tol: f64,
    pub window_fraction: f64,
    pub lock_tol: f64,
    pub seeds: Vec<u64>,
    pub gammas: Vec<f64>,
}

fn parse_list<T: std::str::FromStr>(text: &str, field: &'static str) -> Result<Vec<T>, Error> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse().map_err(|_| Error::InvalidSpec {
                field,
                message: format!("cannot parse {s:?} as a number"),
            })
        })
        .collect()
}

fn load_config(path: &PathBuf) -> Result<FileConfig, Error> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::InvalidSpec {
        field: "config",
        message: format!("cannot read {}: {e}", path.display()),
    })?;
    serde_json::from_str(&text).map_err(|e| Error::InvalidSpec {
        field: "config",
        message: format!("{}: {e}", path.display()),
    })
}

impl JobArgs {
    pub fn resolve(&self) -> Result<Resolved, Error> {
        let file = match &self.config {
            Some(path) => load_config(path)?,
            None => FileConfig::default(),
        };

        let model = self
            .model
            .clone()
            .or(file.model)
            .ok_or(Error::InvalidSpec {
                field: "model",
                message: "no model given (flag --model or config key \"model\")".into(),
            })?;
        let variant: Variant = model.parse()?;

        let n = match self.n.or(file.n) {
            Some(n) => n,
            None => match variant {
                Variant::Dimer => 2,
                Variant::Trimer => 3,
                _ => {
                    return Err(Error::InvalidSpec {
                        field: "n",
                        message: format!("model {model} needs an explicit site count"),
                    })
                }
            },
        };

        let profile = match &self.profile {
            Some(text) => parse_list(text, "profile")?,
            None => file.profile.unwrap_or_default(),
        };

        let seed = self.seed.or(file.seed).unwrap_or(7);
        let gamma = self.gamma.or(file.gamma).unwrap_or(0.0);

        let seeds = match &self.seeds {
            Some(text) => parse_list(text, "seeds")?,
            None => file.seeds.unwrap_or_else(|| vec![seed]),
        };
        let gammas = match &self.gammas {
            Some(text) => parse_list(text, "gammas")?,
            None => file.gammas.unwrap_or_else(|| vec![gamma]),
        };

        Ok(Resolved {
            model: variant.name().to_string(),
            n,
            j: self.j.or(file.j).unwrap_or(1.0),
            gamma,
            gain_site: self.gain_site.or(file.gain_site).unwrap_or(1),
            delta: self.delta.or(file.delta).unwrap_or(0.0),
            profile,
            jprime: self.jprime.or(file.jprime).unwrap_or(0.0),
            seed,
            tmax: self.tmax.or(file.tmax).unwrap_or(40.0),
            dt: self.dt.or(file.dt).unwrap_or(0.05),
            gamma_max: self.gamma_max.or(file.gamma_max).unwrap_or(3.0),
            tol: self.tol.or(file.tol).unwrap_or(1e-6),
            window_fraction: self
                .window_fraction
                .or(file.window_fraction)
                .unwrap_or(pt_lattice::analysis::DEFAULT_WINDOW_FRACTION),
            lock_tol: self
                .lock_tol
                .or(file.lock_tol)
                .unwrap_or(pt_lattice::analysis::DEFAULT_LOCK_TOL),
            seeds,
            gammas,
        })
    }
}

impl Resolved {
    pub fn lattice(&self) -> Result<Lattice, Error> {
        let variant: Variant = self.model.parse()?;
        let mut spec = Lattice::new(variant, self.n)
            .with_j(self.j)
            .with_gamma(self.gamma)
            .with_gain_site(self.gain_site)
            .with_delta(self.delta)
            .with_jprime(self.jprime);
        if !self.profile.is_empty() {
            spec = spec.with_profile(self.profile.clone());
        }
        Ok(spec)
    }
}
