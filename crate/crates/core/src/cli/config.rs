//! Run configuration: command-line flags layered over an optional JSON file.

use std::path::PathBuf;

use clap::{Args, ValueEnum};
use serde::{Deserialize, Deserializer, Serialize};

use crate::potentials::{Interpolation, PotentialModel, Table, Units};

use super::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    Cosine,
    ParabolicChain,
    Tabulated,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScaleConvention {
    /// ħ = m = 1 unless overridden.
    Natural,
    /// ħ²/(2 m l_c²) = 1; the mass follows from ħ and l_c.
    UnitEnergy,
}

impl ScaleConvention {
    pub fn name(self) -> &'static str {
        match self {
            ScaleConvention::Natural => "natural",
            ScaleConvention::UnitEnergy => "unit-energy",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InterpChoice {
    Linear,
    Cubic,
}

impl From<InterpChoice> for Interpolation {
    fn from(c: InterpChoice) -> Self {
        match c {
            InterpChoice::Linear => Interpolation::Linear,
            InterpChoice::Cubic => Interpolation::Cubic,
        }
    }
}

fn one_or_many<'de, D, T>(d: D) -> Result<Vec<T>, D::Error>
where
    D: Deserializer<'de>,
    T: Deserialize<'de>,
{
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum OneOrMany<T> {
        One(T),
        Many(Vec<T>),
    }
    Ok(match OneOrMany::deserialize(d)? {
        OneOrMany::One(v) => vec![v],
        OneOrMany::Many(v) => v,
    })
}

/// Every option accepted by the subcommands. The same keys (kebab-case) make
/// up the JSON configuration file; unknown keys are rejected.
#[derive(Debug, Clone, Default, Args, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct Options {
    /// JSON configuration file; flags given on the command line take
    /// precedence.
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,

    /// Potential family.
    #[arg(long, value_enum)]
    pub potential: Option<Family>,
    /// Cosine amplitude q (comma-separated list for `mathieu`).
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    #[serde(default, deserialize_with = "one_or_many")]
    pub q: Vec<f64>,
    /// Cosine length scale l_c.
    #[arg(long, allow_negative_numbers = true)]
    pub lc: Option<f64>,
    /// Number of wells N.
    #[arg(long)]
    pub wells: Option<usize>,
    /// Band index n (comma-separated list accepted).
    #[arg(long, value_delimiter = ',')]
    #[serde(default, deserialize_with = "one_or_many")]
    pub n: Vec<u32>,

    /// Parabolic chain: potential at the minima.
    #[arg(long, allow_negative_numbers = true)]
    pub v0: Option<f64>,
    /// Parabolic chain: harmonic frequency.
    #[arg(long, allow_negative_numbers = true)]
    pub omega: Option<f64>,
    /// Parabolic chain: well spacing.
    #[arg(long, allow_negative_numbers = true)]
    pub a: Option<f64>,
    /// Parabolic chain: position of the first minimum.
    #[arg(long, allow_negative_numbers = true)]
    pub x1: Option<f64>,
    /// Tabulated potential: two-column (x, V) CSV file.
    #[arg(long)]
    pub table: Option<PathBuf>,
    /// Tabulated potential: interpolation scheme.
    #[arg(long, value_enum)]
    pub interp: Option<InterpChoice>,

    /// Reduced Planck constant (default 1)
    #[arg(long, allow_negative_numbers = true)]
    pub hbar: Option<f64>,
    /// Particle mass (default 1; derived under unit-energy)
    #[arg(long, allow_negative_numbers = true)]
    pub mass: Option<f64>,
    /// Unit convention (default: unit-energy for `mathieu`, natural otherwise).
    #[arg(long, value_enum)]
    pub scale_convention: Option<ScaleConvention>,

    /// Finite-difference grid points (`verify`) or Fourier basis size
    /// (`mathieu`).
    #[arg(long)]
    pub grid: Option<usize>,
    /// Convergence tolerance for `verify`, relative to ħω.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Allowed relative deviation of the fitted hopping amplitude (`verify`).
    #[arg(long)]
    pub ratio_tol: Option<f64>,
    /// Minimum ratio of the surrounding gap to the band width (`verify`).
    #[arg(long)]
    pub gap_min: Option<f64>,

    /// Bloch wavenumbers for `dispersion` (comma-separated).
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    #[serde(default, deserialize_with = "one_or_many")]
    pub k: Vec<f64>,
    /// Number of evenly spaced wavenumbers across the Brillouin zone.
    #[arg(long)]
    pub k_points: Option<usize>,

    /// Circulant coefficients h₀, h₁, … (`ring`); either all N values or
    /// the first ⌊N/2⌋+1, mirrored.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    #[serde(default, deserialize_with = "one_or_many")]
    pub h: Vec<f64>,
    /// Build the ring from the chain band of `--n` (qualitative heuristic).
    #[arg(long)]
    #[serde(default)]
    pub heuristic_from_chain: bool,

    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Output format (default csv)
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

fn pick<T>(flag: Option<T>, file: Option<T>) -> Option<T> {
    flag.or(file)
}

fn pick_vec<T>(flag: Vec<T>, file: Vec<T>) -> Vec<T> {
    if flag.is_empty() {
        file
    } else {
        flag
    }
}

impl Options {
    /// Reads the configuration file, if any, and fills every option the
    /// command line left unset.
    pub fn resolve(self) -> Result<Options, CliError> {
        let Some(path) = self.config.clone() else {
            return Ok(self);
        };
        let text = std::fs::read_to_string(&path)
            .map_err(|e| CliError::io(format!("cannot read config {}: {e}", path.display())))?;
        let file: Options = serde_json::from_str(&text)
            .map_err(|e| CliError::validation(format!("invalid config {}: {e}", path.display())))?;
        Ok(self.merge(file))
    }

    fn merge(self, file: Options) -> Options {
        Options {
            config: self.config,
            potential: pick(self.potential, file.potential),
            q: pick_vec(self.q, file.q),
            lc: pick(self.lc, file.lc),
            wells: pick(self.wells, file.wells),
            n: pick_vec(self.n, file.n),
            v0: pick(self.v0, file.v0),
            omega: pick(self.omega, file.omega),
            a: pick(self.a, file.a),
            x1: pick(self.x1, file.x1),
            table: pick(self.table, file.table),
            interp: pick(self.interp, file.interp),
            hbar: pick(self.hbar, file.hbar),
            mass: pick(self.mass, file.mass),
            scale_convention: pick(self.scale_convention, file.scale_convention),
            grid: pick(self.grid, file.grid),
            tol: pick(self.tol, file.tol),
            ratio_tol: pick(self.ratio_tol, file.ratio_tol),
            gap_min: pick(self.gap_min, file.gap_min),
            k: pick_vec(self.k, file.k),
            k_points: pick(self.k_points, file.k_points),
            h: pick_vec(self.h, file.h),
            heuristic_from_chain: self.heuristic_from_chain || file.heuristic_from_chain,
            out: pick(self.out, file.out),
            format: pick(self.format, file.format),
        }
    }

    pub fn format(&self) -> Format {
        self.format.unwrap_or_default()
    }

    pub fn lc_or_default(&self) -> f64 {
        self.lc.unwrap_or(1.0)
    }

    /// The unit system, honouring the scale convention.
    pub fn units(&self, convention: ScaleConvention) -> Result<Units, CliError> {
        let hbar = self.hbar.unwrap_or(1.0);
        match convention {
            ScaleConvention::Natural => Ok(Units { hbar, mass: self.mass.unwrap_or(1.0) }),
            ScaleConvention::UnitEnergy => {
                if self.mass.is_some() {
                    return Err(CliError::validation(
                        "--mass cannot be combined with --scale-convention unit-energy; the mass follows from --hbar and --lc",
                    ));
                }
                let lc = self.lc_or_default();
                Ok(Units { hbar, mass: hbar * hbar / (2.0 * lc * lc) })
            }
        }
    }

    /// Exactly one value of a list option.
    pub fn single<T: Copy>(values: &[T], flag: &str) -> Result<T, CliError> {
        match values {
            [v] => Ok(*v),
            [] => Err(CliError::validation(format!("missing required option --{flag}"))),
            _ => Err(CliError::validation(format!("--{flag} takes a single value for this command"))),
        }
    }

    /// Builds the potential model described by the options.
    pub fn model(&self, units: Units) -> Result<PotentialModel, CliError> {
        let family = self.potential.ok_or_else(|| CliError::validation("missing required option --potential"))?;
        let need = |v: Option<f64>, flag: &str| {
            v.ok_or_else(|| CliError::validation(format!("--potential {family:?} requires --{flag}")))
        };
        let wells = || self.wells.ok_or_else(|| CliError::validation("missing required option --wells"));
        let model = match family {
            Family::Cosine => {
                let q = Self::single(&self.q, "q")?;
                PotentialModel::cosine(q, self.lc_or_default(), wells()?)
            }
            Family::ParabolicChain => PotentialModel::parabolic_chain_with_frequency(
                self.v0.unwrap_or(0.0),
                need(self.omega, "omega")?,
                units.mass,
                need(self.a, "a")?,
                self.x1.unwrap_or(0.0),
                wells()?,
            ),
            Family::Tabulated => {
                let path = self.table.as_ref().ok_or_else(|| CliError::validation("--potential tabulated requires --table"))?;
                let interp = self.interp.map(Interpolation::from).unwrap_or_default();
                let table = Table::from_csv_path(path, interp)
                    .map_err(|e| CliError::io(format!("cannot read table {}: {e}", path.display())))??;
                let model = PotentialModel::tabulated(table)?;
                if let Some(w) = self.wells {
                    if w != model.wells() {
                        return Err(CliError::validation(format!(
                            "--wells {w} does not match the {} minima found in the table",
                            model.wells()
                        )));
                    }
                }
                Ok(model)
            }
        }?;
        Ok(model)
    }
}
