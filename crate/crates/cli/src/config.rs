//! Run configuration: a single JSON file plus flag overrides, flags winning.
//! Reproducible runs are driven by configs checked into a repository, so every
//! field is optional and defaults are fixed.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use serde::Deserialize;
use wavepacket_core::{Error as CoreError, Grid2D, Mode, PhysicalParams};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
    Pgm,
    Svg,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamsSpec {
    pub mass: f64,
    pub hbar: f64,
    pub waist: f64,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub n: usize,
    pub half_width: f64,
}

/// Raw configuration as read from JSON; `None` means "use the default".
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub params: Option<ParamsSpec>,
    pub mode: Option<String>,
    pub grid: Option<GridSpec>,
    pub times: Option<Vec<f64>>,
    pub output_dir: Option<PathBuf>,
    pub formats: Option<Vec<Format>>,
    pub threshold: Option<f64>,
    pub section_samples: Option<usize>,
    pub streamline_step: Option<f64>,
    pub streamline_max_steps: Option<usize>,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::Config(format!("cannot parse {}: {e}", path.display())))
    }

    /// Apply command-line overrides on top of the file contents.
    pub fn apply_flags(&mut self, flags: &CommonFlags) -> Result<(), CliError> {
        if let Some(mode) = &flags.mode {
            self.mode = Some(mode.clone());
        }
        if let Some(times) = &flags.times {
            let parsed: Result<Vec<f64>, _> =
                times.split(',').map(|s| s.trim().parse::<f64>()).collect();
            self.times = Some(parsed.map_err(|_| {
                CliError::Config(format!("cannot parse time list '{times}'"))
            })?);
        }
        if let Some(grid) = &flags.grid {
            let (n, hw) = grid
                .split_once(',')
                .ok_or_else(|| CliError::Config(format!("grid must be N,HALFWIDTH, got '{grid}'")))?;
            self.grid = Some(GridSpec {
                n: n.trim()
                    .parse()
                    .map_err(|_| CliError::Config(format!("cannot parse grid size '{n}'")))?,
                half_width: hw
                    .trim()
                    .parse()
                    .map_err(|_| CliError::Config(format!("cannot parse half width '{hw}'")))?,
            });
        }
        if let Some(out) = &flags.out {
            self.output_dir = Some(out.clone());
        }
        if let Some(threshold) = flags.threshold {
            self.threshold = Some(threshold);
        }
        Ok(())
    }

    pub fn physical_params(&self) -> Result<PhysicalParams, CliError> {
        match &self.params {
            Some(p) => PhysicalParams::new(p.mass, p.hbar, p.waist).map_err(CliError::from_core),
            None => Ok(PhysicalParams::default()),
        }
    }

    pub fn mode(&self) -> Result<Mode, CliError> {
        match &self.mode {
            Some(s) => {
                let mode: Mode = s.parse().map_err(CliError::from_core)?;
                if !mode.is_two_dimensional() {
                    return Err(CliError::Invariant(
                        "the command line only drives two-dimensional modes".into(),
                    ));
                }
                Ok(mode)
            }
            None => Ok(Mode::LaguerreGauss { ell: 1 }),
        }
    }

    /// Resolve the grid; without an explicit spec the window is
    /// `default_half_width_factor * w0` on 256^2 points.
    pub fn grid(
        &self,
        params: &PhysicalParams,
        default_half_width_factor: f64,
    ) -> Result<Grid2D, CliError> {
        let spec = self.grid.unwrap_or(GridSpec {
            n: 256,
            half_width: default_half_width_factor * params.waist,
        });
        Grid2D::new(spec.half_width, spec.n, spec.n).map_err(CliError::from_core)
    }

    pub fn times_or(&self, default: Vec<f64>) -> Result<Vec<f64>, CliError> {
        let times = self.times.clone().unwrap_or(default);
        if let Some(bad) = times.iter().find(|t| !t.is_finite()) {
            return Err(CliError::Invariant(format!("times must be finite, got {bad}")));
        }
        Ok(times)
    }

    pub fn output_dir(&self) -> PathBuf {
        self.output_dir.clone().unwrap_or_else(|| PathBuf::from("out"))
    }

    pub fn formats(&self) -> BTreeSet<Format> {
        match &self.formats {
            Some(list) => list.iter().copied().collect(),
            None => [Format::Csv, Format::Json, Format::Pgm, Format::Svg].into(),
        }
    }

    pub fn threshold(&self) -> f64 {
        self.threshold.unwrap_or(1e-8)
    }

    pub fn section_samples(&self) -> usize {
        self.section_samples.unwrap_or(129)
    }

    pub fn streamline_step(&self, params: &PhysicalParams) -> f64 {
        self.streamline_step.unwrap_or(0.01 * params.waist)
    }

    pub fn streamline_max_steps(&self) -> usize {
        self.streamline_max_steps.unwrap_or(4000)
    }
}

/// Flags shared by every subcommand; each one overrides the matching config
/// field.
#[derive(Debug, Clone, clap::Args)]
pub struct CommonFlags {
    /// JSON configuration file.
    #[arg(long)]
    pub config: Option<PathBuf>,

    /// Mode selector: hg:MU,NU or lg:ELL.
    #[arg(long)]
    pub mode: Option<String>,

    /// Comma-separated list of times.
    #[arg(long = "t", value_name = "LIST", allow_hyphen_values = true)]
    pub times: Option<String>,

    /// Grid as N,HALFWIDTH (N a power of two).
    #[arg(long, value_name = "N,HW")]
    pub grid: Option<String>,

    /// Output directory (created if missing).
    #[arg(long = "out", value_name = "DIR")]
    pub out: Option<PathBuf>,

    /// Oracle failure threshold for propagate-check.
    #[arg(long)]
    pub threshold: Option<f64>,
}

impl CommonFlags {
    pub fn resolve(&self) -> Result<RunConfig, CliError> {
        let mut config = match &self.config {
            Some(path) => RunConfig::load(path)?,
            None => RunConfig::default(),
        };
        config.apply_flags(self)?;
        Ok(config)
    }
}

impl CliError {
    pub fn from_core(err: CoreError) -> Self {
        match err {
            CoreError::InvalidArgument(msg) => CliError::Config(msg),
            other => CliError::Invariant(other.to_string()),
        }
    }
}
