//! Command-line flags, the optional JSON config file, and their resolution
//! into a [`RunConfig`].

use std::fs;
use std::path::PathBuf;

use catdilemma::{ClassFilter, Model};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;

use crate::error::CliError;

#[derive(Debug, Parser)]
#[command(
    name = "catdilemma",
    version,
    about = "Simulate the Cat's Dilemma in classical and quantum strategy spaces"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sample strategies and write one record per strategy (CSV or JSON lines).
    Sample(Flags),
    /// Area fractions of the frequency triangle, empirical and/or exact.
    Coverage(Flags),
    /// Decide whether an optimal strategy of a class exists at a frequency triple.
    Oracle(OracleArgs),
    /// Render ternary SVG panels of optimal strategies.
    Figure(Flags),
    /// The achievability table with published values and deltas.
    Report(Flags),
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    /// Frequency of the pair {1, 2}.
    #[arg(allow_negative_numbers = true)]
    pub q0: f64,
    /// Frequency of the pair {0, 2}.
    #[arg(allow_negative_numbers = true)]
    pub q1: f64,
    /// Frequency of the pair {0, 1}.
    #[arg(allow_negative_numbers = true)]
    pub q2: f64,
    #[command(flatten)]
    pub flags: Flags,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModelArg {
    Classical,
    Prequant,
    Quant,
    All,
}

impl ModelArg {
    pub fn models(self) -> Vec<Model> {
        match self {
            ModelArg::Classical => vec![Model::Classical],
            ModelArg::Prequant => vec![Model::Prequant],
            ModelArg::Quant => vec![Model::Quant],
            ModelArg::All => Model::ALL.to_vec(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ClassArg {
    /// Every optimal strategy.
    All,
    Intransitive,
    Transitive,
    /// The three filters above, one after the other.
    AllThree,
}

impl ClassArg {
    pub fn filters(self) -> Vec<ClassFilter> {
        match self {
            ClassArg::All => vec![ClassFilter::All],
            ClassArg::Intransitive => vec![ClassFilter::Intransitive],
            ClassArg::Transitive => vec![ClassFilter::Transitive],
            ClassArg::AllThree => ClassFilter::EACH.to_vec(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MethodArg {
    Empirical,
    Oracle,
    Both,
}

impl MethodArg {
    pub fn empirical(self) -> bool {
        self != MethodArg::Oracle
    }

    pub fn oracle(self) -> bool {
        self != MethodArg::Empirical
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FormatArg {
    Csv,
    Json,
    Svg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Labels {
    /// Foods 0, 1 and 2.
    #[default]
    Foods,
    /// Candidates A, B and C.
    Electoral,
}

/// Flags shared by every subcommand. Each may also come from `--config`.
#[derive(Debug, Clone, Default, Args)]
pub struct Flags {
    #[arg(long)]
    pub model: Option<ModelArg>,
    #[arg(long)]
    pub class: Option<ClassArg>,
    /// Number of sampled strategies per model.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub samples: Option<u64>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Grid resolution R; the triangle is cut into R² cells.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub grid: Option<u64>,
    #[arg(long)]
    pub method: Option<MethodArg>,
    /// Output file, or directory when a figure has several panels.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub format: Option<FormatArg>,
    /// JSON file with any of the other flags; flags given on the command line win.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub labels: Option<Labels>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    model: Option<ModelArg>,
    class: Option<ClassArg>,
    samples: Option<u64>,
    seed: Option<u64>,
    grid: Option<u64>,
    method: Option<MethodArg>,
    out: Option<PathBuf>,
    format: Option<FormatArg>,
    labels: Option<Labels>,
}

impl Flags {
    /// Fills unset flags from the config file, if one is named.
    pub fn merged(self) -> Result<Flags, CliError> {
        let Some(path) = &self.config else {
            return Ok(self);
        };
        let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        let file: ConfigFile = serde_json::from_str(&text)
            .map_err(|e| CliError::usage(format!("{}: {e}", path.display())))?;
        Ok(Flags {
            model: self.model.or(file.model),
            class: self.class.or(file.class),
            samples: self.samples.or(file.samples),
            seed: self.seed.or(file.seed),
            grid: self.grid.or(file.grid),
            method: self.method.or(file.method),
            out: self.out.or(file.out),
            format: self.format.or(file.format),
            config: self.config,
            labels: self.labels.or(file.labels),
        })
    }
}

/// Flags after merging and defaulting, with domain types in place of the raw
/// flag values.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub model: ModelArg,
    pub classes: Vec<ClassFilter>,
    pub samples: usize,
    pub seed: u64,
    /// `None` leaves each method at its own default resolution.
    pub grid: Option<usize>,
    pub method: MethodArg,
    pub out: Option<PathBuf>,
    pub format: Option<FormatArg>,
    pub labels: Labels,
}

pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_ORACLE_GRID: usize = 256;
pub const DEFAULT_EMPIRICAL_GRID: usize = 100;

impl RunConfig {
    pub fn resolve(flags: Flags, default_samples: usize) -> Result<Self, CliError> {
        let flags = flags.merged()?;
        let positive = |name: &str, v: Option<u64>| match v {
            Some(0) => Err(CliError::usage(format!("{name} must be at least 1"))),
            Some(v) => usize::try_from(v)
                .map(Some)
                .map_err(|_| CliError::usage(format!("{name} is too large"))),
            None => Ok(None),
        };
        Ok(RunConfig {
            model: flags.model.unwrap_or(ModelArg::All),
            classes: flags.class.unwrap_or(ClassArg::All).filters(),
            samples: positive("samples", flags.samples)?.unwrap_or(default_samples),
            seed: flags.seed.unwrap_or(DEFAULT_SEED),
            grid: positive("grid", flags.grid)?,
            method: flags.method.unwrap_or(MethodArg::Both),
            out: flags.out,
            format: flags.format,
            labels: flags.labels.unwrap_or_default(),
        })
    }

    pub fn models(&self) -> Vec<Model> {
        self.model.models()
    }

    pub fn oracle_grid(&self) -> usize {
        self.grid.unwrap_or(DEFAULT_ORACLE_GRID)
    }

    pub fn empirical_grid(&self) -> usize {
        self.grid.unwrap_or(DEFAULT_EMPIRICAL_GRID)
    }
}

pub fn model_from_name(name: &str) -> Option<Model> {
    Model::ALL.into_iter().find(|m| m.name() == name)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn config_file(body: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        writeln!(f, "{body}").unwrap();
        f
    }

    fn with_config(f: &tempfile::NamedTempFile) -> Flags {
        Flags {
            config: Some(f.path().to_path_buf()),
            ..Flags::default()
        }
    }

    #[test]
    fn flags_win_over_config() {
        let f = config_file(r#"{"model": "quant", "seed": 9, "class": "all-three"}"#);
        let flags = Flags {
            seed: Some(3),
            ..with_config(&f)
        };
        let cfg = RunConfig::resolve(flags, 10).unwrap();
        assert_eq!(cfg.model, ModelArg::Quant);
        assert_eq!(cfg.seed, 3);
        assert_eq!(cfg.classes, ClassFilter::EACH.to_vec());
        assert_eq!(cfg.samples, 10);
    }

    #[test]
    fn config_errors_map_to_exit_codes() {
        let missing = Flags {
            config: Some(PathBuf::from("/nonexistent/catdilemma.json")),
            ..Flags::default()
        };
        assert_eq!(RunConfig::resolve(missing, 1).unwrap_err().exit_code(), 2);
        let f = config_file(r#"{"model": "quantum"}"#);
        assert_eq!(
            RunConfig::resolve(with_config(&f), 1)
                .unwrap_err()
                .exit_code(),
            1
        );
        let f = config_file(r#"{"colour": "red"}"#);
        assert_eq!(
            RunConfig::resolve(with_config(&f), 1)
                .unwrap_err()
                .exit_code(),
            1
        );
    }

    #[test]
    fn zero_from_config_is_rejected() {
        let f = config_file(r#"{"grid": 0}"#);
        assert_eq!(
            RunConfig::resolve(with_config(&f), 1)
                .unwrap_err()
                .exit_code(),
            1
        );
    }

    #[test]
    fn grid_defaults_depend_on_method() {
        let cfg = RunConfig::resolve(Flags::default(), 1).unwrap();
        assert_eq!((cfg.oracle_grid(), cfg.empirical_grid()), (256, 100));
        let cfg = RunConfig::resolve(
            Flags {
                grid: Some(7),
                ..Flags::default()
            },
            1,
        )
        .unwrap();
        assert_eq!((cfg.oracle_grid(), cfg.empirical_grid()), (7, 7));
    }
}
