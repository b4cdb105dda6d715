//! Run configuration: an optional JSON file merged with command-line flags.

use std::path::{Path, PathBuf};

use serde::Deserialize;
use sphsep::{SystemKind, SystemSpec};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    Csv,
    Json,
    Svg,
    Text,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Scaling {
    #[default]
    HbarScaled,
    Raw,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Etilde {
    #[default]
    Unit,
    Exact,
}

/// Contents of a `--config` file; every field may also come from a flag.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(default, deny_unknown_fields, rename_all = "kebab-case")]
pub struct FileConfig {
    pub system: Option<SystemSpec>,
    pub degree: Option<usize>,
    pub classes: Option<Vec<String>>,
    pub seed: Option<u64>,
    pub output: Option<Format>,
    pub out: Option<PathBuf>,
    pub scaling: Option<Scaling>,
    pub etilde_mode: Option<Etilde>,
    pub center: Option<[f64; 2]>,
    pub radius: Option<f64>,
    pub steps: Option<usize>,
    pub index: Option<usize>,
    pub permute: Option<Vec<usize>>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))
    }
}

pub const DEFAULT_SEED: u64 = 42;

/// Shape parameters used when a system is named without `--params`.
pub fn default_params(kind: SystemKind) -> Vec<f64> {
    match kind {
        SystemKind::Ellipsoidal => vec![1.0, 2.0, 5.0, 8.0],
        SystemKind::Prolate | SystemKind::Oblate => vec![2.4],
        SystemKind::Lame | SystemKind::S2Ellipsoidal => vec![0.0, 1.0, 2.4],
        _ => Vec::new(),
    }
}

pub fn resolve_system(name: Option<&str>, params: Option<&[f64]>, file: Option<&SystemSpec>) -> Result<SystemSpec, CliError> {
    let spec = match (name, file) {
        (Some(n), _) => {
            let kind: SystemKind = n.parse().map_err(|e: sphsep::Error| CliError::Validation(e.to_string()))?;
            let params = params.map(|p| p.to_vec()).unwrap_or_else(|| default_params(kind));
            SystemSpec::new(kind, params)?
        }
        (None, Some(s)) => match params {
            Some(p) => SystemSpec::new(s.kind, p.to_vec())?,
            None => s.clone(),
        },
        (None, None) => return Err(CliError::Validation("no system given (use --system or a config file)".into())),
    };
    Ok(spec)
}

/// Parses class filters such as "0101".
pub fn parse_classes(raw: &[String]) -> Result<Vec<Vec<u8>>, CliError> {
    raw.iter()
        .map(|s| {
            s.chars()
                .map(|c| match c {
                    '0' => Ok(0),
                    '1' => Ok(1),
                    _ => Err(CliError::Validation(format!("class {s:?} must be a string of 0 and 1"))),
                })
                .collect()
        })
        .collect()
}

/// Fully resolved settings shared by all commands.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub system: SystemSpec,
    pub degree: usize,
    pub classes: Option<Vec<Vec<u8>>>,
    pub seed: u64,
    pub format: Option<Format>,
    pub out: Option<PathBuf>,
    pub scaling: Scaling,
    pub etilde: Etilde,
}
