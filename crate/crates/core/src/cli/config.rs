//! Experiment configuration: a flat `key = value` file, lists comma-separated,
//! `#` starts a comment.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::funcspace::{Exponent, make_test_suite, suite_function};
use crate::korovkin::TheoremId;
use crate::operators::{OperatorKind, Resolution, axioms};

/// Exponents the sweeps are allowed to use.
pub const EXPONENT_MENU: [f64; 5] = [1.0, 1.5, 2.0, 4.0, f64::INFINITY];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConfigError {
    #[error("cannot read config {path}: {message}")]
    Io { path: String, message: String },
    #[error("line {line}: expected `key = value`, got `{text}`")]
    Syntax { line: usize, text: String },
    #[error("unknown field `{0}`")]
    UnknownField(String),
    #[error("field `{0}` given twice")]
    Duplicate(String),
    #[error("field `{field}`: {message}")]
    Invalid {
        field: &'static str,
        message: String,
    },
}

impl ConfigError {
    /// The offending field, when there is one.
    pub fn field(&self) -> Option<&str> {
        match self {
            ConfigError::UnknownField(f) | ConfigError::Duplicate(f) => Some(f),
            ConfigError::Invalid { field, .. } => Some(field),
            _ => None,
        }
    }
}

fn invalid(field: &'static str, message: impl Into<String>) -> ConfigError {
    ConfigError::Invalid {
        field,
        message: message.into(),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub experiment: String,
    pub operators: Vec<OperatorKind>,
    pub degrees: Vec<usize>,
    pub exponents: Vec<Exponent>,
    pub functions: Vec<String>,
    pub theorems: Vec<TheoremId>,
    pub grid_m: usize,
    pub sup_samples: usize,
    pub choquet_samples: usize,
    pub seed: u64,
    pub output_path: PathBuf,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            experiment: "default".into(),
            operators: OperatorKind::FAMILIES.to_vec(),
            degrees: (3..=9).map(|k| 1usize << k).collect(),
            exponents: EXPONENT_MENU
                .iter()
                .map(|&p| Exponent::new(p).expect("menu"))
                .collect(),
            functions: make_test_suite()
                .iter()
                .map(|f| f.id().to_string())
                .collect(),
            theorems: TheoremId::ALL.to_vec(),
            grid_m: 4096,
            sup_samples: Resolution::default().sup_samples,
            choquet_samples: Resolution::default().choquet_samples,
            seed: axioms::DEFAULT_SEED,
            output_path: PathBuf::from("results.csv"),
        }
    }
}

const FIELDS: [&str; 11] = [
    "experiment",
    "operators",
    "degrees",
    "exponents",
    "functions",
    "theorems",
    "grid_m",
    "sup_samples",
    "choquet_samples",
    "seed",
    "output_path",
];

fn list(value: &str) -> Vec<&str> {
    value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .collect()
}

fn integer<T: std::str::FromStr>(field: &'static str, value: &str) -> Result<T, ConfigError> {
    value
        .parse()
        .map_err(|_| invalid(field, format!("`{value}` is not a nonnegative integer")))
}

impl ExperimentConfig {
    /// Parses a config; fields left out keep their defaults.
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut config = ExperimentConfig::default();
        let mut seen = BTreeSet::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| ConfigError::Syntax {
                line: i + 1,
                text: line.to_string(),
            })?;
            let (key, value) = (key.trim(), value.trim());
            let Some(&field) = FIELDS.iter().find(|&&f| f == key) else {
                return Err(ConfigError::UnknownField(key.to_string()));
            };
            if !seen.insert(field) {
                return Err(ConfigError::Duplicate(field.to_string()));
            }
            config.set(field, value)?;
        }
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|e| ConfigError::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        })?;
        Self::parse(&text)
    }

    fn set(&mut self, field: &'static str, value: &str) -> Result<(), ConfigError> {
        match field {
            "experiment" => self.experiment = value.to_string(),
            "operators" => {
                self.operators = list(value)
                    .into_iter()
                    .map(|s| {
                        s.parse()
                            .map_err(|e: crate::Error| invalid(field, e.to_string()))
                    })
                    .collect::<Result<_, _>>()?;
            }
            "degrees" => {
                self.degrees = list(value)
                    .into_iter()
                    .map(|s| integer(field, s))
                    .collect::<Result<_, _>>()?;
            }
            "exponents" => {
                self.exponents = list(value)
                    .into_iter()
                    .map(|s| {
                        s.parse()
                            .map_err(|e: crate::Error| invalid(field, e.to_string()))
                    })
                    .collect::<Result<_, _>>()?;
            }
            "functions" => self.functions = list(value).into_iter().map(String::from).collect(),
            "theorems" => {
                self.theorems = list(value)
                    .into_iter()
                    .map(|s| {
                        s.parse()
                            .map_err(|e: crate::Error| invalid(field, e.to_string()))
                    })
                    .collect::<Result<_, _>>()?;
            }
            "grid_m" => self.grid_m = integer(field, value)?,
            "sup_samples" => self.sup_samples = integer(field, value)?,
            "choquet_samples" => self.choquet_samples = integer(field, value)?,
            "seed" => self.seed = integer(field, value)?,
            "output_path" => self.output_path = PathBuf::from(value),
            _ => unreachable!("field list is closed"),
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.experiment.is_empty() || self.experiment.contains([',', '\n', '"']) {
            return Err(invalid(
                "experiment",
                "must be nonempty without commas or quotes",
            ));
        }
        if self.operators.is_empty() {
            return Err(invalid("operators", "must not be empty"));
        }
        if self.degrees.is_empty() {
            return Err(invalid("degrees", "must not be empty"));
        }
        if self.degrees[0] == 0 {
            return Err(invalid("degrees", "degrees must be at least 1"));
        }
        if self.degrees.windows(2).any(|w| w[0] >= w[1]) {
            return Err(invalid("degrees", "must be strictly increasing"));
        }
        if self.exponents.is_empty() {
            return Err(invalid("exponents", "must not be empty"));
        }
        for p in &self.exponents {
            if !EXPONENT_MENU.contains(&p.value()) {
                return Err(invalid(
                    "exponents",
                    format!("{p} is not one of 1, 1.5, 2, 4, inf"),
                ));
            }
        }
        if self.functions.is_empty() {
            return Err(invalid("functions", "must not be empty"));
        }
        for id in &self.functions {
            if suite_function(id).is_none() {
                return Err(invalid("functions", format!("unknown function `{id}`")));
            }
        }
        if self.theorems.is_empty() {
            return Err(invalid("theorems", "must not be empty"));
        }
        if self.grid_m < 256 {
            return Err(invalid(
                "grid_m",
                format!("must be at least 256, got {}", self.grid_m),
            ));
        }
        if self.sup_samples < 1 {
            return Err(invalid("sup_samples", "must be at least 1"));
        }
        if self.choquet_samples < 16 {
            return Err(invalid("choquet_samples", "must be at least 16"));
        }
        if self.output_path.as_os_str().is_empty() {
            return Err(invalid("output_path", "must not be empty"));
        }
        Ok(())
    }

    pub fn resolution(&self) -> Resolution {
        Resolution {
            sup_samples: self.sup_samples,
            choquet_samples: self.choquet_samples,
        }
    }

    /// The report is written next to the CSV as `<stem>_report.txt`.
    pub fn report_path(&self) -> PathBuf {
        report_path_for(&self.output_path)
    }
}

pub fn report_path_for(csv: &Path) -> PathBuf {
    let stem = csv
        .file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or("results");
    csv.with_file_name(format!("{stem}_report.txt"))
}
