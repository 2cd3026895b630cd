//! Experiment configuration: a TOML-serialisable description of what to
//! evaluate, with presets for the benchmark tables and figures.

use std::collections::BTreeMap;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExperimentKind {
    Table1,
    Table2,
    Table3,
    Fig1,
    Fig2,
    Single,
}

impl ExperimentKind {
    pub fn parse(name: &str) -> Result<Self, CliError> {
        match name {
            "table1" => Ok(Self::Table1),
            "table2" => Ok(Self::Table2),
            "table3" => Ok(Self::Table3),
            "fig1" => Ok(Self::Fig1),
            "fig2" => Ok(Self::Fig2),
            "single" => Ok(Self::Single),
            other => Err(CliError::Validation(format!(
                "unknown experiment `{other}` (expected table1|table2|table3|fig1|fig2|single)"
            ))),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::Table1 => "table1",
            Self::Table2 => "table2",
            Self::Table3 => "table3",
            Self::Fig1 => "fig1",
            Self::Fig2 => "fig2",
            Self::Single => "single",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightSpec {
    /// legendre | chebyshev1 | jacobi
    pub family: String,
    #[serde(default)]
    pub alpha: f64,
    #[serde(default)]
    pub beta: f64,
    #[serde(default = "default_a")]
    pub a: f64,
    #[serde(default = "default_b")]
    pub b: f64,
}

fn default_a() -> f64 {
    -1.0
}

fn default_b() -> f64 {
    1.0
}

impl WeightSpec {
    pub fn legendre() -> Self {
        Self {
            family: "legendre".into(),
            alpha: 0.0,
            beta: 0.0,
            a: -1.0,
            b: 1.0,
        }
    }

    pub fn chebyshev1() -> Self {
        Self {
            family: "chebyshev1".into(),
            ..Self::legendre()
        }
    }

    pub fn build(&self) -> Result<fpquad::WeightFamily, CliError> {
        match self.family.as_str() {
            "legendre" => Ok(fpquad::WeightFamily::legendre(self.a, self.b)?),
            "chebyshev1" => Ok(fpquad::WeightFamily::chebyshev1(self.a, self.b)?),
            "jacobi" => Ok(fpquad::WeightFamily::jacobi(
                self.alpha, self.beta, self.a, self.b,
            )?),
            other => Err(CliError::Validation(format!(
                "weight.family: unknown family `{other}` (expected legendre|chebyshev1|jacobi)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntegrandSpec {
    pub name: String,
    /// Named parameters, e.g. c = 1.21 or lambda = 5.0.
    #[serde(default)]
    pub params: BTreeMap<String, f64>,
}

impl IntegrandSpec {
    pub fn named(name: &str) -> Self {
        Self {
            name: name.into(),
            params: BTreeMap::new(),
        }
    }

    pub fn with_param(mut self, key: &str, value: f64) -> Self {
        self.params.insert(key.into(), value);
        self
    }

    pub fn build(&self) -> Result<fpquad::Integrand, CliError> {
        crate::registry::builtin(&self.name, &self.params)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "lowercase")]
pub enum NPolicy {
    /// One fixed interpolation node count.
    Fixed { n: usize },
    /// A fixed list of node counts (one row per entry).
    List { values: Vec<usize> },
    /// Search [lo, hi] with the given criterion.
    Search {
        lo: usize,
        hi: usize,
        criterion: SearchKind,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SearchKind {
    /// Minimise the error against the known exact value.
    Reference,
    /// Successive-difference plateau detection.
    Stabilization,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub experiment: ExperimentKind,
    pub weight: WeightSpec,
    pub integrand: IntegrandSpec,
    pub xi: f64,
    pub p: usize,
    /// Gauss orders, one block of rows per entry.
    pub m: Vec<usize>,
    pub n_policy: NPolicy,
    /// Singularity grid for the fig1 sweep.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub xi_grid: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
    pub format: OutputFormat,
}

impl ExperimentConfig {
    /// The canonical configuration for a named experiment.
    pub fn preset(kind: ExperimentKind) -> Result<Self, CliError> {
        let config = match kind {
            ExperimentKind::Table1 => Self {
                experiment: kind,
                weight: WeightSpec::legendre(),
                integrand: IntegrandSpec::named("exp"),
                xi: 1e-5,
                p: 0, // the run sweeps p = 0 and 1
                m: vec![7, 15],
                n_policy: NPolicy::List {
                    values: vec![4, 8, 11, 12, 24, 31, 44, 59],
                },
                xi_grid: None,
                output: None,
                format: OutputFormat::Csv,
            },
            ExperimentKind::Table2 => Self {
                experiment: kind,
                weight: WeightSpec::legendre(),
                integrand: IntegrandSpec::named("inv-sqrt-pole").with_param("c", 1.21),
                xi: 1e-5,
                p: 1,
                m: vec![3, 9, 15, 21, 27, 33, 39, 45],
                n_policy: NPolicy::Search {
                    lo: 2,
                    hi: 55,
                    criterion: SearchKind::Reference,
                },
                xi_grid: None,
                output: None,
                format: OutputFormat::Csv,
            },
            ExperimentKind::Table3 => Self {
                experiment: kind,
                weight: WeightSpec::chebyshev1(),
                // the run sweeps lambda over {1.5, 2.5, 5.0}
                integrand: IntegrandSpec::named("rational-pole").with_param("lambda", 5.0),
                xi: 0.25,
                p: 1,
                m: (3..=12).collect(),
                n_policy: NPolicy::Search {
                    lo: 2,
                    hi: 30,
                    criterion: SearchKind::Reference,
                },
                xi_grid: None,
                output: None,
                format: OutputFormat::Csv,
            },
            ExperimentKind::Fig1 => Self {
                experiment: kind,
                weight: WeightSpec::legendre(),
                integrand: IntegrandSpec::named("exp"),
                xi: 1e-5,
                p: 0,
                m: vec![7],
                n_policy: NPolicy::Fixed { n: 8 },
                xi_grid: Some(fig1_grid()?),
                output: None,
                format: OutputFormat::Csv,
            },
            ExperimentKind::Fig2 => Self {
                experiment: kind,
                weight: WeightSpec::legendre(),
                integrand: IntegrandSpec::named("exp"),
                xi: 1e-5,
                p: 1,
                m: vec![7, 15],
                n_policy: NPolicy::List {
                    values: (4..=59).collect(),
                },
                xi_grid: None,
                output: None,
                format: OutputFormat::Csv,
            },
            ExperimentKind::Single => Self {
                experiment: kind,
                weight: WeightSpec::legendre(),
                integrand: IntegrandSpec::named("exp"),
                xi: 1e-5,
                p: 0,
                m: vec![7],
                n_policy: NPolicy::Fixed { n: 8 },
                xi_grid: None,
                output: None,
                format: OutputFormat::Csv,
            },
        };
        Ok(config)
    }

    pub fn from_toml(text: &str) -> Result<Self, CliError> {
        let config: Self = toml::from_str(text)
            .map_err(|e| CliError::Validation(format!("config parse error: {e}")))?;
        config.validate()?;
        Ok(config)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string_pretty(self).expect("config serialises")
    }

    /// Field-level validation beyond what deserialisation enforces.
    pub fn validate(&self) -> Result<(), CliError> {
        if self.m.is_empty() {
            return Err(CliError::Validation("m: list must be nonempty".into()));
        }
        if self.m.contains(&0) {
            return Err(CliError::Validation("m: orders must be >= 1".into()));
        }
        self.weight.build()?;
        self.integrand.build()?;
        let (a, b) = (self.weight.a, self.weight.b);
        if !(a < self.xi && self.xi < b) {
            return Err(CliError::Validation(format!(
                "xi: singularity {} outside the open interval ({a}, {b})",
                self.xi
            )));
        }
        match &self.n_policy {
            NPolicy::Fixed { n } => {
                if *n <= self.p {
                    return Err(CliError::Validation(format!(
                        "n_policy.n: need n > p, got n = {n}, p = {}",
                        self.p
                    )));
                }
            }
            NPolicy::List { values } => {
                if values.is_empty() {
                    return Err(CliError::Validation(
                        "n_policy.values: list must be nonempty".into(),
                    ));
                }
                if values.iter().any(|&n| n <= self.p) {
                    return Err(CliError::Validation(format!(
                        "n_policy.values: every n must exceed p = {}",
                        self.p
                    )));
                }
            }
            NPolicy::Search { lo, hi, .. } => {
                if lo > hi {
                    return Err(CliError::Validation(format!(
                        "n_policy: empty search range [{lo}, {hi}]"
                    )));
                }
                if *hi > 200 {
                    return Err(CliError::Validation(format!(
                        "n_policy.hi: search limit {hi} exceeds 200"
                    )));
                }
            }
        }
        if let Some(grid) = &self.xi_grid {
            if grid.is_empty() {
                return Err(CliError::Validation("xi_grid: must be nonempty".into()));
            }
            if grid.iter().any(|&x| !(a < x && x < b)) {
                return Err(CliError::Validation(format!(
                    "xi_grid: every singularity must lie inside ({a}, {b})"
                )));
            }
        }
        Ok(())
    }
}

/// The declared fig1 grid: xi from -0.95 to 0.95 in steps of 0.05, plus the
/// midpoints of adjacent 7-point Gauss-Legendre nodes (the tie rule path).
pub fn fig1_grid() -> Result<Vec<f64>, CliError> {
    let mut grid: Vec<f64> = (0..39).map(|i| -0.95 + 0.05 * i as f64).collect();
    let w = fpquad::WeightFamily::legendre(-1.0, 1.0)?;
    let rule = fpquad::orthogonal::gauss_rule(&w, 7)?;
    grid.extend(
        rule.nodes()
            .windows(2)
            .map(|pair| 0.5 * (pair[0] + pair[1])),
    );
    Ok(grid)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_validate() {
        for kind in [
            ExperimentKind::Table1,
            ExperimentKind::Table2,
            ExperimentKind::Table3,
            ExperimentKind::Fig1,
            ExperimentKind::Fig2,
            ExperimentKind::Single,
        ] {
            let config = ExperimentConfig::preset(kind).unwrap();
            config
                .validate()
                .unwrap_or_else(|e| panic!("{kind:?}: {e}"));
        }
    }

    #[test]
    fn toml_round_trip() {
        let config = ExperimentConfig::preset(ExperimentKind::Table2).unwrap();
        let text = config.to_toml();
        let parsed = ExperimentConfig::from_toml(&text).unwrap();
        assert_eq!(config, parsed);
    }

    #[test]
    fn validation_messages_name_fields() {
        let mut config = ExperimentConfig::preset(ExperimentKind::Single).unwrap();
        config.m.clear();
        let err = config.validate().unwrap_err().to_string();
        assert!(err.starts_with("m:"), "got: {err}");

        let mut config = ExperimentConfig::preset(ExperimentKind::Single).unwrap();
        config.xi = 2.0;
        let err = config.validate().unwrap_err().to_string();
        assert!(err.starts_with("xi:"), "got: {err}");

        let mut config = ExperimentConfig::preset(ExperimentKind::Single).unwrap();
        config.n_policy = NPolicy::Search {
            lo: 5,
            hi: 400,
            criterion: SearchKind::Stabilization,
        };
        let err = config.validate().unwrap_err().to_string();
        assert!(err.contains("n_policy"), "got: {err}");
    }

    #[test]
    fn fig1_grid_contains_midpoints() {
        let grid = fig1_grid().unwrap();
        assert_eq!(grid.len(), 39 + 6);
    }
}
