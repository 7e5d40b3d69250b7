use crate::born::{Acceleration, Convention, PotentialSpec, Site, MAX_ORDER};
use std::collections::BTreeMap;
use std::path::PathBuf;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("invalid {field}: {message}")]
    Validation {
        field: &'static str,
        message: String,
    },
}

fn invalid(field: &'static str, message: impl Into<String>) -> ConfigError {
    ConfigError::Validation {
        field,
        message: message.into(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Spacing {
    #[default]
    Linear,
    Log,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyGrid {
    pub e_min: f64,
    pub e_max: f64,
    pub n_points: usize,
    pub spacing: Spacing,
}

impl EnergyGrid {
    /// Grid energies, endpoints exact. A single point sits at `e_min`.
    pub fn energies(&self) -> Vec<f64> {
        let n = self.n_points;
        if n == 1 {
            return vec![self.e_min];
        }
        let last = (n - 1) as f64;
        (0..n)
            .map(|i| {
                if i == 0 {
                    return self.e_min;
                }
                if i == n - 1 {
                    return self.e_max;
                }
                let f = i as f64 / last;
                match self.spacing {
                    Spacing::Linear => self.e_min + f * (self.e_max - self.e_min),
                    Spacing::Log => (self.e_min.ln() + f * (self.e_max / self.e_min).ln()).exp(),
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesOptions {
    pub max_order: usize,
    pub acceleration: Option<Acceleration>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub potential: PotentialSpec,
    pub mass: f64,
    pub grid: EnergyGrid,
    pub series: SeriesOptions,
    pub convention: Convention,
    /// Allows grid energies below a barrier top.
    pub evanescent: bool,
    /// `None` writes to standard output.
    pub output: Option<PathBuf>,
}

const KEYS: &[&str] = &[
    "potential.kind",
    "potential.alpha",
    "potential.position",
    "potential.alphas",
    "potential.positions",
    "potential.height",
    "potential.width",
    "potential.evanescent",
    "mass",
    "grid.e_min",
    "grid.e_max",
    "grid.n_points",
    "grid.spacing",
    "series.max_order",
    "series.acceleration",
    "convention.paper_sign",
];

const DEFAULT_MAX_ORDER: usize = 16;

/// Parses and validates the `key = value` format.
pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    let mut entries: BTreeMap<&'static str, (usize, String)> = BTreeMap::new();
    for (index, raw) in text.lines().enumerate() {
        let line = index + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content.split_once('=').ok_or_else(|| ConfigError::Parse {
            line,
            message: format!("expected `key = value`, got `{content}`"),
        })?;
        let (key, value) = (key.trim(), value.trim());
        let known = KEYS
            .iter()
            .find(|k| **k == key)
            .ok_or_else(|| ConfigError::Parse {
                line,
                message: format!("unknown key `{key}`"),
            })?;
        if value.is_empty() {
            return Err(ConfigError::Parse {
                line,
                message: format!("missing value for `{key}`"),
            });
        }
        if entries.insert(known, (line, value.to_string())).is_some() {
            return Err(ConfigError::Parse {
                line,
                message: format!("duplicate key `{key}`"),
            });
        }
    }
    Entries(entries).build()
}

struct Entries(BTreeMap<&'static str, (usize, String)>);

impl Entries {
    fn raw(&self, key: &'static str) -> Option<&(usize, String)> {
        self.0.get(key)
    }

    fn require(&self, key: &'static str) -> Result<&(usize, String), ConfigError> {
        self.raw(key).ok_or_else(|| invalid(key, "required"))
    }

    fn number(&self, key: &'static str) -> Result<Option<f64>, ConfigError> {
        self.raw(key)
            .map(|(line, v)| parse_number(*line, key, v))
            .transpose()
    }

    fn required_number(&self, key: &'static str) -> Result<f64, ConfigError> {
        let (line, v) = self.require(key)?;
        parse_number(*line, key, v)
    }

    fn list(&self, key: &'static str) -> Result<Vec<f64>, ConfigError> {
        let (line, v) = self.require(key)?;
        v.split(',')
            .map(|item| parse_number(*line, key, item.trim()))
            .collect()
    }

    fn boolean(&self, key: &'static str) -> Result<bool, ConfigError> {
        match self.raw(key) {
            None => Ok(false),
            Some((_, v)) if v == "true" => Ok(true),
            Some((_, v)) if v == "false" => Ok(false),
            Some((line, v)) => Err(ConfigError::Parse {
                line: *line,
                message: format!("`{key}` must be true or false, got `{v}`"),
            }),
        }
    }

    fn reject_unused(&self, keys: &[&'static str], kind: &str) -> Result<(), ConfigError> {
        for &key in keys {
            if self.raw(key).is_some() {
                return Err(invalid(key, format!("not used by potential.kind = {kind}")));
            }
        }
        Ok(())
    }

    fn potential(&self) -> Result<PotentialSpec, ConfigError> {
        let (line, kind) = self.require("potential.kind")?;
        let spec = match kind.as_str() {
            "delta" => {
                self.reject_unused(
                    &[
                        "potential.alphas",
                        "potential.positions",
                        "potential.height",
                        "potential.width",
                    ],
                    kind,
                )?;
                let alpha = self.required_number("potential.alpha")?;
                let position = self.number("potential.position")?.unwrap_or(0.0);
                PotentialSpec::delta(alpha, position)
            }
            "comb" => {
                self.reject_unused(
                    &[
                        "potential.alpha",
                        "potential.position",
                        "potential.height",
                        "potential.width",
                    ],
                    kind,
                )?;
                let alphas = self.list("potential.alphas")?;
                let positions = self.list("potential.positions")?;
                if alphas.len() != positions.len() {
                    return Err(invalid(
                        "potential.positions",
                        format!(
                            "{} positions for {} strengths",
                            positions.len(),
                            alphas.len()
                        ),
                    ));
                }
                let sites = alphas
                    .into_iter()
                    .zip(positions)
                    .map(|(a, x)| Site::new(a, x))
                    .collect();
                return PotentialSpec::comb(sites)
                    .map_err(|e| invalid("potential.positions", e.to_string()));
            }
            "barrier" => {
                self.reject_unused(
                    &[
                        "potential.alpha",
                        "potential.position",
                        "potential.alphas",
                        "potential.positions",
                    ],
                    kind,
                )?;
                let height = self.required_number("potential.height")?;
                let width = self.required_number("potential.width")?;
                if width <= 0.0 {
                    return Err(invalid("potential.width", "must be > 0"));
                }
                PotentialSpec::barrier(height, width)
            }
            other => {
                return Err(ConfigError::Parse {
                    line: *line,
                    message: format!(
                        "potential.kind must be delta, comb or barrier, got `{other}`"
                    ),
                })
            }
        };
        spec.map_err(|e| invalid("potential.kind", e.to_string()))
    }

    fn build(self) -> Result<RunConfig, ConfigError> {
        let potential = self.potential()?;

        let mass = self.required_number("mass")?;
        if mass <= 0.0 {
            return Err(invalid("mass", "must be > 0"));
        }

        let e_min = self.required_number("grid.e_min")?;
        if e_min <= 0.0 {
            return Err(invalid("grid.e_min", "must be > 0"));
        }
        let e_max = self.required_number("grid.e_max")?;
        let (line, raw) = self.require("grid.n_points")?;
        let n_points = parse_count(*line, "grid.n_points", raw)?;
        if n_points < 1 {
            return Err(invalid("grid.n_points", "must be >= 1"));
        }
        if e_max <= e_min && !(n_points == 1 && e_max == e_min) {
            return Err(invalid("grid.e_max", "must be > grid.e_min"));
        }
        let spacing = match self.raw("grid.spacing") {
            None => Spacing::default(),
            Some((_, v)) if v == "linear" => Spacing::Linear,
            Some((_, v)) if v == "log" => Spacing::Log,
            Some((line, v)) => {
                return Err(ConfigError::Parse {
                    line: *line,
                    message: format!("grid.spacing must be linear or log, got `{v}`"),
                })
            }
        };

        let evanescent = self.boolean("potential.evanescent")?;
        let top = potential.step_height();
        if !evanescent && e_min <= top {
            return Err(invalid(
                "grid.e_min",
                format!("must exceed the barrier height {top} unless potential.evanescent = true"),
            ));
        }

        let max_order = match self.raw("series.max_order") {
            None => DEFAULT_MAX_ORDER,
            Some((line, v)) => parse_count(*line, "series.max_order", v)?,
        };
        if max_order > MAX_ORDER {
            return Err(invalid(
                "series.max_order",
                format!("must be <= {MAX_ORDER}"),
            ));
        }
        let acceleration = match self.raw("series.acceleration") {
            None => None,
            Some((_, v)) if v == "none" => None,
            Some((_, v)) if v == "shanks" => Some(Acceleration::Shanks),
            Some((_, v)) if v == "pade" => Some(Acceleration::Pade),
            Some((line, v)) => {
                return Err(ConfigError::Parse {
                    line: *line,
                    message: format!("series.acceleration must be none, shanks or pade, got `{v}`"),
                })
            }
        };
        if acceleration.is_some() && max_order < 2 {
            return Err(invalid("series.max_order", "acceleration needs at least 2"));
        }

        let convention = if self.boolean("convention.paper_sign")? {
            Convention::Paper
        } else {
            Convention::Internal
        };

        Ok(RunConfig {
            potential,
            mass,
            grid: EnergyGrid {
                e_min,
                e_max,
                n_points,
                spacing,
            },
            series: SeriesOptions {
                max_order,
                acceleration,
            },
            convention,
            evanescent,
            output: None,
        })
    }
}

fn parse_number(line: usize, key: &str, value: &str) -> Result<f64, ConfigError> {
    match value.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(ConfigError::Parse {
            line,
            message: format!("`{key}` expects a finite number, got `{value}`"),
        }),
    }
}

fn parse_count(line: usize, key: &str, value: &str) -> Result<usize, ConfigError> {
    value.parse::<usize>().map_err(|_| ConfigError::Parse {
        line,
        message: format!("`{key}` expects a non-negative integer, got `{value}`"),
    })
}
