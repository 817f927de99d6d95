//! Flat `key = value` experiment files with `[section]` headers.
//!
//! Keys before the first header belong to `[experiment]`. Every key is
//! checked against a schema while parsing, so a bad value is reported with
//! its line number before any experiment runs.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum ConfigError {
    #[error("config file `{0}` not found")]
    MissingFile(PathBuf),
    #[error("{path}:{line}: unknown key `{key}` in [{section}]")]
    UnknownKey {
        path: String,
        line: usize,
        section: String,
        key: String,
    },
    #[error("{path}:{line}: unknown section [{section}]")]
    UnknownSection { path: String, line: usize, section: String },
    #[error("{path}:{line}: `{key}` {message}")]
    TypeError {
        path: String,
        line: usize,
        key: String,
        message: String,
    },
    #[error("{path}:{line}: {message}")]
    Syntax { path: String, line: usize, message: String },
    #[error("{path}: missing `kind` in [experiment]")]
    MissingKind { path: String },
    #[error("cannot read `{path}`: {message}")]
    Io { path: String, message: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExperimentKind {
    PumVerify,
    PumThroughput,
    Bnn,
    Mensa,
    UpmemGemv,
    Roofline,
}

impl ExperimentKind {
    const NAMES: [(&'static str, ExperimentKind); 6] = [
        ("pum-verify", ExperimentKind::PumVerify),
        ("pum-throughput", ExperimentKind::PumThroughput),
        ("bnn", ExperimentKind::Bnn),
        ("mensa", ExperimentKind::Mensa),
        ("upmem-gemv", ExperimentKind::UpmemGemv),
        ("roofline", ExperimentKind::Roofline),
    ];

    pub fn parse(s: &str) -> Option<Self> {
        let s = s.to_ascii_lowercase();
        let alias = match s.as_str() {
            "verify" => "pum-verify",
            "throughput" => "pum-throughput",
            "upmem" => "upmem-gemv",
            other => other,
        };
        Self::NAMES.iter().find(|(n, _)| *n == alias).map(|&(_, k)| k)
    }

    pub fn name(self) -> &'static str {
        Self::NAMES.iter().find(|(_, k)| *k == self).unwrap().0
    }
}

impl fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy)]
enum Ty {
    Int { min: i64, max: i64 },
    Float { min: f64, max: f64 },
    Bool,
    Text,
    Choice(&'static [&'static str]),
    IntList { min: i64, max: i64 },
    TextList,
}

impl Ty {
    fn describe(self) -> String {
        match self {
            Ty::Int { min, max } if max == i64::MAX => format!("must be an integer >= {min}"),
            Ty::Int { min, max } => format!("must be an integer in {min}..={max}"),
            Ty::Float { min, max } if max == f64::INFINITY => format!("must be a number >= {min}"),
            Ty::Float { min, max } => format!("must be a number in [{min}, {max}]"),
            Ty::Bool => "must be true or false".into(),
            Ty::Text | Ty::TextList => "must not be empty".into(),
            Ty::Choice(options) => format!("must be one of {}", options.join(", ")),
            Ty::IntList { min, max } => format!("must be a comma-separated list of integers in {min}..={max}"),
        }
    }

    fn parse(self, raw: &str) -> Option<Value> {
        let int = |s: &str, min: i64, max: i64| s.trim().parse::<i64>().ok().filter(|v| (min..=max).contains(v));
        let items = || raw.split(',').map(str::trim).filter(|s| !s.is_empty());
        match self {
            Ty::Int { min, max } => int(raw, min, max).map(Value::Int),
            Ty::Float { min, max } => raw
                .trim()
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite() && *v >= min && *v <= max)
                .map(Value::Float),
            Ty::Bool => match raw.trim().to_ascii_lowercase().as_str() {
                "true" | "yes" | "on" | "1" => Some(Value::Bool(true)),
                "false" | "no" | "off" | "0" => Some(Value::Bool(false)),
                _ => None,
            },
            Ty::Text => Some(raw.trim()).filter(|s| !s.is_empty()).map(|s| Value::Text(s.into())),
            Ty::Choice(options) => {
                let v = raw.trim().to_ascii_lowercase();
                options.contains(&v.as_str()).then_some(Value::Text(v))
            }
            Ty::IntList { min, max } => {
                let v: Option<Vec<i64>> = items().map(|s| int(s, min, max)).collect();
                v.filter(|v| !v.is_empty()).map(Value::IntList)
            }
            Ty::TextList => {
                let v: Vec<String> = items().map(String::from).collect();
                (!v.is_empty()).then_some(Value::TextList(v))
            }
        }
    }
}

const POS: f64 = f64::MIN_POSITIVE;
const INF: f64 = f64::INFINITY;

const EXPERIMENT_KINDS: &[&str] = &[
    "pum-verify", "verify", "pum-throughput", "throughput", "bnn", "mensa", "upmem-gemv", "upmem", "roofline",
];

#[rustfmt::skip]
const SCHEMA: &[(&str, &[(&str, Ty)])] = &[
    ("experiment", &[
        ("kind", Ty::Choice(EXPERIMENT_KINDS)),
        ("seed", Ty::Int { min: 0, max: i64::MAX }),
        ("out", Ty::Text),
    ]),
    ("verify", &[
        ("ops", Ty::TextList),
        ("bits", Ty::IntList { min: 1, max: 64 }),
        ("signed", Ty::Bool),
        ("vectors", Ty::Int { min: 1, max: 100_000_000 }),
        ("shift", Ty::Int { min: 0, max: 64 }),
    ]),
    ("throughput", &[
        ("ops", Ty::TextList),
        ("bits", Ty::IntList { min: 1, max: 64 }),
        ("banks", Ty::Int { min: 1, max: 16 }),
    ]),
    ("bnn", &[
        ("mode", Ty::Choice(&["amdahl", "infer"])),
        ("conv_time", Ty::Float { min: 0.0, max: 1.0 }),
        ("speedup", Ty::Float { min: POS, max: INF }),
        ("inputs", Ty::Int { min: 1, max: 100_000 }),
        ("model", Ty::Text),
        ("weights", Ty::Text),
    ]),
    ("mensa", &[
        ("model", Ty::Text),
        ("edges", Ty::Text),
        ("systems", Ty::TextList),
    ]),
    ("upmem", &[
        ("mode", Ty::Choice(&["scale", "gemv", "compare"])),
        ("rows", Ty::Int { min: 1, max: u32::MAX as i64 }),
        ("cols", Ty::Int { min: 1, max: u32::MAX as i64 }),
        ("dtype", Ty::Choice(&["i8", "i16", "i32", "f32"])),
        ("dpus", Ty::IntList { min: 1, max: 1 << 20 }),
        ("matrix", Ty::Text),
        ("vector", Ty::Text),
        ("pim_time", Ty::Float { min: POS, max: INF }),
        ("references", Ty::TextList),
        ("normalize_to", Ty::Text),
    ]),
    ("roofline", &[
        ("lo", Ty::Float { min: POS, max: INF }),
        ("hi", Ty::Float { min: POS, max: INF }),
        ("points", Ty::Int { min: 2, max: 10_000_000 }),
        ("peak", Ty::Float { min: POS, max: INF }),
        ("bandwidth", Ty::Float { min: POS, max: INF }),
        ("e_flop", Ty::Float { min: POS, max: INF }),
        ("e_byte", Ty::Float { min: POS, max: INF }),
    ]),
];

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Int(i64),
    Float(f64),
    Bool(bool),
    Text(String),
    IntList(Vec<i64>),
    TextList(Vec<String>),
}

/// Typed contents of a config file.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConfigFile {
    values: BTreeMap<(String, String), Value>,
}

impl ConfigFile {
    pub fn parse_str(text: &str, path: &str) -> Result<Self, ConfigError> {
        let mut section = "experiment".to_string();
        let mut values = BTreeMap::new();
        for (n, raw) in text.lines().enumerate() {
            let line_no = n + 1;
            let line = raw.split(['#', ';']).next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix('[') {
                let name = rest.strip_suffix(']').ok_or_else(|| ConfigError::Syntax {
                    path: path.into(),
                    line: line_no,
                    message: "unterminated section header".into(),
                })?;
                let name = name.trim().to_ascii_lowercase();
                if !SCHEMA.iter().any(|(s, _)| *s == name) {
                    return Err(ConfigError::UnknownSection {
                        path: path.into(),
                        line: line_no,
                        section: name,
                    });
                }
                section = name;
                continue;
            }
            let (key, raw_value) = line.split_once('=').ok_or_else(|| ConfigError::Syntax {
                path: path.into(),
                line: line_no,
                message: format!("expected `key = value`, got `{line}`"),
            })?;
            let key = key.trim().to_ascii_lowercase();
            let keys = SCHEMA.iter().find(|(s, _)| *s == section).unwrap().1;
            let ty = keys
                .iter()
                .find(|(k, _)| *k == key)
                .map(|&(_, t)| t)
                .ok_or_else(|| ConfigError::UnknownKey {
                    path: path.into(),
                    line: line_no,
                    section: section.clone(),
                    key: key.clone(),
                })?;
            let value = ty.parse(raw_value).ok_or_else(|| ConfigError::TypeError {
                path: path.into(),
                line: line_no,
                key: key.clone(),
                message: format!("{}, got `{}`", ty.describe(), raw_value.trim()),
            })?;
            values.insert((section.clone(), key), value);
        }
        Ok(Self { values })
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        if !path.is_file() {
            return Err(ConfigError::MissingFile(path.to_path_buf()));
        }
        let text = std::fs::read_to_string(path).map_err(|e| ConfigError::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        })?;
        Self::parse_str(&text, &path.display().to_string())
    }

    fn get(&self, section: &str, key: &str) -> Option<&Value> {
        self.values.get(&(section.to_string(), key.to_string()))
    }

    pub fn int(&self, section: &str, key: &str) -> Option<i64> {
        match self.get(section, key) {
            Some(Value::Int(v)) => Some(*v),
            _ => None,
        }
    }

    pub fn float(&self, section: &str, key: &str) -> Option<f64> {
        match self.get(section, key) {
            Some(Value::Float(v)) => Some(*v),
            _ => None,
        }
    }

    pub fn boolean(&self, section: &str, key: &str) -> Option<bool> {
        match self.get(section, key) {
            Some(Value::Bool(v)) => Some(*v),
            _ => None,
        }
    }

    pub fn text(&self, section: &str, key: &str) -> Option<String> {
        match self.get(section, key) {
            Some(Value::Text(v)) => Some(v.clone()),
            _ => None,
        }
    }

    pub fn int_list(&self, section: &str, key: &str) -> Option<Vec<i64>> {
        match self.get(section, key) {
            Some(Value::IntList(v)) => Some(v.clone()),
            _ => None,
        }
    }

    pub fn text_list(&self, section: &str, key: &str) -> Option<Vec<String>> {
        match self.get(section, key) {
            Some(Value::TextList(v)) => Some(v.clone()),
            _ => None,
        }
    }
}

pub const DEFAULT_SEED: u64 = 42;

/// A config file that names the experiment to run.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub kind: ExperimentKind,
    pub seed: u64,
    pub out: Option<PathBuf>,
    pub params: ConfigFile,
}

impl ExperimentConfig {
    pub fn from_file(file: ConfigFile, path: &str) -> Result<Self, ConfigError> {
        let kind = file
            .text("experiment", "kind")
            .and_then(|k| ExperimentKind::parse(&k))
            .ok_or_else(|| ConfigError::MissingKind { path: path.into() })?;
        Ok(Self {
            kind,
            seed: file.int("experiment", "seed").map_or(DEFAULT_SEED, |s| s as u64),
            out: file.text("experiment", "out").map(PathBuf::from),
            params: file,
        })
    }
}

pub fn parse_config(path: &Path) -> Result<ExperimentConfig, ConfigError> {
    let file = ConfigFile::load(path)?;
    ExperimentConfig::from_file(file, &path.display().to_string())
}
