//! Line-oriented `key=value` configuration and exit-code policy.
//!
//! The config file mirrors the long command-line flags (keys are the
//! flag names without `--`); explicit flags always win over the file,
//! which wins over built-in defaults. One file may carry keys for
//! several subcommands — each command reads the keys it knows — but a
//! key outside the global vocabulary is rejected so typos fail loudly.
//!
//! Exit codes: `0` success, `1` residual-gate failure, `2` configuration
//! error, `3` numerical non-convergence.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use jacobs_ladder::Error;

/// Every key any subcommand understands.
const KNOWN_KEYS: &[&str] = &[
    "jobs",
    "cache-dir",
    "t-max",
    "t-min",
    "c0",
    "family",
    "k2",
    "nu",
    "range",
    "allow-inadmissible",
    "residual-gate",
    "json",
    "csv",
    "emit",
    "plot-dir",
    "bands",
    "alpha",
    "cell-index",
    "gamma-target",
    "export-csv",
    "zeros",
    "asymptotics",
];

pub const EXIT_GATE_FAILURE: u8 = 1;
pub const EXIT_CONFIG_ERROR: u8 = 2;
pub const EXIT_NUMERICAL: u8 = 3;

/// A failed run: what to print and which code to exit with.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn config(message: impl Into<String>) -> Self {
        Self { code: EXIT_CONFIG_ERROR, message: message.into() }
    }

    pub fn gate(message: impl Into<String>) -> Self {
        Self { code: EXIT_GATE_FAILURE, message: message.into() }
    }

    pub fn numerical(message: impl Into<String>) -> Self {
        Self { code: EXIT_NUMERICAL, message: message.into() }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.message)
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            // The caller asked for something the tables or domains cannot
            // deliver: configuration, not numerics.
            Error::Domain(_)
            | Error::OutOfRange { .. }
            | Error::Config(_)
            | Error::TableFormat(_)
            | Error::ZeroIngestion(_)
            | Error::Io(_) => EXIT_CONFIG_ERROR,
            // The machinery ran and failed to converge or bracket.
            Error::QuadratureNonConvergence { .. }
            | Error::BracketViolation { .. }
            | Error::RootNonConvergence { .. }
            | Error::FixedPointNonConvergence { .. }
            | Error::ZeroIsolation { .. }
            | Error::LadderBracket { .. }
            | Error::DeformationRejected { .. } => EXIT_NUMERICAL,
        };
        Self { code, message: e.to_string() }
    }
}

/// Parsed config file: a flat string map.
#[derive(Debug, Default, Clone)]
pub struct ConfigMap {
    entries: BTreeMap<String, String>,
}

impl ConfigMap {
    /// Parse `path`. Blank lines and `#` comments are skipped; every
    /// other line must be `key = value` with a known key.
    pub fn load(path: &Path) -> Result<Self, Failure> {
        let text = std::fs::read_to_string(path).map_err(|e| {
            Failure::config(format!("cannot read config file {}: {e}", path.display()))
        })?;
        let mut entries = BTreeMap::new();
        for (index, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(Failure::config(format!(
                    "{}:{}: expected key=value, got {line:?}",
                    path.display(),
                    index + 1
                )));
            };
            let key = key.trim().to_string();
            if !KNOWN_KEYS.contains(&key.as_str()) {
                return Err(Failure::config(format!(
                    "{}:{}: unknown config key {key:?}",
                    path.display(),
                    index + 1
                )));
            }
            entries.insert(key, value.trim().to_string());
        }
        Ok(Self { entries })
    }

    pub fn raw(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(String::as_str)
    }

    /// Typed lookup; a present-but-unparsable value is a config error.
    pub fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>, Failure>
    where
        T::Err: fmt::Display,
    {
        match self.entries.get(key) {
            None => Ok(None),
            Some(text) => text.parse::<T>().map(Some).map_err(|e| {
                Failure::config(format!("config key {key}={text:?}: {e}"))
            }),
        }
    }

    /// `lo:hi` pair (used by `range`).
    pub fn get_pair(&self, key: &str) -> Result<Option<(f64, f64)>, Failure> {
        match self.entries.get(key) {
            None => Ok(None),
            Some(text) => parse_pair(text)
                .map(Some)
                .map_err(|e| Failure::config(format!("config key {key}={text:?}: {e}"))),
        }
    }
}

/// Parse `lo:hi` into an ordered pair.
pub fn parse_pair(text: &str) -> Result<(f64, f64), String> {
    let (lo, hi) = text
        .split_once(':')
        .ok_or_else(|| "expected lo:hi".to_string())?;
    let lo: f64 = lo.trim().parse().map_err(|e| format!("bad lo: {e}"))?;
    let hi: f64 = hi.trim().parse().map_err(|e| format!("bad hi: {e}"))?;
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(format!("need finite lo < hi, got {lo}:{hi}"));
    }
    Ok((lo, hi))
}

/// Parse `lo:hi,lo:hi,...` into a band list.
pub fn parse_bands(text: &str) -> Result<Vec<(f64, f64)>, String> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(parse_pair)
        .collect()
}
