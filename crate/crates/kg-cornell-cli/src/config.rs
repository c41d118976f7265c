//! Option resolution: command-line flags override config-file entries, which
//! override the built-in defaults (the reference parameter set).
//!
//! The config file is plain text, one `key = value` per line, `#` comments;
//! keys are the long flag names without the dashes. Unknown keys are hard
//! errors, with the line number named.

use kg_cornell::spectral::{CouplingParams, KVariant};
use kg_cornell::thermo::Method;
use std::collections::HashMap;
use std::fmt;
use std::path::Path;

#[derive(Debug)]
pub enum ConfigError {
    Usage(String),
    File { line: usize, message: String },
    Io(String),
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConfigError::Usage(m) => write!(f, "{m}"),
            ConfigError::File { line, message } => write!(f, "line {line}: {message}"),
            ConfigError::Io(m) => write!(f, "{m}"),
        }
    }
}

/// Every key the flag grammar knows; config files may use any of them.
const KNOWN_KEYS: &[&str] = &[
    "M", "av", "as", "bv", "bs", "dims", "nmax", "variant", "l", "mu-min", "mu-max", "points",
    "method", "n", "rmax", "samples", "nodes", "bracket", "out", "config",
];

/// Parsed `key = value` map from a config file.
#[derive(Debug, Default, Clone)]
pub struct ConfigFile {
    entries: HashMap<String, String>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError::Io(format!("cannot read {}: {e}", path.display())))?;
        let mut entries = HashMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| ConfigError::File {
                line: idx + 1,
                message: format!("expected `key = value`, got `{raw}`"),
            })?;
            let key = key.trim();
            let value = value.trim();
            if !KNOWN_KEYS.contains(&key) {
                return Err(ConfigError::File {
                    line: idx + 1,
                    message: format!("unknown key `{key}`"),
                });
            }
            if value.is_empty() {
                return Err(ConfigError::File {
                    line: idx + 1,
                    message: format!("empty value for `{key}`"),
                });
            }
            entries.insert(key.to_string(), value.to_string());
        }
        Ok(Self { entries })
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(String::as_str)
    }
}

/// `flag.or(config).unwrap_or(default)` with config-side parsing.
pub fn resolve<T, F>(
    flag: Option<T>,
    config: &ConfigFile,
    key: &str,
    parse: F,
    default: T,
) -> Result<T, ConfigError>
where
    F: Fn(&str) -> Result<T, String>,
{
    if let Some(v) = flag {
        return Ok(v);
    }
    match config.get(key) {
        Some(raw) => parse(raw).map_err(|e| ConfigError::Usage(format!("config `{key}`: {e}"))),
        None => Ok(default),
    }
}

pub fn parse_f64(s: &str) -> Result<f64, String> {
    s.parse::<f64>().map_err(|e| e.to_string())
}

pub fn parse_u32(s: &str) -> Result<u32, String> {
    s.parse::<u32>().map_err(|e| e.to_string())
}

/// `A..B` (inclusive) or a single dimension `A`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DimRange {
    pub lo: u32,
    pub hi: u32,
}

impl DimRange {
    pub fn values(&self) -> Vec<u32> {
        (self.lo..=self.hi).collect()
    }

    /// The single dimension, for subcommands that work at fixed D.
    pub fn singleton(&self) -> Result<u32, ConfigError> {
        if self.lo == self.hi {
            Ok(self.lo)
        } else {
            Err(ConfigError::Usage(format!(
                "--dims {}..{} : this subcommand needs a single dimension",
                self.lo, self.hi
            )))
        }
    }
}

pub fn parse_dims(s: &str) -> Result<DimRange, String> {
    let (lo, hi) = match s.split_once("..") {
        Some((a, b)) => (
            a.trim().parse::<u32>().map_err(|e| e.to_string())?,
            b.trim().parse::<u32>().map_err(|e| e.to_string())?,
        ),
        None => {
            let v = s.trim().parse::<u32>().map_err(|e| e.to_string())?;
            (v, v)
        }
    };
    if lo < 1 {
        return Err("dimensions start at 1".into());
    }
    if lo > hi {
        return Err(format!("empty range {lo}..{hi}"));
    }
    Ok(DimRange { lo, hi })
}

pub fn parse_variant(s: &str) -> Result<KVariant, String> {
    match s {
        "table1" => Ok(KVariant::Table1),
        "eq27" => Ok(KVariant::PrintedEq27),
        "half" => Ok(KVariant::HalfQuadratic),
        other => Err(format!("unknown variant `{other}` (table1|eq27|half)")),
    }
}

pub fn parse_method(s: &str) -> Result<Method, String> {
    match s {
        "direct" => Ok(Method::Direct),
        "em" => Ok(Method::EulerMcLaurin),
        other => Err(format!("unknown method `{other}` (direct|em)")),
    }
}

/// `LO,HI`
pub fn parse_bracket(s: &str) -> Result<(f64, f64), String> {
    let (lo, hi) = s.split_once(',').ok_or("expected LO,HI")?;
    let lo = lo.trim().parse::<f64>().map_err(|e| e.to_string())?;
    let hi = hi.trim().parse::<f64>().map_err(|e| e.to_string())?;
    if lo >= hi {
        return Err(format!("bracket ({lo}, {hi}) must be ordered"));
    }
    Ok((lo, hi))
}

/// Comma-separated node counts, e.g. `0` or `0,1,2`.
pub fn parse_nodes(s: &str) -> Result<Vec<u32>, String> {
    let mut out = Vec::new();
    for part in s.split(',') {
        out.push(part.trim().parse::<u32>().map_err(|e| e.to_string())?);
    }
    if out.is_empty() {
        return Err("need at least one node count".into());
    }
    Ok(out)
}

/// Shared physical-parameter flags, already merged with config + defaults
/// and validated.
#[derive(Debug, Clone, Copy)]
pub struct Couplings {
    pub params: CouplingParams,
}

#[allow(clippy::too_many_arguments)]
pub fn resolve_couplings(
    m: Option<f64>,
    av: Option<f64>,
    a_s: Option<f64>,
    bv: Option<f64>,
    bs: Option<f64>,
    config: &ConfigFile,
) -> Result<Couplings, ConfigError> {
    let m = resolve(m, config, "M", parse_f64, 1.0)?;
    let av = resolve(av, config, "av", parse_f64, 0.2)?;
    let a_s = resolve(a_s, config, "as", parse_f64, 6.0)?;
    let bv = resolve(bv, config, "bv", parse_f64, 0.002)?;
    let bs = resolve(bs, config, "bs", parse_f64, 2.0)?;
    let params =
        CouplingParams::new(av, a_s, bv, bs, m).map_err(|e| ConfigError::Usage(e.to_string()))?;
    Ok(Couplings { params })
}
