//! Settings resolved from flags, an optional config file, the environment
//! and built-in defaults, in that order of precedence.

use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;
use std::time::Duration;

use ellprim_core::{FactorBudget, DEFAULT_PRECISION};

use crate::args::GlobalArgs;
use crate::error::{CliError, CliResult};

pub const ENV_BUDGET_MS: &str = "ELLPRIM_BUDGET_MS";
pub const ENV_THREADS: &str = "ELLPRIM_THREADS";

const KNOWN_KEYS: &[&str] = &[
    "json",
    "budget-ms",
    "precision-bits",
    "seed",
    "threads",
    "rho-iterations",
    "trial-bound",
    "q-min",
    "q-max",
    "a",
    "n-min",
    "n-max",
    "format",
    "output",
    "checkpoint",
    "instances",
    "x-max",
];

/// A flat `key = value` file. Blank lines and lines starting with `#` are
/// skipped; `_` and `-` are interchangeable in keys.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ConfigFile {
    entries: BTreeMap<String, String>,
}

impl ConfigFile {
    pub fn parse(text: &str) -> CliResult<Self> {
        let mut entries = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| CliError::Usage(format!("config line {}: expected key = value", i + 1)))?;
            let key = key.trim().replace('_', "-");
            if !KNOWN_KEYS.contains(&key.as_str()) {
                return Err(CliError::Usage(format!("config line {}: unknown key {key:?}", i + 1)));
            }
            entries.insert(key, value.trim().to_string());
        }
        Ok(ConfigFile { entries })
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        ConfigFile::parse(&text)
    }

    pub fn raw(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(String::as_str)
    }

    pub fn get<T: FromStr>(&self, key: &str) -> CliResult<Option<T>>
    where
        T::Err: std::fmt::Display,
    {
        self.raw(key)
            .map(|v| v.parse::<T>().map_err(|e| CliError::Usage(format!("config key {key}: {e}"))))
            .transpose()
    }

    /// Comma-separated list value.
    pub fn get_list<T: FromStr>(&self, key: &str) -> CliResult<Option<Vec<T>>>
    where
        T::Err: std::fmt::Display,
    {
        self.raw(key)
            .map(|v| {
                v.split(',')
                    .map(|s| s.trim().parse::<T>().map_err(|e| CliError::Usage(format!("config key {key}: {e}"))))
                    .collect()
            })
            .transpose()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Settings {
    pub json: bool,
    pub budget_ms: Option<u64>,
    pub precision_bits: u32,
    pub seed: u64,
    pub threads: usize,
    pub rho_iterations: u64,
    pub trial_bound: u64,
}

fn parse_env<T: FromStr>(name: &str, value: Option<String>) -> CliResult<Option<T>>
where
    T::Err: std::fmt::Display,
{
    value
        .map(|v| v.trim().parse::<T>().map_err(|e| CliError::Usage(format!("environment variable {name}: {e}"))))
        .transpose()
}

impl Settings {
    /// `env` looks up environment variables; tests pass a closure.
    pub fn resolve(global: &GlobalArgs, file: &ConfigFile, env: impl Fn(&str) -> Option<String>) -> CliResult<Self> {
        let defaults = FactorBudget::default();
        let json = global.json || file.get::<bool>("json")?.unwrap_or(false);
        let budget_ms = match global.budget_ms {
            Some(ms) => Some(ms),
            None => match file.get::<u64>("budget-ms")? {
                Some(ms) => Some(ms),
                None => parse_env(ENV_BUDGET_MS, env(ENV_BUDGET_MS))?,
            },
        };
        let precision_bits =
            global.precision_bits.or(file.get("precision-bits")?).unwrap_or(DEFAULT_PRECISION);
        if precision_bits < DEFAULT_PRECISION {
            return Err(CliError::Usage(format!("precision must be at least {DEFAULT_PRECISION} bits, got {precision_bits}")));
        }
        let threads = match global.threads.or(file.get("threads")?) {
            Some(t) => t,
            None => parse_env(ENV_THREADS, env(ENV_THREADS))?
                .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get())),
        };
        if threads == 0 {
            return Err(CliError::Usage("thread count must be positive".into()));
        }
        Ok(Settings {
            json,
            budget_ms,
            precision_bits,
            seed: global.seed.or(file.get("seed")?).unwrap_or(0),
            threads,
            rho_iterations: file.get("rho-iterations")?.unwrap_or(defaults.rho_iterations),
            trial_bound: file.get("trial-bound")?.unwrap_or(defaults.trial_bound),
        })
    }

    pub fn budget(&self) -> FactorBudget {
        FactorBudget {
            trial_bound: self.trial_bound,
            rho_iterations: self.rho_iterations,
            time_limit: self.budget_ms.map(Duration::from_millis),
        }
    }

    pub fn pool(&self) -> CliResult<rayon::ThreadPool> {
        rayon::ThreadPoolBuilder::new()
            .num_threads(self.threads)
            .build()
            .map_err(|e| CliError::Other(e.into()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn no_env(_: &str) -> Option<String> {
        None
    }

    #[test]
    fn parses_flat_files() {
        let f = ConfigFile::parse("# grid\nq_max = 7\n\nformat=json\na = -1, 0,2\n").unwrap();
        assert_eq!(f.get::<u64>("q-max").unwrap(), Some(7));
        assert_eq!(f.raw("format"), Some("json"));
        assert_eq!(f.get_list::<i64>("a").unwrap(), Some(vec![-1, 0, 2]));
        assert!(matches!(ConfigFile::parse("colour = red"), Err(CliError::Usage(_))));
        assert!(matches!(ConfigFile::parse("q-max 7"), Err(CliError::Usage(_))));
        assert!(matches!(f.get::<bool>("q-max"), Err(CliError::Usage(_))));
    }

    #[test]
    fn precedence_is_flag_then_file_then_env() {
        let file = ConfigFile::parse("budget-ms = 50\nseed = 9\nthreads = 3").unwrap();
        let env = |k: &str| match k {
            ENV_BUDGET_MS => Some("70".to_string()),
            ENV_THREADS => Some("5".to_string()),
            _ => None,
        };
        let s = Settings::resolve(&GlobalArgs::default(), &file, env).unwrap();
        assert_eq!((s.budget_ms, s.seed, s.threads), (Some(50), 9, 3));
        let s = Settings::resolve(&GlobalArgs::default(), &ConfigFile::default(), env).unwrap();
        assert_eq!((s.budget_ms, s.threads), (Some(70), 5));
        let flags = GlobalArgs { budget_ms: Some(10), seed: Some(1), threads: Some(2), ..GlobalArgs::default() };
        let s = Settings::resolve(&flags, &file, env).unwrap();
        assert_eq!((s.budget_ms, s.seed, s.threads), (Some(10), 1, 2));
        assert_eq!(s.budget().time_limit, Some(Duration::from_millis(10)));
    }

    #[test]
    fn rejects_low_precision_and_bad_env() {
        let flags = GlobalArgs { precision_bits: Some(64), ..GlobalArgs::default() };
        assert!(Settings::resolve(&flags, &ConfigFile::default(), no_env).is_err());
        let env = |k: &str| (k == ENV_THREADS).then(|| "many".to_string());
        assert!(Settings::resolve(&GlobalArgs::default(), &ConfigFile::default(), env).is_err());
    }
}
