//! Grid scans: one row per (q, a, n), written as CSV or JSON lines, with an
//! optional checkpoint for resuming.

use std::fs::{File, OpenOptions};
use std::io::{Seek, SeekFrom, Write};
use std::path::{Path, PathBuf};

use ellprim_core::bounds::{case_split_report, main_theorem_log_bound};
use ellprim_core::{FactorBudget, FactoredInteger, FrobeniusParams, OrderFactorizer, PrimitiveReport};
use rayon::prelude::*;
use rug::Integer;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::args::{Format, ScanArgs};
use crate::config::{ConfigFile, Settings};
use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ScanConfig {
    pub q_min: u64,
    pub q_max: u64,
    /// None: every admissible trace.
    pub a: Option<Vec<i64>>,
    pub n_min: u64,
    pub n_max: u64,
    pub budget: FactorBudget,
    pub format: Format,
    pub precision_bits: u32,
    pub seed: u64,
}

impl ScanConfig {
    pub fn resolve(args: &ScanArgs, file: &ConfigFile, settings: &Settings) -> CliResult<Self> {
        let format = match args.format {
            Some(f) => f,
            None => match file.raw("format") {
                Some("csv") => Format::Csv,
                Some("json") => Format::Json,
                Some(other) => return Err(CliError::Usage(format!("config key format: unknown format {other:?}"))),
                None if settings.json => Format::Json,
                None => Format::Csv,
            },
        };
        let config = ScanConfig {
            q_min: args.q_min.or(file.get("q-min")?).unwrap_or(2),
            q_max: args.q_max.or(file.get("q-max")?).unwrap_or(5),
            a: match &args.a {
                Some(list) => Some(list.clone()),
                None => file.get_list("a")?,
            },
            n_min: args.n_min.or(file.get("n-min")?).unwrap_or(1),
            n_max: args.n_max.or(file.get("n-max")?).unwrap_or(30),
            budget: settings.budget(),
            format,
            precision_bits: settings.precision_bits,
            seed: settings.seed,
        };
        if config.q_min < 2 {
            return Err(CliError::Usage(format!("q-min = {} is below 2", config.q_min)));
        }
        if config.n_min == 0 {
            return Err(CliError::Usage("n-min must be at least 1".into()));
        }
        Ok(config)
    }

    /// Hex SHA-256 of the JSON encoding.
    pub fn hash(&self) -> String {
        let json = serde_json::to_vec(self).expect("config serializes");
        Sha256::digest(&json).iter().map(|b| format!("{b:02x}")).collect()
    }

    /// Admissible (q, a) pairs in ascending order.
    pub fn pairs(&self) -> Vec<(u64, i64)> {
        let mut out = Vec::new();
        for q in self.q_min..=self.q_max {
            let admissible = FrobeniusParams::admissible_traces(q);
            match &self.a {
                None => out.extend(admissible.into_iter().map(|a| (q, a))),
                Some(list) => {
                    let mut list = list.clone();
                    list.sort_unstable();
                    list.dedup();
                    out.extend(list.into_iter().filter(|a| admissible.contains(a)).map(|a| (q, a)));
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanRow {
    pub q: u64,
    pub a: i64,
    pub n: u64,
    pub t_n: String,
    /// N_n in decimal.
    pub order: String,
    /// `p^e*...`, with an unsplit composite part as `[c:m]`.
    pub factors: String,
    /// Every prime factor of N_n is known.
    pub complete: bool,
    /// Largest known prime factor (1 for N_n = 1).
    pub largest_prime: String,
    pub p_over_n: f64,
    /// log n + 0.0001·log n/log log n, for n >= 16.
    pub main_log_bound: Option<f64>,
    /// `p:kind` for each primitive prime, `;` separated.
    pub primitive: String,
    /// yes, no or unknown (incomplete without a known primitive prime).
    pub has_primitive: String,
    pub split_sum: Option<f64>,
    pub inert_sum: Option<f64>,
}

impl ScanRow {
    pub const FIELDS: [&'static str; 14] = [
        "q",
        "a",
        "n",
        "t_n",
        "order",
        "factors",
        "complete",
        "largest_prime",
        "p_over_n",
        "main_log_bound",
        "primitive",
        "has_primitive",
        "split_sum",
        "inert_sum",
    ];

    pub fn largest_prime_int(&self) -> Integer {
        self.largest_prime.parse().expect("decimal integer")
    }

    pub fn primitive_primes(&self) -> Vec<(Integer, String)> {
        self.primitive
            .split(';')
            .filter(|s| !s.is_empty())
            .map(|s| {
                let (p, kind) = s.split_once(':').expect("p:kind");
                (p.parse().expect("decimal prime"), kind.to_string())
            })
            .collect()
    }
}

pub fn factor_string(f: &FactoredInteger) -> String {
    let mut parts: Vec<String> = f
        .known_primes()
        .iter()
        .map(|(p, e)| if *e == 1 { p.to_string() } else { format!("{p}^{e}") })
        .collect();
    if !f.is_complete() {
        parts.push(format!("[c:{}]", f.cofactor));
    }
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}

fn detail_f64(report: &ellprim_core::BoundReport, key: &str) -> Option<f64> {
    report.details.get(key).and_then(|v| v.parse().ok())
}

fn make_row(f: &mut OrderFactorizer, t_n: &Integer, report: &PrimitiveReport, prec: u32) -> CliResult<ScanRow> {
    let params = f.params().clone();
    let n = report.n;
    let (largest, complete) = report.order.largest_known_prime_factor();
    let primitive: Vec<String> = report.primitive.iter().map(|r| format!("{}:{}", r.p, r.kind)).collect();
    let has_primitive = match (primitive.is_empty(), complete) {
        (false, _) => "yes",
        (true, true) => "no",
        (true, false) => "unknown",
    };
    let (split_sum, inert_sum) = if complete {
        let r = case_split_report(f, n, prec)?;
        (detail_f64(&r, "split_sum"), detail_f64(&r, "inert_sum"))
    } else {
        (None, None)
    };
    Ok(ScanRow {
        q: params.q().to_u64().expect("small q"),
        a: params.a().to_i64().expect("small a"),
        n,
        t_n: t_n.to_string(),
        order: report.order.value.to_string(),
        factors: factor_string(&report.order),
        complete,
        largest_prime: largest.to_string(),
        p_over_n: largest.to_f64() / n as f64,
        main_log_bound: if n >= 16 { Some(main_theorem_log_bound(n, prec)?.mid_f64()) } else { None },
        primitive: primitive.join(";"),
        has_primitive: has_primitive.into(),
        split_sum,
        inert_sum,
    })
}

/// Rows of one (q, a) pair for the configured n range.
pub fn pair_rows(config: &ScanConfig, q: u64, a: i64) -> CliResult<Vec<ScanRow>> {
    let params = FrobeniusParams::new(q, a)?;
    if config.n_max < config.n_min {
        return Ok(Vec::new());
    }
    let traces = ellprim_core::trace_seq(&params, config.n_max);
    let mut f = OrderFactorizer::new(params, config.budget.clone());
    let mut rows = Vec::new();
    for n in config.n_min..=config.n_max {
        let report = f.primitive_primes(n)?;
        rows.push(make_row(&mut f, &traces[n as usize], &report, config.precision_bits)?);
    }
    Ok(rows)
}

fn encode(rows: &[ScanRow], format: Format) -> CliResult<Vec<u8>> {
    match format {
        Format::Csv => {
            let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
            for row in rows {
                w.serialize(row)?;
            }
            w.into_inner().map_err(|e| CliError::Other(anyhow::anyhow!("csv buffer: {e}")))
        }
        Format::Json => {
            let mut out = Vec::new();
            for row in rows {
                serde_json::to_writer(&mut out, row)?;
                out.push(b'\n');
            }
            Ok(out)
        }
    }
}

fn header(format: Format) -> CliResult<Vec<u8>> {
    match format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(ScanRow::FIELDS)?;
            w.into_inner().map_err(|e| CliError::Other(anyhow::anyhow!("csv buffer: {e}")))
        }
        Format::Json => Ok(Vec::new()),
    }
}

pub fn read_rows(path: &Path, format: Format) -> CliResult<Vec<ScanRow>> {
    match format {
        Format::Csv => {
            let mut r = csv::Reader::from_path(path)?;
            Ok(r.deserialize().collect::<Result<_, _>>()?)
        }
        Format::Json => {
            let text = std::fs::read_to_string(path)?;
            Ok(text.lines().map(serde_json::from_str).collect::<Result<_, _>>()?)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub config_hash: String,
    /// Last fully written (q, a) pair.
    pub last_key: Option<(u64, i64)>,
    pub output_bytes: u64,
    pub rows: u64,
}

impl Checkpoint {
    fn load(path: &Path) -> CliResult<Option<Self>> {
        match std::fs::read_to_string(path) {
            Ok(text) => serde_json::from_str(&text)
                .map(Some)
                .map_err(|e| CliError::Usage(format!("unreadable checkpoint {}: {e}", path.display()))),
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(None),
            Err(e) => Err(e.into()),
        }
    }

    fn store(&self, path: &Path) -> CliResult<()> {
        let tmp = path.with_extension("tmp");
        std::fs::write(&tmp, serde_json::to_vec(self)?)?;
        std::fs::rename(&tmp, path)?;
        Ok(())
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ScanSummary {
    pub pairs: usize,
    pub rows: u64,
    pub incomplete: u64,
    /// Stopped early on request; the checkpoint allows resuming.
    pub interrupted: bool,
}

pub struct ScanJob {
    pub config: ScanConfig,
    pub output: Option<PathBuf>,
    pub checkpoint: Option<PathBuf>,
    pub stop_after_pairs: Option<usize>,
}

impl ScanJob {
    pub fn resolve(args: &ScanArgs, file: &ConfigFile, settings: &Settings) -> CliResult<Self> {
        let output = args.output.clone().or(file.get::<PathBuf>("output")?);
        let checkpoint = args.checkpoint.clone().or(file.get::<PathBuf>("checkpoint")?);
        if checkpoint.is_some() && output.is_none() {
            return Err(CliError::Usage("--checkpoint needs --output".into()));
        }
        Ok(ScanJob {
            config: ScanConfig::resolve(args, file, settings)?,
            output,
            checkpoint,
            stop_after_pairs: args.stop_after_pairs,
        })
    }

    /// Runs the scan on `pool`; rows go to the output file or `stdout`.
    pub fn run(&self, pool: &rayon::ThreadPool, stdout: &mut dyn Write) -> CliResult<ScanSummary> {
        let config = &self.config;
        let hash = config.hash();
        let mut state = Checkpoint { config_hash: hash.clone(), last_key: None, output_bytes: 0, rows: 0 };
        if let Some(path) = &self.checkpoint {
            if let Some(saved) = Checkpoint::load(path)? {
                if saved.config_hash != hash {
                    return Err(CliError::Usage(format!(
                        "checkpoint {} belongs to a different scan configuration",
                        path.display()
                    )));
                }
                state = saved;
            }
        }
        let resuming = state.last_key.is_some() || state.output_bytes > 0;

        let mut file_out: Option<File> = None;
        if let Some(path) = &self.output {
            let file = if resuming {
                let mut f = OpenOptions::new().write(true).open(path)?;
                f.set_len(state.output_bytes)?;
                f.seek(SeekFrom::End(0))?;
                f
            } else {
                File::create(path)?
            };
            file_out = Some(file);
        }
        let out: &mut dyn Write = match file_out.as_mut() {
            Some(f) => f,
            None => stdout,
        };
        if !resuming {
            let head = header(config.format)?;
            out.write_all(&head)?;
            state.output_bytes += head.len() as u64;
            out.flush()?;
            if let Some(path) = &self.checkpoint {
                state.store(path)?;
            }
        }

        let pending: Vec<(u64, i64)> =
            config.pairs().into_iter().filter(|k| state.last_key.map_or(true, |last| *k > last)).collect();
        let limit = self.stop_after_pairs.unwrap_or(usize::MAX);
        let mut summary = ScanSummary { rows: state.rows, ..ScanSummary::default() };
        let chunk = pool.current_num_threads().max(1);
        for batch in pending.chunks(chunk) {
            if summary.pairs >= limit {
                summary.interrupted = true;
                break;
            }
            let take = batch.len().min(limit - summary.pairs);
            let results: Vec<CliResult<Vec<ScanRow>>> =
                pool.install(|| batch[..take].par_iter().map(|&(q, a)| pair_rows(config, q, a)).collect());
            for (&key, rows) in batch[..take].iter().zip(results) {
                let rows = rows?;
                let bytes = encode(&rows, config.format)?;
                out.write_all(&bytes)?;
                out.flush()?;
                summary.pairs += 1;
                summary.rows += rows.len() as u64;
                summary.incomplete += rows.iter().filter(|r| !r.complete).count() as u64;
                state.last_key = Some(key);
                state.output_bytes += bytes.len() as u64;
                state.rows = summary.rows;
                if let Some(path) = &self.checkpoint {
                    state.store(path)?;
                }
            }
            if take < batch.len() {
                summary.interrupted = true;
                break;
            }
        }
        Ok(summary)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(a: Option<Vec<i64>>) -> ScanConfig {
        ScanConfig {
            q_min: 2,
            q_max: 3,
            a,
            n_min: 1,
            n_max: 6,
            budget: FactorBudget::default(),
            format: Format::Csv,
            precision_bits: 128,
            seed: 0,
        }
    }

    #[test]
    fn pairs_are_admissible_and_sorted() {
        let c = config(None);
        assert_eq!(c.pairs().len(), 5 + 7);
        let c = config(Some(vec![3, -2, 2, 2]));
        assert_eq!(c.pairs(), vec![(2, -2), (2, 2), (3, -2), (3, 2), (3, 3)]);
        assert!(c.pairs().windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn hash_tracks_the_configuration() {
        let c = config(None);
        assert_eq!(c.hash().len(), 64);
        assert_eq!(c.hash(), config(None).hash());
        let mut d = config(None);
        d.n_max = 7;
        assert_ne!(c.hash(), d.hash());
    }

    #[test]
    fn rows_for_a_small_pair() {
        let rows = pair_rows(&config(None), 2, 1).unwrap();
        let orders: Vec<&str> = rows.iter().map(|r| r.order.as_str()).collect();
        assert_eq!(orders, ["2", "8", "14", "16", "22", "56"]);
        let r5 = &rows[4];
        assert_eq!((r5.factors.as_str(), r5.largest_prime.as_str(), r5.has_primitive.as_str()), ("2*11", "11", "yes"));
        assert_eq!(r5.primitive_primes(), vec![(Integer::from(11), "split".to_string())]);
        assert!(rows.iter().all(|r| r.complete && r.main_log_bound.is_none()));
    }

    #[test]
    fn csv_and_json_encodings_round_trip() {
        let rows = pair_rows(&config(None), 3, -1).unwrap();
        let dir = std::env::temp_dir().join(format!("ellprim-scan-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        for format in [Format::Csv, Format::Json] {
            let path = dir.join("rows");
            let mut bytes = header(format).unwrap();
            bytes.extend(encode(&rows, format).unwrap());
            std::fs::write(&path, bytes).unwrap();
            assert_eq!(read_rows(&path, format).unwrap(), rows);
        }
        std::fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn factor_strings() {
        let f = ellprim_core::factorize(&Integer::from(288), &FactorBudget::default());
        assert_eq!(factor_string(&f), "2^5*3^2");
        assert_eq!(factor_string(&FactoredInteger::one()), "1");
    }
}
