//! Batch commands behind the `maeda` binary.
//!
//! Every command writes its report to the supplied writer and returns the
//! process exit status: 0 on success, 1 when a verification or check fails,
//! 2 on I/O or configuration errors.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use thiserror::Error;

use crate::certify::{
    check_certificate, verify_weight, Certificate, PrimeType, SearchMode, VerifyError,
    VerifyOptions,
};
use crate::density::{expected_trials, DensityReport};
use crate::ffpoly::MODULUS_LIMIT;
use crate::hecke::dim_cusp_forms;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_IO: i32 = 2;

pub const SUMMARY_FILE: &str = "summary.csv";
pub const STATS_FILE: &str = "stats.csv";
/// Width of the N/E histogram bins.
pub const BIN_WIDTH: f64 = 0.1;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("weight range is empty: --from {0} exceeds --to {1}")]
    EmptyRange(u32, u32),
    #[error("prime bound {0} must lie in [3, 2^20]")]
    Bound(u64),
    #[error("--jobs must be at least 1")]
    Jobs,
    #[error("dimension range must satisfy 1 <= from <= to (got {0}..{1})")]
    DimensionRange(usize, usize),
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub k_min: u32,
    pub k_max: u32,
    pub mode: SearchMode,
    pub seed: u64,
    pub bound: u64,
    pub jobs: usize,
    pub out_dir: PathBuf,
    pub resume: bool,
    /// Record wall-clock durations in certificates. With timing off, a fixed
    /// seed gives byte-identical output.
    pub record_timing: bool,
    pub parallel_primes: bool,
    pub max_trials: Option<u64>,
}

impl RunConfig {
    pub fn new(k_min: u32, k_max: u32, out_dir: impl Into<PathBuf>) -> Self {
        RunConfig {
            k_min,
            k_max,
            mode: SearchMode::Random,
            seed: 0,
            bound: MODULUS_LIMIT,
            jobs: 1,
            out_dir: out_dir.into(),
            resume: false,
            record_timing: true,
            parallel_primes: false,
            max_trials: None,
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.k_min > self.k_max {
            return Err(ConfigError::EmptyRange(self.k_min, self.k_max));
        }
        if !(3..=MODULUS_LIMIT).contains(&self.bound) {
            return Err(ConfigError::Bound(self.bound));
        }
        if self.jobs == 0 {
            return Err(ConfigError::Jobs);
        }
        Ok(())
    }

    /// Even weights in `[k_min, k_max]`.
    pub fn weights(&self) -> Vec<u32> {
        (self.k_min..=self.k_max).filter(|k| k % 2 == 0).collect()
    }

    fn verify_options(&self) -> VerifyOptions {
        VerifyOptions {
            mode: self.mode,
            seed: self.seed,
            bound: self.bound,
            max_trials: self.max_trials,
            parallel_primes: self.parallel_primes,
            record_timing: self.record_timing,
        }
    }

    /// Whether an existing certificate was produced under this configuration.
    fn matches(&self, cert: &Certificate) -> bool {
        let seed = match self.mode {
            SearchMode::Random => Some(self.seed),
            SearchMode::Consecutive => None,
        };
        cert.mode == self.mode
            && cert.seed == seed
            && cert.prime_bound == self.bound
            && cert.dimension == dim_cusp_forms(cert.weight as i64)
    }
}

pub fn certificate_path(dir: &Path, k: u32) -> PathBuf {
    dir.join(format!("cert_{k}.json"))
}

fn write_atomic(path: &Path, contents: &str) -> io::Result<()> {
    let tmp = path.with_extension("json.tmp");
    fs::write(&tmp, contents)?;
    fs::rename(&tmp, path)
}

pub fn read_certificate(path: &Path) -> Result<Certificate, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("read error: {e}"))?;
    Certificate::from_json(&text).map_err(|e| format!("malformed certificate: {e}"))
}

#[derive(Debug)]
enum Outcome {
    Certified { cert: Certificate, reused: bool },
    Empty,
    Failed { d: usize, error: VerifyError },
    Io(io::Error),
}

fn run_weight(cfg: &RunConfig, k: u32) -> Outcome {
    let d = dim_cusp_forms(k as i64);
    if d == 0 {
        return Outcome::Empty;
    }
    let path = certificate_path(&cfg.out_dir, k);
    if cfg.resume && path.exists() {
        if let Ok(cert) = read_certificate(&path) {
            if cert.weight == k && cfg.matches(&cert) {
                return Outcome::Certified { cert, reused: true };
            }
        }
    }
    match verify_weight(k, &cfg.verify_options()) {
        Ok(cert) => match write_atomic(&path, &cert.to_json()) {
            Ok(()) => Outcome::Certified {
                cert,
                reused: false,
            },
            Err(e) => Outcome::Io(e),
        },
        Err(error) => Outcome::Failed { d, error },
    }
}

const SUMMARY_HEADER: &str =
    "weight,dimension,status,trials_I,trials_II,trials_III,prime_I,prime_II,prime_III,duration_ms";

fn summary_row(k: u32, outcome: &Outcome) -> String {
    match outcome {
        Outcome::Certified { cert, .. } => {
            let status = if cert.vacuous { "vacuous" } else { "certified" };
            let t = &cert.trials_total;
            let prime = |ty| {
                cert.witness(ty)
                    .map_or(String::new(), |w| w.prime.to_string())
            };
            format!(
                "{k},{},{status},{},{},{},{},{},{},{}",
                cert.dimension,
                t.type_i,
                t.type_ii,
                t.type_iii,
                prime(PrimeType::I),
                prime(PrimeType::II),
                prime(PrimeType::III),
                cert.duration_ms
            )
        }
        Outcome::Empty => format!("{k},0,empty,,,,,,,"),
        Outcome::Failed { d, .. } => format!("{k},{d},failed,,,,,,,"),
        Outcome::Io(_) => format!("{k},{},io-error,,,,,,,", dim_cusp_forms(k as i64)),
    }
}

/// Verify every even weight in the configured range and write one
/// certificate per weight plus `summary.csv`.
pub fn cmd_verify(cfg: &RunConfig, out: &mut dyn Write) -> i32 {
    if let Err(e) = cfg.validate() {
        let _ = writeln!(out, "error: {e}");
        return EXIT_IO;
    }
    if let Err(e) = fs::create_dir_all(&cfg.out_dir) {
        let _ = writeln!(out, "error: cannot create {}: {e}", cfg.out_dir.display());
        return EXIT_IO;
    }
    let pool = match rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.jobs)
        .build()
    {
        Ok(p) => p,
        Err(e) => {
            let _ = writeln!(out, "error: cannot start worker pool: {e}");
            return EXIT_IO;
        }
    };
    let weights = cfg.weights();
    let outcomes: Vec<(u32, Outcome)> = pool.install(|| {
        weights
            .par_iter()
            .map(|&k| (k, run_weight(cfg, k)))
            .collect()
    });

    let mut summary = String::from(SUMMARY_HEADER);
    summary.push('\n');
    let (mut certified, mut reused, mut failed, mut io_errors) = (0, 0, 0, 0);
    for (k, outcome) in &outcomes {
        summary.push_str(&summary_row(*k, outcome));
        summary.push('\n');
        let line = match outcome {
            Outcome::Certified { cert, reused: r } => {
                certified += 1;
                if *r {
                    reused += 1;
                }
                let witnesses: Vec<String> = cert
                    .witnesses
                    .iter()
                    .map(|(t, w)| format!("{t}:{}@{}", w.prime, w.trial))
                    .collect();
                format!(
                    "k={k} d={} {}{} {}",
                    cert.dimension,
                    if cert.vacuous { "vacuous" } else { "certified" },
                    if *r { " (resumed)" } else { "" },
                    witnesses.join(" ")
                )
            }
            Outcome::Empty => format!("k={k} d=0 vacuous (empty space)"),
            Outcome::Failed { d, error } => {
                failed += 1;
                format!("k={k} d={d} FAILED: {error}")
            }
            Outcome::Io(e) => {
                io_errors += 1;
                format!("k={k} I/O error: {e}")
            }
        };
        let _ = writeln!(out, "{line}");
    }
    if let Err(e) = write_atomic(&cfg.out_dir.join(SUMMARY_FILE), &summary) {
        let _ = writeln!(out, "error: cannot write summary: {e}");
        return EXIT_IO;
    }
    let _ = writeln!(
        out,
        "{} weights: {certified} certified ({reused} resumed), {failed} failed",
        outcomes.len()
    );
    if io_errors > 0 {
        EXIT_IO
    } else if failed > 0 {
        EXIT_FAILED
    } else {
        EXIT_OK
    }
}

/// Certificate files (`cert_*.json`) in a directory, ordered by weight.
pub fn certificate_files(dir: &Path) -> io::Result<Vec<PathBuf>> {
    let mut files: Vec<(u64, PathBuf)> = fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter_map(|p| {
            let name = p.file_name()?.to_str()?;
            let k = name.strip_prefix("cert_")?.strip_suffix(".json")?;
            Some((k.parse().unwrap_or(u64::MAX), p))
        })
        .collect();
    files.sort();
    Ok(files.into_iter().map(|(_, p)| p).collect())
}

/// Re-verify every certificate in `dir`.
pub fn cmd_check(dir: &Path, out: &mut dyn Write) -> i32 {
    let files = match certificate_files(dir) {
        Ok(f) => f,
        Err(e) => {
            let _ = writeln!(out, "error: cannot read {}: {e}", dir.display());
            return EXIT_IO;
        }
    };
    if files.is_empty() {
        let _ = writeln!(out, "warning: 0 certificates in {}", dir.display());
        return EXIT_OK;
    }
    let verdicts: Vec<Result<(), String>> = files
        .par_iter()
        .map(|path| {
            let cert = read_certificate(path)?;
            check_certificate(&cert).map_err(|f| format!("{}: {f}", f.code()))
        })
        .collect();
    let mut bad = 0;
    for (path, verdict) in files.iter().zip(&verdicts) {
        let name = path.file_name().unwrap_or_default().to_string_lossy();
        match verdict {
            Ok(()) => {
                let _ = writeln!(out, "{name}: OK");
            }
            Err(reason) => {
                bad += 1;
                let _ = writeln!(out, "{name}: FAIL {reason}");
            }
        }
    }
    let _ = writeln!(out, "{} certificates, {} failed", files.len(), bad);
    if bad > 0 {
        EXIT_FAILED
    } else {
        EXIT_OK
    }
}

/// One `(weight, type)` observation: primes drawn `n` against the expected
/// count `e = 1/D(d)`.
#[derive(Debug, Clone, PartialEq)]
pub struct StatRow {
    pub weight: u32,
    pub dimension: usize,
    pub ty: PrimeType,
    pub n: u64,
    pub expected: f64,
}

impl StatRow {
    pub fn ratio(&self) -> f64 {
        self.n as f64 / self.expected
    }
}

/// N/E observations for types I-III. Vacuous certificates contribute
/// nothing, and types whose density is undefined at `d` (type II for
/// `d ≤ 2`) are skipped.
pub fn stat_rows(certs: &[Certificate]) -> Vec<StatRow> {
    let mut rows = Vec::new();
    for cert in certs.iter().filter(|c| !c.vacuous) {
        for ty in PrimeType::REQUIRED {
            let (Some(w), Ok(expected)) = (cert.witness(ty), expected_trials(ty, cert.dimension))
            else {
                continue;
            };
            rows.push(StatRow {
                weight: cert.weight,
                dimension: cert.dimension,
                ty,
                n: w.trial,
                expected,
            });
        }
    }
    rows.sort_by_key(|r| (r.weight, r.ty));
    rows
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatioSummary {
    pub count: usize,
    pub min: f64,
    pub max: f64,
    pub median: f64,
    pub mean: f64,
}

pub fn summarize(values: &[f64]) -> Option<RatioSummary> {
    if values.is_empty() {
        return None;
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    let median = if n % 2 == 1 {
        v[n / 2]
    } else {
        (v[n / 2 - 1] + v[n / 2]) / 2.0
    };
    Some(RatioSummary {
        count: n,
        min: v[0],
        max: v[n - 1],
        median,
        mean: v.iter().sum::<f64>() / n as f64,
    })
}

/// Bin counts of `ratios` at [`BIN_WIDTH`], from 0 through the highest
/// occupied bin.
pub fn histogram(ratios: &[f64]) -> Vec<u64> {
    let index = |r: f64| ((r / BIN_WIDTH) + 1e-9).floor().max(0.0) as usize;
    let Some(top) = ratios.iter().map(|&r| index(r)).max() else {
        return Vec::new();
    };
    let mut bins = vec![0u64; top + 1];
    for &r in ratios {
        bins[index(r)] += 1;
    }
    bins
}

/// Load every certificate in `dir`, reporting unreadable ones to `out`.
pub fn load_certificates(dir: &Path, out: &mut dyn Write) -> io::Result<Vec<Certificate>> {
    let mut certs = Vec::new();
    for path in certificate_files(dir)? {
        match read_certificate(&path) {
            Ok(c) => certs.push(c),
            Err(e) => {
                let _ = writeln!(out, "warning: skipping {}: {e}", path.display());
            }
        }
    }
    Ok(certs)
}

/// Write `stats.csv` and `histogram_<type>.csv` for the certificates in
/// `dir`, and print min/max/median/mean of N/E per type.
pub fn cmd_stats(dir: &Path, out_dir: &Path, out: &mut dyn Write) -> i32 {
    match stats_inner(dir, out_dir, out) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(out, "error: {e}");
            EXIT_IO
        }
    }
}

fn stats_inner(dir: &Path, out_dir: &Path, out: &mut dyn Write) -> io::Result<()> {
    let certs = load_certificates(dir, out)?;
    let rows = stat_rows(&certs);
    fs::create_dir_all(out_dir)?;

    let mut csv = String::from("weight,d,type,N,E,ratio\n");
    for r in &rows {
        csv.push_str(&format!(
            "{},{},{},{},{:.6},{:.6}\n",
            r.weight,
            r.dimension,
            r.ty,
            r.n,
            r.expected,
            r.ratio()
        ));
    }
    fs::write(out_dir.join(STATS_FILE), csv)?;

    writeln!(
        out,
        "{} certificates, {} observations",
        certs.len(),
        rows.len()
    )?;
    for ty in PrimeType::REQUIRED {
        let ratios: Vec<f64> = rows
            .iter()
            .filter(|r| r.ty == ty)
            .map(StatRow::ratio)
            .collect();
        let mut hist = String::from("bin_start,bin_end,count\n");
        for (i, count) in histogram(&ratios).into_iter().enumerate() {
            hist.push_str(&format!(
                "{:.1},{:.1},{count}\n",
                i as f64 * BIN_WIDTH,
                (i + 1) as f64 * BIN_WIDTH
            ));
        }
        fs::write(out_dir.join(format!("histogram_{ty}.csv")), hist)?;

        writeln!(out, "type {ty}")?;
        match summarize(&ratios) {
            Some(s) => {
                writeln!(out, "  count {:>8}", s.count)?;
                writeln!(out, "  min   {:>8.2}", s.min)?;
                writeln!(out, "  max   {:>8.2}", s.max)?;
                writeln!(out, "  med   {:>8.2}", s.median)?;
                writeln!(out, "  mean  {:>8.2}", s.mean)?;
            }
            None => writeln!(out, "  no observations")?,
        }
    }
    Ok(())
}

fn fmt_density(report: &DensityReport, ty: PrimeType) -> String {
    match &report.exact[&ty] {
        Some(r) => format!("{r} ({:.6})", report.float(ty).unwrap()),
        None => "undefined".to_string(),
    }
}

fn fmt_bound(holds: Option<bool>) -> &'static str {
    match holds {
        Some(true) => "ok",
        Some(false) => "VIOLATED",
        None => "n/a",
    }
}

/// Print `D_I..D_IV`, expected trials and bound status for each `d`.
pub fn cmd_density(d_min: usize, d_max: usize, out: &mut dyn Write) -> i32 {
    if d_min < 1 || d_min > d_max {
        let _ = writeln!(out, "error: {}", ConfigError::DimensionRange(d_min, d_max));
        return EXIT_IO;
    }
    let mut violated = false;
    let mut write = || -> io::Result<()> {
        writeln!(
            out,
            "d\tD_I\tD_II\tD_III\tD_IV\tE_I\tE_II\tE_III\tE_IV\tD_II>1/(4sqrt d)\tD_III>1/(3log d)"
        )?;
        for d in d_min..=d_max {
            let r = DensityReport::new(d);
            let types = [PrimeType::I, PrimeType::II, PrimeType::III, PrimeType::IV];
            let dens: Vec<String> = types.iter().map(|&t| fmt_density(&r, t)).collect();
            let exp: Vec<String> = types
                .iter()
                .map(|&t| {
                    r.expected_trials(t)
                        .map_or("undefined".into(), |e| format!("{e:.3}"))
                })
                .collect();
            let (b2, b3) = (r.bound_ii_holds(), r.bound_iii_holds());
            violated |= b2 == Some(false) || b3 == Some(false);
            writeln!(
                out,
                "{d}\t{}\t{}\t{}\t{}",
                dens.join("\t"),
                exp.join("\t"),
                fmt_bound(b2),
                fmt_bound(b3)
            )?;
        }
        Ok(())
    };
    if let Err(e) = write() {
        let _ = writeln!(io::stderr(), "error: {e}");
        return EXIT_IO;
    }
    if violated {
        EXIT_FAILED
    } else {
        EXIT_OK
    }
}
