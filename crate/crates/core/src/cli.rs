//! Command-line front end: curve sweeps, Monte-Carlo runs and the
//! three-way validation grid.
//!
//! Exit codes: 0 success, 1 validation failure, 2 configuration error,
//! 3 numerical failure at one or more curve points.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Deserialize;

use crate::audit::{printed_avg_ber, printed_snr_cdf, PrintedCdfTop};
use crate::channel::{pointing_geometry, HopParams, Method, PointingParams};
use crate::dualhop::{combine_cdfs, DualHop, LinkConfig, Modulation, OutageRequest, Scheme};
use crate::montecarlo::{estimate_ber, estimate_outage, EstimateReport, SimPlan};

pub const EXIT_OK: u8 = 0;
pub const EXIT_VALIDATION: u8 = 1;
pub const EXIT_CONFIG: u8 = 2;
pub const EXIT_NUMERICAL: u8 = 3;

pub const CSV_HEADER: &str = "snr_db,value,stderr,method";

/// Two-sided 99.9% normal quantile.
pub const Z_999: f64 = 3.29;
/// Closed form and quadrature are compared only at or above this value.
pub const CLOSED_FORM_FLOOR: f64 = 1e-8;
/// Monte-Carlo comparisons apply only at or above this value.
pub const MC_FLOOR: f64 = 1e-4;

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

pub fn linear_to_db(x: f64) -> f64 {
    10.0 * x.log10()
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError(pub String);

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

fn cfg_err<T>(msg: impl Into<String>) -> Result<T, ConfigError> {
    Err(ConfigError(msg.into()))
}

/// `start:stop:step` in dB.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SnrGrid {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl SnrGrid {
    pub fn single(db: f64) -> Self {
        Self {
            start: db,
            stop: db,
            step: 1.0,
        }
    }

    /// Grid points in dB, computed as start + i·step.
    pub fn points(&self) -> Vec<f64> {
        let n = ((self.stop - self.start) / self.step + 1e-9).floor() as usize + 1;
        (0..n).map(|i| self.start + i as f64 * self.step).collect()
    }
}

impl FromStr for SnrGrid {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, ConfigError> {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return cfg_err(format!(
                "malformed SNR grid {s:?}: expected start:stop:step"
            ));
        }
        let mut v = [0.0; 3];
        for (slot, p) in v.iter_mut().zip(&parts) {
            *slot = p
                .trim()
                .parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .ok_or_else(|| {
                    ConfigError(format!("malformed SNR grid {s:?}: bad number {p:?}"))
                })?;
        }
        let [start, stop, step] = v;
        if !(step > 0.0) {
            return cfg_err(format!("SNR grid step must be > 0, got {step}"));
        }
        if stop < start {
            return cfg_err(format!("SNR grid stop {stop} is below start {start}"));
        }
        Ok(Self { start, stop, step })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CliMethod {
    ClosedForm,
    Quadrature,
    Mc,
}

impl CliMethod {
    pub fn tag(self) -> &'static str {
        match self {
            CliMethod::ClosedForm => "closed-form",
            CliMethod::Quadrature => "quadrature",
            CliMethod::Mc => crate::montecarlo::METHOD_TAG,
        }
    }
}

/// Which closed forms the validation grid checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ClosedFormVariant {
    Corrected,
    /// The uncorrected expressions, evaluated literally; a negative control.
    Printed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SchemeArg {
    Cbpsk,
    Nbfsk,
}

impl From<SchemeArg> for Scheme {
    fn from(s: SchemeArg) -> Self {
        match s {
            SchemeArg::Cbpsk => Scheme::Cbpsk,
            SchemeArg::Nbfsk => Scheme::Nbfsk,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "fso-relay",
    version,
    about = "Dual-hop DF FSO link: outage and BER curves, Monte Carlo, validation"
)]
struct Cli {
    #[command(subcommand)]
    command: CommandArgs,
}

#[derive(Debug, Subcommand)]
enum CommandArgs {
    /// Outage probability against average SNR.
    CurveOutage(Args),
    /// Average BER against average SNR.
    CurveBer(Args),
    /// Monte-Carlo outage against average SNR.
    McOutage(Args),
    /// Monte-Carlo BER against average SNR.
    McBer(Args),
    /// Closed form vs quadrature vs Monte Carlo over a parameter grid.
    Validate(Args),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    CurveOutage,
    CurveBer,
    McOutage,
    McBer,
    Validate,
}

impl Command {
    fn is_ber(self) -> bool {
        matches!(self, Command::CurveBer | Command::McBer)
    }
}

#[derive(Debug, Default, Clone, clap::Args, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
struct Args {
    /// Turbulence shape of the first hop.
    #[arg(long)]
    alpha1: Option<f64>,
    /// Turbulence shape of the second hop (defaults to alpha1).
    #[arg(long)]
    alpha2: Option<f64>,
    /// Pointing ratio ω_zeq/(2σ_s); needs --a0.
    #[arg(long)]
    g: Option<f64>,
    /// Peak collected power fraction.
    #[arg(long)]
    a0: Option<f64>,
    /// Aperture radius (with --omega-z and --sigma-s).
    #[arg(long)]
    r: Option<f64>,
    /// Beam waist at the receiver.
    #[arg(long)]
    omega_z: Option<f64>,
    /// Jitter standard deviation.
    #[arg(long)]
    sigma_s: Option<f64>,
    /// Single average SNR (μ) in dB.
    #[arg(long)]
    mu_db: Option<f64>,
    /// Average SNR grid start:stop:step in dB.
    #[arg(long)]
    snr_db: Option<String>,
    /// Outage threshold in dB.
    #[arg(long)]
    gamma_th_db: Option<f64>,
    #[arg(long, value_enum)]
    modulation: Option<SchemeArg>,
    #[arg(long, value_enum)]
    method: Option<CliMethod>,
    /// Monte-Carlo sample count.
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Output file; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// TOML file with the same keys as the long flags.
    #[arg(long)]
    #[serde(skip)]
    config: Option<PathBuf>,
    /// Validation grid: turbulence shapes.
    #[arg(long, value_delimiter = ',')]
    alphas: Option<Vec<f64>>,
    /// Validation grid: pointing ratios.
    #[arg(long, value_delimiter = ',')]
    gs: Option<Vec<f64>>,
    /// Validation grid: average SNRs in dB.
    #[arg(long, value_delimiter = ',')]
    mus_db: Option<Vec<f64>>,
    /// Validation grid: outage thresholds in dB.
    #[arg(long, value_delimiter = ',')]
    gamma_ths_db: Option<Vec<f64>>,
    /// Validation: closed-form vs quadrature relative tolerance.
    #[arg(long)]
    tolerance: Option<f64>,
    /// Validation: closed forms to check.
    #[arg(long, value_enum)]
    closed_form: Option<ClosedFormVariant>,
}

impl Args {
    /// Fills every unset field from `file`.
    fn or(self, file: Args) -> Args {
        macro_rules! merge {
            ($($f:ident),*) => { Args { $($f: self.$f.or(file.$f),)* } };
        }
        merge!(
            alpha1,
            alpha2,
            g,
            a0,
            r,
            omega_z,
            sigma_s,
            mu_db,
            snr_db,
            gamma_th_db,
            modulation,
            method,
            samples,
            seed,
            out,
            config,
            alphas,
            gs,
            mus_db,
            gamma_ths_db,
            tolerance,
            closed_form
        )
    }
}

/// Validation grid and its pass criteria.
#[derive(Debug, Clone, PartialEq)]
pub struct ValidateGrid {
    pub alphas: Vec<f64>,
    pub gs: Vec<f64>,
    pub mus_db: Vec<f64>,
    pub gamma_ths_db: Vec<f64>,
    pub tolerance: f64,
    pub closed_form: ClosedFormVariant,
}

impl Default for ValidateGrid {
    fn default() -> Self {
        Self {
            alphas: vec![1.0, 2.0, 4.0],
            gs: vec![1.2, 4.0],
            mus_db: vec![10.0, 20.0, 30.0],
            gamma_ths_db: vec![0.0, 10.0],
            tolerance: 1e-4,
            closed_form: ClosedFormVariant::Corrected,
        }
    }
}

/// Fully resolved run configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub alpha1: f64,
    pub alpha2: f64,
    /// Absent only for `validate`, where g comes from the grid.
    pub pointing: Option<PointingParams>,
    pub a0: f64,
    pub snr_grid_db: SnrGrid,
    pub gamma_th_db: f64,
    pub modulation: Scheme,
    pub method: CliMethod,
    pub n_samples: usize,
    pub seed: u64,
    pub output_path: Option<PathBuf>,
    pub validate: ValidateGrid,
}

pub const DEFAULT_ALPHA: f64 = 2.0;
pub const DEFAULT_GAMMA_TH_DB: f64 = 10.0;
pub const DEFAULT_SAMPLES: usize = 1_000_000;
pub const DEFAULT_SEED: u64 = 1;
pub const DEFAULT_SNR_GRID: &str = "0:60:1";

fn positive(name: &str, v: f64) -> Result<f64, ConfigError> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        cfg_err(format!("--{name} must be finite and > 0, got {v}"))
    }
}

fn finite(name: &str, v: f64) -> Result<f64, ConfigError> {
    if v.is_finite() {
        Ok(v)
    } else {
        cfg_err(format!("--{name} must be finite, got {v}"))
    }
}

fn read_config_file(path: &Path) -> Result<Args, ConfigError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| ConfigError(format!("cannot read config {}: {e}", path.display())))?;
    toml::from_str(&text).map_err(|e| ConfigError(format!("bad config {}: {e}", path.display())))
}

/// Parses argv (program name first) and the optional `--config` file.
/// Flags override file values.
pub fn parse_config<I, T>(argv: I) -> Result<RunConfig, ConfigError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = Cli::try_parse_from(argv).map_err(|e| ConfigError(e.to_string()))?;
    let (command, args) = match cli.command {
        CommandArgs::CurveOutage(a) => (Command::CurveOutage, a),
        CommandArgs::CurveBer(a) => (Command::CurveBer, a),
        CommandArgs::McOutage(a) => (Command::McOutage, a),
        CommandArgs::McBer(a) => (Command::McBer, a),
        CommandArgs::Validate(a) => (Command::Validate, a),
    };
    let args = match args.config.clone() {
        Some(path) => args.or(read_config_file(&path)?),
        None => args,
    };
    resolve(command, args)
}

fn resolve(command: Command, a: Args) -> Result<RunConfig, ConfigError> {
    let validate = command == Command::Validate;
    let validate_only = [
        ("alphas", a.alphas.is_some()),
        ("gs", a.gs.is_some()),
        ("mus-db", a.mus_db.is_some()),
        ("gamma-ths-db", a.gamma_ths_db.is_some()),
        ("tolerance", a.tolerance.is_some()),
        ("closed-form", a.closed_form.is_some()),
    ];
    if !validate {
        if let Some((name, _)) = validate_only.iter().find(|(_, set)| *set) {
            return cfg_err(format!("--{name} applies only to validate"));
        }
    }

    let alpha1 = positive("alpha1", a.alpha1.unwrap_or(DEFAULT_ALPHA))?;
    let alpha2 = positive("alpha2", a.alpha2.unwrap_or(alpha1))?;

    let triple = [a.r, a.omega_z, a.sigma_s];
    let n_geom = triple.iter().filter(|v| v.is_some()).count();
    if n_geom != 0 && n_geom != 3 {
        return cfg_err("geometry needs all of --r, --omega-z and --sigma-s");
    }
    let geometry = match triple {
        [Some(r), Some(w), Some(s)] => {
            if a.g.is_some() || a.a0.is_some() {
                return cfg_err("give either --g with --a0 or the geometry triple, not both");
            }
            Some(pointing_geometry(r, w, s).map_err(|e| ConfigError(e.to_string()))?)
        }
        _ => None,
    };
    let pointing = match (geometry, a.g, a.a0) {
        (Some(p), _, _) => Some(p),
        (None, Some(g), Some(a0)) => {
            Some(PointingParams::new(g, a0).map_err(|e| ConfigError(e.to_string()))?)
        }
        (None, Some(_), None) => {
            return cfg_err(
                "--g needs --a0 as well (or give the geometry triple --r --omega-z --sigma-s)",
            )
        }
        (None, None, _) if !validate => {
            return cfg_err(
                "pointing parameters missing: give --g with --a0, or --r --omega-z --sigma-s",
            )
        }
        (None, None, _) => None,
    };
    if validate && a.g.is_some() {
        return cfg_err("validate sweeps g itself; use --gs");
    }
    let a0 = match (pointing, a.a0) {
        (Some(p), _) => p.a0,
        (None, Some(a0)) => {
            PointingParams::new(1.0, a0).map_err(|e| ConfigError(e.to_string()))?;
            a0
        }
        (None, None) => {
            return cfg_err("validate needs --a0 (or --r --omega-z --sigma-s for A0)");
        }
    };

    let snr_grid_db = match (a.mu_db, a.snr_db.as_deref()) {
        (Some(_), Some(_)) => return cfg_err("give either --mu-db or --snr-db, not both"),
        (Some(mu), None) => SnrGrid::single(finite("mu-db", mu)?),
        (None, Some(s)) => s.parse()?,
        (None, None) => DEFAULT_SNR_GRID.parse()?,
    };
    let gamma_th_db = finite("gamma-th-db", a.gamma_th_db.unwrap_or(DEFAULT_GAMMA_TH_DB))?;

    let mc_command = matches!(command, Command::McOutage | Command::McBer);
    let method = match (a.method, mc_command) {
        (None, true) => CliMethod::Mc,
        (None, false) => CliMethod::Quadrature,
        (Some(m), true) if m != CliMethod::Mc => {
            return cfg_err("mc-outage and mc-ber only support --method mc")
        }
        (Some(m), _) => m,
    };
    let n_samples = a.samples.unwrap_or(DEFAULT_SAMPLES);
    if n_samples == 0 {
        return cfg_err("--samples must be >= 1");
    }

    let mut grid = ValidateGrid::default();
    if let Some(v) = a.alphas {
        grid.alphas = v;
    }
    if let Some(v) = a.gs {
        grid.gs = v;
    }
    if let Some(v) = a.mus_db {
        grid.mus_db = v;
    }
    if let Some(v) = a.gamma_ths_db {
        grid.gamma_ths_db = v;
    }
    if let Some(t) = a.tolerance {
        grid.tolerance = positive("tolerance", t)?;
    }
    if let Some(c) = a.closed_form {
        grid.closed_form = c;
    }
    if validate {
        for (name, v) in [
            ("alphas", &grid.alphas),
            ("gs", &grid.gs),
            ("mus-db", &grid.mus_db),
        ] {
            if v.is_empty() {
                return cfg_err(format!("validation grid --{name} is empty"));
            }
        }
        for &x in grid.alphas.iter().chain(&grid.gs) {
            positive("alphas/--gs", x)?;
        }
        for &x in grid.mus_db.iter().chain(&grid.gamma_ths_db) {
            finite("mus-db/--gamma-ths-db", x)?;
        }
    }

    Ok(RunConfig {
        command,
        alpha1,
        alpha2,
        pointing,
        a0,
        snr_grid_db,
        gamma_th_db,
        modulation: a.modulation.unwrap_or(SchemeArg::Cbpsk).into(),
        method,
        n_samples,
        seed: a.seed.unwrap_or(DEFAULT_SEED),
        output_path: a.out,
        validate: grid,
    })
}

/// Physical parameters after derivation, one `key = value` per line.
pub fn describe(cfg: &RunConfig) -> String {
    let mut s = String::new();
    if cfg.command != Command::Validate {
        let _ = writeln!(s, "alpha1 = {}", cfg.alpha1);
        let _ = writeln!(s, "alpha2 = {}", cfg.alpha2);
    }
    if let Some(p) = cfg.pointing {
        let _ = writeln!(s, "g = {}", p.g);
        if let Some(geo) = p.geometry {
            let _ = writeln!(
                s,
                "geometry = r {} omega_z {} sigma_s {} (theta {}, omega_zeq {})",
                geo.r, geo.omega_z, geo.sigma_s, geo.theta, geo.omega_zeq
            );
        }
    }
    let _ = writeln!(s, "A0 = {}", cfg.a0);
    if cfg.command == Command::Validate {
        let v = &cfg.validate;
        let _ = writeln!(s, "grid alphas = {:?}", v.alphas);
        let _ = writeln!(s, "grid gs = {:?}", v.gs);
        let _ = writeln!(s, "grid mu_db = {:?}", v.mus_db);
        let _ = writeln!(s, "grid gamma_th_db = {:?}", v.gamma_ths_db);
        let _ = writeln!(s, "tolerance = {:e}", v.tolerance);
        let _ = writeln!(s, "closed_form = {:?}", v.closed_form);
    } else {
        let g = cfg.snr_grid_db;
        let _ = writeln!(s, "snr_db = {}:{}:{}", g.start, g.stop, g.step);
        if cfg.command.is_ber() {
            let m = Modulation::of(cfg.modulation);
            let _ = writeln!(s, "modulation = {} (p = {}, q = {})", m.scheme, m.p, m.q);
        } else {
            let _ = writeln!(
                s,
                "gamma_th = {} ({} dB)",
                db_to_linear(cfg.gamma_th_db),
                cfg.gamma_th_db
            );
        }
        let _ = writeln!(s, "method = {}", cfg.method.tag());
    }
    if cfg.method == CliMethod::Mc || cfg.command == Command::Validate {
        let _ = writeln!(s, "samples = {}", cfg.n_samples);
        let _ = writeln!(s, "seed = {}", cfg.seed);
    }
    let _ = writeln!(
        s,
        "note = mu is the SNR scale in gamma = mu h^2, not E[gamma]"
    );
    s
}

/// One curve point: value and, for Monte Carlo, its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvePoint {
    pub snr_db: f64,
    pub value: f64,
    pub stderr: Option<f64>,
}

fn link_at(cfg: &RunConfig, pointing: PointingParams, mu: f64) -> crate::Result<LinkConfig> {
    let hop1 = HopParams::new(cfg.alpha1, mu, pointing)?;
    let hop2 = HopParams::new(cfg.alpha2, mu, pointing)?;
    Ok(LinkConfig::new(hop1, hop2))
}

fn curve_value(cfg: &RunConfig, snr_db: f64) -> crate::Result<(f64, Option<f64>)> {
    let pointing = cfg
        .pointing
        .expect("curve commands always resolve pointing parameters");
    let link = link_at(cfg, pointing, db_to_linear(snr_db))?;
    let gamma_th = db_to_linear(cfg.gamma_th_db);
    let m = Modulation::of(cfg.modulation);
    let method = match cfg.method {
        CliMethod::Mc => {
            let plan = SimPlan::new(cfg.n_samples, cfg.seed)?;
            let r = if cfg.command.is_ber() {
                estimate_ber(&link, &m, &plan)?
            } else {
                estimate_outage(&link, &OutageRequest::new(gamma_th)?, &plan)?
            };
            return Ok((r.value, Some(r.stderr)));
        }
        CliMethod::ClosedForm => Method::ClosedForm,
        CliMethod::Quadrature => Method::Quadrature,
    };
    let dh = DualHop::new(&link)?;
    let v = if cfg.command.is_ber() {
        dh.avg_ber(&m, method)?
    } else {
        dh.outage(gamma_th, method)?
    };
    Ok((v, None))
}

/// Evaluates the curve; a point that fails numerically carries `nan`.
pub fn run_curve(cfg: &RunConfig) -> (Vec<CurvePoint>, Vec<String>) {
    let points = cfg.snr_grid_db.points();
    let eval = |&snr_db: &f64| match curve_value(cfg, snr_db) {
        Ok((value, stderr)) if value.is_finite() => (
            CurvePoint {
                snr_db,
                value,
                stderr,
            },
            None,
        ),
        Ok((value, _)) => (
            CurvePoint {
                snr_db,
                value: f64::NAN,
                stderr: None,
            },
            Some(format!("snr_db {snr_db}: non-finite value {value}")),
        ),
        Err(e) => (
            CurvePoint {
                snr_db,
                value: f64::NAN,
                stderr: None,
            },
            Some(format!("snr_db {snr_db}: {e}")),
        ),
    };
    // Monte-Carlo points are parallel internally.
    let results: Vec<_> = if cfg.method == CliMethod::Mc {
        points.iter().map(eval).collect()
    } else {
        points.par_iter().map(eval).collect()
    };
    let mut failures = Vec::new();
    let mut rows = Vec::with_capacity(results.len());
    for (p, f) in results {
        rows.push(p);
        failures.extend(f);
    }
    (rows, failures)
}

pub fn format_csv(rows: &[CurvePoint], method: CliMethod) -> String {
    let mut s = String::from(CSV_HEADER);
    s.push('\n');
    for r in rows {
        let value = if r.value.is_nan() {
            "nan".to_string()
        } else {
            format!("{:e}", r.value)
        };
        let stderr = r.stderr.map(|e| format!("{e:e}")).unwrap_or_default();
        let _ = writeln!(s, "{},{},{},{}", r.snr_db, value, stderr, method.tag());
    }
    s
}

#[derive(Debug, Clone, PartialEq)]
pub enum CaseKind {
    Outage { gamma_th: f64 },
    Ber { scheme: Scheme },
}

/// One validation case with all three evaluations.
#[derive(Debug, Clone, PartialEq)]
pub struct CaseRecord {
    pub index: usize,
    pub kind: CaseKind,
    pub alpha: f64,
    pub g: f64,
    pub a0: f64,
    pub mu: f64,
    pub closed_form: Result<f64, String>,
    pub quadrature: Result<f64, String>,
    pub monte_carlo: Result<EstimateReport, String>,
    pub rel_discrepancy: Option<f64>,
    /// |quadrature − MC| in units of the band's standard error.
    pub z_score: Option<f64>,
    pub pass: bool,
    pub reasons: Vec<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    pub cases: Vec<CaseRecord>,
    pub passed: bool,
}

struct CaseSpec {
    index: usize,
    kind: CaseKind,
    alpha: f64,
    g: f64,
    mu: f64,
}

fn grid_cases(grid: &ValidateGrid) -> Vec<CaseSpec> {
    let mut cases = Vec::new();
    for &alpha in &grid.alphas {
        for &g in &grid.gs {
            for &mu_db in &grid.mus_db {
                let mu = db_to_linear(mu_db);
                let kinds = grid
                    .gamma_ths_db
                    .iter()
                    .map(|&t| CaseKind::Outage {
                        gamma_th: db_to_linear(t),
                    })
                    .chain([Scheme::Cbpsk, Scheme::Nbfsk].map(|scheme| CaseKind::Ber { scheme }));
                for kind in kinds {
                    cases.push(CaseSpec {
                        index: cases.len(),
                        kind,
                        alpha,
                        g,
                        mu,
                    });
                }
            }
        }
    }
    cases
}

fn printed_closed_form(link: &LinkConfig, kind: &CaseKind) -> crate::Result<f64> {
    match kind {
        CaseKind::Outage { gamma_th } => {
            let f1 = printed_snr_cdf(*gamma_th, &link.hop1, PrintedCdfTop::MinusOne)?;
            let f2 = printed_snr_cdf(*gamma_th, &link.hop2, PrintedCdfTop::MinusOne)?;
            Ok(combine_cdfs(f1, f2))
        }
        CaseKind::Ber { scheme } => {
            let m = Modulation::of(*scheme);
            printed_avg_ber(&link.hop1, &link.hop2, m.p, m.q)
        }
    }
}

fn run_case(cfg: &RunConfig, c: &CaseSpec) -> CaseRecord {
    let grid = &cfg.validate;
    let mut rec = CaseRecord {
        index: c.index,
        kind: c.kind.clone(),
        alpha: c.alpha,
        g: c.g,
        a0: cfg.a0,
        mu: c.mu,
        closed_form: Err("not evaluated".into()),
        quadrature: Err("not evaluated".into()),
        monte_carlo: Err("not evaluated".into()),
        rel_discrepancy: None,
        z_score: None,
        pass: false,
        reasons: Vec::new(),
    };
    let link = match PointingParams::new(c.g, cfg.a0)
        .and_then(|p| HopParams::new(c.alpha, c.mu, p))
        .map(LinkConfig::symmetric)
    {
        Ok(l) => l,
        Err(e) => {
            rec.reasons.push(format!("invalid parameters: {e}"));
            return rec;
        }
    };
    let dh = match DualHop::new(&link) {
        Ok(d) => d,
        Err(e) => {
            rec.reasons.push(format!("channel construction: {e}"));
            return rec;
        }
    };
    let eval = |method| match &c.kind {
        CaseKind::Outage { gamma_th } => dh.outage(*gamma_th, method),
        CaseKind::Ber { scheme } => dh.avg_ber(&Modulation::of(*scheme), method),
    };
    rec.quadrature = eval(Method::Quadrature).map_err(|e| e.to_string());
    rec.closed_form = match grid.closed_form {
        ClosedFormVariant::Corrected => eval(Method::ClosedForm),
        ClosedFormVariant::Printed => printed_closed_form(&link, &c.kind),
    }
    .map_err(|e| e.to_string());
    let seed = cfg.seed.wrapping_add(c.index as u64);
    rec.monte_carlo = SimPlan::new(cfg.n_samples, seed)
        .and_then(|plan| match &c.kind {
            CaseKind::Outage { gamma_th } => estimate_outage(
                &link,
                &OutageRequest {
                    gamma_th: *gamma_th,
                },
                &plan,
            ),
            CaseKind::Ber { scheme } => estimate_ber(&link, &Modulation::of(*scheme), &plan),
        })
        .map_err(|e| e.to_string());

    let q = match &rec.quadrature {
        Ok(q) => *q,
        Err(e) => {
            rec.reasons.push(format!("quadrature failed: {e}"));
            return rec;
        }
    };
    match &rec.closed_form {
        Ok(cf) => {
            let rel = ((cf - q) / q).abs();
            rec.rel_discrepancy = Some(rel);
            if q >= CLOSED_FORM_FLOOR && !(rel <= grid.tolerance) {
                rec.reasons.push(format!(
                    "closed form off by {rel:.3e} relative (ratio {:.6})",
                    cf / q
                ));
            }
        }
        Err(e) => rec.reasons.push(format!("closed form failed: {e}")),
    }
    match &rec.monte_carlo {
        Ok(mc) => {
            // Under the null the band width is set by the analytic value,
            // which keeps the test meaningful when every trial agrees.
            let null_se = match c.kind {
                CaseKind::Outage { .. } => (q * (1.0 - q) / mc.n as f64).sqrt(),
                CaseKind::Ber { .. } => 0.0,
            };
            let se = mc.stderr.max(null_se);
            let diff = (q - mc.value).abs();
            rec.z_score = Some(if se > 0.0 {
                diff / se
            } else if diff == 0.0 {
                0.0
            } else {
                f64::INFINITY
            });
            if q >= MC_FLOOR && !(diff <= Z_999 * se) {
                rec.reasons.push(format!(
                    "quadrature {q:e} outside the 99.9% band of Monte Carlo {:e} ± {:e}",
                    mc.value, mc.stderr
                ));
            }
        }
        Err(e) => rec.reasons.push(format!("monte carlo failed: {e}")),
    }
    rec.pass = rec.reasons.is_empty();
    rec
}

/// Runs the full validation grid. Every case is reported.
pub fn run_validate(cfg: &RunConfig) -> ValidationReport {
    let cases: Vec<CaseRecord> = grid_cases(&cfg.validate)
        .iter()
        .map(|c| run_case(cfg, c))
        .collect();
    let passed = cases.iter().all(|c| c.pass);
    ValidationReport { cases, passed }
}

fn fmt_result(r: &Result<f64, String>) -> String {
    match r {
        Ok(v) => format!("{v:e}"),
        Err(e) => format!("error: {e}"),
    }
}

impl ValidationReport {
    /// Key-value text, one block per case.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for c in &self.cases {
            let _ = writeln!(s, "[case {}]", c.index);
            match &c.kind {
                CaseKind::Outage { gamma_th } => {
                    let _ = writeln!(s, "metric = outage");
                    let _ = writeln!(s, "gamma_th = {gamma_th}");
                }
                CaseKind::Ber { scheme } => {
                    let _ = writeln!(s, "metric = ber");
                    let _ = writeln!(s, "modulation = {scheme}");
                }
            }
            let _ = writeln!(s, "alpha = {}", c.alpha);
            let _ = writeln!(s, "g = {}", c.g);
            let _ = writeln!(s, "a0 = {}", c.a0);
            let _ = writeln!(s, "mu = {}", c.mu);
            let _ = writeln!(s, "closed_form = {}", fmt_result(&c.closed_form));
            let _ = writeln!(s, "quadrature = {}", fmt_result(&c.quadrature));
            match &c.monte_carlo {
                Ok(mc) => {
                    let _ = writeln!(s, "monte_carlo = {:e}", mc.value);
                    let _ = writeln!(s, "mc_stderr = {:e}", mc.stderr);
                    let _ = writeln!(s, "mc_samples = {}", mc.n);
                    let _ = writeln!(s, "mc_seed = {}", mc.seed);
                }
                Err(e) => {
                    let _ = writeln!(s, "monte_carlo = error: {e}");
                }
            }
            if let Some(r) = c.rel_discrepancy {
                let _ = writeln!(s, "rel_discrepancy = {r:e}");
            }
            if let Some(z) = c.z_score {
                let _ = writeln!(s, "z_score = {z:.3}");
            }
            let _ = writeln!(s, "verdict = {}", if c.pass { "pass" } else { "fail" });
            for r in &c.reasons {
                let _ = writeln!(s, "reason = {r}");
            }
            s.push('\n');
        }
        let failed = self.cases.iter().filter(|c| !c.pass).count();
        let _ = writeln!(s, "cases = {}", self.cases.len());
        let _ = writeln!(s, "failed = {failed}");
        let _ = writeln!(s, "overall = {}", if self.passed { "pass" } else { "fail" });
        s
    }
}

fn emit(cfg: &RunConfig, text: &str, out: &mut dyn Write) -> std::io::Result<()> {
    match &cfg.output_path {
        Some(p) => std::fs::write(p, text),
        None => out.write_all(text.as_bytes()),
    }
}

/// Runs the tool; returns the process exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv: Vec<OsString> = argv.into_iter().map(Into::into).collect();
    if let Err(e) = Cli::try_parse_from(&argv) {
        use clap::error::ErrorKind;
        if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
            let _ = write!(out, "{e}");
            return EXIT_OK;
        }
    }
    let cfg = match parse_config(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_CONFIG;
        }
    };
    let _ = write!(err, "{}", describe(&cfg));
    match cfg.command {
        Command::Validate => {
            let report = run_validate(&cfg);
            if let Err(e) = emit(&cfg, &report.to_text(), out) {
                let _ = writeln!(err, "error: cannot write output: {e}");
                return EXIT_CONFIG;
            }
            for c in report.cases.iter().filter(|c| !c.pass) {
                let _ = writeln!(err, "case {} failed: {}", c.index, c.reasons.join("; "));
            }
            if report.passed {
                EXIT_OK
            } else {
                EXIT_VALIDATION
            }
        }
        _ => {
            let (rows, failures) = run_curve(&cfg);
            if let Err(e) = emit(&cfg, &format_csv(&rows, cfg.method), out) {
                let _ = writeln!(err, "error: cannot write output: {e}");
                return EXIT_CONFIG;
            }
            for f in &failures {
                let _ = writeln!(err, "numerical failure at {f}");
            }
            if failures.is_empty() {
                EXIT_OK
            } else {
                EXIT_NUMERICAL
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_parsing() {
        assert_eq!("0:60:10".parse::<SnrGrid>().unwrap().points().len(), 7);
        assert_eq!("0:60:1".parse::<SnrGrid>().unwrap().points().len(), 61);
        assert_eq!("0:1:0.1".parse::<SnrGrid>().unwrap().points().len(), 11);
        assert!("0:60".parse::<SnrGrid>().is_err());
        assert!("0:60:0".parse::<SnrGrid>().is_err());
        assert!("10:0:1".parse::<SnrGrid>().is_err());
        assert!("a:1:1".parse::<SnrGrid>().is_err());
    }

    #[test]
    fn db_round_trip() {
        for x in [-30.0, -3.3, 0.0, 7.25, 13.0, 60.0] {
            let y = linear_to_db(db_to_linear(x));
            assert!((y - x).abs() <= 1e-12 * x.abs().max(1.0), "{x} -> {y}");
        }
    }

    #[test]
    fn validation_grid_size() {
        assert_eq!(grid_cases(&ValidateGrid::default()).len(), 3 * 2 * 3 * 4);
    }
}
