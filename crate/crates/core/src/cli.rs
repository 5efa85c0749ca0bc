//! Command-line front end.
//!
//! Every subcommand computes its full result before writing anything. Angles
//! on the command line are in degrees. Floats in CSV and JSON output carry 17
//! significant digits, enough to round-trip any `f64`.
//!
//! Exit codes: 0 success, 1 numeric or verification failure, 2 usage error.

use std::f64::consts::{FRAC_1_SQRT_2, PI, TAU};
use std::fmt::{self, Write as _};
use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::de::Error as _;
use serde::{Deserialize, Serialize, Serializer};
use serde_json::value::RawValue;

use crate::analysis::{self, linear_grid, phase_diagram, theta_sweep};
use crate::coin::{make_coin, AngleMode, CoinMatrix, CoinParams, NamedCoin};
use crate::entanglement::{entanglement_trace, DEFAULT_RANK_TOL};
use crate::error::Error;
use crate::evolution::{compare_engines, run_walk, StepDiscrepancy, DENSE_MAX_HALF_WIDTH, ORACLE_TOL};
use crate::state::{check_normalized, ProbabilityDistribution};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Upper bound on the number of points a single grid may expand to.
pub const MAX_GRID_POINTS: usize = 10_000;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Numeric(Error),
    #[error("engine verification failed: {0}")]
    Verification(String),
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            _ => EXIT_FAILURE,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::NotNormalized { .. } | Error::UnknownCoin { .. } => CliError::Usage(e.to_string()),
            other => CliError::Numeric(other),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "qwalk", version, about = "Discrete-time quantum walks on a line with a general coin")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Probability distribution of a single walk.
    Walk(WalkArgs),
    /// One walk per θ on a grid.
    SweepTheta(SweepThetaArgs),
    /// Peak gap over a (φ₁, φ₂) grid at fixed θ.
    PhaseDiagram(PhaseDiagramArgs),
    /// Schmidt rank and entanglement entropy after every step.
    Entanglement(EntanglementArgs),
    /// Compare the recurrence engine against the dense unitary oracle.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum InitPreset {
    /// (|H> − i|T>)/√2
    Unbiased,
    /// |H>
    Head,
    /// |T>
    Tail,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, Args)]
pub struct CoinArgs {
    /// Named coin; overrides the angle flags.
    #[arg(long, conflicts_with_all = ["theta_deg", "phi1_deg", "phi2_deg"])]
    pub coin: Option<NamedCoin>,
    /// Rotation θ in degrees [default: 45].
    #[arg(long, allow_negative_numbers = true)]
    pub theta_deg: Option<f64>,
    /// Phase φ₁ in degrees [default: 0].
    #[arg(long, allow_negative_numbers = true)]
    pub phi1_deg: Option<f64>,
    /// Phase φ₂ in degrees [default: 0].
    #[arg(long, allow_negative_numbers = true)]
    pub phi2_deg: Option<f64>,
    #[command(flatten)]
    pub angles: AngleArgs,
}

#[derive(Debug, Clone, Args)]
pub struct AngleArgs {
    /// Use the angles verbatim instead of reducing θ into [0°, 360°) and
    /// the phases into [0°, 180°).
    #[arg(long)]
    pub no_normalize_angles: bool,
}

impl AngleArgs {
    pub fn mode(&self) -> AngleMode {
        if self.no_normalize_angles {
            AngleMode::Raw
        } else {
            AngleMode::Normalize
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct InitArgs {
    /// Initial coin state preset [default: unbiased].
    #[arg(long, value_enum, conflicts_with_all = ["alpha_re", "alpha_im", "beta_re", "beta_im"])]
    pub init: Option<InitPreset>,
    #[arg(long, allow_negative_numbers = true)]
    pub alpha_re: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub alpha_im: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub beta_re: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub beta_im: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
    pub format: OutputFormat,
    /// Output file [default: standard output].
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct WalkArgs {
    #[command(flatten)]
    pub coin: CoinArgs,
    #[command(flatten)]
    pub init: InitArgs,
    /// Number of steps, also the lattice half-width.
    #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u32).range(1..))]
    pub steps: u32,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct SweepThetaArgs {
    /// θ values in degrees, `start:stop:step` (inclusive) or a comma list.
    #[arg(long, default_value = "0:315:45")]
    pub theta_grid: GridSpec,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub phi1_deg: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub phi2_deg: f64,
    #[command(flatten)]
    pub angles: AngleArgs,
    #[command(flatten)]
    pub init: InitArgs,
    #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u32).range(1..))]
    pub steps: u32,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct PhaseDiagramArgs {
    #[arg(long, default_value_t = 45.0, allow_negative_numbers = true)]
    pub theta_deg: f64,
    /// φ₁ values in degrees, `start:stop:step` (inclusive) or a comma list.
    #[arg(long, default_value = "0:180:30")]
    pub phi1_grid: GridSpec,
    /// φ₂ values in degrees, `start:stop:step` (inclusive) or a comma list.
    #[arg(long, default_value = "0:150:30")]
    pub phi2_grid: GridSpec,
    #[command(flatten)]
    pub angles: AngleArgs,
    #[command(flatten)]
    pub init: InitArgs,
    #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u32).range(1..))]
    pub steps: u32,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct EntanglementArgs {
    #[command(flatten)]
    pub coin: CoinArgs,
    #[command(flatten)]
    pub init: InitArgs,
    /// Number of steps; rows are written for t = 0..=steps.
    #[arg(long, default_value_t = 100)]
    pub steps: u32,
    /// Relative tolerance for counting Schmidt coefficients.
    #[arg(long, default_value_t = DEFAULT_RANK_TOL)]
    pub tol: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub coin: CoinArgs,
    #[command(flatten)]
    pub init: InitArgs,
    /// Steps to compare, also the window half-width of the dense engine.
    #[arg(long, default_value_t = 30, value_parser = clap::value_parser!(u32).range(1..=DENSE_MAX_HALF_WIDTH as i64))]
    pub max_steps: u32,
    /// Additionally compare this many random (θ, φ₁, φ₂, α, β) draws.
    #[arg(long, default_value_t = 0)]
    pub random_draws: u32,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Adds this value to the recurrence engine's C₀₀ entry only.
    #[arg(long, hide = true, allow_negative_numbers = true)]
    pub corrupt_coin: Option<f64>,
    /// Report file [default: standard output].
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Grid of angles in degrees.
#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec {
    values: Vec<f64>,
}

impl GridSpec {
    pub fn values_deg(&self) -> &[f64] {
        &self.values
    }

    pub fn values_rad(&self) -> Vec<f64> {
        analysis::degrees_to_radians(&self.values)
    }
}

fn parse_angle(s: &str) -> Result<f64, Error> {
    let v: f64 = s
        .trim()
        .parse()
        .map_err(|_| Error::InvalidInput(format!("`{s}` is not a number")))?;
    if !v.is_finite() {
        return Err(Error::InvalidInput(format!("`{s}` is not finite")));
    }
    Ok(v)
}

impl FromStr for GridSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let values = if s.contains(':') {
            let parts: Vec<&str> = s.split(':').collect();
            let [start, stop, step] = parts[..] else {
                return Err(Error::InvalidInput(format!("grid `{s}` must be start:stop:step")));
            };
            let (start, stop, step) = (parse_angle(start)?, parse_angle(stop)?, parse_angle(step)?);
            if !(step > 0.0) {
                return Err(Error::InvalidInput("grid step must be positive".into()));
            }
            if stop < start {
                return Err(Error::InvalidInput("grid stop must not be below start".into()));
            }
            let count = (stop - start) / step;
            if !(count < MAX_GRID_POINTS as f64) {
                return Err(Error::InvalidInput(format!("grid has more than {MAX_GRID_POINTS} points")));
            }
            linear_grid(start, stop, step)
        } else {
            let values = s.split(',').map(parse_angle).collect::<Result<Vec<_>, _>>()?;
            if values.len() > MAX_GRID_POINTS {
                return Err(Error::InvalidInput(format!("grid has more than {MAX_GRID_POINTS} points")));
            }
            values
        };
        if values.is_empty() {
            return Err(Error::InvalidInput("grid is empty".into()));
        }
        Ok(Self { values })
    }
}

/// The resolved inputs of a single walk.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub coin: CoinParams,
    pub alpha: Complex64,
    pub beta: Complex64,
    pub steps: usize,
    pub format: OutputFormat,
    pub out: Option<PathBuf>,
}

impl CoinArgs {
    pub fn resolve(&self) -> Result<CoinParams, CliError> {
        if let Some(named) = self.coin {
            return Ok(named.params());
        }
        let theta = self.theta_deg.unwrap_or(45.0);
        let phi1 = self.phi1_deg.unwrap_or(0.0);
        let phi2 = self.phi2_deg.unwrap_or(0.0);
        CoinParams::from_degrees(theta, phi1, phi2, !self.angles.no_normalize_angles)
            .map_err(|e| CliError::Usage(e.to_string()))
    }
}

impl InitArgs {
    pub fn resolve(&self) -> Result<(Complex64, Complex64), CliError> {
        let custom = [self.alpha_re, self.alpha_im, self.beta_re, self.beta_im];
        let (alpha, beta) = if custom.iter().any(Option::is_some) {
            let [ar, ai, br, bi] = custom.map(|v| v.unwrap_or(0.0));
            (Complex64::new(ar, ai), Complex64::new(br, bi))
        } else {
            preset_amplitudes(self.init.unwrap_or(InitPreset::Unbiased))
        };
        check_normalized(alpha, beta).map_err(|e| CliError::Usage(e.to_string()))?;
        Ok((alpha, beta))
    }
}

pub fn preset_amplitudes(preset: InitPreset) -> (Complex64, Complex64) {
    match preset {
        InitPreset::Unbiased => (Complex64::new(FRAC_1_SQRT_2, 0.0), Complex64::new(0.0, -FRAC_1_SQRT_2)),
        InitPreset::Head => (Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)),
        InitPreset::Tail => (Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)),
    }
}

impl WalkArgs {
    pub fn config(&self) -> Result<RunConfig, CliError> {
        let (alpha, beta) = self.init.resolve()?;
        Ok(RunConfig {
            coin: self.coin.resolve()?,
            alpha,
            beta,
            steps: self.steps as usize,
            format: self.output.format,
            out: self.output.out.clone(),
        })
    }
}

/// `v` with 17 significant digits.
pub fn fmt17(v: f64) -> String {
    format!("{v:.16e}")
}

/// Serializes an `f64` with [`fmt17`] precision.
#[derive(Debug, Clone, Copy, PartialEq)]
struct F17(f64);

impl Serialize for F17 {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if !self.0.is_finite() {
            return s.serialize_none();
        }
        RawValue::from_string(fmt17(self.0))
            .map_err(serde::ser::Error::custom)?
            .serialize(s)
    }
}

fn f17s(values: &[f64]) -> Vec<F17> {
    values.iter().copied().map(F17).collect()
}

#[derive(Serialize)]
struct WalkJson {
    theta_deg: F17,
    phi1_deg: F17,
    phi2_deg: F17,
    steps: usize,
    positions: Vec<i64>,
    probs: Vec<F17>,
}

#[derive(Serialize)]
struct SweepBlockJson {
    theta_deg: F17,
    positions: Vec<i64>,
    probs: Vec<F17>,
}

#[derive(Serialize)]
struct SweepJson {
    phi1_deg: F17,
    phi2_deg: F17,
    steps: usize,
    sweeps: Vec<SweepBlockJson>,
}

#[derive(Serialize)]
struct PhaseDiagramJson {
    theta_deg: F17,
    steps: usize,
    phi1_deg: Vec<F17>,
    phi2_deg: Vec<F17>,
    delta: Vec<Vec<F17>>,
}

#[derive(Serialize)]
struct EntanglementRowJson {
    t: usize,
    schmidt_rank: usize,
    entropy: F17,
}

#[derive(Serialize)]
struct EntanglementJson {
    theta_deg: F17,
    phi1_deg: F17,
    phi2_deg: F17,
    steps: usize,
    rows: Vec<EntanglementRowJson>,
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("output structs always serialize");
    s.push('\n');
    s
}

/// A `walk` JSON document read back in.
#[derive(Debug, Clone, PartialEq, Deserialize)]
pub struct WalkRecord {
    pub theta_deg: f64,
    pub phi1_deg: f64,
    pub phi2_deg: f64,
    pub steps: usize,
    pub positions: Vec<i64>,
    pub probs: Vec<f64>,
}

impl WalkRecord {
    pub fn distribution(&self) -> Result<ProbabilityDistribution, Error> {
        ProbabilityDistribution::new(self.positions.clone(), self.probs.clone(), self.steps)
    }
}

/// Parses the JSON written by `walk --format json`.
pub fn parse_walk_json(bytes: &[u8]) -> Result<WalkRecord, Error> {
    let record: WalkRecord = serde_json::from_slice(bytes)
        .and_then(|r: WalkRecord| {
            if r.positions.len() == r.probs.len() {
                Ok(r)
            } else {
                Err(serde_json::Error::custom("positions and probs differ in length"))
            }
        })
        .map_err(|e| Error::InvalidInput(format!("walk json: {e}")))?;
    record.distribution()?;
    Ok(record)
}

/// Parses the CSV written by `walk --format csv`.
pub fn parse_walk_csv(text: &str) -> Result<ProbabilityDistribution, Error> {
    let bad = |msg: String| Error::InvalidInput(format!("walk csv: {msg}"));
    let mut reader = csv::ReaderBuilder::new().has_headers(true).from_reader(text.as_bytes());
    let headers = reader.headers().map_err(|e| bad(e.to_string()))?;
    if headers != vec!["position", "probability"] {
        return Err(bad(format!("unexpected header {headers:?}")));
    }
    let mut positions = Vec::new();
    let mut probs = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| bad(e.to_string()))?;
        if record.len() != 2 {
            return Err(bad(format!("expected 2 fields, found {}", record.len())));
        }
        positions.push(record[0].parse::<i64>().map_err(|e| bad(e.to_string()))?);
        probs.push(record[1].parse::<f64>().map_err(|e| bad(e.to_string()))?);
    }
    let half = positions.last().copied().unwrap_or(0).max(0) as usize;
    ProbabilityDistribution::new(positions, probs, half)
}

fn walk_window(cfg: &RunConfig) -> Result<ProbabilityDistribution, CliError> {
    Ok(run_walk(&cfg.coin, cfg.alpha, cfg.beta, cfg.steps)?.window(cfg.steps))
}

pub fn cmd_walk(cfg: &RunConfig) -> Result<String, CliError> {
    let dist = walk_window(cfg)?;
    let (t, p1, p2) = cfg.coin.degrees();
    Ok(match cfg.format {
        OutputFormat::Csv => {
            let mut s = String::from("position,probability\n");
            for (x, p) in dist.iter() {
                writeln!(s, "{x},{}", fmt17(p)).unwrap();
            }
            s
        }
        OutputFormat::Json => to_json(&WalkJson {
            theta_deg: F17(t),
            phi1_deg: F17(p1),
            phi2_deg: F17(p2),
            steps: cfg.steps,
            positions: dist.positions().to_vec(),
            probs: f17s(dist.probs()),
        }),
    })
}

pub fn cmd_sweep_theta(args: &SweepThetaArgs) -> Result<String, CliError> {
    let (alpha, beta) = args.init.resolve()?;
    let steps = args.steps as usize;
    let grid = &args.theta_grid;
    let results = theta_sweep(
        &grid.values_rad(),
        args.phi1_deg.to_radians(),
        args.phi2_deg.to_radians(),
        alpha,
        beta,
        steps,
        args.angles.mode(),
    )?;
    let blocks: Vec<(f64, ProbabilityDistribution)> = grid
        .values_deg()
        .iter()
        .zip(results)
        .map(|(&deg, (_, d))| (deg, d.window(steps)))
        .collect();
    Ok(match args.output.format {
        OutputFormat::Csv => {
            let mut s = String::from("theta_deg,position,probability\n");
            for (deg, d) in &blocks {
                for (x, p) in d.iter() {
                    writeln!(s, "{},{x},{}", fmt17(*deg), fmt17(p)).unwrap();
                }
            }
            s
        }
        OutputFormat::Json => to_json(&SweepJson {
            phi1_deg: F17(args.phi1_deg),
            phi2_deg: F17(args.phi2_deg),
            steps,
            sweeps: blocks
                .iter()
                .map(|(deg, d)| SweepBlockJson {
                    theta_deg: F17(*deg),
                    positions: d.positions().to_vec(),
                    probs: f17s(d.probs()),
                })
                .collect(),
        }),
    })
}

pub fn cmd_phase_diagram(args: &PhaseDiagramArgs) -> Result<String, CliError> {
    let (alpha, beta) = args.init.resolve()?;
    let steps = args.steps as usize;
    let pd = phase_diagram(
        args.theta_deg.to_radians(),
        &args.phi1_grid.values_rad(),
        &args.phi2_grid.values_rad(),
        alpha,
        beta,
        steps,
        args.angles.mode(),
    )?;
    let (g1, g2) = (args.phi1_grid.values_deg(), args.phi2_grid.values_deg());
    Ok(match args.output.format {
        OutputFormat::Csv => {
            let mut s = String::from("phi1_deg,phi2_deg,delta\n");
            for (p1, row) in g1.iter().zip(&pd.delta) {
                for (p2, d) in g2.iter().zip(row) {
                    writeln!(s, "{},{},{}", fmt17(*p1), fmt17(*p2), fmt17(*d)).unwrap();
                }
            }
            s
        }
        OutputFormat::Json => to_json(&PhaseDiagramJson {
            theta_deg: F17(args.theta_deg),
            steps,
            phi1_deg: f17s(g1),
            phi2_deg: f17s(g2),
            delta: pd.delta.iter().map(|row| f17s(row)).collect(),
        }),
    })
}

pub fn cmd_entanglement(args: &EntanglementArgs) -> Result<String, CliError> {
    if !(args.tol >= 0.0) {
        return Err(CliError::Usage("--tol must be nonnegative".into()));
    }
    let params = args.coin.resolve()?;
    let (alpha, beta) = args.init.resolve()?;
    let steps = args.steps as usize;
    let trace = entanglement_trace(&params, alpha, beta, steps, args.tol)?;
    Ok(match args.output.format {
        OutputFormat::Csv => {
            let mut s = String::from("t,schmidt_rank,entropy\n");
            for row in &trace {
                writeln!(s, "{},{},{}", row.t, row.spectrum.rank, fmt17(row.entropy)).unwrap();
            }
            s
        }
        OutputFormat::Json => {
            let (t, p1, p2) = params.degrees();
            to_json(&EntanglementJson {
                theta_deg: F17(t),
                phi1_deg: F17(p1),
                phi2_deg: F17(p2),
                steps,
                rows: trace
                    .iter()
                    .map(|r| EntanglementRowJson { t: r.t, schmidt_rank: r.spectrum.rank, entropy: F17(r.entropy) })
                    .collect(),
            })
        }
    })
}

fn coin_label(theta: f64, phi1: f64, phi2: f64) -> String {
    format!(
        "theta_deg={} phi1_deg={} phi2_deg={}",
        theta.to_degrees(),
        phi1.to_degrees(),
        phi2.to_degrees()
    )
}

fn corrupted(coin: &CoinMatrix, delta: Option<f64>) -> CoinMatrix {
    match delta {
        Some(d) => {
            let mut e = *coin.entries();
            e[0][0] += Complex64::new(d, 0.0);
            CoinMatrix::from_entries(e)
        }
        None => *coin,
    }
}

fn worst_of(report: &[StepDiscrepancy]) -> StepDiscrepancy {
    report
        .iter()
        .copied()
        .fold(report[0], |w, r| if r.max_abs > w.max_abs { r } else { w })
}

fn describe(d: &StepDiscrepancy) -> String {
    let side = if d.coin_index == 0 { "H" } else { "T" };
    format!("t={} x={} coin={side} discrepancy={}", d.t, d.position, fmt17(d.max_abs))
}

/// Runs the engine comparison and returns the report. A failing comparison
/// yields [`CliError::Verification`] carrying the full report text.
pub fn cmd_verify(args: &VerifyArgs) -> Result<String, CliError> {
    let params = args.coin.resolve()?;
    let (alpha, beta) = args.init.resolve()?;
    let max_steps = args.max_steps as usize;
    let coin = make_coin(&params);
    let mut s = String::new();
    let mut failures = Vec::new();

    writeln!(
        s,
        "# recurrence vs dense: {} max_steps={max_steps} tol={ORACLE_TOL:e}",
        coin_label(params.theta(), params.phi1(), params.phi2())
    )
    .unwrap();
    writeln!(s, "t,max_abs_discrepancy").unwrap();
    let report = compare_engines(&corrupted(&coin, args.corrupt_coin), &coin, alpha, beta, max_steps)?;
    for r in &report {
        writeln!(s, "{},{}", r.t, fmt17(r.max_abs)).unwrap();
        if !r.within(ORACLE_TOL) {
            failures.push(format!("# FAIL {}", describe(r)));
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    for k in 0..args.random_draws {
        let (t, p1, p2) = (rng.gen_range(0.0..TAU), rng.gen_range(0.0..PI), rng.gen_range(0.0..PI));
        let weight: f64 = rng.gen_range(0.0..=1.0);
        let alpha = Complex64::from_polar(weight.sqrt(), rng.gen_range(0.0..TAU));
        let beta = Complex64::from_polar((1.0 - weight).sqrt(), rng.gen_range(0.0..TAU));
        let p = CoinParams::new(t, p1, p2)?;
        let c = make_coin(&p);
        let report = compare_engines(&corrupted(&c, args.corrupt_coin), &c, alpha, beta, max_steps)?;
        let worst = worst_of(&report);
        let verdict = if worst.within(ORACLE_TOL) { "PASS" } else { "FAIL" };
        writeln!(s, "# draw {k}: {} worst {} {verdict}", coin_label(t, p1, p2), describe(&worst)).unwrap();
        if !worst.within(ORACLE_TOL) {
            failures.push(format!("# FAIL draw {k}: {}", describe(&worst)));
        }
    }

    if failures.is_empty() {
        writeln!(s, "# result: PASS").unwrap();
        Ok(s)
    } else {
        for f in &failures {
            writeln!(s, "{f}").unwrap();
        }
        writeln!(s, "# result: FAIL ({} offending entries)", failures.len()).unwrap();
        Err(CliError::Verification(s))
    }
}

fn emit(text: &str, out: Option<&PathBuf>, stdout: &mut dyn Write) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, text)?,
        None => stdout.write_all(text.as_bytes())?,
    }
    Ok(())
}

/// Executes a parsed command line, writing results to `--out` or `stdout`.
pub fn run(cli: &Cli, stdout: &mut dyn Write) -> Result<(), CliError> {
    match &cli.command {
        Command::Walk(args) => {
            let cfg = args.config()?;
            emit(&cmd_walk(&cfg)?, cfg.out.as_ref(), stdout)
        }
        Command::SweepTheta(args) => emit(&cmd_sweep_theta(args)?, args.output.out.as_ref(), stdout),
        Command::PhaseDiagram(args) => emit(&cmd_phase_diagram(args)?, args.output.out.as_ref(), stdout),
        Command::Entanglement(args) => emit(&cmd_entanglement(args)?, args.output.out.as_ref(), stdout),
        Command::Verify(args) => match cmd_verify(args) {
            Ok(report) => emit(&report, args.out.as_ref(), stdout),
            Err(CliError::Verification(report)) => {
                emit(&report, args.out.as_ref(), stdout)?;
                Err(CliError::Verification("discrepancy above tolerance".into()))
            }
            Err(e) => Err(e),
        },
    }
}

/// Parses `args` (program name first) and runs, returning the process exit
/// code. Diagnostics go to `stderr`.
pub fn main_with_args<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(stderr, "{}", e.render());
            return e.exit_code();
        }
    };
    match run(&cli, stdout) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

impl fmt::Display for GridSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.values.iter().map(|v| v.to_string()).collect();
        f.write_str(&parts.join(","))
    }
}
