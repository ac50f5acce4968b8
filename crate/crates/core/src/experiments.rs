//! Parameter sweeps over (ε-triple, D, t) lattices and their tabular output.

use std::fmt;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dynamics::{
    resolve_generator, CouplingPlacement, DmHamiltonianSpec, Evolution, Generator, GeneratorResolution,
};
use crate::error::{Error, Result};
use crate::measures::{
    classify, realignment_score, scan_dsd, Classification, DsdEvent, DsdOptions, EntanglementScores,
};
use crate::states::{EnvAmplitudes, JurkowskiParams};

/// Exact CSV header of [`emit_table`].
pub const CSV_HEADER: &str = "t,D,eps1,eps2,eps3,n1,n2,class";

pub const DEFAULT_T_MAX: f64 = 30.0;
pub const DEFAULT_T_STEPS: usize = 1001;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SweepCase {
    /// `ε₁ = ε₂ = 1`, `ε₃` free.
    Case1,
    /// `ε₁ = ε₂ = ε₃`.
    Case2,
    /// `ε₁ = 1`, `ε₂` and `ε₃` free.
    Case3,
    Custom,
}

impl SweepCase {
    /// Check that a parameter triple belongs to this case.
    pub fn admits(self, p: &JurkowskiParams) -> Result<()> {
        let [e1, e2, e3] = p.as_array();
        let ok = match self {
            SweepCase::Case1 => e1 == 1.0 && e2 == 1.0,
            SweepCase::Case2 => e1 == e2 && e2 == e3,
            SweepCase::Case3 => e1 == 1.0,
            SweepCase::Custom => true,
        };
        if ok {
            Ok(())
        } else {
            let rule = match self {
                SweepCase::Case1 => "case 1 requires eps1 = eps2 = 1",
                SweepCase::Case2 => "case 2 requires eps1 = eps2 = eps3",
                SweepCase::Case3 => "case 3 requires eps1 = 1",
                SweepCase::Custom => unreachable!(),
            };
            Err(Error::Config(format!("{rule}, got ({e1}, {e2}, {e3})")))
        }
    }
}

impl FromStr for SweepCase {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "1" | "case1" => Ok(SweepCase::Case1),
            "2" | "case2" => Ok(SweepCase::Case2),
            "3" | "case3" => Ok(SweepCase::Case3),
            "custom" => Ok(SweepCase::Custom),
            other => Err(Error::Config(format!("unknown case {other:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GeneratorChoice {
    Fixed(Generator),
    /// Run [`resolve_generator`] before the sweep.
    #[default]
    Auto,
}

impl FromStr for GeneratorChoice {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.eq_ignore_ascii_case("auto") {
            return Ok(GeneratorChoice::Auto);
        }
        s.parse::<Generator>()
            .map(GeneratorChoice::Fixed)
            .map_err(|_| Error::Config(format!("unknown generator {s:?}")))
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(Error::Config(format!("unknown output format {other:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepConfig {
    pub case: SweepCase,
    pub eps_grid: Vec<JurkowskiParams>,
    pub d_values: Vec<f64>,
    pub t_max: f64,
    pub t_steps: usize,
    pub generator: GeneratorChoice,
    pub placement: CouplingPlacement,
    pub env: EnvAmplitudes,
    pub output_path: Option<PathBuf>,
    pub output_format: OutputFormat,
}

impl SweepConfig {
    pub fn new(case: SweepCase, eps_grid: Vec<JurkowskiParams>, d_values: Vec<f64>) -> Self {
        Self {
            case,
            eps_grid,
            d_values,
            t_max: DEFAULT_T_MAX,
            t_steps: DEFAULT_T_STEPS,
            generator: GeneratorChoice::Auto,
            placement: CouplingPlacement::default(),
            env: EnvAmplitudes::default(),
            output_path: None,
            output_format: OutputFormat::Csv,
        }
    }

    pub fn with_time_grid(mut self, t_max: f64, t_steps: usize) -> Self {
        self.t_max = t_max;
        self.t_steps = t_steps;
        self
    }

    pub fn with_generator(mut self, generator: GeneratorChoice) -> Self {
        self.generator = generator;
        self
    }

    pub fn with_env(mut self, env: EnvAmplitudes) -> Self {
        self.env = env;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.t_steps < 2 {
            return Err(Error::Config(format!("t-steps must be at least 2, got {}", self.t_steps)));
        }
        if !(self.t_max.is_finite() && self.t_max > 0.0) {
            return Err(Error::Config(format!("t-max must be positive, got {}", self.t_max)));
        }
        if self.eps_grid.is_empty() {
            return Err(Error::Config("empty eps grid".into()));
        }
        if self.d_values.is_empty() {
            return Err(Error::Config("no coupling strengths given".into()));
        }
        if let Some(d) = self.d_values.iter().find(|d| !d.is_finite()) {
            return Err(Error::Config(format!("coupling strength must be finite, got {d}")));
        }
        for p in &self.eps_grid {
            self.case.admits(p)?;
        }
        Ok(())
    }

    /// `t_k = t_max · k / (t_steps − 1)`.
    pub fn times(&self) -> Vec<f64> {
        let last = (self.t_steps - 1) as f64;
        (0..self.t_steps).map(|k| self.t_max * k as f64 / last).collect()
    }
}

/// One row of a sweep table.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TimeSeriesRecord {
    pub t: f64,
    #[serde(rename = "D")]
    pub d: f64,
    pub eps1: f64,
    pub eps2: f64,
    pub eps3: f64,
    pub n1: f64,
    pub n2: f64,
    pub class: Classification,
}

/// Per-curve digest of a sweep: one entry per (ε-triple, D).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CurveSummary {
    pub eps: [f64; 3],
    #[serde(rename = "D")]
    pub d: f64,
    pub max_n1: f64,
    pub t_at_max_n1: f64,
    pub initial_n2: f64,
    pub min_n2: f64,
    pub max_n2: f64,
    /// Range of the plain realignment score `‖R(ρ)‖₁ − 1`, for comparison with `n2`.
    pub realignment_range: (f64, f64),
    pub events: Vec<DsdEvent>,
}

impl CurveSummary {
    pub fn free_to_bound_times(&self) -> Vec<f64> {
        self.events
            .iter()
            .filter_map(|e| match e {
                DsdEvent::FreeToBound { t, .. } => Some(*t),
                DsdEvent::DetectionGap { .. } => None,
            })
            .collect()
    }
}

#[derive(Clone, Debug)]
pub struct SweepOutput {
    pub generator: Generator,
    pub resolution: Option<GeneratorResolution>,
    pub records: Vec<TimeSeriesRecord>,
    pub curves: Vec<CurveSummary>,
}

fn pick_generator(config: &SweepConfig, times: &[f64]) -> Result<(Generator, Option<GeneratorResolution>)> {
    match config.generator {
        GeneratorChoice::Fixed(g) => Ok((g, None)),
        GeneratorChoice::Auto => {
            let Some(&d) = config.d_values.iter().find(|d| **d != 0.0) else {
                // Without coupling the generator has no effect.
                return Ok((Generator::default(), None));
            };
            let t_end = times[times.len() - 1];
            let samples: Vec<f64> = [0.1, 0.3, 0.5, 0.7, 0.9].iter().map(|f| f * t_end).collect();
            let r = resolve_generator(&config.eps_grid[0], d, &samples)?;
            Ok((r.selected, Some(r)))
        }
    }
}

struct Curve {
    records: Vec<TimeSeriesRecord>,
    summary: CurveSummary,
}

fn run_curve(
    params: &JurkowskiParams,
    d: f64,
    generator: Generator,
    config: &SweepConfig,
    times: &[f64],
) -> Result<Curve> {
    let spec = DmHamiltonianSpec::new(d, generator)?.with_placement(config.placement);
    let evo = Evolution::new(params, &config.env, &spec)?;
    let [eps1, eps2, eps3] = params.as_array();

    let mut records = Vec::with_capacity(times.len());
    let mut series = Vec::with_capacity(times.len());
    let mut realign_range = (f64::INFINITY, f64::NEG_INFINITY);
    for &t in times {
        let rho = evo.reduced_at(t)?;
        let scores = EntanglementScores::of(&rho)?;
        let r = realignment_score(&rho)?;
        realign_range = (realign_range.0.min(r), realign_range.1.max(r));
        records.push(TimeSeriesRecord {
            t,
            d,
            eps1,
            eps2,
            eps3,
            n1: scores.n1,
            n2: scores.n2,
            class: classify(&scores),
        });
        series.push((t, scores));
    }

    let (imax, max_rec) =
        records.iter().enumerate().max_by(|a, b| a.1.n1.total_cmp(&b.1.n1)).expect("time grid is non-empty");
    let summary = CurveSummary {
        eps: params.as_array(),
        d,
        max_n1: max_rec.n1,
        t_at_max_n1: times[imax],
        initial_n2: records[0].n2,
        min_n2: records.iter().map(|r| r.n2).fold(f64::INFINITY, f64::min),
        max_n2: records.iter().map(|r| r.n2).fold(f64::NEG_INFINITY, f64::max),
        realignment_range: realign_range,
        events: scan_dsd(&series, &DsdOptions::default())?,
    };
    Ok(Curve { records, summary })
}

/// Evaluate every (ε-triple, D, t) lattice point. Curves run in parallel on
/// the current rayon pool; output order is ε-triple, then D, then t. When the
/// config has an output path the table is written there as well.
pub fn run_sweep(config: &SweepConfig) -> Result<SweepOutput> {
    config.validate()?;
    let times = config.times();
    let (generator, resolution) = pick_generator(config, &times)?;

    let jobs: Vec<(JurkowskiParams, f64)> =
        config.eps_grid.iter().flat_map(|p| config.d_values.iter().map(move |&d| (*p, d))).collect();
    let curves: Vec<Curve> =
        jobs.par_iter().map(|(p, d)| run_curve(p, *d, generator, config, &times)).collect::<Result<_>>()?;

    let mut records = Vec::with_capacity(jobs.len() * times.len());
    let mut summaries = Vec::with_capacity(jobs.len());
    for c in curves {
        records.extend(c.records);
        summaries.push(c.summary);
    }
    if let Some(path) = &config.output_path {
        emit_table(&records, path, config.output_format)?;
    }
    Ok(SweepOutput { generator, resolution, records, curves: summaries })
}

/// Format with 12 significant digits, `%g`-style.
pub fn format_sig(x: f64) -> String {
    const SIG: i32 = 12;
    if x == 0.0 || !x.is_finite() {
        return if x.is_nan() {
            "NaN".into()
        } else if x.is_infinite() {
            format!("{x}")
        } else {
            "0".into()
        };
    }
    let sci = format!("{:.*e}", (SIG - 1) as usize, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent format");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..SIG).contains(&exp) {
        let decimals = (SIG - 1 - exp).max(0) as usize;
        trim_zeros(format!("{x:.decimals$}"))
    } else {
        format!("{}e{exp}", trim_zeros(mantissa.to_string()))
    }
}

fn trim_zeros(s: String) -> String {
    if !s.contains('.') {
        return s;
    }
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

pub fn write_table<W: Write>(records: &[TimeSeriesRecord], mut w: W, format: OutputFormat) -> Result<()> {
    match format {
        OutputFormat::Csv => {
            writeln!(w, "{CSV_HEADER}")?;
            for r in records {
                writeln!(
                    w,
                    "{},{},{},{},{},{},{},{}",
                    format_sig(r.t),
                    format_sig(r.d),
                    format_sig(r.eps1),
                    format_sig(r.eps2),
                    format_sig(r.eps3),
                    format_sig(r.n1),
                    format_sig(r.n2),
                    r.class
                )?;
            }
        }
        OutputFormat::Json => {
            serde_json::to_writer(&mut w, records)?;
            writeln!(w)?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn emit_table(records: &[TimeSeriesRecord], path: &Path, format: OutputFormat) -> Result<()> {
    let file = File::create(path)?;
    write_table(records, BufWriter::new(file), format)
}

/// Sweeps behind the six published figures.
pub mod presets {
    use super::*;

    /// `ε₃` values of the D = 0.2 case-1 figure.
    pub const CASE1_EPS: [f64; 8] = [0.1, 0.3, 0.5, 0.7, 0.9, 4.0, 5.0, 6.0];
    /// `ε₃` values of the D = 0.4 case-1 figure.
    pub const CASE1_EPS_STRONG: [f64; 4] = [0.1, 0.3, 0.5, 0.7];
    pub const CASE2_EPS: [f64; 8] = [0.1, 0.3, 0.5, 0.7, 1.1, 1.5, 2.0, 4.0];
    /// `(ε₂, ε₃)` pairs of the case-3 figure.
    pub const CASE3_PAIRS: [(f64, f64); 6] = [(0.1, 1.0), (0.1, 2.0), (2.0, 2.0), (1.0, 0.1), (2.0, 0.1), (4.0, 4.0)];

    fn eps_axis() -> Vec<f64> {
        (1..=60).map(|k| k as f64 / 10.0).collect()
    }

    fn case1(eps3: &[f64]) -> Result<Vec<JurkowskiParams>> {
        eps3.iter().map(|&e| JurkowskiParams::new(1.0, 1.0, e)).collect()
    }

    fn case2(eps: &[f64]) -> Result<Vec<JurkowskiParams>> {
        eps.iter().map(|&e| JurkowskiParams::uniform(e)).collect()
    }

    /// Sweep configuration for figure `n` (1 to 6). Figures 1 and 4 are the
    /// `D = 0` scans over ε; the rest are time series.
    pub fn figure(n: u8) -> Result<SweepConfig> {
        let config = match n {
            1 => SweepConfig::new(SweepCase::Case1, case1(&eps_axis())?, vec![0.0]).with_time_grid(DEFAULT_T_MAX, 2),
            2 => SweepConfig::new(SweepCase::Case1, case1(&CASE1_EPS)?, vec![0.2]),
            3 => SweepConfig::new(SweepCase::Case1, case1(&CASE1_EPS_STRONG)?, vec![0.4]),
            4 => SweepConfig::new(SweepCase::Case2, case2(&eps_axis())?, vec![0.0]).with_time_grid(DEFAULT_T_MAX, 2),
            5 => SweepConfig::new(SweepCase::Case2, case2(&CASE2_EPS)?, vec![0.2]),
            6 => {
                let grid =
                    CASE3_PAIRS.iter().map(|&(e2, e3)| JurkowskiParams::new(1.0, e2, e3)).collect::<Result<_>>()?;
                SweepConfig::new(SweepCase::Case3, grid, vec![0.2])
            }
            other => return Err(Error::Config(format!("no figure {other}; expected 1 to 6"))),
        };
        Ok(config)
    }
}

impl fmt::Display for SweepCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SweepCase::Case1 => "1",
            SweepCase::Case2 => "2",
            SweepCase::Case3 => "3",
            SweepCase::Custom => "custom",
        })
    }
}
