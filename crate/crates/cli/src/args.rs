use std::path::PathBuf;

use clap::Parser;
use qutrit_lab::experiments::presets;
use qutrit_lab::{
    Complex64, CouplingPlacement, EnvAmplitudes, Error, GeneratorChoice, JurkowskiParams, OutputFormat, SweepCase,
    SweepConfig,
};

#[derive(Debug, Parser)]
#[command(
    name = "qutrit-lab",
    version,
    about = "Negativity and CCNR time series for two-qutrit bound-entangled states under a DM coupling"
)]
pub struct Args {
    /// Parameter regime: 1 (eps1=eps2=1), 2 (eps1=eps2=eps3), 3 (eps1=1) or custom.
    #[arg(long, value_parser = ["1", "2", "3", "custom"], required_unless_present = "figure")]
    pub case: Option<String>,

    /// Run one of the six preset figure sweeps instead of --case.
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=6), conflicts_with = "case")]
    pub figure: Option<u8>,

    /// Comma-separated values; lists of length one broadcast.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub eps1: Vec<f64>,

    /// See --eps1.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub eps2: Vec<f64>,

    /// See --eps1.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub eps3: Vec<f64>,

    /// Coupling strengths D (comma-separated).
    #[arg(long = "dm-strength", value_delimiter = ',', allow_negative_numbers = true)]
    pub dm_strength: Vec<f64>,

    /// End of the time grid (default 30).
    #[arg(long = "t-max")]
    pub t_max: Option<f64>,

    /// Number of time samples including both ends (default 1001).
    #[arg(long = "t-steps")]
    pub t_steps: Option<usize>,

    /// gellmann, spin1, or auto (pick the variant matching the analytic solution).
    #[arg(long, default_value = "auto", value_parser = ["gellmann", "spin1", "auto"])]
    pub generator: String,

    /// Which qutrits the coupling acts on: pair (A,B) or env (B,C).
    #[arg(long, default_value = "pair", value_parser = ["pair", "env"])]
    pub coupling: String,

    /// Real environment amplitudes c0,c1,c2 (rescaled to unit norm).
    #[arg(long, value_delimiter = ',', num_args = 1, allow_negative_numbers = true)]
    pub env: Vec<f64>,

    /// Output file; the table goes to stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,

    #[arg(long, default_value = "csv", value_parser = ["csv", "json"])]
    pub format: String,

    /// Print per-curve maxima, DSD events and detection gaps.
    #[arg(long)]
    pub summary: bool,
}

fn config_err(msg: impl Into<String>) -> Error {
    Error::Config(msg.into())
}

/// Zip lists, repeating any list of length one.
fn broadcast(lists: [&[f64]; 3]) -> Result<Vec<[f64; 3]>, Error> {
    let n = lists.iter().map(|l| l.len()).max().unwrap_or(0);
    if n == 0 {
        return Ok(Vec::new());
    }
    for l in lists {
        if l.len() != 1 && l.len() != n {
            return Err(config_err(format!("eps lists must have equal length or length 1, got {}", l.len())));
        }
    }
    Ok((0..n)
        .map(|k| {
            let pick = |l: &[f64]| if l.len() == 1 { l[0] } else { l[k] };
            [pick(lists[0]), pick(lists[1]), pick(lists[2])]
        })
        .collect())
}

fn eps_grid(case: SweepCase, a: &Args) -> Result<Vec<[f64; 3]>, Error> {
    let (e1, e2, e3) = (&a.eps1[..], &a.eps2[..], &a.eps3[..]);
    match case {
        SweepCase::Case1 => {
            if e1.iter().chain(e2).any(|&e| e != 1.0) {
                return Err(config_err("case 1 fixes eps1 = eps2 = 1"));
            }
            let eps3 = if e3.is_empty() { presets::CASE1_EPS.to_vec() } else { e3.to_vec() };
            Ok(eps3.into_iter().map(|e| [1.0, 1.0, e]).collect())
        }
        SweepCase::Case2 => {
            let given: Vec<&[f64]> = [e1, e2, e3].into_iter().filter(|l| !l.is_empty()).collect();
            if given.windows(2).any(|w| w[0] != w[1]) {
                return Err(config_err("case 2 requires eps1 = eps2 = eps3"));
            }
            let eps = given.first().map(|l| l.to_vec()).unwrap_or_else(|| presets::CASE2_EPS.to_vec());
            Ok(eps.into_iter().map(|e| [e, e, e]).collect())
        }
        SweepCase::Case3 => {
            if e1.iter().any(|&e| e != 1.0) {
                return Err(config_err("case 3 fixes eps1 = 1"));
            }
            match (e2.is_empty(), e3.is_empty()) {
                (true, true) => Ok(presets::CASE3_PAIRS.iter().map(|&(b, c)| [1.0, b, c]).collect()),
                (false, false) => broadcast([&[1.0], e2, e3]),
                _ => Err(config_err("case 3 needs both --eps2 and --eps3")),
            }
        }
        SweepCase::Custom => {
            if e1.is_empty() || e2.is_empty() || e3.is_empty() {
                return Err(config_err("custom case needs --eps1, --eps2 and --eps3"));
            }
            broadcast([e1, e2, e3])
        }
    }
}

impl Args {
    pub fn to_config(&self) -> Result<SweepConfig, Error> {
        let mut config = match (self.figure, &self.case) {
            (Some(n), _) => presets::figure(n)?,
            (None, Some(case)) => {
                let case: SweepCase = case.parse()?;
                let grid = eps_grid(case, self)?
                    .into_iter()
                    .map(|[a, b, c]| JurkowskiParams::new(a, b, c))
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(|e| config_err(e.to_string()))?;
                let d = if self.dm_strength.is_empty() { vec![0.2] } else { self.dm_strength.clone() };
                SweepConfig::new(case, grid, d)
            }
            (None, None) => return Err(config_err("either --case or --figure is required")),
        };
        if self.figure.is_some() && !self.dm_strength.is_empty() {
            config.d_values = self.dm_strength.clone();
        }
        if let Some(t_max) = self.t_max {
            config.t_max = t_max;
        }
        if let Some(t_steps) = self.t_steps {
            config.t_steps = t_steps;
        }
        config.generator = self.generator.parse::<GeneratorChoice>()?;
        config.placement = self.coupling.parse::<CouplingPlacement>().map_err(|e| config_err(e.to_string()))?;
        if !self.env.is_empty() {
            let [c0, c1, c2] = self.env[..] else {
                return Err(config_err(format!("--env takes three amplitudes, got {}", self.env.len())));
            };
            config.env = EnvAmplitudes::normalized(Complex64::from(c0), Complex64::from(c1), Complex64::from(c2))
                .map_err(|e| config_err(e.to_string()))?;
        }
        config.output_path = self.out.clone();
        config.output_format = self.format.parse::<OutputFormat>()?;
        config.validate()?;
        Ok(config)
    }
}
