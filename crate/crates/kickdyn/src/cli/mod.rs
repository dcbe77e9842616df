//! Command-line frontend: flag/config-file/preset resolution and result
//! emission.
//!
//! Resolution order is CLI flags over config-file values over preset values
//! over built-in defaults. The config file is flat `key = value` lines plus
//! `[kicks]` / `[pulses]` sections holding one `time:sign` event per line.

pub mod emit;
pub mod verify;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use thiserror::Error;

use crate::experiments::{Method, Scenario, SweepSpec};
use crate::fields::{
    Coupling, FieldProfile, FieldStrengths, KickTrain, PulseTrain, Sign, Train,
};
use crate::integrator::{SimGrid, StateVector};

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("{0}")]
    Usage(String),
    #[error("unknown preset '{0}'")]
    UnknownPreset(String),
    #[error("unknown initial state '{got}'; expected one of {options}")]
    UnknownInitial { got: String, options: String },
    #[error("malformed {field}: '{value}' ({reason})")]
    Malformed { field: &'static str, value: String, reason: String },
    #[error("both kicks and pulses specified; a profile carries exactly one train")]
    ConflictingTrains,
    #[error("tau given but no pulse train; tau only applies to pulses")]
    TauWithoutPulses,
    #[error("pulse train requires tau")]
    MissingTau,
    #[error("config file {path}: {message}")]
    ConfigFile { path: String, message: String },
    #[error(transparent)]
    Field(#[from] crate::fields::FieldError),
    #[error(transparent)]
    Integrate(#[from] crate::integrator::IntegrateError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CommandKind {
    Timeseries,
    Contour,
    Compare,
    Verify,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

impl OutputFormat {
    fn parse(s: &str) -> Result<Self, ConfigError> {
        match s {
            "csv" => Ok(Self::Csv),
            "json" => Ok(Self::Json),
            other => Err(ConfigError::Malformed {
                field: "format",
                value: other.to_string(),
                reason: "expected csv or json".into(),
            }),
        }
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "kickdyn",
    version,
    about = "Entanglement dynamics of two coupled qubits under kick and Gaussian-pulse drives"
)]
struct CliArgs {
    #[command(subcommand)]
    command: CliCommand,
}

#[derive(Subcommand, Debug)]
enum CliCommand {
    /// Concurrence as a function of time for one scenario.
    Timeseries(RunFlags),
    /// Concurrence over an (α/β, Jt) grid.
    Contour(RunFlags),
    /// Exact evolution against the no-time-ordering limit.
    Compare(RunFlags),
    /// Run the full invariant battery and report per-check status.
    Verify,
}

#[derive(Args, Debug, Default, Clone)]
struct RunFlags {
    /// Named preset supplying baseline parameters (e.g. fig1a, fig5b, fig6g).
    #[arg(long)]
    preset: Option<String>,
    /// Flat key=value config file; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Initial state: 01, 10, 11, 00, psi+, psi-, phi+, phi- (bell = psi+).
    #[arg(long)]
    initial: Option<String>,
    /// Exchange coupling J.
    #[arg(long = "J")]
    j: Option<f64>,
    /// Integrated field strength on qubit 1 per event.
    #[arg(long)]
    alpha: Option<f64>,
    /// Integrated field strength on qubit 2 per event.
    #[arg(long)]
    beta: Option<f64>,
    /// Gaussian pulse width τ (pulse trains only).
    #[arg(long)]
    tau: Option<f64>,
    /// Output sample spacing (and integration-grid parent for rk4-pulse).
    #[arg(long)]
    dt: Option<f64>,
    /// Kick train as time:sign pairs, e.g. 5:+,10:-
    #[arg(long)]
    kicks: Option<String>,
    /// Pulse-centre train as time:sign pairs, e.g. 5:+,10:+
    #[arg(long)]
    pulses: Option<String>,
    /// End of the time axis (starts at 0).
    #[arg(long = "t-max")]
    t_max: Option<f64>,
    /// Ratio axis for contour sweeps as lo:hi:points, e.g. 1:10:200.
    #[arg(long = "ratio-range")]
    ratio_range: Option<String>,
    /// Evolution method: analytic-kick, rk4-pulse, or no-ordering.
    #[arg(long)]
    method: Option<String>,
    /// Output path (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format: csv or json.
    #[arg(long)]
    format: Option<String>,
}

/// One resolution layer: every field optional, later layers override.
#[derive(Debug, Default, Clone)]
struct Layer {
    initial: Option<String>,
    j: Option<f64>,
    alpha: Option<f64>,
    beta: Option<f64>,
    tau: Option<f64>,
    dt: Option<f64>,
    kicks: Option<Vec<(f64, Sign)>>,
    pulses: Option<Vec<(f64, Sign)>>,
    t_max: Option<f64>,
    ratio_range: Option<(f64, f64, usize)>,
    method: Option<Method>,
    out: Option<PathBuf>,
    format: Option<OutputFormat>,
}

impl Layer {
    fn overlay(mut self, over: Layer) -> Layer {
        macro_rules! take {
            ($($field:ident),*) => {
                $(if over.$field.is_some() { self.$field = over.$field; })*
            };
        }
        take!(initial, j, alpha, beta, tau, dt, kicks, pulses, t_max, ratio_range, method, out, format);
        self
    }
}

/// Fully resolved run configuration.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: CommandKind,
    pub preset: Option<String>,
    pub initial: String,
    pub j: f64,
    pub alpha: f64,
    pub beta: f64,
    pub tau: Option<f64>,
    pub dt: f64,
    pub kicks: Option<Vec<(f64, Sign)>>,
    pub pulses: Option<Vec<(f64, Sign)>>,
    pub t_max: f64,
    pub ratio_range: (f64, f64, usize),
    pub method: Method,
    pub out: Option<PathBuf>,
    pub format: OutputFormat,
}

fn parse_f64(field: &'static str, value: &str) -> Result<f64, ConfigError> {
    value.trim().parse::<f64>().map_err(|e| ConfigError::Malformed {
        field,
        value: value.to_string(),
        reason: e.to_string(),
    })
}

/// Parse an event list "5:+,10:-" into (time, sign) pairs.
fn parse_events(field: &'static str, value: &str) -> Result<Vec<(f64, Sign)>, ConfigError> {
    value
        .split(',')
        .filter(|part| !part.trim().is_empty())
        .map(|part| parse_event(field, part))
        .collect()
}

fn parse_event(field: &'static str, part: &str) -> Result<(f64, Sign), ConfigError> {
    let bad = |reason: &str| ConfigError::Malformed {
        field,
        value: part.to_string(),
        reason: reason.to_string(),
    };
    let (time_str, sign_str) = part.trim().split_once(':').ok_or_else(|| bad("expected time:sign"))?;
    let time = time_str.trim().parse::<f64>().map_err(|_| bad("bad time"))?;
    let sign = match sign_str.trim() {
        "+" => Sign::Plus,
        "-" => Sign::Minus,
        _ => return Err(bad("sign must be + or -")),
    };
    Ok((time, sign))
}

fn parse_ratio_range(value: &str) -> Result<(f64, f64, usize), ConfigError> {
    let bad = |reason: &str| ConfigError::Malformed {
        field: "ratio-range",
        value: value.to_string(),
        reason: reason.to_string(),
    };
    let parts: Vec<&str> = value.split(':').collect();
    if parts.len() != 3 {
        return Err(bad("expected lo:hi:points"));
    }
    let lo = parts[0].trim().parse::<f64>().map_err(|_| bad("bad lo"))?;
    let hi = parts[1].trim().parse::<f64>().map_err(|_| bad("bad hi"))?;
    let points = parts[2].trim().parse::<usize>().map_err(|_| bad("bad point count"))?;
    Ok((lo, hi, points))
}

impl RunFlags {
    fn to_layer(&self) -> Result<Layer, ConfigError> {
        Ok(Layer {
            initial: self.initial.clone(),
            j: self.j,
            alpha: self.alpha,
            beta: self.beta,
            tau: self.tau,
            dt: self.dt,
            kicks: self.kicks.as_deref().map(|v| parse_events("kicks", v)).transpose()?,
            pulses: self.pulses.as_deref().map(|v| parse_events("pulses", v)).transpose()?,
            t_max: self.t_max,
            ratio_range: self.ratio_range.as_deref().map(parse_ratio_range).transpose()?,
            method: self
                .method
                .as_deref()
                .map(|m| {
                    Method::parse(m).ok_or_else(|| ConfigError::Malformed {
                        field: "method",
                        value: m.to_string(),
                        reason: "expected analytic-kick, rk4-pulse, or no-ordering".into(),
                    })
                })
                .transpose()?,
            out: self.out.clone(),
            format: self.format.as_deref().map(OutputFormat::parse).transpose()?,
        })
    }
}

/// Parse a flat key=value config file with [kicks]/[pulses] sections.
fn parse_config_file(path: &std::path::Path) -> Result<(Layer, Option<String>), ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|e| ConfigError::ConfigFile {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    let file_err = |line_no: usize, message: String| ConfigError::ConfigFile {
        path: path.display().to_string(),
        message: format!("line {}: {}", line_no + 1, message),
    };

    let mut layer = Layer::default();
    let mut preset = None;
    let mut section: Option<&str> = None;
    let mut kicks: Vec<(f64, Sign)> = Vec::new();
    let mut pulses: Vec<(f64, Sign)> = Vec::new();
    for (line_no, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(name) = line.strip_prefix('[').and_then(|s| s.strip_suffix(']')) {
            section = match name.trim() {
                "kicks" => Some("kicks"),
                "pulses" => Some("pulses"),
                other => return Err(file_err(line_no, format!("unknown section [{other}]"))),
            };
            continue;
        }
        match section {
            Some("kicks") => kicks.push(
                parse_event("kicks", line).map_err(|e| file_err(line_no, e.to_string()))?,
            ),
            Some("pulses") => pulses.push(
                parse_event("pulses", line).map_err(|e| file_err(line_no, e.to_string()))?,
            ),
            _ => {
                let (key, value) = line
                    .split_once('=')
                    .ok_or_else(|| file_err(line_no, "expected key = value".into()))?;
                let key = key.trim();
                let value = value.trim();
                match key {
                    "preset" => preset = Some(value.to_string()),
                    "initial" => layer.initial = Some(value.to_string()),
                    "J" | "j" => layer.j = Some(parse_f64("J", value)?),
                    "alpha" => layer.alpha = Some(parse_f64("alpha", value)?),
                    "beta" => layer.beta = Some(parse_f64("beta", value)?),
                    "tau" => layer.tau = Some(parse_f64("tau", value)?),
                    "dt" => layer.dt = Some(parse_f64("dt", value)?),
                    "t_max" | "t-max" => layer.t_max = Some(parse_f64("t-max", value)?),
                    "ratio_range" | "ratio-range" => {
                        layer.ratio_range = Some(parse_ratio_range(value)?)
                    }
                    "method" => {
                        layer.method = Some(Method::parse(value).ok_or_else(|| {
                            file_err(line_no, format!("unknown method '{value}'"))
                        })?)
                    }
                    "out" => layer.out = Some(PathBuf::from(value)),
                    "format" => layer.format = Some(OutputFormat::parse(value)?),
                    other => return Err(file_err(line_no, format!("unknown key '{other}'"))),
                }
            }
        }
    }
    if !kicks.is_empty() {
        layer.kicks = Some(kicks);
    }
    if !pulses.is_empty() {
        layer.pulses = Some(pulses);
    }
    Ok((layer, preset))
}

/// The four figure-reproduction event trains.
fn train_single() -> Vec<(f64, Sign)> {
    vec![(5.0, Sign::Plus)]
}

fn train_plus_minus() -> Vec<(f64, Sign)> {
    vec![(5.0, Sign::Plus), (10.0, Sign::Minus)]
}

fn train_plus_plus() -> Vec<(f64, Sign)> {
    vec![(5.0, Sign::Plus), (10.0, Sign::Plus)]
}

fn train_four_plus() -> Vec<(f64, Sign)> {
    vec![(5.0, Sign::Plus), (10.0, Sign::Plus), (15.0, Sign::Plus), (20.0, Sign::Plus)]
}

/// Preset table. All presets use J = 1, β = 1, α = 2 (pass --alpha 3 for the
/// stronger-drive variants) with events at 5/10/15/20 on a [0, 25] axis.
/// Letter pairs map to initial states (a/c/e/g → psi+, b/d/f/h → 01) and,
/// for the pulse figures 6-9, to widths τ = 0.05/0.1/0.15/0.2.
fn preset_layer(name: &str) -> Option<Layer> {
    let mut layer = Layer {
        j: Some(1.0),
        alpha: Some(2.0),
        beta: Some(1.0),
        t_max: Some(25.0),
        ..Layer::default()
    };
    let (fig, letter) = name.strip_prefix("fig").and_then(|rest| {
        let mut chars = rest.chars();
        let fig = chars.next()?;
        let letter = chars.next()?;
        chars.next().is_none().then_some((fig, letter))
    })?;

    layer.initial = Some(
        match letter {
            'a' | 'c' | 'e' | 'g' => "psi+",
            'b' | 'd' | 'f' | 'h' => "01",
            _ => return None,
        }
        .to_string(),
    );
    let tau = match letter {
        'a' | 'b' => 0.05,
        'c' | 'd' => 0.10,
        'e' | 'f' => 0.15,
        'g' | 'h' => 0.20,
        _ => return None,
    };

    match fig {
        '1'..='5' if !matches!(letter, 'a' | 'b') => return None,
        '1' => layer.kicks = Some(train_single()),
        '2' => layer.kicks = Some(train_plus_minus()),
        '3' => layer.kicks = Some(train_plus_plus()),
        '4' | '5' => layer.kicks = Some(train_four_plus()),
        '6' => {
            layer.pulses = Some(train_single());
            layer.tau = Some(tau);
        }
        '7' => {
            layer.pulses = Some(train_plus_minus());
            layer.tau = Some(tau);
        }
        '8' => {
            layer.pulses = Some(train_plus_plus());
            layer.tau = Some(tau);
        }
        '9' => {
            layer.pulses = Some(train_four_plus());
            layer.tau = Some(tau);
        }
        _ => return None,
    }
    Some(layer)
}

pub fn preset_names() -> Vec<String> {
    let mut names = Vec::new();
    for fig in '1'..='9' {
        let letters: &[char] = if ('1'..='5').contains(&fig) {
            &['a', 'b']
        } else {
            &['a', 'b', 'c', 'd', 'e', 'f', 'g', 'h']
        };
        for &l in letters {
            names.push(format!("fig{fig}{l}"));
        }
    }
    names
}

/// Resolve argv (plus any referenced config file) into a run configuration.
/// Flags override file values, which override preset values.
pub fn parse_config<I, S>(argv: I) -> Result<RunConfig, ConfigError>
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = CliArgs::try_parse_from(argv).map_err(|e| ConfigError::Usage(e.to_string()))?;
    let (command, flags) = match cli.command {
        CliCommand::Timeseries(f) => (CommandKind::Timeseries, f),
        CliCommand::Contour(f) => (CommandKind::Contour, f),
        CliCommand::Compare(f) => (CommandKind::Compare, f),
        CliCommand::Verify => {
            return Ok(RunConfig {
                command: CommandKind::Verify,
                preset: None,
                initial: "psi+".into(),
                j: 1.0,
                alpha: 2.0,
                beta: 1.0,
                tau: None,
                dt: 0.01,
                kicks: None,
                pulses: None,
                t_max: 25.0,
                ratio_range: (1.0, 10.0, 200),
                method: Method::AnalyticKick,
                out: None,
                format: OutputFormat::Csv,
            })
        }
    };
    resolve(command, flags)
}

fn resolve(command: CommandKind, flags: RunFlags) -> Result<RunConfig, ConfigError> {
    let flag_layer = flags.to_layer()?;
    let (file_layer, file_preset) = match &flags.config {
        Some(path) => parse_config_file(path)?,
        None => (Layer::default(), None),
    };
    let preset_name = flags.preset.clone().or(file_preset);
    let preset = match &preset_name {
        Some(name) => {
            preset_layer(name).ok_or_else(|| ConfigError::UnknownPreset(name.clone()))?
        }
        None => Layer::default(),
    };

    let merged = preset.overlay(file_layer).overlay(flag_layer);

    if merged.kicks.is_some() && merged.pulses.is_some() {
        return Err(ConfigError::ConflictingTrains);
    }
    if merged.tau.is_some() && merged.pulses.is_none() {
        return Err(ConfigError::TauWithoutPulses);
    }
    if merged.pulses.is_some() && merged.tau.is_none() {
        return Err(ConfigError::MissingTau);
    }

    let initial = merged.initial.unwrap_or_else(|| "psi+".into());
    if StateVector::named(&initial).is_none() {
        return Err(ConfigError::UnknownInitial {
            got: initial,
            options: StateVector::named_states().join(", "),
        });
    }

    let method = merged.method.unwrap_or(if merged.pulses.is_some() {
        Method::Rk4Pulse
    } else {
        Method::AnalyticKick
    });

    let default_dt = match command {
        CommandKind::Contour => 0.05,
        _ => 0.01,
    };

    Ok(RunConfig {
        command,
        preset: preset_name,
        initial,
        j: merged.j.unwrap_or(1.0),
        alpha: merged.alpha.unwrap_or(2.0),
        beta: merged.beta.unwrap_or(1.0),
        tau: merged.tau,
        dt: merged.dt.unwrap_or(default_dt),
        kicks: merged.kicks,
        pulses: merged.pulses,
        t_max: merged.t_max.unwrap_or(25.0),
        ratio_range: merged.ratio_range.unwrap_or((1.0, 10.0, 200)),
        method,
        out: merged.out,
        format: merged.format.unwrap_or(OutputFormat::Csv),
    })
}

impl RunConfig {
    pub fn profile(&self) -> Result<FieldProfile, ConfigError> {
        let strengths = FieldStrengths::new(self.alpha, self.beta)?;
        let train = if let Some(kicks) = &self.kicks {
            Train::Kicks(KickTrain::from_pairs(kicks)?)
        } else if let Some(pulses) = &self.pulses {
            let tau = self.tau.ok_or(ConfigError::MissingTau)?;
            Train::Pulses(PulseTrain::from_pairs(pulses, tau)?)
        } else {
            Train::Free
        };
        Ok(FieldProfile::new(strengths, train))
    }

    pub fn scenario(&self) -> Result<Scenario, ConfigError> {
        let initial = StateVector::named(&self.initial).ok_or_else(|| {
            ConfigError::UnknownInitial {
                got: self.initial.clone(),
                options: StateVector::named_states().join(", "),
            }
        })?;
        Ok(Scenario {
            initial,
            initial_name: self.initial.clone(),
            profile: self.profile()?,
            coupling: Coupling::new(self.j)?,
            grid: SimGrid::new(0.0, self.t_max, self.dt, 1)?,
            method: self.method,
        })
    }

    pub fn sweep_spec(&self) -> Result<SweepSpec, ConfigError> {
        Ok(SweepSpec {
            scenario: self.scenario()?,
            ratio_lo: self.ratio_range.0,
            ratio_hi: self.ratio_range.1,
            ratio_points: self.ratio_range.2,
        })
    }
}
