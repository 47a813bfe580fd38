//! Plain-text `key = value` run configuration.
//!
//! ```text
//! # comments run to the end of the line
//! command = sweep
//! ladder.r = 5
//! bath.phi = 1.0
//! spectrum.r = 1/2, 1, 3/2     # lists are comma separated
//! ```

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use tclaser_core::frohlich::{ladder_analytic, ladder_from_spectrum, BathParams, LevelLadder};
use tclaser_core::spectrum::{build_block, diagonalize, BlockIndex};
use tclaser_core::thermal::{Beta, EnsembleParams};
use tclaser_core::HalfInt;

/// Largest block dimension the spectrum command will diagonalize.
pub const MAX_BLOCK_DIM: usize = 8192;

pub const KNOWN_KEYS: &[&str] = &[
    "command",
    "spectrum.r",
    "spectrum.c",
    "spectrum.kappa",
    "spectrum.distributions",
    "thermal.n",
    "thermal.beta",
    "ladder.source",
    "ladder.r",
    "ladder.c_ref",
    "ladder.omega",
    "ladder.kappa",
    "bath.beta",
    "bath.phi",
    "bath.chi",
    "pump.q",
    "pump.s",
    "sweep.s_min",
    "sweep.s_max",
    "sweep.points",
    "sweep.scale",
    "sweep.unit",
    "sweep.include_zero",
    "output.dir",
    "workers",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Command {
    Spectrum,
    Thermal,
    #[value(name = "steady-state")]
    SteadyState,
    Sweep,
    Threshold,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Spectrum => "spectrum",
            Command::Thermal => "thermal",
            Command::SteadyState => "steady-state",
            Command::Sweep => "sweep",
            Command::Threshold => "threshold",
        }
    }
}

impl FromStr for Command {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "spectrum" => Ok(Command::Spectrum),
            "thermal" => Ok(Command::Thermal),
            "steady-state" => Ok(Command::SteadyState),
            "sweep" => Ok(Command::Sweep),
            "threshold" => Ok(Command::Threshold),
            other => Err(format!(
                "unknown command `{other}` (expected spectrum, thermal, steady-state, sweep or threshold)"
            )),
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One problem found while reading a configuration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigIssue {
    pub line: Option<usize>,
    pub key: String,
    pub message: String,
}

impl fmt::Display for ConfigIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(line) => write!(f, "line {line}: {}: {}", self.key, self.message),
            None => write!(f, "{}: {}", self.key, self.message),
        }
    }
}

/// Every issue in a rejected configuration, in file order.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub struct ConfigErrors(pub Vec<ConfigIssue>);

impl fmt::Display for ConfigErrors {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "invalid configuration ({} problem(s)):", self.0.len())?;
        for issue in &self.0 {
            writeln!(f, "  {issue}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DistributionSelection {
    Ground,
    All,
}

#[derive(Debug, Clone)]
pub struct SpectrumConfig {
    pub blocks: Vec<BlockIndex<f64>>,
    pub distributions: DistributionSelection,
}

#[derive(Debug, Clone)]
pub struct ThermalConfig {
    pub points: Vec<EnsembleParams<f64>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepScale {
    Log,
    Linear,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepUnit {
    Absolute,
    /// Bounds are multiples of the threshold estimate.
    Threshold,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepConfig {
    pub s_min: f64,
    pub s_max: f64,
    pub points: usize,
    pub scale: SweepScale,
    pub unit: SweepUnit,
    /// Replace the first grid point by `s = 0`.
    pub include_zero: bool,
}

impl SweepConfig {
    /// Default grid for the knee estimate: `0` then log-spaced from
    /// `1e-3 s0` to `100 s0`, 60 points in all.
    pub const KNEE_DEFAULT: SweepConfig = SweepConfig {
        s_min: 1e-3,
        s_max: 100.0,
        points: 60,
        scale: SweepScale::Log,
        unit: SweepUnit::Threshold,
        include_zero: true,
    };

    /// Supply grid, ascending; `s0` scales the bounds when the unit is the
    /// threshold.
    pub fn grid(&self, s0: f64) -> Vec<f64> {
        let factor = match self.unit {
            SweepUnit::Absolute => 1.0,
            SweepUnit::Threshold => s0,
        };
        let (lo, hi) = (self.s_min * factor, self.s_max * factor);
        let (lead, spaced) = if self.include_zero { (vec![0.0], self.points - 1) } else { (Vec::new(), self.points) };
        let mut grid = lead;
        match spaced {
            0 => {}
            1 => grid.push(hi),
            n => {
                let last = (n - 1) as f64;
                grid.extend((0..n).map(|k| {
                    let t = k as f64 / last;
                    match self.scale {
                        SweepScale::Log => (lo.ln() + t * (hi.ln() - lo.ln())).exp(),
                        SweepScale::Linear => lo + t * (hi - lo),
                    }
                }));
                *grid.last_mut().expect("non-empty") = hi;
            }
        }
        grid
    }
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: Command,
    pub spectrum: Option<SpectrumConfig>,
    pub thermal: Option<ThermalConfig>,
    pub ladder: Option<LevelLadder<f64>>,
    pub bath: Option<BathParams<f64>>,
    pub q: f64,
    pub s: Option<f64>,
    pub sweep: Option<SweepConfig>,
    pub output_dir: PathBuf,
    pub workers: usize,
    /// Normalized `key -> value` pairs as read, for the manifest.
    pub echo: BTreeMap<String, String>,
}

struct Entry {
    line: usize,
    value: String,
}

struct Reader {
    entries: BTreeMap<String, Entry>,
    issues: Vec<ConfigIssue>,
}

impl Reader {
    fn issue(&mut self, key: &str, message: impl Into<String>) {
        let line = self.entries.get(key).map(|e| e.line);
        self.issues.push(ConfigIssue {
            line,
            key: key.to_string(),
            message: message.into(),
        });
    }

    fn raw(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(|e| e.value.as_str())
    }

    fn required(&mut self, key: &str, command: Command) -> Option<String> {
        let value = self.raw(key).map(str::to_string);
        if value.is_none() {
            self.issue(key, format!("required by the `{command}` command"));
        }
        value
    }

    fn parse_one<T: FromStr>(&mut self, key: &str, text: &str, what: &str) -> Option<T> {
        match text.trim().parse::<T>() {
            Ok(v) => Some(v),
            Err(_) => {
                self.issue(key, format!("`{}` is not a valid {what}", text.trim()));
                None
            }
        }
    }

    fn list<T: FromStr>(&mut self, key: &str, text: &str, what: &str) -> Option<Vec<T>> {
        let parts: Vec<&str> = text.split(',').map(str::trim).collect();
        if parts.iter().any(|p| p.is_empty()) {
            self.issue(key, "empty list element");
            return None;
        }
        let parsed: Vec<Option<T>> = parts.iter().map(|p| self.parse_one(key, p, what)).collect();
        parsed.into_iter().collect()
    }

    fn real(&mut self, key: &str, text: &str) -> Option<f64> {
        let v: f64 = self.parse_one(key, text, "number")?;
        if v.is_finite() {
            Some(v)
        } else {
            self.issue(key, "must be finite");
            None
        }
    }

    fn real_where(&mut self, key: &str, text: &str, ok: fn(f64) -> bool, rule: &str) -> Option<f64> {
        let v = self.real(key, text)?;
        if ok(v) {
            Some(v)
        } else {
            self.issue(key, format!("{rule}, got {v}"));
            None
        }
    }

    fn choice<T: Copy>(&mut self, key: &str, text: &str, options: &[(&str, T)]) -> Option<T> {
        let found = options.iter().find(|(name, _)| *name == text.trim()).map(|&(_, v)| v);
        if found.is_none() {
            let names: Vec<&str> = options.iter().map(|(n, _)| *n).collect();
            self.issue(key, format!("`{}` is not one of {}", text.trim(), names.join(", ")));
        }
        found
    }
}

/// Parses and validates a configuration for `command`. A `command` key in
/// the text, if present, must agree.
pub fn parse_config(text: &str, command: Option<Command>) -> Result<RunConfig, ConfigErrors> {
    let mut reader = Reader {
        entries: BTreeMap::new(),
        issues: Vec::new(),
    };
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let Some((key, value)) = content.split_once('=') else {
            reader.issues.push(ConfigIssue {
                line: Some(line),
                key: content.to_string(),
                message: "expected `key = value`".into(),
            });
            continue;
        };
        let (key, value) = (key.trim(), value.trim());
        if !KNOWN_KEYS.contains(&key) {
            reader.issues.push(ConfigIssue {
                line: Some(line),
                key: key.to_string(),
                message: "unknown key".into(),
            });
            continue;
        }
        if value.is_empty() {
            reader.issues.push(ConfigIssue {
                line: Some(line),
                key: key.to_string(),
                message: "missing value".into(),
            });
            continue;
        }
        if let Some(prev) = reader.entries.get(key) {
            reader.issues.push(ConfigIssue {
                line: Some(line),
                key: key.to_string(),
                message: format!("duplicate key (first set on line {})", prev.line),
            });
            continue;
        }
        reader.entries.insert(
            key.to_string(),
            Entry {
                line,
                value: value.to_string(),
            },
        );
    }

    let from_text = reader.raw("command").map(str::to_string).and_then(|c| {
        c.parse::<Command>()
            .map_err(|e| reader.issue("command", e))
            .ok()
    });
    let command = match (command, from_text) {
        (Some(a), Some(b)) if a != b => {
            reader.issue("command", format!("config says `{b}` but `{a}` was requested"));
            a
        }
        (Some(a), _) => a,
        (None, Some(b)) => b,
        (None, None) => {
            reader.issue("command", "no command given");
            Command::Spectrum
        }
    };

    let echo = reader.entries.iter().map(|(k, e)| (k.clone(), e.value.clone())).collect();

    let workers = match reader.raw("workers").map(str::to_string) {
        Some(t) => reader
            .parse_one::<usize>("workers", &t, "worker count")
            .filter(|&w| {
                if w == 0 {
                    reader.issue("workers", "must be >= 1");
                }
                w > 0
            })
            .unwrap_or(1),
        None => 1,
    };
    let output_dir = PathBuf::from(reader.raw("output.dir").unwrap_or("out"));

    let spectrum = (command == Command::Spectrum).then(|| spectrum_section(&mut reader, command)).flatten();
    let thermal = (command == Command::Thermal).then(|| thermal_section(&mut reader, command)).flatten();
    let needs_bath = matches!(command, Command::SteadyState | Command::Sweep | Command::Threshold);
    let (ladder, bath) = if needs_bath {
        (ladder_section(&mut reader, command), bath_section(&mut reader, command))
    } else {
        (None, None)
    };

    let q = match reader.raw("pump.q").map(str::to_string) {
        Some(t) => reader.real_where("pump.q", &t, |v| v >= 0.0, "must be >= 0").unwrap_or(0.0),
        None => 0.0,
    };
    let s = if command == Command::SteadyState {
        reader
            .required("pump.s", command)
            .and_then(|t| reader.real_where("pump.s", &t, |v| v >= 0.0, "must be >= 0"))
    } else {
        None
    };

    let sweep = match command {
        Command::Sweep => sweep_section(&mut reader, command),
        Command::Threshold => {
            if reader.entries.keys().any(|k| k.starts_with("sweep.")) {
                sweep_section(&mut reader, command)
            } else {
                Some(SweepConfig::KNEE_DEFAULT)
            }
        }
        _ => None,
    };

    if let (Some(sw), Some(b), Some(l)) = (&sweep, &bath, &ladder) {
        if command == Command::Threshold || sw.unit == SweepUnit::Threshold {
            if !(b.chi > 0.0) {
                reader.issue("bath.chi", "the threshold estimate needs bath.chi > 0");
            } else if let Some(level) = l.degenerate_level() {
                reader.issue("ladder.kappa", format!("ladder is degenerate at level {level}; threshold undefined"));
            }
        }
    }
    if command == Command::Sweep || command == Command::SteadyState {
        if let (Some(b), Some(l)) = (&bath, &ladder) {
            if b.chi > 0.0 {
                if let Some(level) = l.degenerate_level() {
                    reader.issue("ladder.kappa", format!("degenerate ladder (level {level}) needs bath.chi = 0"));
                }
            }
        }
    }

    if !reader.issues.is_empty() {
        reader.issues.sort_by_key(|i| i.line.unwrap_or(usize::MAX));
        return Err(ConfigErrors(reader.issues));
    }
    Ok(RunConfig {
        command,
        spectrum,
        thermal,
        ladder,
        bath,
        q,
        s,
        sweep,
        output_dir,
        workers,
        echo,
    })
}

fn spectrum_section(reader: &mut Reader, command: Command) -> Option<SpectrumConfig> {
    let r = reader.required("spectrum.r", command);
    let c = reader.required("spectrum.c", command);
    let kappa = reader.required("spectrum.kappa", command);
    let rs: Option<Vec<HalfInt>> = r.and_then(|t| reader.list("spectrum.r", &t, "half-integer"));
    let cs: Option<Vec<HalfInt>> = c.and_then(|t| reader.list("spectrum.c", &t, "half-integer"));
    let kappas: Option<Vec<f64>> = kappa.and_then(|t| reader.list("spectrum.kappa", &t, "number"));
    let distributions = match reader.raw("spectrum.distributions").map(str::to_string) {
        Some(t) => reader.choice(
            "spectrum.distributions",
            &t,
            &[("ground", DistributionSelection::Ground), ("all", DistributionSelection::All)],
        )?,
        None => DistributionSelection::Ground,
    };
    let (rs, cs) = (rs?, cs?);
    let mut ok = true;
    for &r in &rs {
        if r.doubled() < 0 {
            reader.issue("spectrum.r", format!("must be >= 0, got {r}"));
            ok = false;
        }
    }
    let mut pairs = Vec::new();
    for &r in rs.iter().filter(|r| r.doubled() >= 0) {
        for &c in &cs {
            if (r.doubled() - c.doubled()) % 2 != 0 {
                reader.issue("spectrum.c", format!("c = {c} and r = {r} must both be integers or both half-odd"));
                ok = false;
            } else if c.doubled() < -r.doubled() {
                reader.issue("spectrum.c", format!("c = {c} < -r = {}: empty block", -r));
                ok = false;
            } else {
                pairs.push((r, c));
            }
        }
    }
    let kappas = kappas?;
    for &kappa in &kappas {
        if !(kappa.is_finite() && kappa > 0.0) {
            reader.issue("spectrum.kappa", format!("must be > 0, got {kappa}"));
            ok = false;
        }
    }
    if !ok {
        return None;
    }
    let mut blocks = Vec::new();
    for (r, c) in pairs {
        for &kappa in &kappas {
            match BlockIndex::new(r, c, kappa) {
                Ok(idx) if idx.basis().dim() > MAX_BLOCK_DIM => {
                    reader.issue(
                        "spectrum.c",
                        format!("block (r = {r}, c = {c}) has dimension {} > {MAX_BLOCK_DIM}", idx.basis().dim()),
                    );
                    ok = false;
                }
                Ok(idx) => blocks.push(idx),
                Err(e) => {
                    reader.issue("spectrum.c", e.to_string());
                    ok = false;
                }
            }
        }
    }
    ok.then_some(SpectrumConfig { blocks, distributions })
}

fn thermal_section(reader: &mut Reader, command: Command) -> Option<ThermalConfig> {
    let n = reader.required("thermal.n", command);
    let beta = reader.required("thermal.beta", command);
    let ns: Option<Vec<u32>> = n.and_then(|t| reader.list("thermal.n", &t, "molecule count"));
    let betas: Option<Vec<String>> = beta.and_then(|t| reader.list("thermal.beta", &t, "temperature"));
    let (ns, betas) = (ns?, betas?);
    let mut parsed = Vec::new();
    for b in &betas {
        let beta = if b == "inf" {
            Beta::Infinite
        } else {
            Beta::Finite(reader.real_where("thermal.beta", b, |v| v >= 0.0, "must be >= 0 or `inf`")?)
        };
        parsed.push(beta);
    }
    let mut points = Vec::new();
    for &n in &ns {
        for &beta in &parsed {
            match EnsembleParams::new(n, beta) {
                Ok(p) => points.push(p),
                Err(e) => {
                    reader.issue("thermal.n", e.to_string());
                    return None;
                }
            }
        }
    }
    Some(ThermalConfig { points })
}

fn ladder_section(reader: &mut Reader, command: Command) -> Option<LevelLadder<f64>> {
    #[derive(Clone, Copy)]
    enum Source {
        Analytic,
        Spectral,
    }
    let source = match reader.raw("ladder.source").map(str::to_string) {
        Some(t) => reader.choice("ladder.source", &t, &[("analytic", Source::Analytic), ("spectral", Source::Spectral)]),
        None => Some(Source::Analytic),
    };
    let r = reader
        .required("ladder.r", command)
        .and_then(|t| reader.parse_one::<HalfInt>("ladder.r", &t, "half-integer"));
    let c_ref = reader.required("ladder.c_ref", command);
    let omega = reader
        .required("ladder.omega", command)
        .and_then(|t| reader.real_where("ladder.omega", &t, |v| v > 0.0, "must be > 0"));
    let kappa = reader
        .required("ladder.kappa", command)
        .and_then(|t| reader.real_where("ladder.kappa", &t, |v| v >= 0.0, "must be >= 0"));
    let (source, r, c_ref, omega, kappa) = (source?, r?, c_ref?, omega?, kappa?);
    if r.doubled() < 0 {
        reader.issue("ladder.r", format!("must be >= 0, got {r}"));
        return None;
    }
    let built = match source {
        Source::Analytic => {
            let c_ref = reader.real_where("ladder.c_ref", &c_ref, |v| v > 0.0, "must be > 0")?;
            ladder_analytic(r, c_ref, omega, kappa)
        }
        Source::Spectral => {
            let c: HalfInt = reader.parse_one("ladder.c_ref", &c_ref, "half-integer")?;
            if c.doubled() < r.doubled() {
                reader.issue("ladder.c_ref", "spectral ladder needs c_ref >= r so that the block is full");
                return None;
            }
            if !(kappa > 0.0) {
                reader.issue("ladder.kappa", "spectral ladder needs kappa > 0");
                return None;
            }
            BlockIndex::new(r, c, kappa)
                .and_then(build_block)
                .and_then(|b| diagonalize(&b))
                .and_then(|sol| ladder_from_spectrum(&sol, omega))
        }
    };
    match built {
        Ok(l) => Some(l),
        Err(e) => {
            reader.issue("ladder.kappa", e.to_string());
            None
        }
    }
}

fn bath_section(reader: &mut Reader, command: Command) -> Option<BathParams<f64>> {
    let beta = reader
        .required("bath.beta", command)
        .and_then(|t| reader.real_where("bath.beta", &t, |v| v > 0.0, "must be > 0"));
    let phi = reader
        .required("bath.phi", command)
        .and_then(|t| reader.real_where("bath.phi", &t, |v| v > 0.0, "must be > 0"));
    let chi = reader
        .required("bath.chi", command)
        .and_then(|t| reader.real_where("bath.chi", &t, |v| v >= 0.0, "must be >= 0"));
    BathParams::new(beta?, phi?, chi?).ok()
}

fn sweep_section(reader: &mut Reader, command: Command) -> Option<SweepConfig> {
    let s_min = reader.required("sweep.s_min", command);
    let s_max = reader.required("sweep.s_max", command);
    let points = reader.required("sweep.points", command);
    let s_min = s_min.and_then(|t| reader.real_where("sweep.s_min", &t, |v| v >= 0.0, "must be >= 0"));
    let s_max = s_max.and_then(|t| reader.real_where("sweep.s_max", &t, |v| v >= 0.0, "must be >= 0"));
    let points = points.and_then(|t| reader.parse_one::<usize>("sweep.points", &t, "point count"));
    let scale = match reader.raw("sweep.scale").map(str::to_string) {
        Some(t) => reader.choice("sweep.scale", &t, &[("log", SweepScale::Log), ("linear", SweepScale::Linear)]),
        None => Some(SweepScale::Log),
    };
    let unit = match reader.raw("sweep.unit").map(str::to_string) {
        Some(t) => reader.choice(
            "sweep.unit",
            &t,
            &[("absolute", SweepUnit::Absolute), ("s0", SweepUnit::Threshold)],
        ),
        None => Some(SweepUnit::Absolute),
    };
    let include_zero = match reader.raw("sweep.include_zero").map(str::to_string) {
        Some(t) => reader.choice("sweep.include_zero", &t, &[("true", true), ("false", false)]),
        None => Some(false),
    };
    let (s_min, s_max, points, scale, unit, include_zero) = (s_min?, s_max?, points?, scale?, unit?, include_zero?);
    let mut ok = true;
    if points == 0 || (include_zero && points < 2) {
        reader.issue("sweep.points", "grid is empty");
        ok = false;
    }
    if s_max < s_min {
        reader.issue("sweep.s_max", format!("s_max = {s_max} is below s_min = {s_min}"));
        ok = false;
    }
    if scale == SweepScale::Log && !(s_min > 0.0) {
        reader.issue("sweep.s_min", "log grid needs s_min > 0 (use sweep.include_zero for s = 0)");
        ok = false;
    }
    if include_zero && !(s_min > 0.0) {
        reader.issue("sweep.s_min", "with include_zero the remaining grid must start above 0");
        ok = false;
    }
    ok.then_some(SweepConfig {
        s_min,
        s_max,
        points,
        scale,
        unit,
        include_zero,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const SWEEP: &str = "\
command = sweep
ladder.r = 5
ladder.c_ref = 1
ladder.omega = 1
ladder.kappa = 0.01
bath.beta = 1
bath.phi = 1
bath.chi = 0.1
sweep.s_min = 1e-3
sweep.s_max = 100
sweep.points = 60
sweep.unit = s0
sweep.include_zero = true
";

    #[test]
    fn minimal_spectrum() {
        let cfg = parse_config("spectrum.r = 1\nspectrum.c = 1\nspectrum.kappa = 1\n", Some(Command::Spectrum)).unwrap();
        let s = cfg.spectrum.unwrap();
        assert_eq!(s.blocks.len(), 1);
        assert_eq!(s.blocks[0].basis().dim(), 3);
        assert_eq!(cfg.workers, 1);
    }

    #[test]
    fn spectrum_lists_multiply() {
        let text = "command = spectrum\nspectrum.r = 1/2, 3/2\nspectrum.c = 1/2, 5/2, 7/2\nspectrum.kappa = 0.5, 1\n";
        let cfg = parse_config(text, None).unwrap();
        assert_eq!(cfg.spectrum.unwrap().blocks.len(), 12);
    }

    #[test]
    fn empty_block_names_the_field() {
        let err = parse_config("spectrum.r = 1\nspectrum.c = -3\nspectrum.kappa = 1\n", Some(Command::Spectrum))
            .unwrap_err();
        assert_eq!(err.0.len(), 1);
        assert_eq!(err.0[0].key, "spectrum.c");
        let err = parse_config("spectrum.r = 1\nspectrum.c = 3/2\nspectrum.kappa = 1\n", Some(Command::Spectrum))
            .unwrap_err();
        assert_eq!(err.0[0].key, "spectrum.c");
        assert!(err.0[0].message.contains("half-odd"));
    }

    #[test]
    fn sweep_order_error() {
        let text = SWEEP.replace("sweep.s_max = 100", "sweep.s_max = 1e-4");
        let err = parse_config(&text, None).unwrap_err();
        assert!(err.0.iter().any(|i| i.key == "sweep.s_max" && i.message.contains("below")));
    }

    #[test]
    fn all_problems_are_reported() {
        let text = "command = sweep\nbath.beta = -1\nbogus = 3\nladder.r = x\nsweep.points = 0\nworkers = 0\n";
        let err = parse_config(text, None).unwrap_err();
        let keys: Vec<&str> = err.0.iter().map(|i| i.key.as_str()).collect();
        for key in ["bogus", "bath.beta", "ladder.r", "workers", "bath.phi", "ladder.omega", "sweep.s_min"] {
            assert!(keys.contains(&key), "{key} missing from {keys:?}");
        }
    }

    #[test]
    fn duplicates_and_syntax() {
        let err = parse_config("command = thermal\nthermal.n = 4\nthermal.n = 5\nthermal.beta\n", None).unwrap_err();
        assert!(err.0.iter().any(|i| i.message.starts_with("duplicate")));
        assert!(err.0.iter().any(|i| i.message.contains("key = value")));
    }

    #[test]
    fn command_mismatch() {
        let err = parse_config(SWEEP, Some(Command::Thermal)).unwrap_err();
        assert!(err.0.iter().any(|i| i.key == "command"));
    }

    #[test]
    fn threshold_grid() {
        let cfg = parse_config(SWEEP, None).unwrap();
        let grid = cfg.sweep.unwrap().grid(365.0);
        assert_eq!(grid.len(), 60);
        assert_eq!(grid[0], 0.0);
        assert!((grid[1] - 0.365).abs() < 1e-12);
        assert_eq!(grid[59], 36_500.0);
        assert!(grid.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn linear_grid_from_zero() {
        let sw = SweepConfig {
            s_min: 0.0,
            s_max: 10.0,
            points: 50,
            scale: SweepScale::Linear,
            unit: SweepUnit::Threshold,
            include_zero: false,
        };
        let grid = sw.grid(2.0);
        assert_eq!(grid.len(), 50);
        assert_eq!((grid[0], grid[49]), (0.0, 20.0));
    }

    #[test]
    fn threshold_needs_coupled_bath() {
        let text = SWEEP.replace("bath.chi = 0.1", "bath.chi = 0").replace("command = sweep", "command = threshold");
        let err = parse_config(&text, None).unwrap_err();
        assert!(err.0.iter().any(|i| i.key == "bath.chi"));
    }

    #[test]
    fn thermal_betas() {
        let cfg = parse_config("command = thermal\nthermal.n = 4, 20\nthermal.beta = 0, 0.5, inf\n", None).unwrap();
        assert_eq!(cfg.thermal.unwrap().points.len(), 6);
        assert!(parse_config("command = thermal\nthermal.n = 0\nthermal.beta = 1\n", None).is_err());
    }
}
