//! Configuration-driven frontend: parses a flat `key = value` file, runs one
//! solver or harness and renders the result as CSV.

use std::fmt::Write as _;
use std::fs;
use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use contrast_core::asymptotics::{eigenvalue_convergence, resolvent_convergence, ConvergenceReport};
use contrast_core::disk::MAX_MODE;
use contrast_core::spectra::{
    default_window, effective_spectrum_dtn, effective_spectrum_series, steklov_spectrum, transmission_spectrum,
    SpectrumReport,
};
use contrast_core::triple::run_property_suite;
use contrast_core::{Complex64, Geometry, Route};

/// Seed of the random triples drawn by `triple-check`.
pub const TRIPLE_SEED: u64 = 20_240_601;
/// Number of random triples drawn by `triple-check`.
pub const TRIPLE_COUNT: usize = 100;

pub const KEYS: [&str; 9] = ["r_in", "r_out", "a_list", "modes", "k_trunc", "z_window", "z_probe", "tol_root", "output"];

/// Failure classes with their process exit codes.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("numerical failure: {0}")]
    Numerical(contrast_core::Error),
    #[error("cannot write {path}: {source}")]
    Output { path: PathBuf, source: std::io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numerical(_) => 3,
            CliError::Output { .. } => 1,
        }
    }
}

impl From<contrast_core::Error> for CliError {
    fn from(e: contrast_core::Error) -> Self {
        match e {
            // Parameter-range violations detected by the solvers.
            contrast_core::Error::Domain(msg) => CliError::Config(msg),
            other => CliError::Numerical(other),
        }
    }
}

/// Subcommands of the `contrast` binary.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Task {
    Spectrum,
    Effective,
    Steklov,
    ConvergeEig,
    ConvergeResolvent,
    TripleCheck,
}

impl Task {
    pub fn name(&self) -> &'static str {
        match self {
            Task::Spectrum => "spectrum",
            Task::Effective => "effective",
            Task::Steklov => "steklov",
            Task::ConvergeEig => "converge-eig",
            Task::ConvergeResolvent => "converge-resolvent",
            Task::TripleCheck => "triple-check",
        }
    }
}

/// Validated run settings.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub r_in: f64,
    pub r_out: f64,
    /// Nonempty, strictly ascending.
    pub a_list: Vec<f64>,
    /// Inclusive mode range.
    pub modes: RangeInclusive<usize>,
    pub k_trunc: usize,
    /// `None` selects the default window of the solver.
    pub z_window: Option<(f64, f64)>,
    pub z_probe: Complex64,
    pub tol_root: f64,
    /// `None` writes the CSV to standard output.
    pub output: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            r_in: 1.0,
            r_out: 2.0,
            a_list: vec![1e3, 1e4, 1e5],
            modes: 0..=4,
            k_trunc: 64,
            z_window: None,
            z_probe: Complex64::new(1.0, 1.0),
            tol_root: 1e-10,
            output: None,
        }
    }
}

fn parse_f64(key: &str, v: &str) -> Result<f64, CliError> {
    let x = f64::from_str(v.trim()).map_err(|_| CliError::Config(format!("{key}: cannot parse '{v}' as a number")))?;
    if !x.is_finite() {
        return Err(CliError::Config(format!("{key}: value '{v}' is not finite")));
    }
    Ok(x)
}

fn parse_pair(key: &str, v: &str) -> Result<(f64, f64), CliError> {
    match v.split(',').collect::<Vec<_>>().as_slice() {
        [a, b] => Ok((parse_f64(key, a)?, parse_f64(key, b)?)),
        _ => Err(CliError::Config(format!("{key}: expected two comma-separated numbers, got '{v}'"))),
    }
}

fn parse_usize(key: &str, v: &str) -> Result<usize, CliError> {
    v.trim().parse().map_err(|_| CliError::Config(format!("{key}: cannot parse '{v}' as a nonnegative integer")))
}

impl RunConfig {
    /// Parses `key = value` lines; `#` starts a comment. Unset keys keep
    /// their defaults.
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut cfg = Self::default();
        let mut seen = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(CliError::Config(format!("line {}: expected 'key = value'", lineno + 1)));
            };
            let (key, value) = (key.trim(), value.trim());
            if !KEYS.contains(&key) {
                return Err(CliError::Config(format!(
                    "line {}: unknown key '{key}' (allowed: {})",
                    lineno + 1,
                    KEYS.join(", ")
                )));
            }
            if seen.contains(&key) {
                return Err(CliError::Config(format!("line {}: duplicate key '{key}'", lineno + 1)));
            }
            seen.push(key);
            match key {
                "r_in" => cfg.r_in = parse_f64(key, value)?,
                "r_out" => cfg.r_out = parse_f64(key, value)?,
                "a_list" => {
                    cfg.a_list = value.split(',').map(|v| parse_f64(key, v)).collect::<Result<_, _>>()?;
                }
                "modes" => {
                    let Some((lo, hi)) = value.split_once("..") else {
                        return Err(CliError::Config(format!("modes: expected 'lo..hi', got '{value}'")));
                    };
                    cfg.modes = parse_usize(key, lo)?..=parse_usize(key, hi)?;
                }
                "k_trunc" => cfg.k_trunc = parse_usize(key, value)?,
                "z_window" => cfg.z_window = Some(parse_pair(key, value)?),
                "z_probe" => {
                    let (re, im) = parse_pair(key, value)?;
                    cfg.z_probe = Complex64::new(re, im);
                }
                "tol_root" => cfg.tol_root = parse_f64(key, value)?,
                "output" => cfg.output = (value != "-").then(|| PathBuf::from(value)),
                _ => unreachable!("key list checked above"),
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let fail = |msg: String| Err(CliError::Config(msg));
        if !(self.r_in > 0.0 && self.r_out > self.r_in) {
            return fail(format!("radii must satisfy 0 < r_in < r_out, got {} and {}", self.r_in, self.r_out));
        }
        if self.a_list.is_empty() || self.a_list.iter().any(|a| *a <= 0.0) {
            return fail("a_list must hold positive contrasts".into());
        }
        if self.a_list.windows(2).any(|w| w[1] <= w[0]) {
            return fail("a_list must be strictly ascending".into());
        }
        if self.modes.start() > self.modes.end() || *self.modes.end() > MAX_MODE {
            return fail(format!("modes must satisfy lo <= hi <= {MAX_MODE}"));
        }
        if self.k_trunc == 0 {
            return fail("k_trunc must be positive".into());
        }
        if let Some((lo, hi)) = self.z_window {
            if !(lo >= 0.0 && hi > lo) {
                return fail(format!("z_window must satisfy 0 <= lo < hi, got {lo},{hi}"));
            }
        }
        if self.tol_root.is_nan() || self.tol_root <= 0.0 {
            return fail("tol_root must be positive".into());
        }
        Ok(())
    }

    pub fn geometry(&self, contrast: f64) -> Result<Geometry, CliError> {
        Ok(Geometry::new(self.r_in, self.r_out, contrast)?)
    }

    fn mode_range(&self) -> std::ops::Range<usize> {
        *self.modes.start()..*self.modes.end() + 1
    }

    fn window(&self, g: &Geometry) -> Result<(f64, f64), CliError> {
        match self.z_window {
            Some(w) => Ok(w),
            None => Ok(default_window(g)?),
        }
    }
}

/// Floating-point format used in every CSV cell: 17 significant digits.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// CSV text and one-line summary of a run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rendered {
    pub csv: String,
    pub summary: String,
}

fn spectrum_csv(report: &SpectrumReport, keep: impl Fn(usize) -> bool) -> (String, usize) {
    let mut csv = String::from("mode,z,multiplicity,residual,route\n");
    let mut rows = 0;
    for r in report.roots.iter().filter(|r| keep(r.mode)) {
        let _ = writeln!(csv, "{},{},{},{},{}", r.mode, fmt_f64(r.z), r.multiplicity, fmt_f64(r.residual), r.route);
        rows += 1;
    }
    (csv, rows)
}

fn convergence_csv(report: &ConvergenceReport) -> String {
    let mut csv = String::from("a,err\n");
    for (a, e) in &report.samples {
        let _ = writeln!(csv, "{},{}", fmt_f64(*a), fmt_f64(*e));
    }
    let _ = writeln!(csv, "slope,{}", fmt_f64(report.slope));
    let _ = writeln!(csv, "residual,{}", fmt_f64(report.residual));
    csv
}

/// Runs `task` and renders its CSV without touching the file system.
pub fn render(task: Task, cfg: &RunConfig) -> Result<Rendered, CliError> {
    let a0 = cfg.a_list[0];
    match task {
        Task::Spectrum => {
            let g = cfg.geometry(a0)?;
            let window = cfg.window(&g)?;
            let report = transmission_spectrum(&g, cfg.mode_range(), window, cfg.tol_root)?;
            let (csv, rows) = spectrum_csv(&report, |_| true);
            let summary = format!(
                "spectrum: {rows} transmission roots for modes {:?} at a = {a0} in [{}, {}]",
                cfg.modes, window.0, window.1
            );
            Ok(Rendered { csv, summary })
        }
        Task::Effective => {
            let g = cfg.geometry(a0)?;
            let window = cfg.window(&g)?;
            let dtn = effective_spectrum_dtn(&g, window, cfg.tol_root)?;
            let series = effective_spectrum_series(&g, cfg.k_trunc, window, cfg.tol_root)?;
            let mut merged = dtn.clone();
            merged.roots.extend(series.roots.into_iter().filter(|r| r.route == Route::EffectiveSeries));
            merged.roots.sort_by(|a, b| a.z.total_cmp(&b.z).then(a.mode.cmp(&b.mode)).then(a.route.cmp(&b.route)));
            let (csv, rows) = spectrum_csv(&merged, |m| cfg.modes.contains(&m));
            let summary = format!(
                "effective: {rows} roots (scalar DtN and series K = {}) for modes {:?} in [{}, {}]",
                cfg.k_trunc, cfg.modes, window.0, window.1
            );
            Ok(Rendered { csv, summary })
        }
        Task::Steklov => {
            let g = cfg.geometry(a0)?;
            let values = steklov_spectrum(&g, cfg.mode_range())?;
            let mut csv = String::from("mode,value\n");
            for (n, v) in &values {
                let _ = writeln!(csv, "{n},{}", fmt_f64(*v));
            }
            Ok(Rendered { csv, summary: format!("steklov: {} eigenvalues for modes {:?}", values.len(), cfg.modes) })
        }
        Task::ConvergeEig => {
            let g = cfg.geometry(a0)?;
            let mode = *cfg.modes.start();
            let report = eigenvalue_convergence(&g, mode, 1, &cfg.a_list)?;
            let summary =
                format!("converge-eig: mode {mode} index 1, slope {:.4}, residual {:.3e}", report.slope, report.residual);
            Ok(Rendered { csv: convergence_csv(&report), summary })
        }
        Task::ConvergeResolvent => {
            let g = cfg.geometry(a0)?;
            let report =
                resolvent_convergence(&g, cfg.z_probe, &cfg.a_list, cfg.mode_range(), cfg.k_trunc, cfg.k_trunc)?;
            let summary = format!(
                "converge-resolvent: z = {}, K = {}, modes {:?}, slope {:.4}, residual {:.3e}",
                cfg.z_probe, cfg.k_trunc, cfg.modes, report.slope, report.residual
            );
            Ok(Rendered { csv: convergence_csv(&report), summary })
        }
        Task::TripleCheck => {
            let report = run_property_suite(TRIPLE_COUNT, TRIPLE_SEED)?;
            let mut csv = String::from("check,passed,failed\n");
            for c in &report.checks {
                let _ = writeln!(csv, "{},{},{}", c.name, c.passed, c.failed);
            }
            let failed = report.total_failed();
            let summary = format!("triple-check: {} triples, {failed} failed checks", report.triples);
            if failed > 0 {
                return Err(CliError::Numerical(contrast_core::Error::Consistency(format!(
                    "{failed} property checks failed\n{csv}"
                ))));
            }
            Ok(Rendered { csv, summary })
        }
    }
}

/// Loads the config, runs `task` and writes the CSV to the configured output
/// (standard output when unset). Returns the summary line.
pub fn run(task: Task, config: &Path) -> Result<String, CliError> {
    let cfg = RunConfig::load(config)?;
    let rendered = render(task, &cfg)?;
    match &cfg.output {
        Some(path) => {
            fs::write(path, &rendered.csv).map_err(|source| CliError::Output { path: path.clone(), source })?
        }
        None => print!("{}", rendered.csv),
    }
    Ok(rendered.summary)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_validate() {
        let cfg = RunConfig::parse("").unwrap();
        assert_eq!(cfg, RunConfig::default());
    }

    #[test]
    fn parses_every_key() {
        let text = "\
# full config
r_in = 0.5
r_out = 1.5   # trailing comment
a_list = 1e2, 1e3,1e4
modes = 1..3
k_trunc = 40
z_window = 0,30
z_probe = 2,-0.5
tol_root = 1e-9
output = out.csv
";
        let cfg = RunConfig::parse(text).unwrap();
        assert_eq!(cfg.r_in, 0.5);
        assert_eq!(cfg.a_list, vec![1e2, 1e3, 1e4]);
        assert_eq!(cfg.modes, 1..=3);
        assert_eq!(cfg.z_window, Some((0.0, 30.0)));
        assert_eq!(cfg.z_probe, Complex64::new(2.0, -0.5));
        assert_eq!(cfg.output, Some(PathBuf::from("out.csv")));
    }

    #[test]
    fn rejects_bad_configs() {
        for text in [
            "radius = 1",
            "r_in = 1\nr_in = 2",
            "r_in = 3",
            "a_list = 1e3, 1e2",
            "a_list = -1",
            "modes = 3..1",
            "modes = 0-4",
            "tol_root = 0",
            "z_window = 5,1",
            "z_probe = 1",
            "r_in",
        ] {
            let err = RunConfig::parse(text).unwrap_err();
            assert_eq!(err.exit_code(), 2, "{text}");
        }
        let err = RunConfig::parse("radius = 1").unwrap_err();
        assert!(err.to_string().contains("radius"));
    }

    #[test]
    fn error_classes_map_to_exit_codes() {
        assert_eq!(CliError::from(contrast_core::Error::Domain("x".into())).exit_code(), 2);
        let pole = contrast_core::Error::Pole { function: "m", z: 1.0, pole: 1.0 };
        assert_eq!(CliError::from(pole).exit_code(), 3);
        assert_eq!(CliError::from(contrast_core::Error::Consistency("x".into())).exit_code(), 3);
    }

    #[test]
    fn number_format_round_trips() {
        for x in [0.0, 1.0 / 3.0, 5.168376123090561, 1e-300, -2.5e17] {
            let s = fmt_f64(x);
            assert_eq!(s.parse::<f64>().unwrap(), x);
            assert_eq!(s.split('e').next().unwrap().trim_start_matches('-').len(), 18);
        }
    }
}
