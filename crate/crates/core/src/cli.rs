//! Experiment runner behind the `cusplab` binary.
//!
//! Modes: `spectrum` (density-operator spectrum to CSV plus a JSON verdict),
//! `coeff` (the coefficient A), `homokern` (1-D Nyström check of the
//! homogeneous-kernel law) and `verify` (invariant suites).
//!
//! Exit status: 0 success, 1 usage or configuration error, 2 failed verification.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, ValueEnum};
use log::{info, warn};
use serde::{Deserialize, Serialize};

use crate::cusp_states::{closed_form_coefficient_a, coefficient_a, CuspState, Symmetry};
use crate::density::{assemble_spectrum, channel_spectrum, trace_sum, DensityConfig};
use crate::error::LabError;
use crate::homokernel::{
    coefficient_1d, fourier_symbol, mu_coefficient, nystrom_1d, nystrom_1d_spectrum, symbol_sphere_coefficient,
    HomogeneousKernelSpec, Kernel1d, KernelFamily, Nystrom1d, Weight,
};
use crate::quadrature::RadialGrid;
use crate::scalar::rel_diff;
use crate::spectral::{finite_matrix_identities, plateau_estimate, PlateauEstimate};
use crate::spectrum::SpectrumSeries;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_VERIFY_FAILED: i32 = 2;

/// Relative band around A^{8/3} accepted for the plateau median.
pub const DENSITY_TOLERANCE: f64 = 0.25;
/// Relative band around G^{1/p} accepted for the 1-D plateau median.
pub const LINE_TOLERANCE: f64 = 0.10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum, Default)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    #[default]
    Spectrum,
    Coeff,
    Homokern,
    Verify,
}

/// Everything a run depends on. Unset optional fields resolve to the
/// mode-specific defaults:
///
/// | field     | spectrum / coeff | homokern   |
/// |-----------|------------------|------------|
/// | radial_n  | 320              | 2000       |
/// | r_max     | 14/ζ             | 6          |
/// | u_order   | l_max + 16       | unused     |
/// | window    | [100, 400]       | [40, 300]  |
/// | suite     | quick            | quick      |
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub mode: Mode,
    pub zeta: f64,
    pub c: f64,
    pub symmetry: Symmetry,
    pub l_max: usize,
    pub radial_n: Option<usize>,
    pub r_max: Option<f64>,
    pub u_order: Option<usize>,
    pub window: Option<[usize; 2]>,
    pub out: Option<PathBuf>,
    pub suite: Option<Suite>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            mode: Mode::Spectrum,
            zeta: 1.0,
            c: 0.5,
            symmetry: Symmetry::Symmetric,
            l_max: 48,
            radial_n: None,
            r_max: None,
            u_order: None,
            window: None,
            out: None,
            suite: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum, Default)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    #[default]
    Quick,
    Full,
}

/// A configuration problem, tagged with the flag it concerns.
#[derive(Debug, Clone, PartialEq)]
pub struct UsageError {
    pub flag: &'static str,
    pub message: String,
}

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {}", self.flag, self.message)
    }
}

fn usage(flag: &'static str, message: impl Into<String>) -> UsageError {
    UsageError { flag, message: message.into() }
}

impl ExperimentConfig {
    pub fn radial_n(&self) -> usize {
        self.radial_n.unwrap_or(if self.mode == Mode::Homokern { 2000 } else { 320 })
    }

    pub fn r_max(&self) -> f64 {
        self.r_max.unwrap_or(if self.mode == Mode::Homokern { 6.0 } else { 14.0 / self.zeta })
    }

    pub fn u_order(&self) -> usize {
        self.u_order.unwrap_or(self.l_max + 16)
    }

    pub fn window(&self) -> [usize; 2] {
        self.window.unwrap_or(if self.mode == Mode::Homokern { [40, 300] } else { [100, 400] })
    }

    pub fn suite(&self) -> Suite {
        self.suite.unwrap_or_default()
    }

    pub fn state(&self) -> Result<CuspState<f64>, LabError> {
        CuspState::new(self.zeta, self.c, self.symmetry)
    }

    pub fn density_config(&self) -> DensityConfig<f64> {
        DensityConfig { l_max: self.l_max, radial_nodes: self.radial_n(), r_max: self.r_max(), u_order: self.u_order() }
    }

    /// Copy with every default filled in, as embedded in reports.
    pub fn resolved(&self) -> Self {
        Self {
            radial_n: Some(self.radial_n()),
            r_max: Some(self.r_max()),
            u_order: Some(self.u_order()),
            window: Some(self.window()),
            suite: Some(self.suite()),
            ..self.clone()
        }
    }

    pub fn validate(&self) -> Result<(), UsageError> {
        if !(self.zeta > 0.0 && self.zeta <= 100.0) {
            return Err(usage("--zeta", format!("must lie in (0, 100], got {}", self.zeta)));
        }
        if !(self.c.is_finite() && self.c.abs() <= 1e6) {
            return Err(usage("--c", format!("must be finite with |c| <= 1e6, got {}", self.c)));
        }
        if self.l_max > 400 {
            return Err(usage("--lmax", format!("must be at most 400, got {}", self.l_max)));
        }
        let n = self.radial_n();
        let min_n = if self.mode == Mode::Homokern { crate::homokernel::MIN_NYSTROM_NODES } else { 2 };
        if n < min_n || n > 8000 {
            return Err(usage("--n", format!("must lie in [{min_n}, 8000], got {n}")));
        }
        let r = self.r_max();
        if !(r.is_finite() && r > 0.0) {
            return Err(usage("--rmax", format!("must be positive, got {r}")));
        }
        if self.u_order() < self.l_max + 1 {
            return Err(usage("--uorder", format!("must be at least lmax + 1 = {}, got {}", self.l_max + 1, self.u_order())));
        }
        let [lo, hi] = self.window();
        if lo == 0 || lo > hi {
            return Err(usage("--window", format!("need 1 <= lo <= hi, got {lo}:{hi}")));
        }
        Ok(())
    }

    pub fn from_toml(text: &str) -> Result<Self, UsageError> {
        toml::from_str(text).map_err(|e| usage("--config", e.to_string().lines().next().unwrap_or("parse error").to_string()))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config is always representable")
    }
}

fn parse_window(s: &str) -> Result<[usize; 2], String> {
    let (lo, hi) = s.split_once(':').ok_or_else(|| format!("expected <lo>:<hi>, got '{s}'"))?;
    let lo = lo.trim().parse().map_err(|e| format!("bad lower rank '{lo}': {e}"))?;
    let hi = hi.trim().parse().map_err(|e| format!("bad upper rank '{hi}': {e}"))?;
    Ok([lo, hi])
}

#[derive(Debug, Parser)]
#[command(name = "cusplab", version, allow_negative_numbers = true, about = "Spectra of one-particle density operators with electron-electron cusps")]
struct Args {
    /// What to run; may also come from the config file.
    #[arg(value_enum)]
    mode: Option<Mode>,
    /// Screening rate ζ > 0.
    #[arg(long)]
    zeta: Option<f64>,
    /// Cusp coupling c.
    #[arg(long)]
    c: Option<f64>,
    /// Use the antisymmetric state.
    #[arg(long)]
    antisymmetric: bool,
    /// Largest partial-wave channel.
    #[arg(long)]
    lmax: Option<usize>,
    /// Radial (or 1-D Nyström) node count.
    #[arg(long)]
    n: Option<usize>,
    /// Radial cutoff (or 1-D half-width).
    #[arg(long)]
    rmax: Option<f64>,
    /// Gauss-Legendre order of the angular integrals.
    #[arg(long)]
    uorder: Option<usize>,
    /// Plateau window as <lo>:<hi> (1-based ranks).
    #[arg(long, value_parser = parse_window)]
    window: Option<[usize; 2]>,
    /// Output path (CSV for spectra, JSON for reports).
    #[arg(long)]
    out: Option<PathBuf>,
    /// TOML config; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Verification suite.
    #[arg(long, value_enum)]
    suite: Option<Suite>,
}

fn resolve(args: Args) -> Result<ExperimentConfig, UsageError> {
    let mut cfg = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| usage("--config", format!("cannot read {}: {e}", path.display())))?;
            ExperimentConfig::from_toml(&text)?
        }
        None => {
            if args.mode.is_none() {
                return Err(usage("<MODE>", "missing mode (spectrum, coeff, homokern or verify)"));
            }
            ExperimentConfig::default()
        }
    };
    if let Some(m) = args.mode {
        cfg.mode = m;
    }
    if let Some(v) = args.zeta {
        cfg.zeta = v;
    }
    if let Some(v) = args.c {
        cfg.c = v;
    }
    if args.antisymmetric {
        cfg.symmetry = Symmetry::Antisymmetric;
    }
    if let Some(v) = args.lmax {
        cfg.l_max = v;
    }
    cfg.radial_n = args.n.or(cfg.radial_n);
    cfg.r_max = args.rmax.or(cfg.r_max);
    cfg.u_order = args.uorder.or(cfg.u_order);
    cfg.window = args.window.or(cfg.window);
    cfg.out = args.out.or(cfg.out);
    cfg.suite = args.suite.or(cfg.suite);
    cfg.validate()?;
    Ok(cfg)
}

/// Renders `x` with 12 significant digits, `%g` style.
pub fn format_sig(x: f64) -> String {
    const DIGITS: i32 = 12;
    if x == 0.0 || !x.is_finite() {
        return if x == 0.0 { "0".into() } else { x.to_string() };
    }
    let sci = format!("{:.*e}", (DIGITS - 1) as usize, x);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..DIGITS).contains(&exp) {
        let decimals = (DIGITS - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{:.*}", decimals, x))
    } else {
        format!("{}e{}{:02}", trim_zeros(mantissa), if exp < 0 { '-' } else { '+' }, exp.abs())
    }
}

fn trim_zeros(s: &str) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s.to_string()
    }
}

/// CSV `k,ell,lambda,scaled` with scaled = k^{1/p}·lambda, one row per rank
/// up to the last positive value.
pub fn spectrum_csv(series: &SpectrumSeries<f64>, inv_p: f64) -> String {
    let mut out = String::from("k,ell,lambda,scaled\n");
    let last = series.positive_len();
    for (k, e) in series.iter_ranked().take(last) {
        let scaled = (k as f64).powf(inv_p) * e.value;
        let _ = writeln!(out, "{k},{},{},{}", e.channel, format_sig(e.value), format_sig(scaled));
    }
    out
}

/// Verdict report of a spectrum or homokern run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Verdict {
    pub experiment: String,
    pub parameters: ExperimentConfig,
    /// Leading coefficient: A for density spectra, G_p for line operators.
    #[serde(rename = "A")]
    pub a: f64,
    /// Target of the scaled series: A^{8/3}, resp. G_p^{1/p}.
    #[serde(rename = "A_power")]
    pub a_power: f64,
    pub window: [usize; 2],
    pub scaled_median: f64,
    pub g_estimate: f64,
    #[serde(rename = "G_estimate")]
    pub big_g_estimate: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub warnings: Vec<String>,
}

#[allow(clippy::too_many_arguments)]
fn verdict_for(
    experiment: &str,
    cfg: &ExperimentConfig,
    est: &PlateauEstimate<f64>,
    a: f64,
    a_power: f64,
    tolerance: f64,
    pass: bool,
    warnings: Vec<String>,
) -> Verdict {
    Verdict {
        experiment: experiment.into(),
        parameters: cfg.resolved(),
        a,
        a_power,
        window: est.window,
        scaled_median: est.scaled_median,
        g_estimate: est.g_estimate,
        big_g_estimate: est.big_g_estimate,
        tolerance,
        pass,
        warnings,
    }
}

/// Plateau window capped by the trust index; `None` if nothing is left.
pub fn capped_window(series: &SpectrumSeries<f64>, window: [usize; 2]) -> Option<[usize; 2]> {
    let hi = window[1].min(series.trust_k).min(series.len());
    (window[0] <= hi).then_some([window[0], hi])
}

/// Density-operator verdict: the median of k^{8/3}λ_k within `tolerance` of
/// A^{8/3} and the window extremes bracketing it. States without a cusp on the
/// diagonal (A = 0) pass when the scaled series trends to zero instead.
pub fn density_verdict(cfg: &ExperimentConfig, series: &SpectrumSeries<f64>) -> Result<Option<Verdict>, LabError> {
    let state = cfg.state()?;
    let a = closed_form_coefficient_a(&state)?;
    let p = 3.0 / 8.0;
    let Some(window) = capped_window(series, cfg.window()) else {
        return Ok(None);
    };
    let est = plateau_estimate(series, p, window)?;
    let target = a.powf(8.0 / 3.0);
    let pass = if a > 0.0 {
        (est.scaled_median - target).abs() <= DENSITY_TOLERANCE * target && est.brackets(target)
    } else {
        PlateauEstimate::trend(series, p, window)? < 0.0
    };
    Ok(Some(verdict_for("density_spectrum", cfg, &est, a, target, DENSITY_TOLERANCE, pass, series.warnings.clone())))
}

fn line_spec(cfg: &ExperimentConfig) -> Result<HomogeneousKernelSpec<f64>, LabError> {
    if cfg.r_max() < 4.0 {
        warn!("half-width {} truncates the Gaussian weights", cfg.r_max());
    }
    HomogeneousKernelSpec::new(1.0, 1, KernelFamily::ScalarAbs, Weight::gaussian(1.0), Weight::gaussian(1.0))
}

fn write_file(path: &Path, contents: &str) -> Result<(), UsageError> {
    std::fs::write(path, contents).map_err(|e| usage("--out", format!("cannot write {}: {e}", path.display())))
}

fn verdict_path(out: &Path) -> PathBuf {
    out.with_extension("json")
}

enum Failure {
    Usage(UsageError),
    Compute(LabError),
}

impl From<UsageError> for Failure {
    fn from(e: UsageError) -> Self {
        Failure::Usage(e)
    }
}

impl From<LabError> for Failure {
    fn from(e: LabError) -> Self {
        Failure::Compute(e)
    }
}

/// Runs one invocation; `stdout` receives results meant for the user.
pub fn execute<I, S>(argv: I, stdout: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<OsString> + Clone,
{
    let args = match Args::try_parse_from(argv) {
        Ok(a) => a,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(stdout, "{e}");
                return EXIT_OK;
            }
            let rendered = e.to_string();
            eprintln!("{}", rendered.lines().next().unwrap_or("error: invalid arguments"));
            return EXIT_USAGE;
        }
    };
    let cfg = match resolve(args) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
    };
    let outcome = match cfg.mode {
        Mode::Coeff => run_coeff(&cfg, stdout),
        Mode::Spectrum => run_spectrum(&cfg, stdout),
        Mode::Homokern => run_homokern(&cfg, stdout),
        Mode::Verify => run_verify(&cfg, stdout),
    };
    match outcome {
        Ok(code) => code,
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e}");
            EXIT_USAGE
        }
        Err(Failure::Compute(LabError::InvalidParameter { name, reason })) => {
            eprintln!("error: --{name}: {reason}");
            EXIT_USAGE
        }
        Err(Failure::Compute(e)) => {
            eprintln!("error: {e}");
            EXIT_USAGE
        }
    }
}

fn run_coeff(cfg: &ExperimentConfig, stdout: &mut dyn Write) -> Result<i32, Failure> {
    let state = cfg.state()?;
    let a = coefficient_a(&state, &state.default_coefficient_grid())?;
    let _ = writeln!(stdout, "A={a:.6}");
    let _ = writeln!(stdout, "A^(8/3)={:.6}", a.powf(8.0 / 3.0));
    if let Some(out) = &cfg.out {
        let report = serde_json::json!({
            "experiment": "coefficient",
            "parameters": cfg.resolved(),
            "A": a,
            "A_power": a.powf(8.0 / 3.0),
        });
        write_file(out, &serde_json::to_string_pretty(&report).expect("serializable"))?;
    }
    Ok(EXIT_OK)
}

fn emit_series(
    cfg: &ExperimentConfig,
    series: &SpectrumSeries<f64>,
    inv_p: f64,
    verdict: Option<&Verdict>,
    stdout: &mut dyn Write,
) -> Result<(), Failure> {
    let csv = spectrum_csv(series, inv_p);
    match &cfg.out {
        Some(out) => {
            write_file(out, &csv)?;
            info!("wrote {} rows to {}", csv.lines().count() - 1, out.display());
            if let Some(v) = verdict {
                let path = verdict_path(out);
                write_file(&path, &serde_json::to_string_pretty(v).expect("serializable"))?;
                info!("verdict ({}) in {}", if v.pass { "pass" } else { "fail" }, path.display());
            }
        }
        None => {
            let _ = stdout.write_all(csv.as_bytes());
            if let Some(v) = verdict {
                info!("verdict: {}", serde_json::to_string(v).expect("serializable"));
            }
        }
    }
    Ok(())
}

fn run_spectrum(cfg: &ExperimentConfig, stdout: &mut dyn Write) -> Result<i32, Failure> {
    let state = cfg.state()?;
    let series = assemble_spectrum(&state, &cfg.density_config())?;
    info!("{} eigenvalues, trust_k = {}", series.len(), series.trust_k);
    let verdict = density_verdict(cfg, &series)?;
    if verdict.is_none() {
        warn!("plateau window {:?} lies beyond trust_k = {}; no verdict", cfg.window(), series.trust_k);
    }
    emit_series(cfg, &series, 8.0 / 3.0, verdict.as_ref(), stdout)?;
    Ok(EXIT_OK)
}

fn run_homokern(cfg: &ExperimentConfig, stdout: &mut dyn Write) -> Result<i32, Failure> {
    let spec = line_spec(cfg)?;
    let series = nystrom_1d_spectrum(&spec, cfg.radial_n(), cfg.r_max())?;
    let p = spec.p();
    let g = coefficient_1d(&spec, cfg.r_max())?;
    let target = g.powf(1.0 / p);
    let verdict = match capped_window(&series, cfg.window()) {
        Some(window) => {
            let est = plateau_estimate(&series, p, window)?;
            let pass = (est.scaled_median - target).abs() <= LINE_TOLERANCE * target;
            Some(verdict_for("homokern_1d", cfg, &est, g, target, LINE_TOLERANCE, pass, Vec::new()))
        }
        None => None,
    };
    emit_series(cfg, &series, 1.0 / p, verdict.as_ref(), stdout)?;
    Ok(EXIT_OK)
}

/// One verification outcome.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

fn check(name: &str, pass: bool, detail: String) -> Check {
    Check { name: name.into(), pass, detail }
}

/// Runs an invariant suite; `quick` takes seconds, `full` reruns the
/// desk-scale experiments at their default sizes.
pub fn verification_suite(suite: Suite) -> Result<Vec<Check>, LabError> {
    let mut out = Vec::new();
    let pi = std::f64::consts::PI;

    let mu = mu_coefficient(1.0, 3)?;
    let err = rel_diff(mu, (2.0 / pi).powf(1.25) / 3.0);
    out.push(check("mu_1_3_identity", err <= 1e-12, format!("relative error {err:.2e}")));

    let mut worst = 0.0_f64;
    for zeta in [0.5, 1.0, 2.0] {
        for c in [0.25, 0.5, 1.0] {
            let s = CuspState::symmetric(zeta, c)?;
            worst = worst.max(rel_diff(coefficient_a(&s, &s.default_coefficient_grid())?, closed_form_coefficient_a(&s)?));
        }
    }
    out.push(check("coefficient_quadrature", worst <= 1e-8, format!("worst relative error {worst:.2e}")));

    let s = CuspState::symmetric(1.0, 0.0)?;
    let grid = RadialGrid::gauss_legendre(80, 14.0)?;
    let l0 = channel_spectrum(&s, 0, &grid, 20)?;
    let l1 = channel_spectrum(&s, 1, &grid, 20)?[0];
    let err = rel_diff(l0[0], 2.0 * pi * pi);
    let pass = err <= 1e-8 && l0[1] / l0[0] < 1e-10 && l1 < 1e-12;
    out.push(check("rank_one", pass, format!("lambda_1 error {err:.2e}, lambda_2/lambda_1 {:.2e}, top l=1 {l1:.2e}", l0[1] / l0[0])));

    let (l_max, n) = if suite == Suite::Full { (48, 320) } else { (24, 120) };
    let s = CuspState::symmetric(1.0, 0.5)?;
    let dc = DensityConfig { l_max, radial_nodes: n, r_max: 14.0, u_order: l_max + 16 };
    let series = assemble_spectrum(&s, &dc)?;
    let trace = trace_sum(&s, &dc.grid()?)?;
    let err = rel_diff(series.total(), trace);
    out.push(check("trace_consistency", err <= 1e-6, format!("sum {:.10} vs trace {trace:.10} ({err:.2e})", series.total())));

    if suite == Suite::Full {
        let cfg = ExperimentConfig::default();
        match density_verdict(&cfg, &series)? {
            Some(v) => out.push(check(
                "main_law",
                v.pass,
                format!("median {:.4} vs A^(8/3) {:.4}, window {:?}", v.scaled_median, v.a_power, v.window),
            )),
            None => out.push(check("main_law", false, format!("window beyond trust_k = {}", series.trust_k))),
        }
        let anti = assemble_spectrum(&CuspState::antisymmetric(1.0, 0.5)?, &dc)?;
        let scaled = |ser: &SpectrumSeries<f64>| ser.value_at(300).map(|v| 300f64.powf(8.0 / 3.0) * v).unwrap_or(0.0);
        let ratio = scaled(&anti) / scaled(&series);
        let window = capped_window(&anti, [100, 400]).unwrap_or([100, 100]);
        let trend = PlateauEstimate::trend(&anti, 3.0 / 8.0, window).unwrap_or(0.0);
        out.push(check("antisymmetric_degeneration", ratio < 0.2 && trend < 0.0, format!("ratio at k=300 {ratio:.3}, log-log slope {trend:.3}")));

        let cfg = ExperimentConfig { mode: Mode::Homokern, ..ExperimentConfig::default() };
        let spec = line_spec(&cfg)?;
        let line = nystrom_1d_spectrum(&spec, 2000, 6.0)?;
        let est = plateau_estimate(&line, 0.5, [40, 300])?;
        let target = 2.0 / pi;
        let err = rel_diff(est.scaled_median, target);
        out.push(check("line_law", err <= LINE_TOLERANCE, format!("median {:.5} vs 2/pi ({err:.2e})", est.scaled_median)));
    }

    let gauss = Weight::gaussian(1.0);
    let smooth = nystrom_1d(&Kernel1d::Gaussian { rate: 1.0 }, &gauss, &gauss, &Nystrom1d::new(400, 6.0))?;
    let s60 = smooth.value_at(60).unwrap_or(0.0);
    out.push(check("smooth_collapse", s60 < 1e-12, format!("s_60 = {s60:.2e}")));

    let (seeds, size) = if suite == Suite::Full { (100, 50) } else { (10, 20) };
    let mut violations = 0;
    for seed in 0..seeds {
        for p in [0.5, 0.75, 1.0] {
            violations += finite_matrix_identities(seed, size, p)?.violations.len();
        }
    }
    out.push(check("operator_ideal_identities", violations == 0, format!("{violations} violations over {seeds} seeds, size {size}")));

    let spec = HomogeneousKernelSpec::new(1.0, 3, KernelFamily::ScalarAbs, gauss, gauss)?;
    let err = rel_diff(symbol_sphere_coefficient(&spec)?, mu);
    let x1 = fourier_symbol(&spec, 1.0)?;
    let homog = rel_diff(fourier_symbol(&spec, 2.7)?, 2.7f64.powf(-4.0) * x1);
    out.push(check("symbol_consistency", err <= 1e-10 && homog <= 1e-12, format!("sphere {err:.2e}, homogeneity {homog:.2e}")));
    Ok(out)
}

fn run_verify(cfg: &ExperimentConfig, stdout: &mut dyn Write) -> Result<i32, Failure> {
    let checks = verification_suite(cfg.suite())?;
    for c in &checks {
        let _ = writeln!(stdout, "{} {}: {}", if c.pass { "PASS" } else { "FAIL" }, c.name, c.detail);
    }
    let pass = checks.iter().all(|c| c.pass);
    if let Some(out) = &cfg.out {
        let report = serde_json::json!({ "suite": cfg.suite(), "checks": checks, "pass": pass });
        write_file(out, &serde_json::to_string_pretty(&report).expect("serializable"))?;
    }
    Ok(if pass { EXIT_OK } else { EXIT_VERIFY_FAILED })
}
