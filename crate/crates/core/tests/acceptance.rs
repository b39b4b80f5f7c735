//! Acceptance criteria 1–10. Each test writes one `criterion N: PASS|FAIL`
//! line to stderr (bypassing output capture) and then asserts.

use std::f64::consts::PI;
use std::io::Write;
use std::sync::OnceLock;

use cusplab::density::{assemble_spectrum, channel_spectrum, trace_sum, DensityConfig};
use cusplab::homokernel::{
    fourier_symbol, mu_coefficient, nystrom_1d, nystrom_1d_spectrum, symbol_sphere_coefficient, HomogeneousKernelSpec, Kernel1d,
    KernelFamily, Nystrom1d, Weight,
};
use cusplab::spectral::{finite_matrix_identities, plateau_estimate, PlateauEstimate};
use cusplab::{coefficient_a, CuspState, RadialGrid, SpectrumSeries};

fn report(n: u32, pass: bool, detail: String) {
    let line = format!("criterion {n}: {} ({detail})\n", if pass { "PASS" } else { "FAIL" });
    let _ = std::io::stderr().lock().write_all(line.as_bytes());
    assert!(pass, "criterion {n} failed: {detail}");
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

/// A = μ₁,₃·(√2c)^{3/4}·∫e^{−(3/2)ζr}dx with ∫e^{−(3/2)r}dx = 64π/27.
fn closed_form_a(zeta: f64, c: f64) -> f64 {
    (2.0 / PI).powf(1.25) / 3.0 * (2.0_f64.sqrt() * c).powf(0.75) * 64.0 * PI / (27.0 * zeta.powi(3))
}

fn symmetric_run() -> &'static SpectrumSeries<f64> {
    static RUN: OnceLock<SpectrumSeries<f64>> = OnceLock::new();
    RUN.get_or_init(|| {
        let s = CuspState::symmetric(1.0, 0.5).unwrap();
        assemble_spectrum(&s, &DensityConfig::defaults_for(&s)).unwrap()
    })
}

fn antisymmetric_run() -> &'static SpectrumSeries<f64> {
    static RUN: OnceLock<SpectrumSeries<f64>> = OnceLock::new();
    RUN.get_or_init(|| {
        let s = CuspState::antisymmetric(1.0, 0.5).unwrap();
        assemble_spectrum(&s, &DensityConfig::defaults_for(&s)).unwrap()
    })
}

#[test]
fn criterion_01_constant_identity() {
    let err = rel(mu_coefficient(1.0, 3).unwrap(), (2.0 / PI).powf(1.25) / 3.0);
    report(1, err <= 1e-12, format!("mu_1,3 relative error {err:.2e}, tol 1e-12"));
}

#[test]
fn criterion_02_coefficient_quadrature() {
    let mut worst = 0.0_f64;
    for zeta in [0.5, 1.0, 2.0] {
        for c in [0.25, 0.5, 1.0] {
            let s = CuspState::symmetric(zeta, c).unwrap();
            let a = coefficient_a(&s, &s.default_coefficient_grid()).unwrap();
            worst = worst.max(rel(a, closed_form_a(zeta, c)));
        }
    }
    report(2, worst <= 1e-8, format!("worst relative error {worst:.2e} over 9 (zeta, c) pairs, tol 1e-8"));
}

#[test]
fn criterion_03_rank_one_exactness() {
    let s = CuspState::symmetric(1.0, 0.0).unwrap();
    let grid = RadialGrid::gauss_legendre(160, 14.0).unwrap();
    let l0 = channel_spectrum(&s, 0, &grid, 26).unwrap();
    let err = rel(l0[0], 2.0 * PI * PI);
    let ratio = l0[1] / l0[0];
    let higher = (1..=10).map(|ell| channel_spectrum(&s, ell, &grid, 26).unwrap()[0]).fold(0.0, f64::max);
    let pass = err <= 1e-8 && ratio < 1e-10 && higher < 1e-12;
    report(3, pass, format!("lambda_1 error {err:.2e}, lambda_2/lambda_1 {ratio:.2e}, max over l=1..10 {higher:.2e}"));
}

#[test]
fn criterion_04_trace_consistency() {
    let s = CuspState::symmetric(1.0, 0.5).unwrap();
    let config = DensityConfig::defaults_for(&s);
    let series = symmetric_run();
    let trace = trace_sum(&s, &config.grid().unwrap()).unwrap();
    let err = rel(series.total(), trace);
    // independent high-precision value of 2‖ψ‖²
    let exact_err = rel(trace, 92.527_541_260_622_94);
    report(4, err <= 1e-6 && exact_err <= 1e-8, format!("sum {:.9} vs trace {trace:.9}: {err:.2e}, tol 1e-6", series.total()));
}

#[test]
fn criterion_05_main_law() {
    let series = symmetric_run();
    let target = closed_form_a(1.0, 0.5).powf(8.0 / 3.0);
    let hi = 400.min(series.trust_k);
    let est = plateau_estimate(series, 3.0 / 8.0, [100, hi]).unwrap();
    let err = rel(est.scaled_median, target);
    let pass = err <= 0.25 && est.brackets(target);
    report(
        5,
        pass,
        format!(
            "median k^(8/3) lambda_k {:.4} vs A^(8/3) {target:.4} ({:.1}%), window [100, {hi}] spans [{:.3}, {:.3}], trust_k {}",
            est.scaled_median,
            100.0 * err,
            est.scaled_min,
            est.scaled_max,
            series.trust_k
        ),
    );
}

#[test]
fn criterion_06_antisymmetric_degeneration() {
    let sym = symmetric_run();
    let anti = antisymmetric_run();
    let scaled = |s: &SpectrumSeries<f64>| 300f64.powf(8.0 / 3.0) * s.value_at(300).unwrap();
    let ratio = scaled(anti) / scaled(sym);
    let hi = 400.min(anti.trust_k);
    let slope = PlateauEstimate::trend(anti, 3.0 / 8.0, [100, hi]).unwrap();
    let pass = ratio < 0.2 && slope < 0.0;
    report(6, pass, format!("k=300 ratio {ratio:.3} (< 0.2), log-log slope over [100, {hi}] {slope:.3} (< 0)"));
}

#[test]
fn criterion_07_line_law() {
    let spec = HomogeneousKernelSpec::new(1.0, 1, KernelFamily::ScalarAbs, Weight::gaussian(1.0), Weight::gaussian(1.0)).unwrap();
    let series = nystrom_1d_spectrum(&spec, 2000, 6.0).unwrap();
    let est = plateau_estimate(&series, 0.5, [40, 300]).unwrap();
    let err = rel(est.scaled_median, 2.0 / PI);
    report(7, err <= 0.10, format!("median k^2 s_k {:.5} vs 2/pi {:.5} ({:.2}%), tol 10%", est.scaled_median, 2.0 / PI, 100.0 * err));
}

#[test]
fn criterion_08_smooth_kernel_collapse() {
    let g = Weight::gaussian(1.0);
    let series = nystrom_1d(&Kernel1d::Gaussian { rate: 1.0 }, &g, &g, &Nystrom1d::new(400, 6.0)).unwrap();
    let s60 = series.value_at(60).unwrap();
    report(8, s60 < 1e-12, format!("s_60 = {s60:.2e} (s_1 = {:.3}), tol 1e-12", series.largest()));
}

#[test]
fn criterion_09_operator_ideal_identities() {
    let mut violations = Vec::new();
    for seed in 0..100 {
        for p in [0.5, 0.75, 1.0] {
            let r = finite_matrix_identities(seed, 50, p).unwrap();
            violations.extend(r.violations.into_iter().map(|v| format!("seed {seed}, p {p}: {v}")));
        }
    }
    report(9, violations.is_empty(), format!("{} violations over 100 seeds x 3 exponents at size 50", violations.len()));
}

#[test]
fn criterion_10_symbol_consistency() {
    let g = Weight::gaussian(1.0);
    let spec = HomogeneousKernelSpec::new(1.0, 3, KernelFamily::ScalarAbs, g, g).unwrap();
    // (1/(3(2π)³))·4π·|X_∞(ω)|^{3/4}
    let x1: f64 = fourier_symbol(&spec, 1.0).unwrap();
    let sphere = 4.0 * PI * x1.abs().powf(0.75) / (3.0 * (2.0 * PI).powi(3));
    let err = rel(sphere, mu_coefficient(1.0, 3).unwrap());
    let err_lib = rel(symbol_sphere_coefficient(&spec).unwrap(), mu_coefficient(1.0, 3).unwrap());
    let mut homog = 0.0_f64;
    for (alpha, dim, family) in [
        (1.0, 3, KernelFamily::ScalarAbs),
        (0.5, 1, KernelFamily::ScalarAbs),
        (-0.7, 2, KernelFamily::ScalarAbs),
        (0.0, 3, KernelFamily::Gradient),
        (2.5, 3, KernelFamily::Gradient),
    ] {
        let spec = HomogeneousKernelSpec::new(alpha, dim, family, g, g).unwrap();
        let base = fourier_symbol(&spec, 1.3).unwrap();
        for t in [0.1, 0.7, 2.0, 13.0] {
            let scaled = fourier_symbol(&spec, 1.3 * t).unwrap();
            homog = homog.max(rel(scaled, t.powf(-(alpha + dim as f64)) * base));
        }
    }
    let pass = err <= 1e-10 && err_lib <= 1e-10 && homog <= 1e-12;
    report(10, pass, format!("sphere identity {err:.2e} / {err_lib:.2e} (tol 1e-10), homogeneity {homog:.2e} (tol 1e-12)"));
}
