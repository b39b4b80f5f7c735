//! Finite-sample surrogates for the asymptotic spectral functionals
//!
//!   G_p(T) = limsup_{s→0} s^p·n(s, T),   g_p(T) = liminf_{s→0} s^p·n(s, T),
//!
//! and finite-matrix checks of the weak Schatten quasi-norm identities.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::LabError;
use crate::linalg::{singular_values, symmetric_eigenvalues, Matrix};
use crate::scalar::Real;
use crate::spectrum::SpectrumSeries;

/// Tolerance for eig(TᵀT) against s(T)², relative to s₁².
pub const FACTORIZATION_TOL: f64 = 1e-10;

/// n(s, T): number of values (with multiplicity) strictly greater than `s`.
pub fn counting_function<T: Real>(series: &SpectrumSeries<T>, s: T) -> usize {
    series.entries().iter().filter(|e| e.value > s).map(|e| e.multiplicity).sum()
}

/// ‖T‖_{p,∞} = sup_k s_k·k^{1/p}; zero for an empty series.
pub fn quasi_norm<T: Real>(series: &SpectrumSeries<T>, p: T) -> T {
    let inv = p.recip();
    // within an entry the sup sits at its last rank
    let mut rank = 0;
    series.entries().iter().fold(T::zero(), |m, e| {
        rank += e.multiplicity;
        m.max(e.value * T::from_usize_lossy(rank).powf(inv))
    })
}

/// Window statistics of k^{1/p}·s_k standing in for G_p and g_p.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlateauEstimate<T> {
    pub p: T,
    pub window: [usize; 2],
    pub scaled_median: T,
    pub scaled_min: T,
    pub scaled_max: T,
    /// scaled_min^p
    pub g_estimate: T,
    /// scaled_max^p
    #[serde(rename = "G_estimate")]
    pub big_g_estimate: T,
}

impl<T: Real> PlateauEstimate<T> {
    /// Whether `target` (on the k^{1/p}·s_k scale) lies in [scaled_min, scaled_max].
    pub fn brackets(&self, target: T) -> bool {
        self.scaled_min <= target && target <= self.scaled_max
    }

    /// Least-squares slope of log(k^{1/p}·s_k) against log k over the window.
    pub fn trend(series: &SpectrumSeries<T>, p: T, window: [usize; 2]) -> Result<T, LabError> {
        let pts = scaled_window(series, p, window)?;
        let logs: Vec<(f64, f64)> = pts
            .iter()
            .filter(|(_, v)| *v > T::zero())
            .map(|&(k, v)| ((k as f64).ln(), v.as_f64().ln()))
            .collect();
        if logs.len() < 2 {
            return Err(LabError::EmptyWindow { lo: window[0], hi: window[1], len: series.len(), trust: series.trust_k });
        }
        let n = logs.len() as f64;
        let mx = logs.iter().map(|p| p.0).sum::<f64>() / n;
        let my = logs.iter().map(|p| p.1).sum::<f64>() / n;
        let sxy: f64 = logs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
        let sxx: f64 = logs.iter().map(|p| (p.0 - mx).powi(2)).sum();
        Ok(T::lit(sxy / sxx))
    }
}

fn scaled_window<T: Real>(series: &SpectrumSeries<T>, p: T, window: [usize; 2]) -> Result<Vec<(usize, T)>, LabError> {
    let [lo, hi] = window;
    let empty = || LabError::EmptyWindow { lo, hi, len: series.len(), trust: series.trust_k };
    if lo == 0 || lo > hi || hi > series.len() || hi > series.trust_k {
        return Err(empty());
    }
    if !(p > T::zero()) {
        return Err(LabError::InvalidParameter { name: "p", reason: "must be positive".into() });
    }
    let inv = p.recip();
    Ok(series
        .iter_ranked()
        .skip(lo - 1)
        .take(hi - lo + 1)
        .map(|(k, e)| (k, T::from_usize_lossy(k).powf(inv) * e.value))
        .collect())
}

/// Median, min and max of k^{1/p}·s_k over ranks `window[0]..=window[1]`.
pub fn plateau_estimate<T: Real>(series: &SpectrumSeries<T>, p: T, window: [usize; 2]) -> Result<PlateauEstimate<T>, LabError> {
    let mut scaled: Vec<T> = scaled_window(series, p, window)?.into_iter().map(|(_, v)| v).collect();
    scaled.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    let n = scaled.len();
    let median = if n % 2 == 1 { scaled[n / 2] } else { (scaled[n / 2 - 1] + scaled[n / 2]) / T::lit(2.0) };
    let (lo, hi) = (scaled[0], scaled[n - 1]);
    Ok(PlateauEstimate {
        p,
        window,
        scaled_median: median,
        scaled_min: lo,
        scaled_max: hi,
        g_estimate: lo.powf(p),
        big_g_estimate: hi.powf(p),
    })
}

/// Outcome of [`finite_matrix_identities`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdentityReport {
    pub seed: u64,
    pub size: usize,
    pub p: f64,
    /// ‖T₁ + T₂‖^{q}, q = p/(p+1)
    pub triangle_lhs: f64,
    /// ‖T₁‖^{q} + ‖T₂‖^{q}
    pub triangle_rhs: f64,
    /// max_k |λ_k(TᵀT) − s_k(T)²| / s₁(T)²
    pub factorization_error: f64,
    pub violations: Vec<String>,
}

impl IdentityReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

fn random_matrix<T: Real>(rng: &mut ChaCha8Rng, size: usize) -> Matrix<T> {
    Matrix::from_fn(size, size, |_, _| T::lit(rng.gen_range(-1.0..1.0)))
}

fn matrix_quasi_norm<T: Real>(m: &Matrix<T>, p: T) -> Result<T, LabError> {
    Ok(quasi_norm(&SpectrumSeries::from_values(&singular_values(m)?)?, p))
}

/// Checks the weak-Schatten triangle inequality and eig(TᵀT) = s(T)² on
/// seeded pseudo-random square matrices.
pub fn finite_matrix_identities<T: Real>(seed: u64, size: usize, p: T) -> Result<IdentityReport, LabError> {
    if size < 2 {
        return Err(LabError::InvalidParameter { name: "size", reason: "need size >= 2".into() });
    }
    if !(p > T::zero()) {
        return Err(LabError::InvalidParameter { name: "p", reason: "must be positive".into() });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let t1 = random_matrix::<T>(&mut rng, size);
    let t2 = random_matrix::<T>(&mut rng, size);
    let t = random_matrix::<T>(&mut rng, size);
    let mut violations = Vec::new();

    let q = p / (p + T::one());
    let lhs = matrix_quasi_norm(&t1.add(&t2), p)?.powf(q);
    let rhs = matrix_quasi_norm(&t1, p)?.powf(q) + matrix_quasi_norm(&t2, p)?.powf(q);
    // allow round-off in the comparison only
    if lhs > rhs * (T::one() + T::epsilon() * T::lit(64.0)) {
        violations.push(format!("triangle inequality: {lhs} > {rhs}"));
    }

    let sv = singular_values(&t)?;
    let eig = symmetric_eigenvalues(&t.gram())?;
    let top = sv[0] * sv[0];
    let err = sv.iter().zip(&eig).fold(T::zero(), |m, (&s, &e)| m.max((s * s - e).abs() / top));
    let tol = if T::epsilon() > T::lit(1e-10) { T::lit(1e-4) } else { T::lit(FACTORIZATION_TOL) };
    if err > tol {
        violations.push(format!("eig(T*T) vs s(T)^2: relative error {err}"));
    }

    Ok(IdentityReport {
        seed,
        size,
        p: p.as_f64(),
        triangle_lhs: lhs.as_f64(),
        triangle_rhs: rhs.as_f64(),
        factorization_error: err.as_f64(),
        violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn power_law(c: f64, exponent: f64, len: usize) -> SpectrumSeries<f64> {
        let v: Vec<f64> = (1..=len).map(|k| c * (k as f64).powf(-exponent)).collect();
        SpectrumSeries::from_values(&v).unwrap()
    }

    #[test]
    fn counting_examples() {
        let s = SpectrumSeries::from_values(&[3.0, 2.0, 1.0]).unwrap();
        assert_eq!(counting_function(&s, 1.5), 2);
        assert_eq!(counting_function(&s, 1.0), 2);
        assert_eq!(counting_function(&s, 5.0), 0);
    }

    #[test]
    fn plateau_examples() {
        let est = plateau_estimate(&power_law(1.0, 2.0, 200), 0.5, [10, 100]).unwrap();
        assert_relative_eq!(est.scaled_median, 1.0, max_relative = 1e-12);
        assert_relative_eq!(est.g_estimate, 1.0, max_relative = 1e-12);
        assert_relative_eq!(est.big_g_estimate, 1.0, max_relative = 1e-12);
        let est = plateau_estimate(&power_law(2.0, 4.0 / 3.0, 200), 0.75, [10, 100]).unwrap();
        assert_relative_eq!(est.big_g_estimate, 1.681_793, max_relative = 1e-6);
        assert_relative_eq!(est.big_g_estimate, 2.0_f64.powf(0.75), max_relative = 1e-12);
        assert!(est.brackets(2.0));
    }

    #[test]
    fn plateau_rejects_bad_windows() {
        let mut s = power_law(1.0, 2.0, 50);
        assert!(plateau_estimate(&s, 0.5, [0, 10]).is_err());
        assert!(plateau_estimate(&s, 0.5, [20, 10]).is_err());
        assert!(plateau_estimate(&s, 0.5, [10, 51]).is_err());
        s.trust_k = 30;
        assert!(matches!(plateau_estimate(&s, 0.5, [10, 40]), Err(LabError::EmptyWindow { .. })));
        assert!(plateau_estimate(&s, 0.5, [10, 30]).is_ok());
    }

    #[test]
    fn quasi_norm_examples() {
        assert_relative_eq!(quasi_norm(&power_law(1.0, 2.0, 100), 0.5), 1.0, max_relative = 1e-12);
        assert_eq!(quasi_norm(&SpectrumSeries::from_values(&[3.0, 2.0, 1.0]).unwrap(), 1.0), 4.0);
        assert_eq!(quasi_norm(&SpectrumSeries::<f64>::from_values(&[]).unwrap(), 1.0), 0.0);
    }

    #[test]
    fn quasi_norm_respects_multiplicity() {
        use crate::spectrum::SpectrumEntry;
        let s = SpectrumSeries::from_entries(vec![SpectrumEntry { value: 1.0, multiplicity: 3, channel: 1, radial_index: 0 }]).unwrap();
        assert_eq!(quasi_norm(&s, 1.0), 3.0);
    }

    #[test]
    fn trend_of_power_laws() {
        let s = power_law(1.0, 3.0, 100);
        assert!(PlateauEstimate::trend(&s, 0.5, [10, 100]).unwrap() < -0.9);
        assert!(PlateauEstimate::trend(&s, 1.0 / 3.0, [10, 100]).unwrap().abs() < 1e-10);
    }

    #[test]
    fn identity_examples() {
        let t = Matrix::from_diagonal(&[3.0, 2.0, 1.0]);
        let s: Vec<f64> = singular_values(&t).unwrap().iter().map(|v| v * v).collect();
        assert_eq!(symmetric_eigenvalues(&t.gram()).unwrap(), s);
        assert_eq!(s, vec![9.0, 4.0, 1.0]);

        let i = Matrix::<f64>::identity(3);
        let lhs = matrix_quasi_norm(&i.add(&i), 1.0).unwrap().sqrt();
        let rhs = 2.0 * matrix_quasi_norm(&i, 1.0).unwrap().sqrt();
        assert_relative_eq!(lhs, 6.0_f64.sqrt(), max_relative = 1e-14);
        assert_relative_eq!(rhs, 2.0 * 3.0_f64.sqrt(), max_relative = 1e-14);
        assert!(lhs <= rhs);
    }

    #[test]
    fn identities_hold_for_sample_seeds() {
        for seed in 0..5 {
            for p in [0.5, 0.75, 1.0] {
                let r = finite_matrix_identities(seed, 20, p).unwrap();
                assert!(r.passed(), "{r:?}");
            }
        }
        assert!(finite_matrix_identities(0, 1, 1.0).is_err());
        let single = finite_matrix_identities::<f32>(3, 10, 1.0).unwrap();
        assert!(single.passed(), "{single:?}");
    }

    proptest! {
        #[test]
        fn counting_is_nonincreasing(mut v in proptest::collection::vec(0.0f64..10.0, 1..40), a in 0.0f64..10.0, b in 0.0f64..10.0) {
            v.sort_by(|x, y| y.partial_cmp(x).unwrap());
            let s = SpectrumSeries::from_values(&v).unwrap();
            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
            prop_assert!(counting_function(&s, lo) >= counting_function(&s, hi));
        }

        #[test]
        fn plateau_stats_are_ordered(v in proptest::collection::vec(1e-6f64..10.0, 20..60), p in 0.2f64..2.0) {
            let s = SpectrumSeries::from_values(&v).unwrap();
            let est = plateau_estimate(&s, p, [5, 20]).unwrap();
            prop_assert!(est.g_estimate <= est.scaled_median.powf(p) * (1.0 + 1e-12));
            prop_assert!(est.scaled_median.powf(p) <= est.big_g_estimate * (1.0 + 1e-12));
            let norm = quasi_norm(&s, p);
            for (k, e) in s.iter_ranked().skip(4).take(16) {
                prop_assert!(e.value * (k as f64).powf(1.0 / p) <= norm * (1.0 + 1e-12));
            }
        }

        #[test]
        fn identities_hold(seed in 0u64..1000, size in 2usize..12) {
            let r = finite_matrix_identities(seed, size, 0.75).unwrap();
            prop_assert!(r.passed(), "{:?}", r);
        }
    }
}
