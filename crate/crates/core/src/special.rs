//! Special functions: the Gamma function with reflection across its poles,
//! and Legendre polynomials by three-term recurrence.

use crate::scalar::Real;

const LANCZOS_G: f64 = 7.0;
#[allow(clippy::excessive_precision)]
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// True when `x` sits on a pole of Γ, i.e. is a nonpositive integer.
pub fn is_gamma_pole<T: Real>(x: T) -> bool {
    x <= T::zero() && x == x.round()
}

/// Γ(x), or `None` at the poles x = 0, −1, −2, ….
pub fn gamma<T: Real>(x: T) -> Option<T> {
    if x.is_nan() || is_gamma_pole(x) {
        return None;
    }
    let half = T::lit(0.5);
    if x < half {
        // Γ(x)Γ(1−x) = π / sin(πx)
        let s = (T::PI() * x).sin();
        let g = gamma(T::one() - x)?;
        return Some(T::PI() / (s * g));
    }
    // exact for small positive integers and half-integers keeps the
    // degenerate-branch identities free of Lanczos round-off
    if x == x.round() && x <= T::lit(20.0) {
        let mut acc = T::one();
        let mut k = T::lit(2.0);
        while k < x {
            acc = acc * k;
            k = k + T::one();
        }
        return Some(acc);
    }
    let z = x - T::one();
    let mut series = T::lit(LANCZOS_COEFFS[0]);
    for (i, &c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        series = series + T::lit(c) / (z + T::from_usize_lossy(i));
    }
    let t = z + T::lit(LANCZOS_G) + half;
    let sqrt_two_pi = (T::lit(2.0) * T::PI()).sqrt();
    Some(sqrt_two_pi * t.powf(z + half) * (-t).exp() * series)
}

/// 1/Γ(x), which is entire: exactly zero at the poles of Γ.
pub fn reciprocal_gamma<T: Real>(x: T) -> T {
    match gamma(x) {
        Some(g) => T::one() / g,
        None => T::zero(),
    }
}

/// Legendre polynomial P_ℓ(x).
pub fn legendre<T: Real>(ell: usize, x: T) -> T {
    match ell {
        0 => T::one(),
        1 => x,
        _ => {
            let (mut p0, mut p1) = (T::one(), x);
            for k in 1..ell {
                let kf = T::from_usize_lossy(k);
                let p2 = ((T::lit(2.0) * kf + T::one()) * x * p1 - kf * p0) / (kf + T::one());
                p0 = p1;
                p1 = p2;
            }
            p1
        }
    }
}

/// All of P_0(x), …, P_lmax(x).
pub fn legendre_table<T: Real>(lmax: usize, x: T) -> Vec<T> {
    let mut out = Vec::with_capacity(lmax + 1);
    out.push(T::one());
    if lmax >= 1 {
        out.push(x);
    }
    for k in 1..lmax {
        let kf = T::from_usize_lossy(k);
        let next = ((T::lit(2.0) * kf + T::one()) * x * out[k] - kf * out[k - 1]) / (kf + T::one());
        out.push(next);
    }
    out
}
