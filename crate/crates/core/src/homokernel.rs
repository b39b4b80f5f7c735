//! Integral operators with homogeneous kernels b(x)Φ(x − y)a(y).
//!
//! Covers the Fourier symbol X_∞ of the two implemented families
//! (Φ = |x|^α and Φ = ∇|x|^{α+1}), the coefficients μ_{α,d} and ν_{α,d},
//! the model-operator coefficient with its weight profile h, and a 1-D
//! Nyström discretization used to observe the singular-value law
//! s_k ~ (G_p / k)^{1/p}, 1/p = 1 + α/d.

use serde::{Deserialize, Serialize};

use crate::error::LabError;
use crate::linalg::{singular_values, Matrix};
use crate::quadrature::{CompositeRule, GaussLegendre, RadialGrid};
use crate::scalar::{rel_diff, Real};
use crate::special::{gamma, is_gamma_pole, reciprocal_gamma};
use crate::spectrum::SpectrumSeries;

/// Relative shift tolerated when model-coefficient quadrature is refined.
pub const MODEL_REFINEMENT_TOL: f64 = 1e-8;

/// Smallest Nyström grid for which the tail of the spectrum means anything.
pub const MIN_NYSTROM_NODES: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum KernelFamily {
    /// Φ(x) = |x|^α
    #[default]
    ScalarAbs,
    /// Φ(x) = ∇|x|^{α+1} = (α+1)|x|^{α−1}x
    Gradient,
}

/// Weight function a or b. One-dimensional weights are evaluated at
/// |x − center|; in ℝ³ the weights are radial about the origin.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Weight<T> {
    /// e^{−rate·|x − center|²}
    Gaussian { rate: T, center: T },
    /// exp(1 − 1/(1 − (|x − center|/radius)²)) inside the ball, 0 outside
    Bump { radius: T, center: T },
    Zero,
}

impl<T: Real> Weight<T> {
    pub fn gaussian(rate: T) -> Self {
        Weight::Gaussian { rate, center: T::zero() }
    }

    pub fn shifted(self, center: T) -> Self {
        match self {
            Weight::Gaussian { rate, .. } => Weight::Gaussian { rate, center },
            Weight::Bump { radius, .. } => Weight::Bump { radius, center },
            Weight::Zero => Weight::Zero,
        }
    }

    pub fn center(&self) -> T {
        match *self {
            Weight::Gaussian { center, .. } | Weight::Bump { center, .. } => center,
            Weight::Zero => T::zero(),
        }
    }

    /// Value at distance `dist` from the center.
    pub fn profile(&self, dist: T) -> T {
        match *self {
            Weight::Gaussian { rate, .. } => (-rate * dist * dist).exp(),
            Weight::Bump { radius, .. } => {
                let u = dist / radius;
                if u.abs() >= T::one() {
                    T::zero()
                } else {
                    (T::one() - T::one() / (T::one() - u * u)).exp()
                }
            }
            Weight::Zero => T::zero(),
        }
    }

    /// One-dimensional evaluation.
    pub fn eval(&self, x: T) -> T {
        self.profile((x - self.center()).abs())
    }

    /// Distance from the center beyond which the weight is below 1e−16.
    pub fn support_radius(&self) -> T {
        match *self {
            Weight::Gaussian { rate, .. } => (T::lit(16.0 * std::f64::consts::LN_10) / rate).sqrt(),
            Weight::Bump { radius, .. } => radius,
            Weight::Zero => T::zero(),
        }
    }

    fn validate(&self) -> Result<(), LabError> {
        let ok = match *self {
            Weight::Gaussian { rate, center } => rate > T::zero() && rate.is_finite() && center.is_finite(),
            Weight::Bump { radius, center } => radius > T::zero() && radius.is_finite() && center.is_finite(),
            Weight::Zero => true,
        };
        if ok {
            Ok(())
        } else {
            Err(LabError::InvalidParameter { name: "weight", reason: format!("{self:?} has a nonpositive width") })
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HomogeneousKernelSpec<T> {
    pub alpha: T,
    pub dim: usize,
    pub family: KernelFamily,
    pub a: Weight<T>,
    pub b: Weight<T>,
}

impl<T: Real> HomogeneousKernelSpec<T> {
    pub fn new(alpha: T, dim: usize, family: KernelFamily, a: Weight<T>, b: Weight<T>) -> Result<Self, LabError> {
        if !(1..=3).contains(&dim) {
            return Err(LabError::InvalidParameter { name: "d", reason: format!("dimension must be 1, 2 or 3, got {dim}") });
        }
        check_alpha(alpha, dim)?;
        a.validate()?;
        b.validate()?;
        Ok(Self { alpha, dim, family, a, b })
    }

    /// p with 1/p = 1 + α/d.
    pub fn p(&self) -> T {
        exponent_p(self.alpha, self.dim)
    }

    /// Homogeneity order τ = α + d of the symbol.
    pub fn symbol_order(&self) -> T {
        self.alpha + T::from_usize_lossy(self.dim)
    }
}

fn check_alpha<T: Real>(alpha: T, dim: usize) -> Result<(), LabError> {
    if !alpha.is_finite() || !(alpha > -T::from_usize_lossy(dim)) {
        return Err(LabError::Domain(format!("homogeneity order must exceed -d = -{dim}, got {alpha}")));
    }
    Ok(())
}

/// p with 1/p = 1 + α/d.
pub fn exponent_p<T: Real>(alpha: T, dim: usize) -> T {
    let d = T::from_usize_lossy(dim);
    d / (d + alpha)
}

/// X_∞ at |ξ| = `xi_norm`. The scalar family returns the signed value,
/// the gradient family the magnitude of its vector symbol. Degenerate
/// orders (α even ≥ 0, resp. α odd > 0) give exactly zero.
pub fn fourier_symbol<T: Real>(spec: &HomogeneousKernelSpec<T>, xi_norm: T) -> Result<T, LabError> {
    if !(xi_norm > T::zero()) {
        return Err(LabError::Domain(format!("symbol evaluated at |xi| = {xi_norm}")));
    }
    let alpha = spec.alpha;
    check_alpha(alpha, spec.dim)?;
    let d = T::from_usize_lossy(spec.dim);
    let two = T::lit(2.0);
    let prefactor = two.powf(d + alpha) * T::PI().powf(d / two);
    let decay = xi_norm.powf(-(d + alpha));
    match spec.family {
        KernelFamily::ScalarAbs => {
            let num = gamma((d + alpha) / two)
                .ok_or_else(|| LabError::Domain(format!("Gamma pole at (d+alpha)/2 for alpha = {alpha}")))?;
            let inv = reciprocal_gamma(-alpha / two);
            if inv == T::zero() {
                return Ok(T::zero());
            }
            Ok(prefactor * num * inv * decay)
        }
        KernelFamily::Gradient => {
            let num = gamma((d + alpha + T::one()) / two)
                .ok_or_else(|| LabError::Domain(format!("Gamma pole at (d+alpha+1)/2 for alpha = {alpha}")))?;
            let inv = reciprocal_gamma((T::one() - alpha) / two);
            if inv == T::zero() || alpha == -T::one() {
                return Ok(T::zero());
            }
            Ok(((alpha + T::one()) * prefactor * num * inv * decay).abs())
        }
    }
}

/// Surface area of the unit sphere S^{d−1}.
pub fn sphere_area<T: Real>(dim: usize) -> T {
    let half_d = T::from_usize_lossy(dim) / T::lit(2.0);
    T::lit(2.0) * T::PI().powf(half_d) / gamma(half_d).expect("d >= 1")
}

/// (1/(d(2π)^d))·∫_{S^{d−1}} |X_∞(ω)|^p dω, using that |X_∞| is constant on
/// the sphere for both families.
pub fn symbol_sphere_coefficient<T: Real>(spec: &HomogeneousKernelSpec<T>) -> Result<T, LabError> {
    let x = fourier_symbol(spec, T::one())?;
    if x == T::zero() {
        return Ok(T::zero());
    }
    let d = T::from_usize_lossy(spec.dim);
    let norm = d * (T::lit(2.0) * T::PI()).powf(d);
    Ok(sphere_area::<T>(spec.dim) * x.abs().powf(spec.p()) / norm)
}

/// μ_{α,d} = [Γ((d+α)/2) / (π^{α/2}|Γ(−α/2)|)]^p / Γ(d/2 + 1); zero for even α ≥ 0.
pub fn mu_coefficient<T: Real>(alpha: T, dim: usize) -> Result<T, LabError> {
    check_alpha(alpha, dim)?;
    let two = T::lit(2.0);
    let d = T::from_usize_lossy(dim);
    if is_gamma_pole(-alpha / two) {
        return Ok(T::zero());
    }
    let num = gamma((d + alpha) / two).ok_or_else(|| LabError::Domain("Gamma pole in mu numerator".into()))?;
    let den = gamma(-alpha / two).expect("pole handled above").abs();
    let base = num / (T::PI().powf(alpha / two) * den);
    Ok(base.abs().powf(exponent_p(alpha, dim)) / gamma(d / two + T::one()).expect("positive argument"))
}

/// ν_{α,d} = [(α+1)Γ((d+α+1)/2) / (π^{α/2}|Γ((1−α)/2)|)]^p / Γ(d/2 + 1); zero for odd α > 0.
pub fn nu_coefficient<T: Real>(alpha: T, dim: usize) -> Result<T, LabError> {
    check_alpha(alpha, dim)?;
    let two = T::lit(2.0);
    let d = T::from_usize_lossy(dim);
    if is_gamma_pole((T::one() - alpha) / two) {
        return Ok(T::zero());
    }
    let num = gamma((d + alpha + T::one()) / two).ok_or_else(|| LabError::Domain("Gamma pole in nu numerator".into()))?;
    let den = gamma((T::one() - alpha) / two).expect("pole handled above").abs();
    let base = (alpha + T::one()) * num / (T::PI().powf(alpha / two) * den);
    Ok(base.abs().powf(exponent_p(alpha, dim)) / gamma(d / two + T::one()).expect("positive argument"))
}

/// Gaussian pair amplitude b(x̃, t) = scale·e^{−spectator_rate|x̃|² − pair_rate|t|²},
/// with x̃ the 3N − 6 spectator coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaussianAmplitude<T> {
    pub scale: T,
    pub spectator_rate: T,
    pub pair_rate: T,
}

/// Smooth multiplier β evaluated on the diagonal, β(x̃, t, t).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Coupling<T> {
    Unit,
    /// β = e^{−spectator_rate|x̃|²}
    Gaussian { spectator_rate: T },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairTerm<T> {
    pub amplitude: GaussianAmplitude<T>,
    pub coupling: Coupling<T>,
}

impl<T: Real> PairTerm<T> {
    fn spectator_rate(&self) -> T {
        let extra = match self.coupling {
            Coupling::Unit => T::zero(),
            Coupling::Gaussian { spectator_rate } => spectator_rate,
        };
        self.amplitude.spectator_rate + extra
    }

    /// |b(x̃, t)β(x̃, t, t)|² as a function of |x̃| and |t|.
    fn squared(&self, spectator: T, t: T) -> T {
        let two = T::lit(2.0);
        let s = self.amplitude.scale;
        s * s * (-two * (self.spectator_rate() * spectator * spectator + self.amplitude.pair_rate * t * t)).exp()
    }
}

/// Weight profile h of the model operator, built from the pair families
/// b_{j,k}, β_{j,k} of an N-particle kernel.
///
/// For N = 2 the terms are the two amplitudes b_{1,1}, b_{2,1}; for N ≥ 3
/// each term is integrated over its 3N − 6 spectator coordinates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelWeightProfile<T> {
    pub particles: usize,
    pub terms: Vec<PairTerm<T>>,
    /// Radial nodes of the spectator integral (N ≥ 3).
    #[serde(default = "default_spectator_nodes")]
    pub spectator_nodes: usize,
}

fn default_spectator_nodes() -> usize {
    96
}

impl<T: Real> ModelWeightProfile<T> {
    pub fn new(particles: usize, terms: Vec<PairTerm<T>>) -> Result<Self, LabError> {
        if particles < 2 {
            return Err(LabError::InvalidParameter { name: "particles", reason: "model operator needs N >= 2".into() });
        }
        if terms.len() > particles * (particles - 1) {
            return Err(LabError::InvalidParameter {
                name: "terms",
                reason: format!("at most N(N-1) = {} pair terms, got {}", particles * (particles - 1), terms.len()),
            });
        }
        for term in &terms {
            let a = term.amplitude;
            let ok = a.scale.is_finite()
                && (a.scale == T::zero() || a.pair_rate > T::zero())
                && (particles == 2 || a.scale == T::zero() || term.spectator_rate() > T::zero());
            if !ok {
                return Err(LabError::InvalidParameter {
                    name: "terms",
                    reason: "pair amplitudes must decay in every variable".into(),
                });
            }
        }
        Ok(Self { particles, terms, spectator_nodes: default_spectator_nodes() })
    }

    /// Profile identically zero.
    pub fn zero() -> Self {
        Self { particles: 2, terms: Vec::new(), spectator_nodes: default_spectator_nodes() }
    }

    fn spectator_dim(&self) -> usize {
        3 * self.particles - 6
    }

    /// h(t) at |t| = `t`.
    pub fn eval(&self, t: T) -> T {
        if self.particles == 2 {
            return self.terms.iter().fold(T::zero(), |acc, term| acc + term.squared(T::zero(), t)).sqrt();
        }
        let m = self.spectator_dim();
        let area = sphere_area::<T>(m);
        let rule = GaussLegendre::<T>::new(self.spectator_nodes).expect("nonzero node count");
        let mut total = T::zero();
        for term in &self.terms {
            if term.amplitude.scale == T::zero() {
                continue;
            }
            // |bβ|² decays like e^{−2κs²}; integrate s over (0, s_max]
            let kappa = term.spectator_rate();
            let s_max = (T::lit(40.0) / (T::lit(2.0) * kappa)).sqrt();
            let radial = rule.integrate(T::zero(), s_max, |s| term.squared(s, t) * s.powi(m as i32 - 1));
            total = total + area * radial;
        }
        total.sqrt()
    }

    /// Radius beyond which h < 1e−12.
    pub fn effective_radius(&self) -> T {
        let threshold = T::lit(1e-12);
        let mut radius = T::zero();
        for term in &self.terms {
            let a = term.amplitude;
            if a.scale == T::zero() {
                continue;
            }
            // h(0)-scale bound for this term, then solve bound·e^{−pair_rate·t²} = threshold
            let peak = self.eval_term_peak(term);
            let count = T::from_usize_lossy(self.terms.len().max(1)).sqrt();
            let ratio = peak * count / threshold;
            if ratio > T::one() {
                radius = radius.max((ratio.ln() / a.pair_rate).sqrt());
            }
        }
        radius
    }

    fn eval_term_peak(&self, term: &PairTerm<T>) -> T {
        let single = Self { particles: self.particles, terms: vec![*term], spectator_nodes: self.spectator_nodes };
        single.eval(T::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.iter().all(|t| t.amplitude.scale == T::zero())
    }
}

/// G_p = g_p of the model operator with weights a and h:
/// (1/(d(2π)^d))·∫_{S^{d−1}}|X_∞(ω)|^p dω · ∫_{ℝ^d} |a(x)h(x)|^p dx, d = 3.
pub fn model_coefficient<T: Real>(
    spec: &HomogeneousKernelSpec<T>,
    a: &Weight<T>,
    h: &ModelWeightProfile<T>,
) -> Result<T, LabError> {
    if spec.dim != 3 {
        return Err(LabError::InvalidParameter {
            name: "d",
            reason: format!("model operator is defined in three dimensions, got d = {}", spec.dim),
        });
    }
    a.validate()?;
    let sphere = symbol_sphere_coefficient(spec)?;
    if sphere == T::zero() || h.is_zero() || matches!(a, Weight::Zero) {
        return Ok(T::zero());
    }
    let p = spec.p();
    let r_max = a.support_radius().min(h.effective_radius());
    if !(r_max > T::zero()) {
        return Ok(T::zero());
    }
    let integral = |n: usize| -> Result<T, LabError> {
        let grid = RadialGrid::gauss_legendre(n, r_max)?;
        Ok(grid.integrate_radial_3d(|r| (a.profile(r) * h.eval(r)).abs().powf(p)))
    };
    let coarse = integral(96)?;
    let fine = integral(192)?;
    let shift = rel_diff(coarse, fine);
    let limit = T::lit(MODEL_REFINEMENT_TOL);
    if shift > limit {
        return Err(LabError::UnderResolved { quantity: "model coefficient", shift: shift.as_f64(), limit: limit.as_f64() });
    }
    Ok(sphere * fine)
}

/// G_p = g_p of b(x)Φ(x − y)a(y) on the line:
/// (1/(2π))·∫_{S⁰}|X_∞|^p · ∫|a(x)b(x)|^p dx over [−L, L].
pub fn coefficient_1d<T: Real>(spec: &HomogeneousKernelSpec<T>, half_width: T) -> Result<T, LabError> {
    if spec.dim != 1 {
        return Err(LabError::InvalidParameter { name: "d", reason: format!("line coefficient needs d = 1, got {}", spec.dim) });
    }
    let sphere = symbol_sphere_coefficient(spec)?;
    if sphere == T::zero() {
        return Ok(T::zero());
    }
    let p = spec.p();
    let integral = |panels: usize| -> Result<T, LabError> {
        let rule = CompositeRule::new(-half_width, half_width, panels, 16)?;
        Ok(rule
            .nodes
            .iter()
            .zip(&rule.weights)
            .fold(T::zero(), |acc, (&x, &w)| acc + w * (spec.a.eval(x) * spec.b.eval(x)).abs().powf(p)))
    };
    let coarse = integral(32)?;
    let fine = integral(64)?;
    let shift = rel_diff(coarse, fine);
    let limit = T::lit(MODEL_REFINEMENT_TOL);
    if shift > limit {
        return Err(LabError::UnderResolved { quantity: "line coefficient", shift: shift.as_f64(), limit: limit.as_f64() });
    }
    Ok(sphere * fine)
}

/// Kernel of a one-dimensional operator b(x)K(x − y)a(y).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Kernel1d<T> {
    /// Φ of the given family and order.
    Homogeneous { family: KernelFamily, alpha: T },
    /// e^{−rate(x−y)²}
    Gaussian { rate: T },
}

impl<T: Real> Kernel1d<T> {
    #[inline]
    fn eval(&self, z: T) -> T {
        match *self {
            Kernel1d::Homogeneous { family, alpha } => {
                let m = if alpha == T::one() { z.abs() } else { z.abs().powf(alpha) };
                match family {
                    KernelFamily::ScalarAbs => m,
                    KernelFamily::Gradient => {
                        if z == T::zero() {
                            T::zero()
                        } else {
                            (alpha + T::one()) * m * z.signum()
                        }
                    }
                }
            }
            Kernel1d::Gaussian { rate } => (-rate * z * z).exp(),
        }
    }

    /// +1 for even kernels, −1 for odd ones.
    fn parity(&self) -> T {
        match self {
            Kernel1d::Homogeneous { family: KernelFamily::Gradient, .. } => -T::one(),
            _ => T::one(),
        }
    }

    fn is_singular(&self) -> bool {
        matches!(self, Kernel1d::Homogeneous { .. })
    }

    /// Piecewise polynomial on either side of the diagonal.
    fn is_piecewise_polynomial(&self) -> bool {
        match *self {
            Kernel1d::Homogeneous { alpha, .. } => alpha >= T::zero() && alpha == alpha.round(),
            Kernel1d::Gaussian { .. } => false,
        }
    }
}

/// Options of the 1-D Nyström discretization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Nystrom1d<T> {
    /// Requested node count; rounded up to whole panels.
    pub nodes: usize,
    pub half_width: T,
    pub panel_order: usize,
}

impl<T: Real> Nystrom1d<T> {
    pub fn new(nodes: usize, half_width: T) -> Self {
        Self { nodes, half_width, panel_order: 10 }
    }
}

/// Singular values of b(x)|x − y|^α a(y) (or the gradient family) on
/// [−L, L]; see [`nystrom_1d`].
pub fn nystrom_1d_spectrum<T: Real>(spec: &HomogeneousKernelSpec<T>, n: usize, half_width: T) -> Result<SpectrumSeries<T>, LabError> {
    if spec.dim != 1 {
        return Err(LabError::InvalidParameter { name: "d", reason: format!("1-D Nystrom needs d = 1, got {}", spec.dim) });
    }
    if !(spec.alpha > T::lit(-0.5)) {
        return Err(LabError::Domain(format!("1-D Nystrom needs alpha > -1/2, got {}", spec.alpha)));
    }
    let kernel = Kernel1d::Homogeneous { family: spec.family, alpha: spec.alpha };
    nystrom_1d(&kernel, &spec.a, &spec.b, &Nystrom1d::new(n, half_width))
}

/// Nyström matrix √w_i·b(x_i)·K̂_ij·a(x_j)·√w_j on composite Gauss–Legendre
/// panels of [−L, L], returning its singular values.
///
/// For singular kernels the row integrals over the panel holding x_i (and
/// its neighbours when the kernel is not piecewise polynomial) use exact
/// product-integration weights against the panel's Lagrange basis. The
/// corrected kernel K̂ is then symmetrized (antisymmetrized for odd kernels),
/// so exchanging a and b transposes the matrix up to sign.
pub fn nystrom_1d<T: Real>(
    kernel: &Kernel1d<T>,
    a: &Weight<T>,
    b: &Weight<T>,
    options: &Nystrom1d<T>,
) -> Result<SpectrumSeries<T>, LabError> {
    if options.nodes < MIN_NYSTROM_NODES {
        return Err(LabError::InvalidParameter {
            name: "n",
            reason: format!("Nystrom grid needs at least {MIN_NYSTROM_NODES} nodes, got {}", options.nodes),
        });
    }
    if !(options.half_width > T::zero()) {
        return Err(LabError::InvalidParameter { name: "half_width", reason: "must be positive".into() });
    }
    a.validate()?;
    b.validate()?;
    let q = options.panel_order;
    let panels = options.nodes.div_ceil(q);
    let rule = CompositeRule::new(-options.half_width, options.half_width, panels, q)?;
    let n = rule.nodes.len();
    let x = &rule.nodes;
    let w = &rule.weights;

    // kernel values normalised by the column weight: K̂_ij ≈ K(x_i − x_j)
    let mut k_hat = Matrix::from_fn(n, n, |i, j| kernel.eval(x[i] - x[j]));
    if kernel.is_singular() {
        let reach = if kernel.is_piecewise_polynomial() { 0 } else { 1 };
        let local = LocalMoments::new(q);
        for i in 0..n {
            let own = rule.panel_of(i);
            let lo = own.saturating_sub(reach);
            let hi = (own + reach).min(panels - 1);
            for p in lo..=hi {
                let nodes = &x[p * q..(p + 1) * q];
                let moments = local.moments(kernel, x[i], rule.edges[p], rule.edges[p + 1], nodes);
                for (jj, m) in moments.into_iter().enumerate() {
                    let j = p * q + jj;
                    k_hat.set(i, j, m / w[j]);
                }
            }
        }
    }
    let parity = kernel.parity();
    let half = T::lit(0.5);
    let bx: Vec<T> = x.iter().map(|&xi| b.eval(xi)).collect();
    let ax: Vec<T> = x.iter().map(|&xi| a.eval(xi)).collect();
    let sw: Vec<T> = w.iter().map(|&wi| wi.sqrt()).collect();
    let m = Matrix::from_fn(n, n, |i, j| {
        let sym = half * (k_hat.get(i, j) + parity * k_hat.get(j, i));
        sw[i] * bx[i] * sym * ax[j] * sw[j]
    });
    let s = singular_values(&m)?;
    SpectrumSeries::from_values(&s)
}

/// Product-integration weights ∫_panel K(x_i − y)ℓ_j(y) dy for a Lagrange
/// basis ℓ_j on the panel nodes, integrating on each side of x_i with a
/// geometrically graded Gauss–Legendre rule.
struct LocalMoments<T> {
    rule: GaussLegendre<T>,
    levels: usize,
    ratio: T,
}

impl<T: Real> LocalMoments<T> {
    fn new(order: usize) -> Self {
        Self { rule: GaussLegendre::new(order + 6).expect("nonzero order"), levels: 14, ratio: T::lit(0.15) }
    }

    fn moments(&self, kernel: &Kernel1d<T>, xi: T, e0: T, e1: T, nodes: &[T]) -> Vec<T> {
        let q = nodes.len();
        let bary = barycentric_weights(nodes);
        let mut out = vec![T::zero(); q];
        let pivot = xi.max(e0).min(e1);
        let graded = !kernel.is_piecewise_polynomial();
        for (from, to) in [(pivot, e0), (pivot, e1)] {
            if from == to {
                continue;
            }
            // sub-intervals [from + (to−from)·r^{k+1}, from + (to−from)·r^k]
            let levels = if graded { self.levels } else { 1 };
            let span = to - from;
            let mut outer = T::one();
            for level in 0..levels {
                let inner = if level + 1 == levels { T::zero() } else { outer * self.ratio };
                let (ya, yb) = (from + span * inner, from + span * outer);
                let (ys, ws) = self.rule.mapped(ya.min(yb), ya.max(yb));
                for (&y, &wy) in ys.iter().zip(&ws) {
                    let kv = kernel.eval(xi - y) * wy;
                    lagrange_accumulate(nodes, &bary, y, kv, &mut out);
                }
                outer = inner;
            }
        }
        out
    }
}

fn barycentric_weights<T: Real>(nodes: &[T]) -> Vec<T> {
    (0..nodes.len())
        .map(|j| {
            let prod = nodes
                .iter()
                .enumerate()
                .filter(|&(k, _)| k != j)
                .fold(T::one(), |acc, (_, &xk)| acc * (nodes[j] - xk));
            T::one() / prod
        })
        .collect()
}

/// out_j += scale·ℓ_j(y)
fn lagrange_accumulate<T: Real>(nodes: &[T], bary: &[T], y: T, scale: T, out: &mut [T]) {
    if let Some(hit) = nodes.iter().position(|&xk| xk == y) {
        out[hit] = out[hit] + scale;
        return;
    }
    let terms: Vec<T> = nodes.iter().zip(bary).map(|(&xk, &bk)| bk / (y - xk)).collect();
    let denom = terms.iter().fold(T::zero(), |acc, &t| acc + t);
    for (o, t) in out.iter_mut().zip(terms) {
        *o = *o + scale * t / denom;
    }
}
