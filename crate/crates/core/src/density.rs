//! One-particle density operator Γ = Ψ*Ψ of a two-particle cusp state.
//!
//! ψ depends on t and x only through ρ = |t|, r = |x| and the cosine u of
//! the angle between them, so Γ commutes with rotations. Expanding
//!
//!   ψ(t, x) = Σ_ℓ (2ℓ+1)/(4π) · a_ℓ(ρ, r) · P_ℓ(u),   a_ℓ = 2π∫P_ℓ(u)ψ du,
//!
//! splits Ψ (kernel √2·ψ) into radial channels of multiplicity 2ℓ + 1. Each
//! channel is discretized as the square-root-weighted Nyström matrix
//!
//!   M_ℓ[i, j] = √w_i·ρ_i · √2·a_ℓ(ρ_i, r_j) · r_j·√w_j,
//!
//! whose squared singular values are the channel's eigenvalues of Γ.

use log::{debug, warn};
use serde::{Deserialize, Serialize};

use crate::cusp_states::CuspState;
use crate::error::LabError;
use crate::linalg::{singular_values, symmetric_eigenvalues, Matrix};
use crate::quadrature::{GaussLegendre, RadialGrid};
use crate::scalar::{rel_diff, Real};
use crate::special::legendre_table;
use crate::spectrum::{agreement_rank, SpectrumEntry, SpectrumSeries};

/// Values below this fraction of λ₁ are quadrature noise and set to zero.
pub const EIGENVALUE_FLOOR: f64 = 1e-13;
/// Relative agreement defining the trust index.
pub const TRUST_TOLERANCE: f64 = 0.05;
/// Channel ℓ = l_max contributing above this fraction of λ₁ flags truncation.
pub const TRUNCATION_WARNING: f64 = 1e-10;
/// Relative shift tolerated when the trace quadrature is refined.
pub const TRACE_REFINEMENT_TOL: f64 = 1e-8;

/// Numerical parameters of the partial-wave pipeline.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DensityConfig<T> {
    pub l_max: usize,
    pub radial_nodes: usize,
    pub r_max: T,
    pub u_order: usize,
}

impl<T: Real> DensityConfig<T> {
    /// l_max = 48, 320 radial nodes, r_max = 14/ζ, u_order = l_max + 16.
    pub fn defaults_for(state: &CuspState<T>) -> Self {
        let l_max = 48;
        Self { l_max, radial_nodes: 320, r_max: T::lit(14.0) / state.zeta(), u_order: l_max + 16 }
    }

    pub fn grid(&self) -> Result<RadialGrid<T>, LabError> {
        RadialGrid::gauss_legendre(self.radial_nodes, self.r_max)
    }

    pub fn validate(&self) -> Result<(), LabError> {
        if self.u_order < self.l_max + 1 {
            return Err(LabError::InvalidParameter {
                name: "uorder",
                reason: format!("u_order {} aliases channel l_max = {} (need >= l_max + 1)", self.u_order, self.l_max),
            });
        }
        if self.radial_nodes < 2 {
            return Err(LabError::InvalidParameter { name: "n", reason: "need at least 2 radial nodes".into() });
        }
        if !(self.r_max > T::zero()) {
            return Err(LabError::InvalidParameter { name: "rmax", reason: "must be positive".into() });
        }
        Ok(())
    }
}

/// a_ℓ(ρ, r) = 2π∫_{−1}^{1} P_ℓ(u)·ψ(ρ, r, u) du by Gauss–Legendre in u.
pub fn partial_wave_amplitude<T: Real>(state: &CuspState<T>, ell: usize, rho: T, r: T, u_order: usize) -> Result<T, LabError> {
    if u_order < ell + 1 {
        return Err(LabError::InvalidParameter {
            name: "uorder",
            reason: format!("u_order {u_order} aliases channel {ell} (need >= ell + 1)"),
        });
    }
    let rule = GaussLegendre::<T>::new(u_order)?;
    let two = T::lit(2.0);
    let sum = rule.nodes.iter().zip(&rule.weights).fold(T::zero(), |acc, (&u, &w)| {
        let p = *legendre_table(ell, u).last().expect("nonempty table");
        acc + w * p * state.psi_radial(rho, r, pair_distance(rho, r, u))
    });
    Ok(two * T::PI() * sum)
}

/// |t − x| from |t| = ρ, |x| = r and the cosine u of the angle between them.
#[inline]
pub fn pair_distance<T: Real>(rho: T, r: T, u: T) -> T {
    let two = T::lit(2.0);
    (rho * rho + r * r - two * rho * r * u).max(T::zero()).sqrt()
}

/// a_ℓ(ρ_i, r_j) for every ℓ ≤ l_max on the grid product.
#[derive(Debug, Clone)]
pub struct AmplitudeTable<T> {
    l_max: usize,
    n: usize,
    data: Vec<T>,
}

impl<T: Real> AmplitudeTable<T> {
    pub fn compute(state: &CuspState<T>, grid: &RadialGrid<T>, l_max: usize, u_order: usize) -> Result<Self, LabError> {
        if u_order < l_max + 1 {
            return Err(LabError::InvalidParameter {
                name: "uorder",
                reason: format!("u_order {u_order} aliases channel {l_max} (need >= l_max + 1)"),
            });
        }
        grid.validate()?;
        let rule = GaussLegendre::<T>::new(u_order)?;
        let two_pi = T::lit(2.0) * T::PI();
        // projector[ℓ][k] = 2π·w_k·P_ℓ(u_k)
        let mut projector = vec![T::zero(); (l_max + 1) * u_order];
        for (k, (&u, &w)) in rule.nodes.iter().zip(&rule.weights).enumerate() {
            for (ell, p) in legendre_table(l_max, u).into_iter().enumerate() {
                projector[ell * u_order + k] = two_pi * w * p;
            }
        }
        let n = grid.len();
        let mut data = vec![T::zero(); (l_max + 1) * n * n];
        let mut psi = vec![T::zero(); u_order];
        for (i, &rho) in grid.nodes.iter().enumerate() {
            for (j, &r) in grid.nodes.iter().enumerate() {
                for (k, &u) in rule.nodes.iter().enumerate() {
                    psi[k] = state.psi_radial(rho, r, pair_distance(rho, r, u));
                }
                for ell in 0..=l_max {
                    let row = &projector[ell * u_order..(ell + 1) * u_order];
                    let a = row.iter().zip(&psi).fold(T::zero(), |acc, (&p, &v)| acc + p * v);
                    data[(ell * n + i) * n + j] = a;
                }
            }
        }
        Ok(Self { l_max, n, data })
    }

    pub fn l_max(&self) -> usize {
        self.l_max
    }

    #[inline]
    pub fn get(&self, ell: usize, i: usize, j: usize) -> T {
        self.data[(ell * self.n + i) * self.n + j]
    }
}

/// Radial operator of one partial-wave channel.
#[derive(Debug, Clone)]
pub struct ChannelOperator<T> {
    pub ell: usize,
    /// √2·a_ℓ(ρ_i, r_j)
    pub amplitude_matrix: Matrix<T>,
    /// Square-root-weighted Nyström matrix M_ℓ.
    pub nystrom_matrix: Matrix<T>,
}

impl<T: Real> ChannelOperator<T> {
    /// Builds the channel on the grid product ρ-axis × r-axis; both axes must
    /// carry the same grid so the discretization stays square and symmetric.
    pub fn new(
        state: &CuspState<T>,
        ell: usize,
        rho_grid: &RadialGrid<T>,
        r_grid: &RadialGrid<T>,
        u_order: usize,
    ) -> Result<Self, LabError> {
        if rho_grid.nodes != r_grid.nodes || rho_grid.weights != r_grid.weights {
            return Err(LabError::InvalidGrid("rho- and r-axes must use the same radial grid".into()));
        }
        let table = AmplitudeTable::compute(state, rho_grid, ell, u_order)?;
        Ok(Self::from_table(&table, ell, rho_grid))
    }

    fn from_table(table: &AmplitudeTable<T>, ell: usize, grid: &RadialGrid<T>) -> Self {
        let n = grid.len();
        let sqrt2 = T::lit(2.0).sqrt();
        let amplitude_matrix = Matrix::from_fn(n, n, |i, j| sqrt2 * table.get(ell, i, j));
        let scale: Vec<T> = grid.nodes.iter().zip(&grid.weights).map(|(&r, &w)| w.sqrt() * r).collect();
        let nystrom_matrix = Matrix::from_fn(n, n, |i, j| scale[i] * amplitude_matrix.get(i, j) * scale[j]);
        Self { ell, amplitude_matrix, nystrom_matrix }
    }

    /// Eigenvalues of the channel operator: squared singular values of M_ℓ.
    pub fn eigenvalues(&self) -> Result<Vec<T>, LabError> {
        Ok(singular_values(&self.nystrom_matrix)?.into_iter().map(|s| s * s).collect())
    }

    /// max_k |λ_k(M_ℓᵀM_ℓ) − s_k(M_ℓ)²| / s_1(M_ℓ)².
    pub fn factorization_residual(&self) -> Result<T, LabError> {
        let squared = self.eigenvalues()?;
        let gram = symmetric_eigenvalues(&self.nystrom_matrix.gram())?;
        let top = squared.first().copied().unwrap_or_else(T::zero);
        if top == T::zero() {
            return Ok(gram.iter().fold(T::zero(), |m, &g| m.max(g.abs())));
        }
        Ok(squared.iter().zip(&gram).fold(T::zero(), |m, (&s, &g)| m.max((s - g).abs() / top)))
    }
}

/// Eigenvalues of Γ in channel ℓ (each with multiplicity 2ℓ + 1 in the full
/// spectrum), nonincreasing.
pub fn channel_spectrum<T: Real>(state: &CuspState<T>, ell: usize, grid: &RadialGrid<T>, u_order: usize) -> Result<Vec<T>, LabError> {
    ChannelOperator::new(state, ell, grid, grid, u_order)?.eigenvalues()
}

/// Merges channels 0..=l_max without the trust re-run.
fn merged_channels<T: Real>(state: &CuspState<T>, config: &DensityConfig<T>, grid: &RadialGrid<T>) -> Result<SpectrumSeries<T>, LabError> {
    let table = AmplitudeTable::compute(state, grid, config.l_max, config.u_order)?;
    let mut entries = Vec::with_capacity((config.l_max + 1) * grid.len());
    let mut top_of_last = T::zero();
    for ell in 0..=config.l_max {
        let values = ChannelOperator::from_table(&table, ell, grid).eigenvalues()?;
        if ell == config.l_max {
            top_of_last = values.first().copied().unwrap_or_else(T::zero);
        }
        entries.extend(values.into_iter().enumerate().map(|(radial_index, value)| SpectrumEntry {
            value,
            multiplicity: 2 * ell + 1,
            channel: ell,
            radial_index,
        }));
    }
    let mut series = SpectrumSeries::from_entries(entries)?;
    let lambda1 = series.largest();
    series.apply_floor(T::lit(EIGENVALUE_FLOOR) * lambda1);
    if top_of_last > T::lit(TRUNCATION_WARNING) * lambda1 {
        series.warnings.push(format!(
            "channel l_max = {} contributes {:.3e} of lambda_1; partial-wave truncation suspect",
            config.l_max,
            (top_of_last / lambda1).as_f64()
        ));
    }
    Ok(series)
}

/// Full spectrum of Γ: channels 0..=l_max merged with multiplicity 2ℓ + 1,
/// sorted by (value desc, ℓ asc, radial index asc). `trust_k` comes from a
/// re-run with half the radial nodes.
pub fn assemble_spectrum<T: Real>(state: &CuspState<T>, config: &DensityConfig<T>) -> Result<SpectrumSeries<T>, LabError> {
    config.validate()?;
    let grid = config.grid()?;
    let mut series = merged_channels(state, config, &grid)?;
    let half = RadialGrid::gauss_legendre((config.radial_nodes / 2).max(2), config.r_max)?;
    let coarse = merged_channels(state, config, &half)?;
    series.trust_k = agreement_rank(&series, &coarse, T::lit(TRUST_TOLERANCE));
    debug!("assembled {} eigenvalues, trust_k = {}", series.len(), series.trust_k);
    for w in &series.warnings {
        warn!("{w}");
    }
    Ok(series)
}

/// trace Γ = 2‖ψ‖² by direct quadrature of ∫∫|ψ(t, x)|² dt dx.
///
/// The angular integral is taken in the interparticle distance
/// d ∈ [|ρ − r|, ρ + r] (du = −d·dd/(ρr)), which removes the cusp from the
/// integrand; the inner radial integral is split at r = ρ.
pub fn trace_sum<T: Real>(state: &CuspState<T>, grid: &RadialGrid<T>) -> Result<T, LabError> {
    grid.validate()?;
    let coarse = norm_squared(state, grid)?;
    let fine = norm_squared(state, &grid.with_nodes(2 * grid.len())?)?;
    let shift = rel_diff(coarse, fine);
    let limit = T::lit(TRACE_REFINEMENT_TOL);
    if shift > limit {
        return Err(LabError::UnderResolved { quantity: "trace", shift: shift.as_f64(), limit: limit.as_f64() });
    }
    Ok(T::lit(2.0) * fine)
}

fn norm_squared<T: Real>(state: &CuspState<T>, grid: &RadialGrid<T>) -> Result<T, LabError> {
    let inner_rule = GaussLegendre::<T>::new(grid.len())?;
    let angular = GaussLegendre::<T>::new(8)?;
    let r_max = grid.r_max;
    let angle_integral = |rho: T, r: T| {
        let (lo, hi) = ((rho - r).abs(), rho + r);
        angular.integrate(lo, hi, |d| {
            let v = state.psi_radial(rho, r, d);
            v * v * d
        }) / (rho * r)
    };
    let radial = |rho: T| {
        let f = |r: T| r * r * angle_integral(rho, r);
        inner_rule.integrate(T::zero(), rho, f) + inner_rule.integrate(rho, r_max, f)
    };
    // ∫dt̂ ∫dx̂ = 4π · 2π ∫du
    let eight_pi_sq = T::lit(8.0) * T::PI() * T::PI();
    Ok(eight_pi_sq * grid.integrate(|rho| rho * rho * radial(rho)))
}
