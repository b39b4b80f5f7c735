//! Natural-orbital occupation asymptotics for two-particle states with an
//! electron–electron cusp, plus the homogeneous-kernel and weak-Schatten
//! tooling used to check them.
//!
//! Everything numeric is generic over [`scalar::Real`] (`f32`, `f64`); the
//! aliases below fix the scalar to `f64`.

// `!(x > 0)` is how NaN inputs get rejected
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod cusp_states;
pub mod density;
pub mod error;
pub mod homokernel;
pub mod linalg;
pub mod quadrature;
pub mod scalar;
pub mod special;
pub mod spectral;
pub mod spectrum;

pub use cusp_states::{closed_form_coefficient_a, coefficient_a, CuspState, Symmetry};
pub use density::{assemble_spectrum, channel_spectrum, partial_wave_amplitude, trace_sum, ChannelOperator, DensityConfig};
pub use error::LabError;
pub use homokernel::{
    coefficient_1d, fourier_symbol, model_coefficient, mu_coefficient, nu_coefficient, nystrom_1d, nystrom_1d_spectrum,
    HomogeneousKernelSpec, Kernel1d, KernelFamily, ModelWeightProfile, Nystrom1d, Weight,
};
pub use quadrature::RadialGrid;
pub use scalar::Real;
pub use spectral::{counting_function, finite_matrix_identities, plateau_estimate, quasi_norm, PlateauEstimate};
pub use spectrum::{SpectrumEntry, SpectrumSeries};

pub type CuspState64 = CuspState<f64>;
pub type DensityConfig64 = DensityConfig<f64>;
pub type RadialGrid64 = RadialGrid<f64>;
pub type SpectrumSeries64 = SpectrumSeries<f64>;
pub type PlateauEstimate64 = PlateauEstimate<f64>;
pub type HomogeneousKernelSpec64 = HomogeneousKernelSpec<f64>;
pub type Weight64 = Weight<f64>;
pub type CuspState32 = CuspState<f32>;
pub type SpectrumSeries32 = SpectrumSeries<f32>;
