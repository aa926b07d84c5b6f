//! Wavelet-based synthesis of fractional Brownian motion, the Rosenblatt
//! process and (generalized) Hermite processes of order three.
//!
//! A path at scale `J` is built from FARIMA sequences driven by Gaussian
//! innovations: Wick products of the FARIMA values over a thickened diagonal
//! are weighted by integrals of fractional Meyer scaling functions, summed,
//! scaled by `2^{−JH}` and linearly interpolated.
//!
//! ```no_run
//! use hermsynth_core::{ProcessKind, SimulationConfig, Simulator};
//!
//! let cfg = SimulationConfig::with_hurst(ProcessKind::Rosenblatt, 0.7)?
//!     .scale(12)
//!     .normalized(true);
//! let path = Simulator::new(cfg)?.path(42)?;
//! println!("S(1) = {}", path.evaluate(1.0)?);
//! # Ok::<(), hermsynth_core::Error>(())
//! ```

pub mod chaos;
pub mod error;
pub mod export;
pub mod farima;
pub mod meyer;
pub mod noise;
pub mod params;
pub mod path;
pub mod quadrature;
pub mod simulator;
pub mod stats;

pub use chaos::{sigma_d2, sigma_d3, sigma_general, CovarianceTable, PartitionSet};
pub use error::{Error, Result};
pub use farima::{
    farima_covariance, farima_covariance_closed, gamma_weights, generate_farima, FarimaParams,
    FarimaPlan, FarimaSequence, FracWeights,
};
pub use meyer::{frac_scaling_hat, phi_hat};
pub use noise::{NoiseMode, NoiseSource};
pub use params::{
    hermite_constant, kernel_variance, FarimaOptions, HurstVector, ProcessKind, SimulationConfig,
};
pub use path::{evaluate_path, Provenance, SamplePath};
pub use quadrature::{
    integral_matrix_d3, integral_matrix_gen3, integral_vector_d2, IntegralTable, QuadratureSpec,
    TableCache, TableLayout,
};
pub use simulator::{
    build_path, diagonal_width, index_bounds, simulate_increments, Increments, Simulator,
};
pub use stats::{
    convergence_slope, empirical_covariance, estimate_hurst_qv, fbm_covariance, path_seed,
    EnsembleSummary, RateFit,
};
