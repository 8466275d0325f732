//! Phase estimation, quadrature squeezing and interference-pattern
//! measurements.

mod double_slit;
mod micrometer;
mod phase;
mod probe;
mod quadrature;

pub use double_slit::{ChiSquareTest, DoubleSlit};
pub use micrometer::{micrometer_estimate, MicrometerConfig, MicrometerEstimate};
pub use phase::{
    coherent_decade, heisenberg_bound, intensity_snr, log_log_fit, mach_zehnder, mach_zehnder_port0,
    operating_point, phase_estimate_zero_n, phase_grid, scaling_sweep, shot_noise_baseline, LinearFit,
    PrecisionEstimate, ScalingPoint, ScalingProbe, ScalingSweep,
};
pub use probe::{ProbeKind, ProbeState};
pub use quadrature::{quadrature_variance, squeezed_precision_bound, Quadrature, QuadratureVariance};
