use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Parser, Debug)]
#[command(name = "linoptics", version, about = "Seeded linear-optics experiment runner")]
pub struct Cli {
    /// Master seed; run `k` of an experiment draws from stream `k`.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Repetition count for sampled experiments.
    #[arg(long, global = true)]
    pub shots: Option<u64>,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Report format; curves default to csv, everything else to json.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Fock truncation override for experiments with unbounded photon number.
    #[arg(long, global = true)]
    pub cutoff: Option<u32>,
    /// Add the wall time to the report. Breaks byte reproducibility.
    #[arg(long, global = true)]
    pub timing: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Print the experiment catalog.
    List,
    /// Two-photon interference dip against delay.
    Hom(HomArgs),
    /// Second-order coherence of coherent, thermal and Fock light.
    G2(G2Args),
    /// Double-slit intensity and single-photon histogram.
    DoubleSlit(DoubleSlitArgs),
    /// BB84 key distribution with optional intercept-resend attack.
    Bb84(Bb84Args),
    /// Polarization-qubit teleportation through a Bell pair.
    Teleport(TeleportArgs),
    /// Direct transmission against a segmented repeater chain.
    Repeater(RepeaterArgs),
    /// Heralded nonlinear sign gate.
    NsGate(NsGateArgs),
    /// Heralded controlled-Z from two sign gates.
    CzGate(CzGateArgs),
    /// Type-I or type-II fusion of two Bell pairs.
    Fusion(FusionArgs),
    /// Cluster-state stabilizers and one-way single-qubit rotation.
    ClusterMbqc(ClusterMbqcArgs),
    /// Phase-estimation error against photon resource.
    NoonScaling(NoonScalingArgs),
    /// Quadrature variances of squeezed vacuum.
    Squeeze(SqueezeArgs),
    /// Slit separation from fringe counting.
    Micrometer(MicrometerArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum HomSource {
    Pair,
    Coherent,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct HomArgs {
    /// Largest delay; the grid runs from -tau-max to tau-max.
    #[arg(long, default_value_t = 3.0)]
    pub tau_max: f64,
    /// Number of grid points, endpoints included.
    #[arg(long, default_value_t = 61)]
    pub tau_steps: usize,
    /// Coherence time of the wave packets.
    #[arg(long, default_value_t = 1.0)]
    pub tau_c: f64,
    /// Second input: a single photon or a coherent state.
    #[arg(long, value_enum, default_value_t = HomSource::Pair)]
    pub input: HomSource,
    /// Mean photon number of the coherent input.
    #[arg(long, default_value_t = 1.0)]
    pub mean_photons: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LightSource {
    Coherent,
    Thermal,
    Fock,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct G2Args {
    /// Light whose photon statistics are evaluated.
    #[arg(long, value_enum, default_value_t = LightSource::Coherent)]
    pub source: LightSource,
    /// Mean photon number for coherent and thermal light.
    #[arg(long, default_value_t = 2.0)]
    pub mean_photons: f64,
    /// Photon number of the Fock state.
    #[arg(long, default_value_t = 1)]
    pub n: u32,
    /// Coherence time setting the decay of g2(tau).
    #[arg(long, default_value_t = 1.0)]
    pub tau_c: f64,
    /// Largest delay of the curve, which starts at 0.
    #[arg(long, default_value_t = 5.0)]
    pub tau_max: f64,
    /// Number of curve points, endpoints included.
    #[arg(long, default_value_t = 51)]
    pub tau_steps: usize,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct DoubleSlitArgs {
    /// Slit width in metres.
    #[arg(long, default_value_t = 20e-6)]
    pub width: f64,
    /// Slit separation in metres.
    #[arg(long, default_value_t = 100e-6)]
    pub separation: f64,
    /// Screen distance in metres.
    #[arg(long, default_value_t = 1.0)]
    pub distance: f64,
    /// Wavelength in metres.
    #[arg(long, default_value_t = 600e-9)]
    pub wavelength: f64,
    /// Detected photons; falls back to --shots, then 100000.
    #[arg(long)]
    pub photons: Option<u64>,
    /// Histogram bins across the central window.
    #[arg(long, default_value_t = 100)]
    pub bins: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EveArg {
    None,
    InterceptResend,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct Bb84Args {
    /// Pulses sent; falls back to --shots, then 10000.
    #[arg(long)]
    pub pulses: Option<u64>,
    /// Eavesdropping strategy on the channel.
    #[arg(long, value_enum, default_value_t = EveArg::None)]
    pub eve: EveArg,
    /// Fibre length, in the same unit as the attenuation length.
    #[arg(long, default_value_t = 0.0)]
    pub length: f64,
    /// Length over which transmission falls by 1/e.
    #[arg(long, default_value_t = 50.0)]
    pub attenuation_length: f64,
    /// Fraction of the sifted key published to estimate the error rate.
    #[arg(long, default_value_t = 0.5)]
    pub sample_fraction: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BellArg {
    PhiPlus,
    PhiMinus,
    PsiPlus,
    PsiMinus,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BellModeArg {
    Ideal,
    LinearOptical,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct TeleportArgs {
    /// Input `cos(theta/2)|H> + e^{i phi} sin(theta/2)|V>`.
    #[arg(long, default_value_t = 1.0)]
    pub theta: f64,
    #[arg(long, default_value_t = 0.5)]
    pub phi: f64,
    /// Bell pair shared between sender and receiver.
    #[arg(long, value_enum, default_value_t = BellArg::PhiPlus)]
    pub resource: BellArg,
    /// Complete projective analyzer or the beam-splitter analyzer.
    #[arg(long, value_enum, default_value_t = BellModeArg::Ideal)]
    pub bell_mode: BellModeArg,
    /// Sampled runs; falls back to --shots, then 1000.
    #[arg(long)]
    pub runs: Option<u64>,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct RepeaterArgs {
    /// End-to-end distance.
    #[arg(long, default_value_t = 4.0)]
    pub total_length: f64,
    /// Length over which transmission falls by 1/e.
    #[arg(long, default_value_t = 1.0)]
    pub attenuation_length: f64,
    /// Elementary links in the chain.
    #[arg(long, default_value_t = 2)]
    pub segments: u32,
    /// Probability that one entanglement swap succeeds.
    #[arg(long, default_value_t = 1.0)]
    pub swap_success: f64,
    /// Time slots; falls back to --shots, then 100000.
    #[arg(long)]
    pub slots: Option<u64>,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct NsGateArgs {
    /// Real amplitudes of |0>, |1>, |2>; normalized before use.
    #[arg(long, value_delimiter = ',', num_args = 3, default_values_t = [1.0, 1.0, 1.0])]
    pub amplitudes: Vec<f64>,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct CzGateArgs {}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FusionKind {
    Type1,
    Type2,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct FusionArgs {
    /// Type-I keeps one photon of the fused pair, type-II detects both.
    #[arg(long, value_enum, default_value_t = FusionKind::Type1)]
    pub kind: FusionKind,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct ClusterMbqcArgs {
    /// Vertices of the line cluster checked for stabilizers.
    #[arg(long, default_value_t = 4)]
    pub vertices: usize,
    /// First rotation angle of `H U_Z(gamma) U_X(beta) U_Z(alpha)`.
    #[arg(long, default_value_t = 0.3)]
    pub alpha: f64,
    #[arg(long, default_value_t = 0.7)]
    pub beta: f64,
    #[arg(long, default_value_t = 1.1)]
    pub gamma: f64,
    /// Sampled runs; falls back to --shots, then 100.
    #[arg(long)]
    pub runs: Option<u64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProbeArg {
    ZeroN,
    Coherent,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct NoonScalingArgs {
    /// `zero-n` sweeps N = 1..max-n; `coherent` sweeps one decade of mean
    /// photon number from 10.
    #[arg(long, value_enum, default_value_t = ProbeArg::ZeroN)]
    pub probe: ProbeArg,
    /// Largest photon number of the zero-n sweep.
    #[arg(long, default_value_t = 8)]
    pub max_n: u32,
    /// Estimates per resource value.
    #[arg(long, default_value_t = 2000)]
    pub repetitions: u64,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct SqueezeArgs {
    /// Largest squeezing parameter; the grid starts at 0.
    #[arg(long, default_value_t = 1.0)]
    pub r_max: f64,
    /// Number of grid points, endpoints included.
    #[arg(long, default_value_t = 11)]
    pub r_steps: usize,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct MicrometerArgs {
    /// Wavelength in metres.
    #[arg(long, default_value_t = 600e-9)]
    pub wavelength: f64,
    /// Screen distance and observed strip length in metres.
    #[arg(long, default_value_t = 0.05)]
    pub length: f64,
    /// True slit separation in metres.
    #[arg(long, default_value_t = 5e-6)]
    pub separation: f64,
    /// Photon budget; falls back to --shots, then 100000.
    #[arg(long)]
    pub photons: Option<u64>,
    /// Detector pixels across the strip.
    #[arg(long, default_value_t = 2000)]
    pub pixels: usize,
    /// Use expected counts instead of Poisson draws.
    #[arg(long)]
    pub noiseless: bool,
}
