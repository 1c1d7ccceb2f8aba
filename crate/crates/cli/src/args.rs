use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Debug, Parser)]
#[command(
    name = "qmlab",
    version,
    about = "Numerical laboratory for spin correlations, wavepackets and quantum count statistics"
)]
pub struct Cli {
    /// Seed for every Monte Carlo stream.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Parallel shards; shard i draws from stream i.
    #[arg(long, global = true, default_value_t = 1)]
    pub shards: u64,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// JSON file whose keys mirror flags; explicit flags take precedence.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Joint outcome law and expectation for one pair of analyzer axes.
    Bell(BellArgs),
    /// CHSH combination K for four settings, optionally with a Monte Carlo estimate.
    Chsh(ChshArgs),
    /// Monte Carlo pair outcomes at one pair of axes.
    Sample(SampleArgs),
    /// CHSH audits of local hidden-variable models.
    Lhv(LhvArgs),
    /// No-signaling audit over random bipartite states and basis changes.
    Nosignal(NosignalArgs),
    /// Window or single-pick reduction of an expansion.
    Reduce(ReduceArgs),
    /// Two-particle configuration-space checks for a pair of Gaussian packets.
    Condspace(CondspaceArgs),
    /// Action-probability ratio audit for a large packet and a small scatterer.
    Actionprob(ActionprobArgs),
    /// Wavepacket kinematics.
    #[command(subcommand)]
    Packet(PacketCommand),
    /// Shorthand for `packet accum`.
    Accum(AccumArgs),
    /// Spectral distribution and thermodynamics of a cavity gas.
    Cavity(CavityArgs),
    /// Detector count distribution W(m; g) and its variance.
    Counts(CountsArgs),
    /// Exchange balance and absorption/emission balance checks.
    Balance(BalanceArgs),
    /// Degrees of freedom of a light bundle.
    Vonlaue(VonlaueArgs),
    /// Runs every reference-number check.
    Regress(RegressArgs),
}

#[derive(Debug, Subcommand)]
pub enum PacketCommand {
    /// Longitudinal spread of a minimum packet over a flight distance.
    Spread(SpreadArgs),
    /// Coherence length before and after free spreading.
    Coherence(CoherenceArgs),
    /// Energy accumulation time from a weak flux.
    Accum(AccumArgs),
    /// Stern-Gerlach deflection angle.
    Sterngerlach(SternGerlachArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModelArg {
    Qm,
    Sc,
    TripletPlus,
    TripletZero,
    TripletMinus,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct PairAxes {
    /// Coplanar axis angles a,b in degrees.
    #[arg(long, allow_hyphen_values = true)]
    pub angles_deg: Option<String>,
    /// Axis a as x,y,z.
    #[arg(long, allow_hyphen_values = true)]
    pub a: Option<String>,
    /// Axis b as x,y,z.
    #[arg(long, allow_hyphen_values = true)]
    pub b: Option<String>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct QuadAxes {
    /// Coplanar angles a,b,a′,b′ in degrees.
    #[arg(long, allow_hyphen_values = true)]
    pub angles_deg: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub a: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub b: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub a2: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub b2: Option<String>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct BellArgs {
    #[arg(long, value_enum, default_value_t = ModelArg::Qm)]
    pub model: ModelArg,
    #[command(flatten)]
    #[serde(flatten)]
    pub axes: PairAxes,
    /// Quantization axis of triplet states as x,y,z.
    #[arg(long, default_value = "0,0,1", allow_hyphen_values = true)]
    pub triplet_axis: String,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ChshArgs {
    #[arg(long, value_enum, default_value_t = ModelArg::Qm)]
    pub model: ModelArg,
    #[command(flatten)]
    #[serde(flatten)]
    pub axes: QuadAxes,
    #[arg(long, default_value = "0,0,1", allow_hyphen_values = true)]
    pub triplet_axis: String,
    /// Monte Carlo pairs per setting pair.
    #[arg(long)]
    pub pairs: Option<u64>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SampleArgs {
    #[arg(long, value_enum, default_value_t = ModelArg::Qm)]
    pub model: ModelArg,
    #[command(flatten)]
    #[serde(flatten)]
    pub axes: PairAxes,
    #[arg(long, default_value_t = 1_000_000)]
    pub pairs: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LhvKind {
    Semiclassical,
    Random,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct LhvArgs {
    #[arg(long, value_enum, default_value_t = LhvKind::Semiclassical)]
    pub kind: LhvKind,
    /// Settings for a single audit; random quadruples are used when absent.
    #[arg(long, allow_hyphen_values = true)]
    pub angles_deg: Option<String>,
    /// Polar cells of the semiclassical λ grid.
    #[arg(long, default_value_t = 64)]
    pub polar: usize,
    /// Azimuthal cells of the semiclassical λ grid.
    #[arg(long, default_value_t = 128)]
    pub azimuth: usize,
    /// Random models to draw (random kind).
    #[arg(long, default_value_t = 1000)]
    pub models: usize,
    /// Hidden-variable points per random model.
    #[arg(long, default_value_t = 8)]
    pub lambdas: usize,
    /// Random setting quadruples per model.
    #[arg(long, default_value_t = 1000)]
    pub settings: usize,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct NosignalArgs {
    #[arg(long, default_value_t = 200)]
    pub trials: usize,
    /// Largest dimension of either party's basis.
    #[arg(long, default_value_t = 8)]
    pub max_dim: usize,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ReduceArgs {
    /// Real amplitudes |c(n)| (renormalized).
    #[arg(long, allow_hyphen_values = true)]
    pub amplitudes: String,
    /// Phases of c(n) in degrees.
    #[arg(long, allow_hyphen_values = true)]
    pub phases_deg: Option<String>,
    /// Keep only these indices.
    #[arg(long)]
    pub window: Option<String>,
    /// Single-pick draws to tally.
    #[arg(long)]
    pub draws: Option<u64>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct CondspaceArgs {
    /// Distance between the two packet centers.
    #[arg(long, default_value_t = 10.0)]
    pub separation: f64,
    #[arg(long, default_value_t = 1.0)]
    pub sigma: f64,
    #[arg(long, default_value_t = 0.25)]
    pub spacing: f64,
    #[arg(long, default_value_t = 128)]
    pub points: usize,
    /// +1 symmetric, −1 antisymmetric.
    #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
    pub sign: i32,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ActionprobArgs {
    /// Packet width Δx.
    #[arg(long, default_value_t = 100.0)]
    pub sigma: f64,
    /// Scatterer width.
    #[arg(long, default_value_t = 1.0)]
    pub width: f64,
    #[arg(long, default_value_t = 1.0)]
    pub strength: f64,
    /// Probe centers spread evenly over ⟨x⟩ ± Δx.
    #[arg(long, default_value_t = 9)]
    pub probes: usize,
    /// Final plane-wave modes j = 1..=modes.
    #[arg(long, default_value_t = 16)]
    pub modes: i64,
    #[arg(long, default_value_t = 0.1)]
    pub spacing: f64,
    #[arg(long, default_value_t = 12_001)]
    pub points: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Particle {
    Electron,
    Proton,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SpreadArgs {
    #[arg(long, value_enum, default_value_t = Particle::Proton)]
    pub particle: Particle,
    /// Overrides the particle mass (kg).
    #[arg(long)]
    pub mass_kg: Option<f64>,
    #[arg(long, default_value_t = 6.0)]
    pub kinetic_mev: f64,
    /// Full packet length 2Δy(0) in meters.
    #[arg(long, default_value_t = 4e-15)]
    pub full_length: f64,
    /// Flight distance in meters.
    #[arg(long, default_value_t = 0.05)]
    pub distance: f64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct CoherenceArgs {
    /// Minimum width Δy_min.
    #[arg(long, default_value_t = 1.0)]
    pub sigma: f64,
    #[arg(long, default_value_t = 0.1)]
    pub spacing: f64,
    #[arg(long, default_value_t = 1024)]
    pub points: usize,
    /// Free-spreading time in units where ħ/m = `hbar_over_m`.
    #[arg(long, default_value_t = 8.0)]
    pub time: f64,
    #[arg(long, default_value_t = 1.0)]
    pub hbar_over_m: f64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct AccumArgs {
    #[arg(long, default_value_t = 2.18)]
    pub threshold_ev: f64,
    /// Energy flux in W/m².
    #[arg(long, default_value_t = 3.5e-13)]
    pub flux: f64,
    /// Collecting area in m².
    #[arg(long, default_value_t = 1e-18)]
    pub area: f64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SternGerlachArgs {
    #[arg(long, value_enum, default_value_t = Particle::Electron)]
    pub particle: Particle,
    /// Field gradient ∂B_z/∂z in T/m.
    #[arg(long, default_value_t = 10.0)]
    pub grad_b: f64,
    /// Time spent in the gradient (s).
    #[arg(long, default_value_t = 1e-6)]
    pub dt: f64,
    /// Forward kinetic energy (eV).
    #[arg(long, default_value_t = 100.0)]
    pub kinetic_ev: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum StatArg {
    Bose,
    Fermi,
    Boltzmann,
    Photon,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct CavityArgs {
    #[arg(long, value_enum, default_value_t = StatArg::Photon)]
    pub stat: StatArg,
    #[arg(long, default_value_t = 1000.0)]
    pub temperature: f64,
    #[arg(long, default_value_t = 1.0)]
    pub volume: f64,
    /// Chemical potential in eV (ignored for photons).
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub mu_ev: f64,
    #[arg(long, default_value_t = 0.0)]
    pub mass_kg: f64,
    #[arg(long, default_value_t = 200)]
    pub bins: usize,
    /// Lowest bin edge in units of kT/c.
    #[arg(long, default_value_t = 0.05)]
    pub x_min: f64,
    /// Highest bin edge in units of kT/c.
    #[arg(long, default_value_t = 20.0)]
    pub x_max: f64,
    /// Logarithmically spaced bins.
    #[arg(long)]
    pub log: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CountStat {
    Bose,
    Fermi,
    Boltzmann,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct CountsArgs {
    #[arg(long, value_enum)]
    pub stat: CountStat,
    /// Number of packets.
    #[arg(long)]
    pub g: u64,
    /// Mean count m̄.
    #[arg(long)]
    pub mbar: f64,
    /// Detection efficiency.
    #[arg(long, default_value_t = 1.0)]
    pub eta: f64,
    /// Report W(0..=mmax); the whole truncated law when absent.
    #[arg(long)]
    pub mmax: Option<usize>,
    /// Monte Carlo trials for the variance check.
    #[arg(long)]
    pub trials: Option<u64>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct BalanceArgs {
    /// Random parameter sets for the exchange balance.
    #[arg(long, default_value_t = 10_000)]
    pub trials: usize,
    /// Relative change of b on species 2 only.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub perturb: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConventionArg {
    Average,
    Minimum,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct VonlaueArgs {
    /// Source area A (m²).
    #[arg(long, default_value_t = 1e-4)]
    pub area: f64,
    /// Bundle length l (m).
    #[arg(long, default_value_t = 0.3)]
    pub length: f64,
    /// Bandwidth dν (Hz).
    #[arg(long, default_value_t = 1e9)]
    pub dnu: f64,
    /// Diffraction-limited area a (m²).
    #[arg(long, default_value_t = 1e-10)]
    pub focal_area: f64,
    /// Packet half-length Δy (m).
    #[arg(long, default_value_t = 1e-3)]
    pub dy: f64,
    #[arg(long, value_enum, default_value_t = ConventionArg::Average)]
    pub convention: ConventionArg,
    /// Explicit r in Δν = r·c/(4πΔy); overrides the convention.
    #[arg(long)]
    pub r: Option<f64>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct RegressArgs {
    /// Skip the Monte Carlo checks.
    #[arg(long)]
    pub quick: bool,
}
