//! Argument definitions.

use std::path::PathBuf;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use gta_core::{Environment, FrequencyBand, LinkType};

fn parse_env(s: &str) -> Result<Environment, gta_core::Error> {
    s.parse()
}

fn parse_band(s: &str) -> Result<FrequencyBand, gta_core::Error> {
    s.parse()
}

fn parse_link(s: &str) -> Result<LinkType, gta_core::Error> {
    s.parse()
}

#[derive(Debug, Parser)]
#[command(name = "gta", version, about = "Ground-to-air mmWave path-loss model toolkit")]
pub struct Cli {
    /// RNG seed for commands that draw random numbers
    #[arg(long, global = true)]
    pub seed: Option<u64>,

    /// Print machine-readable JSON instead of tables
    #[arg(long, global = true)]
    pub json: bool,

    /// Suppress warnings and informational output
    #[arg(long, short, global = true)]
    pub quiet: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate path loss for one scenario at a distance or geometry
    Pl(PlArgs),
    /// Fit LOS/NLOS log-distance models to a measurement CSV
    Fit(FitArgs),
    /// Render a mean path-loss or outage raster from a scenario config
    Map(MapArgs),
    /// Print the embedded parameter tables
    Tables(TablesArgs),
    /// Write synthetic measurements drawn from a table entry
    Synth(SynthArgs),
    /// Print a default scenario config
    Config(ConfigArgs),
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("position").required(true).args(["d", "r2d"])))]
pub struct PlArgs {
    /// suburban | urban | dense-urban | high-rise
    #[arg(long, value_parser = parse_env)]
    pub env: Environment,

    /// 28 | 73 (GHz)
    #[arg(long, value_parser = parse_band)]
    pub freq: FrequencyBand,

    /// los | nlos; both are reported when omitted
    #[arg(long, value_parser = parse_link)]
    pub link: Option<LinkType>,

    /// 3D transmitter-UAV distance, m
    #[arg(long)]
    pub d: Option<f64>,

    /// Horizontal transmitter-UAV distance, m; enables the blockage chain
    #[arg(long)]
    pub r2d: Option<f64>,

    /// UAV height, m
    #[arg(long, default_value_t = 120.0)]
    pub h_d: f64,

    /// Transmitter height, m
    #[arg(long, default_value_t = 1.7)]
    pub h_r: f64,

    /// Human-blocker density, 1/m^2
    #[arg(long, default_value_t = 0.0)]
    pub lambda: f64,

    /// Blocker diameter, m
    #[arg(long, default_value_t = 0.5)]
    pub g_b: f64,

    /// Blocker height, m
    #[arg(long, default_value_t = 1.8)]
    pub h_b: f64,

    /// Transmit power, dBm
    #[arg(long, default_value_t = 40.0)]
    pub p_t: f64,

    /// Transmit antenna gain, dB
    #[arg(long, default_value_t = 0.0)]
    pub g_t: f64,

    /// Receive antenna gain, dB
    #[arg(long, default_value_t = 0.0)]
    pub g_r: f64,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("reference").args(["env", "freq"]).multiple(true)))]
pub struct FitArgs {
    /// Measurement CSV with header distance_m,path_loss_db,link_type
    pub input: PathBuf,

    /// Compare against this environment's table entry (needs --freq)
    #[arg(long, value_parser = parse_env, requires = "freq")]
    pub env: Option<Environment>,

    /// Compare against this band's table entry (needs --env)
    #[arg(long, value_parser = parse_band, requires = "env")]
    pub freq: Option<FrequencyBand>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Layer {
    Mean,
    Outage,
}

#[derive(Debug, Args)]
pub struct MapArgs {
    /// Scenario config (JSON)
    pub config: PathBuf,

    /// Raster CSV output path
    #[arg(long, short)]
    pub output: PathBuf,

    #[arg(long, value_enum, default_value_t = Layer::Mean)]
    pub layer: Layer,

    /// Also write a PPM image (linear blue-to-red ramp over the layer range)
    #[arg(long)]
    pub ppm: Option<PathBuf>,

    /// Worker threads for cell evaluation (default: all cores)
    #[arg(long)]
    pub threads: Option<usize>,
}

#[derive(Debug, Args)]
pub struct TablesArgs {
    #[arg(long, value_parser = parse_env)]
    pub env: Option<Environment>,

    #[arg(long, value_parser = parse_band)]
    pub freq: Option<FrequencyBand>,

    #[arg(long, value_parser = parse_link)]
    pub link: Option<LinkType>,
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    #[arg(long, value_parser = parse_env)]
    pub env: Environment,

    #[arg(long, value_parser = parse_band)]
    pub freq: FrequencyBand,

    /// Samples per link type
    #[arg(long, default_value_t = 1000)]
    pub n: usize,

    #[arg(long, default_value_t = 200.0)]
    pub d_min: f64,

    #[arg(long, default_value_t = 500.0)]
    pub d_max: f64,

    /// Measurement CSV output path
    #[arg(long, short)]
    pub output: PathBuf,
}

#[derive(Debug, Args)]
pub struct ConfigArgs {
    #[arg(long, value_parser = parse_env, default_value = "urban")]
    pub env: Environment,

    #[arg(long, value_parser = parse_band, default_value = "28")]
    pub freq: FrequencyBand,
}
