//! `mocrop`: clip-level adaptive crops from motion-vector sidecars.

mod commands;
mod config;
mod error;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use config::ConfigArgs;

#[derive(Parser, Debug)]
#[command(name = "mocrop", version, about = "Motion-guided clip-level cropping")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compute the crop decision for one or more sidecars.
    Box(BoxArgs),
    /// Crop a directory of PPM frames with the clip's decision.
    Crop(CropArgs),
    /// Render the motion-density map as a PGM.
    Map(MapArgs),
    /// Generate a synthetic clip with a known actor box.
    Synth(SynthArgs),
    /// Compare adaptive, center and random crops on synthetic clips.
    Eval(EvalArgs),
    /// Time the three search backends on random maps.
    Bench(BenchArgs),
}

#[derive(Args, Debug)]
pub struct BoxArgs {
    /// Sidecar files (JSONL or MVS1 binary).
    #[arg(required = true)]
    sidecars: Vec<PathBuf>,
    /// Output file for a single sidecar; stdout when absent.
    #[arg(long, conflicts_with = "out_dir")]
    out: Option<PathBuf>,
    /// Directory receiving `<stem>.txt` per sidecar.
    #[arg(long)]
    out_dir: Option<PathBuf>,
    /// Worker threads for multiple sidecars.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    #[command(flatten)]
    config: ConfigArgs,
}

#[derive(Args, Debug)]
pub struct CropArgs {
    sidecar: PathBuf,
    /// Directory of `.ppm` frames, processed in file-name order.
    #[arg(long)]
    frames: PathBuf,
    #[arg(long)]
    out_dir: PathBuf,
    #[command(flatten)]
    config: ConfigArgs,
}

#[derive(Args, Debug)]
pub struct MapArgs {
    sidecar: PathBuf,
    /// Output PGM; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Pixels per cell side.
    #[arg(long, default_value_t = 1)]
    scale: u32,
    #[command(flatten)]
    config: ConfigArgs,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum SidecarFormat {
    Jsonl,
    Binary,
}

#[derive(Args, Debug)]
pub struct SynthArgs {
    #[arg(long)]
    out_dir: PathBuf,
    #[arg(long, default_value_t = 320)]
    width: u32,
    #[arg(long, default_value_t = 240)]
    height: u32,
    #[arg(long, default_value_t = 8)]
    frames: u32,
    /// Actor box as X1,Y1,X2,Y2; placed in the outer half of the frame when absent.
    #[arg(long, value_name = "X1,Y1,X2,Y2")]
    actor: Option<String>,
    #[arg(long, default_value_t = 48)]
    actor_mvs: u32,
    #[arg(long, default_value_t = 16)]
    noise_mvs: u32,
    /// Camera pan added to every displacement, as DX,DY.
    #[arg(long, value_name = "DX,DY", default_value = "0,0")]
    pan: String,
    #[arg(long, env = "MOCROP_SEED", default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = SidecarFormat::Jsonl)]
    format: SidecarFormat,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum PlacementArg {
    Centered,
    OuterHalf,
    Anywhere,
}

#[derive(Args, Debug)]
pub struct EvalArgs {
    /// JSONL file with one synthetic clip spec per line.
    #[arg(long, required_unless_present = "generate", conflicts_with = "generate")]
    manifest: Option<PathBuf>,
    /// Generate this many clip specs instead of reading a manifest.
    #[arg(long, value_name = "COUNT")]
    generate: Option<usize>,
    #[arg(long, value_enum, default_value_t = PlacementArg::OuterHalf)]
    placement: PlacementArg,
    /// Actor side as a fraction of the frame side.
    #[arg(long, default_value_t = 0.6)]
    actor_fraction: f64,
    #[arg(long, default_value_t = 320)]
    width: u32,
    #[arg(long, default_value_t = 240)]
    height: u32,
    #[arg(long, default_value_t = 8)]
    frames: u32,
    #[arg(long, default_value_t = 48)]
    actor_mvs: u32,
    #[arg(long, default_value_t = 16)]
    noise_mvs: u32,
    #[arg(long, value_name = "DX,DY", default_value = "0,0")]
    pan: String,
    /// Seed for generated clip specs.
    #[arg(long, default_value_t = 0)]
    clips_seed: u64,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    config: ConfigArgs,
}

#[derive(Args, Debug)]
pub struct BenchArgs {
    /// Timed calls per backend and grid.
    #[arg(long, default_value_t = 101, value_parser = clap::value_parser!(u64).range(1..))]
    runs: u64,
    /// Random maps cycled through while timing.
    #[arg(long, default_value_t = 16, value_parser = clap::value_parser!(u64).range(1..))]
    maps: u64,
    /// Largest cell count in random maps.
    #[arg(long, default_value_t = 20)]
    max_count: u64,
    #[arg(long, default_value_t = 0.75)]
    alpha: f64,
    #[arg(long, default_value_t = 0.1)]
    delta: f64,
    #[arg(long, env = "MOCROP_SEED", default_value_t = 0)]
    seed: u64,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Box(a) => commands::cmd_box(a),
        Command::Crop(a) => commands::cmd_crop(a),
        Command::Map(a) => commands::cmd_map(a),
        Command::Synth(a) => commands::cmd_synth(a),
        Command::Eval(a) => commands::cmd_eval(a),
        Command::Bench(a) => commands::cmd_bench(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("mocrop: {e}");
            e.exit_code()
        }
    }
}
