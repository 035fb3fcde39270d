//! Command-line interface.
//!
//! Results are JSON on stdout; logs and errors go to stderr. Every
//! subcommand is deterministic given its flags — all randomness flows from
//! `--seed`. Exit codes: 0 success, 1 usage error, 2 data or I/O error.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use timelayer_core::diagnostics::{
    compare_checkpoints, evaluate_sweep_cells, split_indices_grouped, sweep_cells, sweep_csv,
    SweepConfig,
};
use timelayer_core::masking::{apply_mask, generate_tube_mask};
use timelayer_core::probe::{evaluate, train, TrainConfig};
use timelayer_core::synth::{Direction, DirectionDataset};
use timelayer_core::transform::{Arrangement, AugmentSpec, CropRect, TimeConfig};
use timelayer_core::{extract_cells, time_transform};

use crate::error::ToolError;
use crate::io::{
    self, read_archive, read_labels, read_video_dir, write_labels, write_mask, write_video_dir,
    ImageFormat,
};
use crate::parallel::{self, DiskDataset};

#[derive(Parser)]
#[command(
    name = "timelayer",
    about = "Rearrange video frames into N x N temporal grids, plus masking, \
             probing, and checkpoint-diff tools",
    after_help = "Set TIME_THREADS to cap internal parallelism (0 = automatic)."
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Rearrange an image-sequence video into grid frames.
    #[command(after_help = "Output JSON keys: input_frames, adjusted_length, cell_height, \
                            cell_width, output_frames, output_height, output_width, channels, \
                            out_dir.")]
    Transform(TransformArgs),
    /// Invert a transform exactly (grid side must divide the frame size).
    #[command(after_help = "Output JSON keys: frames_written, cell_height, cell_width, out_dir.")]
    Extract(ExtractArgs),
    /// Generate (and optionally apply) a tube mask.
    #[command(after_help = "Output JSON keys: patch_rows, patch_cols, t_steps, requested_ratio, \
                            masked, total, achieved_ratio, out. The mask file is JSON when --out \
                            ends in .json, PBM otherwise.")]
    Mask(MaskArgs),
    /// Generate the synthetic motion-direction dataset.
    #[command(after_help = "Output JSON keys: samples, frames, size, out_dir, labels. Writes \
                            one PGM frame directory per sample plus labels.csv; samples 2k and \
                            2k+1 are mirror twins.")]
    Synth(SynthArgs),
    /// Train and evaluate the single-frame probe on a labeled dataset.
    #[command(after_help = "Output JSON keys: n, arrangement, probe_size, train_samples, \
                            test_samples, train_accuracy, test_accuracy, test_class_accuracy.")]
    Probe(ProbeArgs),
    /// Per-layer cosine similarity between two tensor archives.
    #[command(after_help = "Output JSON keys: rows, unmatched_a, unmatched_b, out. The CSV has \
                            header layer,cosine_similarity,elements.")]
    Diff(DiffArgs),
    /// Probe accuracy across grid sides and arrangements.
    #[command(after_help = "Output JSON keys: rows, out. The CSV has header \
                            n,arrangement,accuracy.")]
    Sweep(SweepArgs),
}

#[derive(Args)]
struct TransformArgs {
    /// Input directory of frames (png/pgm/ppm).
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long = "out")]
    output: PathBuf,
    /// Grid side (the spatial-temporal balance).
    #[arg(long)]
    n: usize,
    /// Output frame count.
    #[arg(long = "t-star", default_value_t = 16)]
    t_star: usize,
    #[arg(long, default_value_t = 224)]
    height: usize,
    #[arg(long, default_value_t = 224)]
    width: usize,
    #[arg(long, default_value = "spatial", value_parser = parse_arrangement)]
    arrangement: Arrangement,
    /// Mirror frames horizontally.
    #[arg(long)]
    flip: bool,
    /// Crop rectangle top,left,height,width (applied after --scale).
    #[arg(long, value_parser = parse_crop)]
    crop: Option<CropRect>,
    /// Quarter turns clockwise (0-3).
    #[arg(long, default_value_t = 0)]
    rotate: u8,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value = "png", value_parser = parse_format)]
    format: ImageFormat,
}

#[derive(Args)]
struct ExtractArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long = "out")]
    output: PathBuf,
    #[arg(long)]
    n: usize,
    #[arg(long = "t-star", default_value_t = 16)]
    t_star: usize,
    #[arg(long, default_value = "spatial", value_parser = parse_arrangement)]
    arrangement: Arrangement,
    #[arg(long, default_value = "png", value_parser = parse_format)]
    format: ImageFormat,
}

#[derive(Args)]
struct MaskArgs {
    #[arg(long, default_value_t = 14)]
    rows: usize,
    #[arg(long, default_value_t = 14)]
    cols: usize,
    /// Time steps the mask replicates across.
    #[arg(long, default_value_t = 16)]
    t: usize,
    /// Fraction of spatial patches to mask.
    #[arg(long)]
    ratio: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Mask file (.json for JSON, anything else for PBM).
    #[arg(long = "out")]
    output: PathBuf,
    /// Apply the mask to the video in this directory.
    #[arg(long)]
    apply: Option<PathBuf>,
    /// Where masked frames go (required with --apply).
    #[arg(long = "apply-out", requires = "apply")]
    apply_out: Option<PathBuf>,
    /// Fill value for masked pixels.
    #[arg(long, default_value_t = 0.0)]
    fill: f32,
    #[arg(long, default_value = "png", value_parser = parse_format)]
    format: ImageFormat,
}

#[derive(Args)]
struct SynthArgs {
    #[arg(long = "out")]
    output: PathBuf,
    #[arg(long, default_value_t = 2000)]
    samples: usize,
    /// Square frame size in pixels.
    #[arg(long, default_value_t = 64)]
    size: usize,
    /// Frames per sample.
    #[arg(long, default_value_t = 32)]
    frames: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
}

#[derive(Args)]
struct ProbeArgs {
    /// Dataset root: one frame directory per sample.
    #[arg(long)]
    data: PathBuf,
    /// labels.csv mapping sample directory names to labels.
    #[arg(long)]
    labels: PathBuf,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value = "spatial", value_parser = parse_arrangement)]
    arrangement: Arrangement,
    #[arg(long = "probe-size", default_value_t = 32)]
    probe_size: usize,
    #[arg(long, default_value_t = 200)]
    epochs: usize,
    #[arg(long, default_value_t = 0.1)]
    lr: f64,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Save the trained model as an NTA1 archive.
    #[arg(long)]
    save: Option<PathBuf>,
}

#[derive(Args)]
struct DiffArgs {
    #[arg(long)]
    a: PathBuf,
    #[arg(long)]
    b: PathBuf,
    /// Report CSV path.
    #[arg(long = "out")]
    output: PathBuf,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long)]
    data: PathBuf,
    #[arg(long)]
    labels: PathBuf,
    /// Comma-separated grid sides.
    #[arg(long = "n-list", default_value = "1,2,4", value_delimiter = ',')]
    n_list: Vec<usize>,
    /// Comma-separated arrangements.
    #[arg(
        long,
        default_value = "spatial,temporal",
        value_delimiter = ',',
        value_parser = parse_arrangement
    )]
    arrangements: Vec<Arrangement>,
    #[arg(long = "out")]
    output: PathBuf,
    #[arg(long, default_value_t = 42)]
    seed: u64,
}

fn parse_arrangement(s: &str) -> Result<Arrangement, String> {
    match s {
        "spatial" => Ok(Arrangement::Spatial),
        "temporal" => Ok(Arrangement::Temporal),
        _ => Err(format!("unknown arrangement {s:?} (expected spatial or temporal)")),
    }
}

fn parse_format(s: &str) -> Result<ImageFormat, String> {
    ImageFormat::parse(s).ok_or_else(|| format!("unknown format {s:?} (expected png, ppm, or pgm)"))
}

fn parse_crop(s: &str) -> Result<CropRect, String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 4 {
        return Err("crop must be top,left,height,width".into());
    }
    let mut values = [0usize; 4];
    for (v, p) in values.iter_mut().zip(&parts) {
        *v = p.trim().parse().map_err(|_| format!("invalid crop component {p:?}"))?;
    }
    Ok(CropRect { top: values[0], left: values[1], height: values[2], width: values[3] })
}

/// Parses argv and runs; returns the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return 0;
            }
            eprint!("{e}");
            return 1;
        }
    };
    if let Err(e) = parallel::init_thread_pool_from_env() {
        eprintln!("error: {e}");
        return e.exit_code();
    }
    match dispatch(cli.command) {
        Ok(report) => {
            println!("{report}");
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn dispatch(command: Command) -> Result<String, ToolError> {
    match command {
        Command::Transform(args) => cmd_transform(args),
        Command::Extract(args) => cmd_extract(args),
        Command::Mask(args) => cmd_mask(args),
        Command::Synth(args) => cmd_synth(args),
        Command::Probe(args) => cmd_probe(args),
        Command::Diff(args) => cmd_diff(args),
        Command::Sweep(args) => cmd_sweep(args),
    }
}

fn cmd_transform(args: TransformArgs) -> Result<String, ToolError> {
    let video = read_video_dir(&args.input, "*")?;
    let mut config =
        TimeConfig::new(args.n, args.t_star, args.height, args.width, args.arrangement)?;
    if args.flip || args.crop.is_some() || args.rotate != 0 {
        config = config.with_augment(AugmentSpec {
            horizontal_flip: args.flip,
            crop: args.crop,
            rotation_quarter_turns: args.rotate,
            scale: None,
            seed: args.seed,
        })?;
    }
    let out = parallel::time_transform_parallel(&video, &config)?;
    let written = write_video_dir(&out, &args.output, args.format)?;
    let (cell_h, cell_w) = config.cell_size();
    Ok(json!({
        "input_frames": video.frame_count(),
        "adjusted_length": config.grid_frames(),
        "cell_height": cell_h,
        "cell_width": cell_w,
        "output_frames": written,
        "output_height": out.height(),
        "output_width": out.width(),
        "channels": out.channels(),
        "out_dir": args.output,
    })
    .to_string())
}

fn cmd_extract(args: ExtractArgs) -> Result<String, ToolError> {
    let video = read_video_dir(&args.input, "*")?;
    let config = TimeConfig::new(
        args.n,
        args.t_star,
        video.height(),
        video.width(),
        args.arrangement,
    )?;
    let cells = extract_cells(&video, &config)?;
    let written = write_video_dir(&cells, &args.output, args.format)?;
    Ok(json!({
        "frames_written": written,
        "cell_height": cells.height(),
        "cell_width": cells.width(),
        "out_dir": args.output,
    })
    .to_string())
}

fn cmd_mask(args: MaskArgs) -> Result<String, ToolError> {
    let mask = generate_tube_mask(args.rows, args.cols, args.t, args.ratio, args.seed)?;
    write_mask(&mask, &args.output)?;
    if let Some(apply_dir) = &args.apply {
        let out_dir = args.apply_out.as_ref().ok_or_else(|| {
            ToolError::Usage("--apply requires --apply-out for the masked frames".into())
        })?;
        let video = read_video_dir(apply_dir, "*")?;
        let masked = apply_mask(&video, &mask, args.fill)?;
        write_video_dir(&masked, out_dir, args.format)?;
    }
    let total = args.rows * args.cols;
    Ok(json!({
        "patch_rows": args.rows,
        "patch_cols": args.cols,
        "t_steps": args.t,
        "requested_ratio": args.ratio,
        "masked": mask.masked_count(),
        "total": total,
        "achieved_ratio": mask.masked_count() as f64 / total as f64,
        "out": args.output,
    })
    .to_string())
}

fn cmd_synth(args: SynthArgs) -> Result<String, ToolError> {
    let dataset = DirectionDataset::new(args.samples, args.size, args.frames, args.seed)?;
    std::fs::create_dir_all(&args.output).map_err(|e| ToolError::io(&args.output, e))?;
    let mut rows = Vec::with_capacity(args.samples);
    for i in 0..args.samples {
        let sample = dataset.generate(i);
        let name = format!("sample_{i:05}");
        write_video_dir(&sample.video, &args.output.join(&name), ImageFormat::Pgm)?;
        rows.push((name, sample.direction));
    }
    let labels_path = args.output.join("labels.csv");
    write_labels(&rows, &labels_path)?;
    Ok(json!({
        "samples": args.samples,
        "frames": args.frames,
        "size": args.size,
        "out_dir": args.output,
        "labels": labels_path,
    })
    .to_string())
}

fn load_disk_dataset(data: &PathBuf, labels: &PathBuf) -> Result<DiskDataset, ToolError> {
    let entries = read_labels(labels)?
        .into_iter()
        .map(|(name, direction)| (name, direction == Direction::LeftToRight))
        .collect();
    Ok(DiskDataset::new(data.clone(), entries))
}

fn cmd_probe(args: ProbeArgs) -> Result<String, ToolError> {
    let dataset = load_disk_dataset(&args.data, &args.labels)?;
    let sweep = SweepConfig {
        train: TrainConfig {
            learning_rate: args.lr,
            epochs: args.epochs,
            seed: args.seed,
            ..TrainConfig::default()
        },
        split_seed: args.seed,
        probe_size: args.probe_size,
        ..SweepConfig::default()
    };
    let cells = sweep_cells(&[args.n], &[args.arrangement], &sweep)?;
    let configs: Vec<TimeConfig> = cells.iter().map(|(_, _, c)| c.clone()).collect();

    // Featurize in parallel, then reproduce the harness split exactly.
    let (mut features_per_cell, labels) =
        parallel::featurize_disk(&dataset, &configs, args.probe_size)?;
    let features = features_per_cell.remove(0);
    let (train_idx, test_idx) =
        split_indices_grouped(labels.len(), sweep.split_group, sweep.split_seed);
    let gather = |idx: &[usize]| -> (Vec<Vec<f32>>, Vec<bool>) {
        (
            idx.iter().map(|&i| features[i].clone()).collect(),
            idx.iter().map(|&i| labels[i]).collect(),
        )
    };
    let (train_x, train_y) = gather(&train_idx);
    let (test_x, test_y) = gather(&test_idx);
    let model = train(&train_x, &train_y, &sweep.train)?;
    let train_eval = evaluate(&model, &train_x, &train_y)?;
    let test_eval = evaluate(&model, &test_x, &test_y)?;
    if let Some(path) = &args.save {
        io::save_model(&model, path)?;
    }
    Ok(json!({
        "n": args.n,
        "arrangement": args.arrangement.as_str(),
        "probe_size": args.probe_size,
        "train_samples": train_y.len(),
        "test_samples": test_y.len(),
        "train_accuracy": train_eval.accuracy,
        "test_accuracy": test_eval.accuracy,
        "test_class_accuracy": test_eval.class_accuracy,
    })
    .to_string())
}

fn cmd_diff(args: DiffArgs) -> Result<String, ToolError> {
    let a = read_archive(&args.a)?;
    let b = read_archive(&args.b)?;
    let report = compare_checkpoints(&a, &b)?;
    std::fs::write(&args.output, report.to_csv()).map_err(|e| ToolError::io(&args.output, e))?;
    Ok(json!({
        "rows": report.rows.len(),
        "unmatched_a": report.unmatched_a,
        "unmatched_b": report.unmatched_b,
        "out": args.output,
    })
    .to_string())
}

fn cmd_sweep(args: SweepArgs) -> Result<String, ToolError> {
    let dataset = load_disk_dataset(&args.data, &args.labels)?;
    let sweep = SweepConfig { split_seed: args.seed, ..SweepConfig::default() };
    let cells = sweep_cells(&args.n_list, &args.arrangements, &sweep)?;
    let configs: Vec<TimeConfig> = cells.iter().map(|(_, _, c)| c.clone()).collect();
    let (features, labels) = parallel::featurize_disk(&dataset, &configs, sweep.probe_size)?;
    let rows = evaluate_sweep_cells(&cells, &features, &labels, &sweep)?;
    std::fs::write(&args.output, sweep_csv(&rows)).map_err(|e| ToolError::io(&args.output, e))?;
    Ok(json!({
        "rows": rows.len(),
        "out": args.output,
    })
    .to_string())
}
