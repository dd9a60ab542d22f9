use std::fs::{self, File};
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use mocrop::bench::{bench_backends, random_map, BackendTiming};
use mocrop::density::{md_map_gray, MotionRng};
use mocrop::eval::{evaluate_clip, summarize};
use mocrop::ingest::{parse_sidecar, read_ppm, write_binary, write_jsonl, write_pgm, write_ppm, Frame};
use mocrop::search::{enumerate_shapes, SearchBackend, ShapeSet};
use mocrop::synth::{gen_synthetic, Placement, Scenario, SynthSpec};
use mocrop::{crop_clip, ClipMotionField, FrameSize, GridSpec, PipelineError, PixelBox};
use rayon::prelude::*;

use crate::error::{CliError, CliResult};
use crate::{BenchArgs, BoxArgs, CropArgs, EvalArgs, MapArgs, PlacementArg, SidecarFormat, SynthArgs};

fn read_sidecar(path: &Path) -> CliResult<ClipMotionField> {
    let file = File::open(path).map_err(|e| CliError::cannot_open(path, e))?;
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    parse_sidecar(BufReader::new(file), &stem).map_err(|e| CliError::ingest(path, e))
}

fn write_file(path: &Path, bytes: &[u8]) -> CliResult<()> {
    fs::write(path, bytes).map_err(|e| CliError::cannot_write(path, e))
}

/// Writes to `out` or, when absent, stdout.
fn emit(out: Option<&Path>, bytes: &[u8]) -> CliResult<()> {
    match out {
        Some(path) => write_file(path, bytes),
        None => io::stdout()
            .lock()
            .write_all(bytes)
            .map_err(|e| CliError::input(format!("cannot write stdout: {e}"))),
    }
}

fn create_dir(path: &Path) -> CliResult<()> {
    fs::create_dir_all(path).map_err(|e| CliError::cannot_write(path, e))
}

fn pool(jobs: usize) -> CliResult<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| CliError::internal(format!("cannot start worker pool: {e}")))
}

fn parse_pair(s: &str, what: &str) -> CliResult<(f64, f64)> {
    let bad = || CliError::input(format!("invalid {what} {s:?}, expected A,B"));
    let (a, b) = s.split_once(',').ok_or_else(bad)?;
    Ok((a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?))
}

fn parse_box(s: &str) -> CliResult<PixelBox> {
    let bad = || CliError::input(format!("invalid box {s:?}, expected X1,Y1,X2,Y2"));
    let v: Vec<u32> = s.split(',').map(|p| p.trim().parse().map_err(|_| bad())).collect::<CliResult<_>>()?;
    match v[..] {
        [x1, y1, x2, y2] => Ok(PixelBox::new(x1, y1, x2, y2)),
        _ => Err(bad()),
    }
}

pub fn cmd_box(args: BoxArgs) -> CliResult<()> {
    let mocrop = args.config.build()?;
    if args.sidecars.len() > 1 && args.out_dir.is_none() {
        return Err(CliError::input("several sidecars need --out-dir"));
    }
    let Some(dir) = &args.out_dir else {
        let field = read_sidecar(&args.sidecars[0])?;
        let decision = mocrop.run(&field)?;
        return emit(args.out.as_deref(), decision.to_text().as_bytes());
    };
    create_dir(dir)?;
    let one = |path: &PathBuf| -> CliResult<()> {
        let decision = mocrop.run(&read_sidecar(path)?)?;
        let stem = path.file_stem().unwrap_or(path.as_os_str());
        write_file(&dir.join(stem).with_extension("txt"), decision.to_text().as_bytes())
    };
    let results: Vec<CliResult<()>> = pool(args.jobs)?.install(|| args.sidecars.par_iter().map(one).collect());
    let failures: Vec<CliError> = results.into_iter().filter_map(Result::err).collect();
    for f in &failures {
        eprintln!("mocrop: {f}");
    }
    match failures.iter().map(|f| f.kind).max() {
        None => Ok(()),
        Some(kind) => Err(CliError {
            kind,
            message: format!("{} of {} clips failed", failures.len(), args.sidecars.len()),
        }),
    }
}

fn list_frames(dir: &Path) -> CliResult<Vec<PathBuf>> {
    let entries = fs::read_dir(dir).map_err(|e| CliError::cannot_open(dir, e))?;
    let mut paths = Vec::new();
    for entry in entries {
        let path = entry.map_err(|e| CliError::cannot_open(dir, e))?.path();
        if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("ppm")) {
            paths.push(path);
        }
    }
    paths.sort();
    Ok(paths)
}

fn read_frame(path: &Path) -> CliResult<Frame> {
    let file = File::open(path).map_err(|e| CliError::cannot_open(path, e))?;
    read_ppm(BufReader::new(file)).map_err(|e| CliError::ingest(path, e))
}

pub fn cmd_crop(args: CropArgs) -> CliResult<()> {
    let mocrop = args.config.build()?;
    let field = read_sidecar(&args.sidecar)?;
    let paths = list_frames(&args.frames)?;
    let frames = paths.iter().map(|p| read_frame(p)).collect::<CliResult<Vec<_>>>()?;
    let decision = mocrop.run(&field)?;
    let cropped = crop_clip(&frames, &decision, field.frame_size()).map_err(|e| match e {
        PipelineError::FrameMismatch { index, .. } => CliError::validation(format!("{}: {e}", paths[index].display())),
        other => other.into(),
    })?;
    create_dir(&args.out_dir)?;
    for (path, frame) in paths.iter().zip(&cropped) {
        let target = args.out_dir.join(path.file_name().expect("listed files have names"));
        let mut bytes = Vec::new();
        write_ppm(frame, &mut bytes).expect("writing to a Vec cannot fail");
        write_file(&target, &bytes)?;
    }
    write_file(&args.out_dir.join("decision.txt"), decision.to_text().as_bytes())
}

pub fn cmd_map(args: MapArgs) -> CliResult<()> {
    if args.scale == 0 {
        return Err(CliError::input("--scale must be positive"));
    }
    let mocrop = args.config.build()?;
    let map = mocrop.density_map(&read_sidecar(&args.sidecar)?);
    let grid = map.grid();
    let gray = md_map_gray(&map);
    let s = args.scale as usize;
    let (w, h) = (grid.cols() * s, grid.rows() * s);
    let pixels: Vec<u8> = (0..h).flat_map(|y| (0..w).map(move |x| (y / s, x / s))).map(|(r, c)| gray[r * grid.cols() + c]).collect();
    let mut bytes = Vec::new();
    write_pgm(w as u32, h as u32, &pixels, &mut bytes).expect("writing to a Vec cannot fail");
    emit(args.out.as_deref(), &bytes)
}

pub fn cmd_synth(args: SynthArgs) -> CliResult<()> {
    if args.width == 0 || args.height == 0 {
        return Err(CliError::validation("frame size must be positive"));
    }
    let frame = FrameSize::new(args.width, args.height);
    let actor_box = match &args.actor {
        Some(s) => parse_box(s)?,
        None => Scenario { frame_size: frame, ..Default::default() }.specs(1, args.seed)[0].actor_box,
    };
    if !actor_box.is_valid_in(frame) {
        return Err(CliError::validation(format!("actor box {actor_box:?} does not fit a {}x{} frame", frame.width, frame.height)));
    }
    let spec = SynthSpec {
        frame_size: frame,
        num_frames: args.frames,
        actor_box,
        actor_mvs_per_frame: args.actor_mvs,
        noise_mvs_per_frame: args.noise_mvs,
        camera_pan: parse_pair(&args.pan, "pan")?,
        seed: args.seed,
    };
    let clip = gen_synthetic(&spec);
    let frames_dir = args.out_dir.join("frames");
    create_dir(&frames_dir)?;

    let mut sidecar = Vec::new();
    let name = match args.format {
        SidecarFormat::Jsonl => {
            write_jsonl(&clip.field, &mut sidecar).expect("writing to a Vec cannot fail");
            "clip.jsonl"
        }
        SidecarFormat::Binary => {
            write_binary(&clip.field, &mut sidecar).expect("writing to a Vec cannot fail");
            "clip.mvs"
        }
    };
    write_file(&args.out_dir.join(name), &sidecar)?;
    for (i, f) in clip.frames.iter().enumerate() {
        let mut bytes = Vec::new();
        write_ppm(f, &mut bytes).expect("writing to a Vec cannot fail");
        write_file(&frames_dir.join(format!("frame_{i:04}.ppm")), &bytes)?;
    }
    let t = clip.truth;
    write_file(&args.out_dir.join("truth.txt"), format!("truth {} {} {} {}\n", t.x1, t.y1, t.x2, t.y2).as_bytes())?;
    let spec_line = serde_json::to_string(&spec).expect("spec serializes") + "\n";
    write_file(&args.out_dir.join("spec.json"), spec_line.as_bytes())
}

fn read_manifest(path: &Path) -> CliResult<Vec<SynthSpec>> {
    let text = fs::read_to_string(path).map_err(|e| CliError::cannot_open(path, e))?;
    let mut specs = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let spec: SynthSpec = serde_json::from_str(line)
            .map_err(|e| CliError::input(format!("{}:{}: {e}", path.display(), i + 1)))?;
        if !spec.actor_box.is_valid_in(spec.frame_size) {
            return Err(CliError::validation(format!("{}:{}: actor box outside the frame", path.display(), i + 1)));
        }
        specs.push(spec);
    }
    Ok(specs)
}

pub fn cmd_eval(args: EvalArgs) -> CliResult<()> {
    let mocrop = args.config.build()?;
    let specs = match (&args.manifest, args.generate) {
        (Some(path), _) => read_manifest(path)?,
        (None, Some(count)) => {
            if args.width == 0 || args.height == 0 || !(args.actor_fraction > 0.0 && args.actor_fraction <= 1.0) {
                return Err(CliError::validation("frame size must be positive and actor fraction in (0, 1]"));
            }
            let placement = match args.placement {
                PlacementArg::Centered => Placement::Centered,
                PlacementArg::OuterHalf => Placement::OuterHalf,
                PlacementArg::Anywhere => Placement::Anywhere,
            };
            Scenario {
                frame_size: FrameSize::new(args.width, args.height),
                num_frames: args.frames,
                actor_fraction: args.actor_fraction,
                actor_mvs_per_frame: args.actor_mvs,
                noise_mvs_per_frame: args.noise_mvs,
                camera_pan: parse_pair(&args.pan, "pan")?,
                placement,
            }
            .specs(count, args.clips_seed)
        }
        (None, None) => unreachable!("clap requires --manifest or --generate"),
    };
    let clips = pool(args.jobs)?.install(|| specs.par_iter().map(|s| evaluate_clip(s, &mocrop)).collect::<Result<Vec<_>, _>>())?;
    let report = summarize(clips, mocrop.config());
    emit(args.out.as_deref(), report.to_text().as_bytes())
}

const BENCH_GRIDS: [(usize, usize); 3] = [(6, 8), (12, 16), (24, 32)];

fn timing_lines(out: &mut impl Write, grid: GridSpec, set: &str, shapes: &ShapeSet, rows: &[BackendTiming]) -> io::Result<()> {
    for t in rows {
        writeln!(
            out,
            "time grid {grid} shapes {set}:{} backend {} median_us {:.3}",
            shapes.len(),
            t.backend.name(),
            t.median.as_secs_f64() * 1e6
        )?;
    }
    Ok(())
}

pub fn cmd_bench(args: BenchArgs) -> CliResult<()> {
    let mut rng = MotionRng::seed_from_u64(args.seed);
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    let io_err = |e: io::Error| CliError::input(format!("cannot write stdout: {e}"));
    for (r, c) in BENCH_GRIDS {
        let grid = GridSpec::new(r, c)?;
        let shapes = enumerate_shapes(grid, args.alpha, args.delta)?;
        let maps: Vec<_> = (0..args.maps).map(|_| random_map(grid, args.max_count, &mut rng)).collect();
        let single = ShapeSet::single(grid, shapes.shapes()[0]);
        for (set, shape_set) in [("band", &shapes), ("single", &single)] {
            let rows = bench_backends(&maps, shape_set, args.runs as usize).map_err(|d| {
                let boxes: Vec<String> = d
                    .results
                    .iter()
                    .map(|(b, r)| format!("{} {:?} score {}", b.name(), r.grid_box, r.score))
                    .collect();
                CliError::internal(format!("backends disagree on a {grid} map: {}", boxes.join("; ")))
            })?;
            timing_lines(&mut out, grid, set, shape_set, &rows).map_err(io_err)?;
        }
        let best = SearchBackend::Integral.search(&maps[0], &shapes);
        let b = best.grid_box;
        writeln!(out, "result grid {grid} map 0 box {} {} {} {} score {}", b.row, b.col, b.height, b.width, best.score)
            .map_err(io_err)?;
    }
    out.flush().map_err(io_err)
}
