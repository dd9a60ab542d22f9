use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use mocrop::eval::iou;
use mocrop::ingest::{parse_jsonl, read_ppm, write_binary};
use mocrop::PixelBox;
use tempfile::TempDir;

fn golden() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

fn mocrop(args: &[&str]) -> Output {
    mocrop_env(args, None)
}

fn mocrop_env(args: &[&str], seed: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_mocrop"));
    cmd.args(args).env_remove("MOCROP_SEED");
    if let Some(s) = seed {
        cmd.env("MOCROP_SEED", s);
    }
    cmd.output().expect("binary runs")
}

fn ok(out: &Output) -> String {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p
}

const GOLDEN_FLAGS: [&str; 4] = ["--seed", "42", "--alpha", "0.5"];

#[test]
fn box_matches_golden() {
    let clip = golden().join("clip.jsonl");
    let out = ok(&mocrop(&[&["box", s(&clip)][..], &GOLDEN_FLAGS].concat()));
    assert_eq!(out, fs::read_to_string(golden().join("box.txt")).unwrap());
}

#[test]
fn map_matches_golden() {
    let clip = golden().join("clip.jsonl");
    let out = mocrop(&[&["map", s(&clip)][..], &GOLDEN_FLAGS].concat());
    assert!(out.status.success());
    assert_eq!(out.stdout, fs::read(golden().join("map.pgm")).unwrap());
}

#[test]
fn crop_matches_golden() {
    let tmp = TempDir::new().unwrap();
    let clip = golden().join("clip.jsonl");
    let frames = golden().join("frames");
    ok(&mocrop(&[&["crop", s(&clip), "--frames", s(&frames), "--out-dir", s(tmp.path())][..], &GOLDEN_FLAGS].concat()));
    let expected = golden().join("crop");
    let mut names: Vec<_> = fs::read_dir(&expected).unwrap().map(|e| e.unwrap().file_name()).collect();
    names.sort();
    assert_eq!(names.len(), 4);
    for name in names {
        assert_eq!(fs::read(tmp.path().join(&name)).unwrap(), fs::read(expected.join(&name)).unwrap(), "{name:?}");
    }
}

#[test]
fn missing_file_exits_2() {
    let out = mocrop(&["box", "/definitely/not/here.jsonl"]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("cannot open"));
}

#[test]
fn malformed_sidecar_exits_2_and_out_of_bounds_exits_3() {
    let tmp = TempDir::new().unwrap();
    let bad = write(tmp.path(), "bad.jsonl", "{\"width\":10,\"height\":10}\nnot json\n");
    assert_eq!(code(&mocrop(&["box", s(&bad)])), 2);
    let oob = write(tmp.path(), "oob.jsonl", "{\"width\":10,\"height\":10}\n{\"f\":0,\"x\":10,\"y\":1,\"dx\":1,\"dy\":1}\n");
    let out = mocrop(&["box", s(&oob)]);
    assert_eq!(code(&out), 3);
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
}

#[test]
fn invalid_config_exits_3() {
    let clip = golden().join("clip.jsonl");
    assert_eq!(code(&mocrop(&["box", s(&clip), "--alpha", "1.5"])), 3);
    assert_eq!(code(&mocrop(&["box", s(&clip), "--grid", "0x8"])), 3);
}

#[test]
fn empty_sidecar_falls_back() {
    let tmp = TempDir::new().unwrap();
    let empty = write(tmp.path(), "empty.jsonl", "{\"clip_id\":\"e\",\"width\":224,\"height\":224}\n");
    let out = ok(&mocrop(&["box", s(&empty), "--epsilon", "0", "--no-mcs"]));
    assert!(out.starts_with("mode center_fallback\n"), "{out}");
    assert!(out.ends_with("score 0\n"));
}

#[test]
fn identity_crop_copies_frames() {
    let tmp = TempDir::new().unwrap();
    let clip = golden().join("clip.jsonl");
    let frames = golden().join("frames");
    ok(&mocrop(&["crop", s(&clip), "--frames", s(&frames), "--out-dir", s(tmp.path()), "--alpha", "1", "--delta", "0"]));
    for i in 0..3 {
        let name = format!("frame_{i:04}.ppm");
        assert_eq!(fs::read(tmp.path().join(&name)).unwrap(), fs::read(frames.join(&name)).unwrap());
    }
}

#[test]
fn mismatched_frame_exits_3_naming_it() {
    let tmp = TempDir::new().unwrap();
    let frames = tmp.path().join("frames");
    fs::create_dir(&frames).unwrap();
    for i in 0..3 {
        let name = format!("frame_{i:04}.ppm");
        fs::copy(golden().join("frames").join(&name), frames.join(&name)).unwrap();
    }
    let mut odd = b"P6\n65 48\n255\n".to_vec();
    odd.extend(vec![0u8; 65 * 48 * 3]);
    fs::write(frames.join("frame_0001.ppm"), odd).unwrap();
    let clip = golden().join("clip.jsonl");
    let out = mocrop(&["crop", s(&clip), "--frames", s(&frames), "--out-dir", s(&tmp.path().join("o"))]);
    assert_eq!(code(&out), 3);
    assert!(String::from_utf8_lossy(&out.stderr).contains("frame_0001.ppm"));
}

fn pgm_pixels(bytes: &[u8]) -> &[u8] {
    let header = b"P5\n8 6\n255\n";
    assert!(bytes.starts_with(header));
    &bytes[header.len()..]
}

#[test]
fn zero_clip_map_is_black() {
    let tmp = TempDir::new().unwrap();
    let mut text = String::from("{\"width\":80,\"height\":60}\n");
    for k in 0..30 {
        text.push_str(&format!("{{\"f\":0,\"x\":{k},\"y\":{k},\"dx\":0,\"dy\":0}}\n"));
    }
    let clip = write(tmp.path(), "zero.jsonl", &text);
    let out = mocrop(&["map", s(&clip), "--epsilon", "0"]);
    assert!(out.status.success());
    assert!(pgm_pixels(&out.stdout).iter().all(|&p| p == 0));
}

#[test]
fn hot_cell_map_has_one_bright_cell() {
    let tmp = TempDir::new().unwrap();
    let mut text = String::from("{\"width\":80,\"height\":60}\n");
    for k in 0..30 {
        text.push_str(&format!("{{\"f\":0,\"x\":{},\"y\":{},\"dx\":3,\"dy\":4}}\n", 31 + k % 5, 21 + k / 5));
    }
    let clip = write(tmp.path(), "hot.jsonl", &text);
    let out = mocrop(&["map", s(&clip), "--epsilon", "1"]);
    let px = pgm_pixels(&out.stdout);
    assert_eq!(px.iter().filter(|&&p| p != 0).count(), 1);
    assert_eq!(px[2 * 8 + 3], 255);

    let big = mocrop(&["map", s(&clip), "--epsilon", "1", "--scale", "4"]);
    assert!(big.stdout.starts_with(b"P5\n32 24\n255\n"));
    assert_eq!(big.stdout.iter().skip(13).filter(|&&p| p == 255).count(), 16);
}

#[test]
fn synth_is_deterministic_and_round_trips() {
    let tmp = TempDir::new().unwrap();
    let (a, b) = (tmp.path().join("a"), tmp.path().join("b"));
    for dir in [&a, &b] {
        ok(&mocrop(&["synth", "--out-dir", s(dir), "--seed", "11", "--width", "160", "--height", "120", "--frames", "2"]));
    }
    for name in ["clip.jsonl", "truth.txt", "spec.json", "frames/frame_0000.ppm", "frames/frame_0001.ppm"] {
        assert_eq!(fs::read(a.join(name)).unwrap(), fs::read(b.join(name)).unwrap(), "{name}");
    }
    let truth: Vec<u32> = fs::read_to_string(a.join("truth.txt")).unwrap().split_whitespace().skip(1).map(|t| t.parse().unwrap()).collect();
    let truth = PixelBox::new(truth[0], truth[1], truth[2], truth[3]);
    let text = ok(&mocrop(&["box", s(&a.join("clip.jsonl")), "--alpha", "0.5"]));
    let p: Vec<u32> = text.lines().nth(2).unwrap().split_whitespace().skip(1).map(|t| t.parse().unwrap()).collect();
    assert!(iou(&PixelBox::new(p[0], p[1], p[2], p[3]), &truth) > 0.5, "{text}");

    let frame = read_ppm(fs::File::open(a.join("frames/frame_0000.ppm")).unwrap()).unwrap();
    assert_eq!((frame.width, frame.height), (160, 120));
}

#[test]
fn actor_only_synth_origins_lie_in_truth() {
    let tmp = TempDir::new().unwrap();
    ok(&mocrop(&["synth", "--out-dir", s(tmp.path()), "--width", "100", "--height", "80", "--actor", "10,20,40,70", "--noise-mvs", "0", "--frames", "3"]));
    let field = parse_jsonl(fs::File::open(tmp.path().join("clip.jsonl")).unwrap()).unwrap();
    assert_eq!(field.len(), 3 * 48);
    assert!(field.vectors().iter().all(|v| (10.0..40.0).contains(&v.x) && (20.0..70.0).contains(&v.y)));
    let bad = mocrop(&["synth", "--out-dir", s(tmp.path()), "--width", "100", "--height", "80", "--actor", "10,20,400,70"]);
    assert_eq!(code(&bad), 3);
}

#[test]
fn binary_synth_sidecar_is_accepted() {
    let tmp = TempDir::new().unwrap();
    ok(&mocrop(&["synth", "--out-dir", s(tmp.path()), "--format", "binary", "--seed", "3"]));
    let out = ok(&mocrop(&["box", s(&tmp.path().join("clip.mvs"))]));
    assert!(out.starts_with("mode adaptive\n"));
}

#[test]
fn seed_precedence() {
    let tmp = TempDir::new().unwrap();
    let clip = golden().join("clip.jsonl");
    let run = |extra: &[&str], env: Option<&str>| ok(&mocrop_env(&[&["box", s(&clip), "--samples", "10"][..], extra].concat(), env));
    let cfg = write(tmp.path(), "a.cfg", "seed = 5\nsamples = 10\n");
    let by_flag = run(&["--seed", "5"], None);
    assert_eq!(run(&[], Some("5")), by_flag);
    assert_eq!(run(&["--config", s(&cfg)], None), by_flag);
    assert_eq!(run(&["--config", s(&cfg), "--seed", "5"], Some("6")), by_flag);
    let seeds: std::collections::HashSet<String> = (0..8).map(|k| run(&["--seed", &k.to_string()], None)).collect();
    assert!(seeds.len() > 1, "sampling seed had no effect");
    assert_eq!(run(&["--config", s(&cfg)], Some("6")), run(&["--seed", "6"], None));
}

#[test]
fn jobs_fan_out_with_per_clip_isolation() {
    let tmp = TempDir::new().unwrap();
    let mut paths = Vec::new();
    for seed in 0..4 {
        let dir = tmp.path().join(format!("s{seed}"));
        ok(&mocrop(&["synth", "--out-dir", s(&dir), "--seed", &seed.to_string(), "--frames", "2"]));
        let p = tmp.path().join(format!("clip{seed}.jsonl"));
        fs::rename(dir.join("clip.jsonl"), &p).unwrap();
        paths.push(p);
    }
    let oob = write(tmp.path(), "broken.jsonl", "{\"width\":10,\"height\":10}\n{\"f\":0,\"x\":-1,\"y\":1,\"dx\":1,\"dy\":1}\n");
    let out_dir = tmp.path().join("out");
    let mut args = vec!["box", "--jobs", "3", "--out-dir", s(&out_dir), s(&oob)];
    args.extend(paths.iter().map(|p| s(p)));
    assert_eq!(code(&mocrop(&args)), 3);
    for p in &paths {
        let single = ok(&mocrop(&["box", s(p)]));
        let stem = p.file_stem().unwrap().to_str().unwrap();
        assert_eq!(fs::read_to_string(out_dir.join(format!("{stem}.txt"))).unwrap(), single);
    }
    assert!(!out_dir.join("broken.txt").exists());
    assert_eq!(code(&mocrop(&["box", s(&paths[0]), s(&paths[1])])), 2);
}

#[test]
fn eval_from_manifest_and_generated() {
    let tmp = TempDir::new().unwrap();
    let spec = "{\"frame_size\":{\"width\":160,\"height\":120},\"num_frames\":2,\"actor_box\":{\"x1\":0,\"y1\":0,\"x2\":80,\"y2\":60},\"actor_mvs_per_frame\":40,\"noise_mvs_per_frame\":0,\"seed\":4}\n";
    let manifest = write(tmp.path(), "m.jsonl", &format!("# clips\n{spec}{spec}"));
    let text = ok(&mocrop(&["eval", "--manifest", s(&manifest), "--alpha", "0.25"]));
    let lines: Vec<_> = text.lines().collect();
    assert_eq!(lines.len(), 3);
    assert!(lines[0].starts_with("clip synth-0000000000000004 mode adaptive mocrop "));
    let summary: serde_json::Value = serde_json::from_str(lines[2].strip_prefix("summary ").unwrap()).unwrap();
    assert_eq!(summary["clips"], 2);
    assert!(summary["mean_iou_mocrop"].as_f64().unwrap() > 0.8);

    let a = ok(&mocrop(&["eval", "--generate", "6", "--jobs", "3"]));
    let b = ok(&mocrop(&["eval", "--generate", "6"]));
    assert_eq!(a, b);
    assert_eq!(a.lines().count(), 7);
}

#[test]
fn bench_reports_every_backend_and_grid() {
    let a = ok(&mocrop(&["bench", "--runs", "100", "--maps", "4"]));
    assert_eq!(a.lines().filter(|l| l.starts_with("time ")).count(), 18);
    let results = |t: &str| t.lines().filter(|l| l.starts_with("result ")).map(String::from).collect::<Vec<_>>();
    let b = ok(&mocrop(&["bench", "--runs", "100", "--maps", "4"]));
    assert_eq!(results(&a).len(), 3);
    assert_eq!(results(&a), results(&b));
}

#[test]
fn binary_and_jsonl_goldens_agree_after_quantization() {
    let tmp = TempDir::new().unwrap();
    let field = parse_jsonl(fs::File::open(golden().join("clip.jsonl")).unwrap()).unwrap();
    let mut bytes = Vec::new();
    write_binary(&field, &mut bytes).unwrap();
    let bin = tmp.path().join("clip.mvs");
    fs::write(&bin, bytes).unwrap();
    let out = ok(&mocrop(&[&["box", s(&bin)][..], &GOLDEN_FLAGS].concat()));
    assert_eq!(out.lines().next(), Some("mode adaptive"));
}
