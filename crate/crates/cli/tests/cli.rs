use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use ahfsr_cli::io::{read_image, write_image, Raster};
use ahfsr_core::image::{bicubic_resize, ring_mask, ImagePlane};

fn ahfsr(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ahfsr")).args(args).output().unwrap()
}

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn gray(path: &Path) -> ImagePlane {
    match read_image(path).unwrap() {
        Raster::Gray(p) => p,
        Raster::Rgb(_) => panic!("expected grayscale"),
    }
}

fn bytes_of(path: &Path) -> Vec<u8> {
    gray(path).data().iter().map(|v| (v * 255.0).round() as u8).collect()
}

#[test]
fn constant_image_stays_constant() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("flat.pgm");
    let output = dir.path().join("flat_up.pgm");
    write_image(&input, &Raster::Gray(ImagePlane::filled(6, 6, 100.0 / 255.0))).unwrap();
    let out = ahfsr(&["upscale", "--input", s(&input), "--output", s(&output), "--scale", "2"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let up = gray(&output);
    assert_eq!(up.dims(), (12, 12));
    for v in bytes_of(&output) {
        assert!((99..=101).contains(&v), "pixel {v}");
    }
}

#[test]
fn output_dimensions_follow_scale() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("in.png");
    let output = dir.path().join("out.png");
    let plane = ImagePlane::from_fn(60, 60, |r, c| ((r / 7 + c / 5) % 3) as f64 / 2.0);
    write_image(&input, &Raster::Gray(plane)).unwrap();
    let out = ahfsr(&["upscale", "--input", s(&input), "--output", s(&output), "--scale", "3"]);
    assert!(out.status.success());
    assert_eq!(gray(&output).dims(), (180, 180));
}

#[test]
fn color_input_gives_color_output() {
    let dir = tempfile::tempdir().unwrap();
    let output = dir.path().join("rgb.ppm");
    let input = fixture("astronaut_rgb.png");
    let out = ahfsr(&["upscale", "--input", s(&input), "--output", s(&output), "--scale", "2", "--threads", "1"]);
    assert!(out.status.success());
    let img = read_image(&output).unwrap();
    assert!(img.is_color());
    assert_eq!(img.dims(), (128, 128));
}

#[test]
fn mask_changes_only_pixels_near_flat_regions() {
    let dir = tempfile::tempdir().unwrap();
    let input = fixture("camera.png");
    let (plain, masked) = (dir.path().join("plain.png"), dir.path().join("masked.png"));
    for (path, extra) in [(&plain, None), (&masked, Some("--mask"))] {
        let mut args = vec!["upscale", "--input", s(&input), "--output", s(path), "--scale", "2"];
        args.extend(extra);
        assert!(ahfsr(&args).status.success());
    }
    let lr = gray(&input);
    let mask = ring_mask(&bicubic_resize(&lr, 128, 128), 0.05).unwrap();
    let (a, b) = (bytes_of(&plain), bytes_of(&masked));
    // the 5x5 blur spreads a masked pixel over a radius of 2
    let near_zero = |r: usize, c: usize| {
        (r.saturating_sub(2)..=(r + 2).min(127)).any(|y| (c.saturating_sub(2)..=(c + 2).min(127)).any(|x| !mask.get(y, x)))
    };
    let mut changed = 0;
    for r in 0..128 {
        for c in 0..128 {
            if a[r * 128 + c] != b[r * 128 + c] {
                changed += 1;
                assert!(near_zero(r, c), "pixel ({r},{c}) changed away from the masked region");
            }
        }
    }
    assert!(changed > 0);
}

#[test]
fn eval_prints_rmse_with_two_decimals() {
    let dir = tempfile::tempdir().unwrap();
    let gt_path = fixture("camera.png");
    let gt = gray(&gt_path);
    let lr_path = dir.path().join("lr.png");
    let up_path = dir.path().join("bicubic.png");
    write_image(&lr_path, &Raster::Gray(bicubic_resize(&gt, 32, 32))).unwrap();
    let out = ahfsr(&["baseline", "--input", s(&lr_path), "--output", s(&up_path), "--scale", "2", "--method", "bicubic"]);
    assert!(out.status.success());

    let out = ahfsr(&["eval", "--ref", s(&gt_path), "--test", s(&up_path)]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();

    // scalar loop over the 8-bit samples
    let (a, b) = (bytes_of(&gt_path), bytes_of(&up_path));
    let mut sum = 0.0;
    for i in 0..a.len() {
        let d = a[i] as f64 - b[i] as f64;
        sum += d * d;
    }
    let expected = (sum / a.len() as f64).sqrt();
    assert_eq!(text.trim(), format!("RMSE {expected:.2}"));
    assert_eq!(text.trim(), "RMSE 8.87");
}

#[test]
fn eval_of_identical_images_is_zero() {
    let p = fixture("astronaut_rgb.png");
    let out = ahfsr(&["eval", "--ref", s(&p), "--test", s(&p), "--channel", "g"]);
    assert_eq!(String::from_utf8(out.stdout).unwrap().trim(), "RMSE 0.00");
}

#[test]
fn trace_file_has_one_record_per_patch() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("in.pgm");
    let (output, trace) = (dir.path().join("out.pgm"), dir.path().join("trace.jsonl"));
    write_image(&input, &Raster::Gray(ImagePlane::from_fn(10, 10, |r, c| if r + c > 9 { 0.9 } else { 0.1 }))).unwrap();
    let out = ahfsr(&["upscale", "--input", s(&input), "--output", s(&output), "--scale", "2", "--trace", s(&trace)]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&trace).unwrap();
    let records: Vec<serde_json::Value> = text.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(records.len(), 4);
    let origins: Vec<_> = records.iter().map(|r| r["origin"].clone()).collect();
    assert_eq!(origins, [serde_json::json!([0, 0]), serde_json::json!([0, 4]), serde_json::json!([4, 0]), serde_json::json!([4, 4])]);
    for r in &records {
        assert_eq!(r["residual_norms"].as_array().unwrap().len(), 3);
        assert_eq!(r["admm_iterations"].as_array().unwrap().len(), 3);
    }
}

#[test]
fn baseline_methods() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("in.pgm");
    write_image(&input, &Raster::Gray(ImagePlane::from_fn(3, 4, |r, c| (r * 4 + c) as f64 / 11.0))).unwrap();
    for method in ["nearest", "bicubic"] {
        let output = dir.path().join(format!("{method}.pgm"));
        let out = ahfsr(&["baseline", "--input", s(&input), "--output", s(&output), "--scale", "3", "--method", method]);
        assert!(out.status.success());
        assert_eq!(gray(&output).dims(), (9, 12));
    }
    let nearest = gray(&dir.path().join("nearest.pgm"));
    assert_eq!(nearest.get(4, 7), gray(&input).get(1, 2));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("o.png");
    let missing = dir.path().join("missing.png");
    let camera = fixture("camera.png");

    assert_eq!(ahfsr(&["upscale"]).status.code(), Some(2));
    assert_eq!(ahfsr(&["upscale", "--input", s(&camera), "--output", s(&out), "--scale", "1"]).status.code(), Some(2));
    assert_eq!(
        ahfsr(&["upscale", "--input", s(&camera), "--output", s(&out), "--scale", "2", "--xi2", "0.5"]).status.code(),
        Some(2)
    );
    assert_eq!(ahfsr(&["upscale", "--input", s(&missing), "--output", s(&out), "--scale", "2"]).status.code(), Some(3));
    let bmp = dir.path().join("o.bmp");
    assert_eq!(ahfsr(&["baseline", "--input", s(&camera), "--output", s(&bmp), "--scale", "2", "--method", "nearest"]).status.code(), Some(3));
    let other = fixture("astronaut_rgb.png");
    assert_eq!(ahfsr(&["eval", "--ref", s(&camera), "--test", s(&other)]).status.code(), Some(2));
}
