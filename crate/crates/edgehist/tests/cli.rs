//! End-to-end checks of the `edgehist` binary: exit codes, written
//! artifacts, manifest contents and the diagnostic subcommands.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use edgehist::{load_image, save_image, ColorImage, Image, Picture};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_edgehist"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn edgehist")
}

fn code(output: &Output) -> i32 {
    output.status.code().expect("exit code")
}

fn write_test_page(path: &Path) {
    // Background 250, one dark bar, one soft mid-gray bar.
    let (m, n) = (48, 64);
    let mut img = Image::filled(m, n, 250.0);
    for r in 10..16 {
        for c in 8..40 {
            img.set(r, c, 20.0);
        }
    }
    for r in 28..36 {
        for c in 12..52 {
            let border = r == 28 || r == 35 || c == 12 || c == 51;
            img.set(r, c, if border { 215.0 } else { 180.0 });
        }
    }
    save_image(&img.into(), path).unwrap();
}

fn manifest_of(path: &Path) -> String {
    std::fs::read_to_string(PathBuf::from(format!("{}.manifest", path.display()))).unwrap()
}

#[test]
fn abstract_writes_image_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("in.png");
    write_test_page(&input);
    let output = dir.path().join("out.png");

    let result = run(&[
        "abstract",
        "--lambda",
        "15",
        "--sigma",
        "0",
        input.to_str().unwrap(),
        output.to_str().unwrap(),
    ]);
    assert_eq!(code(&result), 0, "stderr: {}", String::from_utf8_lossy(&result.stderr));
    assert!(output.exists());

    let manifest = manifest_of(&output);
    for key in [
        "command=abstract",
        "lambda=15",
        "sigma=0",
        "iters=3",
        "p=2",
        "rho=1",
        "max_iter=500",
        "warm_start=true",
        "channels=1",
        "stage.c0.k1.iterations=",
        "stage.c0.k3.objective=",
    ] {
        assert!(manifest.contains(key), "manifest missing {key}:\n{manifest}");
    }

    match load_image(&output).unwrap() {
        Picture::Gray(img) => {
            assert_eq!((img.height(), img.width()), (48, 64));
        }
        other => panic!("expected gray output, got {other}"),
    }
}

#[test]
fn color_round_trip_through_descan() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("page.png");
    let (m, n) = (48, 48);
    let mut plane = Image::filled(m, n, 250.0);
    for r in 20..28 {
        for c in 6..40 {
            plane.set(r, c, 25.0);
        }
    }
    let color = ColorImage::new([plane.clone(), plane.clone(), plane]);
    save_image(&color.into(), &input).unwrap();

    let output = dir.path().join("clean.png");
    let result = run(&[
        "descan",
        "--lambda",
        "70",
        input.to_str().unwrap(),
        output.to_str().unwrap(),
    ]);
    assert_eq!(code(&result), 0, "stderr: {}", String::from_utf8_lossy(&result.stderr));

    let manifest = manifest_of(&output);
    assert!(manifest.contains("command=descan"));
    assert!(manifest.contains("p=1"), "descan defaults to the 1-norm");
    assert!(manifest.contains("alpha=250"));
    assert!(manifest.contains("sigma_hat=3"));
    assert!(manifest.contains("channels=3"));
    assert!(manifest.contains("stage.c2.k3.converged="));

    match load_image(&output).unwrap() {
        Picture::Rgb(_) => {}
        other => panic!("expected color output, got {other}"),
    }
}

#[test]
fn edges_and_exaggerate_run() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("in.png");
    write_test_page(&input);

    let edges_out = dir.path().join("edges.pgm");
    let result = run(&[
        "edges",
        "--lambda",
        "10",
        "--threshold",
        "30",
        input.to_str().unwrap(),
        edges_out.to_str().unwrap(),
    ]);
    assert_eq!(code(&result), 0);
    match load_image(&edges_out).unwrap() {
        Picture::Gray(img) => {
            assert!(img.data().iter().all(|&v| v == 0.0 || v == 255.0));
            assert!(img.data().contains(&255.0), "some edges expected");
        }
        other => panic!("expected gray edge map, got {other}"),
    }
    assert!(manifest_of(&edges_out).contains("threshold=30"));

    let exag_out = dir.path().join("exag.png");
    let result = run(&[
        "exaggerate",
        "--lambda",
        "13",
        "--s",
        "2.5",
        input.to_str().unwrap(),
        exag_out.to_str().unwrap(),
    ]);
    assert_eq!(code(&result), 0);
    assert!(manifest_of(&exag_out).contains("s=2.5"));
}

#[test]
fn histogram_csvs_have_expected_shape() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("in.png");
    write_test_page(&input);

    let prefix = dir.path().join("hist");
    let result = run(&[
        "histogram",
        "--lambda",
        "15",
        input.to_str().unwrap(),
        prefix.to_str().unwrap(),
    ]);
    assert_eq!(code(&result), 0);

    let before = std::fs::read_to_string(dir.path().join("hist.input.csv")).unwrap();
    let after = std::fs::read_to_string(dir.path().join("hist.thresholded.csv")).unwrap();
    for text in [&before, &after] {
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("bin_low,bin_high,count"));
        assert_eq!(text.lines().count(), 257);
    }
    let total = |text: &str| -> u64 {
        text.lines()
            .skip(1)
            .map(|l| l.split(',').nth(2).unwrap().parse::<u64>().unwrap())
            .sum()
    };
    // Both histograms pool h and v entries of every pixel.
    assert_eq!(total(&before), 2 * 48 * 64);
    assert_eq!(total(&after), 2 * 48 * 64);

    let manifest = manifest_of(&prefix);
    assert!(manifest.contains("nnz_before="));
    assert!(manifest.contains("nnz_after="));
}

#[test]
fn detect_bg_reports_window() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("in.png");
    write_test_page(&input);

    let report = dir.path().join("bg.txt");
    let result = run(&[
        "detect-bg",
        input.to_str().unwrap(),
        report.to_str().unwrap(),
    ]);
    assert_eq!(code(&result), 0);
    let text = std::fs::read_to_string(&report).unwrap();
    assert!(text.contains("alpha=250"), "report:\n{text}");
    for key in ["window_row=", "window_col=", "window_size=", "scale_used=", "window_std="] {
        assert!(text.contains(key), "report missing {key}:\n{text}");
    }
}

#[test]
fn trace_csv_is_written_on_request() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("in.png");
    write_test_page(&input);
    let output = dir.path().join("out.png");
    let trace = dir.path().join("trace.csv");

    let result = run(&[
        "abstract",
        "--lambda",
        "15",
        "--trace",
        trace.to_str().unwrap(),
        input.to_str().unwrap(),
        output.to_str().unwrap(),
    ]);
    assert_eq!(code(&result), 0);
    let text = std::fs::read_to_string(&trace).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("channel,outer,iteration,objective,residual_y,residual_z")
    );
    assert!(text.lines().count() > 3);
    // FISTA rows leave the residual columns empty.
    assert!(text.lines().nth(1).unwrap().ends_with(",,"));
}

#[test]
fn exit_codes_match_failure_modes() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("in.png");
    write_test_page(&input);
    let output = dir.path().join("out.png");

    // Unknown flag and invalid values: usage errors.
    assert_eq!(code(&run(&["abstract", "--bogus"])), 2);
    assert_eq!(
        code(&run(&[
            "abstract",
            "--lambda",
            "-1",
            input.to_str().unwrap(),
            output.to_str().unwrap()
        ])),
        2
    );
    assert_eq!(
        code(&run(&[
            "abstract",
            "--p",
            "7",
            input.to_str().unwrap(),
            output.to_str().unwrap()
        ])),
        2
    );

    // Missing input: I/O error, no output written.
    let missing = run(&[
        "abstract",
        "/no/such/file.png",
        output.to_str().unwrap(),
    ]);
    assert_eq!(code(&missing), 3);
    assert!(!output.exists());
    assert!(!String::from_utf8_lossy(&missing.stderr).is_empty());

    // Unsupported (lossy) input: also an I/O-class failure.
    let fake_jpeg = dir.path().join("photo.jpg");
    std::fs::write(&fake_jpeg, [0xFF, 0xD8, 0xFF, 0xE0, 0, 0, 0, 0]).unwrap();
    assert_eq!(
        code(&run(&[
            "abstract",
            fake_jpeg.to_str().unwrap(),
            output.to_str().unwrap()
        ])),
        3
    );

    // Help exits cleanly.
    assert_eq!(code(&run(&["--help"])), 0);
    assert_eq!(code(&run(&["abstract", "--help"])), 0);
}

#[test]
fn pgm_and_ppm_outputs_work() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("in.png");
    write_test_page(&input);

    let pgm_out = dir.path().join("out.pgm");
    assert_eq!(
        code(&run(&[
            "abstract",
            "--lambda",
            "15",
            input.to_str().unwrap(),
            pgm_out.to_str().unwrap()
        ])),
        0
    );
    assert!(matches!(load_image(&pgm_out).unwrap(), Picture::Gray(_)));

    // Color output to ppm.
    let color_in = dir.path().join("color.png");
    let plane = Image::filled(16, 16, 120.0);
    let color = ColorImage::new([plane.clone(), plane.clone(), plane]);
    save_image(&color.into(), &color_in).unwrap();
    let ppm_out = dir.path().join("out.ppm");
    assert_eq!(
        code(&run(&[
            "abstract",
            color_in.to_str().unwrap(),
            ppm_out.to_str().unwrap()
        ])),
        0
    );
    assert!(matches!(load_image(&ppm_out).unwrap(), Picture::Rgb(_)));
}
