use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use qkit_cli::pgm::{PgmFormat, PgmImage};
use tempfile::TempDir;

fn qkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qkit")).args(args).env_remove("QKIT_SEED").output().unwrap()
}

fn qkit_env(args: &[&str], seed: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qkit")).args(args).env("QKIT_SEED", seed).output().unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn write_image(dir: &TempDir, name: &str, img: &PgmImage, fmt: PgmFormat) -> PathBuf {
    let p = dir.path().join(name);
    img.write(&p, fmt).unwrap();
    p
}

fn sample(w: usize, h: usize) -> PgmImage {
    PgmImage::from_fn(w, h, 255, |x, y| ((x * 29 + y * 53 + x * y) % 256) as u8).unwrap()
}

#[test]
fn compress_reconstruct_metrics() {
    let dir = TempDir::new().unwrap();
    let src = write_image(&dir, "a.pgm", &sample(17, 9), PgmFormat::Raw);
    let coef = dir.path().join("a.coef");
    let rec = dir.path().join("r.pgm");
    let o = qkit(&["compress", s(&src), "-o", s(&coef), "--n", "5"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let o = qkit(&["reconstruct", s(&coef), "-o", s(&rec), "--format", "p5"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(std::fs::read(&rec).unwrap().starts_with(b"P5"));
    let a = PgmImage::read(&src).unwrap();
    let r = PgmImage::read(&rec).unwrap();
    assert!(a.pixels.iter().zip(&r.pixels).all(|(x, y)| y >= x));

    let o = qkit(&["metrics", s(&src), s(&rec)]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("psnr_db:"));
    let o = qkit(&["metrics", s(&src), s(&rec), "--csv"]);
    let out = stdout(&o);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.len(), 2, "{out}");
    assert_eq!(lines[0].split(',').count(), lines[1].split(',').count());

    let o = qkit(&["metrics", s(&src), s(&src)]);
    assert!(stdout(&o).contains("psnr_db: inf"));
}

#[test]
fn misaligned_grid_warns() {
    let dir = TempDir::new().unwrap();
    let src = write_image(&dir, "a.pgm", &sample(10, 10), PgmFormat::Plain);
    let coef = dir.path().join("a.coef");
    let o = qkit(&["compress", s(&src), "-o", s(&coef), "--n", "4"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(!stderr(&o).contains("warning"));
    let o = qkit(&["compress", s(&src), "-o", s(&coef), "--n", "5"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stderr(&o).contains("warning"));
}

#[test]
fn partition_method() {
    let dir = TempDir::new().unwrap();
    let src = write_image(&dir, "a.pgm", &sample(3, 3), PgmFormat::Plain);
    let part = dir.path().join("p.txt");
    std::fs::write(&part, "2 3\n1 1/2 0\n0 1/2 1\n").unwrap();
    let coef = dir.path().join("a.coef");
    let rec = dir.path().join("r.pgm");
    let o = qkit(&["compress", s(&src), "-o", s(&coef), "--method", "partition", "--partition", s(&part)]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(qkit(&["reconstruct", s(&coef), "-o", s(&rec)]).status.success());
    let o = qkit(&["compress", s(&src), "-o", s(&coef), "--method", "partition"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn morph_with_adjunction_check() {
    let dir = TempDir::new().unwrap();
    let src = write_image(&dir, "a.pgm", &sample(12, 8), PgmFormat::Plain);
    let se = dir.path().join("se.txt");
    std::fs::write(&se, "3 3 1 1\n0 0.5 0\n0.5 1 0.5\n0 0.5 0\n").unwrap();
    for mode in ["wrap", "bounded"] {
        for op in ["dilate", "erode", "open", "close"] {
            let out = dir.path().join(format!("{op}-{mode}.pgm"));
            let o = qkit(&["morph", op, s(&src), "--se", s(&se), "-o", s(&out), "--mode", mode, "--check-adjunction"]);
            assert!(o.status.success(), "{op} {mode}: {}", stderr(&o));
            assert!(stdout(&o).contains("adjunction: pass"));
            assert_eq!(PgmImage::read(&out).unwrap().width, 12);
        }
    }
    let o = qkit(&["morph", "thin", s(&src), "--se", s(&se), "-o", "/dev/null"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn laws_negative_control() {
    let dir = TempDir::new().unwrap();
    let good = dir.path().join("good.txt");
    std::fs::write(&good, "3\n0 1 2\n1 1 1\n2 2 2\n").unwrap();
    let o = qkit(&["laws", "--suite", "quantale", "--carrier", "chain:3", "--monoid", s(&good)]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("all laws hold"));

    // (1·1)·1 = 2 but 1·(1·1) = 1
    let bad = dir.path().join("bad.txt");
    std::fs::write(&bad, "3\n0 1 2\n1 2 1\n2 2 2\n").unwrap();
    let o = qkit(&["laws", "--suite", "quantale", "--carrier", "chain:3", "--monoid", s(&bad)]);
    assert_eq!(o.status.code(), Some(1), "{}", stdout(&o));
    assert!(stdout(&o).contains("LAWS VIOLATED"));
    assert!(stdout(&o).contains("monoid table: associative with unit 0"));

    let o = qkit(&["laws", "--suite", "nonsense"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn seed_from_environment() {
    let args = ["laws", "--suite", "module,transform", "--carrier", "chain:5", "--samples", "50"];
    let a = qkit_env(&args, "17");
    let b = qkit_env(&args, "17");
    assert!(a.status.success(), "{}", stdout(&a));
    assert_eq!(stdout(&a), stdout(&b));
    let c = qkit(&[&args[..], &["--seed", "17"]].concat());
    assert_eq!(stdout(&a), stdout(&c));
    assert_eq!(qkit_env(&args, "banana").status.code(), Some(2));
}

#[test]
fn plain_and_raw_images_agree() {
    let dir = TempDir::new().unwrap();
    let img = sample(40, 3);
    let p2 = write_image(&dir, "a2.pgm", &img, PgmFormat::Plain);
    let p5 = write_image(&dir, "a5.pgm", &img, PgmFormat::Raw);
    assert!(std::fs::read_to_string(&p2).unwrap().lines().all(|l| l.len() <= 70));
    assert_eq!(PgmImage::read(&p2).unwrap().pixels, PgmImage::read(&p5).unwrap().pixels);
    let o = qkit(&["metrics", s(&p2), s(&p5)]);
    assert!(stdout(&o).contains("psnr_db: inf"));
}

#[test]
fn missing_input_is_an_error() {
    let o = qkit(&["reconstruct", "/nonexistent/x.coef", "-o", "/tmp/never.pgm"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).starts_with("error:"));
}
