mod common;

use std::path::Path;
use std::process::{Command, Output};

use lsic::imageio::{load_container, load_image, save_image};
use lsic::PlaneImage;
use serde_json::Value;

const KEY: &str = "000102030405060708090A0B0C0D0E0F101112131415161718191A1B1C1D1E1F";

fn lsic(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lsic"))
        .args(args)
        .output()
        .unwrap()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn json(out: &Output) -> Value {
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).unwrap()
}

fn write_fixture(dir: &Path, name: &str, img: &PlaneImage) -> std::path::PathBuf {
    let path = dir.join(name);
    save_image(&path, img).unwrap();
    path
}

#[test]
fn keygen_prints_hex_key() {
    let out = lsic(&["keygen"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let key = text.trim_end();
    assert_eq!(key.len(), 64);
    assert!(key.chars().all(|c| c.is_ascii_hexdigit()));
    assert_ne!(
        key,
        String::from_utf8(lsic(&["keygen"]).stdout)
            .unwrap()
            .trim_end()
    );
}

#[test]
fn deterministic_round_trip_is_exact() {
    let dir = tempfile::tempdir().unwrap();
    let mut r = common::rng(1);
    let input = write_fixture(
        dir.path(),
        "in.ppm",
        &common::random_image(&mut r, 300, 200, 3),
    );
    let (ct1, ct2, back) = (
        dir.path().join("a.lsic"),
        dir.path().join("b.lsic"),
        dir.path().join("out.ppm"),
    );

    for ct in [&ct1, &ct2] {
        let out = lsic(&[
            "encrypt",
            "--key",
            KEY,
            "--in",
            p(&input),
            "--out",
            p(ct),
            "--no-noise",
        ]);
        assert!(
            out.status.success(),
            "{}",
            String::from_utf8_lossy(&out.stderr)
        );
    }
    assert_eq!(std::fs::read(&ct1).unwrap(), std::fs::read(&ct2).unwrap());
    assert!(!load_container(&ct1).unwrap().noise_embedded());

    let out = lsic(&["decrypt", "--key", KEY, "--in", p(&ct1), "--out", p(&back)]);
    assert!(out.status.success());
    assert_eq!(
        std::fs::read(&back).unwrap(),
        std::fs::read(&input).unwrap()
    );
}

#[test]
fn thread_count_does_not_change_output() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_fixture(dir.path(), "in.pgm", &common::ramp(600, 300));
    let mut outputs = Vec::new();
    for threads in ["1", "3"] {
        let ct = dir.path().join(format!("t{threads}.lsic"));
        let out = lsic(&[
            "--threads",
            threads,
            "encrypt",
            "--key",
            KEY,
            "--in",
            p(&input),
            "--out",
            p(&ct),
            "--noise-seed",
            "9",
        ]);
        assert!(out.status.success());
        outputs.push(std::fs::read(&ct).unwrap());
    }
    assert_eq!(outputs[0], outputs[1]);
}

#[test]
fn noisy_encryptions_differ_but_decrypt_on_upper_bits() {
    let dir = tempfile::tempdir().unwrap();
    let img = common::ramp(256, 256);
    let input = write_fixture(dir.path(), "in.pgm", &img);
    let mut containers = Vec::new();
    for name in ["a", "b"] {
        let ct = dir.path().join(format!("{name}.lsic"));
        assert!(
            lsic(&["encrypt", "--key", KEY, "--in", p(&input), "--out", p(&ct)])
                .status
                .success()
        );
        let back = dir.path().join(format!("{name}.pgm"));
        assert!(
            lsic(&["decrypt", "--key", KEY, "--in", p(&ct), "--out", p(&back)])
                .status
                .success()
        );
        let dec = load_image(&back).unwrap();
        assert!(dec
            .plane(0)
            .iter()
            .zip(img.plane(0))
            .all(|(a, b)| a >> 1 == b >> 1));
        containers.push(std::fs::read(&ct).unwrap());
    }
    assert_ne!(containers[0], containers[1]);
}

#[test]
fn analyze_reports_high_cipher_entropy() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_fixture(dir.path(), "in.pgm", &common::ramp(256, 256));
    let ct = dir.path().join("c.lsic");
    assert!(
        lsic(&["encrypt", "--key", KEY, "--in", p(&input), "--out", p(&ct)])
            .status
            .success()
    );

    let plain = json(&lsic(&["analyze", "--in", p(&input)]));
    assert!(plain["apc_h"].as_f64().unwrap() > 0.9);
    let report = json(&lsic(&["analyze", "--in", p(&ct)]));
    assert!(report["entropy"].as_f64().unwrap() > 7.99);
    assert!(report["apc_v"].as_f64().unwrap().abs() < 0.02);
    assert_eq!(report["histogram"].as_array().unwrap().len(), 256);
    assert_eq!(report["width"], 256);

    let diff = dir.path().join("d.pgm");
    let pair = json(&lsic(&[
        "analyze",
        "--in",
        p(&input),
        "--pair",
        p(&input),
        "--diff-out",
        p(&diff),
    ]));
    assert_eq!(pair["npcr"].as_f64(), Some(0.0));
    assert!(load_image(&diff).unwrap().plane(0).iter().all(|&v| v == 0));
}

#[test]
fn experiment_subcommands() {
    let dir = tempfile::tempdir().unwrap();
    let mut r = common::rng(2);
    let input = write_fixture(
        dir.path(),
        "in.pgm",
        &common::random_image(&mut r, 256, 256, 1),
    );
    let diff = dir.path().join("diff.pgm");

    let d = json(&lsic(&[
        "diffuse",
        "--key",
        KEY,
        "--in",
        p(&input),
        "--pixel",
        "10,20",
        "--diff-out",
        p(&diff),
    ]));
    assert!((99.5..=99.75).contains(&d["npcr"].as_f64().unwrap()));
    assert!((33.0..=34.0).contains(&d["uaci"].as_f64().unwrap()));
    assert_eq!(d["delta"], 1);
    assert!(diff.exists());

    let k = json(&lsic(&[
        "keysense",
        "--key",
        KEY,
        "--in",
        p(&input),
        "--bit",
        "0",
    ]));
    assert!(k["npcr"].as_f64().unwrap() >= 99.0);
    assert!(k["wrong_key_entropy"].as_f64().unwrap() > 7.9);
    assert_ne!(k["key_fingerprint"], k["flipped_key_fingerprint"]);

    let n = json(&lsic(&[
        "noisetest",
        "--key",
        KEY,
        "--in",
        p(&input),
        "--ratio",
        "0.0001",
        "--seed",
        "3",
    ]));
    assert_eq!(n["corrupted_bytes"], 7);
    assert!(n["differing_pixels"].as_u64().unwrap() <= n["bound"].as_u64().unwrap());
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_fixture(dir.path(), "in.pgm", &common::ramp(8, 8));
    let out = dir.path().join("o");
    let missing = dir.path().join("missing.pgm");

    // usage errors
    assert_eq!(lsic(&[]).status.code(), Some(1));
    assert_eq!(
        lsic(&[
            "encrypt",
            "--key",
            "zz",
            "--in",
            p(&input),
            "--out",
            p(&out)
        ])
        .status
        .code(),
        Some(1)
    );
    assert_eq!(
        lsic(&[
            "encrypt",
            "--key",
            &KEY[..62],
            "--in",
            p(&input),
            "--out",
            p(&out)
        ])
        .status
        .code(),
        Some(1)
    );
    assert_eq!(
        lsic(&["diffuse", "--key", KEY, "--in", p(&input), "--pixel", "8,0"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        lsic(&["keysense", "--key", KEY, "--in", p(&input), "--bit", "256"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        lsic(&["noisetest", "--key", KEY, "--in", p(&input), "--ratio", "2"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(lsic(&["--threads", "0", "keygen"]).status.code(), Some(1));

    // data errors name the path
    let res = lsic(&[
        "encrypt",
        "--key",
        KEY,
        "--in",
        p(&missing),
        "--out",
        p(&out),
    ]);
    assert_eq!(res.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&res.stderr).contains("missing.pgm"));
    let res = lsic(&["decrypt", "--key", KEY, "--in", p(&input), "--out", p(&out)]);
    assert_eq!(res.status.code(), Some(2));
    std::fs::write(&out, b"P5\n2 2\n65535\n").unwrap();
    assert_eq!(lsic(&["analyze", "--in", p(&out)]).status.code(), Some(2));

    assert_eq!(lsic(&["--help"]).status.code(), Some(0));
}
