use std::fs;
use std::io::Write;
use std::path::Path;
use std::process::{Command, Output, Stdio};

use tempfile::TempDir;

fn qmem(args: &[&str], stdin: Option<&[u8]>) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_qmem"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("spawn qmem");
    {
        let mut pipe = child.stdin.take().unwrap();
        if let Some(data) = stdin {
            pipe.write_all(data).unwrap();
        }
    }
    child.wait_with_output().unwrap()
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("{e}: {}", String::from_utf8_lossy(&out.stdout));
    })
}

fn write_channel(dir: &Path, name: &str, args: &[&str]) -> String {
    let path = dir.join(name);
    let out = qmem(args, None);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    fs::write(&path, &out.stdout).unwrap();
    path.display().to_string()
}

/// Witness `Φ₊ - 1/2` on two qubits.
fn phi_witness(dir: &Path) -> String {
    let path = dir.join("witness.json");
    let text = r#"{"dX": 2, "dY": 2, "matrix": {"re": [[0, 0, 0, 0.5], [0, -0.5, 0, 0], [0, 0, -0.5, 0], [0.5, 0, 0, 0]]}}"#;
    fs::write(&path, text).unwrap();
    path.display().to_string()
}

#[test]
fn certify_exit_codes() {
    let good = qmem(&["make-channel", "depolarizing", "0.8"], None);
    let out = qmem(&["certify"], Some(&good.stdout));
    assert_eq!(out.status.code(), Some(0));
    assert!((json(&out)["payoff"].as_f64().unwrap() - 0.35).abs() < 1e-9);

    let bad = qmem(&["make-channel", "--kind", "depolarizing", "--param", "0.2"], None);
    let out = qmem(&["certify", "-"], Some(&bad.stdout));
    assert_eq!(out.status.code(), Some(2));
    assert!(json(&out).get("payoff").is_none());

    let out = qmem(&["certify"], Some(b"{\"dA\": 2, \"dB\""));
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("parsing channel"));
}

#[test]
fn invalid_channels_name_the_invariant() {
    let text = br#"{"dA": 2, "dB": 2, "kraus": [{"re": [[1, 0], [0, 0.5]]}]}"#;
    let out = qmem(&["certify"], Some(text));
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("trace preservation violated") && err.contains("7.5"), "{err}");

    let big = r#"{"dA": 17, "dB": 2, "kraus": []}"#;
    let out = qmem(&["certify"], Some(big.as_bytes()));
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("1..=16"));
}

#[test]
fn simulate_tetrahedral_game_under_loss() {
    let dir = TempDir::new().unwrap();
    let channel = write_channel(dir.path(), "depol.json", &["make-channel", "depolarizing", "1.0"]);
    let game = dir.path().join("game.json").display().to_string();
    let out = qmem(
        &["certify", &channel, "--mode", "tomographic", "--family", "tetrahedral", "--out", &game],
        None,
    );
    assert_eq!(out.status.code(), Some(0));
    let game_json: serde_json::Value = serde_json::from_str(&fs::read_to_string(&game).unwrap()).unwrap();
    let payoff = game_json["payoff"].as_array().unwrap();
    assert_eq!(payoff.len(), 16);
    for e in payoff {
        let (x, y) = (e["x"].as_u64().unwrap(), e["y"].as_u64().unwrap());
        let expected = if (x + 4 - y) % 4 == 2 { -0.625 } else { 0.125 };
        assert!((e["value"].as_f64().unwrap() - expected).abs() < 1e-12);
    }

    let csv = dir.path().join("p.csv").display().to_string();
    let out = qmem(&["simulate", &channel, &game, "--eta", "0.5", "--out", &csv], None);
    assert!(out.status.success());
    assert!((json(&out)["payoff"].as_f64().unwrap() - 0.25).abs() < 1e-9);

    let lossless = qmem(&["simulate", &channel, &game], None);
    let unit = qmem(&["simulate", &channel, &game, "--eta", "1"], None);
    let unit_text = String::from_utf8(unit.stdout).unwrap();
    let kept: Vec<&str> = unit_text.lines().filter(|l| !l.starts_with("0,")).collect();
    let lossless_text = String::from_utf8(lossless.stdout).unwrap();
    assert_eq!(kept, lossless_text.lines().collect::<Vec<_>>());
}

#[test]
fn simulate_eb_channel_scores_nothing() {
    let dir = TempDir::new().unwrap();
    let good = write_channel(dir.path(), "id.json", &["make-channel", "identity"]);
    let game = dir.path().join("game.json").display().to_string();
    assert!(qmem(&["certify", &good, "--out", &game], None).status.success());
    let eb = write_channel(
        dir.path(),
        "mp.json",
        &["make-channel", "measure-prepare", "--param", "3", "--seed", "9"],
    );
    let out = qmem(&["simulate", &eb, &game, "--out", &dir.path().join("p.csv").display().to_string()], None);
    assert!(out.status.success());
    assert!(json(&out)["payoff"].as_f64().unwrap() <= 1e-9);
}

#[test]
fn decompose_modes() {
    let dir = TempDir::new().unwrap();
    let w = phi_witness(dir.path());
    let path = dir.path().join("dec.json").display().to_string();
    let out = qmem(&["decompose", &w, "--out", &path], None);
    let summary = json(&out);
    assert_eq!(summary["nonzero"], 6);
    assert!(summary["residual"].as_f64().unwrap() <= 1e-9);
    let dec: serde_json::Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    let omega00 = dec["omega"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["x"] == 0 && c["y"] == 0)
        .unwrap()["value"]
        .as_f64()
        .unwrap();
    assert!((omega00 - 2.0 * (3f64.sqrt() - 1.0)).abs() < 1e-9);

    let out = qmem(&["decompose", &w, "--mode", "tomographic", "--family", "tetrahedral", "--out", &path], None);
    assert_eq!(json(&out)["nonzero"], 16);

    let asym = dir.path().join("bad.json");
    fs::write(&asym, r#"{"dX": 1, "dY": 2, "matrix": {"re": [[0, 1], [0, 0]]}}"#).unwrap();
    let out = qmem(&["decompose", &asym.display().to_string()], None);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("hermiticity"));
}

#[test]
fn simulate_then_tomography_round_trip() {
    let dir = TempDir::new().unwrap();
    let channel = write_channel(dir.path(), "depol.json", &["make-channel", "depolarizing", "0.6"]);
    let game = dir.path().join("game.json").display().to_string();
    assert!(qmem(&["certify", &channel, "--mode", "tomographic", "--out", &game], None).status.success());
    let csv = dir.path().join("p.csv").display().to_string();
    assert!(qmem(&["simulate", &channel, &game, "--eta", "0.7", "--out", &csv], None).status.success());
    let out = qmem(&["tomography", &csv, &game], None);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let choi = json(&out);
    let re = &choi["choi"]["re"];
    // 0.6 Φ₊ + 0.4 · 1/4
    assert!((re[0][0].as_f64().unwrap() - 0.4).abs() < 1e-9);
    assert!((re[0][3].as_f64().unwrap() - 0.3).abs() < 1e-9);
    assert!((re[1][1].as_f64().unwrap() - 0.1).abs() < 1e-9);
    assert!(choi["residual"].as_f64().unwrap() <= 1e-9);

    let scenario = dir.path().join("scenario.json").display().to_string();
    assert!(qmem(&["make-scenario", "--out", &scenario], None).status.success());
    let identity = write_channel(dir.path(), "id.json", &["make-channel", "identity"]);
    let sig_game = dir.path().join("sig.json").display().to_string();
    assert!(qmem(&["certify", &identity, "--mode", "tomographic", "--out", &sig_game], None).status.success());
    assert!(qmem(&["simulate", &identity, &sig_game, "--out", &csv], None).status.success());
    let out = qmem(&["tomography", &csv, &scenario], None);
    let re = &json(&out)["choi"]["re"];
    assert!((re[0][3].as_f64().unwrap() - 0.5).abs() < 1e-9);

    let text = fs::read_to_string(&csv).unwrap();
    let mut lines: Vec<String> = text.lines().map(String::from).collect();
    lines[3] = "1,0,2,not-a-number".into();
    fs::write(&csv, lines.join("\n")).unwrap();
    let out = qmem(&["tomography", &csv, &scenario], None);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("row 3"));
}

#[test]
fn outputs_are_deterministic() {
    let args = ["make-channel", "measure-prepare", "--dim", "3", "--seed", "17"];
    let a = qmem(&args, None);
    let b = qmem(&args, None);
    assert_eq!(a.stdout, b.stdout);
    let c = qmem(&["make-channel", "measure-prepare", "--dim", "3", "--seed", "18"], None);
    assert_ne!(a.stdout, c.stdout);
}
