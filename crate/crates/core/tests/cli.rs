//! End-to-end checks of the `entlab` binary: subcommand behavior, exit
//! codes, config-file merging, and the CSV/plot artifacts.

use std::process::Command;

fn entlab() -> Command {
    Command::new(env!("CARGO_BIN_EXE_entlab"))
}

#[test]
fn classify_free_entangled_point() {
    let out = entlab()
        .args(["classify", "--family", "1", "--alpha", "4.5", "--c0", "0", "--dt", "0"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("label:         FreeEntangled"), "{text}");
    // last line is machine-readable
    let json_line = text.lines().last().unwrap();
    let v: serde_json::Value = serde_json::from_str(json_line).unwrap();
    assert_eq!(v["label"], "FreeEntangled");
    assert!(v["negativity"].as_f64().unwrap() > 1e-9);
}

#[test]
fn classify_bound_entangled_point() {
    let out = entlab()
        .args(["classify", "--family", "2", "--alpha", "0.5", "--c0", "0", "--dt", "0"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("label:         BoundEntangledPPT"), "{text}");
}

#[test]
fn unknown_flag_exits_one_with_usage() {
    let out = entlab()
        .args(["classify", "--no-such-flag", "1"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("Usage") || err.contains("usage"), "{err}");
}

#[test]
fn out_of_domain_alpha_exits_one() {
    let out = entlab()
        .args(["classify", "--family", "1", "--alpha", "7.0", "--c0", "0", "--dt", "0"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn override_admits_out_of_domain_but_not_non_states() {
    // alpha = 1 for family 1 is outside the established range yet still a state
    let out = entlab()
        .args([
            "classify",
            "--family",
            "1",
            "--alpha",
            "1.0",
            "--c0",
            "0",
            "--dt",
            "0",
            "--allow-out-of-domain",
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let v: serde_json::Value =
        serde_json::from_str(text.lines().last().unwrap()).unwrap();
    assert_eq!(v["out_of_domain"], true);
    // alpha = 1.5 for family 2 is not even a matrix of finite entries
    let out = entlab()
        .args([
            "classify",
            "--family",
            "2",
            "--alpha",
            "1.5",
            "--c0",
            "0",
            "--dt",
            "0",
            "--allow-out-of-domain",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn sweep_region_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("out.csv");
    let out = entlab()
        .args(["sweep", "--family", "2", "--alpha", "0.1:0.9:5", "--c0", "0.7", "--dt", "0:5:6", "--out"])
        .arg(&csv)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(text.lines().count(), 1 + 30);
    assert!(text.starts_with("family,alpha,c0,dt,"));

    let out = entlab().args(["region", "--in"]).arg(&csv).output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("no distillable region"), "{text}");
    let v: serde_json::Value =
        serde_json::from_str(text.lines().last().unwrap()).unwrap();
    assert!(v["bounds"].is_null());
}

#[test]
fn sweep_record_count_matches_grid() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("grid.csv");
    let out = entlab()
        .args(["sweep", "--family", "2", "--c0", "0.7", "--dt", "0:5:10", "--alpha", "0.01:0.99:99", "--out"])
        .arg(&csv)
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(text.lines().count(), 1 + 99 * 10);
}

#[test]
fn sweep_merges_config_file_with_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("sweep.toml");
    let csv = dir.path().join("from_file.csv");
    std::fs::write(
        &cfg,
        format!(
            "family = \"1\"\nalpha = \"2:5:4\"\nc0 = \"0.0,0.7\"\ndt = \"0:1:2\"\nout = \"{}\"\n",
            csv.display()
        ),
    )
    .unwrap();
    // flag overrides the file's alpha grid
    let out = entlab()
        .args(["sweep", "--config"])
        .arg(&cfg)
        .args(["--alpha", "2:5:3"])
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(text.lines().count(), 1 + 2 * 3 * 2);

    // missing required key is a config error (exit 1)
    std::fs::write(&cfg, "family = \"1\"\n").unwrap();
    let out = entlab().args(["sweep", "--config"]).arg(&cfg).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn sweep_emits_plot_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("p.csv");
    let plots = dir.path().join("plots");
    let out = entlab()
        .args(["sweep", "--family", "1", "--alpha", "2:5:7", "--c0", "0.0", "--dt", "0:0:1", "--out"])
        .arg(&csv)
        .args(["--plot-dir"])
        .arg(&plots)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(plots.join("plot.gp").exists());
    assert!(plots.join("curve_000.dat").exists());
    let body = std::fs::read_to_string(plots.join("curve_000.dat")).unwrap();
    assert_eq!(body.lines().count(), 1 + 7);
}

#[test]
fn verify_subcommand_reports_all_81_entries() {
    let out = entlab()
        .args(["verify-eq16", "--alpha-steps", "3", "--c0-steps", "3", "--dt-steps", "3"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let entry_lines = text.lines().filter(|l| l.starts_with('X')).count();
    assert_eq!(entry_lines, 81);
    assert!(text.contains("MISMATCH"), "printed table is known not to match: {text}");

    // restricted to Dt = 0 the evolution is the identity and the first row
    // of the table agrees
    let out = entlab()
        .args(["verify-eq16", "--alpha-steps", "3", "--c0-steps", "3", "--dt-steps", "1"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().any(|l| l.starts_with("X11 ") && l.ends_with("ok")), "{text}");
    assert!(text.lines().any(|l| l.starts_with("X15 ") && l.ends_with("ok")), "{text}");
}

#[test]
fn select_variant_prints_winner() {
    let out = entlab().args(["select-variant"]).output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("selected variant: spin1"), "{text}");
    let v: serde_json::Value =
        serde_json::from_str(text.lines().last().unwrap()).unwrap();
    assert_eq!(v["winner"], "Spin1");
    assert_eq!(v["tie_break_used"], true);
}

#[test]
fn bad_range_syntax_exits_one() {
    let out = entlab()
        .args(["sweep", "--family", "1", "--alpha", "5:2:10", "--c0", "0", "--dt", "0:1:2", "--out", "/tmp/x.csv"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}
