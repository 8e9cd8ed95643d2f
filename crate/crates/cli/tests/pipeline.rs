//! End-to-end checks of the binary: stage ordering, rerun guards, and the
//! evaluation identity every score report must satisfy.

use std::path::Path;
use std::process::Output;
use viewscope_core::emd::{evaluate_sets, EmdConfig};
use viewscope_core::scene::SceneIndex;
use viewscope_core::suite::{build_suite, SuiteConfig};

fn viewscope(config: &Path, args: &[&str]) -> Output {
    std::process::Command::new(env!("CARGO_BIN_EXE_viewscope"))
        .arg("--config")
        .arg(config)
        .args(args)
        .output()
        .unwrap()
}

fn write_tiny_config(dir: &Path) -> std::path::PathBuf {
    let out = dir.join("out");
    let path = dir.join("run.toml");
    std::fs::write(
        &path,
        format!(
            r#"
seed = 5

[paths]
out = {:?}

[suite]
rooms = 2
cameras_per_room = 5
example_width = 32
example_height = 24

[generate]
target_voxels = 300
rays_per_voxel = 30
candidates_per_room = 40
keep_per_room = 8
score_width = 32
score_height = 24

[select]
k = 6

[baseline]
views_total = 6
score_width = 32
score_height = 24

[emd]
bins = 16
"#,
            out.display().to_string()
        ),
    )
    .unwrap();
    path
}

#[test]
fn pipeline_writes_every_artifact_and_guards_reruns() {
    let tmp = tempfile::tempdir().unwrap();
    let config = write_tiny_config(tmp.path());
    let out = tmp.path().join("out");

    let run = viewscope(&config, &["pipeline"]);
    assert!(
        run.status.success(),
        "pipeline failed:\n{}",
        String::from_utf8_lossy(&run.stderr)
    );
    for artifact in [
        "scenes/suite.json",
        "scenes/ground_truth.jsonl",
        "scenes/examples/manifest.json",
        "pdfs/pdfs.json",
        "candidates/all.jsonl",
        "selection/manifest.json",
        "baselines/rand.jsonl",
        "baselines/heur.jsonl",
        "eval/summary.json",
        "eval/datamatch.csv",
        "views/manifest.json",
        "run_summary.json",
    ] {
        assert!(out.join(artifact).exists(), "missing {artifact}");
    }
    let summary: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.join("run_summary.json")).unwrap())
            .unwrap();
    let means = summary["grand_means"].as_object().unwrap();
    assert_eq!(means.len(), 6, "selection plus five baselines");
    for (name, value) in means {
        let v = value.as_f64().unwrap();
        assert!((0.0..=1.0).contains(&v), "{name} grand mean {v} out of range");
    }

    // A populated output directory is only overwritten on request.
    let refused = viewscope(&config, &["pipeline"]);
    assert!(!refused.status.success());
    assert!(String::from_utf8_lossy(&refused.stderr).contains("--force"));
    let forced = viewscope(&config, &["pipeline", "--force"]);
    assert!(
        forced.status.success(),
        "forced rerun failed:\n{}",
        String::from_utf8_lossy(&forced.stderr)
    );

    let validate = viewscope(&config, &["scene", "validate"]);
    assert!(!validate.status.success(), "missing path must be an error");
    let validate = std::process::Command::new(env!("CARGO_BIN_EXE_viewscope"))
        .args(["scene", "validate"])
        .arg(out.join("scenes/suite.json"))
        .output()
        .unwrap();
    assert!(validate.status.success());
    assert!(String::from_utf8_lossy(&validate.stdout).starts_with("valid"));
}

#[test]
fn stages_name_their_missing_inputs() {
    let tmp = tempfile::tempdir().unwrap();
    let config = write_tiny_config(tmp.path());

    let generate = viewscope(&config, &["generate"]);
    assert!(!generate.status.success());
    let msg = String::from_utf8_lossy(&generate.stderr).to_string();
    assert!(msg.contains("viewscope suite"), "unhelpful error: {msg}");

    assert!(viewscope(&config, &["suite"]).status.success());
    let generate = viewscope(&config, &["generate"]);
    assert!(!generate.status.success());
    let msg = String::from_utf8_lossy(&generate.stderr).to_string();
    assert!(msg.contains("viewscope pdf"), "unhelpful error: {msg}");

    let baseline = viewscope(&config, &["baseline", "nope"]);
    assert!(!baseline.status.success());
    assert!(String::from_utf8_lossy(&baseline.stderr).contains("unknown baseline"));
}

#[test]
fn evaluating_a_set_against_itself_scores_zero() {
    let suite = build_suite(&SuiteConfig {
        rooms: 2,
        seed: 3,
        cameras_per_room: 4,
        ..SuiteConfig::default()
    });
    let index = SceneIndex::new(&suite.scene);
    let images: Vec<_> = suite
        .ground_truth
        .iter()
        .map(|v| index.render(&v.camera, 32, 24))
        .collect();
    let report = evaluate_sets(
        &images,
        &images,
        &suite.scene.categories,
        &EmdConfig::default(),
    )
    .unwrap();
    assert!(
        report.grand_mean.abs() <= 1e-12,
        "self-comparison scored {}",
        report.grand_mean
    );
    assert!(report.entries.iter().all(|e| e.emd.abs() <= 1e-12));
}
