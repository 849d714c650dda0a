//! Runs every example binary. `cargo test` builds them next to the main
//! binary, under `examples/`.

use std::path::PathBuf;
use std::process::Command;

const EXAMPLES: [&str; 11] = [
    "analyze_cli",
    "brute_force_oracle",
    "effect_sizes",
    "flat_vs_two_step",
    "meta_analysis_forest",
    "p_value_hybrid",
    "q_curve",
    "q_value_hybrid",
    "reproduce_tables",
    "sensitivity_bound",
    "standard_bayes_pathology",
];

fn example_path(name: &str) -> PathBuf {
    let bin = PathBuf::from(env!("CARGO_BIN_EXE_specialval"));
    bin.parent()
        .unwrap()
        .join("examples")
        .join(format!("{name}{}", std::env::consts::EXE_SUFFIX))
}

#[test]
fn every_example_runs() {
    let dir = tempfile::tempdir().unwrap();
    for name in EXAMPLES {
        let path = example_path(name);
        assert!(path.exists(), "{} not built", path.display());
        let out = Command::new(&path)
            .arg(dir.path().join(format!("{name}.svg")))
            .output()
            .unwrap();
        assert!(
            out.status.success(),
            "{name}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
        assert!(!out.stdout.is_empty(), "{name} printed nothing");
    }
}

#[test]
fn example_list_is_complete() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("examples");
    let mut found: Vec<String> = std::fs::read_dir(dir)
        .unwrap()
        .filter_map(|e| e.ok()?.path().file_stem()?.to_str().map(String::from))
        .collect();
    found.sort();
    assert_eq!(found, EXAMPLES);
}
