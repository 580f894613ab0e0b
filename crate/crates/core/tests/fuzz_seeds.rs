//! Replays the checked-in fuzz corpus through the parsers it targets.

use std::fs;
use std::path::{Path, PathBuf};

use gravdit::constants::catalog;
use gravdit::run_config::{parse_config, parse_particle_overrides, RunConfig, Scenario};

fn seeds(target: &str) -> Vec<PathBuf> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fuzz/corpus").join(target);
    let mut files: Vec<_> = fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|e| e.unwrap().path())
        .collect();
    files.sort();
    assert!(!files.is_empty());
    files
}

#[test]
fn run_config_seeds() {
    let mut resolved = 0;
    for path in seeds("run_config") {
        let text = fs::read_to_string(&path).unwrap();
        let layer = parse_config(&text).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        for scenario in [Scenario::A, Scenario::B] {
            if RunConfig::resolve(scenario, layer.clone()).is_ok() {
                resolved += 1;
            }
        }
    }
    assert!(resolved > 0);
}

#[test]
fn particle_override_seeds() {
    let (mut ok, mut rejected) = (0, 0);
    for path in seeds("particle_overrides") {
        let text = fs::read_to_string(&path).unwrap();
        match parse_particle_overrides(&text) {
            Ok(map) => {
                catalog().apply_overrides(&map).unwrap();
                ok += 1;
            }
            Err(_) => rejected += 1,
        }
    }
    assert!(ok > 0 && rejected > 0);
}
