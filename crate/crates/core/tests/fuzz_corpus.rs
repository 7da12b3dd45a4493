//! Replays the checked-in fuzz corpus through the fuzz targets' properties.

use std::fs;
use std::path::PathBuf;

use lockdown_core::config::RunConfig;
use lockdown_core::ethics::{parse_criteria, Allocation, WelfareCriterion};

fn seeds(target: &str) -> Vec<(String, String)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fuzz/corpus")
        .join(target);
    let mut out: Vec<_> = fs::read_dir(&dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (
                e.file_name().to_string_lossy().into_owned(),
                fs::read_to_string(e.path()).unwrap(),
            )
        })
        .collect();
    out.sort();
    assert!(!out.is_empty(), "{} has no seeds", dir.display());
    out
}

#[test]
fn config_seeds_round_trip() {
    let mut parsed = 0;
    for (name, text) in seeds("parse_config") {
        if let Ok(cfg) = RunConfig::parse(&text) {
            assert_eq!(RunConfig::parse(&cfg.serialize()).unwrap(), cfg, "{name}");
            parsed += 1;
        }
    }
    assert!(parsed >= 3);
}

#[test]
fn criterion_seeds_round_trip() {
    for (name, text) in seeds("parse_criterion") {
        match text.parse::<WelfareCriterion>() {
            Ok(crit) => assert_eq!(crit.to_string().parse::<WelfareCriterion>().unwrap(), crit),
            Err(_) => assert!(parse_criteria(&text).is_ok(), "{name} parses neither way"),
        }
    }
}

#[test]
fn allocation_seeds_round_trip() {
    for (name, text) in seeds("parse_allocation") {
        let x: Allocation = text.parse().unwrap_or_else(|e| panic!("{name}: {e}"));
        assert_eq!(x.to_string().parse::<Allocation>().unwrap(), x);
    }
}
