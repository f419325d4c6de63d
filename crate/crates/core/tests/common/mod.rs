#![allow(dead_code)]

use std::path::PathBuf;

use smale_spectra::cli::{parse_config, Model};

pub const REFERENCE: [&str; 3] = ["full2", "full3", "golden"];

pub fn config_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../configs")
        .join(format!("{name}.toml"))
}

pub fn model(name: &str) -> Model {
    let text = std::fs::read_to_string(config_path(name)).expect("config readable");
    Model::build(&parse_config(&text).expect("config parses")).expect("config builds")
}
