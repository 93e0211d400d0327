//! Instances shipped with the crate, addressable by name.

use std::path::Path;

use crate::network::{load_config, load_config_file, ConfigError, CoupledNetwork};

/// (name, TOML document) of every shipped instance, smallest first.
pub const SHIPPED: [(&str, &str); 4] = [
    ("tiny2", include_str!("../instances/tiny2.toml")),
    ("small4", include_str!("../instances/small4.toml")),
    ("medium6", include_str!("../instances/medium6.toml")),
    ("medium8", include_str!("../instances/medium8.toml")),
];

/// Instances small enough for the oracle suite.
pub const DESK: [&str; 2] = ["tiny2", "small4"];

pub fn document(name: &str) -> Option<&'static str> {
    SHIPPED.iter().find(|(n, _)| *n == name).map(|(_, d)| *d)
}

pub fn shipped(name: &str) -> Option<Result<CoupledNetwork, ConfigError>> {
    document(name).map(load_config)
}

/// Loads a shipped instance by name, or else a configuration file.
pub fn resolve(spec: &str) -> Result<CoupledNetwork, ConfigError> {
    match shipped(spec) {
        Some(net) => net,
        None => load_config_file(Path::new(spec)),
    }
}
