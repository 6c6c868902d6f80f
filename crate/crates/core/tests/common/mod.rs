#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

/// Small but complete config: two translation channels, three forced modes.
pub fn small_config(extra: &str) -> String {
    format!(
        r#"seed = 5

[domain]
lx = 6.283185307179586
ly = 6.283185307179586
cutoff = 4

[[noise.channel]]
bx = {{ constant = 0.7 }}

[[noise.channel]]
by = {{ constant = 0.7 }}

[[forcing.mode]]
k = [1, 0]
amplitude = 2.0

[[forcing.mode]]
k = [0, 1]
amplitude = 2.0

[initial]
kind = "random"
norm = 1.0
seed = 3

[run]
dt = 5e-3
horizon = 1.0
stride = 4
paths = 8
{extra}"#
    )
}

pub fn write_config(dir: &Path, text: &str) -> PathBuf {
    let p = dir.join("config.toml");
    std::fs::write(&p, text).unwrap();
    p
}

pub fn snsim(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut c = Command::new(env!("CARGO_BIN_EXE_snsim"));
    c.args(args).env_remove("SNS_SEED");
    for (k, v) in env {
        c.env(k, v);
    }
    c.output().unwrap()
}
