#![allow(dead_code)]

use std::fs;
use std::path::{Path, PathBuf};

pub fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

pub fn fixture(rel: &str) -> PathBuf {
    fixtures().join(rel)
}

/// Run the CLI in-process; `args` excludes the program name.
pub fn gravity(args: &[&str]) -> i32 {
    let mut all = vec!["gravity".to_string()];
    all.extend(args.iter().map(|s| s.to_string()));
    gravity_toolkit::cli::run(all)
}

pub fn path_str(p: &Path) -> &str {
    p.to_str().expect("utf-8 path")
}

/// `--gdp … --capitals … --trade … --year 2014` for a directory holding the three inputs.
pub fn input_flags(dir: &Path) -> Vec<String> {
    vec![
        "--gdp".into(),
        path_str(&dir.join("gdp.csv")).into(),
        "--capitals".into(),
        path_str(&dir.join("capitals.csv")).into(),
        "--trade".into(),
        path_str(&dir.join("trade.csv")).into(),
        "--year".into(),
        "2014".into(),
    ]
}

pub fn gravity_with(cmd: &str, input: &Path, extra: &[&str]) -> i32 {
    let mut args = vec![cmd.to_string()];
    args.extend(input_flags(input));
    args.extend(extra.iter().map(|s| s.to_string()));
    let refs: Vec<&str> = args.iter().map(String::as_str).collect();
    gravity(&refs)
}

pub fn write(path: &Path, text: &str) {
    fs::write(path, text).unwrap();
}

pub fn read(path: &Path) -> String {
    fs::read_to_string(path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}
