//! Flat `key = value` config files merged into the argument list.

use std::path::Path;

use crate::error::CliError;

/// Parses a config file into long-flag arguments. `true` turns a key into a
/// bare switch and `false` drops it.
pub fn parse_config(text: &str, path: &Path) -> Result<Vec<String>, CliError> {
    let mut args = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(CliError::Config {
                path: path.to_path_buf(),
                line: i + 1,
                message: "expected `key = value`".into(),
            });
        };
        let key = key.trim().replace('_', "-");
        let value = value.trim().trim_matches('"');
        if key.is_empty() || key.starts_with('-') {
            return Err(CliError::Config {
                path: path.to_path_buf(),
                line: i + 1,
                message: format!("invalid key `{key}`"),
            });
        }
        match value {
            "true" => args.push(format!("--{key}")),
            "false" => {}
            v => {
                args.push(format!("--{key}"));
                args.push(v.to_string());
            }
        }
    }
    Ok(args)
}

/// Location of `--config PATH` in `argv`, if any.
pub fn find_config(argv: &[String]) -> Option<String> {
    let mut it = argv.iter().skip(1);
    while let Some(a) = it.next() {
        if a == "--" {
            return None;
        }
        if a == "--config" {
            return it.next().cloned();
        }
        if let Some(v) = a.strip_prefix("--config=") {
            return Some(v.to_string());
        }
    }
    None
}

/// Inserts `extra` right after the subcommand tokens so that flags given on
/// the command line come later and override them.
pub fn splice(argv: &[String], extra: Vec<String>) -> Vec<String> {
    let mut pos = 1;
    let mut last_command = None;
    while pos < argv.len() {
        let a = &argv[pos];
        if a == "--config" {
            pos += 2;
            continue;
        }
        if a.starts_with('-') {
            if last_command.is_some() {
                break;
            }
            pos += 1;
            continue;
        }
        last_command = Some(pos);
        pos += 1;
    }
    let at = last_command.map_or(argv.len().min(1), |p| p + 1);
    let mut out = argv[..at].to_vec();
    out.extend(extra);
    out.extend_from_slice(&argv[at..]);
    out
}
