//! Flat `key = value` config files. Each key names a long flag of the
//! subcommand; flags given on the command line win over the file.
//!
//! ```text
//! # table1.conf
//! seed = 7
//! reps = 30
//! sizes = 100,300
//! full = false
//! ```

use std::ffi::OsString;
use std::fs;
use std::path::Path;

/// Splices the settings of any `--config FILE` into `args`, right after the
/// subcommand, skipping keys that also appear as flags.
pub fn expand_config(args: Vec<OsString>) -> Result<Vec<OsString>, String> {
    let strings: Vec<String> = args.iter().map(|a| a.to_string_lossy().into_owned()).collect();
    let mut path = None;
    for (i, a) in strings.iter().enumerate() {
        if a == "--config" {
            path = Some(
                strings
                    .get(i + 1)
                    .ok_or_else(|| "--config needs a file".to_string())?
                    .clone(),
            );
        } else if let Some(p) = a.strip_prefix("--config=") {
            path = Some(p.to_string());
        }
    }
    let Some(path) = path else {
        return Ok(args);
    };
    if strings.len() < 2 {
        return Ok(args);
    }
    let given: Vec<&str> = strings
        .iter()
        .filter_map(|a| a.strip_prefix("--"))
        .map(|a| a.split('=').next().unwrap())
        .collect();
    let mut extra = Vec::new();
    for (key, value) in read_config(Path::new(&path))? {
        if given.contains(&key.as_str()) {
            continue;
        }
        match value.as_str() {
            "true" => extra.push(format!("--{key}")),
            "false" => {}
            _ => {
                extra.push(format!("--{key}"));
                extra.push(value);
            }
        }
    }
    let mut out = args;
    let tail = out.split_off(2);
    out.extend(extra.into_iter().map(OsString::from));
    out.extend(tail);
    Ok(out)
}

/// Key-value pairs of a config file, in file order.
pub fn read_config(path: &Path) -> Result<Vec<(String, String)>, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
    parse_config(&text).map_err(|e| format!("{}: {e}", path.display()))
}

pub fn parse_config(text: &str) -> Result<Vec<(String, String)>, String> {
    let mut pairs = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(format!("line {}: expected key = value", i + 1));
        };
        let (key, value) = (key.trim(), value.trim());
        if key.is_empty() || !key.chars().all(|c| c.is_ascii_alphanumeric() || c == '-' || c == '_') {
            return Err(format!("line {}: invalid key {key:?}", i + 1));
        }
        if key == "config" {
            return Err(format!("line {}: config files cannot include other config files", i + 1));
        }
        pairs.push((key.replace('_', "-"), value.to_string()));
    }
    Ok(pairs)
}
