//! Config files supply default flags: the table `[group.command]` maps each
//! key to `--key value`, inserted before the user's own flags so those win.

use std::ffi::OsString;
use std::path::Path;

use crate::error::{io_error, CliError, Result};

const VALUE_FLAGS: [&str; 3] = ["--config", "--out", "--format"];

/// Positions of the group and command words and the `--config` value.
struct Scan {
    command_at: Option<usize>,
    words: Vec<String>,
    config: Option<String>,
}

fn scan(args: &[OsString]) -> Scan {
    let mut out = Scan { command_at: None, words: Vec::new(), config: None };
    let mut i = 1;
    while i < args.len() && out.words.len() < 2 {
        let a = args[i].to_string_lossy();
        if let Some(v) = a.strip_prefix("--config=") {
            out.config = Some(v.to_string());
        } else if VALUE_FLAGS.contains(&a.as_ref()) {
            if a == "--config" {
                out.config = args.get(i + 1).map(|v| v.to_string_lossy().into_owned());
            }
            i += 1;
        } else if !a.starts_with('-') {
            out.words.push(a.into_owned());
            if out.words.len() == 2 {
                out.command_at = Some(i);
            }
        }
        i += 1;
    }
    if out.config.is_none() {
        // global flags may also follow the command
        for (j, a) in args.iter().enumerate().skip(i) {
            let a = a.to_string_lossy();
            if let Some(v) = a.strip_prefix("--config=") {
                out.config = Some(v.to_string());
            } else if a == "--config" {
                out.config = args.get(j + 1).map(|v| v.to_string_lossy().into_owned());
            }
        }
    }
    out
}

fn to_flag_value(key: &str, v: &toml::Value) -> Result<Option<String>> {
    Ok(Some(match v {
        toml::Value::String(s) => s.clone(),
        toml::Value::Integer(i) => i.to_string(),
        toml::Value::Float(f) => format!("{f:?}"),
        toml::Value::Boolean(true) => return Ok(None),
        toml::Value::Array(items) => items
            .iter()
            .map(|x| to_flag_value(key, x).map(|s| s.unwrap_or_default()))
            .collect::<Result<Vec<_>>>()?
            .join(","),
        other => return Err(CliError::Config(format!("unsupported value for `{key}`: {other}"))),
    }))
}

/// Returns `args` with the config-derived flags spliced in after the command word.
pub fn expand(args: Vec<OsString>) -> Result<Vec<OsString>> {
    let s = scan(&args);
    let (Some(path), Some(at)) = (s.config, s.command_at) else {
        return Ok(args);
    };
    let text = std::fs::read_to_string(Path::new(&path)).map_err(io_error(&path))?;
    let doc: toml::Table = text.parse().map_err(|e| CliError::Config(format!("{path}: {e}")))?;
    let Some(table) = doc.get(&s.words[0]).and_then(|g| g.get(&s.words[1])) else {
        return Ok(args);
    };
    let table = table
        .as_table()
        .ok_or_else(|| CliError::Config(format!("[{}.{}] must be a table", s.words[0], s.words[1])))?;
    let mut extra = Vec::new();
    for (key, value) in table {
        if let toml::Value::Boolean(false) = value {
            continue;
        }
        extra.push(OsString::from(format!("--{}", key.replace('_', "-"))));
        if let Some(v) = to_flag_value(key, value)? {
            extra.push(OsString::from(v));
        }
    }
    let mut out = args[..=at].to_vec();
    out.extend(extra);
    out.extend_from_slice(&args[at + 1..]);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn os(v: &[&str]) -> Vec<OsString> {
        v.iter().map(OsString::from).collect()
    }

    #[test]
    fn finds_command_words_past_global_flags() {
        let s = scan(&os(&["jnu", "--format", "csv", "bessel", "--out", "x", "zeros", "--nu", "0"]));
        assert_eq!(s.words, ["bessel", "zeros"]);
        assert_eq!(s.command_at, Some(6));
        let s = scan(&os(&["jnu", "bessel", "zeros", "--config", "c.toml"]));
        assert_eq!(s.config.as_deref(), Some("c.toml"));
    }

    #[test]
    fn splices_table_entries() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.toml");
        std::fs::write(&path, "[bessel.zeros]\nnu = [1.0, 0.5]\ncount = 3\n").unwrap();
        let p = path.to_string_lossy().into_owned();
        let out = expand(os(&["jnu", "--config", &p, "bessel", "zeros", "--count", "4"])).unwrap();
        let out: Vec<String> = out.iter().map(|s| s.to_string_lossy().into_owned()).collect();
        assert_eq!(out[5..], ["--count", "3", "--nu", "1.0,0.5", "--count", "4"]);
    }
}
