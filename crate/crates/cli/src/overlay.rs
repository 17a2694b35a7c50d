//! `--config <json>` support: the file's keys are turned into long flags and
//! spliced in after the subcommand, skipping any flag already given on the
//! command line so explicit arguments win.

use std::ffi::OsString;

use serde_json::Value;

use crate::error::{CliError, CliResult};

const SUBCOMMANDS: &[&str] = &["fetch", "fit-distances", "simulate-gravity", "compute-pei", "export-map"];

fn config_path(args: &[OsString]) -> CliResult<Option<String>> {
    let mut it = args.iter().skip(1);
    while let Some(a) = it.next() {
        let a = a.to_string_lossy();
        if a == "--config" {
            return it
                .next()
                .map(|v| Some(v.to_string_lossy().into_owned()))
                .ok_or_else(|| CliError::Usage("--config needs a file argument".into()));
        }
        if let Some(v) = a.strip_prefix("--config=") {
            return Ok(Some(v.to_string()));
        }
    }
    Ok(None)
}

fn given(args: &[OsString], flag: &str) -> bool {
    args.iter().any(|a| {
        let a = a.to_string_lossy();
        a == flag || a.starts_with(&format!("{flag}="))
    })
}

fn scalar(key: &str, v: &Value) -> CliResult<String> {
    match v {
        Value::String(s) => Ok(s.clone()),
        Value::Number(n) => Ok(n.to_string()),
        _ => Err(CliError::Usage(format!("config key '{key}' must be a string, number, boolean or list"))),
    }
}

/// Returns `args` with the config file's settings inserted.
pub fn apply(args: Vec<OsString>) -> CliResult<Vec<OsString>> {
    let Some(path) = config_path(&args)? else {
        return Ok(args);
    };
    let text = std::fs::read_to_string(&path)
        .map_err(|e| CliError::Usage(format!("cannot read config {path}: {e}")))?;
    let json: Value =
        serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("config {path} is not valid JSON: {e}")))?;
    let Value::Object(map) = json else {
        return Err(CliError::Usage(format!("config {path} must be a JSON object")));
    };

    let mut extra: Vec<OsString> = Vec::new();
    for (key, value) in &map {
        if key == "config" {
            return Err(CliError::Usage("a config file cannot name another config".into()));
        }
        let flag = format!("--{}", key.replace('_', "-"));
        if given(&args, &flag) {
            continue;
        }
        match value {
            Value::Null | Value::Bool(false) => {}
            Value::Bool(true) => extra.push(flag.into()),
            Value::Array(items) => {
                for item in items {
                    extra.push(flag.clone().into());
                    extra.push(scalar(key, item)?.into());
                }
            }
            other => {
                extra.push(flag.into());
                extra.push(scalar(key, other)?.into());
            }
        }
    }

    let at = args
        .iter()
        .position(|a| SUBCOMMANDS.contains(&a.to_string_lossy().as_ref()))
        .map_or(args.len(), |i| i + 1);
    let mut out = args[..at].to_vec();
    out.extend(extra);
    out.extend_from_slice(&args[at..]);
    Ok(out)
}
