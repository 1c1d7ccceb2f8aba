use std::fs;

use clap::Command;
use serde_json::Value;

use crate::CliError;

fn long_takes_value(cmd: &Command, root: &Command, name: &str) -> Option<bool> {
    cmd.get_arguments()
        .chain(root.get_arguments())
        .find(|a| a.get_long() == Some(name))
        .map(|a| a.get_action().takes_values())
}

fn config_path(argv: &[String]) -> Result<Option<String>, CliError> {
    for (i, t) in argv.iter().enumerate().skip(1) {
        if let Some(p) = t.strip_prefix("--config=") {
            return Ok(Some(p.to_string()));
        }
        if t == "--config" {
            return argv
                .get(i + 1)
                .cloned()
                .map(Some)
                .ok_or_else(|| CliError::Invalid("--config needs a file path".into()));
        }
    }
    Ok(None)
}

/// Appends `--key=value` tokens for config entries whose flags are absent from argv,
/// so explicit flags win. Keys may use `_` or `-`. Unknown keys are rejected.
pub fn merge_config(argv: Vec<String>, root: &Command) -> Result<Vec<String>, CliError> {
    let Some(path) = config_path(&argv)? else {
        return Ok(argv);
    };
    let text = fs::read_to_string(&path).map_err(|e| CliError::Invalid(format!("config {path}: {e}")))?;
    merge_config_text(argv, &text, root).map_err(|e| match e {
        CliError::Invalid(m) => CliError::Invalid(format!("config {path}: {m}")),
        other => other,
    })
}

/// Merge step on config text already in memory.
pub fn merge_config_text(argv: Vec<String>, text: &str, root: &Command) -> Result<Vec<String>, CliError> {
    let map: serde_json::Map<String, Value> =
        serde_json::from_str(text).map_err(|e| CliError::Invalid(e.to_string()))?;

    // Walk to the innermost subcommand named on the command line.
    let mut cmd = root;
    let mut path_names = Vec::new();
    let mut i = 1;
    while i < argv.len() {
        let t = &argv[i];
        if let Some(flag) = t.strip_prefix("--") {
            if !flag.contains('=') && long_takes_value(cmd, root, flag).unwrap_or(false) {
                i += 1;
            }
        } else if !t.starts_with('-') {
            let Some(sub) = cmd.find_subcommand(t) else { break };
            cmd = sub;
            path_names.push(t.clone());
        }
        i += 1;
    }
    let where_ = if path_names.is_empty() { "qmlab".to_string() } else { path_names.join(" ") };

    let mut out = argv.clone();
    for (key, value) in map {
        let flag = key.replace('_', "-");
        if flag == "config" {
            return Err(CliError::Invalid("config files cannot name another config".into()));
        }
        let Some(takes_value) = long_takes_value(cmd, root, &flag) else {
            return Err(CliError::Invalid(format!("config key '{key}' is not a flag of '{where_}'")));
        };
        let dashed = format!("--{flag}");
        if argv.iter().any(|t| *t == dashed || t.starts_with(&format!("{dashed}="))) {
            continue;
        }
        let rendered = match &value {
            Value::Bool(b) if !takes_value => {
                if *b {
                    out.push(dashed);
                }
                continue;
            }
            Value::Bool(b) => b.to_string(),
            Value::Number(n) => n.to_string(),
            Value::String(s) => s.clone(),
            Value::Array(items) => items
                .iter()
                .map(|v| match v {
                    Value::Number(n) => Ok(n.to_string()),
                    Value::String(s) => Ok(s.clone()),
                    _ => Err(CliError::Invalid(format!("config key '{key}' holds a nested value"))),
                })
                .collect::<Result<Vec<_>, _>>()?
                .join(","),
            Value::Null | Value::Object(_) => {
                return Err(CliError::Invalid(format!("config key '{key}' must be a scalar or a list")))
            }
        };
        if !takes_value {
            return Err(CliError::Invalid(format!("config key '{key}' is a switch and needs true or false")));
        }
        out.push(format!("{dashed}={rendered}"));
    }
    Ok(out)
}
