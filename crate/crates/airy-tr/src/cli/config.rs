//! Flat `key = value` configuration merged under command-line flags.

use clap::{ArgAction, Command};
use std::collections::BTreeSet;

/// `key = value` or `key: value` lines; `#` starts a comment.
pub fn parse_config(text: &str) -> Result<Vec<(String, String)>, String> {
    let mut out = Vec::new();
    for (no, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .or_else(|| line.split_once(':'))
            .ok_or_else(|| format!("config line {}: expected key = value", no + 1))?;
        let k = k.trim().trim_start_matches("--").replace('_', "-");
        if k.is_empty() {
            return Err(format!("config line {}: empty key", no + 1));
        }
        out.push((k, v.trim().trim_matches('"').to_string()));
    }
    Ok(out)
}

fn subcommand_path<'a>(root: &'a Command, argv: &[String]) -> Vec<&'a Command> {
    let mut path = vec![root];
    for tok in argv.iter().skip(1) {
        if tok.starts_with('-') {
            break;
        }
        match path.last().unwrap().find_subcommand(tok) {
            Some(c) => path.push(c),
            None => break,
        }
    }
    path
}

fn all_long_names(c: &Command, acc: &mut BTreeSet<String>) {
    for a in c.get_arguments() {
        if let Some(l) = a.get_long() {
            acc.insert(l.to_string());
        }
    }
    for s in c.get_subcommands() {
        all_long_names(s, acc);
    }
}

/// Appends config entries that the selected subcommand accepts and that
/// were not given as flags. Keys unknown to every subcommand are errors.
pub fn merge(root: &Command, mut argv: Vec<String>) -> Result<Vec<String>, String> {
    let pos = argv.iter().position(|a| a == "--config" || a.starts_with("--config="));
    let Some(pos) = pos else { return Ok(argv) };
    let path = if let Some(p) = argv[pos].strip_prefix("--config=") {
        let p = p.to_string();
        argv.remove(pos);
        p
    } else {
        if pos + 1 >= argv.len() {
            return Err("--config needs a path".into());
        }
        let p = argv.remove(pos + 1);
        argv.remove(pos);
        p
    };
    let text = std::fs::read_to_string(&path).map_err(|e| format!("cannot read config {path}: {e}"))?;
    let entries = parse_config(&text)?;
    let mut known = BTreeSet::new();
    all_long_names(root, &mut known);
    let cmd = *subcommand_path(root, &argv).last().unwrap();
    let given: BTreeSet<String> = argv
        .iter()
        .filter_map(|a| a.strip_prefix("--"))
        .map(|a| a.split('=').next().unwrap().to_string())
        .collect();
    for (k, v) in entries {
        if !known.contains(&k) {
            return Err(format!("unknown config key `{k}`"));
        }
        if given.contains(&k) {
            continue;
        }
        let Some(arg) = cmd.get_arguments().find(|a| a.get_long() == Some(k.as_str())) else {
            continue;
        };
        match arg.get_action() {
            ArgAction::SetTrue => match v.as_str() {
                "true" | "yes" | "1" => argv.push(format!("--{k}")),
                "false" | "no" | "0" => {}
                _ => return Err(format!("config key `{k}` expects a boolean")),
            },
            _ => {
                argv.push(format!("--{k}"));
                argv.push(v);
            }
        }
    }
    Ok(argv)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_flat_files() {
        let c = parse_config("# comment\nchi_max = 3\norder: 20  # trailing\n\nout = \"a.json\"\n").unwrap();
        assert_eq!(
            c,
            vec![("chi-max".into(), "3".into()), ("order".into(), "20".into()), ("out".into(), "a.json".into())]
        );
        assert!(parse_config("novalue\n").is_err());
    }
}
