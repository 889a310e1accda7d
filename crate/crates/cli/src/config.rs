//! `--config` files: one `key=value` per line, `#` starts a comment. Each
//! line becomes `--key value` (or just `--key` for `true`) and is inserted
//! right after the subcommand, so flags given on the command line win.

use anyhow::{bail, Context, Result};

pub fn expand(mut args: Vec<String>) -> Result<Vec<String>> {
    let Some(path) = config_path(&args)? else {
        return Ok(args);
    };
    let text = std::fs::read_to_string(&path).with_context(|| format!("reading config {path}"))?;
    let extra = parse(&text)?;
    let sub = subcommand_index(&args).unwrap_or(args.len());
    let at = (sub + 1).min(args.len());
    args.splice(at..at, extra);
    Ok(args)
}

fn config_path(args: &[String]) -> Result<Option<String>> {
    let mut found = None;
    let mut it = args.iter().skip(1);
    while let Some(a) = it.next() {
        if a == "--config" {
            match it.next() {
                Some(p) => found = Some(p.clone()),
                None => bail!("--config needs a path"),
            }
        } else if let Some(p) = a.strip_prefix("--config=") {
            found = Some(p.to_string());
        }
    }
    Ok(found)
}

fn subcommand_index(args: &[String]) -> Option<usize> {
    let mut i = 1;
    while i < args.len() {
        let a = &args[i];
        if a == "--config" || a == "--threads" {
            i += 2;
        } else if a.starts_with('-') {
            i += 1;
        } else {
            return Some(i);
        }
    }
    None
}

pub fn parse(text: &str) -> Result<Vec<String>> {
    let mut out = Vec::new();
    for (no, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            bail!("config line {}: expected key=value", no + 1);
        };
        let key = key.trim().replace('_', "-");
        let value = value.trim();
        match value {
            "true" => out.push(format!("--{key}")),
            "false" => {}
            _ => {
                out.push(format!("--{key}"));
                out.push(value.to_string());
            }
        }
    }
    Ok(out)
}
