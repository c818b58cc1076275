use std::path::Path;

/// Reads `key = value` lines into flag arguments (`--key value`).
///
/// `#` starts a comment. `true` turns into a bare flag and `false` drops the
/// key, so boolean switches can be set from the file.
pub fn config_args(path: &Path) -> Result<Vec<String>, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| format!("{}:{}: expected key = value", path.display(), i + 1))?;
        let key = key.trim().replace('_', "-");
        if key.is_empty() {
            return Err(format!("{}:{}: empty key", path.display(), i + 1));
        }
        match value.trim() {
            "true" => out.push(format!("--{key}")),
            "false" => {}
            v => {
                out.push(format!("--{key}"));
                out.push(v.to_string());
            }
        }
    }
    Ok(out)
}

/// Splits `--config PATH` out of the raw arguments and splices the file's
/// flags in right after the subcommand name, so command-line flags given
/// later take precedence.
pub fn expand(args: Vec<String>, subcommands: &[&str]) -> Result<Vec<String>, String> {
    let mut rest = Vec::with_capacity(args.len());
    let mut config = None;
    let mut it = args.into_iter();
    while let Some(a) = it.next() {
        if a == "--config" {
            config = Some(it.next().ok_or("--config needs a path")?);
        } else if let Some(p) = a.strip_prefix("--config=") {
            config = Some(p.to_string());
        } else {
            rest.push(a);
        }
    }
    let Some(path) = config else { return Ok(rest) };
    let extra = config_args(Path::new(&path))?;
    let at = rest.iter().position(|a| subcommands.contains(&a.as_str())).map_or(rest.len(), |i| i + 1);
    rest.splice(at..at, extra);
    Ok(rest)
}
