//! Serialization of run records: CSV tables and JSON documents, each
//! embedding the resolved configuration that produced them.
//!
//! A CSV file starts with `# key=value` lines (the configuration) followed
//! by the header row and one record per row. Since configuration files use
//! the same `key=value` syntax and ignore the `# ` prefix, every CSV output
//! is itself a valid configuration file.

use std::collections::BTreeMap;

use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::harness::{Cell, Table, Verdict};

pub const FORMAT_VERSION: &str = "hardedge/1";

/// Resolved configuration as ordered `key=value` pairs.
pub type ConfigPairs = BTreeMap<String, String>;

/// Formats a real with 17 significant digits, which round-trips every `f64`.
pub fn format_real(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else if x.is_nan() {
        "NaN".into()
    } else if x > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

fn format_cell(c: &Cell) -> String {
    match c {
        Cell::Int(i) => i.to_string(),
        Cell::Real(x) => format_real(*x),
        Cell::Text(s) => s.clone(),
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Renders a table as CSV preceded by the configuration comment block.
pub fn to_csv(table: &Table, config: &ConfigPairs) -> String {
    let mut out = String::new();
    out.push_str(&format!("# version={FORMAT_VERSION}\n"));
    for (k, v) in config {
        out.push_str(&format!("# {k}={v}\n"));
    }
    let header: Vec<String> = table.columns.iter().map(|c| csv_field(c)).collect();
    out.push_str(&header.join(","));
    out.push('\n');
    for row in &table.rows {
        let fields: Vec<String> = row.iter().map(|c| csv_field(&format_cell(c))).collect();
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    out
}

/// Parses a CSV produced by [`to_csv`] back into its configuration and table.
/// Numeric fields come back as `Int` when they have no decimal point or
/// exponent and as `Real` otherwise.
pub fn from_csv(text: &str) -> Result<(ConfigPairs, Table)> {
    let config = parse_config(text)?;
    let body: String = text
        .lines()
        .filter(|l| !l.starts_with('#'))
        .map(|l| format!("{l}\n"))
        .collect();
    let mut reader = csv::ReaderBuilder::new().from_reader(body.as_bytes());
    let columns = reader
        .headers()
        .map_err(|e| Error::Io(e.to_string()))?
        .iter()
        .map(String::from)
        .collect();
    let mut rows = Vec::new();
    for rec in reader.records() {
        let rec = rec.map_err(|e| Error::Io(e.to_string()))?;
        rows.push(rec.iter().map(parse_cell).collect());
    }
    Ok((config, Table { columns, rows }))
}

fn parse_cell(s: &str) -> Cell {
    let numeric_real = s.contains(['.', 'e', 'E']) || matches!(s, "inf" | "-inf" | "NaN");
    if !numeric_real {
        if let Ok(i) = s.parse::<i64>() {
            return Cell::Int(i);
        }
    }
    match s.parse::<f64>() {
        Ok(x) if numeric_real => Cell::Real(x),
        _ => Cell::Text(s.to_string()),
    }
}

/// Single JSON object with `config`, `results`, `verdict` and `version`.
pub fn to_json(config: &ConfigPairs, results: &Value, verdict: Verdict) -> Result<String> {
    let config: Map<String, Value> = config
        .iter()
        .map(|(k, v)| (k.clone(), Value::String(v.clone())))
        .collect();
    let doc = json!({
        "config": config,
        "results": results,
        "verdict": verdict,
        "version": FORMAT_VERSION,
    });
    let mut s = serde_json::to_string_pretty(&doc).map_err(|e| Error::Io(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

/// Reads configuration pairs from a `key=value` file, a CSV produced by
/// [`to_csv`], or a JSON document produced by [`to_json`].
///
/// Blank lines and lines starting with `#` that do not hold a pair are
/// ignored; in CSV files the header and records end the configuration.
pub fn parse_config(text: &str) -> Result<ConfigPairs> {
    let trimmed = text.trim_start();
    if trimmed.starts_with('{') {
        let doc: Value = serde_json::from_str(trimmed).map_err(|e| Error::Io(e.to_string()))?;
        let cfg = doc
            .get("config")
            .and_then(Value::as_object)
            .ok_or_else(|| Error::Io("JSON document has no config object".into()))?;
        return cfg
            .iter()
            .map(|(k, v)| match v {
                Value::String(s) => Ok((k.clone(), s.clone())),
                other => Ok((k.clone(), other.to_string())),
            })
            .collect();
    }
    let mut pairs = ConfigPairs::new();
    let mut seen_comment_block = false;
    for (no, line) in text.lines().enumerate() {
        let line = line.trim();
        let (body, comment) = match line.strip_prefix('#') {
            Some(rest) => (rest.trim(), true),
            None => (line, false),
        };
        if body.is_empty() {
            continue;
        }
        seen_comment_block |= comment;
        match body.split_once('=') {
            Some((k, v)) => {
                let k = k.trim();
                if k.is_empty() {
                    return Err(Error::Io(format!("line {}: empty key", no + 1)));
                }
                pairs.insert(k.to_string(), v.trim().to_string());
            }
            None if comment => {}
            // CSV header after the configuration block
            None if seen_comment_block => break,
            None => return Err(Error::Io(format!("line {}: expected key=value", no + 1))),
        }
    }
    if let Some(v) = pairs.get("version") {
        if v != FORMAT_VERSION {
            return Err(Error::Io(format!("unsupported format version {v}")));
        }
    }
    pairs.remove("version");
    Ok(pairs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample_table() -> Table {
        let mut t = Table::new(&["x", "n", "label"]);
        t.push(vec![Cell::Real(0.1), Cell::Int(3), Cell::Text("a,b".into())]);
        t.push(vec![Cell::Real(-1.0 / 3.0), Cell::Int(-4), Cell::Text("4x".into())]);
        t.push(vec![Cell::Real(f64::INFINITY), Cell::Int(0), Cell::Text("q\"t".into())]);
        t
    }

    #[test]
    fn reals_round_trip() {
        for x in [0.1, 1.0 / 3.0, 2.0 / std::f64::consts::PI, 1e-300, -5e300, f64::MIN_POSITIVE, 0.0] {
            assert_eq!(format_real(x).parse::<f64>().unwrap(), x);
        }
        assert_eq!(format_real(1.5), "1.5000000000000000e0");
    }

    #[test]
    fn csv_round_trip() {
        let mut cfg = ConfigPairs::new();
        cfg.insert("command".into(), "clt".into());
        cfg.insert("lambdas".into(), "50,100".into());
        let t = sample_table();
        let text = to_csv(&t, &cfg);
        let (cfg2, t2) = from_csv(&text).unwrap();
        assert_eq!(cfg, cfg2);
        assert_eq!(t, t2);
        assert_eq!(to_csv(&t2, &cfg2), text);
    }

    #[test]
    fn empty_table_is_header_only() {
        let t = Table::new(&["rho", "i_bess"]);
        let text = to_csv(&t, &ConfigPairs::new());
        assert_eq!(text, "# version=hardedge/1\nrho,i_bess\n");
        let (_, t2) = from_csv(&text).unwrap();
        assert!(t2.rows.is_empty());
        assert_eq!(t2.columns, vec!["rho", "i_bess"]);
    }

    #[test]
    fn json_has_the_four_keys() {
        let mut cfg = ConfigPairs::new();
        cfg.insert("seed".into(), "7".into());
        let text = to_json(&cfg, &json!({ "minimum": { "rho": 0.5 } }), Verdict::Pass).unwrap();
        let v: Value = serde_json::from_str(&text).unwrap();
        let keys: Vec<&String> = v.as_object().unwrap().keys().collect();
        assert_eq!(keys, ["config", "results", "verdict", "version"]);
        assert_eq!(v["verdict"], "pass");
        assert_eq!(v["version"], FORMAT_VERSION);
        assert_eq!(parse_config(&text).unwrap(), cfg);
    }

    #[test]
    fn config_file_syntax() {
        let text = "# a comment\n\nbeta = 2\n# lambda=3\nseed=9\n";
        let cfg = parse_config(text).unwrap();
        assert_eq!(cfg.get("beta").unwrap(), "2");
        assert_eq!(cfg.get("lambda").unwrap(), "3");
        assert_eq!(cfg.get("seed").unwrap(), "9");
        assert!(parse_config("beta\n").is_err());
        assert!(parse_config("# version=hardedge/0\n").is_err());
    }
}
