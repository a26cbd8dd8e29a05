use std::collections::BTreeMap;
use std::path::Path;

/// Settings read from a flat `key = value` file. Blank lines and `#` comments are skipped.
#[derive(Debug, Default, Clone, PartialEq)]
pub struct FileConfig {
    pub precision: Option<usize>,
    pub tol: Option<f64>,
    pub json: Option<bool>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, String> {
        let mut map = BTreeMap::new();
        for (n, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| format!("config line {}: expected key = value", n + 1))?;
            map.insert(k.trim().to_string(), (n + 1, v.trim().to_string()));
        }
        let mut cfg = Self::default();
        for (k, (n, v)) in map {
            let err = |what: &str| format!("config line {n}: {k} must be {what}");
            match k.as_str() {
                "precision" => {
                    cfg.precision = Some(v.parse().map_err(|_| err("a positive integer"))?)
                }
                "tol" => cfg.tol = Some(v.parse().map_err(|_| err("a number"))?),
                "json" => cfg.json = Some(v.parse().map_err(|_| err("true or false"))?),
                _ => return Err(format!("config line {n}: unknown key {k}")),
            }
        }
        Ok(cfg)
    }
}
