//! Path serialization and run manifests.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::params::SimulationConfig;
use crate::path::{evaluate_path, SamplePath};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
}

impl OutputFormat {
    pub fn extension(self) -> &'static str {
        match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Json => "json",
        }
    }
}

#[derive(Serialize)]
struct JsonPath<'a> {
    t: &'a [f64],
    value: &'a [f64],
}

/// Renders a path at its knots (with the origin) or on `grid`.
///
/// CSV has header `t,value` and 17 significant digits per number.
pub fn render_path(
    path: &SamplePath,
    grid: Option<&[f64]>,
    format: OutputFormat,
) -> Result<String> {
    let (t, v) = match grid {
        Some(g) => (g.to_vec(), evaluate_path(path, g)?),
        None => path.points(),
    };
    Ok(match format {
        OutputFormat::Csv => {
            let mut s = String::with_capacity(48 * t.len() + 8);
            s.push_str("t,value\n");
            for (a, b) in t.iter().zip(&v) {
                writeln!(s, "{a:.16e},{b:.16e}").expect("writing to a String");
            }
            s
        }
        OutputFormat::Json => serde_json::to_string(&JsonPath { t: &t, value: &v })? + "\n",
    })
}

/// Writes `contents` to `file` through a temporary sibling and returns its SHA-256.
pub fn write_atomic(file: &Path, contents: &[u8]) -> Result<String> {
    let name = file
        .file_name()
        .ok_or_else(|| Error::Parameter(format!("invalid output path {}", file.display())))?;
    let tmp = file.with_file_name(format!(".{}.tmp", name.to_string_lossy()));
    fs::write(&tmp, contents)?;
    fs::rename(&tmp, file)?;
    Ok(sha256_hex(contents))
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

pub fn sha256_file(file: &Path) -> Result<String> {
    Ok(sha256_hex(&fs::read(file)?))
}

/// One written output file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OutputDigest {
    pub file: String,
    pub seed: u64,
    pub sha256: String,
}

/// Everything needed to regenerate a `generate` run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool_version: String,
    pub config: SimulationConfig,
    pub paths: usize,
    /// How per-path seeds derive from `config.seed`.
    pub seed_scheme: String,
    pub seeds: Vec<u64>,
    pub format: OutputFormat,
    pub grid: Option<Vec<f64>>,
    pub table_cache_keys: Vec<String>,
    pub wall_clock_seconds: f64,
    pub outputs: Vec<OutputDigest>,
}

impl RunManifest {
    pub fn load(file: &Path) -> Result<Self> {
        Ok(serde_json::from_slice(&fs::read(file)?)?)
    }

    pub fn save(&self, file: &Path) -> Result<()> {
        write_atomic(file, &serde_json::to_vec_pretty(self)?)?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::path::Provenance;

    fn toy() -> SamplePath {
        SamplePath {
            scale: 2,
            m0: 1,
            first_knot: 0.5,
            spacing: 0.25,
            values: vec![0.1, -0.2, 1.0 / 3.0],
            provenance: Provenance {
                config_digest: String::new(),
                seed: 1,
            },
        }
    }

    #[test]
    fn csv_roundtrips_losslessly() {
        let s = render_path(&toy(), None, OutputFormat::Csv).unwrap();
        let lines: Vec<&str> = s.lines().collect();
        assert_eq!(lines[0], "t,value");
        assert_eq!(lines.len(), 5);
        let last: f64 = lines[4].split(',').nth(1).unwrap().parse().unwrap();
        assert_eq!(last, 1.0 / 3.0);
    }

    #[test]
    fn json_on_grid() {
        let s = render_path(&toy(), Some(&[0.0, 0.25, 1.0]), OutputFormat::Json).unwrap();
        let v: serde_json::Value = serde_json::from_str(&s).unwrap();
        assert_eq!(v["value"][1].as_f64().unwrap(), 0.05);
        assert!(render_path(&toy(), Some(&[2.0]), OutputFormat::Json).is_err());
    }
}
