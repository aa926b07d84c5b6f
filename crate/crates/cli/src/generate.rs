//! `generate`: simulate paths, write them atomically and record a manifest.

use std::fs;
use std::path::Path;
use std::time::Instant;

use hermsynth_core::export::{render_path, write_atomic, OutputDigest, OutputFormat, RunManifest};
use hermsynth_core::{path_seed, SimulationConfig, Simulator, TableCache};
use rayon::prelude::*;

use crate::args::{Format, GenerateArgs, ModelArgs};
use crate::CliError;

pub const MANIFEST_FILE: &str = "manifest.json";
pub const SEED_SCHEME: &str =
    "splitmix64(master + (index + 1) * 0x9E3779B97F4A7C15), index counted from 0";

/// What a run should produce.
pub struct RunSpec {
    pub config: SimulationConfig,
    pub paths: usize,
    pub format: OutputFormat,
    pub grid: Option<Vec<f64>>,
}

pub fn file_name(index: usize, format: OutputFormat) -> String {
    format!("path_{index:05}.{}", format.extension())
}

pub fn cache_for(model: &ModelArgs) -> Option<TableCache> {
    model
        .cache
        .as_ref()
        .map(TableCache::new)
        .or_else(TableCache::from_env)
}

/// Simulates `spec` into `out` and returns the manifest (already saved there).
pub fn run(
    spec: &RunSpec,
    out: &Path,
    cache: Option<&TableCache>,
) -> Result<RunManifest, CliError> {
    if spec.paths == 0 {
        return Err(CliError::Usage("--paths must be positive".into()));
    }
    let start = Instant::now();
    fs::create_dir_all(out)?;
    let sim = Simulator::with_cache(spec.config.clone(), cache)?;
    if let Some(grid) = &spec.grid {
        let (m0, mmax) = sim.bounds();
        let j = spec.config.scale as f64;
        let last = mmax as f64 * 2f64.powf(-j) + 2f64.powf(-spec.config.a * j);
        if let Some(t) = grid.iter().find(|&&t| !(t >= 0.0 && t <= last)) {
            return Err(CliError::Usage(format!(
                "grid time {t} outside [0, {last}] (knots m = {m0}..{mmax})"
            )));
        }
    }
    let seeds: Vec<u64> = (0..spec.paths as u64)
        .map(|i| path_seed(spec.config.seed, i))
        .collect();
    let outputs = seeds
        .par_iter()
        .enumerate()
        .map(|(i, &seed)| {
            let path = sim.path(seed)?;
            let text = render_path(&path, spec.grid.as_deref(), spec.format)?;
            let file = file_name(i, spec.format);
            let sha256 = write_atomic(&out.join(&file), text.as_bytes())?;
            Ok(OutputDigest { file, seed, sha256 })
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    let manifest = RunManifest {
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        config: spec.config.clone(),
        paths: spec.paths,
        seed_scheme: SEED_SCHEME.to_string(),
        seeds,
        format: spec.format,
        grid: spec.grid.clone(),
        table_cache_keys: sim.cache_keys().to_vec(),
        wall_clock_seconds: start.elapsed().as_secs_f64(),
        outputs,
    };
    manifest.save(&out.join(MANIFEST_FILE))?;
    Ok(manifest)
}

/// Entry point of the subcommand; returns a human-readable summary.
pub fn cmd_generate(args: &GenerateArgs) -> Result<String, CliError> {
    let cache = cache_for(&args.model);
    if let Some(manifest_file) = &args.rerun {
        return rerun(manifest_file, &args.out, cache.as_ref());
    }
    let spec = RunSpec {
        config: args.model.config(None)?,
        paths: args.paths,
        format: match args.format {
            Format::Csv => OutputFormat::Csv,
            Format::Json => OutputFormat::Json,
        },
        grid: args.grid.clone(),
    };
    let manifest = run(&spec, &args.out, cache.as_ref())?;
    Ok(format!(
        "wrote {} path(s) to {} in {:.2}s",
        manifest.paths,
        args.out.display(),
        manifest.wall_clock_seconds
    ))
}

/// Regenerates a manifest's run into `out` and fails on any digest mismatch.
fn rerun(manifest_file: &Path, out: &Path, cache: Option<&TableCache>) -> Result<String, CliError> {
    let old = RunManifest::load(manifest_file)?;
    old.config.validate().map_err(CliError::usage)?;
    let spec = RunSpec {
        config: old.config.clone(),
        paths: old.paths,
        format: old.format,
        grid: old.grid.clone(),
    };
    let new = run(&spec, out, cache)?;
    let mismatched: Vec<&str> = old
        .outputs
        .iter()
        .zip(&new.outputs)
        .filter(|(a, b)| a != b)
        .map(|(a, _)| a.file.as_str())
        .collect();
    if !mismatched.is_empty() || old.outputs.len() != new.outputs.len() {
        return Err(CliError::Failure(format!(
            "rerun differs from manifest in {} file(s): {}",
            mismatched.len(),
            mismatched.join(", ")
        )));
    }
    Ok(format!(
        "reproduced {} path(s) bit-identically in {}",
        new.paths,
        out.display()
    ))
}
