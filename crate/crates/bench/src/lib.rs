//! Shared fixtures for the criterion benchmarks.

use hermsynth_core::{HurstVector, ProcessKind, SimulationConfig};

/// Configuration used by the path benchmarks: `J = 12`, `ε = 0.25`.
pub fn bench_config(kind: ProcessKind) -> SimulationConfig {
    let cfg = match kind {
        ProcessKind::GenHermite3 => SimulationConfig::new(
            kind,
            HurstVector::new(vec![0.85, 0.9, 0.95]).expect("valid h"),
        ),
        _ => SimulationConfig::with_hurst(kind, 0.75),
    };
    cfg.expect("valid configuration").scale(12).epsilon(0.25)
}
