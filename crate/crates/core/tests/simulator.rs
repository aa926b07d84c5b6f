use std::f64::consts::PI;

use hermsynth_core::{
    build_path, integral_matrix_gen3, sigma_general, CovarianceTable, HurstVector, PartitionSet,
    ProcessKind, QuadratureSpec, SimulationConfig, Simulator,
};
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn uniform(rng: &mut ChaCha8Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64
}

fn random_z(d: usize, len: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..d)
        .map(|_| (0..len).map(|_| 4.0 * uniform(&mut rng) - 2.0).collect())
        .collect()
}

#[test]
fn fbm_increments_are_scaled_farima() {
    let cfg = SimulationConfig::with_hurst(ProcessKind::Fbm, 0.7)
        .unwrap()
        .scale(10);
    let sim = Simulator::new(cfg).unwrap();
    let z = sim.farima(5).unwrap();
    let inc = sim.increments(5).unwrap();
    let (m0, mmax) = sim.bounds();
    assert_eq!(inc.values.len() as i64, mmax - m0 + 1);
    let f = (-10.0f64 * 0.7).exp2();
    for (i, v) in inc.values.iter().enumerate() {
        assert_eq!(*v, f * z[0][m0 as usize + i]);
    }
}

#[test]
fn rosenblatt_width_one_matches_hand_formula() {
    let cfg = SimulationConfig::with_hurst(ProcessKind::Rosenblatt, 0.75)
        .unwrap()
        .scale(9)
        .epsilon(1e-4);
    let sim = Simulator::new(cfg).unwrap();
    assert_eq!(sim.width(), 1);
    let (m0, mmax) = sim.bounds();
    let z = random_z(1, mmax as usize + 1, 1);
    let inc = sim.increments_from(&z).unwrap();
    let t = sim.table().unwrap();
    let (v0, v1) = (
        t.value(0).unwrap() / (2.0 * PI),
        t.value(1).unwrap() / (2.0 * PI),
    );
    let c0 = sim.covariances().get(0, 0, 0).unwrap();
    let c1 = sim.covariances().get(0, 0, 1).unwrap();
    let f = (-9.0f64 * 0.75).exp2();
    let zz = &z[0];
    let first = f * (zz[m0 as usize].powi(2) - c0) * v0;
    assert!((inc.values[0] - first).abs() < 1e-14);
    for m in (m0 + 1) as usize..=mmax as usize {
        let want = f * ((zz[m] * zz[m] - c0) * v0 + 2.0 * (zz[m] * zz[m - 1] - c1) * v1);
        assert!((inc.values[m - m0 as usize] - want).abs() < 1e-13);
    }
    // With Z ≡ 0 only the Wick centering survives.
    let zero = vec![vec![0.0; mmax as usize + 1]];
    let inc0 = sim.increments_from(&zero).unwrap();
    assert!((inc0.values[0] + f * c0 * v0).abs() < 1e-15);
    assert!((inc0.values[1] + f * (c0 * v0 + 2.0 * c1 * v1)).abs() < 1e-15);
}

/// `s_m` by direct enumeration of all tuples in `[m0, m]^3` with spread ≤ W.
fn brute_force_d3(sim: &Simulator, h: &HurstVector, z: &[Vec<f64>]) -> Vec<f64> {
    let (m0, mmax) = sim.bounds();
    let w = sim.width() as i64;
    let table = integral_matrix_gen3(h, w as usize, QuadratureSpec::default()).unwrap();
    let cov = CovarianceTable::build(h, w as usize).unwrap();
    let parts = PartitionSet::new(3).unwrap();
    let scale = (-(sim.config().scale as f64) * h.hurst()).exp2() / (4.0 * PI * PI);
    let mut out = Vec::new();
    let mut acc = 0.0;
    for m in m0..=mmax {
        let lo = m0.max(m - w);
        for k1 in lo..=m {
            for k2 in lo..=m {
                for k3 in lo..=m {
                    if k1.max(k2).max(k3) != m {
                        continue;
                    }
                    let k = [k1, k2, k3];
                    let vals = [z[0][k1 as usize], z[1][k2 as usize], z[2][k3 as usize]];
                    let s = sigma_general(&parts, &vals, &k, &cov).unwrap();
                    acc += s * table.value2(k2 - k1, k3 - k2).unwrap();
                }
            }
        }
        out.push(acc * scale);
    }
    out
}

#[test]
fn hermite3_driver_matches_tuple_enumeration() {
    let cfg = SimulationConfig::with_hurst(ProcessKind::Hermite3, 0.8)
        .unwrap()
        .scale(6)
        .epsilon(0.27);
    let sim = Simulator::new(cfg.clone()).unwrap();
    assert_eq!(sim.width(), 3);
    let (_, mmax) = sim.bounds();
    let z1 = random_z(1, mmax as usize + 1, 7);
    let got = sim.increments_from(&z1).unwrap().cumulative();
    let z3 = vec![z1[0].clone(), z1[0].clone(), z1[0].clone()];
    let want = brute_force_d3(&sim, &cfg.hurst, &z3);
    for (g, w) in got.iter().zip(&want) {
        assert!((g - w).abs() < 1e-10 * w.abs().max(1.0), "{g} vs {w}");
    }
}

#[test]
fn genhermite3_driver_matches_tuple_enumeration() {
    let h = HurstVector::new(vec![0.8, 0.9, 0.95]).unwrap();
    let cfg = SimulationConfig::new(ProcessKind::GenHermite3, h.clone())
        .unwrap()
        .scale(6)
        .epsilon(0.27);
    let sim = Simulator::new(cfg).unwrap();
    let (_, mmax) = sim.bounds();
    let z = random_z(3, mmax as usize + 1, 8);
    let got = sim.increments_from(&z).unwrap().cumulative();
    let want = brute_force_d3(&sim, &h, &z);
    for (g, w) in got.iter().zip(&want) {
        assert!((g - w).abs() < 1e-10 * w.abs().max(1.0), "{g} vs {w}");
    }
}

#[test]
fn equal_h_general_driver_reproduces_hermite3() {
    for &hurst in &[0.65, 0.85] {
        let base = SimulationConfig::with_hurst(ProcessKind::Hermite3, hurst)
            .unwrap()
            .scale(10)
            .epsilon(0.2);
        let gen = SimulationConfig::new(
            ProcessKind::GenHermite3,
            HurstVector::equal(3, hurst).unwrap(),
        )
        .unwrap()
        .scale(10)
        .epsilon(0.2);
        let a = Simulator::new(base).unwrap().path(3).unwrap();
        let b = Simulator::new(gen).unwrap().path(3).unwrap();
        assert_eq!(a.values.len(), b.values.len());
        for (x, y) in a.values.iter().zip(&b.values) {
            assert!((x - y).abs() < 1e-8, "{x} vs {y}");
        }
    }
}

#[test]
fn paths_are_deterministic_and_well_formed() {
    for kind in ProcessKind::ALL {
        let cfg = match kind {
            ProcessKind::GenHermite3 => {
                SimulationConfig::new(kind, HurstVector::new(vec![0.8, 0.85, 0.9]).unwrap())
                    .unwrap()
            }
            _ => SimulationConfig::with_hurst(kind, 0.7).unwrap(),
        }
        .scale(10)
        .seed(99);
        let p1 = build_path(&cfg).unwrap();
        let p2 = build_path(&cfg).unwrap();
        assert_eq!(p1, p2);
        let (m0, mmax) = hermsynth_core::index_bounds(10, 0.75, 1.0).unwrap();
        assert_eq!(p1.knot_count() as i64, mmax - m0 + 1);
        assert_eq!(p1.evaluate(0.0).unwrap(), 0.0);
        for i in 1..p1.knot_count() {
            assert!((p1.knot_time(i) - p1.knot_time(i - 1) - 2f64.powi(-10)).abs() < 1e-15);
        }
        let other = build_path(&cfg.clone().seed(100)).unwrap();
        assert_ne!(p1.values, other.values);
    }
}

#[test]
fn one_knot_increments_scale_like_two_to_minus_h() {
    for kind in [ProcessKind::Fbm, ProcessKind::Rosenblatt] {
        let hurst = 0.75;
        let sd = |j: u32, seed: u64| {
            let cfg = SimulationConfig::with_hurst(kind, hurst)
                .unwrap()
                .scale(j)
                .epsilon(0.2);
            let inc = Simulator::new(cfg).unwrap().increments(seed).unwrap();
            let v = &inc.values[1..];
            let n = v.len().min(10_000);
            (v[..n].iter().map(|x| x * x).sum::<f64>() / n as f64).sqrt()
        };
        let ratio = sd(15, 1) / sd(14, 2);
        let target = (-hurst).exp2();
        assert!(
            (ratio / target - 1.0).abs() < 0.1,
            "{kind}: {ratio} vs {target}"
        );
    }
}
