//! Property tests for the structural invariants.

use icelab_core::core_model::{GaugeKind, SixVertexConfig, SpectralParams, WeightTable};
use icelab_core::ik_determinants;
use icelab_core::schur_engine::{point_config, Partition};
use icelab_core::stochastic_simulator::{sample_configuration, StochasticParams};
use icelab_core::Complex64;
use proptest::prelude::*;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// Constructing a configuration from arbitrary bit-grids either yields a
    /// conservation-valid state or errors; it never panics, and on success
    /// every vertex has one of the six types.
    #[test]
    fn config_construction_total(vertical in prop::collection::vec(0u8..2, 12),
                                 horizontal in prop::collection::vec(0u8..2, 12)) {
        // 3 x 3 grid: vertical 3*4 = 12, horizontal 4*3 = 12
        if let Ok(cfg) = SixVertexConfig::new(3, 3, vertical, horizontal) {
            for j in 1..=3 {
                for i in 1..=3 {
                    prop_assert!(cfg.vertex_type(i, j).is_some());
                }
            }
            cfg.boundary().check_flow().unwrap();
        }
    }

    /// Stochasticity of the spectral weights holds identically in (u, t).
    #[test]
    fn spectral_weights_are_stochastic(u in 0.01f64..0.95, t in 0.01f64..0.95) {
        let w = WeightTable::from_spectral(SpectralParams::new(c(u, 0.0), c(t, 0.0)).unwrap()).unwrap();
        prop_assert!((w.b1 + w.c1 - c(1.0, 0.0)).norm() < 1e-14);
        prop_assert!((w.b2 + w.c2 - c(1.0, 0.0)).norm() < 1e-14);
    }

    /// Gauge transformations never change the two invariant ratios.
    #[test]
    fn gauge_preserves_invariants(kind in 0usize..4, alpha in 0.2f64..3.0,
                                  u in 0.05f64..0.9, t in 0.05f64..0.9) {
        let w = WeightTable::from_spectral(SpectralParams::new(c(u, 0.0), c(t, 0.0)).unwrap()).unwrap();
        let kind = [GaugeKind::GlobalScale, GaugeKind::CTilt, GaugeKind::ATilt, GaugeKind::BTilt][kind];
        let g = w.gauge_transform(kind, c(alpha, 0.0)).unwrap();
        let (a1, a2) = w.gauge_invariants();
        let (b1, b2) = g.gauge_invariants();
        prop_assert!((a1 - b1).norm() < 1e-12 * a1.norm().max(1.0));
        prop_assert!((a2 - b2).norm() < 1e-12 * a2.norm().max(1.0));
    }

    /// Partition <-> complement point configuration round-trips exactly.
    #[test]
    fn point_configuration_round_trip(parts in prop::collection::vec(0usize..8, 0..5)) {
        let mut sorted = parts.clone();
        sorted.sort_unstable_by(|a, b| b.cmp(a));
        let lam = Partition::new(sorted).unwrap();
        let n = 5usize;
        let pc = point_config(&lam, n, lam.part(0) + n + 2).unwrap();
        prop_assert_eq!(pc.smallest(), n - lam.len());
        let back = pc.reconstruct_partition(n, lam.part(0) + n).unwrap();
        prop_assert_eq!(back, lam);
    }

    /// Sampled configurations serialize and parse back identically.
    #[test]
    fn sampled_configs_round_trip(n in 1usize..6, u in 0.1f64..0.9, t in 0.1f64..0.9,
                                  seed in 0u64..1000) {
        let p = StochasticParams::new(n, u, t, seed, 1).unwrap();
        let (cfg, sample) = sample_configuration(&p, 0).unwrap();
        let text = cfg.to_grid_string();
        let back = SixVertexConfig::from_grid_string(&text).unwrap();
        prop_assert_eq!(&back, &cfg);
        prop_assert_eq!(sample.h as usize, cfg.top_exit_count());
    }

    /// The two Cauchy determinant routes agree wherever both are defined.
    #[test]
    fn cauchy_routes_agree(seedling in 0u64..500) {
        let mut rng = icelab_core::rng::CounterRng::new(seedling, 0);
        let n = 2 + (seedling % 4) as usize;
        let a: Vec<Complex64> = (0..n).map(|_| c(2.0 + rng.uniform(), rng.uniform())).collect();
        let b: Vec<Complex64> = (0..n).map(|_| c(-rng.uniform(), rng.uniform())).collect();
        let sep_ok = |v: &[Complex64]| {
            (0..v.len()).all(|i| (0..i).all(|j| (v[i] - v[j]).norm() > 1e-3))
        };
        prop_assume!(sep_ok(&a) && sep_ok(&b));
        let lu = ik_determinants::cauchy_det_lu(&a, &b).unwrap();
        let cf = ik_determinants::cauchy_det_product(&a, &b).unwrap();
        prop_assert!((lu - cf).norm() < 1e-10 * cf.norm().max(1e-300));
    }
}
