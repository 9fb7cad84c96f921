//! Property tests for the structural invariants: transform round trips,
//! Parseval, linearity, unitary evolution, and the algebra of the two-grid
//! operators.

use gridwave_core::bigrid::{extend, project_restrict, weight, BigridLevel};
use gridwave_core::dispersion::Symbol;
use gridwave_core::evolution::propagate;
use gridwave_core::grid::{isdft, sdft, Grid, PhysicalField, SpectralField};
use num_complex::Complex64;
use proptest::prelude::*;
use std::f64::consts::PI;

fn grid_size() -> impl Strategy<Value = usize> {
    prop::sample::select(vec![16usize, 64, 256])
}

fn cfg() -> ProptestConfig {
    ProptestConfig {
        cases: 64,
        failure_persistence: None,
        ..ProptestConfig::default()
    }
}

proptest! {
    #![proptest_config(cfg())]

    #[test]
    fn round_trip_is_identity(m in grid_size(), h in 0.05f64..2.0, seed in any::<u64>()) {
        let grid = Grid::new(h, m, true).unwrap();
        let values = deterministic_values(m, seed);
        let f = PhysicalField::new(grid, values).unwrap();
        let back = isdft(&sdft(&f));
        let norm = f.norm_l2().max(1e-30);
        let mut diff_sq = 0.0;
        for (a, b) in back.values().iter().zip(f.values()) {
            diff_sq += (a - b).norm_sqr();
        }
        prop_assert!((grid.h() * diff_sq).sqrt() <= 1e-12 * norm);

        let spec = SpectralField::new(grid, deterministic_values(m, seed ^ 0x9e37)).unwrap();
        let there = sdft(&isdft(&spec));
        let mut diff2 = 0.0;
        let mut base2 = 0.0;
        for (a, b) in there.coeffs().iter().zip(spec.coeffs()) {
            diff2 += (a - b).norm_sqr();
            base2 += b.norm_sqr();
        }
        prop_assert!(diff2.sqrt() <= 1e-12 * base2.sqrt().max(1e-30));
    }

    #[test]
    fn parseval_holds(m in grid_size(), h in 0.05f64..2.0, seed in any::<u64>()) {
        let grid = Grid::new(h, m, true).unwrap();
        let f = PhysicalField::new(grid, deterministic_values(m, seed)).unwrap();
        let physical = f.norm_l2();
        let spectral = sdft(&f).norm_l2();
        prop_assert!((physical - spectral).abs() <= 1e-12 * physical.max(1e-30));
    }

    #[test]
    fn transform_is_linear(seed in any::<u64>(), a_re in -2.0f64..2.0, b_im in -2.0f64..2.0) {
        let grid = Grid::new(0.5, 64, true).unwrap();
        let f = PhysicalField::new(grid, deterministic_values(64, seed)).unwrap();
        let g = PhysicalField::new(grid, deterministic_values(64, seed ^ 0xabcdef)).unwrap();
        let a = Complex64::new(a_re, 0.3);
        let b = Complex64::new(-0.7, b_im);
        let combo = PhysicalField::new(
            grid,
            f.values().iter().zip(g.values()).map(|(x, y)| a * x + b * y).collect(),
        )
        .unwrap();
        let lhs = sdft(&combo);
        let rhs_f = sdft(&f);
        let rhs_g = sdft(&g);
        for ((l, x), y) in lhs.coeffs().iter().zip(rhs_f.coeffs()).zip(rhs_g.coeffs()) {
            let want = a * x + b * y;
            prop_assert!((l - want).norm() <= 1e-12 * (1.0 + want.norm()));
        }
    }

    #[test]
    fn evolution_is_unitary_and_a_group(t1 in -2.0f64..2.0, t2 in -2.0f64..2.0, seed in any::<u64>()) {
        let grid = Grid::new(0.5, 64, true).unwrap();
        let f = SpectralField::new(grid, deterministic_values(64, seed)).unwrap();
        let s = Symbol::semidiscrete(0.5).unwrap();
        let norm0 = f.norm_l2();
        let once = propagate(&f, &s, t1 + t2);
        prop_assert!((once.norm_l2() - norm0).abs() <= 1e-12 * norm0.max(1e-30));
        let twice = propagate(&propagate(&f, &s, t1), &s, t2);
        for (a, b) in once.coeffs().iter().zip(twice.coeffs()) {
            prop_assert!((a - b).norm() <= 1e-12 * (1.0 + b.norm()));
        }
    }

    #[test]
    fn interpolation_weights_partition_unity(k in 1u32..=3, eta in -PI..PI) {
        // sum of b_k over the 2^k aliases of any wavenumber is 1
        let n = 1i64 << k;
        let step = 2.0 * PI / n as f64;
        let total: f64 = (0..n).map(|l| weight(k, eta + l as f64 * step)).sum();
        prop_assert!((total - 1.0).abs() <= 1e-12);
        let b = weight(k, eta);
        prop_assert!((0.0..=1.0 + 1e-15).contains(&b));
    }

    #[test]
    fn restriction_inverts_extension(k in 1u32..=3, seed in any::<u64>()) {
        let grid = Grid::new(0.25, 64, true).unwrap();
        let level = BigridLevel::new(&grid, k).unwrap();
        let coarse =
            PhysicalField::new(level.coarse(), deterministic_values(level.coarse().m(), seed))
                .unwrap();
        let back = project_restrict(&level, &extend(&level, &coarse).unwrap()).unwrap();
        for (a, b) in back.values().iter().zip(coarse.values()) {
            prop_assert_eq!(a, b);
        }
    }

    #[test]
    fn abutting_bands_recompose_the_field(seed in any::<u64>()) {
        use gridwave_core::analysis::band_decompose;
        let grid = Grid::new(0.5, 128, true).unwrap();
        let f = SpectralField::new(grid, deterministic_values(128, seed)).unwrap();
        let picks = [-3.0 * PI / 4.0, -PI / 4.0, PI / 4.0, 3.0 * PI / 4.0];
        let parts = band_decompose(&f, &picks, PI / 4.0).unwrap();
        let full = isdft(&f);
        for j in 0..grid.m() {
            let sum: Complex64 = parts.iter().map(|(_, u)| u.values()[j]).sum();
            prop_assert!((sum - full.values()[j]).norm() <= 1e-10 * (1.0 + full.values()[j].norm()));
        }
    }
}

/// Splitmix-style deterministic complex samples, so failures reproduce from
/// the seed alone.
fn deterministic_values(len: usize, seed: u64) -> Vec<Complex64> {
    let mut state = seed;
    let mut next = move || {
        state = state.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z = z ^ (z >> 31);
        (z >> 11) as f64 / (1u64 << 53) as f64 - 0.5
    };
    (0..len).map(|_| Complex64::new(next(), next())).collect()
}
