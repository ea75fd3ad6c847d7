use num_complex::Complex64;
use proptest::prelude::*;
use pwe_contour::bvp::{modal_field, BoundaryCondition, ModalSpec, WaveKind};
use pwe_contour::family::*;
use pwe_contour::logc::LogComplex;
use pwe_contour::quadrature::{evaluate_A, Prefactor};
use pwe_contour::saddle::find_saddles;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn a(fam: &PhaseFamily, i: u32, j: u32, x: f64, y: f64) -> Complex64 {
    evaluate_A(fam, &ContourSpec::new(i, j), &Prefactor::Unity, InnerPoint { X: x, Y: y, k: 1.0 }, 1e-10)
        .unwrap()
        .value
        .to_complex()
}

fn families() -> Vec<PhaseFamily> {
    vec![
        make_family(1, 1, 0.5).unwrap(),
        make_family(2, 1, 0.8).unwrap(),
        make_family(1, 2, 1.1).unwrap(),
    ]
}

fn points(seed: u64, n: usize, r: f64) -> Vec<(f64, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| (rng.gen_range(-r..r), rng.gen_range(-r..r))).collect()
}

#[test]
fn additivity_and_cycle() {
    for fam in families() {
        let n = fam.n_sectors;
        for (x, y) in points(7, 10, 3.0) {
            // A_21 + A_32 + ... + A_1n = 0
            let terms: Vec<Complex64> = (1..=n).map(|i| a(&fam, i % n + 1, i, x, y)).collect();
            let scale = terms.iter().map(|z| z.norm()).fold(0.0, f64::max);
            let sum: Complex64 = terms.iter().sum();
            assert!(sum.norm() <= 1e-7 * scale, "({},{}) cycle at ({x},{y}): {sum}", fam.l, fam.m);
            let (ab, bc, ac) = (a(&fam, 3, 2, x, y), a(&fam, 2, 1, x, y), a(&fam, 3, 1, x, y));
            let s = ab.norm().max(bc.norm()).max(ac.norm());
            assert!((ab + bc - ac).norm() <= 1e-7 * s);
        }
    }
}

#[test]
fn antisymmetry_in_endpoints() {
    let fam = make_family(2, 1, 0.8).unwrap();
    for (x, y) in points(3, 4, 2.0) {
        assert!((a(&fam, 1, 3, x, y) + a(&fam, 3, 1, x, y)).norm() < 1e-8 * a(&fam, 3, 1, x, y).norm());
    }
}

#[test]
fn parabola_symmetries() {
    let fam = make_family(1, 1, 0.5).unwrap();
    for (x, y) in points(11, 10, 4.0) {
        let l = a(&fam, 2, 1, x, y);
        let r = a(&fam, 2, 1, -x, y).conj();
        assert!((l - r).norm() <= 1e-7 * l.norm());
        let l = a(&fam, 1, 3, x, y);
        let r = a(&fam, 3, 2, -x, y).conj();
        assert!((l - r).norm() <= 1e-7 * l.norm());
    }
}

#[test]
fn quartic_symmetries() {
    let fam = make_family(2, 1, 0.8).unwrap();
    let pairs = [((3, 1), (3, 1)), ((4, 2), (4, 2)), ((2, 1), (3, 4)), ((4, 1), (3, 2))];
    for (x, y) in points(13, 10, 3.0) {
        for ((i, j), (p, q)) in pairs {
            let l = a(&fam, i, j, x, y);
            let r = a(&fam, p, q, x, -y);
            assert!((l - r).norm() <= 1e-7 * l.norm(), "A{i}{j} vs A{p}{q} at ({x},{y})");
        }
    }
}

#[test]
fn quintic_symmetries() {
    let fam = make_family(1, 2, 1.1).unwrap();
    let pairs = [((3, 1), (3, 1)), ((5, 4), (5, 4)), ((2, 1), (3, 2)), ((4, 2), (2, 5)), ((4, 1), (3, 5)), ((1, 5), (4, 3))];
    for (x, y) in points(17, 10, 2.5) {
        for ((i, j), (p, q)) in pairs {
            let l = a(&fam, i, j, x, y);
            let r = a(&fam, p, q, -x, -y).conj();
            assert!((l - r).norm() <= 1e-7 * l.norm(), "A{i}{j} vs A{p}{q} at ({x},{y})");
        }
    }
}

#[test]
fn modal_fields_vanish_on_parabola() {
    let fam = make_family(1, 1, 0.5).unwrap();
    for kind in [WaveKind::WhisperingGallery, WaveKind::Creeping] {
        for n in [0, 1] {
            let ms = ModalSpec { family: fam, boundary_condition: BoundaryCondition::Dirichlet, mode_index: n, wave_kind: kind };
            for x in [-2.0, 0.5, 2.5] {
                let y0 = -fam.kappa * x * x / 2.0;
                let on = modal_field(&ms, x, y0, 1.0, 1e-10).unwrap().norm();
                let near = (1..=10)
                    .map(|d| modal_field(&ms, x, y0 + 0.2 * d as f64, 1.0, 1e-10).unwrap().norm())
                    .fold(0.0, f64::max);
                assert!(on <= 1e-6 * near, "{kind:?} n={n} X={x}: {on} vs {near}");
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn phase_reflection_identity(l in 1i64..4, m in 1i64..4, kappa in 0.1f64..3.0,
                                 x in -5.0f64..5.0, y in -5.0f64..5.0, tr in -3.0f64..3.0, ti in -3.0f64..3.0) {
        let fam = make_family(l, m, kappa).unwrap();
        let t = Complex64::new(tr, ti);
        let s = if l % 2 == 0 { 1.0 } else { -1.0 };
        let sy = if (l + m) % 2 == 0 { 1.0 } else { -1.0 };
        let lhs = phase_unscaled(&fam, x, y, t);
        let rhs = s * phase_unscaled(&fam, s * x, sy * y, -t);
        prop_assert!((lhs - rhs).norm() <= 1e-12 * (1.0 + lhs.norm()));
    }

    #[test]
    fn scaling_round_trip(l in 1i64..4, m in 1i64..4, x in -10.0f64..10.0, y in -10.0f64..10.0, k in 0.5f64..1e4) {
        let fam = make_family(l, m, 1.0).unwrap();
        let p = unscale_point(&fam, OuterPoint { x, y }, k);
        let q = scale_point(&fam, p);
        prop_assert!((q.x - x).abs() <= 1e-12 * (1.0 + x.abs()));
        prop_assert!((q.y - y).abs() <= 1e-12 * (1.0 + y.abs()));
    }

    #[test]
    fn saddles_count_and_conjugate_closure(fam_ix in 0usize..3, x in -4.0f64..4.0, y in -4.0f64..4.0) {
        let fam = families()[fam_ix];
        let s = find_saddles(&fam, OuterPoint { x, y }).unwrap();
        prop_assert_eq!(s.root_count(), 2 * fam.m + fam.l - 1);
        for a in &s.saddles {
            let c = a.location.conj();
            prop_assert!(s.saddles.iter().any(|b| (b.location - c).norm() <= 1e-6 * (1.0 + c.norm())));
        }
    }

    #[test]
    fn logcomplex_matches_complex(ar in -1e3f64..1e3, ai in -1e3f64..1e3, br in -1e3f64..1e3, bi in -1e3f64..1e3) {
        let (a, b) = (Complex64::new(ar, ai), Complex64::new(br, bi));
        let (la, lb) = (LogComplex::from_complex(a), LogComplex::from_complex(b));
        prop_assert!(((la * lb).to_complex() - a * b).norm() <= 1e-12 * (a * b).norm().max(1e-300));
        let s = a + b;
        prop_assert!(((la + lb).to_complex() - s).norm() <= 1e-12 * (a.norm() + b.norm()));
    }

    #[test]
    fn parabola_conjugate_symmetry_random(x in -4.0f64..4.0, y in -4.0f64..2.0) {
        let fam = make_family(1, 1, 0.7).unwrap();
        let l = a(&fam, 2, 1, x, y);
        let r = a(&fam, 2, 1, -x, y).conj();
        prop_assert!((l - r).norm() <= 1e-8 * l.norm());
    }
}
