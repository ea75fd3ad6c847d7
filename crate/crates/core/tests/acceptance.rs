//! One line per acceptance criterion; exits non-zero if any criterion fails.

mod common;

use num_complex::Complex64;
use pwe_contour::asymptotics::*;
use pwe_contour::bvp::*;
use pwe_contour::canonical::*;
use pwe_contour::family::*;
use pwe_contour::grid::{linspace, pwe_residual, FieldGrid, GridMeta};
use pwe_contour::logc::LogComplex;
use pwe_contour::quadrature::{evaluate_A, Prefactor};
use pwe_contour::saddle::{stokes_constants, stokes_residual};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;
use std::time::Instant;

// Pinned tolerances.
const TOL_PARABOLA: f64 = 1e-7;
const PARABOLA_SECONDS: f64 = 10.0;
const TOL_REDUCTION: f64 = 1e-6;
const TOL_ALGEBRA: f64 = 1e-7;
const TOL_SYMMETRY: f64 = 1e-7;
const SLOPE_TARGET: f64 = 2.0;
const SLOPE_BAND: f64 = 0.2;
const RHO_STAR: f64 = 0.614520361676536;
const TOL_RHO: f64 = 1e-10;
const MU_STAR: f64 = 4.069;
const TOL_MU: f64 = 1e-3;
const TOL_MU_RESIDUAL: f64 = 1e-10;
const FARFIELD_KS: [f64; 3] = [100.0, 400.0, 1600.0];
const SEARCHLIGHT_KS: [f64; 2] = [400.0, 1600.0];
const TOL_SEARCHLIGHT_RATIO: f64 = 0.02;
const TOL_MODAL: f64 = 1e-6;
const TOL_SCATTERED: f64 = 1e-5;
const TOL_INCIDENT: f64 = 1e-6;
const TOL_PEKERIS_ASYMPT: f64 = 1e-3;
const REGION_GRID: usize = 41;
const REGION_MARGIN: f64 = 0.2;

struct Outcome {
    pass: bool,
    detail: String,
}

fn quad(fam: &PhaseFamily, i: u32, j: u32, x: f64, y: f64) -> Complex64 {
    quad_k(fam, &ContourSpec::new(i, j), InnerPoint { X: x, Y: y, k: 1.0 })
}

fn quad_k(fam: &PhaseFamily, spec: &ContourSpec, p: InnerPoint) -> Complex64 {
    match evaluate_A(fam, spec, &Prefactor::Unity, p, 1e-10) {
        Ok(r) => r.value.to_complex(),
        Err(_) => Complex64::new(f64::NAN, f64::NAN),
    }
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    let e = (a - b).norm() / b.norm();
    if e.is_nan() {
        f64::INFINITY
    } else {
        e
    }
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn c1_parabola() -> Outcome {
    let t0 = Instant::now();
    let kappa = 0.5;
    let fam = make_family(1, 1, kappa).unwrap();
    let mut r = rng(1);
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let (x, y) = (r.gen_range(-5.0..5.0), r.gen_range(-5.0..5.0));
        worst = worst.max(rel(quad(&fam, 2, 1, x, y), closed_form_A21(kappa, x, y)));
        worst = worst.max(rel(quad(&fam, 3, 2, x, y), closed_form_A32(kappa, x, y)));
    }
    let secs = t0.elapsed().as_secs_f64();
    Outcome {
        pass: worst <= TOL_PARABOLA && secs <= PARABOLA_SECONDS,
        detail: format!("max rel err {worst:.2e} (<= {TOL_PARABOLA:.0e}), {secs:.2} s (<= {PARABOLA_SECONDS} s)"),
    }
}

fn c2_reductions() -> Outcome {
    let f21 = make_family(2, 1, 0.7).unwrap();
    let f12 = make_family(1, 2, 1.3).unwrap();
    let mut r = rng(2);
    let (mut w4, mut w5): (f64, f64) = (0.0, 0.0);
    for _ in 0..20 {
        let (x, y) = (r.gen_range(-3.0..3.0), r.gen_range(-3.0..3.0));
        let c4 = closed_form_A31_cusp(&f21, x, y).map_or(f64::INFINITY, |v| rel(quad(&f21, 3, 1, x, y), v));
        let c5 = closed_form_A31_quintic(&f12, x, y).map_or(f64::INFINITY, |v| rel(quad(&f12, 3, 1, x, y), v));
        w4 = w4.max(c4);
        w5 = w5.max(c5);
    }
    Outcome {
        pass: w4 <= TOL_REDUCTION && w5 <= TOL_REDUCTION,
        detail: format!("C4 max rel err {w4:.2e}, C5 max rel err {w5:.2e} (<= {TOL_REDUCTION:.0e})"),
    }
}

fn families() -> [PhaseFamily; 3] {
    [
        make_family(1, 1, 0.5).unwrap(),
        make_family(2, 1, 0.8).unwrap(),
        make_family(1, 2, 1.1).unwrap(),
    ]
}

fn c3_algebra() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut r = rng(3);
    for fam in families() {
        let n = fam.n_sectors;
        for _ in 0..10 {
            let (x, y) = (r.gen_range(-3.0..3.0), r.gen_range(-3.0..3.0));
            let cyc: Vec<Complex64> = (1..=n).map(|i| quad(&fam, i % n + 1, i, x, y)).collect();
            let scale = cyc.iter().map(|z| z.norm()).fold(0.0, f64::max);
            let sum: Complex64 = cyc.iter().sum();
            worst = worst.max(sum.norm() / scale);
            for (i, j, k) in [(1, 2, 3), (n, 1, 2), (2, n, 1)] {
                let (ij, jk, ik) = (quad(&fam, i, j, x, y), quad(&fam, j, k, x, y), quad(&fam, i, k, x, y));
                let s = ij.norm().max(jk.norm()).max(ik.norm());
                worst = worst.max((ij + jk - ik).norm() / s);
            }
        }
    }
    let worst = if worst.is_nan() { f64::INFINITY } else { worst };
    Outcome {
        pass: worst <= TOL_ALGEBRA,
        detail: format!("max |A_ij + A_jk - A_ik| and |cycle sum| / max|A| = {worst:.2e} (<= {TOL_ALGEBRA:.0e})"),
    }
}

fn c4_symmetry() -> Outcome {
    let [f11, f21, f12] = families();
    let mut r = rng(4);
    let (mut w11, mut w21, mut w12): (f64, f64, f64) = (0.0, 0.0, 0.0);
    for _ in 0..10 {
        let (x, y) = (r.gen_range(-3.0..3.0), r.gen_range(-3.0..3.0));
        w11 = w11.max(rel(quad(&f11, 2, 1, x, y), quad(&f11, 2, 1, -x, y).conj()));
        w11 = w11.max(rel(quad(&f11, 1, 3, x, y), quad(&f11, 3, 2, -x, y).conj()));
        for ((i, j), (p, q)) in [((3, 1), (3, 1)), ((4, 2), (4, 2)), ((2, 1), (3, 4)), ((4, 1), (3, 2))] {
            w21 = w21.max(rel(quad(&f21, i, j, x, y), quad(&f21, p, q, x, -y)));
        }
        for ((i, j), (p, q)) in [((3, 1), (3, 1)), ((5, 4), (5, 4)), ((2, 1), (3, 2)), ((4, 2), (2, 5)), ((4, 1), (3, 5)), ((1, 5), (4, 3))] {
            w12 = w12.max(rel(quad(&f12, i, j, x, y), quad(&f12, p, q, -x, -y).conj()));
        }
    }
    let w = w11.max(w21).max(w12);
    Outcome {
        pass: w <= TOL_SYMMETRY,
        detail: format!("(1,1) {w11:.2e}, (2,1) {w21:.2e}, (1,2) {w12:.2e} (<= {TOL_SYMMETRY:.0e})"),
    }
}

fn c5_pde() -> Outcome {
    let kappa = 0.5;
    let fam = make_family(1, 1, kappa).unwrap();
    let meta = GridMeta::new(&fam, &ContourSpec::new(2, 1), "unity", 1.0, 0.0);
    let mut hs = Vec::new();
    let mut rs = Vec::new();
    for n in [101usize, 201, 401, 801] {
        let g = FieldGrid::from_fn(linspace(-2.0, 2.0, n), linspace(-2.0, 1.0, n), meta.clone(), |x, y| {
            Some(LogComplex::from_complex(closed_form_A21(kappa, x, y)))
        })
        .unwrap();
        hs.push((4.0 / (n - 1) as f64).ln());
        rs.push(pwe_residual(&g).unwrap().ln());
    }
    let mh = hs.iter().sum::<f64>() / hs.len() as f64;
    let mr = rs.iter().sum::<f64>() / rs.len() as f64;
    let num: f64 = hs.iter().zip(&rs).map(|(h, r)| (h - mh) * (r - mr)).sum();
    let den: f64 = hs.iter().map(|h| (h - mh).powi(2)).sum();
    let slope = num / den;
    Outcome {
        pass: (slope - SLOPE_TARGET).abs() <= SLOPE_BAND,
        detail: format!(
            "log-log slope {slope:.3} over 101..801 points per axis (2 +- {SLOPE_BAND}); residual at 101: {:.2e}",
            rs[0].exp()
        ),
    }
}

fn c6_stokes() -> Outcome {
    match stokes_constants() {
        Ok(c) => {
            let res = stokes_residual(c.mu_star).unwrap_or(f64::INFINITY).abs();
            let ok = (c.rho_star - RHO_STAR).abs() <= TOL_RHO && (c.mu_star - MU_STAR).abs() <= TOL_MU && res <= TOL_MU_RESIDUAL;
            Outcome {
                pass: ok,
                detail: format!("rho_star {:.15}, mu_star {:.12}, residual {res:.1e}", c.rho_star, c.mu_star),
            }
        }
        Err(e) => Outcome { pass: false, detail: format!("error: {e}") },
    }
}

fn monotone(errs: &[f64]) -> bool {
    errs.windows(2).all(|w| w[1] < w[0])
}

fn c7_farfield() -> Outcome {
    let mut failures = Vec::new();
    let mut worst_last: f64 = 0.0;
    let args = [-2.0, -1.0, 0.0, 1.0, 2.0];
    let xstars = [0.3, -0.2, 0.25, -0.3, 0.2];

    let kappa = 0.6;
    let fam = make_family(1, 1, kappa).unwrap();
    let x0 = 1.2;
    let c = (2.0 * kappa).cbrt();
    for (s, xs) in args.iter().zip(xstars) {
        let ys: f64 = -s / c - kappa * x0 * xs;
        let errs: Vec<f64> = FARFIELD_KS
            .iter()
            .map(|&k| {
                let f = ExpansionFrame::parabola(&fam, k, x0, xs, ys).unwrap();
                let p = matched_point(&fam, &f, parabola_y0(&fam, x0), k);
                rel(farfield_parabola(&fam, k, &f).unwrap(), quad_k(&fam, &ContourSpec::new(2, 1), p))
            })
            .collect();
        worst_last = worst_last.max(errs[2]);
        if !monotone(&errs) {
            failures.push(format!("parabola arg {s}: {errs:?}"));
        }
    }

    let kappa = 1.1;
    let fam = make_family(2, 1, kappa).unwrap();
    let x0 = 0.9;
    let c = (4.0 * kappa / x0).powf(1.0 / 6.0);
    let nrm = 2.0 * (kappa * x0).sqrt();
    for br in [CuspBranch::Upper, CuspBranch::Lower] {
        let spec = coalescing_pair_contour(&fam, x0, br);
        for (s, xs) in args.iter().zip(xstars) {
            let mut ys: f64 = -s / c - nrm * xs;
            if br == CuspBranch::Upper {
                ys = -ys;
            }
            let errs: Vec<f64> = FARFIELD_KS
                .iter()
                .map(|&k| {
                    let f = ExpansionFrame::cusp(&fam, k, x0, xs, ys).unwrap();
                    let p = matched_point(&fam, &f, cusp_y0(&fam, x0, br), k);
                    rel(farfield_cusp(&fam, k, &f, br).unwrap(), quad_k(&fam, &spec, p))
                })
                .collect();
            worst_last = worst_last.max(errs[2]);
            if !monotone(&errs) {
                failures.push(format!("cusp {br:?} arg {s}: {errs:?}"));
            }
        }
    }

    let kappa = 0.9;
    let fam = make_family(1, 2, kappa).unwrap();
    for x0 in [1.3, -1.3] {
        let spec = coalescing_pair_contour(&fam, x0, CuspBranch::Upper);
        let c = (2.0 * kappa * kappa * f64::abs(x0)).cbrt();
        let nrm = kappa * kappa * x0 * x0 / 2.0;
        for (s, xs) in args.iter().zip(xstars) {
            let ys = f64::signum(x0) * s / c - nrm * xs;
            let errs: Vec<f64> = FARFIELD_KS
                .iter()
                .map(|&k| {
                    let f = ExpansionFrame::cubic(&fam, k, x0, xs, ys).unwrap();
                    let p = matched_point(&fam, &f, cubic_y0(&fam, x0), k);
                    rel(farfield_cubic(&fam, k, &f).unwrap(), quad_k(&fam, &spec, p))
                })
                .collect();
            worst_last = worst_last.max(errs[2]);
            if !monotone(&errs) {
                failures.push(format!("cubic x0={x0} arg {s}: {errs:?}"));
            }
        }
    }
    Outcome {
        pass: failures.is_empty(),
        detail: if failures.is_empty() {
            format!("parabola, both cusp branches, both cubic sides: errors decrease over k = 100, 400, 1600; worst at 1600 {worst_last:.2e}")
        } else {
            failures.join("; ")
        },
    }
}

fn c8_searchlight() -> Outcome {
    let fam = make_family(1, 2, 1.0).unwrap();
    let errs: Vec<f64> = SEARCHLIGHT_KS
        .iter()
        .map(|&k| rel(searchlight(&fam, k, 1.0, 0.0).unwrap(), quad_k(&fam, &ContourSpec::new(3, 1), searchlight_point(k, 1.0, 0.0))))
        .collect();
    let y = 20.0;
    let ratio = pearcey(y, 0.0).map_or(f64::NAN, |p| p.norm()) / searchlight_large(y).norm();
    let ok = monotone(&errs) && (ratio - 1.0).abs() <= TOL_SEARCHLIGHT_RATIO;
    Outcome {
        pass: ok,
        detail: format!("A_31 rel err at k=400, 1600: {:.3e}, {:.3e}; |P|/(sqrt(pi)/sqrt|Y|) at Y={y}: {ratio:.6}", errs[0], errs[1]),
    }
}

fn c9_modal() -> Outcome {
    let fam = make_family(1, 1, 0.5).unwrap();
    let mut worst: f64 = 0.0;
    for kind in [WaveKind::WhisperingGallery, WaveKind::Creeping] {
        for n in [0, 1] {
            let ms = ModalSpec { family: fam, boundary_condition: BoundaryCondition::Dirichlet, mode_index: n, wave_kind: kind };
            for x in linspace(-3.0, 3.0, 20) {
                let y0 = -fam.kappa * x * x / 2.0;
                let on = modal_field(&ms, x, y0, 1.0, 1e-10).map_or(f64::INFINITY, |v| v.norm());
                let near = (1..=10)
                    .map(|d| modal_field(&ms, x, y0 + 0.2 * d as f64, 1.0, 1e-10).map_or(0.0, |v| v.norm()))
                    .fold(0.0, f64::max);
                worst = worst.max(on / near);
            }
        }
    }
    Outcome {
        pass: worst <= TOL_MODAL,
        detail: format!("WG and creeping, n = 0, 1, 20 X each: max |A|/max|A near| = {worst:.2e} (<= {TOL_MODAL:.0e})"),
    }
}

fn c10_fock() -> Outcome {
    let mut w_sc: f64 = 0.0;
    let mut w_inc: f64 = 0.0;
    for x in linspace(-3.0, 3.0, 13) {
        let y = -x * x / 4.0;
        let sc = fock_leontovich(x, y, FieldPart::Scattered);
        let tot = fock_leontovich(x, y, FieldPart::Total);
        match (sc, tot) {
            (Ok(s), Ok(t)) => {
                w_sc = w_sc.max((s + 1.0).norm());
                w_inc = w_inc.max((t - s - 1.0).norm());
            }
            _ => {
                w_sc = f64::INFINITY;
            }
        }
    }
    for (x, y) in [(0.5, 1.0), (-1.0, 0.5), (2.0, 2.0)] {
        match (fock_leontovich(x, y, FieldPart::Scattered), fock_leontovich(x, y, FieldPart::Total)) {
            (Ok(s), Ok(t)) => w_inc = w_inc.max((t - s - 1.0).norm()),
            _ => w_inc = f64::INFINITY,
        }
    }
    let ev = PekerisEvaluator { tol: 1e-10, ..PekerisEvaluator::default() };
    let mut w_as: f64 = 0.0;
    for (arg, upper) in [(PI / 6.0, true), (0.0, true), (2.8, false), (PI, false), (4.5, false)] {
        let t = Complex64::from_polar(30.0, arg);
        let a = if upper { pekeris_asymptotic_upper(t) } else { pekeris_asymptotic_lower(t) };
        match ev.eval_log(t) {
            Ok(v) => w_as = w_as.max((v.rel_diff(&a)).abs()),
            Err(_) => w_as = f64::INFINITY,
        }
    }
    Outcome {
        pass: w_sc <= TOL_SCATTERED && w_inc <= TOL_INCIDENT && w_as <= TOL_PEKERIS_ASYMPT,
        detail: format!(
            "max|scattered + 1| on Y=-X^2/4 {w_sc:.2e} (<= {TOL_SCATTERED:.0e}); max|total - scattered - 1| {w_inc:.2e} (<= {TOL_INCIDENT:.0e}); max|p^/asymptotic - 1| at |t|=30 {w_as:.2e} (<= {TOL_PEKERIS_ASYMPT:.0e})"
        ),
    }
}

fn c11_regions() -> Outcome {
    let mut cells = 0;
    let mut bad = Vec::new();
    let fam = common::cusp_family();
    for t in &common::CUSP_TABLES {
        let (n, b) = common::region_mismatches(&fam, t, REGION_GRID, 5.0, REGION_MARGIN);
        cells += n;
        if !b.is_empty() {
            bad.push(format!("(2,1) A{}{}: {} cells", t.contour.0, t.contour.1, b.len()));
        }
    }
    let fam = common::quintic_family();
    for t in &common::QUINTIC_TABLES {
        let (n, b) = common::region_mismatches(&fam, t, REGION_GRID, 5.0, REGION_MARGIN);
        cells += n;
        if !b.is_empty() {
            bad.push(format!("(1,2) A{}{}: {} cells", t.contour.0, t.contour.1, b.len()));
        }
    }
    Outcome {
        pass: bad.is_empty(),
        detail: if bad.is_empty() {
            format!("6 + 10 contours, {cells} cells checked, all signatures match")
        } else {
            bad.join("; ")
        },
    }
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("closed-form equivalence, parabola", c1_parabola),
        ("closed-form equivalence, cusp and quintic", c2_reductions),
        ("contour algebra", c3_algebra),
        ("symmetry relations", c4_symmetry),
        ("PDE residual convergence", c5_pde),
        ("Stokes constants", c6_stokes),
        ("far-field convergence", c7_farfield),
        ("searchlight limits", c8_searchlight),
        ("modal boundary conditions", c9_modal),
        ("Fock-Leontovich and Pekeris asymptotics", c10_fock),
        ("region classification", c11_regions),
    ];
    let mut failed = Vec::new();
    for (i, (name, f)) in criteria.iter().enumerate() {
        let t0 = Instant::now();
        let o = f();
        println!(
            "criterion {:>2} {}: {} | {} | {:.1} s",
            i + 1,
            if o.pass { "PASS" } else { "FAIL" },
            name,
            o.detail,
            t0.elapsed().as_secs_f64()
        );
        if !o.pass {
            failed.push(i + 1);
        }
    }
    if !failed.is_empty() {
        eprintln!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
