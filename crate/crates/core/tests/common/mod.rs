#![allow(dead_code)]

use pwe_contour::family::{make_family, ContourSpec, OuterPoint, PhaseFamily};
use pwe_contour::saddle::{classify_region, stokes_constants};
use pwe_contour::sdpath::assemble_contour;

/// Expected contributing-saddle signature per region letter `a..` for one
/// contour, read off the saddle-configuration schematics.
pub struct RegionTable {
    pub contour: (u32, u32),
    /// Contour whose table this one mirrors under `y -> -y`, if any.
    pub mirror_y: bool,
    pub sigs: &'static [&'static str],
}

// (2,1): letters a..j.
pub const CUSP_TABLES: [RegionTable; 6] = [
    RegionTable { contour: (2, 1), mirror_y: false, sigs: &["R,R", "R,DR", "L,R,S", "L,R", "L", "B", "S", "S", "S", "DR"] },
    RegionTable { contour: (4, 3), mirror_y: true, sigs: &["R,R", "R,DR", "L,R,S", "L,R", "L", "B", "S", "S", "S", "DR"] },
    RegionTable { contour: (3, 1), mirror_y: false, sigs: &["R,R,R", "R,DR", "R,S", "R,S", "R", "R", "R", "R,S", "R,S", "R,DR"] },
    RegionTable { contour: (4, 1), mirror_y: false, sigs: &["R", "R", "R", "R,S", "R,S", "R,B", "L,R", "L,R,S", "L,S", "DR"] },
    RegionTable { contour: (3, 2), mirror_y: true, sigs: &["R", "R", "R", "R,S", "R,S", "R,B", "L,R", "L,R,S", "L,S", "DR"] },
    RegionTable { contour: (4, 2), mirror_y: false, sigs: &["R", "DR", "L,S", "L,R,S", "L,R,S", "R,B,B", "L,R,S", "L,R,S", "L,S", "DR"] },
];

// (1,2): letters a..l.
pub const QUINTIC_TABLES: [RegionTable; 10] = [
    RegionTable { contour: (2, 1), mirror_y: false, sigs: &["R,R", "TO,R", "O,R,S", "O,R,S", "O,R", "O,R", "O,R", "TO", "S", "S", "S", "DR"] },
    RegionTable { contour: (3, 2), mirror_y: false, sigs: &["O,R", "TO", "S", "S", "S", "DR", "R,R", "TO,R", "O,R,S", "O,R,S", "O,R", "O,R"] },
    RegionTable { contour: (3, 1), mirror_y: false, sigs: &["O,R,R,R", "TO,R", "O,R", "O,R,S", "O,R,S", "O,R,DR", "O,R,R,R", "TO,R", "O,R", "O,R,S", "O,R,S", "O,R,DR"] },
    RegionTable { contour: (4, 1), mirror_y: false, sigs: &["O,R,R", "TO,R", "L,R", "L,O,R", "L,O,R,S", "O,R,DR", "O,R,R", "TO", "O", "O,S", "O,S", "O,DR"] },
    RegionTable { contour: (5, 3), mirror_y: false, sigs: &["O,R,R", "TO", "O", "O,S", "O,S", "O,DR", "O,R,R", "TO,R", "L,R", "L,O,R", "L,O,R,S", "O,R,DR"] },
    RegionTable { contour: (5, 1), mirror_y: false, sigs: &["R", "R", "R", "R", "R", "R", "R", "TO", "L,O", "L,O,S", "L,S", "DR"] },
    RegionTable { contour: (4, 3), mirror_y: false, sigs: &["R", "TO", "L,O", "L,O,S", "L,S", "DR", "R", "R", "R", "R", "R", "R"] },
    RegionTable { contour: (4, 2), mirror_y: false, sigs: &["O", "TO", "L,O,S", "L,O,S", "L,S", "DR", "R", "TO", "O,S", "O,S", "O", "O"] },
    RegionTable { contour: (5, 2), mirror_y: false, sigs: &["R", "TO", "O,S", "O,S", "O", "O", "O", "TO", "L,O,S", "L,O,S", "L,S", "DR"] },
    RegionTable { contour: (5, 4), mirror_y: false, sigs: &["O,R", "TO", "L", "L,O", "L,O,S", "O,DR", "O,R", "TO", "L", "L,O", "L,O,S", "O,DR"] },
];

/// Families at alpha = 1, the normalisation of the schematics.
pub fn cusp_family() -> PhaseFamily {
    make_family(2, 1, 1.0 / 12.0).unwrap()
}

pub fn quintic_family() -> PhaseFamily {
    make_family(1, 2, 2.0 * 2f64.sqrt() / 3.0).unwrap()
}

/// Polylines of every named curve inside `[-b, b]^2`.
pub fn named_curves(fam: &PhaseFamily, b: f64) -> Vec<Vec<(f64, f64)>> {
    let c = stokes_constants().unwrap();
    let k = fam.kappa;
    let n = 4000;
    let s = |i: usize| b * i as f64 / n as f64;
    let mut out = Vec::new();
    match (fam.l, fam.m) {
        (2, 1) => {
            for sgn in [1.0, -1.0] {
                out.push((0..=n).map(|i| (s(i), sgn * 4.0 / 3.0 * k.sqrt() * s(i).powf(1.5))).collect());
                out.push((0..=n).map(|i| (-s(i), sgn * (12.0 * k).sqrt() * c.rho_star * s(i).powf(1.5))).collect());
            }
            out.push((0..=n).map(|i| (-s(i), 0.0)).collect());
        }
        (1, 2) => {
            for sgn in [1.0, -1.0] {
                out.push((0..=n).map(|i| (sgn * s(i), -k * k * (sgn * s(i)).powi(3) / 6.0)).collect());
                out.push((0..=n).map(|i| (sgn * s(i), -9.0 * k * k / 8.0 * c.mu_star * (sgn * s(i)).powi(3))).collect());
                out.push((0..=n).map(|i| (sgn * s(i), 0.0)).collect());
            }
        }
        _ => unreachable!(),
    }
    out
}

pub fn distance_to_curves(curves: &[Vec<(f64, f64)>], x: f64, y: f64) -> f64 {
    curves
        .iter()
        .flatten()
        .map(|&(a, b)| ((a - x).powi(2) + (b - y).powi(2)).sqrt())
        .fold(f64::INFINITY, f64::min)
}

/// Mismatches `(x, y, letter, expected, got)` over an `n x n` grid on
/// `[-b, b]^2`, skipping cells within `margin` of a named curve.
pub fn region_mismatches(
    fam: &PhaseFamily,
    table: &RegionTable,
    n: usize,
    b: f64,
    margin: f64,
) -> (usize, Vec<(f64, f64, char, String, String)>) {
    let curves = named_curves(fam, 1.5 * b);
    let spec = ContourSpec::new(table.contour.0, table.contour.1);
    let mut checked = 0;
    let mut bad = Vec::new();
    for j in 0..n {
        for i in 0..n {
            let x = -b + 2.0 * b * i as f64 / (n - 1) as f64;
            let y = -b + 2.0 * b * j as f64 / (n - 1) as f64;
            if distance_to_curves(&curves, x, y) <= margin {
                continue;
            }
            let ly = if table.mirror_y { -y } else { y };
            let letter = classify_region(fam, OuterPoint { x, y: ly }).unwrap().letter;
            let want = table.sigs[(letter as u8 - b'a') as usize].to_string();
            let got = match assemble_contour(fam, OuterPoint { x, y }, &spec) {
                Ok(a) => a.signature(fam),
                Err(e) => format!("error: {e}"),
            };
            checked += 1;
            if got != want {
                bad.push((x, y, letter, want, got));
            }
        }
    }
    (checked, bad)
}
