//! Saddle points of the scaled phase, their orders, region classes for the
//! three studied families, and the Stokes-line constants.

use crate::error::{Error, Result};
use crate::family::{OuterPoint, PhaseFamily};
use crate::poly::Poly;
use num_complex::Complex64;
use std::f64::consts::PI;
use std::sync::OnceLock;

/// Roots closer than this (relative to `max(1, |tau|)`) form one saddle.
pub const CLUSTER_RADIUS: f64 = 1e-6;
/// Derivative-vanishing tolerance relative to the largest derivative.
pub const ORDER_TOL: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Saddle {
    pub location: Complex64,
    /// Number of vanishing derivatives `phi', ..., phi^(order)`.
    pub order: u32,
    pub re_phi: f64,
    pub im_phi: f64,
}

impl Saddle {
    pub fn is_real(&self) -> bool {
        self.location.im == 0.0
    }

    pub fn is_origin(&self) -> bool {
        self.location.norm() == 0.0
    }
}

#[derive(Clone, Debug)]
pub struct SaddleSet {
    pub point: OuterPoint,
    pub saddles: Vec<Saddle>,
    /// Present for the studied families only.
    pub region_label: Option<RegionLabel>,
}

impl SaddleSet {
    /// Total multiplicity, `2m + l - 1`.
    pub fn root_count(&self) -> u32 {
        self.saddles.iter().map(|s| s.order).sum()
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StokesConstants {
    pub rho_star: f64,
    pub mu_star: f64,
}

/// `g(mu) = e^{-i pi/3} d + e^{i pi/3} / (9 d) + 1/3`.
pub fn stokes_g(mu: f64) -> Result<Complex64> {
    let disc = mu * mu / 4.0 - mu / 27.0;
    if disc < 0.0 {
        return Err(Error::InvalidParameter(format!(
            "d(mu) is not real for mu = {mu}"
        )));
    }
    let d = (mu / 2.0 - 1.0 / 27.0 - disc.sqrt()).cbrt();
    if !d.is_finite() || d == 0.0 {
        return Err(Error::InvalidParameter(format!("d(mu) degenerate at mu = {mu}")));
    }
    let e = Complex64::from_polar(1.0, PI / 3.0);
    Ok(e.conj() * d + e / (9.0 * d) + 1.0 / 3.0)
}

/// `Re[g^4 - 6 mu g^2]`.
pub fn stokes_residual(mu: f64) -> Result<f64> {
    let g = stokes_g(mu)?;
    let g2 = g * g;
    Ok((g2 * g2 - 6.0 * mu * g2).re)
}

fn compute_stokes_constants() -> Result<StokesConstants> {
    let rho_star = (5.0 + 27f64.sqrt()).sqrt() / 27f64.sqrt();
    let lo = 4.0 / 27.0 + 1e-6;
    let hi = 10.0;
    let steps = 1024;
    let mut bracket = None;
    let mut prev = (lo, stokes_residual(lo)?);
    for i in 1..=steps {
        let mu = lo + (hi - lo) * i as f64 / steps as f64;
        let f = stokes_residual(mu)?;
        if f == 0.0 || (f > 0.0) != (prev.1 > 0.0) {
            bracket = Some((prev, (mu, f)));
            break;
        }
        prev = (mu, f);
    }
    let ((mut a, mut fa), (mut b, _)) = bracket.ok_or_else(|| {
        Error::Bracket("no sign change of Re[g^4 - 6 mu g^2] on (4/27, 10]".into())
    })?;
    while b - a > 1e-12 {
        let mid = 0.5 * (a + b);
        let fm = stokes_residual(mid)?;
        if fm == 0.0 {
            a = mid;
            b = mid;
            break;
        }
        if (fm > 0.0) == (fa > 0.0) {
            a = mid;
            fa = fm;
        } else {
            b = mid;
        }
    }
    Ok(StokesConstants {
        rho_star,
        mu_star: 0.5 * (a + b),
    })
}

/// Shared, computed once.
pub fn stokes_constants() -> Result<StokesConstants> {
    static CONSTS: OnceLock<std::result::Result<StokesConstants, String>> = OnceLock::new();
    CONSTS
        .get_or_init(|| compute_stokes_constants().map_err(|e| e.to_string()))
        .clone()
        .map_err(Error::Bracket)
}

/// All saddles of `phi` at `pt`, grouped by multiplicity.
pub fn find_saddles(fam: &PhaseFamily, pt: OuterPoint) -> Result<SaddleSet> {
    let saddles = saddles_of_poly(&fam.phase_poly(pt.x, pt.y), true)?;
    let region_label = classify_region(fam, pt).ok();
    Ok(SaddleSet {
        point: pt,
        saddles,
        region_label,
    })
}

/// Saddles of an arbitrary polynomial phase. With `real_coeffs` the roots
/// are snapped to exact conjugate pairs and to the real axis.
pub fn saddles_of_poly(phi: &Poly, real_coeffs: bool) -> Result<Vec<Saddle>> {
    let roots = phi.derivative().roots()?;
    let mut clusters: Vec<Vec<Complex64>> = Vec::new();
    for r in roots {
        let hit = clusters.iter_mut().find(|c| {
            let c0 = c[0];
            (c0 - r).norm() <= CLUSTER_RADIUS * c0.norm().max(1.0)
        });
        match hit {
            Some(c) => c.push(r),
            None => clusters.push(vec![r]),
        }
    }
    let mut locs: Vec<(Complex64, u32)> = clusters
        .iter()
        .map(|c| {
            let z = if c.iter().any(|z| z.norm() == 0.0) {
                Complex64::new(0.0, 0.0)
            } else {
                c.iter().sum::<Complex64>() / c.len() as f64
            };
            (z, c.len() as u32)
        })
        .collect();
    if real_coeffs {
        symmetrize(&mut locs);
    }
    let mut saddles: Vec<Saddle> = locs
        .into_iter()
        .map(|(z, mult)| {
            let v = phi.eval(z);
            Saddle {
                location: z,
                order: mult,
                re_phi: v.re,
                im_phi: if real_coeffs && z.im == 0.0 { 0.0 } else { v.im },
            }
        })
        .collect();
    saddles.sort_by(|a, b| {
        a.location
            .re
            .total_cmp(&b.location.re)
            .then(a.location.im.total_cmp(&b.location.im))
    });
    Ok(saddles)
}

/// Snap near-real roots onto the axis and make complex roots exact
/// conjugate pairs (the phase has real coefficients).
fn symmetrize(locs: &mut [(Complex64, u32)]) {
    for (z, _) in locs.iter_mut() {
        if z.im.abs() <= 1e-9 * z.norm().max(1.0) {
            z.im = 0.0;
        }
    }
    let n = locs.len();
    let mut used = vec![false; n];
    for i in 0..n {
        if used[i] || locs[i].0.im <= 0.0 {
            continue;
        }
        let target = locs[i].0.conj();
        let partner = (0..n)
            .filter(|&j| !used[j] && j != i && locs[j].0.im < 0.0 && locs[j].1 == locs[i].1)
            .min_by(|&a, &b| {
                (locs[a].0 - target)
                    .norm()
                    .total_cmp(&(locs[b].0 - target).norm())
            });
        if let Some(j) = partner {
            let avg = 0.5 * (locs[i].0 + locs[j].0.conj());
            locs[i].0 = avg;
            locs[j].0 = avg.conj();
            used[i] = true;
            used[j] = true;
        }
    }
}

/// Order from the derivative test: the number of leading derivatives
/// `phi', phi'', ...` below `ORDER_TOL` times the largest one.
pub fn derivative_order(fam: &PhaseFamily, pt: OuterPoint, tau: Complex64) -> u32 {
    let phi = fam.phase_poly(pt.x, pt.y);
    let n = fam.n_sectors as usize;
    let d = phi.derivatives(tau, n);
    // compare Taylor coefficients so that high derivatives are not favoured
    let mut fact = 1.0;
    let coef: Vec<f64> = d
        .iter()
        .enumerate()
        .map(|(k, v)| {
            if k > 0 {
                fact *= k as f64;
            }
            v.norm() / fact
        })
        .collect();
    let scale = coef[1..].iter().cloned().fold(0.0, f64::max);
    coef[1..]
        .iter()
        .take_while(|&&c| c < ORDER_TOL * scale)
        .count() as u32
}

/// Qualitative saddle configuration. `letter` follows the region naming
/// `Ta, Tb, ...` of the family's region diagram.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct RegionLabel {
    pub l: u32,
    pub m: u32,
    pub letter: char,
}

impl RegionLabel {
    pub fn name(&self) -> String {
        format!("T{}", self.letter)
    }

    pub fn description(&self) -> &'static str {
        match (self.l, self.m, self.letter) {
            (1, 1, 'a') => "two-real",
            (1, 1, 'b') => "double-real",
            (1, 1, 'c') => "conjugate-pair",
            (2, 1, 'a') => "three-real",
            (2, 1, 'b') | (2, 1, 'j') => "double-real",
            (2, 1, 'c') | (2, 1, 'i') => "beyond-stokes",
            (2, 1, 'd') | (2, 1, 'h') => "on-stokes",
            (2, 1, 'e') | (2, 1, 'g') => "left-of-stokes",
            (2, 1, 'f') => "anti-stokes",
            (1, 2, 'a') | (1, 2, 'g') => "four-distinct-real",
            (1, 2, 'b') | (1, 2, 'h') => "triple-origin",
            (1, 2, 'c') | (1, 2, 'i') => "beyond-stokes",
            (1, 2, 'd') | (1, 2, 'j') => "on-stokes",
            (1, 2, 'e') | (1, 2, 'k') => "inside-stokes",
            (1, 2, 'f') | (1, 2, 'l') => "double-real",
            _ => "unknown",
        }
    }
}

impl std::fmt::Display for RegionLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "T{}", self.letter)
    }
}

/// Relative tolerance for "on a curve".
const CURVE_TOL: f64 = 1e-9;

fn near(a: f64, b: f64) -> bool {
    (a - b).abs() <= CURVE_TOL * (1.0 + a.abs().max(b.abs()))
}

/// Region of `pt` in the family's diagram of localisation, Stokes and
/// anti-Stokes curves.
pub fn classify_region(fam: &PhaseFamily, pt: OuterPoint) -> Result<RegionLabel> {
    let consts = stokes_constants()?;
    classify_region_with(fam, pt, consts)
}

pub fn classify_region_with(
    fam: &PhaseFamily,
    pt: OuterPoint,
    consts: StokesConstants,
) -> Result<RegionLabel> {
    let (x, y, kappa) = (pt.x, pt.y, fam.kappa);
    let letter = match (fam.l, fam.m) {
        (1, 1) => {
            let disc = x * x + 2.0 * y / kappa;
            if near(x * x, -2.0 * y / kappa) {
                'b'
            } else if disc > 0.0 {
                'a'
            } else {
                'c'
            }
        }
        (2, 1) => {
            let loc = 4.0 / 3.0 * kappa.sqrt() * x.max(0.0).powf(1.5);
            let stokes = (12.0 * kappa).sqrt() * consts.rho_star * (-x).max(0.0).powf(1.5);
            if x > 0.0 {
                if near(y, loc) {
                    'b'
                } else if near(y, -loc) {
                    'j'
                } else if y > loc {
                    'c'
                } else if y < -loc {
                    'i'
                } else {
                    'a'
                }
            } else if x == 0.0 {
                if y > 0.0 {
                    'c'
                } else if y < 0.0 {
                    'i'
                } else {
                    'a'
                }
            } else if near(y, stokes) {
                'd'
            } else if near(y, -stokes) {
                'h'
            } else if y > stokes {
                'c'
            } else if y < -stokes {
                'i'
            } else if near(y, 0.0) {
                'f'
            } else if y > 0.0 {
                'e'
            } else {
                'g'
            }
        }
        (1, 2) => {
            let loc = -kappa * kappa * x.powi(3) / 6.0;
            let stokes = -9.0 * kappa * kappa / 8.0 * consts.mu_star * x.powi(3);
            if x == 0.0 || near(y, 0.0) {
                if x > 0.0 {
                    'b'
                } else if x < 0.0 {
                    'h'
                } else if y > 0.0 {
                    'c'
                } else if y < 0.0 {
                    'i'
                } else {
                    'b'
                }
            } else if x > 0.0 {
                if y > 0.0 {
                    'c'
                } else if near(y, loc) {
                    'l'
                } else if near(y, stokes) {
                    'j'
                } else if y > loc {
                    'a'
                } else if y > stokes {
                    'k'
                } else {
                    'i'
                }
            } else if y < 0.0 {
                'i'
            } else if near(y, loc) {
                'f'
            } else if near(y, stokes) {
                'd'
            } else if y < loc {
                'g'
            } else if y < stokes {
                'e'
            } else {
                'c'
            }
        }
        (l, m) => {
            return Err(Error::InvalidParameter(format!(
                "region classification is only defined for (l,m) in {{(1,1),(2,1),(1,2)}}, got ({l},{m})"
            )))
        }
    };
    Ok(RegionLabel {
        l: fam.l,
        m: fam.m,
        letter,
    })
}

/// Signature tag of one contributing saddle: `O`/`TO` for a simple/triple
/// saddle at the origin (m >= 2 only), `R`/`DR` for real simple/double,
/// `L`/`S`/`B` for complex with `Im phi` below, above or within `tol` of 0.
pub fn saddle_tag(fam: &PhaseFamily, s: &Saddle, tol: f64) -> &'static str {
    if fam.m >= 2 && s.is_origin() {
        return if s.order >= 3 { "TO" } else { "O" };
    }
    if s.is_real() {
        return if s.order >= 2 { "DR" } else { "R" };
    }
    if s.im_phi < -tol {
        "L"
    } else if s.im_phi > tol {
        "S"
    } else {
        "B"
    }
}

const TAG_ORDER: [&str; 7] = ["L", "O", "TO", "R", "DR", "B", "S"];

/// Comma-joined tags in canonical order, e.g. `"L,R,S"`.
pub fn signature(tags: &[&str]) -> String {
    let mut v: Vec<&str> = tags.to_vec();
    v.sort_by_key(|t| TAG_ORDER.iter().position(|o| o == t).unwrap_or(TAG_ORDER.len()));
    v.join(",")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::make_family;

    fn pt(x: f64, y: f64) -> OuterPoint {
        OuterPoint { x, y }
    }

    #[test]
    fn double_saddle_on_parabola() {
        let fam = make_family(1, 1, 0.5).unwrap();
        let s = find_saddles(&fam, pt(2.0, -1.0)).unwrap();
        assert_eq!(s.saddles.len(), 1);
        assert_eq!(s.saddles[0].order, 2);
        assert!((s.saddles[0].location - Complex64::new(1.0, 0.0)).norm() < 1e-6);
        assert_eq!(s.region_label.unwrap().letter, 'b');
    }

    #[test]
    fn origin_orders() {
        let fam = make_family(1, 2, 1.0).unwrap();
        let s = find_saddles(&fam, pt(0.0, 0.0)).unwrap();
        assert_eq!(s.saddles.len(), 1);
        assert_eq!(s.saddles[0].order, 4);
        let s = find_saddles(&fam, pt(1.0, 0.0)).unwrap();
        let o = s.saddles.iter().find(|s| s.is_origin()).unwrap();
        assert_eq!(o.order, 3);
        let s = find_saddles(&fam, pt(1.0, 0.3)).unwrap();
        let o = s.saddles.iter().find(|s| s.is_origin()).unwrap();
        assert_eq!(o.order, 1);
        assert_eq!(s.root_count(), 4);
    }

    #[test]
    fn parabola_saddles_match_formula() {
        let fam = make_family(1, 1, 0.5).unwrap();
        let k = fam.kappa;
        for &(x, y) in &[(0.0, 1.0), (1.5, -2.0), (-0.7, 0.3), (3.0, 4.0)] {
            let s = find_saddles(&fam, pt(x, y)).unwrap();
            let d = Complex64::new(x * x + 2.0 * y / k, 0.0).sqrt();
            for sgn in [1.0, -1.0] {
                let want = k * (x + sgn * d);
                let best = s
                    .saddles
                    .iter()
                    .map(|s| (s.location - want).norm())
                    .fold(f64::INFINITY, f64::min);
                assert!(best < 1e-10, "({x},{y})");
            }
        }
    }

    #[test]
    fn derivative_order_agrees_with_clusters() {
        let fam = make_family(1, 1, 0.5).unwrap();
        assert_eq!(derivative_order(&fam, pt(2.0, -1.0), Complex64::new(1.0, 0.0)), 2);
        let fam = make_family(1, 2, 1.0).unwrap();
        assert_eq!(derivative_order(&fam, pt(0.0, 0.0), Complex64::new(0.0, 0.0)), 4);
        assert_eq!(derivative_order(&fam, pt(1.0, 0.0), Complex64::new(0.0, 0.0)), 3);
    }

    #[test]
    fn stokes_constants_values() {
        let c = stokes_constants().unwrap();
        assert!((c.rho_star - 0.614520361676536).abs() < 1e-12);
        assert!((c.mu_star - 4.069).abs() < 1e-3);
        assert!(stokes_residual(c.mu_star).unwrap().abs() < 1e-10);
    }

    #[test]
    fn named_region_examples() {
        let fam = make_family(1, 1, 0.5).unwrap();
        assert_eq!(classify_region(&fam, pt(1.0, 1.0)).unwrap().description(), "two-real");
        let fam = make_family(2, 1, 1.0 / 12.0).unwrap();
        assert_eq!(classify_region(&fam, pt(-1.0, 0.0)).unwrap().description(), "anti-stokes");
        let fam = make_family(1, 2, 2.0 * 2f64.sqrt() / 3.0).unwrap();
        assert_eq!(
            classify_region(&fam, pt(1.0, -0.05)).unwrap().description(),
            "four-distinct-real"
        );
        let fam = make_family(3, 1, 1.0).unwrap();
        assert!(classify_region(&fam, pt(0.0, 0.0)).is_err());
    }

    #[test]
    fn signature_order() {
        assert_eq!(signature(&["S", "R", "L"]), "L,R,S");
        assert_eq!(signature(&["R", "TO"]), "TO,R");
        assert_eq!(signature(&["DR", "O", "R"]), "O,R,DR");
    }
}
