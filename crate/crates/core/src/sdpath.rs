//! Steepest-descent paths and their assembly into `Gamma_ij`.
//!
//! Paths follow `dtau/ds = +-i conj(phi') / |phi'|` (`+` descends, i.e.
//! raises `Im phi`), integrated by RK4 with a Newton projection back onto the
//! level set `Re phi = const` after every step.
//!
//! Assembly: `Gamma_ij` crosses the hills `H_i, ..., H_(j-1)` (indices mod n)
//! going counter-clockwise at infinity. Each ascent leg `A_k` of a saddle that
//! ends in one of those hills puts the thimble `-D_k + D_(k+1)` of that saddle
//! into the contour. Around an order-`n` saddle the legs alternate
//! `D_0, A_0, D_1, A_1, ...` counter-clockwise with `A_k = D_k + pi/(n+1)`.
//! A leg that runs into another saddle (a Stokes connection) carries on
//! along that saddle's next leg counter-clockwise.

use crate::error::{Error, Result};
use crate::family::{ContourSpec, Direction, OuterPoint, PhaseFamily};
use crate::poly::Poly;
use crate::quadrature::{Contour, Segment};
use crate::saddle::{saddle_tag, saddles_of_poly, signature, Saddle};
use num_complex::Complex64;
use std::f64::consts::PI;

/// Increase of `Im phi` over the anchor value at which a leg is cut.
pub const LEG_DECAY: f64 = 40.0;
/// Radius (relative to `1 + |s|`) inside which a path is taken to have
/// reached saddle `s`.
pub const CONNECT_RADIUS: f64 = 1e-4;
const CONNECT_RE_TOL: f64 = 1e-6;
const MAX_STEPS: usize = 200_000;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Dominance {
    ExponentiallyLarge,
    Neutral,
    ExponentiallySmall,
}

impl Dominance {
    pub fn of(s: &Saddle) -> Self {
        let tol = im_tol(s);
        if s.im_phi < -tol {
            Dominance::ExponentiallyLarge
        } else if s.im_phi > tol {
            Dominance::ExponentiallySmall
        } else {
            Dominance::Neutral
        }
    }
}

/// Tolerance for `Im phi = 0` at a saddle.
pub fn im_tol(s: &Saddle) -> f64 {
    1e-8 * (1.0 + s.re_phi.abs() + s.im_phi.abs())
}

/// A traced leg from `anchor` outwards.
#[derive(Clone, Debug)]
pub struct DescentPath {
    pub anchor: Saddle,
    /// Index `k` of the launch direction.
    pub leg: usize,
    /// Polyline from the anchor outwards, through any connected saddles.
    pub points: Vec<Complex64>,
    /// Valley (descent) or hill (ascent) reached at infinity.
    pub terminal: Direction,
    /// Saddles passed through on Stokes connections.
    pub through: Vec<Saddle>,
}

impl DescentPath {
    pub fn terminal_sector(&self) -> Option<u32> {
        match self.terminal {
            Direction::Valley(j) => Some(j),
            Direction::Hill(_) => None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct ContourAssembly {
    pub spec: ContourSpec,
    /// Legs with their signed multiplicity: `+1` traversed outwards, `-1`
    /// inwards.
    pub segments: Vec<(DescentPath, i32)>,
    pub contributing: Vec<(Saddle, Dominance)>,
}

impl ContourAssembly {
    /// The assembled contour as oriented polylines.
    pub fn contour(&self) -> Contour {
        let mut c = Contour::default();
        for (path, w) in &self.segments {
            let mut pts = thin_polyline(&path.points, 0.05);
            if *w < 0 {
                pts.reverse();
            }
            for _ in 0..w.unsigned_abs() {
                c.extend(Contour::polyline(&pts));
            }
        }
        c
    }

    /// Signature string of the contributing saddles, e.g. `"L,R,S"`.
    pub fn signature(&self, fam: &PhaseFamily) -> String {
        let tags: Vec<&str> = self
            .contributing
            .iter()
            .map(|(s, _)| saddle_tag(fam, s, im_tol(s)))
            .collect();
        signature(&tags)
    }
}

/// Greedy simplification keeping each chord within `rel` of its length from
/// the points it replaces. The integrand is entire, so any chord set joining
/// the same end points gives the same integral; this only trims segments.
fn thin_polyline(pts: &[Complex64], rel: f64) -> Vec<Complex64> {
    if pts.len() <= 2 {
        return pts.to_vec();
    }
    let mut out = vec![pts[0]];
    let mut a = 0;
    while a < pts.len() - 1 {
        let mut best = a + 1;
        for j in a + 2..pts.len() {
            let (p, q) = (pts[a], pts[j]);
            let d = q - p;
            let len = d.norm();
            let ok = pts[a + 1..j].iter().all(|&x| ((x - p) * d.conj()).im.abs() / len <= rel * len);
            if !ok {
                break;
            }
            best = j;
        }
        out.push(pts[best]);
        a = best;
    }
    out
}

/// Local data at a saddle: leading Taylor coefficient and its order.
struct Local {
    saddle: Saddle,
    n: u32,
    arg_c: f64,
}

impl Local {
    fn new(q: &Poly, s: Saddle) -> Self {
        let n = s.order;
        let d = q.derivatives(s.location, n as usize + 1);
        let fact: f64 = (1..=n as u64 + 1).map(|v| v as f64).product();
        let c = d[n as usize + 1] / fact;
        Local {
            saddle: s,
            n,
            arg_c: c.arg(),
        }
    }

    fn descent(&self, k: usize) -> f64 {
        (PI / 2.0 - self.arg_c + 2.0 * PI * k as f64) / (self.n + 1) as f64
    }

    fn ascent(&self, k: usize) -> f64 {
        self.descent(k) + PI / (self.n + 1) as f64
    }

    fn legs(&self) -> usize {
        self.n as usize + 1
    }
}

fn ang_dist(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(2.0 * PI);
    d.min(2.0 * PI - d)
}

struct Tracer<'a> {
    fam: &'a PhaseFamily,
    q: &'a Poly,
    dq: Poly,
    locals: Vec<Local>,
    root_bound: f64,
}

impl<'a> Tracer<'a> {
    fn new(fam: &'a PhaseFamily, q: &'a Poly, saddles: Vec<Saddle>) -> Self {
        let dq = q.derivative();
        // just outside every saddle; the Cauchy bound of `dq` can be far larger
        let root_bound = 1.25 * saddles.iter().map(|s| s.location.norm()).fold(0.0, f64::max) + 1.0;
        let locals = saddles.into_iter().map(|s| Local::new(q, s)).collect();
        Tracer {
            fam,
            q,
            dq,
            locals,
            root_bound,
        }
    }

    fn flow(&self, t: Complex64, sgn: f64) -> Complex64 {
        let d = self.dq.eval(t);
        let a = d.norm();
        if a == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        sgn * I * d.conj() / a
    }

    fn project(&self, mut t: Complex64, level: f64) -> Complex64 {
        for _ in 0..3 {
            let v = self.q.eval(t);
            let d = self.dq.eval(t);
            let n2 = d.norm_sqr();
            if n2 == 0.0 {
                break;
            }
            let dt = -(v.re - level) * d.conj() / n2;
            t += dt;
            if dt.norm() < 1e-16 * (1.0 + t.norm()) {
                break;
            }
        }
        t
    }

    fn nearest_other(&self, t: Complex64, skip: usize) -> f64 {
        self.locals
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != skip)
            .map(|(_, l)| (l.saddle.location - t).norm())
            .fold(f64::INFINITY, f64::min)
    }

    /// Follow the leg leaving saddle `start` at angle `theta`.
    fn trace(&self, start: usize, theta: f64, descent: bool) -> Result<(Vec<Complex64>, Direction, Vec<usize>)> {
        let sgn = if descent { 1.0 } else { -1.0 };
        let anchor = &self.locals[start].saddle;
        let level = anchor.re_phi;
        let im0 = anchor.im_phi;
        let mut cur = start;
        let mut theta = theta;
        let mut pts = vec![anchor.location];
        let mut through = Vec::new();
        let mut steps = 0usize;
        'hop: loop {
            let s = self.locals[cur].saddle.location;
            let gap = self.nearest_other(s, cur);
            let d0 = (1e-3 * (1.0 + s.norm())).min(0.1 * gap);
            let mut t = self.project(s + Complex64::from_polar(d0, theta), level);
            pts.push(t);
            let mut last_im = self.q.eval(t).im;
            loop {
                steps += 1;
                if steps > MAX_STEPS {
                    return Err(Error::Tracing(format!(
                        "leg from saddle {} did not terminate",
                        self.locals[start].saddle.location
                    )));
                }
                // arrival at another saddle
                for (j, l) in self.locals.iter().enumerate() {
                    if j == cur {
                        continue;
                    }
                    let sj = l.saddle.location;
                    if (t - sj).norm() < CONNECT_RADIUS * (1.0 + sj.norm())
                        && (l.saddle.re_phi - level).abs() < CONNECT_RE_TOL * (1.0 + level.abs())
                    {
                        let psi = (t - sj).arg();
                        let k = (0..l.legs())
                            .min_by(|&a, &b| {
                                let fa = if descent { l.ascent(a) } else { l.descent(a) };
                                let fb = if descent { l.ascent(b) } else { l.descent(b) };
                                ang_dist(fa, psi).total_cmp(&ang_dist(fb, psi))
                            })
                            .unwrap_or(0);
                        let incoming = if descent { l.ascent(k) } else { l.descent(k) };
                        theta = incoming + PI / (l.n + 1) as f64;
                        pts.push(sj);
                        through.push(j);
                        cur = j;
                        if through.len() > 4 * self.locals.len() {
                            return Err(Error::Tracing("cyclic Stokes connections".into()));
                        }
                        continue 'hop;
                    }
                }
                let v = self.q.eval(t);
                let gain = if descent { v.im - im0 } else { im0 - v.im };
                if t.norm() > self.root_bound && gain > LEG_DECAY {
                    let dir = self.fam.classify_direction(t.arg());
                    let ok = matches!((dir, descent), (Direction::Valley(_), true) | (Direction::Hill(_), false));
                    if ok {
                        return Ok((pts, dir, through));
                    }
                }
                let (_, d1, d2) = self.q.eval2(t);
                let a1 = d1.norm();
                let mut h = 0.25 * self.nearest_other(t, cur);
                if d2.norm() > 0.0 {
                    h = h.min(0.2 * a1 / d2.norm());
                }
                h = h.min(0.5 * (1.0 + t.norm()));
                if !(h > 1e-13 * (1.0 + t.norm())) {
                    return Err(Error::Tracing(format!("step size underflow at t = {t}")));
                }
                let k1 = self.flow(t, sgn);
                let k2 = self.flow(t + 0.5 * h * k1, sgn);
                let k3 = self.flow(t + 0.5 * h * k2, sgn);
                let k4 = self.flow(t + h * k3, sgn);
                t = self.project(t + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4), level);
                let im = self.q.eval(t).im;
                if (descent && im < last_im - 1e-9 * (1.0 + im.abs()))
                    || (!descent && im > last_im + 1e-9 * (1.0 + im.abs()))
                {
                    return Err(Error::Tracing(format!("Im phi not monotone near t = {t}")));
                }
                last_im = im;
                pts.push(t);
            }
        }
    }
}

fn dedup_saddles(v: &mut Vec<usize>) {
    v.sort_unstable();
    v.dedup();
}

/// The `n + 1` descent legs of saddle `s` at outer point `pt`.
pub fn trace_descent(fam: &PhaseFamily, pt: OuterPoint, s: &Saddle) -> Result<Vec<DescentPath>> {
    let q = fam.phase_poly(pt.x, pt.y);
    let saddles = saddles_of_poly(&q, true)?;
    let idx = saddles
        .iter()
        .position(|t| (t.location - s.location).norm() <= 1e-9 * (1.0 + s.location.norm()))
        .ok_or_else(|| Error::InvalidParameter(format!("{} is not a saddle at this point", s.location)))?;
    let tr = Tracer::new(fam, &q, saddles);
    let l = &tr.locals[idx];
    (0..l.legs())
        .map(|k| {
            let (points, terminal, through) = tr.trace(idx, l.descent(k), true)?;
            Ok(DescentPath {
                anchor: l.saddle,
                leg: k,
                points,
                terminal,
                through: through.iter().map(|&j| tr.locals[j].saddle).collect(),
            })
        })
        .collect()
}

/// Steepest-descent realisation of `Gamma_ij` at outer point `pt`.
pub fn assemble_contour(fam: &PhaseFamily, pt: OuterPoint, spec: &ContourSpec) -> Result<ContourAssembly> {
    let q = fam.phase_poly(pt.x, pt.y);
    assemble_impl(fam, &q, spec, true)
}

/// As [`assemble_contour`] for an arbitrary phase polynomial whose leading
/// term is that of `fam`.
pub fn assemble_for_poly(fam: &PhaseFamily, q: &Poly, spec: &ContourSpec) -> Result<ContourAssembly> {
    let real = q.coeffs.iter().all(|c| c.im == 0.0);
    assemble_impl(fam, q, spec, real)
}

fn assemble_impl(fam: &PhaseFamily, q: &Poly, spec: &ContourSpec, real: bool) -> Result<ContourAssembly> {
    spec.validate(fam)?;
    let n = fam.n_sectors;
    let saddles = saddles_of_poly(q, real)?;
    let tr = Tracer::new(fam, q, saddles);
    let crossed = |h: u32| -> bool {
        // hills H_i .. H_(j-1) counter-clockwise
        let mut k = spec.start_sector;
        while k != spec.end_sector {
            if k == h {
                return true;
            }
            k = k % n + 1;
        }
        false
    };
    let mut coeffs: Vec<Vec<i32>> = tr.locals.iter().map(|l| vec![0; l.legs()]).collect();
    for (a, l) in tr.locals.iter().enumerate() {
        for k in 0..l.legs() {
            let (_, end, _) = tr.trace(a, l.ascent(k), false)?;
            match end {
                Direction::Hill(h) if crossed(h) => {
                    coeffs[a][k] -= 1;
                    coeffs[a][(k + 1) % l.legs()] += 1;
                }
                Direction::Hill(_) => {}
                Direction::Valley(v) => {
                    return Err(Error::Assembly(format!("ascent leg ended in valley S_{v}")));
                }
            }
        }
    }
    let mut segments = Vec::new();
    let mut contributing: Vec<usize> = Vec::new();
    let mut boundary = vec![0i32; n as usize + 1];
    for (a, l) in tr.locals.iter().enumerate() {
        if coeffs[a].iter().any(|&c| c != 0) {
            contributing.push(a);
        }
        for k in 0..l.legs() {
            let w = coeffs[a][k];
            if w == 0 {
                continue;
            }
            let (points, terminal, through) = tr.trace(a, l.descent(k), true)?;
            let v = match terminal {
                Direction::Valley(v) => v,
                Direction::Hill(h) => {
                    return Err(Error::Assembly(format!("descent leg ended on hill H_{h}")))
                }
            };
            boundary[v as usize] += w;
            contributing.extend(through.iter().cloned());
            segments.push((
                DescentPath {
                    anchor: l.saddle,
                    leg: k,
                    points,
                    terminal,
                    through: through.iter().map(|&j| tr.locals[j].saddle).collect(),
                },
                w,
            ));
        }
    }
    let mut want = vec![0i32; n as usize + 1];
    want[spec.end_sector as usize] += 1;
    want[spec.start_sector as usize] -= 1;
    if boundary != want {
        return Err(Error::Assembly(format!(
            "legs end in valleys {:?}, expected {:?}",
            &boundary[1..],
            &want[1..]
        )));
    }
    dedup_saddles(&mut contributing);
    Ok(ContourAssembly {
        spec: *spec,
        segments,
        contributing: contributing
            .into_iter()
            .map(|j| {
                let s = tr.locals[j].saddle;
                (s, Dominance::of(&s))
            })
            .collect(),
    })
}

/// Polyline length, for diagnostics.
pub fn polyline_length(c: &Contour) -> f64 {
    c.segments
        .iter()
        .map(|s| match s {
            Segment::Line { a, b } => (b - a).norm(),
            Segment::Arc { radius, theta0, theta1, .. } => radius * (theta1 - theta0).abs(),
        })
        .sum()
}
