//! Contour integrals `A(X, Y) = int_Gamma F(t) exp(i p(X, Y, t)) dt`.
//!
//! The integrand is handled as its logarithm so that panels far above or
//! below the f64 range still combine correctly. Contours are lists of finite
//! segments; infinite rays are truncated once the integrand has fallen
//! `RAY_DECAY` below its running maximum.

use crate::error::{Error, Result};
use crate::family::{ContourSpec, InnerPoint, OuterPoint, PhaseFamily, PoleSide};
use crate::gk::{gauss_legendre, k21};
use crate::logc::LogComplex;
use crate::poly::Poly;
use crate::saddle::find_saddles;
use num_complex::Complex64;
use std::collections::BinaryHeap;
use std::f64::consts::PI;
use std::sync::{Arc, OnceLock};

/// Log-magnitude drop at which a ray is cut.
pub const RAY_DECAY: f64 = 45.0;
/// Radius of the semicircle taking the contour round a pole at `t = 0`.
pub const POLE_RADIUS: f64 = 1e-3;
/// Padding of the real interval spanned by the saddles.
pub const HUB_PAD: f64 = 0.5;
pub const DEFAULT_MAX_EVALS: usize = 2_000_000;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Tabulated kernel `K(sigma)` defining `F(t) = int exp(i t sigma) K(sigma) dsigma`
/// (trapezoidal rule on the table).
#[derive(Clone, Debug)]
pub struct FourierKernel {
    pub sigma: Vec<f64>,
    pub values: Vec<Complex64>,
}

impl FourierKernel {
    pub fn eval(&self, t: Complex64) -> Complex64 {
        let mut s = Complex64::new(0.0, 0.0);
        for i in 1..self.sigma.len() {
            let h = self.sigma[i] - self.sigma[i - 1];
            let a = (I * t * self.sigma[i - 1]).exp() * self.values[i - 1];
            let b = (I * t * self.sigma[i]).exp() * self.values[i];
            s += 0.5 * h * (a + b);
        }
        s
    }
}

/// The prefactor `F(t)`.
#[derive(Clone, Debug)]
pub enum Prefactor {
    Unity,
    /// `exp(c t)`.
    ExpLinear(Complex64),
    /// `exp(i sigma t^beta)` with the cut of `t^beta` on `arg t = -pi/2`;
    /// `reflected` evaluates at `-t` instead.
    ExpPower { sigma: f64, beta: f64, reflected: bool },
    /// Pekeris caret function; simple pole at the origin.
    Pekeris,
    FourierKernel(Arc<FourierKernel>),
}

impl Prefactor {
    pub fn pole_at_origin(&self) -> bool {
        matches!(self, Prefactor::Pekeris)
    }

    /// `t^beta` with arguments in `(-pi/2, 3pi/2]`.
    fn power(t: Complex64, beta: f64) -> Complex64 {
        let r = t.norm();
        if r == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        let mut a = t.arg();
        if a <= -PI / 2.0 {
            a += 2.0 * PI;
        }
        Complex64::from_polar(r.powf(beta), a * beta)
    }

    /// `ln F(t)` for the non-polynomial part; the polynomial parts are folded
    /// into the phase by [`effective_phase`].
    fn ln_extra(&self, t: Complex64) -> Complex64 {
        match self {
            Prefactor::Unity | Prefactor::ExpLinear(_) => Complex64::new(0.0, 0.0),
            Prefactor::ExpPower {
                sigma,
                beta,
                reflected,
            } => {
                let s = if *reflected { -t } else { t };
                I * *sigma * Self::power(s, *beta)
            }
            Prefactor::Pekeris => crate::bvp::pekeris_caret_ln(t),
            Prefactor::FourierKernel(k) => LogComplex::from_complex(k.eval(t)).ln(),
        }
    }

    pub fn eval(&self, t: Complex64) -> Complex64 {
        match self {
            Prefactor::ExpLinear(c) => (c * t).exp(),
            _ => LogComplex::exp(self.ln_extra(t)).to_complex(),
        }
    }
}

/// The polynomial `q` with `F(t) exp(i p) = extra(t) exp(i q)`.
pub fn effective_phase(fam: &PhaseFamily, x: f64, y: f64, f: &Prefactor) -> Poly {
    let mut p = fam.phase_poly(x, y);
    if let Prefactor::ExpLinear(c) = f {
        // exp(c t) = exp(i (-i c) t)
        if p.coeffs.len() < 2 {
            p.coeffs.resize(2, Complex64::new(0.0, 0.0));
        }
        p.coeffs[1] += -I * c;
        p = Poly::new(p.coeffs);
    }
    p
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Segment {
    Line { a: Complex64, b: Complex64 },
    /// `center + radius e^{i theta}` for theta from `theta0` to `theta1`.
    Arc {
        center: Complex64,
        radius: f64,
        theta0: f64,
        theta1: f64,
    },
}

impl Segment {
    /// Point and `dt/du` at `u` in `[-1, 1]`.
    fn at(&self, u: f64) -> (Complex64, Complex64) {
        match *self {
            Segment::Line { a, b } => {
                let h = 0.5 * (b - a);
                (0.5 * (a + b) + h * u, h)
            }
            Segment::Arc {
                center,
                radius,
                theta0,
                theta1,
            } => {
                let h = 0.5 * (theta1 - theta0);
                let th = 0.5 * (theta0 + theta1) + h * u;
                let e = Complex64::from_polar(radius, th);
                (center + e, I * e * h)
            }
        }
    }

    pub fn start(&self) -> Complex64 {
        self.at(-1.0).0
    }

    pub fn end(&self) -> Complex64 {
        self.at(1.0).0
    }
}

/// Oriented segments; consecutive segments need not join (a steepest-descent
/// contour is a signed sum of legs).
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Contour {
    pub segments: Vec<Segment>,
}

impl Contour {
    /// Polyline through `pts`, oriented from first to last.
    pub fn polyline(pts: &[Complex64]) -> Self {
        Contour {
            segments: pts
                .windows(2)
                .filter(|w| w[0] != w[1])
                .map(|w| Segment::Line { a: w[0], b: w[1] })
                .collect(),
        }
    }

    pub fn extend(&mut self, other: Contour) {
        self.segments.extend(other.segments);
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PathIntegral {
    pub value: LogComplex,
    /// Relative a-posteriori error estimate.
    pub est_error: f64,
    pub n_evals: usize,
}

#[derive(Clone, Copy, Debug)]
struct Panel {
    seg: usize,
    u0: f64,
    u1: f64,
    value: LogComplex,
    log_err: f64,
    log_abs: f64,
}

impl PartialEq for Panel {
    fn eq(&self, o: &Self) -> bool {
        self.log_err == o.log_err
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, o: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Panel {
    fn cmp(&self, o: &Self) -> std::cmp::Ordering {
        self.log_err.total_cmp(&o.log_err)
    }
}

fn log_sum_exp<I: Iterator<Item = f64>>(it: I) -> f64 {
    let v: Vec<f64> = it.collect();
    let m = v.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return m;
    }
    m + v.iter().map(|x| (x - m).exp()).sum::<f64>().ln()
}

fn check_finite(w: Complex64, t: Complex64) -> Result<()> {
    if w.re.is_nan() || w.im.is_nan() || w.re == f64::INFINITY {
        return Err(Error::InvalidParameter(format!(
            "integrand is not finite at t = {t}"
        )));
    }
    Ok(())
}

fn gk_panel<F>(f: &F, segs: &[Segment], seg: usize, u0: f64, u1: f64) -> Result<Panel>
where
    F: Fn(Complex64) -> Complex64,
{
    let rule = k21();
    let c = 0.5 * (u0 + u1);
    let h = 0.5 * (u1 - u0);
    let mut logs = Vec::with_capacity(2 * rule.nodes.len());
    for &x in &rule.nodes {
        let us: &[f64] = if x == 0.0 { &[0.0] } else { &[x, -x] };
        for &s in us {
            let (t, dt) = segs[seg].at(c + h * s);
            let w = f(t) + LogComplex::from_complex(dt * h).ln();
            check_finite(w, t)?;
            logs.push(w);
        }
    }
    let m = logs.iter().map(|w| w.re).fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return Ok(Panel {
            seg,
            u0,
            u1,
            value: LogComplex::ZERO,
            log_err: f64::NEG_INFINITY,
            log_abs: f64::NEG_INFINITY,
        });
    }
    let mut k = Complex64::new(0.0, 0.0);
    let mut g = Complex64::new(0.0, 0.0);
    let mut a = 0.0;
    let mut idx = 0;
    for ((&x, &wk), &wg) in rule
        .nodes
        .iter()
        .zip(&rule.kronrod_weights)
        .zip(&rule.gauss_weights)
    {
        let cnt = if x == 0.0 { 1 } else { 2 };
        for _ in 0..cnt {
            let e = (logs[idx] - m).exp();
            k += e * wk;
            g += e * wg;
            a += e.norm() * wk;
            idx += 1;
        }
    }
    let err = (k - g).norm();
    Ok(Panel {
        seg,
        u0,
        u1,
        value: LogComplex::from_scaled(k, m),
        log_err: if err > 0.0 { err.ln() + m } else { f64::NEG_INFINITY },
        log_abs: a.ln() + m,
    })
}

fn gl_rule(n: usize) -> &'static (Vec<f64>, Vec<f64>) {
    static R16: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    static R32: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    match n {
        16 => R16.get_or_init(|| gauss_legendre(16)),
        _ => R32.get_or_init(|| gauss_legendre(32)),
    }
}

/// Fixed 32-point Gauss rule on an arc, with the 16-point rule as the error
/// reference.
fn arc_panel<F>(f: &F, seg: &Segment) -> Result<(LogComplex, f64, f64)>
where
    F: Fn(Complex64) -> Complex64,
{
    let eval = |n: usize| -> Result<(Vec<Complex64>, Vec<f64>)> {
        let (xs, ws) = gl_rule(n);
        let mut logs = Vec::with_capacity(n);
        for &u in xs {
            let (t, dt) = seg.at(u);
            let w = f(t) + LogComplex::from_complex(dt).ln();
            check_finite(w, t)?;
            logs.push(w);
        }
        Ok((logs, ws.clone()))
    };
    let (l32, w32) = eval(32)?;
    let (l16, w16) = eval(16)?;
    let m = l32
        .iter()
        .chain(&l16)
        .map(|w| w.re)
        .fold(f64::NEG_INFINITY, f64::max);
    let s32: Complex64 = l32.iter().zip(&w32).map(|(l, w)| (l - m).exp() * w).sum();
    let s16: Complex64 = l16.iter().zip(&w16).map(|(l, w)| (l - m).exp() * w).sum();
    let a: f64 = l32.iter().zip(&w32).map(|(l, w)| (l - m).exp().norm() * w).sum();
    let err = (s32 - s16).norm();
    Ok((
        LogComplex::from_scaled(s32, m),
        if err > 0.0 { err.ln() + m } else { f64::NEG_INFINITY },
        a.ln() + m,
    ))
}

/// Globally adaptive Gauss–Kronrod integration of `exp(lnf(t)) dt` along
/// `contour`, targeting relative error `tol`.
pub fn integrate_log<F>(lnf: &F, contour: &Contour, tol: f64, max_evals: usize) -> Result<PathIntegral>
where
    F: Fn(Complex64) -> Complex64,
{
    let segs = &contour.segments;
    let mut heap = BinaryHeap::new();
    let mut fixed: Vec<(LogComplex, f64, f64)> = Vec::new();
    let mut n_evals = 0usize;
    for (i, s) in segs.iter().enumerate() {
        match s {
            Segment::Arc { .. } => {
                fixed.push(arc_panel(lnf, s)?);
                n_evals += 48;
            }
            Segment::Line { .. } => {
                let n0 = if segs.len() > 8 { 1 } else { 4 };
                for j in 0..n0 {
                    let u0 = -1.0 + 2.0 * j as f64 / n0 as f64;
                    let u1 = -1.0 + 2.0 * (j + 1) as f64 / n0 as f64;
                    heap.push(gk_panel(lnf, segs, i, u0, u1)?);
                    n_evals += 21;
                }
            }
        }
    }
    let totals = |heap: &BinaryHeap<Panel>, fixed: &[(LogComplex, f64, f64)]| {
        let v: LogComplex = heap
            .iter()
            .map(|p| p.value)
            .chain(fixed.iter().map(|f| f.0))
            .sum();
        let e = log_sum_exp(heap.iter().map(|p| p.log_err).chain(fixed.iter().map(|f| f.1)));
        let a = log_sum_exp(heap.iter().map(|p| p.log_abs).chain(fixed.iter().map(|f| f.2)));
        (v, e, a)
    };
    let ln_tol = tol.ln();
    let ln_round = (50.0 * f64::EPSILON).ln();
    loop {
        let (v, e, a) = totals(&heap, &fixed);
        let rel = if v.is_zero() {
            if e == f64::NEG_INFINITY { 0.0 } else { f64::INFINITY }
        } else {
            (e - v.log_mag).exp()
        };
        if e == f64::NEG_INFINITY || e <= ln_tol + v.log_mag {
            return Ok(PathIntegral {
                value: v,
                est_error: rel,
                n_evals,
            });
        }
        let round_limited = e <= ln_round + a;
        let refinable = heap.iter().any(|p| p.u1 - p.u0 > 1e-12);
        if round_limited || n_evals >= max_evals || !refinable {
            return Err(Error::QuadratureNonConvergence {
                est_error: rel,
                n_evals,
                partial: v,
            });
        }
        let batch = (heap.len() / 8).max(1);
        let mut frozen = Vec::new();
        for _ in 0..batch {
            let p = match heap.pop() {
                Some(p) => p,
                None => break,
            };
            if p.u1 - p.u0 <= 1e-12 {
                frozen.push(p);
                continue;
            }
            let mid = 0.5 * (p.u0 + p.u1);
            heap.push(gk_panel(lnf, segs, p.seg, p.u0, mid)?);
            heap.push(gk_panel(lnf, segs, p.seg, mid, p.u1)?);
            n_evals += 42;
        }
        for p in frozen {
            fixed.push((p.value, p.log_err, p.log_abs));
        }
    }
}

/// Length along direction `theta` from `origin` after which `Re lnf` has
/// dropped `RAY_DECAY` below its running maximum while decreasing and
/// `|t| > r_min`.
pub fn ray_length<F>(lnf: &F, origin: Complex64, theta: f64, r_min: f64) -> Result<f64>
where
    F: Fn(Complex64) -> Complex64,
{
    let d = Complex64::from_polar(1.0, theta);
    let mut s = 0.0;
    let mut prev = lnf(origin).re;
    let mut best = prev;
    for _ in 0..200_000 {
        let step = 0.01 * (1.0 + s);
        s += step;
        let t = origin + d * s;
        let g = lnf(t).re;
        if g.is_nan() {
            return Err(Error::InvalidParameter(format!("integrand undefined at t = {t}")));
        }
        best = best.max(g);
        if t.norm() > r_min && g < best - RAY_DECAY && g < prev {
            return Ok(s);
        }
        prev = g;
    }
    Err(Error::InvalidParameter(format!(
        "integrand does not decay along arg t = {theta:.6}; not a valid sector"
    )))
}

/// Contour realisation used for `A_ij`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PathKind {
    /// Steepest descent when the prefactor allows it, else straight rays.
    Auto,
    StraightRays,
    SteepestDescent,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadratureResult {
    pub value: LogComplex,
    pub est_error: f64,
    pub n_evals: usize,
    pub path_used: PathKind,
}

/// Integrand `ln[F(t) exp(i p)]` at inner coordinates `(X, Y)`.
pub struct Integrand {
    pub phase: Poly,
    pub prefactor: Prefactor,
}

impl Integrand {
    pub fn new(fam: &PhaseFamily, x: f64, y: f64, f: &Prefactor) -> Self {
        Integrand {
            phase: effective_phase(fam, x, y, f),
            prefactor: f.clone(),
        }
    }

    pub fn ln(&self, t: Complex64) -> Complex64 {
        I * self.phase.eval(t) + self.prefactor.ln_extra(t)
    }
}

/// Ray from `S_i` into a real interval, along it, and out to `S_j`, with a
/// semicircular detour round `t = 0` when the prefactor has a pole there.
pub fn straight_ray_contour(
    fam: &PhaseFamily,
    spec: &ContourSpec,
    x: f64,
    y: f64,
    integrand: &Integrand,
) -> Result<Contour> {
    let pole = integrand.prefactor.pole_at_origin();
    let saddles = find_saddles(fam, OuterPoint { x, y })?;
    let mut lo: f64 = 0.0;
    let mut hi: f64 = 0.0;
    let mut any = pole;
    for s in &saddles.saddles {
        if s.is_real() {
            if !any {
                lo = s.location.re;
                hi = s.location.re;
                any = true;
            }
            lo = lo.min(s.location.re);
            hi = hi.max(s.location.re);
        }
    }
    let (a, b) = (lo - HUB_PAD, hi + HUB_PAD);
    let (ti, tj) = (fam.sector_bisector(spec.start_sector), fam.sector_bisector(spec.end_sector));
    let (hi_hub, hj_hub) = if ti.cos() <= tj.cos() { (a, b) } else { (b, a) };
    let lnf = |t: Complex64| integrand.ln(t);
    let rb = integrand.phase.derivative().root_bound().max(1.0);
    let li = ray_length(&lnf, Complex64::new(hi_hub, 0.0), ti, rb)?;
    let lj = ray_length(&lnf, Complex64::new(hj_hub, 0.0), tj, rb)?;
    let c = |v: f64| Complex64::new(v, 0.0);
    let mut segs = vec![Segment::Line {
        a: c(hi_hub) + Complex64::from_polar(li, ti),
        b: c(hi_hub),
    }];
    if pole {
        let d = (hj_hub - hi_hub).signum();
        let r = POLE_RADIUS;
        let theta0 = if d > 0.0 { PI } else { 0.0 };
        let theta1 = match spec.pole_side {
            PoleSide::Right => theta0 + PI,
            PoleSide::Left => theta0 - PI,
            PoleSide::None => {
                return Err(Error::InvalidParameter(
                    "prefactor has a pole at t = 0; choose pole side left or right".into(),
                ))
            }
        };
        segs.push(Segment::Line { a: c(hi_hub), b: c(-d * r) });
        segs.push(Segment::Arc {
            center: c(0.0),
            radius: r,
            theta0,
            theta1,
        });
        segs.push(Segment::Line { a: c(d * r), b: c(hj_hub) });
    } else {
        segs.push(Segment::Line { a: c(hi_hub), b: c(hj_hub) });
    }
    segs.push(Segment::Line {
        a: c(hj_hub),
        b: c(hj_hub) + Complex64::from_polar(lj, tj),
    });
    Ok(Contour { segments: segs })
}

fn check_spec(fam: &PhaseFamily, spec: &ContourSpec, f: &Prefactor, tol: f64) -> Result<()> {
    spec.validate(fam)?;
    if !(1e-12..=1e-3).contains(&tol) {
        return Err(Error::InvalidParameter(format!(
            "tol must lie in [1e-12, 1e-3], got {tol}"
        )));
    }
    if spec.pole_side != PoleSide::None && !f.pole_at_origin() {
        return Err(Error::InvalidParameter(
            "pole side given but the prefactor has no pole at the origin".into(),
        ));
    }
    if let Prefactor::ExpPower { beta, .. } = f {
        if !(*beta > 0.0 && *beta < fam.n_sectors as f64) {
            return Err(Error::InvalidParameter(format!(
                "exp_power needs 0 < beta < {}, got {beta}",
                fam.n_sectors
            )));
        }
    }
    Ok(())
}

/// `A_ij(X, Y)` for prefactor `f`. The value depends on `(X, Y)` only; `k`
/// enters through the caller's choice of inner coordinates.
#[allow(non_snake_case)]
pub fn evaluate_A(
    fam: &PhaseFamily,
    spec: &ContourSpec,
    f: &Prefactor,
    inner: InnerPoint,
    tol: f64,
) -> Result<QuadratureResult> {
    evaluate_A_with(fam, spec, f, inner, tol, PathKind::Auto)
}

/// As [`evaluate_A`], but near zeros of `A` accepts a partial result whose
/// absolute error estimate is below `tol * scale`.
#[allow(non_snake_case)]
pub fn evaluate_A_abs(
    fam: &PhaseFamily,
    spec: &ContourSpec,
    f: &Prefactor,
    inner: InnerPoint,
    tol: f64,
    scale: f64,
) -> Result<LogComplex> {
    match evaluate_A(fam, spec, f, inner, tol) {
        Ok(r) => Ok(r.value),
        Err(Error::QuadratureNonConvergence { est_error, partial, .. }) if est_error * partial.abs() <= tol * scale => {
            Ok(partial)
        }
        Err(e) => Err(e),
    }
}

#[allow(non_snake_case)]
pub fn evaluate_A_with(
    fam: &PhaseFamily,
    spec: &ContourSpec,
    f: &Prefactor,
    inner: InnerPoint,
    tol: f64,
    kind: PathKind,
) -> Result<QuadratureResult> {
    check_spec(fam, spec, f, tol)?;
    if !(inner.k > 0.0) {
        return Err(Error::InvalidParameter(format!("k must be positive, got {}", inner.k)));
    }
    let integrand = Integrand::new(fam, inner.X, inner.Y, f);
    let lnf = |t: Complex64| integrand.ln(t);
    let sd_ok = matches!(f, Prefactor::Unity | Prefactor::ExpLinear(_));
    let try_sd = match kind {
        PathKind::SteepestDescent => {
            if !sd_ok {
                return Err(Error::InvalidParameter(
                    "steepest-descent paths need a polynomial phase (unity or exp_linear prefactor)".into(),
                ));
            }
            true
        }
        PathKind::Auto => sd_ok,
        PathKind::StraightRays => false,
    };
    if try_sd {
        let sd = crate::sdpath::assemble_for_poly(fam, &integrand.phase, spec)
            .and_then(|asm| integrate_log(&lnf, &asm.contour(), tol, DEFAULT_MAX_EVALS));
        match sd {
            Ok(r) => {
                return Ok(QuadratureResult {
                    value: r.value,
                    est_error: r.est_error,
                    n_evals: r.n_evals,
                    path_used: PathKind::SteepestDescent,
                })
            }
            Err(e) if kind == PathKind::SteepestDescent => return Err(e),
            Err(_) => {}
        }
    }
    let contour = straight_ray_contour(fam, spec, inner.X, inner.Y, &integrand)?;
    let r = integrate_log(&lnf, &contour, tol, DEFAULT_MAX_EVALS)?;
    Ok(QuadratureResult {
        value: r.value,
        est_error: r.est_error,
        n_evals: r.n_evals,
        path_used: PathKind::StraightRays,
    })
}
