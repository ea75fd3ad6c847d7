//! Boundary-value constructions: modal prefactors on the parabola, the
//! Pekeris caret function, the Fock–Leontovich tangent-ray solution and the
//! asymptotically modal exponent for the cubic family.

use crate::airy::{airy_ai_prime, airy_scaled, compute_airy_zero, AIRY_ZEROS};
use crate::error::{Error, Result};
use crate::family::{make_family, ContourSpec, InnerPoint, PhaseFamily, PoleSide};
use crate::logc::LogComplex;
use crate::quadrature::{evaluate_A_abs, integrate_log, ray_length, Contour, Prefactor, Segment};
use num_complex::Complex64;
use std::f64::consts::PI;
use std::sync::OnceLock;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// `e^{2 pi i/3}`.
fn omega() -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * PI / 3.0)
}

/// Zeros used by the residue series.
const N_RESIDUES: usize = 400;

/// `(eta_n, Ai'(eta_n)^2)`.
fn residue_table() -> &'static [(f64, f64)] {
    static TABLE: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    TABLE.get_or_init(|| {
        (0..N_RESIDUES)
            .map(|n| {
                let eta = if n < AIRY_ZEROS.len() { AIRY_ZEROS[n] } else { compute_airy_zero(n) };
                let d = airy_ai_prime(Complex64::new(eta, 0.0)).re;
                (eta, d * d)
            })
            .collect()
    })
}

/// How `p^(t)` is evaluated.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PekerisRep {
    /// Real-line Fourier integral; `Im t < 0` only.
    Fourier,
    /// Two rays from the origin plus the explicit pole; any `t != 0`.
    FullPlane,
    /// Same two rays on a fixed angle grid with precomputed Airy ratios at
    /// composite Gauss–Legendre nodes; `|t| <= TABLE_T_MAX`.
    Tabulated,
    /// Sum over the poles at `sigma = e^{i pi/3} |eta_n|`; used where
    /// `Re(e^{-i pi/6} t)` is large enough for fast convergence.
    Residues,
}

/// Largest `|t|` served by the tabulated rays.
pub const TABLE_T_MAX: f64 = 12.0;
const TABLE_ANGLES: usize = 24;
const TABLE_MARGIN: f64 = 0.08;
const TABLE_PANEL: f64 = 0.5;
const TABLE_GL: usize = 16;
const TABLE_LEN: f64 = 90.0;

/// Nodes `s_j` and `ln(w_j e^{i theta} R(s_j))` along one ray.
struct RayTable {
    nodes: Vec<Complex64>,
    lnw: Vec<Complex64>,
}

impl RayTable {
    fn build(theta: f64, first: bool) -> Self {
        let (x, w) = crate::gk::gauss_legendre(TABLE_GL);
        let dir = Complex64::from_polar(1.0, theta);
        let (num, den) = ratio_args(first);
        let mut nodes = Vec::new();
        let mut lnw = Vec::new();
        let panels = (TABLE_LEN / TABLE_PANEL) as usize;
        for p in 0..panels {
            let a = p as f64 * TABLE_PANEL;
            for (xi, wi) in x.iter().zip(&w) {
                let r = a + 0.5 * TABLE_PANEL * (xi + 1.0);
                let s = dir * r;
                nodes.push(s);
                lnw.push((0.5 * TABLE_PANEL * wi * dir).ln() + ln_ai(num * s) - ln_ai(den * s));
            }
        }
        RayTable { nodes, lnw }
    }

    /// `int exp(i t s) R(s) ds` along the ray, or `None` if the integrand has
    /// not decayed within the table.
    fn integrate(&self, t: Complex64) -> Option<LogComplex> {
        let mut m = f64::NEG_INFINITY;
        let logs: Vec<Complex64> = self.nodes.iter().zip(&self.lnw).map(|(s, l)| I * t * s + l).collect();
        for l in &logs {
            m = m.max(l.re);
        }
        let tail = logs[logs.len() - TABLE_GL..].iter().map(|l| l.re).fold(f64::NEG_INFINITY, f64::max);
        if !(tail < m - 45.0) {
            return None;
        }
        let sum: Complex64 = logs.iter().filter(|l| l.re > m - 60.0).map(|l| (l - m).exp()).sum();
        Some(LogComplex::from_scaled(sum, m))
    }
}

/// `(a, b)` with `R(s) = Ai(a s) / Ai(b s)` for the first or second ray.
fn ratio_args(first: bool) -> (Complex64, Complex64) {
    let w = omega();
    if first {
        (w.conj(), w)
    } else {
        (Complex64::new(1.0, 0.0), w)
    }
}

fn table_angle(k: usize, first: bool) -> f64 {
    let (lo, hi) = if first { (PI / 3.0, PI) } else { (-PI / 3.0, PI / 3.0) };
    let (lo, hi) = (lo + TABLE_MARGIN, hi - TABLE_MARGIN);
    lo + (hi - lo) * k as f64 / (TABLE_ANGLES - 1) as f64
}

fn ray_table(k: usize, first: bool) -> &'static RayTable {
    static TABLES: OnceLock<Vec<OnceLock<RayTable>>> = OnceLock::new();
    let all = TABLES.get_or_init(|| (0..2 * TABLE_ANGLES).map(|_| OnceLock::new()).collect());
    let idx = k + if first { TABLE_ANGLES } else { 0 };
    all[idx].get_or_init(|| RayTable::build(table_angle(k, first), first))
}

/// Table ray with the lowest cost for `t`.
fn best_table(t: Complex64, first: bool) -> &'static RayTable {
    let centre = if first { 2.0 * PI / 3.0 } else { 0.0 };
    let k = (0..TABLE_ANGLES)
        .min_by(|&a, &b| {
            let ca = angle_cost(t, table_angle(a, first), centre);
            let cb = angle_cost(t, table_angle(b, first), centre);
            ca.total_cmp(&cb)
        })
        .unwrap_or(0);
    ray_table(k, first)
}

/// Evaluator for the Pekeris caret function
/// `p^(t) = e^{i pi/3}/(2 pi) int exp(i t s) Ai(s)/Ai(e^{2 pi i/3} s) ds`.
#[derive(Clone, Copy, Debug)]
pub struct PekerisEvaluator {
    pub tol: f64,
    /// Lower bound on `Re(e^{-i pi/6} t)` above which the residue series is used.
    pub residue_threshold: f64,
}

impl Default for PekerisEvaluator {
    fn default() -> Self {
        PekerisEvaluator {
            tol: 1e-12,
            residue_threshold: 1.0,
        }
    }
}

impl PekerisEvaluator {
    pub fn choose(&self, t: Complex64) -> PekerisRep {
        if (Complex64::from_polar(1.0, -PI / 6.0) * t).re >= self.residue_threshold {
            PekerisRep::Residues
        } else if t.norm() <= TABLE_T_MAX {
            PekerisRep::Tabulated
        } else {
            PekerisRep::FullPlane
        }
    }

    /// Chosen representation, falling back to adaptive rays when a table
    /// ray is too short for `t`.
    pub fn eval_log(&self, t: Complex64) -> Result<LogComplex> {
        match self.eval_with(t, self.choose(t)) {
            Err(Error::InvalidParameter(_)) if self.choose(t) == PekerisRep::Tabulated => {
                self.eval_with(t, PekerisRep::FullPlane)
            }
            r => r,
        }
    }

    pub fn eval(&self, t: Complex64) -> Result<Complex64> {
        Ok(self.eval_log(t)?.to_complex())
    }

    pub fn eval_with(&self, t: Complex64, rep: PekerisRep) -> Result<LogComplex> {
        if !(t.norm() >= 1e-8) || !t.re.is_finite() || !t.im.is_finite() {
            return Err(Error::InvalidParameter(format!("Pekeris caret needs |t| >= 1e-8, got {t}")));
        }
        match rep {
            PekerisRep::Fourier => self.fourier(t),
            PekerisRep::FullPlane => self.full_plane(t),
            PekerisRep::Tabulated => self.tabulated(t),
            PekerisRep::Residues => self.residues(t),
        }
    }

    fn ray(&self, lnf: &dyn Fn(Complex64) -> Complex64, theta: f64) -> Result<LogComplex> {
        let zero = Complex64::new(0.0, 0.0);
        let len = ray_length(&lnf, zero, theta, 1.0)?;
        let c = Contour {
            segments: vec![Segment::Line {
                a: zero,
                b: Complex64::from_polar(len, theta),
            }],
        };
        lenient(integrate_log(&lnf, &c, self.tol, 4_000_000), self.tol)
    }

    fn fourier(&self, t: Complex64) -> Result<LogComplex> {
        if !(t.im < 0.0) {
            return Err(Error::InvalidParameter("Fourier representation needs Im t < 0".into()));
        }
        let w = omega();
        let lnf = |s: Complex64| I * t * s + ln_ai(s) - ln_ai(w * s);
        let v = self.ray(&lnf, 0.0)? - self.ray(&lnf, PI)?;
        Ok(v.mul_complex(Complex64::from_polar(1.0 / (2.0 * PI), PI / 3.0)))
    }

    fn full_plane(&self, t: Complex64) -> Result<LogComplex> {
        let w = omega();
        let wb = w.conj();
        let th1 = best_angle(t, PI / 3.0, PI, 2.0 * PI / 3.0);
        let th2 = best_angle(t, -PI / 3.0, PI / 3.0, 0.0);
        let f1 = |s: Complex64| I * t * s + ln_ai(wb * s) - ln_ai(w * s);
        let f2 = |s: Complex64| I * t * s + ln_ai(s) - ln_ai(w * s);
        let i1 = self.ray(&f1, th1)?.mul_complex(w);
        let i2 = self.ray(&f2, th2)?.mul_complex(wb);
        let pole = LogComplex::from_complex(1.0 / (2.0 * PI * I * t));
        Ok(pole - (i1 + i2).scale(-(2.0 * PI).ln()))
    }

    fn tabulated(&self, t: Complex64) -> Result<LogComplex> {
        let short = || Error::InvalidParameter(format!("tabulated Pekeris rays too short at t = {t}"));
        let w = omega();
        let i1 = best_table(t, true).integrate(t).ok_or_else(short)?.mul_complex(w);
        let i2 = best_table(t, false).integrate(t).ok_or_else(short)?.mul_complex(w.conj());
        let pole = LogComplex::from_complex(1.0 / (2.0 * PI * I * t));
        Ok(pole - (i1 + i2).scale(-(2.0 * PI).ln()))
    }

    fn residues(&self, t: Complex64) -> Result<LogComplex> {
        let w = Complex64::from_polar(1.0, -PI / 6.0) * t;
        if !(w.re > 0.0) {
            return Err(Error::InvalidParameter(
                "residue series needs -pi/3 < arg t < 2pi/3".into(),
            ));
        }
        let mut sum = LogComplex::ZERO;
        for &(eta, d2) in residue_table() {
            let term = LogComplex::exp(w * eta - d2.ln());
            sum = sum + term;
            if term.log_mag < sum.log_mag - 40.0 {
                return Ok(sum.mul_complex(Complex64::from_polar(1.0 / (2.0 * PI), -2.0 * PI / 3.0)));
            }
        }
        Err(Error::InvalidParameter(format!(
            "residue series for the Pekeris function did not converge at t = {t}"
        )))
    }
}

/// Accept a roundoff-limited estimate that is still well inside `1e3 tol`.
fn lenient(r: Result<crate::quadrature::PathIntegral>, tol: f64) -> Result<LogComplex> {
    match r {
        Ok(p) => Ok(p.value),
        Err(Error::QuadratureNonConvergence { est_error, partial, .. }) if est_error <= 1e3 * tol => Ok(partial),
        Err(e) => Err(e),
    }
}

fn ln_ai(z: Complex64) -> Complex64 {
    airy_scaled(z).ai_log().ln()
}

/// Peak of `|exp(i t s)| exp(-(4/3) Re (s e^{-i centre})^{3/2})` along the
/// ray at `theta`, plus a mild penalty on the length needed to decay.
fn angle_cost(t: Complex64, theta: f64, centre: f64) -> f64 {
    let g = -(t * Complex64::from_polar(1.0, theta)).im;
    let c = (4.0 / 3.0) * (1.5 * (theta - centre)).cos();
    if c <= 0.0 {
        return f64::INFINITY;
    }
    let peak = if g > 0.0 { 4.0 * g.powi(3) / (27.0 * c * c) } else { 0.0 };
    // length where c r^{3/2} - g r reaches 45
    let mut r: f64 = 1.0;
    for _ in 0..60 {
        r = ((45.0 + g * r).max(0.0) / c).powf(2.0 / 3.0).max(1.0);
    }
    peak + 0.01 * r
}

fn best_angle(t: Complex64, lo: f64, hi: f64, centre: f64) -> f64 {
    let n = 200;
    (1..n)
        .map(|k| lo + (hi - lo) * k as f64 / n as f64)
        .min_by(|&a, &b| angle_cost(t, a, centre).total_cmp(&angle_cost(t, b, centre)))
        .unwrap_or(0.5 * (lo + hi))
}

/// `p^(t)` with the default evaluator.
pub fn pekeris_caret(t: Complex64) -> Result<Complex64> {
    PekerisEvaluator::default().eval(t)
}

/// `ln p^(t)`; NaN on failure so that quadrature reports the bad node.
pub fn pekeris_caret_ln(t: Complex64) -> Complex64 {
    match PekerisEvaluator::default().eval_log(t) {
        Ok(v) => v.ln(),
        Err(_) => Complex64::new(f64::NAN, 0.0),
    }
}

/// Leading large-`|t|` behaviour for `-pi/3 < arg t < 2pi/3`.
pub fn pekeris_asymptotic_upper(t: Complex64) -> LogComplex {
    let (eta, d2) = residue_table()[0];
    LogComplex::exp(Complex64::from_polar(1.0, -PI / 6.0) * t * eta)
        .mul_complex(Complex64::from_polar(1.0 / (2.0 * PI * d2), -2.0 * PI / 3.0))
}

/// Leading large-`|t|` behaviour for `2pi/3 < arg t < 5pi/3`.
pub fn pekeris_asymptotic_lower(t: Complex64) -> LogComplex {
    LogComplex::exp(-I * t * t * t / 12.0)
        .mul_complex((-t).sqrt() / (2.0 * PI.sqrt()) * Complex64::from_polar(1.0, PI / 4.0))
}

/// `F^(sigma) = e^{i pi/3} Ai(sigma) / (2 pi Ai(e^{2 pi i/3} sigma))`, the
/// Fourier kernel of `p^`.
pub fn fourier_prefactor_check(sigma: f64) -> Complex64 {
    let s = Complex64::new(sigma, 0.0);
    let v = LogComplex::exp(ln_ai(s) - ln_ai(omega() * s));
    v.to_complex() * Complex64::from_polar(1.0 / (2.0 * PI), PI / 3.0)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoundaryCondition {
    Dirichlet,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WaveKind {
    WhisperingGallery,
    Creeping,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ModalSpec {
    pub family: PhaseFamily,
    pub boundary_condition: BoundaryCondition,
    pub mode_index: usize,
    pub wave_kind: WaveKind,
}

impl ModalSpec {
    /// Contour paired with the modal prefactor.
    pub fn contour(&self) -> ContourSpec {
        match self.wave_kind {
            WaveKind::WhisperingGallery => ContourSpec::new(2, 1),
            WaveKind::Creeping => ContourSpec::new(3, 2),
        }
    }
}

/// Exponential prefactor shifting the Airy argument of `A_21` (whispering
/// gallery) or `A_32` (creeping) onto the zero `eta_n` along the parabola.
pub fn modal_prefactor_parabola(spec: &ModalSpec) -> Result<Prefactor> {
    let fam = &spec.family;
    if fam.l != 1 || fam.m != 1 {
        return Err(Error::InvalidParameter("modal prefactors need the (1,1) family".into()));
    }
    let eta = crate::canonical::airy_zero(spec.mode_index);
    let s = (2.0 * fam.kappa).powf(-1.0 / 3.0) * eta;
    let c = match spec.wave_kind {
        WaveKind::WhisperingGallery => I * s,
        WaveKind::Creeping => Complex64::from_polar(s, -PI / 6.0),
    };
    Ok(Prefactor::ExpLinear(c))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldPart {
    Total,
    Scattered,
}

/// Family `(1,1)`, `kappa = 1/2`, so the phase is `-Y t - X t^2/2 + t^3/3`.
pub fn fock_leontovich_family() -> PhaseFamily {
    make_family(1, 1, 0.5).expect("fixed family")
}

/// Tangent-ray field `int_{Gamma_32} p^(t) exp(i(-Y t - X t^2/2 + t^3/3)) dt`;
/// the total field passes right of the pole, the scattered field left.
#[allow(non_snake_case)]
pub fn fock_leontovich(X: f64, Y: f64, which: FieldPart) -> Result<Complex64> {
    fock_leontovich_tol(X, Y, which, 1e-10)
}

#[allow(non_snake_case)]
pub fn fock_leontovich_tol(X: f64, Y: f64, which: FieldPart, tol: f64) -> Result<Complex64> {
    let fam = fock_leontovich_family();
    let side = match which {
        FieldPart::Total => PoleSide::Right,
        FieldPart::Scattered => PoleSide::Left,
    };
    // the total field vanishes on the boundary; judge it against the unit
    // incident amplitude
    let v = evaluate_A_abs(
        &fam,
        &ContourSpec::with_pole(3, 2, side),
        &Prefactor::Pekeris,
        InnerPoint { X, Y, k: 1.0 },
        tol,
        1.0,
    )?;
    Ok(v.to_complex())
}

/// Modal field at `(X, Y)`; absolute accuracy `tol` near the boundary,
/// where the field vanishes.
#[allow(non_snake_case)]
pub fn modal_field(spec: &ModalSpec, X: f64, Y: f64, k: f64, tol: f64) -> Result<Complex64> {
    let f = modal_prefactor_parabola(spec)?;
    let v = evaluate_A_abs(&spec.family, &spec.contour(), &f, InnerPoint { X, Y, k }, tol, 1.0)?;
    Ok(v.to_complex())
}

/// Saddles `tau_pm` of the total field under the upper-sector asymptotics
/// of `p^`: roots of `tau^2 - x tau - y - k^{-2/3} e^{i pi/3} eta_0 = 0`.
pub fn shifted_saddles_creeping(x: f64, y: f64, k: f64) -> [Complex64; 2] {
    let d = Complex64::new(x * x + 4.0 * y, 0.0)
        + 4.0 * k.powf(-2.0 / 3.0) * Complex64::from_polar(1.0, PI / 3.0) * AIRY_ZEROS[0];
    let r = d.sqrt();
    [(x + r) / 2.0, (x - r) / 2.0]
}

/// Saddles under the lower-sector asymptotics: `(2/3)(x +- sqrt(x^2 + 3y))`.
pub fn shifted_saddles_reflected(x: f64, y: f64) -> [Complex64; 2] {
    let r = Complex64::new(x * x + 3.0 * y, 0.0).sqrt();
    [(2.0 / 3.0) * (x + r), (2.0 / 3.0) * (x - r)]
}

/// `(sigma, beta)` for `F(t) ~ exp(i sigma t^beta)` making `A_21` of the
/// `(1,2)` family asymptotically vanish on the cubic as `X -> +inf`.
pub fn modal_exponent_cubic(fam: &PhaseFamily, n: usize) -> Result<(f64, f64)> {
    if fam.l != 1 || fam.m != 2 {
        return Err(Error::InvalidParameter("cubic modal exponent needs the (1,2) family".into()));
    }
    let eta = crate::canonical::airy_zero(n);
    Ok((3.0 * 2f64.sqrt() * eta / (5.0 * fam.kappa.cbrt()), 5.0 / 3.0))
}

/// Prefactor for the outgoing (`A_21`) or, reflected, incoming (`A_32`) wave.
pub fn cubic_modal_prefactor(fam: &PhaseFamily, n: usize, incoming: bool) -> Result<Prefactor> {
    let (sigma, beta) = modal_exponent_cubic(fam, n)?;
    Ok(Prefactor::ExpPower {
        sigma,
        beta,
        reflected: incoming,
    })
}
