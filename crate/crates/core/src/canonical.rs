//! Canonical integrals and closed forms: Airy-type `A_21`, `A_32`, the
//! cuspoids `C4` (Pearcey) and `C5` (swallowtail), and the Fresnel integral.

use crate::airy::{airy_scaled, compute_airy_zero, AIRY_ZEROS};
use crate::error::{Error, Result};
use crate::family::PhaseFamily;
use crate::logc::LogComplex;
use crate::poly::Poly;
use crate::quadrature::{integrate_log, ray_length, Contour, PathIntegral, Segment, DEFAULT_MAX_EVALS};
use num_complex::Complex64;
use std::f64::consts::PI;

pub use crate::airy::{airy_ai, airy_ai_prime};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Largest coefficient magnitude accepted by the cuspoid integrals.
pub const CUSPOID_RANGE: f64 = 50.0;

#[derive(Clone, Debug, PartialEq)]
pub struct AiryZeroTable {
    /// `eta_0 > eta_1 > ...`
    pub zeros: Vec<f64>,
}

impl AiryZeroTable {
    /// First `n` zeros; the shipped table is extended by Newton iteration.
    pub fn new(n: usize) -> Self {
        let zeros = (0..n)
            .map(|i| if i < AIRY_ZEROS.len() { AIRY_ZEROS[i] } else { compute_airy_zero(i) })
            .collect();
        AiryZeroTable { zeros }
    }

    pub fn get(&self, n: usize) -> Option<f64> {
        self.zeros.get(n).copied()
    }
}

/// `eta_n`, from the table when available.
pub fn airy_zero(n: usize) -> f64 {
    if n < AIRY_ZEROS.len() {
        AIRY_ZEROS[n]
    } else {
        compute_airy_zero(n)
    }
}

fn ai_log(z: Complex64) -> LogComplex {
    airy_scaled(z).ai_log()
}

/// `2 pi (2k)^(1/3) exp(-i k (XY + k X^3/3)) Ai[-(2k)^(1/3)(Y + k X^2/2)]`.
#[allow(non_snake_case)]
pub fn closed_form_A21_log(kappa: f64, X: f64, Y: f64) -> LogComplex {
    let c = (2.0 * kappa).cbrt();
    let z = Complex64::new(-c * (Y + kappa * X * X / 2.0), 0.0);
    let phase = -kappa * (X * Y + kappa * X.powi(3) / 3.0);
    ai_log(z) * LogComplex::new((2.0 * PI * c).ln(), phase)
}

#[allow(non_snake_case)]
pub fn closed_form_A21(kappa: f64, X: f64, Y: f64) -> Complex64 {
    closed_form_A21_log(kappa, X, Y).to_complex()
}

/// `e^{2 pi i/3} 2 pi (2k)^(1/3) exp(-i k (XY + k X^3/3)) Ai[e^{-i pi/3}(2k)^(1/3)(Y + k X^2/2)]`.
#[allow(non_snake_case)]
pub fn closed_form_A32_log(kappa: f64, X: f64, Y: f64) -> LogComplex {
    let c = (2.0 * kappa).cbrt();
    let z = Complex64::from_polar(c * (Y + kappa * X * X / 2.0), -PI / 3.0);
    let phase = -kappa * (X * Y + kappa * X.powi(3) / 3.0) + 2.0 * PI / 3.0;
    ai_log(z) * LogComplex::new((2.0 * PI * c).ln(), phase)
}

#[allow(non_snake_case)]
pub fn closed_form_A32(kappa: f64, X: f64, Y: f64) -> Complex64 {
    closed_form_A32_log(kappa, X, Y).to_complex()
}

/// `int exp(i (a_1 t + ... + a_(d-2) t^(d-2) + t^d)) dt` along the real axis
/// with both tails turned into the adjacent decay sectors of `exp(i t^d)`.
/// `coeffs[k]` multiplies `t^(k+1)`. `tilt` shifts both tail angles (within
/// the sectors) and exists for invariance checks.
pub fn cuspoid(coeffs: &[f64], d: usize, tol: f64, tilt: f64) -> Result<PathIntegral> {
    if coeffs.iter().any(|c| !(c.abs() <= CUSPOID_RANGE)) {
        return Err(Error::InvalidParameter(format!(
            "cuspoid coefficients must satisfy |a| <= {CUSPOID_RANGE}"
        )));
    }
    if tilt.abs() >= PI / (2.0 * d as f64) {
        return Err(Error::InvalidParameter("tail tilt leaves the decay sector".into()));
    }
    let mut c = vec![Complex64::new(0.0, 0.0); d + 1];
    for (k, &a) in coeffs.iter().enumerate() {
        c[k + 1] = Complex64::new(a, 0.0);
    }
    c[d] = Complex64::new(1.0, 0.0);
    let phase = Poly::new(c);
    let lnf = |t: Complex64| I * phase.eval(t);
    // real stationary points fix the central segment
    let crit = phase.derivative().roots()?;
    let (mut lo, mut hi) = (0.0f64, 0.0f64);
    for r in &crit {
        if r.im.abs() <= 1e-8 * (1.0 + r.norm()) {
            lo = lo.min(r.re);
            hi = hi.max(r.re);
        }
    }
    let (a, b) = (lo - 1.0, hi + 1.0);
    let sector = PI / (2.0 * d as f64);
    let th_plus = sector + tilt;
    let th_minus = if d % 2 == 0 { PI + sector - tilt } else { PI - sector + tilt };
    let rb = phase.derivative().root_bound();
    let la = ray_length(&lnf, Complex64::new(a, 0.0), th_minus, rb)?;
    let lb = ray_length(&lnf, Complex64::new(b, 0.0), th_plus, rb)?;
    let ca = Complex64::new(a, 0.0);
    let cb = Complex64::new(b, 0.0);
    let contour = Contour {
        segments: vec![
            Segment::Line { a: ca + Complex64::from_polar(la, th_minus), b: ca },
            Segment::Line { a: ca, b: cb },
            Segment::Line { a: cb, b: cb + Complex64::from_polar(lb, th_plus) },
        ],
    };
    integrate_log(&lnf, &contour, tol, DEFAULT_MAX_EVALS)
}

/// `C4(a1, a2) = int exp(i (a1 t + a2 t^2 + t^4)) dt`.
pub fn cuspoid_c4(a1: f64, a2: f64) -> Result<Complex64> {
    Ok(cuspoid(&[a1, a2], 4, 1e-12, 0.0)?.value.to_complex())
}

/// Pearcey function `P(X, Y) = int exp(i (Y t + X t^2 + t^4)) dt = C4(Y, X)`.
#[allow(non_snake_case)]
pub fn pearcey(X: f64, Y: f64) -> Result<Complex64> {
    cuspoid_c4(Y, X)
}

/// `C5(a1, a2, a3) = int exp(i (a1 t + a2 t^2 + a3 t^3 + t^5)) dt`.
pub fn swallowtail_c5(a1: f64, a2: f64, a3: f64) -> Result<Complex64> {
    Ok(cuspoid(&[a1, a2, a3], 5, 1e-12, 0.0)?.value.to_complex())
}

/// `A_31` of the `(2,1)` family through the cusp integral.
#[allow(non_snake_case)]
pub fn closed_form_A31_cusp(fam: &PhaseFamily, X: f64, Y: f64) -> Result<Complex64> {
    check_family(fam, 2, 1)?;
    let a = fam.alpha;
    let c = cuspoid_c4(-2f64.sqrt() * a.powf(-0.25) * Y, -a.powf(-0.5) * X)?;
    Ok((a / 4.0).powf(-0.25) * c)
}

fn check_family(fam: &PhaseFamily, l: u32, m: u32) -> Result<()> {
    if fam.l != l || fam.m != m {
        return Err(Error::InvalidParameter(format!(
            "expected the ({l},{m}) family, got ({},{})",
            fam.l, fam.m
        )));
    }
    Ok(())
}

/// Coefficients reducing the `(1,2)` phase to swallowtail form.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SwallowtailCoeffs {
    pub a0: f64,
    pub a1: f64,
    pub a2: f64,
    pub a3: f64,
}

impl SwallowtailCoeffs {
    #[allow(non_snake_case)]
    pub fn new(alpha: f64, X: f64, Y: f64) -> Self {
        let a = alpha;
        let s = 5.0 / (2.0 * a);
        SwallowtailCoeffs {
            a0: -(X.powi(5) + 40.0 * a * a * X * X * Y) / (640.0 * a.powi(4)),
            a1: -s.powf(0.2) * (3.0 * X.powi(4) + 64.0 * a * a * X * Y) / (128.0 * a.powi(3)),
            a2: -s.powf(0.4) * (X.powi(3) + 8.0 * a * a * Y) / (8.0 * a * a),
            a3: -s.powf(0.6) * X * X / (4.0 * a),
        }
    }
}

/// `A_31` of the `(1,2)` family: `(2 alpha/5)^(-1/5) e^{i a0} C5(a1, a2, a3)`.
#[allow(non_snake_case)]
pub fn closed_form_A31_quintic(fam: &PhaseFamily, X: f64, Y: f64) -> Result<Complex64> {
    check_family(fam, 1, 2)?;
    let c = SwallowtailCoeffs::new(fam.alpha, X, Y);
    let v = swallowtail_c5(c.a1, c.a2, c.a3)?;
    Ok((2.0 * fam.alpha / 5.0).powf(-0.2) * Complex64::from_polar(1.0, c.a0) * v)
}

/// Complementary error function for complex argument: Taylor series of
/// `erf` for `|z| <= 3`, Laplace continued fraction beyond (`Re z >= 0`),
/// and `erfc(-z) = 2 - erfc(z)`.
pub fn erfc(z: Complex64) -> Complex64 {
    if z.norm() <= 3.0 {
        let z2 = z * z;
        let mut term = z;
        let mut sum = z;
        for n in 1..200 {
            term = -term * z2 / n as f64;
            let add = term / (2 * n + 1) as f64;
            sum += add;
            if add.norm() < 1e-17 * sum.norm() {
                break;
            }
        }
        return 1.0 - sum * (2.0 / PI.sqrt());
    }
    if z.re < 0.0 {
        return 2.0 - erfc(-z);
    }
    let mut f = z;
    for k in (1..=120).rev() {
        f = z + (k as f64 / 2.0) / f;
    }
    (-z * z).exp() / (PI.sqrt() * f)
}

/// `Fr(w) = (1/2 pi i) int_Gamma exp(i(-X t^2/2 - Y t)) / t dt` with
/// `w = Y / sqrt(2X)` and `Gamma: t = e^{3 i pi/4} s`, `s` running along the
/// real line from `-inf` to `+inf` below `s = 0` (so the indentation sits on
/// the `e^{i pi/4}` side of the origin). Equals `erfc(-e^{-i pi/4} w) / 2`:
/// `Fr(+inf) = 1`, `Fr(-inf) = 0`, `Fr(0) = 1/2`.
pub fn fresnel_fr(w: f64) -> Complex64 {
    0.5 * erfc(-Complex64::from_polar(w, -PI / 4.0))
}
